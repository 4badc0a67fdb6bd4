/**
 * A tiny retained scene of plot primitives, rendered to SVG text or handed
 * to the rasterizer. Keeping the scene explicit lets both output formats
 * share one figure-building code path.
 */

export interface RectEl {
  kind: "rect";
  x: number;
  y: number;
  width: number;
  height: number;
  fill?: string;
  stroke?: string;
}

export interface LineEl {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke: string;
  dash?: boolean;
}

export interface PolylineEl {
  kind: "polyline";
  points: Array<[number, number]>;
  stroke: string;
  dash?: boolean;
}

export interface TextEl {
  kind: "text";
  x: number;
  y: number;
  text: string;
  size: number;
  anchor: "start" | "middle" | "end";
  fill?: string;
}

export type Element = RectEl | LineEl | PolylineEl | TextEl;

export interface Group {
  cls: string;
  elements: Element[];
}

export class Scene {
  readonly width: number;
  readonly height: number;
  readonly groups: Group[] = [];

  constructor(width: number, height: number) {
    this.width = Math.round(width);
    this.height = Math.round(height);
  }

  group(cls: string): Group {
    const g: Group = { cls, elements: [] };
    this.groups.push(g);
    return g;
  }
}

function num(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function renderElement(el: Element): string {
  switch (el.kind) {
    case "rect": {
      const fill = el.fill ?? "none";
      const stroke = el.stroke ? ` stroke="${el.stroke}"` : "";
      return `<rect x="${num(el.x)}" y="${num(el.y)}" width="${num(el.width)}" height="${num(el.height)}" fill="${fill}"${stroke}/>`;
    }
    case "line": {
      const dash = el.dash ? ' stroke-dasharray="4 3"' : "";
      return `<line x1="${num(el.x1)}" y1="${num(el.y1)}" x2="${num(el.x2)}" y2="${num(el.y2)}" stroke="${el.stroke}"${dash} fill="none"/>`;
    }
    case "polyline": {
      const dash = el.dash ? ' stroke-dasharray="4 3"' : "";
      const pts = el.points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
      return `<polyline points="${pts}" stroke="${el.stroke}"${dash} fill="none"/>`;
    }
    case "text": {
      const fill = el.fill ?? "#222";
      return `<text x="${num(el.x)}" y="${num(el.y)}" font-size="${el.size}" text-anchor="${el.anchor}" fill="${fill}" font-family="sans-serif">${escapeXml(el.text)}</text>`;
    }
  }
}

export function renderSvg(scene: Scene): string {
  const body = scene.groups
    .map((g) => {
      const inner = g.elements.map(renderElement).join("\n    ");
      return `  <g class="${g.cls}">\n    ${inner}\n  </g>`;
    })
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">`,
    `  <rect x="0" y="0" width="${scene.width}" height="${scene.height}" fill="white"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
