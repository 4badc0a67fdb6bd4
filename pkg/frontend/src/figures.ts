/**
 * Figure builders: estimate-trajectory panel grids, output-vs-reference
 * overlays, and dense-vs-sparse magnitude comparisons, all from the
 * experiment CSV artifacts. Every figure is a Scene; the caller picks SVG
 * or PNG rendering.
 */

import type { CheckpointRow, RunRow } from "./csv.js";
import { extent, formatTick, linearScale, niceTicks, padded } from "./scale.js";
import { Scene } from "./svg.js";

const SPARSE_COLOR = "#1f77b4";
const LS_COLOR = "#888";
const TRUTH_COLOR = "#d62728";
const REF_COLOR = "#d62728";

export interface PanelLayout {
  columns?: number;
  panelWidth?: number;
  panelHeight?: number;
}

function groupByCoordinate(rows: CheckpointRow[]): Map<number, CheckpointRow[]> {
  const byCoord = new Map<number, CheckpointRow[]>();
  for (const row of rows) {
    const list = byCoord.get(row.coordIndex) ?? [];
    list.push(row);
    byCoord.set(row.coordIndex, list);
  }
  for (const list of byCoord.values()) {
    list.sort((a, b) => a.n - b.n);
  }
  return byCoord;
}

function drawAxes(
  scene: Scene,
  x0: number,
  y0: number,
  w: number,
  h: number,
  xTicks: Array<[number, string]>,
  yTicks: Array<[number, string]>,
): void {
  const axes = scene.group("axes");
  axes.elements.push({ kind: "rect", x: x0, y: y0, width: w, height: h, stroke: "#555" });
  for (const [px, label] of xTicks) {
    axes.elements.push({ kind: "line", x1: px, y1: y0 + h, x2: px, y2: y0 + h + 3, stroke: "#555" });
    axes.elements.push({ kind: "text", x: px, y: y0 + h + 12, text: label, size: 8, anchor: "middle", fill: "#555" });
  }
  for (const [py, label] of yTicks) {
    axes.elements.push({ kind: "line", x1: x0 - 3, y1: py, x2: x0, y2: py, stroke: "#555" });
    axes.elements.push({ kind: "text", x: x0 - 5, y: py + 3, text: label, size: 8, anchor: "end", fill: "#555" });
  }
}

/** Grid of per-coordinate estimate trajectories (dense, sparse, truth). */
export function figureTrajectories(rows: CheckpointRow[], layout: PanelLayout = {}): Scene {
  if (rows.length === 0) {
    throw new Error("no checkpoint rows to plot");
  }
  const byCoord = groupByCoordinate(rows);
  const coords = [...byCoord.keys()].sort((a, b) => a - b);
  const columns = layout.columns ?? Math.ceil(Math.sqrt(coords.length));
  const rowsOfPanels = Math.ceil(coords.length / columns);
  const panelW = layout.panelWidth ?? 210;
  const panelH = layout.panelHeight ?? 150;
  const marginLeft = 46;
  const marginTop = 34;
  const gapX = 52;
  const gapY = 40;

  const scene = new Scene(
    marginLeft + columns * (panelW + gapX),
    marginTop + rowsOfPanels * (panelH + gapY) + 14,
  );
  const header = scene.group("header");
  header.elements.push({
    kind: "text",
    x: scene.width / 2,
    y: 18,
    text: "estimate trajectories (dense=dashed, sparse=solid, truth=red)",
    size: 11,
    anchor: "middle",
  });

  coords.forEach((coord, index) => {
    const series = byCoord.get(coord)!;
    const col = index % columns;
    const rowIdx = Math.floor(index / columns);
    const x0 = marginLeft + col * (panelW + gapX);
    const y0 = marginTop + rowIdx * (panelH + gapY);

    const ns = series.map((r) => r.n);
    const values = series.flatMap((r) =>
      r.truth === undefined ? [r.ls, r.sparse] : [r.ls, r.sparse, r.truth],
    );
    const xScale = linearScale(extent(ns), [x0, x0 + panelW]);
    const yScale = linearScale(padded(extent(values)), [y0 + panelH, y0]);

    const panel = scene.group("panel");
    panel.elements.push({
      kind: "text",
      x: x0 + panelW / 2,
      y: y0 - 4,
      text: `coordinate ${coord}`,
      size: 9,
      anchor: "middle",
    });
    if (series[0].truth !== undefined) {
      const ty = yScale.map(series[0].truth);
      panel.elements.push({ kind: "line", x1: x0, y1: ty, x2: x0 + panelW, y2: ty, stroke: TRUTH_COLOR });
    }
    panel.elements.push({
      kind: "polyline",
      points: series.map((r) => [xScale.map(r.n), yScale.map(r.ls)]),
      stroke: LS_COLOR,
      dash: true,
    });
    panel.elements.push({
      kind: "polyline",
      points: series.map((r) => [xScale.map(r.n), yScale.map(r.sparse)]),
      stroke: SPARSE_COLOR,
    });

    const xTicks: Array<[number, string]> = [ns[0], ns[ns.length - 1]].map((n) => [
      xScale.map(n),
      String(n),
    ]);
    const yTicks: Array<[number, string]> = niceTicks(yScale.domain[0], yScale.domain[1], 3).map(
      (v) => [yScale.map(v), formatTick(v)],
    );
    drawAxes(scene, x0, y0, panelW, panelH, xTicks, yTicks);
  });
  return scene;
}

/** Output and reference overlaid along one closed-loop run. */
export function figureTracking(rows: RunRow[]): Scene {
  if (rows.length === 0) {
    throw new Error("no run rows to plot");
  }
  const width = 860;
  const height = 420;
  const x0 = 60;
  const y0 = 50;
  const panelW = width - x0 - 30;
  const panelH = height - y0 - 60;
  const scene = new Scene(width, height);

  const header = scene.group("header");
  header.elements.push({
    kind: "text",
    x: width / 2,
    y: 20,
    text: "output (blue) vs reference (red) under regulation",
    size: 12,
    anchor: "middle",
  });
  header.elements.push({
    kind: "text",
    x: width / 2,
    y: 36,
    text: `final tracking loss ${formatTick(rows[rows.length - 1].trackingLoss)}`,
    size: 10,
    anchor: "middle",
    fill: "#555",
  });

  const ks = rows.map((r) => r.k);
  const values = rows.flatMap((r) => [r.y, r.yStar]);
  const xScale = linearScale(extent(ks), [x0, x0 + panelW]);
  const yScale = linearScale(padded(extent(values)), [y0 + panelH, y0]);

  const panel = scene.group("panel");
  panel.elements.push({
    kind: "polyline",
    points: rows.map((r) => [xScale.map(r.k), yScale.map(r.yStar)]),
    stroke: REF_COLOR,
    dash: true,
  });
  panel.elements.push({
    kind: "polyline",
    points: rows.map((r) => [xScale.map(r.k), yScale.map(r.y)]),
    stroke: SPARSE_COLOR,
  });

  const xTicks: Array<[number, string]> = niceTicks(xScale.domain[0], xScale.domain[1], 6).map(
    (v) => [xScale.map(v), formatTick(v)],
  );
  const yTicks: Array<[number, string]> = niceTicks(yScale.domain[0], yScale.domain[1], 5).map(
    (v) => [yScale.map(v), formatTick(v)],
  );
  drawAxes(scene, x0, y0, panelW, panelH, xTicks, yTicks);
  return scene;
}

/** Dense vs sparse magnitudes per coordinate at the final checkpoint. */
export function figureCompare(rows: CheckpointRow[]): Scene {
  if (rows.length === 0) {
    throw new Error("no checkpoint rows to plot");
  }
  const finalN = Math.max(...rows.map((r) => r.n));
  const finalRows = rows.filter((r) => r.n === finalN).sort((a, b) => a.coordIndex - b.coordIndex);
  const floor = 1e-12;
  const logs = finalRows.flatMap((r) => [
    Math.log10(Math.max(Math.abs(r.ls), floor)),
    Math.log10(Math.max(Math.abs(r.sparse), floor)),
  ]);

  const width = Math.max(520, 70 + finalRows.length * 46);
  const height = 400;
  const x0 = 64;
  const y0 = 56;
  const panelW = width - x0 - 24;
  const panelH = height - y0 - 70;
  const scene = new Scene(width, height);

  const header = scene.group("header");
  header.elements.push({
    kind: "text",
    x: width / 2,
    y: 20,
    text: `estimate magnitudes at N=${finalN} (gray=dense, blue=sparse, log10)`,
    size: 11,
    anchor: "middle",
  });
  header.elements.push({
    kind: "text",
    x: width / 2,
    y: 36,
    text: "exact zeros plotted at the 1e-12 floor",
    size: 9,
    anchor: "middle",
    fill: "#555",
  });

  const yDomain = padded([Math.min(...logs, Math.log10(floor)), Math.max(...logs, 0)], 0.05);
  const yScale = linearScale(yDomain, [y0 + panelH, y0]);
  const slot = panelW / finalRows.length;
  const barW = Math.min(14, slot / 3);
  const baseline = yScale.map(Math.log10(floor));

  const panel = scene.group("panel");
  finalRows.forEach((row, i) => {
    const cx = x0 + slot * (i + 0.5);
    const lsTop = yScale.map(Math.log10(Math.max(Math.abs(row.ls), floor)));
    const spTop = yScale.map(Math.log10(Math.max(Math.abs(row.sparse), floor)));
    panel.elements.push({
      kind: "rect",
      x: cx - barW - 1,
      y: lsTop,
      width: barW,
      height: Math.max(baseline - lsTop, 1),
      fill: LS_COLOR,
    });
    panel.elements.push({
      kind: "rect",
      x: cx + 1,
      y: spTop,
      width: barW,
      height: Math.max(baseline - spTop, 1),
      fill: SPARSE_COLOR,
    });
    panel.elements.push({
      kind: "text",
      x: cx,
      y: y0 + panelH + 14,
      text: String(row.coordIndex),
      size: 9,
      anchor: "middle",
      fill: "#555",
    });
    if (row.inSupportZero) {
      panel.elements.push({
        kind: "text",
        x: cx + 1 + barW / 2,
        y: baseline + 26,
        text: "0",
        size: 9,
        anchor: "middle",
        fill: SPARSE_COLOR,
      });
    }
  });

  const yTicks: Array<[number, string]> = niceTicks(yDomain[0], yDomain[1], 6).map((v) => [
    yScale.map(v),
    formatTick(v),
  ]);
  drawAxes(scene, x0, y0, panelW, panelH, [], yTicks);
  const footer = scene.group("footer");
  footer.elements.push({
    kind: "text",
    x: width / 2,
    y: y0 + panelH + 32,
    text: "coordinate index",
    size: 10,
    anchor: "middle",
    fill: "#555",
  });
  return scene;
}
