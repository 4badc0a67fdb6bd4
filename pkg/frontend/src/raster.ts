/**
 * Software rasterizer for the plot scene plus a minimal PNG encoder.
 *
 * SVG is the primary output format; PNG is a convenience rasterization with
 * no external dependencies: Bresenham lines, filled rectangles, and a small
 * built-in 5x7 bitmap font (digits, symbols, and the letters the figure
 * labels use; anything else renders as a hollow box).
 */

import { deflateSync } from "node:zlib";

import type { Element, Scene, TextEl } from "./svg.js";

// 7 rows x 5 columns per glyph, '1' = pixel on.
const FONT: Record<string, string[]> = {
  "0": ["01110", "10001", "10011", "10101", "11001", "10001", "01110"],
  "1": ["00100", "01100", "00100", "00100", "00100", "00100", "01110"],
  "2": ["01110", "10001", "00001", "00010", "00100", "01000", "11111"],
  "3": ["11111", "00010", "00100", "00010", "00001", "10001", "01110"],
  "4": ["00010", "00110", "01010", "10010", "11111", "00010", "00010"],
  "5": ["11111", "10000", "11110", "00001", "00001", "10001", "01110"],
  "6": ["00110", "01000", "10000", "11110", "10001", "10001", "01110"],
  "7": ["11111", "00001", "00010", "00100", "01000", "01000", "01000"],
  "8": ["01110", "10001", "10001", "01110", "10001", "10001", "01110"],
  "9": ["01110", "10001", "10001", "01111", "00001", "00010", "01100"],
  ".": ["00000", "00000", "00000", "00000", "00000", "01100", "01100"],
  ",": ["00000", "00000", "00000", "00000", "00110", "00100", "01000"],
  "-": ["00000", "00000", "00000", "11111", "00000", "00000", "00000"],
  "+": ["00000", "00100", "00100", "11111", "00100", "00100", "00000"],
  "=": ["00000", "00000", "11111", "00000", "11111", "00000", "00000"],
  "/": ["00001", "00010", "00010", "00100", "01000", "01000", "10000"],
  "(": ["00010", "00100", "01000", "01000", "01000", "00100", "00010"],
  ")": ["01000", "00100", "00010", "00010", "00010", "00100", "01000"],
  " ": ["00000", "00000", "00000", "00000", "00000", "00000", "00000"],
  a: ["00000", "00000", "01110", "00001", "01111", "10001", "01111"],
  b: ["10000", "10000", "11110", "10001", "10001", "10001", "11110"],
  c: ["00000", "00000", "01110", "10000", "10000", "10001", "01110"],
  d: ["00001", "00001", "01111", "10001", "10001", "10001", "01111"],
  e: ["00000", "00000", "01110", "10001", "11111", "10000", "01110"],
  f: ["00110", "01000", "11110", "01000", "01000", "01000", "01000"],
  g: ["00000", "01111", "10001", "10001", "01111", "00001", "01110"],
  h: ["10000", "10000", "11110", "10001", "10001", "10001", "10001"],
  i: ["00100", "00000", "01100", "00100", "00100", "00100", "01110"],
  k: ["10000", "10000", "10010", "10100", "11000", "10100", "10010"],
  l: ["01100", "00100", "00100", "00100", "00100", "00100", "01110"],
  m: ["00000", "00000", "11010", "10101", "10101", "10101", "10101"],
  n: ["00000", "00000", "11110", "10001", "10001", "10001", "10001"],
  o: ["00000", "00000", "01110", "10001", "10001", "10001", "01110"],
  p: ["00000", "11110", "10001", "10001", "11110", "10000", "10000"],
  q: ["00000", "01111", "10001", "10001", "01111", "00001", "00001"],
  r: ["00000", "00000", "10110", "11001", "10000", "10000", "10000"],
  s: ["00000", "00000", "01111", "10000", "01110", "00001", "11110"],
  t: ["01000", "01000", "11110", "01000", "01000", "01001", "00110"],
  u: ["00000", "00000", "10001", "10001", "10001", "10001", "01111"],
  v: ["00000", "00000", "10001", "10001", "10001", "01010", "00100"],
  x: ["00000", "00000", "10001", "01010", "00100", "01010", "10001"],
  y: ["00000", "10001", "10001", "01111", "00001", "10001", "01110"],
  z: ["00000", "00000", "11111", "00010", "00100", "01000", "11111"],
  E: ["11111", "10000", "10000", "11110", "10000", "10000", "11111"],
  L: ["10000", "10000", "10000", "10000", "10000", "10000", "11111"],
  N: ["10001", "11001", "11001", "10101", "10011", "10011", "10001"],
  S: ["01111", "10000", "10000", "01110", "00001", "00001", "11110"],
};

const FALLBACK = ["11111", "10001", "10001", "10001", "10001", "10001", "11111"];

type RGB = [number, number, number];

const COLORS: Record<string, RGB> = {
  white: [255, 255, 255],
  black: [0, 0, 0],
  none: [255, 255, 255],
  "#222": [34, 34, 34],
  "#555": [85, 85, 85],
  "#888": [136, 136, 136],
  "#bbb": [187, 187, 187],
  "#ddd": [221, 221, 221],
  "#f5f5f5": [245, 245, 245],
  "#1f77b4": [31, 119, 180],
  "#d62728": [214, 39, 40],
  "#2ca02c": [44, 160, 44],
  "#ff7f0e": [255, 127, 14],
};

function colorOf(name: string | undefined, fallback: RGB = [0, 0, 0]): RGB {
  if (!name) return fallback;
  const known = COLORS[name];
  if (known) return known;
  if (name.startsWith("#") && name.length === 7) {
    return [
      parseInt(name.slice(1, 3), 16),
      parseInt(name.slice(3, 5), 16),
      parseInt(name.slice(5, 7), 16),
    ];
  }
  return fallback;
}

class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const at = (y * this.width + x) * 4;
    this.data[at] = r;
    this.data[at + 1] = g;
    this.data[at + 2] = b;
    this.data[at + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: RGB): void {
    for (let y = Math.round(y0); y < Math.round(y0 + h); y++) {
      for (let x = Math.round(x0); x < Math.round(x0 + w); x++) {
        this.set(x, y, color);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: RGB, dash: boolean): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (!dash || step % 7 < 4) {
        this.set(x, y, color);
      }
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step += 1;
    }
  }

  text(el: TextEl): void {
    const px = Math.max(1, Math.round(el.size / 7));
    const advance = 6 * px;
    const width = el.text.length * advance - px;
    let startX = Math.round(el.x);
    if (el.anchor === "middle") startX -= Math.round(width / 2);
    if (el.anchor === "end") startX -= width;
    const topY = Math.round(el.y) - 7 * px; // el.y is the text baseline
    const color = colorOf(el.fill, [34, 34, 34]);
    for (let index = 0; index < el.text.length; index++) {
      const glyph = FONT[el.text[index]] ?? FALLBACK;
      const gx = startX + index * advance;
      for (let row = 0; row < 7; row++) {
        for (let colBit = 0; colBit < 5; colBit++) {
          if (glyph[row][colBit] === "1") {
            this.fillRect(gx + colBit * px, topY + row * px, px, px, color);
          }
        }
      }
    }
  }
}

function drawElement(canvas: Canvas, el: Element): void {
  switch (el.kind) {
    case "rect": {
      if (el.fill && el.fill !== "none") {
        canvas.fillRect(el.x, el.y, el.width, el.height, colorOf(el.fill));
      }
      if (el.stroke) {
        const color = colorOf(el.stroke);
        canvas.line(el.x, el.y, el.x + el.width, el.y, color, false);
        canvas.line(el.x, el.y + el.height, el.x + el.width, el.y + el.height, color, false);
        canvas.line(el.x, el.y, el.x, el.y + el.height, color, false);
        canvas.line(el.x + el.width, el.y, el.x + el.width, el.y + el.height, color, false);
      }
      break;
    }
    case "line":
      canvas.line(el.x1, el.y1, el.x2, el.y2, colorOf(el.stroke), el.dash ?? false);
      break;
    case "polyline":
      for (let i = 1; i < el.points.length; i++) {
        canvas.line(
          el.points[i - 1][0],
          el.points[i - 1][1],
          el.points[i][0],
          el.points[i][1],
          colorOf(el.stroke),
          el.dash ?? false,
        );
      }
      break;
    case "text":
      canvas.text(el);
      break;
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(...buffers: Buffer[]): number {
  let crc = 0xffffffff;
  for (const buffer of buffers) {
    for (const byte of buffer) {
      crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
    }
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Buffer): Buffer {
  const header = Buffer.alloc(4);
  header.writeUInt32BE(payload.length);
  const typeBuffer = Buffer.from(type, "ascii");
  const crcBuffer = Buffer.alloc(4);
  crcBuffer.writeUInt32BE(crc32(typeBuffer, payload));
  return Buffer.concat([header, typeBuffer, payload, crcBuffer]);
}

export function encodePng(canvas: Canvas): Buffer {
  const { width, height, data } = canvas;
  const raw = Buffer.alloc(height * (width * 4 + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (width * 4 + 1)] = 0; // filter: none
    const row = Buffer.from(data.buffer, y * width * 4, width * 4);
    row.copy(raw, y * (width * 4 + 1) + 1);
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // color type RGBA
  ihdr[10] = 0;
  ihdr[11] = 0;
  ihdr[12] = 0;
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw)),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

export function renderPng(scene: Scene): Buffer {
  const canvas = new Canvas(scene.width, scene.height);
  for (const group of scene.groups) {
    for (const el of group.elements) {
      drawElement(canvas, el);
    }
  }
  return encodePng(canvas);
}
