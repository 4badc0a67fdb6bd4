/** Linear data-to-pixel mapping with readable tick positions. */

export interface Scale {
  domain: [number, number];
  range: [number, number];
  map(value: number): number;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    // degenerate domain: widen symmetrically so the line lands mid-range
    const pad = d0 === 0 ? 1 : Math.abs(d0) * 0.5;
    d0 -= pad;
    d1 += pad;
  }
  const [r0, r1] = range;
  const slope = (r1 - r0) / (d1 - d0);
  return {
    domain: [d0, d1],
    range,
    map: (value: number) => r0 + (value - d0) * slope,
  };
}

/** Round-numbered ticks covering the domain, roughly `count` of them. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const rawStep = span / Math.max(1, count);
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const residual = rawStep / magnitude;
  let step: number;
  if (residual >= 5) {
    step = 10 * magnitude;
  } else if (residual >= 2) {
    step = 5 * magnitude;
  } else if (residual >= 1) {
    step = 2 * magnitude;
  } else {
    step = magnitude;
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step) * step;
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Compact label: fixed for moderate magnitudes, exponential otherwise. */
export function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return value.toExponential(1).replace("+", "");
  }
  const text = value.toPrecision(4);
  return text.includes(".") ? text.replace(/\.?0+$/, "") : text;
}

export function extent(values: Iterable<number>): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("cannot take the extent of an empty or non-finite series");
  }
  return [lo, hi];
}

/** Pad an extent by a fraction on each side (handles the flat case). */
export function padded(ext: [number, number], frac = 0.08): [number, number] {
  const [lo, hi] = ext;
  const span = hi - lo;
  const pad = span === 0 ? (lo === 0 ? 1 : Math.abs(lo) * 0.2) : span * frac;
  return [lo - pad, hi + pad];
}
