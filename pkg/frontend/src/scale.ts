/** Linear and log10 axis scales with deterministic tick generation. */

export interface Scale {
  readonly kind: "linear" | "log";
  map(value: number): number;
  ticks(): number[];
  readonly domain: [number, number];
  readonly range: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    kind: "linear",
    domain,
    range,
    map: (value) => r0 + ((value - d0) / span) * (r1 - r0),
    ticks: () => linearTicks(d0, d1),
  };
}

export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  if (domain[0] <= 0 || domain[1] <= 0) {
    throw new Error(`log scale requires a positive domain; got [${domain}]`);
  }
  const l0 = Math.log10(domain[0]);
  const l1 = Math.log10(domain[1]);
  const span = l1 - l0 || 1;
  const [r0, r1] = range;
  return {
    kind: "log",
    domain,
    range,
    map: (value) => r0 + ((Math.log10(value) - l0) / span) * (r1 - r0),
    ticks: () => decadeTicks(l0, l1),
  };
}

/** 1-2-5 progression covering [lo, hi] with 4..9 ticks. */
export function linearTicks(lo: number, hi: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / 6;
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = magnitude;
  for (const mult of [1, 2, 5, 10]) {
    if (rawStep <= mult * magnitude) {
      step = mult * magnitude;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step - 1e-9);
  const last = Math.floor(hi / step + 1e-9);
  for (let i = first; i <= last; i++) {
    // clean up -0 and float noise for stable labels
    const value = i * step;
    ticks.push(value === 0 ? 0 : value);
  }
  return ticks;
}

/** Powers of ten within the domain, thinned to at most ~10 labels. */
export function decadeTicks(logLo: number, logHi: number): number[] {
  const first = Math.ceil(logLo - 1e-9);
  const last = Math.floor(logHi + 1e-9);
  const exponents: number[] = [];
  const stride = Math.max(1, Math.ceil((last - first + 1) / 10));
  for (let e = first; e <= last; e += stride) {
    exponents.push(e);
  }
  // Number("1e-4") is correctly rounded where Math.pow(10, -4) is not
  return exponents.map((e) => Number(`1e${e}`));
}

/** Deterministic tick labels: exponent form for log scales. */
export function tickLabel(value: number, kind: "linear" | "log"): string {
  if (kind === "log") {
    const exponent = Math.round(Math.log10(value));
    return exponent >= 0 && exponent <= 3
      ? String(Math.pow(10, exponent))
      : `1e${exponent}`;
  }
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e5 || abs < 1e-3) return value.toExponential(1);
  return String(Number(value.toPrecision(6)));
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) throw new Error("no finite values to scale");
  return [lo, hi];
}

export function padded(domain: [number, number], fraction = 0.05): [number, number] {
  const [lo, hi] = domain;
  const pad = (hi - lo || Math.abs(lo) || 1) * fraction;
  return [lo - pad, hi + pad];
}

export function paddedLog(domain: [number, number], factor = 1.5): [number, number] {
  return [domain[0] / factor, domain[1] * factor];
}
