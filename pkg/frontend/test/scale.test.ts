import { describe, expect, it } from "vitest";

import {
  decadeTicks, extent, linearScale, linearTicks, logScale, tickLabel,
} from "../src/scale";

describe("linearScale", () => {
  it("maps the domain endpoints to the range endpoints", () => {
    const scale = linearScale([0, 10], [100, 500]);
    expect(scale.map(0)).toBe(100);
    expect(scale.map(10)).toBe(500);
    expect(scale.map(5)).toBe(300);
  });

  it("supports inverted ranges (SVG y axis)", () => {
    const scale = linearScale([0, 1], [400, 0]);
    expect(scale.map(0.25)).toBe(300);
  });
});

describe("logScale", () => {
  it("maps decades evenly", () => {
    const scale = logScale([1e-10, 1e-2], [0, 800]);
    expect(scale.map(1e-10)).toBeCloseTo(0, 9);
    expect(scale.map(1e-6)).toBeCloseTo(400, 9);
    expect(scale.map(1e-2)).toBeCloseTo(800, 9);
  });

  it("rejects non-positive domains", () => {
    expect(() => logScale([0, 1], [0, 1])).toThrow(/positive/);
  });
});

describe("ticks", () => {
  it("linear ticks use a 1-2-5 progression", () => {
    expect(linearTicks(0, 10)).toEqual([0, 2, 4, 6, 8, 10]);
    expect(linearTicks(0, 200)).toEqual([0, 50, 100, 150, 200]);
  });

  it("decade ticks cover the domain", () => {
    expect(decadeTicks(Math.log10(1e-4), Math.log10(1))).toEqual(
      [1e-4, 1e-3, 1e-2, 1e-1, 1]);
  });

  it("decade ticks thin out very wide domains", () => {
    expect(decadeTicks(-12, 0).length).toBeLessThanOrEqual(10);
  });

  it("labels are deterministic strings", () => {
    expect(tickLabel(1e-10, "log")).toBe("1e-10");
    expect(tickLabel(100, "log")).toBe("100");
    expect(tickLabel(0, "linear")).toBe("0");
    expect(tickLabel(8.5, "linear")).toBe("8.5");
  });
});

describe("extent", () => {
  it("ignores non-finite values", () => {
    expect(extent([-Infinity, 2, NaN, 5, Infinity])).toEqual([2, 5]);
  });

  it("throws when nothing is finite", () => {
    expect(() => extent([NaN])).toThrow(/finite/);
  });
});
