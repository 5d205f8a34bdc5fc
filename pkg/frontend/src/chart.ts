/** Shared chart frame: margins, axes, grid lines, series, legend. */

import { Scale, tickLabel } from "./scale";
import { Attrs, SvgDocument } from "./svg";

export const WIDTH = 760;
export const HEIGHT = 480;
export const MARGIN = { top: 36, right: 168, bottom: 56, left: 78 };

export const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,   // y grows downward in SVG; y0 is the axis
  y1: MARGIN.top,
};

/** Discrete color cycle for per-level series (level 0 first). */
export const LEVEL_COLORS = [
  "#d62728", "#9467bd", "#1f77b4", "#2ca02c", "#ff7f0e", "#8c564b",
  "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a",
];

export function levelColor(level: number): string {
  return LEVEL_COLORS[level % LEVEL_COLORS.length];
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
  marker?: boolean;
}

export class Chart {
  readonly svg = new SvgDocument(WIDTH, HEIGHT);
  private legendEntries: LegendEntry[] = [];

  constructor(
    readonly x: Scale,
    readonly y: Scale,
    title: string,
    xLabel: string,
    yLabel: string,
  ) {
    this.svg.text(PLOT.x0, MARGIN.top - 14, title,
      { "font-size": "14", "font-weight": "bold" });
    this.drawAxes(xLabel, yLabel);
  }

  private drawAxes(xLabel: string, yLabel: string): void {
    const { svg, x, y } = this;
    const frame: Attrs = { stroke: "#222", "stroke-width": "1" };
    svg.line(PLOT.x0, PLOT.y0, PLOT.x1, PLOT.y0, frame);
    svg.line(PLOT.x0, PLOT.y0, PLOT.x0, PLOT.y1, frame);

    for (const tick of x.ticks()) {
      const px = x.map(tick);
      if (px < PLOT.x0 - 0.5 || px > PLOT.x1 + 0.5) continue;
      svg.line(px, PLOT.y0, px, PLOT.y1,
        { stroke: "#ddd", "stroke-width": "0.5" });
      svg.line(px, PLOT.y0, px, PLOT.y0 + 5, frame);
      svg.text(px, PLOT.y0 + 20, tickLabel(tick, x.kind),
        { "text-anchor": "middle" });
    }
    for (const tick of y.ticks()) {
      const py = y.map(tick);
      if (py > PLOT.y0 + 0.5 || py < PLOT.y1 - 0.5) continue;
      svg.line(PLOT.x0, py, PLOT.x1, py,
        { stroke: "#ddd", "stroke-width": "0.5" });
      svg.line(PLOT.x0 - 5, py, PLOT.x0, py, frame);
      svg.text(PLOT.x0 - 8, py + 4, tickLabel(tick, y.kind),
        { "text-anchor": "end" });
    }
    svg.text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 14, xLabel,
      { "text-anchor": "middle", "font-size": "13" });
    svg.text(16, (PLOT.y0 + PLOT.y1) / 2, yLabel, {
      "text-anchor": "middle",
      "font-size": "13",
      transform: `rotate(-90 16 ${(PLOT.y0 + PLOT.y1) / 2})`,
    });
  }

  /** Polyline through (xs, ys), skipping non-plottable points. */
  seriesLine(xs: number[], ys: number[], color: string, options: {
    dash?: string; width?: number; id?: string; label?: string;
  } = {}): void {
    const attrs: Attrs = {
      stroke: color,
      "stroke-width": options.width ?? 1.5,
    };
    if (options.dash) attrs["stroke-dasharray"] = options.dash;
    if (options.id) attrs.id = options.id;
    const segments: Array<Array<[number, number]>> = [[]];
    for (let i = 0; i < xs.length; i++) {
      if (this.plottable(xs[i], ys[i])) {
        segments[segments.length - 1].push(
          [this.x.map(xs[i]), this.y.map(ys[i])]);
      } else if (segments[segments.length - 1].length > 0) {
        segments.push([]);
      }
    }
    for (const segment of segments) {
      if (segment.length > 1) this.svg.path(segment, attrs);
      else if (segment.length === 1) {
        this.svg.circle(segment[0][0], segment[0][1], 1.5,
          { fill: color, stroke: "none" });
      }
    }
    if (options.label) {
      this.legendEntries.push({ label: options.label, color, dash: options.dash });
    }
  }

  seriesPoints(xs: number[], ys: number[], color: string, options: {
    r?: number; label?: string;
  } = {}): void {
    for (let i = 0; i < xs.length; i++) {
      if (!this.plottable(xs[i], ys[i])) continue;
      this.svg.circle(this.x.map(xs[i]), this.y.map(ys[i]),
        options.r ?? 2.4, { fill: color, stroke: "none" });
    }
    if (options.label) {
      this.legendEntries.push({ label: options.label, color, marker: true });
    }
  }

  /** Horizontal reference line at a data-space y value. */
  referenceLine(value: number, color: string, options: {
    dash?: string; id?: string; label?: string;
  } = {}): void {
    const py = this.y.map(value);
    const attrs: Attrs = { stroke: color, "stroke-width": "1.5" };
    if (options.dash) attrs["stroke-dasharray"] = options.dash;
    if (options.id) attrs.id = options.id;
    this.svg.line(PLOT.x0, py, PLOT.x1, py, attrs);
    if (options.label) {
      this.legendEntries.push({ label: options.label, color, dash: options.dash });
    }
  }

  private plottable(x: number, y: number): boolean {
    if (!Number.isFinite(x) || !Number.isFinite(y)) return false;
    if (this.x.kind === "log" && x <= 0) return false;
    if (this.y.kind === "log" && y <= 0) return false;
    return true;
  }

  legend(): void {
    const x = PLOT.x1 + 12;
    let y = PLOT.y1 + 10;
    for (const entry of this.legendEntries) {
      if (entry.marker) {
        this.svg.circle(x + 11, y - 4, 3, { fill: entry.color, stroke: "none" });
      } else {
        const attrs: Attrs = { stroke: entry.color, "stroke-width": "2" };
        if (entry.dash) attrs["stroke-dasharray"] = entry.dash;
        this.svg.line(x, y - 4, x + 22, y - 4, attrs);
      }
      this.svg.text(x + 28, y, entry.label, { "font-size": "11" });
      y += 18;
    }
  }

  render(): string {
    this.legend();
    return this.svg.render();
  }
}
