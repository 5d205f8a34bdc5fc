/**
 * Minimal SVG document builder.
 *
 * Output is a pure function of the drawing calls: attributes are emitted in
 * insertion order and all coordinates pass through a fixed-precision
 * formatter, so identical inputs produce byte-identical files.
 */

export type Attrs = Record<string, string | number>;

export function fmt(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate in SVG output: ${value}`);
  }
  const rounded = Number(value.toFixed(2));
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function attrString(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([key, value]) =>
      ` ${key}="${typeof value === "number" ? fmt(value) : value}"`)
    .join("");
}

export class SvgDocument {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
      `height="${height}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="Helvetica, Arial, sans-serif">`,
    );
    this.parts.push(
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  element(tag: string, attrs: Attrs): void {
    this.parts.push(`<${tag}${attrString(attrs)}/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs): void {
    this.element("line", { x1, y1, x2, y2, ...attrs });
  }

  circle(cx: number, cy: number, r: number, attrs: Attrs): void {
    this.element("circle", { cx, cy, r, ...attrs });
  }

  path(points: Array<[number, number]>, attrs: Attrs): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join(" ");
    this.parts.push(`<path d="${d}" fill="none"${attrString(attrs)}/>`);
  }

  text(x: number, y: number, content: string, attrs: Attrs = {}): void {
    this.parts.push(
      `<text${attrString({ x, y, "font-size": "12", fill: "#222", ...attrs })}>` +
      `${escapeText(content)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
