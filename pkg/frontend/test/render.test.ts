import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { PLOT } from "../src/chart";
import { numericColumn, readCsv } from "../src/csv";
import { goldenJobs, main } from "../src/cli";
import { FigureJob, renderToString, SchemaError } from "../src/index";
import { extent, logScale, paddedLog } from "../src/scale";

const GOLDENS = join(__dirname, "..", "..", "goldens");
const HAVE_GOLDENS = existsSync(GOLDENS);
const describeGoldens = HAVE_GOLDENS ? describe : describe.skip;

function jobs(): FigureJob[] {
  const out = mkdtempSync(join(tmpdir(), "figures-"));
  return goldenJobs(GOLDENS, out);
}

describeGoldens("rendering the golden outputs", () => {
  it.each(jobs().map((job) => [job.kind, job] as const))(
    "renders %s without error", (_kind, job) => {
      const svg = renderToString(job);
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      expect(svg.length).toBeGreaterThan(2000);
    });

  it.each(jobs().map((job) => [job.kind, job] as const))(
    "%s output is byte-stable", (_kind, job) => {
      expect(renderToString(job)).toBe(renderToString(job));
    });

  it("renders no timestamps or environment artifacts", () => {
    for (const job of jobs()) {
      const svg = renderToString(job);
      expect(svg).not.toMatch(/\b20\d\d-\d\d-\d\d\b/);
      expect(svg).not.toMatch(/date|time/i);
    }
  });

  it("per_run places the mean and truth lines at the CSV values", () => {
    const runsPath = join(GOLDENS, "replicates_d1000", "runs.csv");
    const job: FigureJob = {
      kind: "per_run", inputs: [runsPath], output: "unused.svg",
    };
    const svg = renderToString(job);

    const table = readCsv(runsPath);
    const pHat = numericColumn(table, "p_hat");
    const pTrue = numericColumn(table, "p_true")[0];
    const mean = numericColumn(table, "p_hat_mean")[0];

    // the same axis construction the renderer uses
    const positives = [...pHat, pTrue, mean].filter((v) => v > 0);
    const scale = logScale(paddedLog(extent(positives), 2.5),
                           [PLOT.y0, PLOT.y1]);

    const meanLine = svg.match(/<line[^>]*id="mean-line"[^>]*\/>/);
    const truthLine = svg.match(/<line[^>]*id="truth-line"[^>]*\/>/);
    expect(meanLine).not.toBeNull();
    expect(truthLine).not.toBeNull();
    const yOf = (tag: string) => Number(tag.match(/y1="([-\d.]+)"/)![1]);
    expect(yOf(meanLine![0])).toBeCloseTo(scale.map(mean), 2);
    expect(yOf(truthLine![0])).toBeCloseTo(scale.map(pTrue), 2);
    // mean sits above truth here (larger probability, smaller SVG y)
    expect(scale.map(mean)).toBeLessThan(scale.map(pTrue));
  });

  it("scatter2d draws one dashed boundary per intermediate level", () => {
    const job = jobs().find((j) => j.kind === "scatter2d")!;
    const svg = renderToString(job);
    const levels = readCsv(job.inputs[1]);
    const finiteThresholds = levels.data.get("threshold")!
      .filter((t) => t !== null && Number.isFinite(t)).length;
    const dashed = svg.match(/stroke-dasharray="5 3"/g) ?? [];
    expect(dashed.length).toBeGreaterThanOrEqual(finiteThresholds);
    expect(svg).toContain("level 0");
  });

  it("cli renders the full golden set", () => {
    const out = mkdtempSync(join(tmpdir(), "figures-cli-"));
    expect(main(["--all", "--goldens", GOLDENS, "--out", out])).toBe(0);
    for (const name of ["scatter2d", "sweep_estimates", "sweep_cov",
                        "budget", "per_run", "responses", "thresholds"]) {
      const svg = readFileSync(join(out, `${name}.svg`), "utf8");
      expect(svg.startsWith("<svg ")).toBe(true);
    }
  });
});

describe("schema failures", () => {
  it("rejects a CSV missing a required column, naming it", () => {
    const out = mkdtempSync(join(tmpdir(), "figures-err-"));
    const bad = join(out, "bad.csv");
    require("fs").writeFileSync(bad, "y_star,p_true\n1,0.5\n");
    expect(() => renderToString(
      { kind: "sweep_estimates", inputs: [bad], output: "x.svg" }))
      .toThrow(/missing column "ss_mean"/);
  });

  it("rejects an empty CSV with a nonzero cli exit", () => {
    const out = mkdtempSync(join(tmpdir(), "figures-err-"));
    const empty = join(out, "empty.csv");
    require("fs").writeFileSync(empty, "");
    expect(main(["--kind", "per_run", "--input", empty,
                 "--out", join(out, "x.svg")])).toBe(2);
  });

  it("rejects an unknown kind", () => {
    expect(main(["--kind", "pie", "--input", "a.csv", "--out", "x.svg"]))
      .toBe(2);
  });

  it("rejects a missing input file", () => {
    expect(main(["--kind", "per_run", "--input", "definitely-missing.csv",
                 "--out", "x.svg"])).toBe(2);
  });

  it("rejects wrong input arity", () => {
    expect(() => renderToString(
      { kind: "per_run", inputs: ["a.csv", "b.csv"], output: "x.svg" }))
      .toThrow(SchemaError);
  });

  it("usage error without required flags", () => {
    expect(main([])).toBe(2);
  });
});
