/** Figure jobs: kind dispatch over the producer's CSV files. */

import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";

import { readCsv, SchemaError, Table } from "./csv";
import * as figures from "./figures";

export { SchemaError } from "./csv";

export const FIGURE_KINDS = [
  "scatter2d",
  "sweep_estimates",
  "sweep_cov",
  "budget",
  "per_run",
  "responses",
  "thresholds",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureJob {
  kind: FigureKind;
  /** CSV inputs; scatter2d takes [samples, levels?], the rest exactly one */
  inputs: string[];
  output: string;
  /** scatter2d only: critical threshold for the solid target boundary */
  target?: number;
}

function expectInputs(job: FigureJob, min: number, max: number): Table[] {
  if (job.inputs.length < min || job.inputs.length > max) {
    throw new SchemaError(
      `figure kind "${job.kind}" takes ${min === max ? min : `${min}-${max}`} ` +
      `input file(s); got ${job.inputs.length}`,
    );
  }
  return job.inputs.map((path) => readCsv(path));
}

export function renderToString(job: FigureJob): string {
  switch (job.kind) {
    case "scatter2d": {
      const tables = expectInputs(job, 1, 2);
      return figures.scatter2d(tables[0], tables[1] ?? null, job.target);
    }
    case "sweep_estimates":
      return figures.sweepEstimates(expectInputs(job, 1, 1)[0]);
    case "sweep_cov":
      return figures.sweepCov(expectInputs(job, 1, 1)[0]);
    case "budget":
      return figures.budget(expectInputs(job, 1, 1)[0]);
    case "per_run":
      return figures.perRun(expectInputs(job, 1, 1)[0]);
    case "responses":
      return figures.responses(expectInputs(job, 1, 1)[0]);
    case "thresholds":
      return figures.thresholds(expectInputs(job, 1, 1)[0]);
    default: {
      const kind: never = job.kind;
      throw new SchemaError(`unknown figure kind ${JSON.stringify(kind)}`);
    }
  }
}

export function render(job: FigureJob): string {
  const svg = renderToString(job);
  mkdirSync(dirname(job.output), { recursive: true });
  writeFileSync(job.output, svg);
  return job.output;
}
