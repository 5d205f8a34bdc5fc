#!/usr/bin/env node
/**
 * Figure pipeline CLI.
 *
 *   subsetsim-figures --kind per_run --input runs.csv --out fig.svg
 *   subsetsim-figures --all --goldens ../goldens --out rendered
 *
 * Exit codes: 0 success, 2 schema/usage error, 1 unexpected failure.
 */

import { existsSync } from "fs";
import { join } from "path";

import { FIGURE_KINDS, FigureJob, FigureKind, render, SchemaError } from "./index";

interface Cli {
  kind?: string;
  inputs: string[];
  out?: string;
  target?: number;
  all: boolean;
  goldens?: string;
}

function parseArgs(argv: string[]): Cli {
  const cli: Cli = { inputs: [], all: false };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new SchemaError(`flag ${arg} needs a value`);
      return argv[i];
    };
    switch (arg) {
      case "--kind": cli.kind = next(); break;
      case "--input": cli.inputs.push(next()); break;
      case "--out": cli.out = next(); break;
      case "--target": cli.target = Number(next()); break;
      case "--all": cli.all = true; break;
      case "--goldens": cli.goldens = next(); break;
      default:
        throw new SchemaError(`unknown flag ${JSON.stringify(arg)}`);
    }
  }
  return cli;
}

/** The standard jobs over a goldens directory produced by the estimator. */
export function goldenJobs(goldens: string, outDir: string): FigureJob[] {
  return [
    {
      kind: "scatter2d",
      inputs: [join(goldens, "estimate_d2", "samples.csv"),
               join(goldens, "estimate_d2", "levels.csv")],
      output: join(outDir, "scatter2d.svg"),
      target: 9.0,
    },
    {
      kind: "sweep_estimates",
      inputs: [join(goldens, "sweep_d1000", "sweep.csv")],
      output: join(outDir, "sweep_estimates.svg"),
    },
    {
      kind: "sweep_cov",
      inputs: [join(goldens, "sweep_d1000", "sweep.csv")],
      output: join(outDir, "sweep_cov.svg"),
    },
    {
      kind: "budget",
      inputs: [join(goldens, "sweep_d1000", "sweep.csv")],
      output: join(outDir, "budget.svg"),
    },
    {
      kind: "per_run",
      inputs: [join(goldens, "replicates_d1000", "runs.csv")],
      output: join(outDir, "per_run.svg"),
    },
    {
      kind: "responses",
      inputs: [join(goldens, "trace_d1000", "responses.csv")],
      output: join(outDir, "responses.svg"),
    },
    {
      kind: "thresholds",
      inputs: [join(goldens, "trace_d1000", "levels.csv")],
      output: join(outDir, "thresholds.svg"),
    },
  ];
}

export function main(argv: string[]): number {
  try {
    const cli = parseArgs(argv);
    if (cli.all) {
      if (!cli.goldens || !cli.out) {
        throw new SchemaError("--all requires --goldens DIR and --out DIR");
      }
      if (!existsSync(cli.goldens)) {
        throw new SchemaError(`goldens directory not found: ${cli.goldens}`);
      }
      for (const job of goldenJobs(cli.goldens, cli.out)) {
        console.log(`rendered ${render(job)}`);
      }
      return 0;
    }
    if (!cli.kind || cli.inputs.length === 0 || !cli.out) {
      throw new SchemaError(
        `usage: --kind <${FIGURE_KINDS.join("|")}> --input FILE [--input FILE] ` +
        "--out FILE [--target Y], or --all --goldens DIR --out DIR",
      );
    }
    if (!(FIGURE_KINDS as readonly string[]).includes(cli.kind)) {
      throw new SchemaError(
        `unknown figure kind ${JSON.stringify(cli.kind)}; ` +
        `expected one of ${FIGURE_KINDS.join(", ")}`,
      );
    }
    const job: FigureJob = {
      kind: cli.kind as FigureKind,
      inputs: cli.inputs,
      output: cli.out,
      target: cli.target,
    };
    console.log(`rendered ${render(job)}`);
    return 0;
  } catch (error) {
    if (error instanceof SchemaError) {
      console.error(`schema error: ${error.message}`);
      return 2;
    }
    if (error instanceof Error && "code" in error &&
        (error as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`missing input: ${error.message}`);
      return 2;
    }
    console.error(error);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
