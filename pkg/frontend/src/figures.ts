/**
 * One renderer per figure kind. Every renderer is a pure function of the
 * parsed CSV tables (plus explicit options); nothing is recomputed from raw
 * samples, so the figures always agree with the numbers the estimator wrote.
 */

import { Chart, levelColor } from "./chart";
import { column, numericColumn, SchemaError, Table } from "./csv";
import { extent, linearScale, logScale, padded, paddedLog } from "./scale";
import { PLOT } from "./chart";

const RED = "#d62728";
const BLUE = "#1f77b4";
const DARK_GREEN = "#2ca02c";
const LIGHT_GREEN = "#98df8a";

function positives(...series: Array<Array<number | null>>): number[] {
  const out: number[] = [];
  for (const values of series) {
    for (const v of values) {
      if (v !== null && Number.isFinite(v) && v > 0) out.push(v);
    }
  }
  if (out.length === 0) {
    throw new SchemaError("no positive values to place on a log axis");
  }
  return out;
}

function groupByLevel(levels: number[]): Map<number, number[]> {
  const groups = new Map<number, number[]>();
  levels.forEach((level, i) => {
    const rows = groups.get(level);
    if (rows === undefined) groups.set(level, [i]);
    else rows.push(i);
  });
  return groups;
}

/** 2-D sample cloud colored by level, with additive-response boundaries. */
export function scatter2d(
  samples: Table,
  levels: Table | null,
  target?: number,
): string {
  const x1 = numericColumn(samples, "x1");
  const x2 = numericColumn(samples, "x2");
  const level = numericColumn(samples, "level");

  const [lo, hi] = padded(extent([...x1, ...x2]), 0.06);
  const chart = new Chart(
    linearScale([lo, hi], [PLOT.x0, PLOT.x1]),
    linearScale([lo, hi], [PLOT.y0, PLOT.y1]),
    "Samples by conditional level",
    "x1",
    "x2",
  );

  // dashed boundaries of the intermediate domains: x1 + x2 = threshold
  // (the additive response family used by the shipped scenarios)
  const boundaries: Array<{ value: number; dash?: string; label: string }> = [];
  if (levels !== null) {
    const thresholds = column(levels, "threshold");
    for (const t of thresholds) {
      if (t !== null && Number.isFinite(t)) {
        boundaries.push({ value: t, dash: "5 3", label: "" });
      }
    }
  }
  if (target !== undefined) {
    boundaries.push({ value: target, label: "target boundary" });
  }
  for (const boundary of boundaries) {
    const t = boundary.value;
    const xStart = Math.max(lo, t - hi);
    const xEnd = Math.min(hi, t - lo);
    if (xStart >= xEnd) continue;
    chart.seriesLine(
      [xStart, xEnd], [t - xStart, t - xEnd], "#444",
      { dash: boundary.dash, width: 1.2, label: boundary.label || undefined });
  }

  for (const [levelIndex, rows] of groupByLevel(level)) {
    chart.seriesPoints(
      rows.map((i) => x1[i]), rows.map((i) => x2[i]),
      levelColor(levelIndex), { r: 1.6, label: `level ${levelIndex}` });
  }
  return chart.render();
}

/** Estimates versus threshold: truth, subset simulation band, direct MC. */
export function sweepEstimates(sweep: Table): string {
  const yStar = numericColumn(sweep, "y_star");
  const pTrue = numericColumn(sweep, "p_true");
  const ssMean = numericColumn(sweep, "ss_mean");
  const ssStd = numericColumn(sweep, "ss_std");
  const dmcMean = numericColumn(sweep, "dmc_mean");
  const covTheory = numericColumn(sweep, "dmc_cov_theory");

  const yDomain = paddedLog(extent(positives(pTrue, ssMean, dmcMean)), 3);
  const chart = new Chart(
    linearScale(padded(extent(yStar), 0.02), [PLOT.x0, PLOT.x1]),
    logScale(yDomain, [PLOT.y0, PLOT.y1]),
    "Failure probability versus critical threshold",
    "critical threshold",
    "failure probability",
  );

  const plus = ssMean.map((m, i) => m + ssStd[i]);
  const minus = ssMean.map((m, i) => m - ssStd[i]);
  const theoryPlus = pTrue.map((p, i) => p * (1 + covTheory[i]));
  const theoryMinus = pTrue.map((p, i) => p * (1 - covTheory[i]));

  chart.seriesLine(yStar, theoryPlus, LIGHT_GREEN,
    { dash: "3 3", label: "direct MC theory band" });
  chart.seriesLine(yStar, theoryMinus, LIGHT_GREEN, { dash: "3 3" });
  chart.seriesLine(yStar, plus, RED, { dash: "5 3", width: 1, label: "subset mean +- std" });
  chart.seriesLine(yStar, minus, RED, { dash: "5 3", width: 1 });
  chart.seriesLine(yStar, ssMean, RED, { width: 2, label: "subset mean" });
  chart.seriesLine(yStar, dmcMean, DARK_GREEN, { width: 1.5, label: "direct MC mean" });
  chart.seriesLine(yStar, pTrue, BLUE, { width: 1.5, label: "exact probability" });
  return chart.render();
}

/** Coefficient of variation versus threshold for both methods. */
export function sweepCov(sweep: Table): string {
  const yStar = numericColumn(sweep, "y_star");
  const ssCov = numericColumn(sweep, "ss_cov");
  const dmcCov = numericColumn(sweep, "dmc_cov");
  const covTheory = numericColumn(sweep, "dmc_cov_theory");

  const yDomain = paddedLog(extent(positives(ssCov, dmcCov, covTheory)), 2);
  const chart = new Chart(
    linearScale(padded(extent(yStar), 0.02), [PLOT.x0, PLOT.x1]),
    logScale(yDomain, [PLOT.y0, PLOT.y1]),
    "Estimator coefficient of variation versus critical threshold",
    "critical threshold",
    "coefficient of variation",
  );
  chart.seriesLine(yStar, covTheory, LIGHT_GREEN,
    { dash: "3 3", width: 1.5, label: "direct MC theory" });
  chart.seriesLine(yStar, dmcCov, DARK_GREEN, { width: 1.5, label: "direct MC sample" });
  chart.seriesLine(yStar, ssCov, RED, { width: 2, label: "subset simulation" });
  chart.seriesPoints(yStar, ssCov, RED, { r: 2.2 });
  return chart.render();
}

/** Staircase of the mean total sample budget versus failure probability. */
export function budget(sweep: Table): string {
  const pTrue = numericColumn(sweep, "p_true");
  const totals = numericColumn(sweep, "ss_mean_total_samples");

  const chart = new Chart(
    logScale(paddedLog(extent(positives(pTrue)), 2), [PLOT.x0, PLOT.x1]),
    linearScale(padded([0, extent(totals)[1]], 0.05), [PLOT.y0, PLOT.y1]),
    "Mean total samples versus failure probability",
    "failure probability",
    "mean total samples",
  );
  const order = pTrue.map((_, i) => i)
    .sort((a, b) => pTrue[a] - pTrue[b]);
  chart.seriesLine(order.map((i) => pTrue[i]), order.map((i) => totals[i]),
    RED, { width: 2, label: "subset simulation" });
  chart.seriesPoints(pTrue, totals, RED, { r: 2.2 });
  return chart.render();
}

/** Per-replicate estimates with the mean and exact reference lines. */
export function perRun(runs: Table): string {
  const replicate = numericColumn(runs, "replicate");
  const pHat = numericColumn(runs, "p_hat");
  const pTrue = numericColumn(runs, "p_true");
  const pHatMean = numericColumn(runs, "p_hat_mean");

  const yDomain = paddedLog(
    extent(positives(pHat, pTrue, pHatMean)), 2.5);
  const chart = new Chart(
    linearScale(padded(extent(replicate), 0.02), [PLOT.x0, PLOT.x1]),
    logScale(yDomain, [PLOT.y0, PLOT.y1]),
    "Estimates across independent runs",
    "run index",
    "failure probability estimate",
  );
  // reference lines carry the values written by the producer, verbatim
  chart.referenceLine(pHatMean[0], RED,
    { dash: "6 3", id: "mean-line", label: "mean estimate" });
  chart.referenceLine(pTrue[0], BLUE,
    { dash: "6 3", id: "truth-line", label: "exact probability" });
  chart.seriesPoints(replicate, pHat, "#222", { r: 2.4, label: "run estimate" });
  return chart.render();
}

/** Sorted response curves, one per level. */
export function responses(table: Table): string {
  const level = numericColumn(table, "level");
  const rank = numericColumn(table, "rank");
  const response = numericColumn(table, "response");

  const chart = new Chart(
    linearScale(padded([1, extent(rank)[1]], 0.02), [PLOT.x0, PLOT.x1]),
    linearScale(padded(extent(response), 0.05), [PLOT.y0, PLOT.y1]),
    "Sorted system responses per level",
    "rank",
    "response",
  );
  const groups = [...groupByLevel(level).entries()].sort((a, b) => a[0] - b[0]);
  for (const [levelIndex, rows] of groups) {
    chart.seriesLine(rows.map((i) => rank[i]), rows.map((i) => response[i]),
      levelColor(levelIndex), { width: 1.5, label: `level ${levelIndex}` });
  }
  return chart.render();
}

/** Intermediate threshold ladder across conditional levels. */
export function thresholds(levels: Table): string {
  const level = numericColumn(levels, "level");
  const threshold = column(levels, "threshold");

  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = 0; i < level.length; i++) {
    const t = threshold[i];
    if (t === null || !Number.isFinite(t)) continue;  // level 0 is -inf
    xs.push(level[i]);
    ys.push(t);
  }
  if (xs.length === 0) {
    throw new SchemaError("no finite thresholds to plot (single-level run?)");
  }
  const chart = new Chart(
    linearScale(padded(extent(xs), 0.05), [PLOT.x0, PLOT.x1]),
    linearScale(padded(extent(ys), 0.08), [PLOT.y0, PLOT.y1]),
    "Intermediate critical thresholds",
    "conditional level",
    "threshold",
  );
  chart.seriesLine(xs, ys, RED, { width: 2, label: "threshold" });
  chart.seriesPoints(xs, ys, RED, { r: 3 });
  return chart.render();
}
