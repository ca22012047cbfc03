// Chart-option builders: pure functions from CSV rows to echarts options.
// All science stays upstream; this file only groups, scales and labels.

import type { EChartsOption, SeriesOption } from "echarts";
import { CsvTable, requireColumns, num } from "./csv.js";

export type FigureKind = "tv" | "bler" | "thresholds";

const TV_COLUMNS = ["q", "iteration", "tv"];
const BLER_COLUMNS = ["q", "decoder", "delta", "bler"];
const BOUNDS_COLUMNS = ["q", "delta", "rcu_cw", "rcu_ml", "na_bler"];
const THRESH_COLUMNS = ["q", "dv", "dc", "decoder", "threshold"];

function groupBy(rows: Record<string, string>[], keyCols: string[]) {
  const groups = new Map<string, Record<string, string>[]>();
  for (const row of rows) {
    const key = keyCols.map((c) => row[c]).join(" ");
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }
  return groups;
}

export function isBoundsTable(table: CsvTable): boolean {
  return BOUNDS_COLUMNS.every((c) => table.columns.includes(c));
}

/** TV-distance evolution: one curve per ring (q), linear axes. */
export function buildTvOption(tables: CsvTable[]): EChartsOption {
  const series: SeriesOption[] = [];
  for (const table of tables) {
    requireColumns(table, TV_COLUMNS, "tv figure");
    for (const [key, rows] of groupBy(table.rows, ["q", "dv", "dc"])) {
      const [q, dv, dc] = key.split(" ");
      series.push({
        name: `Z${q} (${dv},${dc})`,
        type: "line",
        showSymbol: false,
        data: rows.map((r) => [num(r, "iteration"), num(r, "tv")]),
      });
    }
  }
  if (series.length === 0) throw new Error("tv figure: no data rows");
  return {
    animation: false,
    legend: { top: 4 },
    grid: { left: 70, right: 20, top: 40, bottom: 50 },
    xAxis: { type: "value", name: "iteration", nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "TV distance", nameLocation: "middle", nameGap: 50 },
    series,
  };
}

/** BLER vs delta, log-y; one solid curve per (q, decoder) group in the
 * simulation rows, dashed overlays for any benchmark (bounds) tables. */
export function buildBlerOption(tables: CsvTable[]): EChartsOption {
  const series: SeriesOption[] = [];
  let sawSim = false;
  for (const table of tables) {
    if (isBoundsTable(table)) {
      for (const [q, rows] of groupBy(table.rows, ["q"])) {
        for (const col of ["rcu_cw", "rcu_ml", "na_bler"]) {
          series.push({
            name: `Z${q} ${col}`,
            type: "line",
            showSymbol: false,
            lineStyle: { type: "dashed" },
            data: rows
              .map((r) => [num(r, "delta"), num(r, col)] as [number, number])
              .filter(([, y]) => y > 0),
          });
        }
      }
      continue;
    }
    requireColumns(table, BLER_COLUMNS, "bler figure");
    sawSim = true;
    for (const [key, rows] of groupBy(table.rows, ["q", "decoder"])) {
      const [q, decoder] = key.split(" ");
      series.push({
        name: `Z${q} ${decoder}`,
        type: "line",
        data: rows
          .map((r) => [num(r, "delta"), num(r, "bler")] as [number, number])
          .filter(([, y]) => y > 0), // log axis cannot show exact zeros
      });
    }
  }
  if (!sawSim) throw new Error("bler figure: no simulation rows");
  return {
    animation: false,
    legend: { top: 4 },
    grid: { left: 80, right: 20, top: 40, bottom: 50 },
    xAxis: { type: "value", name: "delta", nameLocation: "middle", nameGap: 28 },
    yAxis: {
      type: "log",
      name: "block error rate",
      nameLocation: "middle",
      nameGap: 60,
    },
    series,
  };
}

/** Decoding thresholds: delta* versus q, one scatter series per decoder,
 * rendered as vertical-marker-style stems. */
export function buildThresholdsOption(tables: CsvTable[]): EChartsOption {
  const series: SeriesOption[] = [];
  for (const table of tables) {
    requireColumns(table, THRESH_COLUMNS, "thresholds figure");
    for (const [decoder, rows] of groupBy(table.rows, ["decoder"])) {
      series.push({
        name: decoder,
        type: "scatter",
        symbolSize: 10,
        data: rows.map((r) => [num(r, "q"), num(r, "threshold")]),
      });
    }
  }
  if (series.length === 0) throw new Error("thresholds figure: no data rows");
  return {
    animation: false,
    legend: { top: 4 },
    grid: { left: 70, right: 20, top: 40, bottom: 50 },
    xAxis: { type: "value", name: "q", nameLocation: "middle", nameGap: 28, minInterval: 1 },
    yAxis: { type: "value", name: "threshold delta*", nameLocation: "middle", nameGap: 50 },
    series,
  };
}

export function buildOption(kind: FigureKind, tables: CsvTable[]): EChartsOption {
  switch (kind) {
    case "tv":
      return buildTvOption(tables);
    case "bler":
      return buildBlerOption(tables);
    case "thresholds":
      return buildThresholdsOption(tables);
  }
}
