#!/usr/bin/env node
/**
 * RD-curve plotter for rate-distortion sweep CSVs.
 *
 * Usage:
 *   node dist/cli.js --csv rd.csv [--csv more.csv ...] --axis gpp --out rd.svg
 *
 * Multiple --csv files overlay their curves in one figure; when two files
 * carry the same method name the later series is labelled "method (file)".
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseArgs } from "node:util";
import { buildSeries, parseRdCsv, RateAxis, RDSeries, renderSvg } from "./rdplot.js";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        csv: { type: "string", multiple: true },
        axis: { type: "string", default: "gpp" },
        out: { type: "string" },
      },
      allowPositionals: false,
    });
  } catch (err) {
    console.error(`rdplot: ${(err as Error).message}`);
    return 1;
  }
  const { csv, axis, out } = parsed.values;
  if (!csv || csv.length === 0 || !out) {
    console.error("rdplot: --csv <file> and --out <file> are required");
    return 1;
  }
  if (axis !== "gpp" && axis !== "bpp") {
    console.error(`rdplot: --axis must be gpp or bpp, got ${JSON.stringify(axis)}`);
    return 1;
  }

  const seriesList: RDSeries[] = [];
  const seen = new Set<string>();
  try {
    for (const path of csv) {
      const rows = parseRdCsv(readFileSync(path, "utf-8"));
      const { series, notices } = buildSeries(rows, axis as RateAxis);
      for (const notice of notices) console.error(`rdplot: notice: ${notice}`);
      for (const s of series) {
        if (seen.has(s.method)) {
          seriesList.push({ ...s, method: `${s.method} (${basename(path)})` });
        } else {
          seen.add(s.method);
          seriesList.push(s);
        }
      }
    }
    writeFileSync(out, renderSvg(seriesList, axis as RateAxis));
  } catch (err) {
    console.error(`rdplot: ${(err as Error).message}`);
    return 1;
  }
  console.log(`SVG -> ${out}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
