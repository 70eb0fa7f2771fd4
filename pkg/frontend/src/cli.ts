#!/usr/bin/env node
/**
 * ringspdc-plots: render ringspdc CSV outputs as SVG.
 *
 *   node dist/cli.js --style heatmap    --input covariance_r0.csv --out fig2.svg
 *   node dist/cli.js --style vlf-curves --input a.csv --input b.csv --out fig3.svg
 *
 * The renderer only reads the CSVs; it never rewrites them.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { CsvFormatError, parseCovarianceCsv, parseVlfCsv } from "./csv.js";
import { renderCurves } from "./curves.js";
import { renderHeatmap } from "./heatmap.js";

const USAGE =
  "usage: ringspdc-plots --style heatmap|vlf-curves --input data.csv [--input ...] --out figure.svg";

export function run(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        style: { type: "string" },
        input: { type: "string", multiple: true },
        out: { type: "string" },
        threshold: { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const inputs = values.input ?? [];
  if (!values.style || !values.out || inputs.length === 0) {
    console.error(USAGE);
    return 2;
  }
  try {
    let svg: string;
    if (values.style === "heatmap") {
      if (inputs.length !== 1) {
        throw new CsvFormatError(`heatmap takes exactly one covariance CSV, got ${inputs.length}`);
      }
      const data = parseCovarianceCsv(readFileSync(inputs[0], "utf8"), inputs[0]);
      const threshold = values.threshold === undefined ? undefined : Number(values.threshold);
      svg = renderHeatmap(data, { displayThreshold: threshold });
    } else if (values.style === "vlf-curves") {
      svg = renderCurves(inputs.map((p) => parseVlfCsv(readFileSync(p, "utf8"), p)));
    } else {
      throw new CsvFormatError(`unknown style ${values.style}; expected heatmap or vlf-curves`);
    }
    writeFileSync(values.out, svg);
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(process.argv.slice(2)));
}
