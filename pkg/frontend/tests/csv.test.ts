import { describe, expect, it } from "vitest";

import { CsvFormatError, parseCovarianceCsv, parseVlfCsv } from "../src/csv.js";
import { COV_TEXT, vlfText } from "./fixtures.js";

describe("parseCovarianceCsv", () => {
  it("reads metadata and the matrix", () => {
    const data = parseCovarianceCsv(COV_TEXT);
    expect(data.nModes).toBe(2);
    expect(data.meta.basis).toBe("individual");
    expect(data.meta.z_mm).toBe("5.0");
    expect(data.matrix[0][2]).toBe(-0.5);
    expect(data.matrix).toHaveLength(4);
  });

  it("rejects a header-only file", () => {
    expect(() => parseCovarianceCsv("# basis: individual\n")).toThrow(/no data rows/);
  });

  it("rejects a ragged matrix", () => {
    expect(() => parseCovarianceCsv("1.0,2.0\n3.0\n")).toThrow(/not square/);
  });

  it("rejects an odd dimension", () => {
    expect(() => parseCovarianceCsv("1.0,0.0,0.0\n0.0,1.0,0.0\n0.0,0.0,1.0\n")).toThrow(
      /not square/
    );
  });

  it("rejects metadata that contradicts the matrix", () => {
    const text = COV_TEXT.replace("# n_modes: 2", "# n_modes: 3");
    expect(() => parseCovarianceCsv(text)).toThrow(/n_modes=3/);
  });

  it("rejects non-numeric cells", () => {
    expect(() => parseCovarianceCsv("1.0,oops\n0.0,1.0\n")).toThrow(CsvFormatError);
  });
});

describe("parseVlfCsv", () => {
  it("types the witness rows", () => {
    const data = parseVlfCsv(vlfText(4, "0.45"));
    expect(data.rows).toHaveLength(6);
    expect(data.rows[0]).toMatchObject({
      z: 0,
      set: "odd",
      modeA: 1,
      modeB: 3,
      value: 4,
      fullyInseparable: false,
    });
    expect(data.rows.at(-1)).toMatchObject({ z: 20, value: 2.5, fullyInseparable: true });
    expect(data.meta.coupling_per_mm).toBe("0.45");
  });

  it("rejects missing columns", () => {
    const text = vlfText(4, "0.45").replace(",value_lossless", "");
    expect(() => parseVlfCsv(text)).toThrow(/missing columns value_lossless/);
  });

  it("rejects files with no rows", () => {
    const headerOnly = vlfText(4, "0.45").split("\n").slice(0, 6).join("\n") + "\n";
    expect(() => parseVlfCsv(headerOnly)).toThrow(/no witness rows/);
  });

  it("rejects a malformed verdict", () => {
    const text = vlfText(4, "0.45").replace(",true", ",yes");
    expect(() => parseVlfCsv(text)).toThrow(/true\/false/);
  });
});
