import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { run } from "../src/cli.js";
import { COV_TEXT, vlfText } from "./fixtures.js";

let dir: string;

beforeEach(() => {
  dir = mkdtempSync(join(tmpdir(), "ringspdc-plots-"));
  vi.spyOn(console, "log").mockImplementation(() => {});
  vi.spyOn(console, "error").mockImplementation(() => {});
});

afterEach(() => {
  vi.restoreAllMocks();
});

function write(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

describe("cli", () => {
  it("renders a heatmap", () => {
    const input = write("cov.csv", COV_TEXT);
    const out = join(dir, "fig.svg");
    expect(run(["--style", "heatmap", "--input", input, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("renders curves from several sweeps", () => {
    const a = write("a.csv", vlfText(4, "0.45"));
    const b = write("b.csv", vlfText(8, "100.0"));
    const out = join(dir, "fig.svg");
    const code = run(["--style", "vlf-curves", "--input", a, "--input", b, "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("N=8, J=100.0");
  });

  it("reruns byte-identically", () => {
    const input = write("cov.csv", COV_TEXT);
    const outA = join(dir, "a.svg");
    const outB = join(dir, "b.svg");
    run(["--style", "heatmap", "--input", input, "--out", outA]);
    run(["--style", "heatmap", "--input", input, "--out", outB]);
    expect(readFileSync(outA, "utf8")).toBe(readFileSync(outB, "utf8"));
  });

  it("never rewrites its inputs", () => {
    const input = write("cov.csv", COV_TEXT);
    run(["--style", "heatmap", "--input", input, "--out", join(dir, "fig.svg")]);
    expect(readFileSync(input, "utf8")).toBe(COV_TEXT);
  });

  it("rejects unknown styles", () => {
    const input = write("cov.csv", COV_TEXT);
    expect(run(["--style", "contour", "--input", input, "--out", join(dir, "x.svg")])).toBe(2);
  });

  it("rejects missing arguments", () => {
    expect(run([])).toBe(2);
    expect(run(["--style", "heatmap", "--out", "x.svg"])).toBe(2);
    expect(run(["--unknown-flag"])).toBe(2);
  });

  it("rejects a heatmap over several inputs", () => {
    const input = write("cov.csv", COV_TEXT);
    const code = run([
      "--style", "heatmap", "--input", input, "--input", input, "--out", join(dir, "x.svg"),
    ]);
    expect(code).toBe(2);
  });

  it("reports missing files instead of crashing", () => {
    expect(
      run(["--style", "heatmap", "--input", join(dir, "nope.csv"), "--out", join(dir, "x.svg")])
    ).toBe(2);
  });

  it("reports malformed data instead of crashing", () => {
    const input = write("bad.csv", "# basis: individual\n1.0,2.0\n3.0\n");
    expect(run(["--style", "heatmap", "--input", input, "--out", join(dir, "x.svg")])).toBe(2);
  });
});
