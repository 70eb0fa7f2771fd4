import { describe, expect, it } from "vitest";

import { parseVlfCsv } from "../src/csv.js";
import { renderCurves } from "../src/curves.js";
import { vlfText } from "./fixtures.js";

const fileA = parseVlfCsv(vlfText(4, "0.45"), "a.csv");
const fileB = parseVlfCsv(vlfText(8, "100.0"), "b.csv");

describe("renderCurves", () => {
  it("is deterministic", () => {
    expect(renderCurves([fileA, fileB])).toBe(renderCurves([fileA, fileB]));
  });

  it("draws one curve per parity set per file", () => {
    const svg = renderCurves([fileA, fileB]);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(4);
    expect(svg).toContain("N=4, J=0.45 (odd)");
    expect(svg).toContain("N=4, J=0.45 (even)");
    expect(svg).toContain("N=8, J=100.0 (odd)");
  });

  it("skips parity sets absent from a file", () => {
    const oddOnly = parseVlfCsv(vlfText(4, "0.45", ["odd"]), "odd.csv");
    const svg = renderCurves([oddOnly]);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(1);
  });

  it("rules the separability threshold", () => {
    const svg = renderCurves([fileA]);
    expect(svg).toContain('stroke-dasharray="8 3 2 3"');
    expect(svg).toContain("separable states stay at or above 4");
  });

  it("orders points by z even when rows arrive shuffled", () => {
    const lines = vlfText(4, "0.45").split("\n");
    const shuffled = [...lines.slice(0, 6), lines[10], lines[6], lines[8]].join("\n") + "\n";
    const svg = renderCurves([parseVlfCsv(shuffled, "shuffled.csv")]);
    const points = /points="([^"]+)"/.exec(svg)?.[1].split(" ") ?? [];
    const xs = points.map((p) => Number(p.split(",")[0]));
    expect(xs).toEqual([...xs].sort((a, b) => a - b));
  });

  it("keeps the threshold inside the y range even when all curves violate", () => {
    const svg = renderCurves([fileA]);
    expect(svg).toContain(">4<"); // tick label at the threshold
  });
});
