/** Witness-vs-z curves for one or more sweep CSVs, threshold rule at 4. */

import { VlfData, VlfRow } from "./csv.js";
import { esc, niceTicks, px, svgDocument, tickLabel } from "./svg.js";

export const THRESHOLD = 4.0;

const PALETTE = ["#1b6ca8", "#d1495b", "#2e8b57", "#8a5fbf", "#c98a2b", "#4a4a4a"];
const EVEN_SET_DASH = "5 3";

interface Series {
  label: string;
  color: string;
  dash: string | null;
  points: Array<{ z: number; value: number }>;
}

function fileLabel(data: VlfData): string {
  const n = data.meta.n_modes;
  const coupling = data.meta.coupling_per_mm;
  if (n === undefined || coupling === undefined) {
    return data.source.replace(/^.*[\\/]/, "").replace(/\.csv$/, "");
  }
  const t = data.meta.transmittance;
  const loss = t !== undefined && t !== "1.0" ? `, T=${t}` : "";
  return `N=${n}, J=${coupling}${loss}`;
}

/** One curve per parity set: the first adjacent pair, which by ring symmetry
 * carries the same value as the rest of its set. */
function seriesOf(data: VlfData, color: string): Series[] {
  const out: Series[] = [];
  for (const set of ["odd", "even"]) {
    const rows = data.rows.filter((r) => r.set === set);
    if (rows.length === 0) continue;
    const first = rows[0];
    const samePair = (r: VlfRow) => r.modeA === first.modeA && r.modeB === first.modeB;
    const points = rows
      .filter(samePair)
      .map((r) => ({ z: r.z, value: r.value }))
      .sort((a, b) => a.z - b.z);
    out.push({
      label: `${fileLabel(data)} (${set})`,
      color,
      dash: set === "even" ? EVEN_SET_DASH : null,
      points,
    });
  }
  return out;
}

export function renderCurves(files: VlfData[]): string {
  const series = files.flatMap((data, i) => seriesOf(data, PALETTE[i % PALETTE.length]));
  const values = series.flatMap((s) => s.points.map((p) => p.value));
  const zs = series.flatMap((s) => s.points.map((p) => p.z));

  const width = 640;
  const height = 420;
  const left = 58;
  const top = 46;
  const right = width - 18;
  const bottom = height - 46;

  const zMax = Math.max(...zs, 1e-9);
  const yLo = Math.min(...values, THRESHOLD) - 0.05;
  const yHi = Math.max(...values, THRESHOLD) + 0.05;
  const sx = (z: number) => left + ((right - left) * z) / zMax;
  const sy = (v: number) => bottom - ((bottom - top) * (v - yLo)) / (yHi - yLo);

  const parts: string[] = [];
  const profiles = [...new Set(files.map((f) => f.meta.profile ?? "?"))].join(", ");
  parts.push(
    `<text x="${left}" y="20" font-size="13">pairwise variance witness along z - ` +
      `profile ${esc(profiles)}</text>`
  );

  for (const tick of niceTicks(yLo, yHi)) {
    const y = sy(tick);
    parts.push(
      `<line x1="${px(left)}" y1="${px(y)}" x2="${px(right)}" y2="${px(y)}" ` +
        `stroke="#dddddd" stroke-width="0.5"/>`
    );
    parts.push(
      `<text x="${px(left - 6)}" y="${px(y + 3)}" font-size="9" text-anchor="end">` +
        `${esc(tickLabel(tick))}</text>`
    );
  }
  for (const tick of niceTicks(0, zMax)) {
    const x = sx(tick);
    parts.push(
      `<line x1="${px(x)}" y1="${px(top)}" x2="${px(x)}" y2="${px(bottom)}" ` +
        `stroke="#dddddd" stroke-width="0.5"/>`
    );
    parts.push(
      `<text x="${px(x)}" y="${px(bottom + 14)}" font-size="9" text-anchor="middle">` +
        `${esc(tickLabel(tick))}</text>`
    );
  }

  // separability threshold: every value below this line certifies the pair
  const yThresh = sy(THRESHOLD);
  parts.push(
    `<line x1="${px(left)}" y1="${px(yThresh)}" x2="${px(right)}" y2="${px(yThresh)}" ` +
      `stroke="#555555" stroke-width="1" stroke-dasharray="8 3 2 3"/>`
  );
  parts.push(
    `<text x="${px(right)}" y="${px(yThresh - 4)}" font-size="9" fill="#555555" ` +
      `text-anchor="end">separable states stay at or above 4</text>`
  );

  for (const s of series) {
    const coords = s.points.map((p) => `${px(sx(p.z))},${px(sy(p.value))}`).join(" ");
    const dash = s.dash === null ? "" : ` stroke-dasharray="${s.dash}"`;
    parts.push(
      `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} points="${coords}"/>`
    );
  }

  const legendX = left + 10;
  let legendY = top + 12;
  for (const s of series) {
    const dash = s.dash === null ? "" : ` stroke-dasharray="${s.dash}"`;
    parts.push(
      `<line x1="${px(legendX)}" y1="${px(legendY - 3)}" x2="${px(legendX + 22)}" ` +
        `y2="${px(legendY - 3)}" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    parts.push(
      `<text x="${px(legendX + 28)}" y="${px(legendY)}" font-size="9">${esc(s.label)}</text>`
    );
    legendY += 13;
  }

  parts.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${px(right - left)}" ` +
      `height="${px(bottom - top)}" fill="none" stroke="#333333" stroke-width="1"/>`
  );
  parts.push(
    `<text x="${px((left + right) / 2)}" y="${px(height - 12)}" font-size="11" ` +
      `text-anchor="middle">z (mm)</text>`
  );
  parts.push(
    `<text x="14" y="${px((top + bottom) / 2)}" font-size="11" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${px((top + bottom) / 2)})">witness value</text>`
  );

  return svgDocument(width, height, parts.join("\n") + "\n");
}
