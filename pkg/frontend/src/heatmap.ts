/** Covariance matrix -> diverging-colour heatmap with mode-block rulings. */

import { CovarianceData } from "./csv.js";
import { esc, px, svgDocument } from "./svg.js";

export interface HeatmapOptions {
  cellSize?: number;
  /** |entry| below this renders white; display-only, the data is untouched. */
  displayThreshold?: number;
}

const POSITIVE: [number, number, number] = [178, 24, 43]; // red end
const NEGATIVE: [number, number, number] = [33, 102, 172]; // blue end
const DEFAULT_THRESHOLD = 1e-2; // matches the producer's display CSVs

function blend(toward: [number, number, number], t: number): string {
  const hex = toward
    .map((channel) => Math.round(255 + (channel - 255) * t))
    .map((channel) => channel.toString(16).padStart(2, "0"))
    .join("");
  return `#${hex}`;
}

export function cellColor(value: number, vmax: number, threshold: number): string {
  if (Math.abs(value) < threshold) return "#ffffff";
  const t = Math.min(1, Math.abs(value) / vmax);
  return blend(value > 0 ? POSITIVE : NEGATIVE, t);
}

export function renderHeatmap(data: CovarianceData, options: HeatmapOptions = {}): string {
  const cell = options.cellSize ?? 14;
  const threshold =
    options.displayThreshold ?? Number(data.meta.display_threshold ?? DEFAULT_THRESHOLD);
  const m = data.matrix;
  const dim = m.length;
  const n = data.nModes;
  let vmax = 0;
  for (const row of m) for (const v of row) vmax = Math.max(vmax, Math.abs(v));
  if (vmax === 0) vmax = 1;

  const left = 36;
  const top = 52;
  const grid = dim * cell;
  const barWidth = 14;
  const width = left + grid + 24 + barWidth + 44;
  const height = top + grid + 28;

  const parts: string[] = [];
  const title = `covariance - profile ${data.meta.profile ?? "?"}, N=${n}, z=${
    data.meta.z_mm ?? "?"
  } mm`;
  parts.push(`<text x="${left}" y="18" font-size="13">${esc(title)}</text>`);
  parts.push(
    `<text x="${left}" y="34" font-size="10" fill="#555">basis ${esc(
      data.meta.basis ?? "?"
    )}; |entry| &lt; ${threshold} blanked</text>`
  );

  for (let i = 0; i < dim; i++) {
    for (let j = 0; j < dim; j++) {
      const fill = cellColor(m[i][j], vmax, threshold);
      parts.push(
        `<rect x="${px(left + j * cell)}" y="${px(top + i * cell)}" ` +
          `width="${cell}" height="${cell}" fill="${fill}"/>`
      );
    }
  }

  // mode-block rulings every second quadrature line
  for (let k = 0; k <= n; k++) {
    const offset = k * 2 * cell;
    parts.push(
      `<line x1="${px(left)}" y1="${px(top + offset)}" x2="${px(left + grid)}" ` +
        `y2="${px(top + offset)}" stroke="#333333" stroke-opacity="0.3" stroke-width="0.5"/>`
    );
    parts.push(
      `<line x1="${px(left + offset)}" y1="${px(top)}" x2="${px(left + offset)}" ` +
        `y2="${px(top + grid)}" stroke="#333333" stroke-opacity="0.3" stroke-width="0.5"/>`
    );
  }
  parts.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${grid}" height="${grid}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`
  );

  for (let k = 0; k < n; k++) {
    const center = (k * 2 + 1) * cell;
    parts.push(
      `<text x="${px(left + center)}" y="${px(top + grid + 14)}" font-size="9" ` +
        `text-anchor="middle">${k + 1}</text>`
    );
    parts.push(
      `<text x="${px(left - 6)}" y="${px(top + center + 3)}" font-size="9" ` +
        `text-anchor="end">${k + 1}</text>`
    );
  }

  // colour bar: +vmax at the top through white to -vmax
  const barX = left + grid + 24;
  const steps = 40;
  const stepHeight = grid / steps;
  for (let s = 0; s < steps; s++) {
    const value = vmax * (1 - (2 * (s + 0.5)) / steps);
    parts.push(
      `<rect x="${px(barX)}" y="${px(top + s * stepHeight)}" width="${barWidth}" ` +
        `height="${px(stepHeight + 0.5)}" fill="${cellColor(value, vmax, 0)}"/>`
    );
  }
  parts.push(
    `<rect x="${px(barX)}" y="${px(top)}" width="${barWidth}" height="${grid}" ` +
      `fill="none" stroke="#333333" stroke-width="0.5"/>`
  );
  const barLabels: Array<[number, string]> = [
    [top + 3, Number(vmax.toPrecision(3)).toString()],
    [top + grid / 2 + 3, "0"],
    [top + grid + 3, Number((-vmax).toPrecision(3)).toString()],
  ];
  for (const [y, label] of barLabels) {
    parts.push(
      `<text x="${px(barX + barWidth + 4)}" y="${px(y)}" font-size="9">${esc(label)}</text>`
    );
  }

  return svgDocument(width, height, parts.join("\n") + "\n");
}
