/** Shared synthetic CSV texts matching the producer's formats. */

export const COV_TEXT = [
  "# basis: individual",
  "# n_modes: 2",
  "# profile: r0",
  "# z_mm: 5.0",
  "1.0,0.005,-0.5,0.0",
  "0.005,1.0,0.0,0.5",
  "-0.5,0.0,1.0,0.0",
  "0.0,0.5,0.0,1.0",
  "",
].join("\n");

export function vlfText(nModes: number, coupling: string, sets = ["odd", "even"]): string {
  const lines = [
    `# coupling_per_mm: ${coupling}`,
    `# n_modes: ${nModes}`,
    "# profile: r0",
    "# threshold: 4.0",
    "# transmittance: 1.0",
    "z_mm,set,mode_a,mode_b,theta_a_rad,theta_b_rad,value,value_lossless,fully_inseparable",
  ];
  const pairs: Record<string, [number, number]> = { odd: [1, 3], even: [2, 4] };
  for (const [z, value] of [
    ["0.0", "4.0"],
    ["10.0", "3.2"],
    ["20.0", "2.5"],
  ]) {
    for (const set of sets) {
      const [a, b] = pairs[set];
      const verdict = value === "4.0" ? "false" : "true";
      lines.push(`${z},${set},${a},${b},0.0,1.5707963267948966,${value},${value},${verdict}`);
    }
  }
  return lines.join("\n") + "\n";
}
