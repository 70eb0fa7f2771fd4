"""Command-line front end: covariance dumps, witness sweeps, self-checks.

All outputs are deterministic (seed-free physics, repr-formatted floats, no
timestamps), so reruns of the same manifest are byte-identical.  Every CSV
carries a '#' header with the sha256 fingerprint of the resolved config.

Config files are JSON:

    {
      "n_modes": 8,
      "coupling_per_mm": 0.45,
      "eta_per_mm": 0.015,
      "pump_profile": "r0",            // r0 | rN2 | rN4 | general:<r>
                                        // or {"custom_phases_rad": [...]}
      "z_max_mm": 20.0,
      "z_steps": 400,
      "transmittance": 1.0
    }

The figure subcommand replays the versioned manifests shipped under
ringspdc/manifests, one CSV set per panel.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .fourier import dft_matrix, verify_orthonormality
from .gaussian import (
    DISPLAY_THRESHOLD,
    apply_loss,
    covariance_at,
    covariance_to_csv,
    purity_and_symplectic_report,
    vacuum_covariance,
)
from .model import (
    ArrayConfig,
    ConfigError,
    PumpProfile,
    build_drift_matrix,
    symplectic_form,
    require_valid,
    validate_config,
)
from .propagate import analytic_general_r, numerical_propagator
from .witness import SEPARABILITY_THRESHOLD, full_inseparability_check, partition_mode_sets, vlf_pair

CSV_FORMAT_VERSION = "1"

CONFIG_KEYS = {
    "n_modes",
    "coupling_per_mm",
    "eta_per_mm",
    "pump_profile",
    "z_max_mm",
    "z_steps",
    "transmittance",
}
REQUIRED_CONFIG_KEYS = {"n_modes", "coupling_per_mm", "eta_per_mm", "z_max_mm"}

VLF_CSV_COLUMNS = (
    "z_mm,set,mode_a,mode_b,theta_a_rad,theta_b_rad,value,value_lossless,fully_inseparable"
)


@dataclass(frozen=True)
class RunManifest:
    """Fully resolved description of one deterministic run."""

    command: str  # "covariance" | "vlf-sweep"
    config: ArrayConfig
    output_dir: Path
    label: str
    route: str = "auto"  # "auto" | "analytic" | "oracle"


def parse_profile_token(token) -> PumpProfile:
    """Pump profile from a CLI/JSON token; see module docstring for forms."""
    if isinstance(token, dict):
        phases = token.get("custom_phases_rad")
        if phases is None:
            raise ConfigError(
                "custom pump object needs the key 'custom_phases_rad'"
            )
        return PumpProfile.custom(phases)
    if not isinstance(token, str):
        raise ConfigError(f"pump profile must be a string or object, got {token!r}")
    if token == "r0":
        return PumpProfile.uniform()
    if token == "rN2":
        return PumpProfile.alternating_pi()
    if token == "rN4":
        return PumpProfile.alternating_half_pi()
    if token.startswith("general:"):
        raw = token.partition(":")[2]
        try:
            return PumpProfile.general_shift(int(raw))
        except ValueError:
            raise ConfigError(f"bad shift {raw!r} in profile token {token!r}") from None
    if token.startswith("custom:"):
        path = Path(token.partition(":")[2])
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError(f"custom phase file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"custom phase file {path} is not valid JSON: {exc}") from None
        phases = data.get("phases_rad") if isinstance(data, dict) else data
        if not isinstance(phases, list):
            raise ConfigError(
                f"custom phase file {path} must hold a list or {{'phases_rad': [...]}}"
            )
        return PumpProfile.custom(phases)
    raise ConfigError(
        f"unknown pump profile token {token!r}; expected r0, rN2, rN4, "
        "general:<r> or custom:<file>"
    )


def parse_config(data: dict) -> ArrayConfig:
    """Strict JSON-dict to ArrayConfig conversion (unknown keys rejected)."""
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    missing = REQUIRED_CONFIG_KEYS - set(data)
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(sorted(missing))}")
    try:
        config = ArrayConfig(
            n_modes=int(data["n_modes"]),
            coupling=float(data["coupling_per_mm"]),
            eta_mag=float(data["eta_per_mm"]),
            pump=parse_profile_token(data.get("pump_profile", "r0")),
            z_max=float(data["z_max_mm"]),
            z_steps=int(data.get("z_steps", 400)),
            transmittance=float(data.get("transmittance", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from None
    require_valid(config)
    return config


def load_config(path) -> ArrayConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return parse_config(data)


def config_fingerprint(config: ArrayConfig) -> dict:
    """JSON-compatible resolved config, the hashing and manifest canonical form."""
    pump = config.pump
    profile = (
        {"custom_phases_rad": list(pump.phases)} if pump.kind == "custom" else pump.label()
    )
    return {
        "n_modes": config.n_modes,
        "coupling_per_mm": config.coupling,
        "eta_per_mm": config.eta_mag,
        "pump_profile": profile,
        "z_max_mm": config.z_max,
        "z_steps": config.z_steps,
        "transmittance": config.transmittance,
    }


def config_hash(config: ArrayConfig) -> str:
    payload = json.dumps(config_fingerprint(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _csv_header_lines(config: ArrayConfig, command: str, extra: dict | None = None) -> list[str]:
    meta = {
        "format_version": CSV_FORMAT_VERSION,
        "command": command,
        "config_hash": config_hash(config),
        "profile": config.pump.label(),
        "coupling_per_mm": repr(config.coupling),
        "eta_per_mm": repr(config.eta_mag),
        "n_modes": str(config.n_modes),
        "transmittance": repr(config.transmittance),
    }
    if extra:
        meta.update(extra)
    return [f"# {k}: {meta[k]}" for k in sorted(meta)]


def _sanitize(label: str) -> str:
    return label.replace(":", "-").replace("/", "-")


def run_covariance(manifest: RunManifest) -> list[Path]:
    """Covariance at z_max: one full CSV plus one display-thresholded copy."""
    config = manifest.config
    require_valid(config)
    cov = covariance_at(config, config.z_max, manifest.route)
    if config.transmittance < 1.0:
        cov = apply_loss(cov, config.transmittance)
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    header = {
        "command": "covariance",
        "config_hash": config_hash(config),
        "profile": config.pump.label(),
        "coupling_per_mm": repr(config.coupling),
        "eta_per_mm": repr(config.eta_mag),
        "transmittance": repr(config.transmittance),
        "route": manifest.route,
    }
    paths = []
    full = manifest.output_dir / f"covariance_{manifest.label}.csv"
    covariance_to_csv(cov, full, header)
    paths.append(full)
    display = manifest.output_dir / f"covariance_{manifest.label}_display.csv"
    covariance_to_csv(cov, display, header, display_threshold=DISPLAY_THRESHOLD)
    paths.append(display)
    report = purity_and_symplectic_report(cov)
    print(
        f"covariance {manifest.label}: z={cov.z:g} mm, det V={report.det_v:.6g}, "
        f"min eig(V+iOmega)={report.min_physicality_eig:.3g}, flags={','.join(report.flags)}"
    )
    for p in paths:
        print(f"wrote {p}")
    return paths


def _vlf_rows_at(config: ArrayConfig, z: float, route: str):
    """Witness chain rows for both parity sets at one z."""
    z = float(z)
    cov = covariance_at(config, z, route)
    t = config.transmittance
    lossy = apply_loss(cov, t) if t < 1.0 else cov
    rows = []
    for set_name, modes in zip(("odd", "even"), partition_mode_sets(config.n_modes)):
        report = full_inseparability_check(lossy, modes, transmittance_applied=t)
        lossless = (
            full_inseparability_check(cov, modes) if t < 1.0 else report
        )
        verdict = "true" if report.fully_inseparable else "false"
        for pw, pw0 in zip(report.pairs, lossless.pairs):
            rows.append(
                f"{z!r},{set_name},{pw.mode_a},{pw.mode_b},{pw.theta_a!r},"
                f"{pw.theta_b!r},{pw.value!r},{pw0.value!r},{verdict}"
            )
    return rows


def run_vlf_sweep(manifest: RunManifest) -> list[Path]:
    """Witness chain for both parity sets over the config z grid."""
    config = manifest.config
    require_valid(config)
    if config.n_modes < 4:
        raise ConfigError(
            f"vlf-sweep needs at least 4 modes for two 2-mode parity sets, got N={config.n_modes}"
        )
    zs = config.z_grid()
    workers = min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_z = list(pool.map(lambda z: _vlf_rows_at(config, z, manifest.route), zs))
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    path = manifest.output_dir / f"vlf_{manifest.label}.csv"
    lines = _csv_header_lines(
        config,
        "vlf-sweep",
        {
            "threshold": repr(SEPARABILITY_THRESHOLD),
            "route": manifest.route,
            "z_max_mm": repr(config.z_max),
            "z_steps": str(config.z_steps),
        },
    )
    lines.append(VLF_CSV_COLUMNS)
    for rows in per_z:
        lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")
    n_rows = sum(len(rows) for rows in per_z)
    print(f"vlf-sweep {manifest.label}: {len(zs)} z points, {n_rows} rows")
    print(f"wrote {path}")
    return [path]


# ---------------------------------------------------------------------------
# verify subcommand: fast end-to-end invariant table with negative controls.


def _maxdiff(a, b) -> float:
    return float(np.max(np.abs(a - b)))


def _verify_checks():
    """Yield (name, passed, detail) rows; all scales small enough to stay fast."""
    base = dict(coupling=0.45, eta_mag=0.015, z_max=20.0)

    resid = max(
        _maxdiff(dft_matrix(n).entries @ dft_matrix(n).entries.conj().T, np.eye(n))
        for n in range(1, 33)
    )
    yield "dft_unitarity", resid < 1e-12, f"max residual {resid:.2e} (N=1..32)"

    resid = max(
        verify_orthonormality(8, "r0"),
        verify_orthonormality(8, "rN2"),
        verify_orthonormality(8, "rN4"),
        verify_orthonormality(8, 3),
        verify_orthonormality(12, 5),
    )
    yield "orthonormality_identities", resid < 1e-12, f"max residual {resid:.2e}"

    omega = symplectic_form(8)
    resid = 0.0
    for profile in (
        PumpProfile.uniform(),
        PumpProfile.alternating_pi(),
        PumpProfile.alternating_half_pi(),
        PumpProfile.general_shift(3),
    ):
        drift = build_drift_matrix(ArrayConfig(n_modes=8, pump=profile, **base))
        resid = max(resid, _maxdiff(drift @ omega + omega @ drift.T, np.zeros((16, 16))))
    yield "drift_hamiltonian", resid < 1e-14, f"max |D Omega + Omega D^T| = {resid:.2e}"

    resid = 0.0
    for profile in (
        PumpProfile.uniform(),
        PumpProfile.alternating_pi(),
        PumpProfile.alternating_half_pi(),
    ):
        config = ArrayConfig(n_modes=8, pump=profile, **base)
        resid = max(
            resid,
            _maxdiff(
                covariance_at(config, 20.0, "analytic").matrix,
                covariance_at(config, 20.0, "oracle").matrix,
            ),
        )
    yield "closed_forms_vs_oracle", resid < 1e-9, f"max residual {resid:.2e} (N=8, z=20)"

    config = ArrayConfig(n_modes=8, pump=PumpProfile.general_shift(2), **base)
    resid = _maxdiff(
        covariance_at(config, 10.0, "analytic").matrix,
        covariance_at(config, 10.0, "oracle").matrix,
    )
    yield "general_shift_vs_oracle", resid < 1e-9, f"residual {resid:.2e} (N=8, r=2, z=10)"

    resid = 0.0
    for r in (8, 4, 2, 3):
        prop = analytic_general_r(8, base["coupling"], base["eta_mag"], r, 20.0)
        resid = max(resid, _maxdiff(prop.matrix @ omega @ prop.matrix.T, omega))
    yield "propagator_symplectic", resid < 1e-10, f"max residual {resid:.2e}"

    vac = vacuum_covariance(4)
    value = vlf_pair(vac, 1, 3, 0.0, np.pi / 2.0)
    yield "vacuum_witness_at_threshold", value == 4.0, f"value {value!r} (exact 4.0 expected)"

    config = ArrayConfig(n_modes=4, pump=PumpProfile.uniform(), **base)
    cov = covariance_at(config, 20.0, "auto")
    raw = vlf_pair(cov, 1, 3, 0.0, np.pi / 2.0)
    t = 0.5
    lossy = vlf_pair(apply_loss(cov, t), 1, 3, 0.0, np.pi / 2.0)
    resid = abs(lossy - (t * raw + 4.0 * (1.0 - t)))
    yield "loss_affine_law", resid < 1e-12, f"residual {resid:.2e} (T=0.5)"

    # Negative control: a single flipped coupling sign breaks the Hamiltonian
    # structure; the symplectic check must catch it, not pass it through.
    drift = build_drift_matrix(ArrayConfig(n_modes=8, pump=PumpProfile.uniform(), **base))
    corrupted = drift.copy()
    corrupted[0, 3] = -corrupted[0, 3]
    prop = numerical_propagator(corrupted, 20.0)
    resid = _maxdiff(prop.matrix @ omega @ prop.matrix.T, omega)
    yield "negative_control_sign_flip", resid > 1e-6, f"injected error detected, residual {resid:.2e}"

    try:
        parse_config(
            {
                "n_modes": 6,
                "coupling_per_mm": 0.45,
                "eta_per_mm": 0.015,
                "pump_profile": "rN4",
                "z_max_mm": 20.0,
            }
        )
    except ConfigError as exc:
        yield "config_rejection_n6_rn4", "divisible by 4" in str(exc), f"rejected: {exc}"
    else:
        yield "config_rejection_n6_rn4", False, "N=6 with rN4 was not rejected"


def run_verify(config_path=None) -> int:
    rows = list(_verify_checks())
    if config_path is not None:
        try:
            config = load_config(config_path)
        except ConfigError as exc:
            rows.append(("config_validation", False, str(exc)))
        else:
            warnings = [d.message for d in validate_config(config) if d.severity == "warning"]
            detail = "; ".join(warnings) if warnings else "valid"
            rows.append(("config_validation", True, detail))
    width = max(len(name) for name, _, _ in rows)
    failures = 0
    for name, passed, detail in rows:
        status = "PASS" if passed else "FAIL"
        failures += 0 if passed else 1
        print(f"{name:<{width}}  {status}  {detail}")
    print(f"{failures} of {len(rows)} checks failed" if failures else f"all {len(rows)} checks passed")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# figure subcommand: replay the versioned manifests.


def load_figure_manifest(which: int) -> dict:
    path = resources.files("ringspdc").joinpath("manifests", f"fig{which}.json")
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"no manifest for figure {which}") from None


def run_figure(which: int, output_dir: Path) -> list[Path]:
    manifest = load_figure_manifest(which)
    command = manifest["command"]
    written: list[Path] = []
    for run in manifest["runs"]:
        run_manifest = RunManifest(
            command=command,
            config=parse_config(run["config"]),
            output_dir=output_dir,
            label=_sanitize(run["label"]),
            route=run.get("route", "auto"),
        )
        if command == "covariance":
            written.extend(run_covariance(run_manifest))
        elif command == "vlf-sweep":
            written.extend(run_vlf_sweep(run_manifest))
        else:
            raise ConfigError(f"manifest for figure {which} has unknown command {command!r}")
    return written


# ---------------------------------------------------------------------------
# argument parsing


def _add_common_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="JSON config file")
    sub.add_argument(
        "--profile",
        help="override the config pump profile: r0 | rN2 | rN4 | general:<r> | custom:<file>",
    )
    sub.add_argument(
        "--loss",
        type=float,
        metavar="T",
        help="override the config transmittance (uniform loss channel)",
    )
    sub.add_argument("--out", default=".", help="output directory (default: cwd)")
    route = sub.add_mutually_exclusive_group()
    route.add_argument(
        "--oracle",
        action="store_true",
        help="force the matrix-exponential route",
    )
    route.add_argument(
        "--analytic",
        action="store_true",
        help="force the closed-form route (rejects custom pumps)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringspdc",
        description="Gaussian simulation and entanglement witnesses for "
        "ring-coupled down-conversion arrays",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    cov = subs.add_parser("covariance", help="covariance CSV at z_max")
    _add_common_run_flags(cov)

    sweep = subs.add_parser("vlf-sweep", help="witness chain over the z grid")
    _add_common_run_flags(sweep)

    verify = subs.add_parser("verify", help="invariant and negative-control table")
    verify.add_argument("--config", help="additionally validate this config file")

    figure = subs.add_parser("figure", help="replay a versioned figure manifest")
    figure.add_argument("which", type=int, choices=(2, 3, 4))
    figure.add_argument("--out", default=".", help="output directory (default: cwd)")

    return parser


def _manifest_from_args(args, command: str) -> RunManifest:
    config = load_config(args.config)
    if args.profile:
        config = dataclasses.replace(config, pump=parse_profile_token(args.profile))
        require_valid(config)
    if args.loss is not None:
        if not 0.0 <= args.loss <= 1.0:
            raise ConfigError(f"--loss must lie in [0, 1], got {args.loss}")
        config = dataclasses.replace(config, transmittance=args.loss)
    route = "oracle" if args.oracle else ("analytic" if args.analytic else "auto")
    return RunManifest(
        command=command,
        config=config,
        output_dir=Path(args.out),
        label=_sanitize(config.pump.label()),
        route=route,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "covariance":
            run_covariance(_manifest_from_args(args, "covariance"))
            return 0
        if args.command == "vlf-sweep":
            run_vlf_sweep(_manifest_from_args(args, "vlf-sweep"))
            return 0
        if args.command == "verify":
            return run_verify(args.config)
        if args.command == "figure":
            run_figure(args.which, Path(args.out))
            return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
