"""Physical configuration of the down-conversion array and its drift matrix.

A ring of N identical waveguides is pumped for degenerate parametric
down-conversion; waveguide j sees the complex pump amplitude
eta_j = eta * exp(i phi_j).  The built-in profiles set phi_j = -2*pi*j*r/N for
an integer shift r, which couples Fourier mode p only to its partner
q = (N - (p + r)) mod N.  The signal quadratures x = A + A*, y = i(A* - A)
obey dxi/dz = Delta xi with the drift matrix assembled here; vacuum noise is
normalised so the identity covariance is shot noise.

Units: coupling and eta in 1/mm, z in mm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fourier import eigenvalues, zero_mode_indices

QUADRATURE_ORDERING = "x1,y1,...,xN,yN"

# Two modes are "degenerate" when the pair eigenvalue sits within this of the
# oscillatory/amplifying boundary |lambda| = 2 eta (absolute, units 1/mm).
REGIME_BOUNDARY_TOL = 1e-12


class ConfigError(ValueError):
    """Raised when an ArrayConfig fails validation."""


@dataclass(frozen=True)
class PumpProfile:
    """Pump phase pattern across the ring.

    kind is one of "uniform", "alternating_pi", "alternating_half_pi",
    "general_shift" (with `shift` set) or "custom" (with `phases` set, one
    phase per waveguide, radians).  The first four are plane-wave patterns
    phi_j = -2*pi*j*r/N with r = N, N/2, N/4 and an arbitrary integer.
    """

    kind: str
    shift: int | None = None
    phases: tuple[float, ...] | None = None

    @classmethod
    def uniform(cls) -> "PumpProfile":
        return cls(kind="uniform")

    @classmethod
    def alternating_pi(cls) -> "PumpProfile":
        return cls(kind="alternating_pi")

    @classmethod
    def alternating_half_pi(cls) -> "PumpProfile":
        return cls(kind="alternating_half_pi")

    @classmethod
    def general_shift(cls, shift: int) -> "PumpProfile":
        return cls(kind="general_shift", shift=int(shift))

    @classmethod
    def custom(cls, phases) -> "PumpProfile":
        return cls(kind="custom", phases=tuple(float(p) for p in phases))

    def shift_for(self, n_modes: int) -> int | None:
        """Shift r in 1..N for plane-wave profiles, None for custom.

        Raises ConfigError when the profile needs a divisibility the ring
        does not have (e.g. alternating_half_pi at N=6).
        """
        if self.kind == "uniform":
            return n_modes
        if self.kind == "alternating_pi":
            if n_modes % 2 != 0:
                raise ConfigError(
                    f"alternating_pi pump needs an even ring, got N={n_modes}"
                )
            return n_modes // 2
        if self.kind == "alternating_half_pi":
            if n_modes % 4 != 0:
                raise ConfigError(
                    "alternating_half_pi pump needs N divisible by 4, "
                    f"got N={n_modes}"
                )
            return n_modes // 4
        if self.kind == "general_shift":
            if self.shift is None:
                raise ConfigError("general_shift pump is missing its shift")
            r = self.shift % n_modes
            return n_modes if r == 0 else r
        if self.kind == "custom":
            return None
        raise ConfigError(f"unknown pump kind {self.kind!r}")

    def phase_array(self, n_modes: int) -> np.ndarray:
        """phi_j for j = 1..N (radians)."""
        if self.kind == "custom":
            if self.phases is None or len(self.phases) != n_modes:
                raise ConfigError(
                    f"custom pump needs exactly {n_modes} phases, got "
                    f"{0 if self.phases is None else len(self.phases)}"
                )
            return np.asarray(self.phases, dtype=float)
        r = self.shift_for(n_modes)
        j = np.arange(1, n_modes + 1)
        return -2.0 * np.pi * j * r / n_modes

    def label(self) -> str:
        """Short token used in file names and CSV headers."""
        if self.kind == "uniform":
            return "r0"
        if self.kind == "alternating_pi":
            return "rN2"
        if self.kind == "alternating_half_pi":
            return "rN4"
        if self.kind == "general_shift":
            return f"general:{self.shift}"
        return "custom"


@dataclass(frozen=True)
class ArrayConfig:
    """Full simulation input.

    z_steps counts the points of the output grid linspace(0, z_max, z_steps);
    z_steps=1 degenerates to the single point z_max.  transmittance models a
    uniform loss channel applied to every mode after propagation.
    """

    n_modes: int
    coupling: float
    eta_mag: float
    pump: PumpProfile = field(default_factory=PumpProfile.uniform)
    z_max: float = 20.0
    z_steps: int = 400
    transmittance: float = 1.0

    def z_grid(self) -> np.ndarray:
        if self.z_steps == 1:
            return np.array([float(self.z_max)])
        return np.linspace(0.0, float(self.z_max), self.z_steps)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str


def symplectic_form(n_modes: int) -> np.ndarray:
    """Omega with 2x2 blocks [[0, 1], [-1, 0]] in the x,y ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        omega[2 * i, 2 * i + 1] = 1.0
        omega[2 * i + 1, 2 * i] = -1.0
    return omega


def build_drift_matrix(config: ArrayConfig) -> np.ndarray:
    """Assemble the 2N x 2N quadrature drift matrix.

    Per waveguide the squeezing part is
        dx_j/dz = 2 Im(eta_j) x_j - 2 Re(eta_j) y_j
        dy_j/dz = -2 Re(eta_j) x_j - 2 Im(eta_j) y_j
    and the ring coupling adds J (y_{j-1} + y_{j+1}) to dx_j/dz and
    -J (x_{j-1} + x_{j+1}) to dy_j/dz.  The result satisfies
    Delta Omega + Omega Delta^T = 0 exactly (Hamiltonian dynamics), which is
    what makes exp(Delta z) symplectic.
    """
    n = config.n_modes
    eta = config.eta_mag * np.exp(1j * config.pump.phase_array(n))
    drift = np.zeros((2 * n, 2 * n))
    for i in range(n):
        e_r, e_i = eta[i].real, eta[i].imag
        drift[2 * i, 2 * i] = 2.0 * e_i
        drift[2 * i, 2 * i + 1] = -2.0 * e_r
        drift[2 * i + 1, 2 * i] = -2.0 * e_r
        drift[2 * i + 1, 2 * i + 1] = -2.0 * e_i
        for nb in ((i - 1) % n, (i + 1) % n):
            drift[2 * i, 2 * nb + 1] += config.coupling
            drift[2 * i + 1, 2 * nb] += -config.coupling
    return drift


def pair_partner(n_modes: int, shift: int, p: int) -> int:
    """Fourier partner q = (N - (p + r)) mod N of mode p (1-based, 0 -> N)."""
    q = (n_modes - (p + shift)) % n_modes
    return n_modes if q == 0 else q


def branch_label(pair_mean_eig: float, eta_mag: float) -> str:
    """Branch of a mode pair with s = (lambda_p + lambda_q)/2.

    The pair frequency is F = sqrt(s^2 - 4 eta^2): "oscillatory" for
    |s| > 2 eta (real F), "amplifying" for |s| < 2 eta (imaginary F,
    exponential squeezing growth), "degenerate" on the boundary.
    """
    gap = abs(pair_mean_eig) - 2.0 * eta_mag
    if abs(gap) <= REGIME_BOUNDARY_TOL:
        return "degenerate"
    return "oscillatory" if gap > 0 else "amplifying"


def regime_classify(config: ArrayConfig) -> tuple[str, ...]:
    """Per-Fourier-mode branch labels for a plane-wave pump.

    Entry p-1 of the result labels mode p, which pairs with
    q = (N - (p + r)) mod N; see branch_label for the classification rule.
    """
    r = config.pump.shift_for(config.n_modes)
    if r is None:
        raise ConfigError("regime classification needs a plane-wave pump profile")
    lam = eigenvalues(config.n_modes, config.coupling).values
    labels = []
    for p in range(1, config.n_modes + 1):
        q = pair_partner(config.n_modes, r, p)
        labels.append(branch_label(0.5 * (lam[p - 1] + lam[q - 1]), config.eta_mag))
    return tuple(labels)


def validate_config(config: ArrayConfig) -> list[Diagnostic]:
    """Collect validation diagnostics; errors make the config unusable.

    Warnings flag physically valid but probably unintended setups, e.g. a
    uniform pump on a ring without zero Fourier modes (N % 4 != 0), where the
    interlaced parity-set entanglement pattern is unavailable.
    """
    diags: list[Diagnostic] = []

    def error(msg: str) -> None:
        diags.append(Diagnostic("error", msg))

    def warning(msg: str) -> None:
        diags.append(Diagnostic("warning", msg))

    if config.n_modes < 3:
        error(f"n_modes must be >= 3 for a ring, got {config.n_modes}")
    if not np.isfinite(config.coupling) or config.coupling < 0:
        error(f"coupling must be finite and >= 0, got {config.coupling}")
    if not np.isfinite(config.eta_mag) or config.eta_mag < 0:
        error(f"eta_mag must be finite and >= 0, got {config.eta_mag}")
    if not np.isfinite(config.z_max) or config.z_max <= 0:
        error(f"z_max must be finite and > 0, got {config.z_max}")
    if config.z_steps < 1:
        error(f"z_steps must be >= 1, got {config.z_steps}")
    if not 0.0 <= config.transmittance <= 1.0:
        error(f"transmittance must lie in [0, 1], got {config.transmittance}")

    if config.n_modes >= 3:
        try:
            config.pump.shift_for(config.n_modes)
            config.pump.phase_array(config.n_modes)
        except ConfigError as exc:
            error(str(exc))
        else:
            if config.pump.kind == "uniform" and config.n_modes % 4 != 0:
                assert zero_mode_indices(config.n_modes) is None
                warning(
                    f"N={config.n_modes} has no zero Fourier modes "
                    "(N % 4 != 0): the uniform-pump parity-set entanglement "
                    "pattern is unavailable"
                )
    return diags


def config_ok(diagnostics: list[Diagnostic]) -> bool:
    return not any(d.severity == "error" for d in diagnostics)


def require_valid(config: ArrayConfig) -> None:
    """Raise ConfigError listing every validation error (warnings pass)."""
    errors = [d.message for d in validate_config(config) if d.severity == "error"]
    if errors:
        raise ConfigError("invalid config: " + "; ".join(errors))
