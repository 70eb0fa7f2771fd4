"""Gaussian covariance matrices of the down-converted light.

The input state is vacuum, V(0) = I (shot-noise units), and propagation acts
by congruence V(z) = M V(0) M^T.  For the three special pump profiles the
covariance elements are evaluated directly from closed-form mode sums; the
matrix-exponential route stays available as an oracle and for custom pumps.

All covariances here are real symmetric 2N x 2N in the ordering
x1, y1, ..., xN, yN.  The closed-form sums are complex expressions whose
imaginary parts cancel identically; a residual above IMAG_TOL means a broken
formula, not numerical noise, so it raises instead of being silently dropped.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .fourier import dft_matrix, eigenvalues
from .model import (
    QUADRATURE_ORDERING,
    ArrayConfig,
    ConfigError,
    build_drift_matrix,
    pair_partner,
    symplectic_form,
)
from .propagate import (
    Propagator,
    analytic_general_r,
    analytic_individual_propagator,
    numerical_propagator,
    propagator_to_individual,
    scaled_sinc,
)

IMAG_TOL = 1e-12
PURITY_TOL = 1e-8
PHYSICALITY_TOL = 1e-9
SYMPLECTIC_TOL = 1e-10

# Entries below this are zeroed in *display* copies only; stored data is
# never chopped.
DISPLAY_THRESHOLD = 1e-2

CSV_FORMAT_VERSION = "1"


@dataclass(frozen=True)
class CovarianceMatrix:
    matrix: np.ndarray
    basis: str  # "individual" | "fourier"
    z: float
    ordering: str = QUADRATURE_ORDERING


@dataclass(frozen=True)
class GaussianDiagnostics:
    """Quality report for a covariance (optionally with its propagator)."""

    det_v: float
    min_physicality_eig: float  # min eigenvalue of V + i Omega, >= 0 physically
    symplectic_residual: float | None  # max |M Omega M^T - Omega|, None without M
    flags: tuple[str, ...]

    @property
    def ok(self) -> bool:
        if "unphysical" in self.flags:
            return False
        if self.symplectic_residual is not None and self.symplectic_residual > SYMPLECTIC_TOL:
            return False
        return True


def vacuum_covariance(n_modes: int, basis: str = "individual") -> CovarianceMatrix:
    """Shot-noise covariance V = I at z = 0."""
    return CovarianceMatrix(matrix=np.eye(2 * n_modes), basis=basis, z=0.0)


def evolve_covariance(prop: Propagator, cov: CovarianceMatrix) -> CovarianceMatrix:
    """V -> M V M^T; bases must match, z accumulates."""
    if prop.basis != cov.basis:
        raise ValueError(
            f"basis mismatch: propagator is {prop.basis!r}, covariance {cov.basis!r}"
        )
    if prop.matrix.shape != cov.matrix.shape:
        raise ValueError(
            f"shape mismatch: {prop.matrix.shape} vs {cov.matrix.shape}"
        )
    return dataclasses.replace(
        cov, matrix=prop.matrix @ cov.matrix @ prop.matrix.T, z=cov.z + prop.z
    )


def _assemble_blocks(n: int, vxx: np.ndarray, vyy: np.ndarray, vxy: np.ndarray) -> np.ndarray:
    """Interleave same-quadrature blocks into the x1,y1,... ordering."""
    worst = max(float(np.max(np.abs(m.imag))) for m in (vxx, vyy, vxy))
    if worst > IMAG_TOL:
        raise AssertionError(
            f"covariance sums left an imaginary residue of {worst:.2e}"
        )
    v = np.zeros((2 * n, 2 * n))
    v[0::2, 0::2] = vxx.real
    v[1::2, 1::2] = vyy.real
    v[0::2, 1::2] = vxy.real
    v[1::2, 0::2] = vxy.real.T
    return v


def covariance_r0(config: ArrayConfig, z: float) -> CovarianceMatrix:
    """Closed-form covariance for the uniform pump, waveguide basis.

    With F_p = sqrt(lambda_p^2 - 4 eta^2), c_p = cos(F_p z) and
    s_p = sin(F_p z)/F_p, the element sums use

        zeta_p = c_p^2 + lambda_p^2 s_p^2     beta_p  = 2 i eta s_p c_p
        gamma_p = 2 eta lambda_p s_p^2        delta_p = 4 eta^2 s_p^2

    weighted by A_ijp = S_ip S*_jp and its conjugate B:

        V(x_i x_j) = sum_p A (zeta - beta - gamma) + B (beta - gamma + delta)
        V(y_i y_j) = sum_p A (zeta + beta + gamma) + B (gamma - beta + delta)
        V(x_i y_j) = i sum_p A (beta + gamma) + B (beta - gamma)
    """
    if config.pump.kind != "uniform":
        raise ConfigError(f"covariance_r0 needs the uniform pump, got {config.pump.kind!r}")
    n, eta = config.n_modes, config.eta_mag
    if z == 0.0:
        # The sums collapse to sum_p S_ip S*_jp = delta_ij analytically;
        # return it exactly instead of with einsum round-off.
        return vacuum_covariance(n)
    s = dft_matrix(n).entries
    lam = eigenvalues(n, config.coupling).values
    f = np.sqrt((lam**2 - 4.0 * eta**2).astype(complex))
    sz = scaled_sinc(f, z)
    c = np.cos(f * z)
    zeta = c**2 + lam**2 * sz**2
    beta = 2j * eta * sz * c
    gamma = 2.0 * eta * lam * sz**2
    delta = 4.0 * eta**2 * sz**2
    a = np.einsum("ip,jp->ijp", s, s.conj())
    b = a.conj()
    vxx = np.einsum("ijp,p->ij", a, zeta - beta - gamma) + np.einsum(
        "ijp,p->ij", b, beta - gamma + delta
    )
    vyy = np.einsum("ijp,p->ij", a, zeta + beta + gamma) + np.einsum(
        "ijp,p->ij", b, gamma - beta + delta
    )
    vxy = 1j * (
        np.einsum("ijp,p->ij", a, beta + gamma) + np.einsum("ijp,p->ij", b, beta - gamma)
    )
    return CovarianceMatrix(matrix=_assemble_blocks(n, vxx, vyy, vxy), basis="individual", z=float(z))


def covariance_rhalf(config: ArrayConfig, z: float) -> CovarianceMatrix:
    """Closed-form covariance for the alternating-pi pump.

    Every waveguide is an independent single-mode squeezer whose axis
    alternates around the ring:

        V(x_i x_j) = V(y_i y_j) = cosh(4 eta z) delta_ij
        V(x_i y_j) = -(-1)^j sinh(4 eta z) delta_ij
    """
    if config.pump.kind != "alternating_pi":
        raise ConfigError(
            f"covariance_rhalf needs the alternating_pi pump, got {config.pump.kind!r}"
        )
    config.pump.shift_for(config.n_modes)  # raises on odd N
    n, eta = config.n_modes, config.eta_mag
    ch, sh = np.cosh(4.0 * eta * z), np.sinh(4.0 * eta * z)
    v = np.zeros((2 * n, 2 * n))
    for i in range(n):
        sign = -((-1.0) ** (i + 1))
        v[2 * i, 2 * i] = ch
        v[2 * i + 1, 2 * i + 1] = ch
        v[2 * i, 2 * i + 1] = sign * sh
        v[2 * i + 1, 2 * i] = sign * sh
    return CovarianceMatrix(matrix=v, basis="individual", z=float(z))


def covariance_rquarter(config: ArrayConfig, z: float) -> CovarianceMatrix:
    """Closed-form covariance for the alternating-half-pi pump.

    Mode p pairs with q = (3N/4 - p) mod N.  With
    F_p = sqrt((lambda_p + lambda_q)^2 - 16 eta^2)/2, s_p = sin(F_p z)/F_p,

        beta_p  = cos(F_p z) - (i/2)(lambda_p + lambda_q) s_p
        delta_p = 2 i eta s_p

    and A_ijp = S_ip S*_jp, B = conj(A), m_j = (-i)^j, m*_j = i^j:

        V(x_i x_j) = BB + DD - m_j C1 - m*_j C2
        V(y_i y_j) = BB + DD + m_j C1 + m*_j C2
        V(x_i y_j) = i (BB - DD - delta_ij + m_j C1 - m*_j C2)

    where BB = sum_p A |beta|^2, DD = sum_p B |delta|^2,
    C1 = sum_p A beta delta, C2 = conj-weighted partner sum_p B (beta delta)*.
    The two propagation phases of each pair are opposite and cancel in all
    second moments, and |beta|^2 - |delta|^2 = 1 supplies the delta_ij term
    that keeps the xy moment real.
    """
    if config.pump.kind != "alternating_half_pi":
        raise ConfigError(
            f"covariance_rquarter needs the alternating_half_pi pump, got {config.pump.kind!r}"
        )
    r = config.pump.shift_for(config.n_modes)  # raises unless N % 4 == 0
    n, eta = config.n_modes, config.eta_mag
    if z == 0.0:
        return vacuum_covariance(n)
    s = dft_matrix(n).entries
    lam = eigenvalues(n, config.coupling).values
    jj = np.arange(1, n + 1)
    q = np.array([pair_partner(n, r, p) for p in jj])
    lq = lam[q - 1]
    f = np.sqrt(((lam + lq) ** 2 - 16.0 * eta**2).astype(complex)) / 2.0
    sz = scaled_sinc(f, z)
    beta = np.cos(f * z) - 0.5j * sz * (lam + lq)
    delta = 2j * eta * sz
    m_neg = (-1j) ** jj
    m_pos = (1j) ** jj
    a = np.einsum("ip,jp->ijp", s, s.conj())
    b = a.conj()
    bb = np.einsum("ijp,p->ij", a, beta * beta.conj())
    dd = np.einsum("ijp,p->ij", b, delta * delta.conj())
    c1 = np.einsum("ijp,p->ij", a, beta * delta)
    c2 = np.einsum("ijp,p->ij", b, (beta * delta).conj())
    vxx = bb + dd - m_neg[None, :] * c1 - m_pos[None, :] * c2
    vyy = bb + dd + m_neg[None, :] * c1 + m_pos[None, :] * c2
    vxy = 1j * (bb - dd - np.eye(n) + m_neg[None, :] * c1 - m_pos[None, :] * c2)
    return CovarianceMatrix(matrix=_assemble_blocks(n, vxx, vyy, vxy), basis="individual", z=float(z))


def covariance_at(config: ArrayConfig, z: float, route: str = "auto") -> CovarianceMatrix:
    """Waveguide-basis covariance at z, selecting the computation route.

    route "auto" prefers the closed forms (uniform / alternating_pi /
    alternating_half_pi), falls back to the general pair solution for other
    plane-wave shifts, and to the matrix exponential for custom pumps.
    "analytic" forbids the oracle (custom pumps are rejected); "oracle"
    forces the matrix exponential for any profile.
    """
    if route not in ("auto", "analytic", "oracle"):
        raise ValueError(f"unknown route {route!r}")
    kind = config.pump.kind
    if route == "oracle":
        prop = numerical_propagator(build_drift_matrix(config), z)
        return evolve_covariance(prop, vacuum_covariance(config.n_modes))
    if kind == "uniform":
        return covariance_r0(config, z)
    if kind == "alternating_pi":
        return covariance_rhalf(config, z)
    if kind == "alternating_half_pi":
        return covariance_rquarter(config, z)
    if kind == "general_shift":
        shift = config.pump.shift_for(config.n_modes)
        prop = propagator_to_individual(
            analytic_general_r(config.n_modes, config.coupling, config.eta_mag, shift, z),
            dft_matrix(config.n_modes),
        )
        return evolve_covariance(prop, vacuum_covariance(config.n_modes))
    if route == "analytic":
        raise ConfigError("custom pump profiles have no analytic route; use the oracle")
    prop = numerical_propagator(build_drift_matrix(config), z)
    return evolve_covariance(prop, vacuum_covariance(config.n_modes))


def apply_loss(cov: CovarianceMatrix, transmittance: float) -> CovarianceMatrix:
    """Uniform pure-loss channel: V -> T V + (1 - T) I."""
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    n2 = cov.matrix.shape[0]
    return dataclasses.replace(
        cov, matrix=transmittance * cov.matrix + (1.0 - transmittance) * np.eye(n2)
    )


def purity_and_symplectic_report(
    cov: CovarianceMatrix, prop: Propagator | None = None
) -> GaussianDiagnostics:
    """Physicality and purity diagnostics.

    det V = 1 marks a pure Gaussian state (loss pushes it above 1); the
    uncertainty relation requires V + i Omega >= 0.  When a propagator is
    supplied its symplectic defect max |M Omega M^T - Omega| is included.
    """
    n = cov.matrix.shape[0] // 2
    omega = symplectic_form(n)
    det_v = float(np.linalg.det(cov.matrix))
    min_eig = float(np.min(np.linalg.eigvalsh(cov.matrix + 1j * omega)))
    resid = None
    if prop is not None:
        resid = float(np.max(np.abs(prop.matrix @ omega @ prop.matrix.T - omega)))
    flags: list[str] = []
    if min_eig < -PHYSICALITY_TOL or det_v < 1.0 - PURITY_TOL:
        flags.append("unphysical")
    elif abs(det_v - 1.0) <= PURITY_TOL:
        flags.append("pure")
    else:
        flags.append("mixed")
    if resid is not None and resid > SYMPLECTIC_TOL:
        flags.append("non_symplectic")
    return GaussianDiagnostics(
        det_v=det_v,
        min_physicality_eig=min_eig,
        symplectic_residual=resid,
        flags=tuple(flags),
    )


def covariance_to_csv(
    cov: CovarianceMatrix,
    path,
    header: dict[str, str] | None = None,
    display_threshold: float | None = None,
) -> None:
    """Write a covariance as CSV: '#'-prefixed header lines, then 2N rows.

    Floats are written with repr so reruns are byte-identical and parsing
    round-trips exactly.  display_threshold zeroes |v| below it in the file
    (display copies only; pass None for data files).
    """
    mat = cov.matrix
    if display_threshold is not None:
        mat = np.where(np.abs(mat) < display_threshold, 0.0, mat)
    lines = [f"# format_version: {CSV_FORMAT_VERSION}"]
    meta = {
        "basis": cov.basis,
        "ordering": cov.ordering,
        "z_mm": repr(float(cov.z)),
        "n_modes": str(mat.shape[0] // 2),
    }
    if display_threshold is not None:
        meta["display_threshold"] = repr(float(display_threshold))
    if header:
        meta.update({str(k): str(v) for k, v in header.items()})
    for key in sorted(meta):
        lines.append(f"# {key}: {meta[key]}")
    for row in mat:
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def covariance_from_csv(path) -> tuple[CovarianceMatrix, dict[str, str]]:
    """Inverse of covariance_to_csv; returns the matrix and the header dict."""
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    meta: dict[str, str] = {}
    rows: list[list[float]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        rows.append([float(tok) for tok in line.split(",")])
    mat = np.array(rows)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
        raise ValueError(f"covariance CSV is not square 2N x 2N, got {mat.shape}")
    cov = CovarianceMatrix(
        matrix=mat,
        basis=meta.get("basis", "individual"),
        z=float(meta.get("z_mm", "nan")),
        ordering=meta.get("ordering", QUADRATURE_ORDERING),
    )
    return cov, meta
