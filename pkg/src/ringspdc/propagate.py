"""Quadrature propagators: matrix-exponential oracle and closed forms.

A plane-wave pump with shift r couples Fourier mode p only to
q = (N - (p + r)) mod N, so the complex mode operators close pairwise:

    B_p(z) = a_p(z) B_p(0) + b_p(z) B_q(0)^dag

with, writing s = lambda_p + lambda_q and F_p = sqrt(s^2 - 16 eta^2) / 2,

    a_p = e^{-i (lambda_p - lambda_q) z / 2} (cos(F_p z) - (i/2) s sin(F_p z)/F_p)
    b_p = e^{-i (lambda_p - lambda_q) z / 2} (-2 i eta sin(F_p z)/F_p)

F_p is computed as a complex square root so a single expression covers the
oscillatory (real F), amplifying (imaginary F, trig turns hyperbolic) and
degenerate (F -> 0) branches; sin(F z)/F switches to its Taylor series below
|F z| < SERIES_SWITCH so the degenerate limit is smooth rather than 0/0.

Everything downstream is real: the complex pair relation maps to 2x2 blocks
acting on the (x, y) quadratures.  For a coefficient c,

    direct term   c B   -> [[Re c, -Im c], [Im c,  Re c]]
    conjugate term c B^dag -> [[Re c,  Im c], [Im c, -Re c]]

(the second differs because x = A + A^dag is even and y = i(A^dag - A) is odd
under conjugation).  This conversion is implemented once here and reused by
the covariance closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fourier import FourierBasis, dft_matrix, eigenvalues, quadrature_transform
from .model import ArrayConfig, ConfigError, branch_label, pair_partner

# |F z| below which sin(Fz)/F uses its series; relative truncation error of
# the three-term series is ~ (Fz)^6/5040 ~ 2e-28 at the switch point.
SERIES_SWITCH = 1e-4


@dataclass(frozen=True)
class Propagator:
    """Real 2N x 2N symplectic map xi(z) = matrix @ xi(0)."""

    matrix: np.ndarray
    z: float
    basis: str  # "individual" | "fourier"
    method: str  # "numerical" | "analytic_r0" | "analytic_rN2" | "analytic_rN4" | "analytic_general_r"


@dataclass(frozen=True)
class ModePairBlock:
    """Pairing data for Fourier mode p under a shift-r pump (1-based indices)."""

    p: int
    partner: int
    f_value: complex  # pair frequency F_p (real or purely imaginary)
    branch: str  # "oscillatory" | "amplifying" | "degenerate"


def scaled_sinc(f, z: float):
    """sin(F z)/F for complex F, with a series branch near F z = 0."""
    f = np.asarray(f, dtype=complex)
    w = f * z
    small = np.abs(w) < SERIES_SWITCH
    safe = np.where(small, 1.0, f)
    trig = np.sin(safe * z) / safe
    w2 = w * w
    series = z * (1.0 - w2 / 6.0 + w2 * w2 / 120.0)
    return np.where(small, series, trig)


def coeff_block_direct(c: complex) -> np.ndarray:
    """2x2 quadrature block of the direct term c B."""
    return np.array([[c.real, -c.imag], [c.imag, c.real]])


def coeff_block_conjugate(c: complex) -> np.ndarray:
    """2x2 quadrature block of the conjugate term c B^dag."""
    return np.array([[c.real, c.imag], [c.imag, -c.real]])


def numerical_propagator(delta: np.ndarray, z: float, basis: str = "individual") -> Propagator:
    """Oracle propagator exp(delta * z) via scipy's Pade matrix exponential.

    Works for any drift matrix (arbitrary pump phases included) and anchors
    every closed form in the test suite.  Satisfies the semigroup property
    M(z1 + z2) = M(z2) M(z1) and is symplectic whenever delta is Hamiltonian.
    """
    delta = np.asarray(delta, dtype=float)
    if delta.ndim != 2 or delta.shape[0] != delta.shape[1] or delta.shape[0] % 2:
        raise ValueError(f"drift matrix must be square 2N x 2N, got {delta.shape}")
    if not np.all(np.isfinite(delta)):
        raise ValueError("drift matrix contains non-finite entries")
    if not np.isfinite(z) or z < 0:
        raise ValueError(f"z must be finite and >= 0, got {z}")
    return Propagator(matrix=expm(delta * z), z=float(z), basis=basis, method="numerical")


def mode_pair_blocks(
    n_modes: int, coupling: float, eta_mag: float, shift: int
) -> list[ModePairBlock]:
    """Pairing and branch data for every Fourier mode under a shift-r pump.

    The partner map is an involution (partner[partner[p]] = p) because
    p + q = -r mod N is symmetric in p and q.
    """
    lam = eigenvalues(n_modes, coupling).values
    blocks = []
    for p in range(1, n_modes + 1):
        q = pair_partner(n_modes, shift, p)
        s = 0.5 * (lam[p - 1] + lam[q - 1])
        f = complex(np.sqrt(complex(4.0 * s * s - 16.0 * eta_mag**2)) / 2.0)
        blocks.append(
            ModePairBlock(p=p, partner=q, f_value=f, branch=branch_label(s, eta_mag))
        )
    return blocks


def analytic_fourier_blocks_r0(
    n_modes: int, coupling: float, eta_mag: float, z: float
) -> list[np.ndarray]:
    """Per-mode 2x2 propagator blocks for the uniform pump (shift r = N).

    At r = 0 the dynamics is exactly 2x2-block-diagonal in the real ring
    profiles (cosine/sine combinations of Fourier pairs p, N-p; see
    pair_combination_rotation).  Block p (1-based, entry p-1) is

        [[cos(F z), (lambda_p - 2 eta) sin(F z)/F],
         [-(lambda_p + 2 eta) sin(F z)/F, cos(F z)]]

    with F = sqrt(lambda_p^2 - 4 eta^2); the same block serves p and N - p.
    A zero mode (lambda_p = 0) degenerates to the single-mode squeezer
    [[cosh(2 eta z), -sinh(2 eta z)], [-sinh(2 eta z), cosh(2 eta z)]].
    """
    lam = eigenvalues(n_modes, coupling).values
    out = []
    for lp in lam:
        f = np.sqrt(complex(lp * lp - 4.0 * eta_mag**2))
        sz = complex(scaled_sinc(f, z))
        c = np.cos(f * z)
        blk = np.array(
            [[c, (lp - 2.0 * eta_mag) * sz], [-(lp + 2.0 * eta_mag) * sz, c]]
        )
        resid = float(np.max(np.abs(blk.imag)))
        # F real or purely imaginary makes every entry real; anything else
        # signals a broken branch choice, not a tolerance issue.
        if resid > 1e-12:
            raise AssertionError(f"non-real propagator block, imag residual {resid:.2e}")
        out.append(blk.real)
    return out


def pair_combination_rotation(n_modes: int) -> np.ndarray:
    """Fixed orthogonal-symplectic map from Fourier to ring-profile quadratures.

    For each pair (p, q = N - p) with p < q, slot p carries the symmetric
    (cosine-profile) combination and slot q the antisymmetric (sine-profile)
    one, rotated so both see the same 2x2 block:

        slot p: ( (x_p + x_q)/sqrt2 , (y_p + y_q)/sqrt2 )
        slot q: ( (y_p - y_q)/sqrt2 , -(x_p - x_q)/sqrt2 )

    Self-paired slots (p = N, and p = N/2 for even N) stay put.  With
    R = pair_combination_rotation(N), blockdiag(analytic_fourier_blocks_r0)
    equals R @ M_fourier @ R.T for the uniform-pump propagator.
    """
    rot = np.zeros((2 * n_modes, 2 * n_modes))
    s = 1.0 / np.sqrt(2.0)
    done: set[int] = set()
    for p in range(1, n_modes + 1):
        if p in done:
            continue
        q = pair_partner(n_modes, n_modes, p)
        if q == p:
            rot[2 * p - 2, 2 * p - 2] = 1.0
            rot[2 * p - 1, 2 * p - 1] = 1.0
            done.add(p)
            continue
        rot[2 * p - 2, 2 * p - 2] = s
        rot[2 * p - 2, 2 * q - 2] = s
        rot[2 * p - 1, 2 * p - 1] = s
        rot[2 * p - 1, 2 * q - 1] = s
        rot[2 * q - 2, 2 * p - 1] = s
        rot[2 * q - 2, 2 * q - 1] = -s
        rot[2 * q - 1, 2 * p - 2] = -s
        rot[2 * q - 1, 2 * q - 2] = s
        done.update((p, q))
    return rot


def analytic_general_r(
    n_modes: int, coupling: float, eta_mag: float, shift: int, z: float
) -> Propagator:
    """Fourier-basis propagator for any plane-wave pump shift.

    Assembles the pair solution from the module docstring into the real
    quadrature picture: the row block of mode p gets coeff_block_direct(a_p)
    on the diagonal and coeff_block_conjugate(b_p) in the partner columns
    (self-paired modes accumulate both in the same block).
    """
    lam = eigenvalues(n_modes, coupling).values
    mat = np.zeros((2 * n_modes, 2 * n_modes))
    for p in range(1, n_modes + 1):
        q = pair_partner(n_modes, shift, p)
        lp, lq = lam[p - 1], lam[q - 1]
        f = np.sqrt(complex((lp + lq) ** 2 - 16.0 * eta_mag**2)) / 2.0
        phase = np.exp(-0.5j * (lp - lq) * z)
        sz = complex(scaled_sinc(f, z))
        a = phase * (np.cos(f * z) - 0.5j * sz * (lp + lq))
        b = phase * (-2j * eta_mag * sz)
        mat[2 * p - 2 : 2 * p, 2 * p - 2 : 2 * p] += coeff_block_direct(a)
        mat[2 * p - 2 : 2 * p, 2 * q - 2 : 2 * q] += coeff_block_conjugate(b)
    return Propagator(matrix=mat, z=float(z), basis="fourier", method="analytic_general_r")


def propagator_to_individual(prop: Propagator, basis: FourierBasis) -> Propagator:
    """Congruence-map a Fourier-basis propagator to the waveguide basis."""
    if prop.basis != "fourier":
        raise ValueError(f"expected a fourier-basis propagator, got {prop.basis!r}")
    t = quadrature_transform(basis)
    return Propagator(
        matrix=t @ prop.matrix @ t.T, z=prop.z, basis="individual", method=prop.method
    )


def _prop_from_mode_maps(n_modes: int, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Real propagator from A_i(z) = sum_j U_ij A_j(0) + W_ij A_j(0)^dag."""
    mat = np.zeros((2 * n_modes, 2 * n_modes))
    mat[0::2, 0::2] = (u + w).real
    mat[0::2, 1::2] = (-u + w).imag
    mat[1::2, 0::2] = (u + w).imag
    mat[1::2, 1::2] = (u - w).real
    return mat


def analytic_individual_propagator(config: ArrayConfig, z: float) -> Propagator:
    """Closed-form waveguide-basis propagator for the three special profiles.

    uniform (r = N):
        U = S diag(cos(F_p z) - i lambda_p sin(F_p z)/F_p) S^dag
        W = -S diag(2 i eta sin(F_p z)/F_p) S^dag
    alternating_pi (r = N/2):  pairs are self-conjugate, the coupling phase
        factors out:  U = cosh(2 eta z) U~,  W_ij = -i (-1)^j sinh(2 eta z) U~_ij
        with U~ = S diag(e^{-i lambda_p z}) S^dag.
    alternating_half_pi (r = N/4):  U = S diag(g_p beta_p) S^dag and
        W_ij = -(-i)^j [S diag(g_p delta_p) S^dag]_ij with
        beta_p = cos(F_p z) - (i/2)(lambda_p + lambda_q) sin(F_p z)/F_p,
        delta_p = 2 i eta sin(F_p z)/F_p, g_p = e^{-i(lambda_p - lambda_q) z / 2},
        q = (3N/4 - p) mod N.

    Normalisation sum_j (|U_ij|^2 - |W_ij|^2) = 1 holds per row.  Other
    profiles have no special closed form; use analytic_general_r plus a
    basis change instead.
    """
    n = config.n_modes
    eta = config.eta_mag
    s = dft_matrix(n).entries
    lam = eigenvalues(n, config.coupling).values
    jj = np.arange(1, n + 1)

    method_by_kind = {
        "uniform": "analytic_r0",
        "alternating_pi": "analytic_rN2",
        "alternating_half_pi": "analytic_rN4",
    }
    if z == 0.0 and config.pump.kind in method_by_kind:
        config.pump.shift_for(n)  # still enforce divisibility
        # U = I, W = 0 analytically; skip the einsum round-off.
        return Propagator(
            matrix=np.eye(2 * n), z=0.0, basis="individual",
            method=method_by_kind[config.pump.kind],
        )

    if config.pump.kind == "uniform":
        f = np.sqrt((lam**2 - 4.0 * eta**2).astype(complex))
        sz = scaled_sinc(f, z)
        u_diag = np.cos(f * z) - 1j * lam * sz
        w_diag = 2j * eta * sz
        u = np.einsum("ip,p,jp->ij", s, u_diag, s.conj())
        w = -np.einsum("ip,p,jp->ij", s, w_diag, s.conj())
        method = "analytic_r0"
    elif config.pump.kind == "alternating_pi":
        config.pump.shift_for(n)  # raises on odd N
        u_tilde = np.einsum("ip,p,jp->ij", s, np.exp(-1j * lam * z), s.conj())
        u = u_tilde * np.cosh(2.0 * eta * z)
        w = -1j * np.sinh(2.0 * eta * z) * u_tilde * ((-1.0) ** jj)[None, :]
        method = "analytic_rN2"
    elif config.pump.kind == "alternating_half_pi":
        r = config.pump.shift_for(n)  # raises unless N % 4 == 0
        q = np.array([pair_partner(n, r, p) for p in jj])
        lq = lam[q - 1]
        f = np.sqrt(((lam + lq) ** 2 - 16.0 * eta**2).astype(complex)) / 2.0
        sz = scaled_sinc(f, z)
        g = np.exp(-0.5j * (lam - lq) * z)
        beta = np.cos(f * z) - 0.5j * sz * (lam + lq)
        delta = 2j * eta * sz
        u = np.einsum("ip,p,jp->ij", s, g * beta, s.conj())
        w = -(((-1j) ** jj)[None, :]) * np.einsum("ip,p,jp->ij", s, g * delta, s.conj())
        method = "analytic_rN4"
    else:
        raise ConfigError(
            f"no closed-form individual propagator for pump {config.pump.kind!r}; "
            "use analytic_general_r with a basis change"
        )
    return Propagator(
        matrix=_prop_from_mode_maps(n, u, w), z=float(z), basis="individual", method=method
    )
