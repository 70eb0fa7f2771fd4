"""Discrete Fourier machinery for a ring of N coupled waveguides.

The ring couples each waveguide to its two neighbours with periodic boundary
conditions, so the coupling matrix is circulant and the discrete Fourier
transform diagonalises it.  Everything downstream (propagators, closed-form
covariances) is expressed in the Fourier mode basis and mapped back to the
individual-waveguide basis with the quadrature transform built here.

Mode indices are 1-based in formulas (j, p = 1..N) and stored 0-based in
arrays; ``S[j-1, p-1]`` holds the matrix element for waveguides j and modes p.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

# Named shift tokens shared with the CLI: the three pump profiles singled out
# by the closed-form solutions.  "r0" means shift N (equivalently 0 mod N).
SHIFT_TOKENS = ("r0", "rN2", "rN4")


@dataclass(frozen=True)
class FourierBasis:
    """Unitary DFT over the ring, S_{j,p} = exp(i 2π j p / N) / sqrt(N)."""

    n_modes: int
    entries: np.ndarray  # complex, shape (N, N)


@dataclass(frozen=True)
class EigenvalueSet:
    """Coupling-matrix eigenvalues λ_p = 2 J cos(2π p / N), p = 1..N."""

    n_modes: int
    coupling: float
    values: np.ndarray  # real, shape (N,), values[p-1] = λ_p

    def value(self, p: int) -> float:
        """λ_p for a 1-based mode index p."""
        if not 1 <= p <= self.n_modes:
            raise ValueError(f"mode index {p} outside 1..{self.n_modes}")
        return float(self.values[p - 1])


def dft_matrix(n_modes: int) -> FourierBasis:
    """Build the ring DFT.

    Parameters
    ----------
    n_modes : int
        Number of waveguides N, at least 1.

    Returns
    -------
    FourierBasis
        Unitary matrix with entries exp(i 2π j p / N)/sqrt(N) for
        j, p = 1..N.  Unitary to machine precision for any N.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    j = np.arange(1, n_modes + 1)
    phase = np.exp(2j * np.pi * np.outer(j, j) / n_modes)
    return FourierBasis(n_modes=n_modes, entries=phase / np.sqrt(n_modes))


def eigenvalues(n_modes: int, coupling: float) -> EigenvalueSet:
    """Eigenvalues of the circulant nearest-neighbour coupling matrix."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    p = np.arange(1, n_modes + 1)
    values = 2.0 * coupling * np.cos(2.0 * np.pi * p / n_modes)
    return EigenvalueSet(n_modes=n_modes, coupling=float(coupling), values=values)


def zero_mode_indices(n_modes: int) -> tuple[int, int] | None:
    """1-based Fourier indices with λ_p = 0, or None if N % 4 != 0.

    cos(2π p / N) vanishes at p = N/4 and p = 3N/4, which are integers only
    when N is a multiple of 4.  These two modes see no coupling shift and
    squeeze locally regardless of J.
    """
    if n_modes % 4 != 0:
        return None
    return n_modes // 4, 3 * n_modes // 4


def resolve_shift(n_modes: int, shift: int | str) -> int:
    """Normalise a pump shift to an integer in 1..N.

    Accepts an integer (0 is treated as N: the uniform profile) or one of the
    named tokens ``"r0"``, ``"rN2"``, ``"rN4"``.  The named tokens enforce the
    divisibility each closed form needs and raise otherwise, e.g. requesting
    the quarter-phase relation at N=6.
    """
    if isinstance(shift, str):
        if shift == "r0":
            return n_modes
        if shift == "rN2":
            if n_modes % 2 != 0:
                raise ValueError(
                    f"shift 'rN2' needs N divisible by 2, got N={n_modes}"
                )
            return n_modes // 2
        if shift == "rN4":
            if n_modes % 4 != 0:
                raise ValueError(
                    f"shift 'rN4' needs N divisible by 4, got N={n_modes}"
                )
            return n_modes // 4
        raise ValueError(f"unknown shift token {shift!r}, expected one of {SHIFT_TOKENS}")
    r = int(shift) % n_modes
    return n_modes if r == 0 else r


def verify_orthonormality(n_modes: int, shift: int | str) -> float:
    """Residual of the shifted triple-product identity of the ring DFT.

    For shift r the identity reads

        sqrt(N) * sum_j S_{j,r} S_{j,p} S_{j,q} = δ[p == (N - (q + r)) mod N]

    (with 0 mapped to N on the right).  r = N reduces to the plain
    no-conjugate orthogonality, r = N/2 to the alternating-sign variant and
    r = N/4 to the quarter-phase variant used by the three special pump
    profiles.

    Returns the max absolute deviation over all p, q; < 1e-12 for any valid
    input.
    """
    r = resolve_shift(n_modes, shift)
    s = dft_matrix(n_modes).entries
    # triple[p, q] = sqrt(N) * sum_j S_{j,r} S_{j,p} S_{j,q}
    triple = np.sqrt(n_modes) * np.einsum("j,jp,jq->pq", s[:, r - 1], s, s)
    p = np.arange(1, n_modes + 1)
    q = np.arange(1, n_modes + 1)
    partner = (n_modes - (q + r)) % n_modes
    partner[partner == 0] = n_modes
    delta = (p[:, None] == partner[None, :]).astype(float)
    return float(np.max(np.abs(triple - delta)))


def quadrature_transform(basis: FourierBasis) -> np.ndarray:
    """Real 2N x 2N map from Fourier-mode quadratures to waveguide quadratures.

    With quadratures ordered (x_1, y_1, ..., x_N, y_N) and the mode relation
    A_j = sum_p S_{j,p} B_p, the x/y components mix through the real and
    imaginary parts of S:

        x^ind = Re(S) x^f - Im(S) y^f
        y^ind = Im(S) x^f + Re(S) y^f

    The result is orthogonal and symplectic, so covariances transform by
    congruence and vacuum stays vacuum.
    """
    s = basis.entries
    n = basis.n_modes
    t = np.zeros((2 * n, 2 * n))
    t[0::2, 0::2] = s.real
    t[0::2, 1::2] = -s.imag
    t[1::2, 0::2] = s.imag
    t[1::2, 1::2] = s.real
    return t


def change_basis(cov, basis: FourierBasis, direction: str):
    """Congruence-transform a covariance matrix between the two bases.

    Parameters
    ----------
    cov : CovarianceMatrix
        Input covariance; ``cov.basis`` must be consistent with `direction`.
    basis : FourierBasis
        DFT of matching size.
    direction : str
        ``"to_individual"`` (expects a Fourier-basis input) or
        ``"to_fourier"`` (expects an individual-basis input).

    Returns
    -------
    CovarianceMatrix
        Same z, transformed matrix, relabelled basis.  Round-tripping
        reproduces the input to better than 1e-12 and the trace is preserved
        (the transform is orthogonal).
    """
    if direction not in ("to_individual", "to_fourier"):
        raise ValueError(f"unknown direction {direction!r}")
    expected = "fourier" if direction == "to_individual" else "individual"
    if cov.basis != expected:
        raise ValueError(
            f"direction {direction!r} expects a {expected}-basis covariance, "
            f"got {cov.basis!r}"
        )
    if cov.matrix.shape != (2 * basis.n_modes, 2 * basis.n_modes):
        raise ValueError(
            f"covariance shape {cov.matrix.shape} does not match N={basis.n_modes}"
        )
    t = quadrature_transform(basis)
    if direction == "to_individual":
        new = t @ cov.matrix @ t.T
        label = "individual"
    else:
        new = t.T @ cov.matrix @ t
        label = "fourier"
    return dataclasses.replace(cov, matrix=new, basis=label)
