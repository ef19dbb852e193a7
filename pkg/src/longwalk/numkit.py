"""Numerical kernels: symmetric eigensolvers, spectral time evolution,
circulant spectra, and least-squares fits.

Everything here is pure and deterministic.  Eigensolvers are backed by
LAPACK with an absolute-accuracy model eps*||H||; the tridiagonal path uses
bisection + inverse iteration ('stebz'), which stays robust on matrices
whose off-diagonals span many orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DomainError

DENSE_DIM_CAP = 4096
DIRECT_DFT_CAP = 4096


@dataclass(frozen=True)
class SymmetricEigenDecomposition:
    """Eigenvalues ascending; eigenvector column j pairs with eigenvalue j."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    residual_sse: float


@dataclass(frozen=True)
class PowerLawOffsetFit:
    """Parameters of y = amplitude * x**exponent + offset."""

    amplitude: float
    exponent: float
    offset: float
    residual_sse: float


def eigh_tridiagonal(diagonal, offdiagonal) -> SymmetricEigenDecomposition:
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    Uses the bisection + inverse-iteration LAPACK driver, which (unlike the
    default MRRR driver) converges on strongly graded chains and returns
    componentwise-accurate eigenvectors for eigenvalues near zero.
    """
    d = np.asarray(diagonal, dtype=float)
    e = np.asarray(offdiagonal, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or e.shape[0] != d.shape[0] - 1:
        raise DomainError(
            f"offdiagonal length must be len(diagonal)-1, got {e.shape[0]} vs {d.shape[0]}"
        )
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise DomainError("non-finite entries in tridiagonal input")
    if d.shape[0] == 1:
        return SymmetricEigenDecomposition(d.copy(), np.ones((1, 1)))
    w, v = sla.eigh_tridiagonal(d, e, lapack_driver="stebz")
    return SymmetricEigenDecomposition(w, v)


def eigh_dense(matrix) -> SymmetricEigenDecomposition:
    """Eigendecomposition of a dense real symmetric matrix (dim <= 4096)."""
    h = np.asarray(matrix, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError(f"matrix must be square, got shape {h.shape}")
    if h.shape[0] > DENSE_DIM_CAP:
        raise DomainError(f"dense dimension {h.shape[0]} exceeds cap {DENSE_DIM_CAP}")
    scale = max(1.0, np.max(np.abs(h)))
    if np.max(np.abs(h - h.T)) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric to 1e-12 relative")
    w, v = np.linalg.eigh(h)
    return SymmetricEigenDecomposition(w, v)


def evolve(decomposition: SymmetricEigenDecomposition, initial, time: float) -> np.ndarray:
    """psi(t) = V exp(-i lambda t) V^T psi0, for a normalized initial vector."""
    psi0 = np.asarray(initial)
    if psi0.shape != (decomposition.dim,):
        raise DomainError(
            f"state dimension {psi0.shape} does not match decomposition dim {decomposition.dim}"
        )
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-12:
        raise DomainError(f"initial state norm {nrm!r} is not 1 within 1e-12")
    v = decomposition.eigenvectors
    phases = np.exp(-1j * decomposition.eigenvalues * time)
    return v @ (phases * (v.T @ psi0))


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def real_dft_circulant(first_row) -> np.ndarray:
    """Spectrum E_k = sum_r row[r] cos(2 pi k r / L) of a real symmetric circulant.

    Fast transform for power-of-two L; direct cosine summation otherwise
    (direct path capped at L <= 4096).
    """
    row = np.asarray(first_row, dtype=float)
    L = row.shape[0]
    if L % 2 != 0:
        raise DomainError(f"circulant length must be even, got {L}")
    idx = np.arange(1, L)
    if np.max(np.abs(row[idx] - row[L - idx])) > 1e-12 * max(1.0, np.max(np.abs(row))):
        raise DomainError("first row is not symmetric: row[r] != row[L-r]")
    if _is_power_of_two(L):
        return np.fft.fft(row).real
    if L > DIRECT_DFT_CAP:
        raise DomainError(
            f"non-power-of-two length {L} exceeds direct-summation cap {DIRECT_DFT_CAP}"
        )
    k = np.arange(L)
    return np.cos(2.0 * np.pi * np.outer(k, k) / L) @ row


def linear_fit(x, y) -> FitResult:
    """Ordinary least squares y = slope*x + intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 2:
        raise DomainError("linear_fit needs two equal-length 1-d arrays, length >= 2")
    if np.max(x) == np.min(x):
        raise DomainError("degenerate x: all abscissae equal")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - slope * x - intercept
    sse = float(resid @ resid)
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if sst <= 1e-300 else 1.0 - sse / sst
    return FitResult(float(slope), float(intercept), float(min(max(r2, 0.0), 1.0)), sse)


def _profiled_sse(x: np.ndarray, y: np.ndarray, b: float):
    """For fixed b, solve the linear subproblem min ||y - a x^b - c||^2."""
    basis = np.column_stack([x**b, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    r = y - basis @ coef
    return float(r @ r), float(coef[0]), float(coef[1])


# exponent search bracket: every exponent appearing in the sweeps lies in (0, 2]
POWERLAW_B_RANGE = (0.01, 4.0)
# bracket width at termination; tighter than strictly needed so the
# exact-data recovery contract (1e-6 relative) and the rescaling-invariance
# contract (1e-10) hold with margin
_POWERLAW_B_TOL = 1e-11


def powerlaw_offset_fit(x, y) -> PowerLawOffsetFit:
    """Fit y = a*x^b + c by golden-section search over b with (a, c) profiled out."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 4:
        raise DomainError("powerlaw_offset_fit needs >= 4 points")
    if np.any(x <= 0):
        raise DomainError("all x must be positive")
    if np.unique(x).shape[0] != x.shape[0]:
        raise DomainError("x values must be distinct")
    lo, hi = POWERLAW_B_RANGE
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    c1 = hi - gr * (hi - lo)
    c2 = lo + gr * (hi - lo)
    f1, _, _ = _profiled_sse(x, y, c1)
    f2, _, _ = _profiled_sse(x, y, c2)
    while hi - lo > _POWERLAW_B_TOL:
        if f1 < f2:
            hi, c2, f2 = c2, c1, f1
            c1 = hi - gr * (hi - lo)
            f1, _, _ = _profiled_sse(x, y, c1)
        else:
            lo, c1, f1 = c1, c2, f2
            c2 = lo + gr * (hi - lo)
            f2, _, _ = _profiled_sse(x, y, c2)
    b = 0.5 * (lo + hi)
    sse, a, c = _profiled_sse(x, y, b)
    return PowerLawOffsetFit(a, float(b), c, sse)
