"""One-step protocol for alpha < d/2: X and Y joined through every middle
site with the single uniform strength (sqrt(d) L)^(-alpha).

The middle sites enter only through their uniform superposition, so the
N-site walk closes exactly onto a three-level system and transfers
perfectly at T = (pi/sqrt(2)) (sqrt(d) L)^alpha / sqrt(N-2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, RegimeError

N_CAP = 20000


@dataclass(frozen=True)
class UniformProtocol:
    d: int
    alpha: float
    L: int
    N: int
    w: float  # uniform hop strength (sqrt(d) L)^(-alpha)
    W_eff: float  # three-level coupling w * sqrt(N-2)
    T: float  # (pi/sqrt(2)) / W_eff


def build_uniform_protocol(d: int, alpha: float, L: int) -> UniformProtocol:
    if d not in (1, 2, 3):
        raise DomainError(f"d must be 1, 2 or 3, got {d}")
    if not alpha < d / 2.0:
        raise RegimeError(
            f"alpha={alpha} is not < d/2={d / 2.0}; use the tunneling protocol instead"
        )
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if L < 2:
        raise DomainError(f"L must be >= 2, got {L}")
    n = L**d
    if n > N_CAP:
        raise DomainError(f"N = L^d = {n} exceeds explicit-simulation cap {N_CAP}")
    w = (np.sqrt(d) * L) ** (-alpha)
    w_eff = w * np.sqrt(n - 2.0)
    return UniformProtocol(
        d=d, alpha=alpha, L=L, N=n, w=float(w), W_eff=float(w_eff),
        T=float((np.pi / np.sqrt(2.0)) / w_eff),
    )


def _sparse_hamiltonian(protocol: UniformProtocol) -> sp.csr_matrix:
    """Explicit N-site matrix of the protocol: X (site 0) and Y (site N-1)
    each coupled to every middle site with strength w."""
    n, w = protocol.N, protocol.w
    mids = np.arange(1, n - 1)
    rows = np.concatenate([np.zeros(n - 2, int), mids, mids, np.full(n - 2, n - 1)])
    cols = np.concatenate([mids, np.zeros(n - 2, int), np.full(n - 2, n - 1), mids])
    vals = np.full(4 * (n - 2), w)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def evolve_full(protocol: UniformProtocol, times) -> np.ndarray:
    """|<Y| psi(t) >|^2 for each t, evolving |X> under the explicit N-site model."""
    h = _sparse_hamiltonian(protocol)
    psi0 = np.zeros(protocol.N, dtype=complex)
    psi0[0] = 1.0
    out = []
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        psi = spla.expm_multiply(-1j * t * h, psi0)
        out.append(abs(psi[-1]) ** 2)
    return np.array(out)


def three_level_fidelity(protocol: UniformProtocol, times) -> np.ndarray:
    """Closed form for the reduced (X, col, Y) system:
    Y population [1 - cos(sqrt(2) W_eff t)]^2 / 4."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return (1.0 - np.cos(np.sqrt(2.0) * protocol.W_eff * t)) ** 2 / 4.0


def simulate_uniform(protocol: UniformProtocol) -> float:
    """Fidelity |<Y|psi(T)>|^2 of the explicit N-site evolution at T."""
    return float(evolve_full(protocol, protocol.T)[0])


def envelope_margin(protocol: UniformProtocol) -> float:
    """max over coupled pairs of w * r^alpha on the materialized cube.

    Dynamics never needs coordinates (middle couplings are uniform), but the
    power-law constraint does: X sits at the origin, Y at (L-1, 0, ..., 0),
    and w = (sqrt(d) L)^(-alpha) must not exceed 1/r^alpha for any pair.
    """
    d, L = protocol.d, protocol.L
    axes = [np.arange(L)] * d
    coords = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    x = np.zeros(d)
    y = np.zeros(d)
    y[0] = L - 1
    mask = ~(np.all(coords == x, axis=1) | np.all(coords == y, axis=1))
    mids = coords[mask]
    r_from_x = np.sqrt(np.sum((mids - x) ** 2, axis=1))
    r_from_y = np.sqrt(np.sum((mids - y) ** 2, axis=1))
    r_max = max(r_from_x.max(), r_from_y.max())
    return float(protocol.w * r_max**protocol.alpha)


def transfer_time(d: int, alpha: float, L) -> np.ndarray:
    """T(L) from the closed form, valid for any L (no simulation involved)."""
    L = np.asarray(L, dtype=float)
    n = L**d
    return (np.pi / np.sqrt(2.0)) * (np.sqrt(d) * L) ** alpha / np.sqrt(n - 2.0)


def uniform_time_scaling(d: int, alpha: float, L_grid):
    """(L, T) series with its fitted log-log slope; analytic, so the grid may
    reach sizes far beyond the simulation cap."""
    from . import scaling  # local import: scaling does not import uniform

    if not alpha < d / 2.0:
        raise RegimeError(f"alpha={alpha} is not < d/2; wrong regime")
    L = np.asarray(L_grid, dtype=float)
    t = transfer_time(d, alpha, L)
    series = scaling.ScalingSeries(
        points=np.column_stack([L, t]),
        axis_mode="log-log",
        metadata={"protocol": "uniform", "d": d, "alpha": alpha},
    )
    fit = scaling.fit_loglog_slope(series)
    return series.with_fit(extrapolated_exponent=fit.slope, fit_quality=fit.r_squared)
