"""The effective 1D transfer channel: a palindromic geometric-hopping chain.

A depth-l channel has 2l+1 sites with zero on-site energies and bond
strengths a^min(j, 2l-1-j), a = 2^(d-alpha).  Its spectrum is symmetric
about zero with an exactly-zero "bus" mode in the middle; the quantity Q
built from endpoint amplitudes and gaps controls how slowly the endpoints
must be coupled, hence the transfer time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkit
from .errors import DomainError, PrecisionGuardError

EPS = 2.0**-52
# eigensolver error is ~eps*||H||; demand it stays 1000x below the smallest gap
GUARD_THRESHOLD = 1e-3
L_MAX = 100


@dataclass(frozen=True)
class EffectiveChain:
    d: int
    alpha: float
    l: int
    a: float
    bonds: np.ndarray  # length 2l, palindromic, bonds[0] = 1
    L: int  # transfer distance 2^(l+1) + 2^l - 2

    @property
    def n_sites(self) -> int:
        return 2 * self.l + 1


@dataclass(frozen=True)
class ChannelSpectrum:
    """Channel eigensystem, ordered from the top of the spectrum down.

    amplitudes[k, j] is the weight of eigenstate k on site j; parity[k]
    = (-1)^k is its mirror eigenvalue, and the zero mode sits at k = l.
    """

    chain: EffectiveChain
    energies: np.ndarray  # descending, energies[l] = 0
    amplitudes: np.ndarray  # (2l+1, 2l+1), amplitudes[k, 0] > 0
    parities: np.ndarray  # +1 / -1 per eigenstate

    @property
    def zero_index(self) -> int:
        return self.chain.l

    @property
    def endpoint_amplitudes(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    @property
    def t_l_0(self) -> float:
        return float(self.amplitudes[self.chain.l, 0])


@dataclass(frozen=True)
class QReport:
    q: float
    t_endpoint_zero_mode: float
    min_gap: float
    terms: np.ndarray  # rows (E_k, t_k0, ((t_k0/t_l0)/E_k)^2) for k != l


def _guard_ok(a: float, l: int) -> bool:
    return EPS * max(1.0, a ** (l - 1)) <= GUARD_THRESHOLD * min(1.0, a**l)


def max_admissible_l(d: int, alpha: float) -> int:
    """Largest even depth passing the precision guard (0 if even l=2 fails)."""
    a = 2.0 ** (d - alpha)
    best = 0
    for l in range(2, L_MAX + 1, 2):
        if _guard_ok(a, l):
            best = l
    return best


def build_effective_chain(d: int, alpha: float, l: int) -> EffectiveChain:
    """Bonds a^min(j, 2l-1-j) with a = 2^(d-alpha); rejects depths whose
    smallest gap would drown in eigensolver roundoff."""
    if d not in (1, 2, 3):
        raise DomainError(f"d must be 1, 2 or 3, got {d}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if l % 2 != 0 or not (2 <= l <= L_MAX):
        raise DomainError(f"l must be even with 2 <= l <= {L_MAX}, got {l}")
    a = 2.0 ** (d - alpha)
    if not _guard_ok(a, l):
        lmax = max_admissible_l(d, alpha)
        raise PrecisionGuardError(
            f"depth l={l} fails the precision guard for d={d}, alpha={alpha} "
            f"(a=2^{d - alpha:g}); maximal admissible l is {lmax}",
            max_admissible_l=lmax,
        )
    j = np.arange(2 * l)
    bonds = a ** np.minimum(j, 2 * l - 1 - j)
    return EffectiveChain(d=d, alpha=alpha, l=l, a=a, bonds=bonds, L=2 ** (l + 1) + 2**l - 2)


def _eps_gap(chain: EffectiveChain) -> float:
    return 1e-8 * max(1.0, chain.a ** (chain.l - 1))


def chain_spectrum(chain: EffectiveChain) -> ChannelSpectrum:
    """Diagonalize the channel by reflection-parity folding.

    The chain commutes with site reflection, so it splits into an even
    sector (l+1 sites, last bond scaled by sqrt(2)) and an odd sector
    (l sites).  Solving the sectors separately keeps the left/right
    tunneling doublets -- which are degenerate to machine precision for
    a < 1 -- from mixing, and makes the mirror symmetry of the returned
    eigenvectors exact.  Sector eigenvalues strictly interlace, so
    interleaving them descending gives parity (-1)^k.
    """
    l = chain.l
    b = chain.bonds
    n = 2 * l + 1
    even_bonds = np.concatenate([b[: l - 1], [np.sqrt(2.0) * b[l - 1]]])
    dec_e = numkit.eigh_tridiagonal(np.zeros(l + 1), even_bonds)
    dec_o = numkit.eigh_tridiagonal(np.zeros(l), b[: l - 1])
    we = dec_e.eigenvalues[::-1]
    ve = dec_e.eigenvectors[:, ::-1]
    wo = dec_o.eigenvalues[::-1]
    vo = dec_o.eigenvectors[:, ::-1]

    energies = np.empty(n)
    energies[0 : 2 * l : 2] = we[:l]
    energies[1 : 2 * l : 2] = wo
    energies[2 * l] = we[l]
    scale = np.max(np.abs(energies))
    if np.any(np.diff(energies) > 1e-10 * scale):
        raise ArithmeticError("sector eigenvalues failed to interlace")
    if abs(energies[l]) > _eps_gap(chain):
        raise ArithmeticError(
            f"middle eigenvalue {energies[l]:.3e} is not zero within {_eps_gap(chain):.3e}"
        )

    amp = np.zeros((n, n))
    s = 1.0 / np.sqrt(2.0)
    for j in range(l + 1):
        k = 2 * j
        amp[k, :l] = ve[:l, j] * s
        amp[k, l] = ve[l, j]
        amp[k, l + 1 :] = ve[:l, j][::-1] * s
    for j in range(l):
        k = 2 * j + 1
        amp[k, :l] = vo[:, j] * s
        amp[k, l + 1 :] = -vo[:, j][::-1] * s

    # global sign: endpoint amplitude positive (fall back to the first
    # non-negligible component for safety; endpoints never vanish for
    # unreduced tridiagonals)
    for k in range(n):
        lead = amp[k, 0]
        if abs(lead) <= 1e-12:
            nz = np.nonzero(np.abs(amp[k]) > 1e-12)[0]
            lead = amp[k, nz[0]] if nz.size else 1.0
        if lead < 0:
            amp[k] = -amp[k]

    parities = np.array([(-1.0) ** k for k in range(n)])
    return ChannelSpectrum(chain=chain, energies=energies, amplitudes=amp, parities=parities)


def zero_mode_analytic(chain: EffectiveChain) -> np.ndarray:
    """Closed-form zero mode for a != 1.

    Amplitude (-a)^(-j) at site 2j for j = 0..l/2, zero on odd sites,
    mirror-extended; normalized so 1/t_l^(0) equals
    sqrt(a^-l + 2(1 - a^-l)/(1 - a^-2)).
    """
    a, l = chain.a, chain.l
    if a == 1.0:
        raise DomainError("a = 1 (alpha = d) is covered by uniform_chain_analytic")
    n = 2 * l + 1
    radical = np.sqrt(a ** (-l) + 2.0 * (1.0 - a ** (-l)) / (1.0 - a ** (-2)))
    amps = np.zeros(n)
    for j in range(l // 2 + 1):
        amps[2 * j] = (-a) ** (-j) / radical
    for site in range(l + 1, n):
        amps[site] = amps[2 * l - site]
    return amps


def uniform_chain_analytic(l: int) -> list[tuple[float, float]]:
    """alpha = d closed form: (E_k, t_k^(0)/t_l^(0)) for k = 0..2l,
    E_k = 2 cos((k+1)pi/(2l+2)), ratio sin((k+1)pi/(2l+2))."""
    if l < 2:
        raise DomainError(f"l must be >= 2, got {l}")
    out = []
    for k in range(2 * l + 1):
        theta = (k + 1) * np.pi / (2 * l + 2)
        out.append((2.0 * np.cos(theta), np.sin(theta)))
    return out


def q_factor(spectrum: ChannelSpectrum) -> QReport:
    """Q = sqrt(sum_{k != l} ((t_k0/t_l0)/E_k)^2): off-resonant weight per gap."""
    l = spectrum.zero_index
    t0 = spectrum.endpoint_amplitudes
    tl = t0[l]
    if not tl > 1e-300:
        raise DomainError("zero-mode endpoint amplitude vanishes")
    mask = np.arange(spectrum.energies.shape[0]) != l
    ek = spectrum.energies[mask]
    tk = t0[mask]
    terms = (tk / tl / ek) ** 2
    return QReport(
        q=float(np.sqrt(np.sum(terms))),
        t_endpoint_zero_mode=float(tl),
        min_gap=float(spectrum.energies[l - 1]),
        terms=np.column_stack([ek, tk, terms]),
    )


def min_gap(spectrum: ChannelSpectrum) -> float:
    """E_{l-1}, the smallest positive eigenvalue."""
    return float(spectrum.energies[spectrum.zero_index - 1])
