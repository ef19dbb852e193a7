"""longwalk: time-independent long-range quantum state-transfer protocols.

Single-particle quantum walks with power-law hopping: the uniform one-step
protocol (alpha < d/2), the recursive block / tunneling protocol
(alpha >= d/2), and the translation-invariant ring protocol, together with
the spectral scaling experiments that compare their transfer times against
the free-particle light-cone exponents.
"""

__version__ = "0.1.0"

from .errors import DomainError, PrecisionGuardError, RegimeError

__all__ = ["DomainError", "PrecisionGuardError", "RegimeError", "__version__"]
