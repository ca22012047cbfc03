"""Ring arithmetic mod q, Lee weight/distance, compositions and entropy.

Elements of Z_q are canonical representatives 0..q-1; all arithmetic
reduces eagerly mod q. Entropies are in nats throughout.
"""

from dataclasses import dataclass, field
from math import gcd
import numpy as np


@dataclass(frozen=True)
class RingContext:
    """The ring Z_q: modulus, half-range r = floor(q/2), and its units.

    Unit inverses are precomputed (extended gcd) since they sit in the
    check-node hot path of the decoders.
    """

    q: int
    r: int = field(init=False)
    units: tuple = field(init=False)
    _inv: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"modulus must be >= 2, got {self.q}")
        object.__setattr__(self, "r", self.q // 2)
        us = tuple(a for a in range(1, self.q) if gcd(a, self.q) == 1)
        object.__setattr__(self, "units", us)
        object.__setattr__(self, "_inv", {u: pow(u, -1, self.q) for u in us})

    def inverse(self, u: int) -> int:
        """Multiplicative inverse of a unit; ValueError on non-units."""
        try:
            return self._inv[u % self.q]
        except KeyError:
            raise ValueError(f"{u} is not a unit of Z_{self.q}") from None

    def weights(self) -> np.ndarray:
        """Lee weights of 0..q-1 as a float array."""
        a = np.arange(self.q)
        return np.minimum(a, self.q - a).astype(float)


@dataclass(frozen=True)
class Composition:
    """Empirical distribution of a vector over Z_q."""

    freqs: np.ndarray  # length q, sums to 1
    n: int

    def __post_init__(self):
        s = float(self.freqs.sum())
        if abs(s - 1.0) > 1e-12:
            raise ValueError(f"composition must sum to 1, got {s}")


def _check_elements(x: np.ndarray, ctx: RingContext):
    if np.any(x < 0) or np.any(x >= ctx.q):
        raise ValueError(f"elements must lie in [0, {ctx.q})")


def lee_weight(a: int, ctx: RingContext) -> int:
    """min(a, q-a) for a canonical representative a."""
    if not 0 <= a < ctx.q:
        raise ValueError(f"element {a} out of range [0, {ctx.q})")
    return min(a, ctx.q - a)


def lee_weight_vec(x, ctx: RingContext) -> int:
    """Sum of per-symbol Lee weights; at most n * floor(q/2)."""
    x = np.asarray(x)
    _check_elements(x, ctx)
    return int(np.minimum(x, ctx.q - x).sum())


def lee_distance(x, y, ctx: RingContext) -> int:
    """Lee distance = Lee weight of (x - y) mod q. A true metric."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    _check_elements(x, ctx)
    _check_elements(y, ctx)
    return lee_weight_vec((x - y) % ctx.q, ctx)


def composition_of(x, ctx: RingContext) -> Composition:
    """Relative frequency of each ring element in x."""
    x = np.asarray(x)
    if x.size == 0:
        raise ValueError("composition of an empty vector is undefined")
    _check_elements(x, ctx)
    counts = np.bincount(x.astype(int), minlength=ctx.q)
    return Composition(freqs=counts / x.size, n=int(x.size))


def entropy_nats(p) -> float:
    """Entropy -sum p_i ln p_i in nats, zero terms skipped."""
    if isinstance(p, Composition):
        p = p.freqs
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    s = float(p.sum())
    if abs(s - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {s}")
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))
