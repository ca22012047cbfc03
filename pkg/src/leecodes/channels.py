"""Memoryless and constant-weight Lee channels.

The memoryless channel adds i.i.d. noise with the Boltzmann-form marginal
phi*_i = exp(-beta * w_L(i)) / Z(beta); beta and the expected per-symbol
Lee weight delta are linked by the strictly monotone map delta(beta)
= -d log Z / d beta. The constant-weight channel adds an error vector
drawn exactly uniformly from the surface of the radius-t Lee sphere,
using exact integer counting.
"""

from dataclasses import dataclass

import numpy as np

from .ring import RingContext
from .rng import randbelow


def partition_z(ctx: RingContext, beta: float) -> float:
    """Normalization Z(beta) = sum_e exp(-beta * w_L(e)). Z(0) = q."""
    return float(np.exp(-beta * ctx.weights()).sum())


def _boltzmann_weights(ctx: RingContext, beta: float) -> np.ndarray:
    """exp(-beta * w_L) up to a constant factor, overflow-safe for either sign of beta."""
    a = -beta * ctx.weights()
    return np.exp(a - a.max())


def delta_from_beta(ctx: RingContext, beta: float) -> float:
    """Mean Lee weight under the Boltzmann marginal; strictly decreasing in beta."""
    w = ctx.weights()
    e = _boltzmann_weights(ctx, beta)
    return float((w * e).sum() / e.sum())


_BETA_LO, _BETA_HI = -50.0, 50.0


def beta_from_delta(ctx: RingContext, delta: float, tol: float = 1e-12) -> float:
    """Invert delta(beta) by bisection on [-50, 50] plus Newton polish.

    Valid for delta in (0, r); delta > delta_q yields beta < 0.
    """
    if not 0.0 < delta < ctx.r:
        raise ValueError(f"delta must lie in (0, {ctx.r}), got {delta}")
    lo, hi = _BETA_LO, _BETA_HI
    if delta_from_beta(ctx, lo) < delta or delta_from_beta(ctx, hi) > delta:
        # boundary already within tolerance of the asymptote
        return lo if abs(delta_from_beta(ctx, lo) - delta) < abs(delta_from_beta(ctx, hi) - delta) else hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if delta_from_beta(ctx, mid) > delta:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    w = ctx.weights()
    for _ in range(4):  # Newton: d delta / d beta = -Var(w)
        e = _boltzmann_weights(ctx, beta)
        p = e / e.sum()
        mean = float((w * p).sum())
        var = float((w * w * p).sum()) - mean * mean
        if var <= 0:
            break
        step = (mean - delta) / var
        if abs(step) > 1.0:
            break
        beta += step
        if abs(step) < 1e-15:
            break
    assert abs(delta_from_beta(ctx, beta) - delta) < max(tol, 1e-10)
    return float(beta)


def marginal_phi_star(ctx: RingContext, delta: float) -> np.ndarray:
    """Entropy-maximizing PMF with mean Lee weight delta; symmetric in i <-> q-i."""
    beta = beta_from_delta(ctx, delta)
    return _phi_from_beta(ctx, beta)


def _phi_from_beta(ctx: RingContext, beta: float) -> np.ndarray:
    e = _boltzmann_weights(ctx, beta)
    return e / e.sum()


@dataclass(frozen=True)
class LeeChannelSpec:
    """One memoryless Lee channel instance: (q, beta, delta, Z)."""

    ctx: RingContext
    beta: float
    delta: float
    z: float

    @classmethod
    def from_delta(cls, ctx: RingContext, delta: float) -> "LeeChannelSpec":
        beta = beta_from_delta(ctx, delta)
        return cls(ctx=ctx, beta=beta, delta=delta, z=partition_z(ctx, beta))

    @classmethod
    def from_beta(cls, ctx: RingContext, beta: float) -> "LeeChannelSpec":
        return cls(ctx=ctx, beta=beta, delta=delta_from_beta(ctx, beta),
                   z=partition_z(ctx, beta))

    def error_pmf(self) -> np.ndarray:
        """PMF of the additive error symbol (the marginal phi*)."""
        return _phi_from_beta(self.ctx, self.beta)

    def likelihood_matrix(self) -> np.ndarray:
        """L[y, x] = P(y | x) = phi*((y - x) mod q); rows sum to 1."""
        q = self.ctx.q
        phi = self.error_pmf()
        idx = (np.arange(q)[:, None] - np.arange(q)[None, :]) % q
        return phi[idx]


def transmit_memoryless(spec: LeeChannelSpec, x, rng: np.random.Generator) -> np.ndarray:
    """y = x + e mod q with e i.i.d. ~ phi*; deterministic given the generator state."""
    x = np.asarray(x)
    e = rng.choice(spec.ctx.q, size=x.shape, p=spec.error_pmf())
    return (x + e) % spec.ctx.q


class SphereCounter:
    """Exact counts N(l, t) = #{x in Z_q^l : w_L(x) = t} as Python integers.

    The DP recursion N(l, t) = sum_a N(l-1, t - w_L(a)) gives both exact
    sphere surface sizes and an exactly uniform sequential sampler: the
    counts for n = 256, q = 8 run to a few hundred digits, which arbitrary
    precision integers handle directly.  Immutable after construction.
    """

    def __init__(self, ctx: RingContext, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.ctx = ctx
        self.n = n
        wl = [min(a, ctx.q - a) for a in range(ctx.q)]
        self._wl = wl
        tmax = n * ctx.r
        table = [[0] * (tmax + 1) for _ in range(n + 1)]
        table[0][0] = 1
        for l in range(1, n + 1):
            prev = table[l - 1]
            cur = table[l]
            lim = l * ctx.r
            for t in range(lim + 1):
                s = 0
                for w in wl:
                    if t >= w:
                        s += prev[t - w]
                cur[t] = s
        self._table = table

    def sphere_size(self, t: int) -> int:
        """|S^n_t|, exact."""
        if not 0 <= t <= self.n * self.ctx.r:
            raise ValueError(f"weight {t} out of range [0, {self.n * self.ctx.r}]")
        return self._table[self.n][t]

    def sample_constant_weight(self, t: int, rng: np.random.Generator) -> np.ndarray:
        """Exactly uniform draw from the weight-t sphere surface.

        Coordinate l is assigned value a with probability
        N(n-l, t' - w_L(a)) / N(n-l+1, t'), so every vector of weight t has
        probability exactly 1/N(n, t).
        """
        if self.sphere_size(t) == 0:
            raise ValueError(f"empty sphere: no vectors of weight {t}")
        out = np.empty(self.n, dtype=np.int64)
        rem_w = t
        for pos in range(self.n):
            rem_len = self.n - pos - 1
            u = randbelow(rng, self._table[rem_len + 1][rem_w])
            for a, w in enumerate(self._wl):
                if rem_w >= w:
                    cnt = self._table[rem_len][rem_w - w]
                    if u < cnt:
                        out[pos] = a
                        rem_w -= w
                        break
                    u -= cnt
            else:  # pragma: no cover - DP identity guarantees a branch is taken
                raise AssertionError("sphere DP inconsistency")
        return out

    def transmit_constant_weight(self, x, t: int, rng: np.random.Generator) -> np.ndarray:
        """y = x + e mod q with e uniform over the weight-t sphere."""
        x = np.asarray(x)
        if x.shape != (self.n,):
            raise ValueError(f"x must have length {self.n}")
        e = self.sample_constant_weight(t, rng)
        return (x + e) % self.ctx.q


def sphere_size(counter: SphereCounter, t: int) -> int:
    """Module-level alias for SphereCounter.sphere_size."""
    return counter.sphere_size(t)


def sample_constant_weight(counter: SphereCounter, t: int, rng: np.random.Generator) -> np.ndarray:
    """Module-level alias for SphereCounter.sample_constant_weight."""
    return counter.sample_constant_weight(t, rng)


def transmit_constant_weight(counter: SphereCounter, x, t: int, rng: np.random.Generator) -> np.ndarray:
    """Module-level alias for SphereCounter.transmit_constant_weight."""
    return counter.transmit_constant_weight(x, t, rng)
