"""Finite-length benchmarks: sphere-volume RCU bounds, Shannon limit, normal approximation.

The achievability exponent for a random (n, nR) code over the
constant-weight channel is n * [(1-R) ln q - H+_delta]^+, where H+_delta
caps the sphere-entropy H_delta at ln q beyond delta_q. The memoryless
variant averages the same exponent over the exact distribution of the
total error weight. Capacity and dispersion use the uniform input
distribution, which is optimal here because the channel is additive over
the ring (the noise PMF is input-independent).
"""

import math

import numpy as np
from scipy.special import erfc, erfcinv

from .ring import RingContext, entropy_nats
from .channels import LeeChannelSpec, marginal_phi_star


def delta_q(ctx: RingContext) -> float:
    """Mean Lee weight under uniform noise: (q^2-1)/4q for odd q, q/4 for even."""
    q = ctx.q
    return (q * q - 1) / (4 * q) if q % 2 else q / 4


def h_delta(ctx: RingContext, delta: float) -> float:
    """Entropy (nats) of the mean-weight-delta Boltzmann marginal; 0 at delta = 0."""
    if delta == 0:
        return 0.0
    if not 0 <= delta <= ctx.r:
        raise ValueError(f"delta must lie in [0, {ctx.r}], got {delta}")
    if delta == ctx.r:
        # beta -> -inf limit: mass splits over the maximum-weight elements
        nmax = 1 if ctx.q % 2 == 0 else 2
        return math.log(nmax)
    return entropy_nats(marginal_phi_star(ctx, delta))


def h_plus_delta(ctx: RingContext, delta: float) -> float:
    """H_delta capped at ln q for delta beyond delta_q."""
    if delta > delta_q(ctx):
        return math.log(ctx.q)
    return h_delta(ctx, delta)


def rcu_constant_weight(ctx: RingContext, n: int, rate: float, delta: float) -> float:
    """exp(-n [(1-R) ln q - H+_delta]^+): RCU bound for the constant-weight channel."""
    _check_query(n, rate)
    expo = (1.0 - rate) * math.log(ctx.q) - h_plus_delta(ctx, delta)
    return math.exp(-n * max(0.0, expo))


def symbol_weight_pmf(ctx: RingContext, beta: float) -> np.ndarray:
    """PMF of the Lee weight of one phi* error symbol, support 0..r.

    Weight w has multiplicity m_0 = 1, m_w = 2 for 1 <= w < q/2, and
    m_{q/2} = 1 when q is even.
    """
    q, r = ctx.q, ctx.r
    mult = np.full(r + 1, 2.0)
    mult[0] = 1.0
    if q % 2 == 0:
        mult[r] = 1.0
    w = np.arange(r + 1, dtype=float)
    raw = mult * np.exp(-beta * w)
    return raw / raw.sum()


def total_weight_pmf(ctx: RingContext, beta: float, n: int) -> np.ndarray:
    """Exact PMF of the total Lee weight of n i.i.d. phi* symbols (n-fold convolution)."""
    base = symbol_weight_pmf(ctx, beta)
    # binary exponentiation of the convolution power
    result = np.array([1.0])
    acc = base
    k = n
    while k:
        if k & 1:
            result = np.convolve(result, acc)
        k >>= 1
        if k:
            acc = np.convolve(acc, acc)
    return result


def rcu_memoryless(ctx: RingContext, n: int, rate: float, delta: float) -> float:
    """E_D[exp(-n [(1-R) ln q - H+_{D/n}]^+)] with the exact weight distribution."""
    _check_query(n, rate)
    spec = LeeChannelSpec.from_delta(ctx, delta)
    pmf = total_weight_pmf(ctx, spec.beta, n)
    log_q = math.log(ctx.q)
    total = 0.0
    for d, pd in enumerate(pmf):
        if pd == 0.0:
            continue
        expo = (1.0 - rate) * log_q - h_plus_delta(ctx, d / n)
        total += pd * math.exp(-n * max(0.0, expo))
    return total


def shannon_limit(ctx: RingContext, rate: float, tol: float = 1e-6) -> float:
    """The delta where H_delta = (1-R) ln q: the asymptotic limit at rate R."""
    _check_query(1, rate)
    target = (1.0 - rate) * math.log(ctx.q)
    lo, hi = 0.0, delta_q(ctx)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h_delta(ctx, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def qfunc(x: float) -> float:
    """Gaussian tail Q(x) = 0.5 erfc(x / sqrt 2)."""
    return 0.5 * float(erfc(x / math.sqrt(2.0)))


def qfunc_inv(eps: float) -> float:
    """Inverse Gaussian tail; relative error below 1e-10 on [1e-12, 0.5]."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.sqrt(2.0) * float(erfcinv(2.0 * eps))


def capacity_nats(spec: LeeChannelSpec) -> float:
    """Uniform-input mutual information C = ln q - H(phi*) in nats per symbol."""
    return math.log(spec.ctx.q) - entropy_nats(spec.error_pmf())


def dispersion_nats(spec: LeeChannelSpec) -> float:
    """Variance of the information density ln(q phi*(E)) under E ~ phi*."""
    phi = spec.error_pmf()
    info = np.log(spec.ctx.q * phi)
    mean = float((phi * info).sum())
    return float((phi * (info - mean) ** 2).sum())


def na_rate(spec: LeeChannelSpec, n: int, eps: float) -> float:
    """Normal-approximation achievable rate R (symbols) at block error target eps.

    R ln q ~= C - sqrt(V/n) Qinv(eps) + ln(n) / (2n).
    """
    c = capacity_nats(spec)
    v = dispersion_nats(spec)
    nats = c - math.sqrt(v / n) * qfunc_inv(eps) + math.log(n) / (2 * n)
    return nats / math.log(spec.ctx.q)


def na_bler(spec: LeeChannelSpec, n: int, rate: float) -> float:
    """Normal-approximation block error probability at rate R (inverse of na_rate)."""
    _check_query(n, rate)
    c = capacity_nats(spec)
    v = dispersion_nats(spec)
    gap = c - rate * math.log(spec.ctx.q) + math.log(n) / (2 * n)
    if v <= 0.0:
        return 0.0 if gap >= 0 else 1.0
    return qfunc(gap * math.sqrt(n / v))


def _check_query(n: int, rate: float):
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
