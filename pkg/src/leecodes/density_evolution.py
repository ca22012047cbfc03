"""Density evolution for SMP and BP decoding over the memoryless Lee channel.

SMP-DE is deterministic: the check-node output distribution is computed
exactly (unit-averaged circular convolutions), and the variable-node
update enumerates every (channel output, message count-vector) outcome,
with the count-vector drawn from the decoder's own q-ary symmetric model
of the extrinsic channel at the matched error probability xi = 1 - w_0.
It yields both the threshold and the xi schedule the finite-length SMP
decoder consumes.

BP-DE uses population dynamics: a pool of sampled message PMFs under the
all-zero-codeword assumption, resampled through check and variable updates
with fresh uniform unit edge labels each round.

Conditioned on the all-zero codeword, everything is tracked as
Pr{message = a | X = 0}.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement
import math

import numba
import numpy as np

from .ring import RingContext
from .channels import LeeChannelSpec
from .bounds import delta_q
from .decoders import XiSchedule
from .rng import stream_rng

_XI_FLOOR = 1e-30
_P0_TARGET = 1.0 - 1e-9


def tv_distance(p, s) -> float:
    """Total variation distance: half the L1 distance between two PMFs."""
    p = np.asarray(p, dtype=float)
    s = np.asarray(s, dtype=float)
    if p.shape != s.shape:
        raise ValueError(f"alphabet size mismatch: {p.shape} vs {s.shape}")
    return 0.5 * float(np.abs(p - s).sum())


@dataclass(frozen=True)
class DeState:
    """One SMP-DE iterate: VN-to-CN message PMF p, CN-to-VN PMF w, and xi = 1 - w_0."""

    iteration: int
    p: np.ndarray
    w: np.ndarray
    xi: float


@dataclass
class DeReport:
    """Trajectory summary of one DE run at a fixed channel parameter."""

    delta: float
    converged: bool
    iterations: int
    p0: list  # p_0 per iteration
    xis: list  # xi per iteration
    tvs: list  # TV(w, qSC(xi)) per iteration


class _SmpDe:
    """Exact SMP density evolution for a regular (v, c) ensemble on Z_q."""

    def __init__(self, ctx: RingContext, v: int, c: int, spec: LeeChannelSpec):
        if v < 2 or c < 2:
            raise ValueError("regular degrees must be >= 2")
        self.ctx, self.v, self.c = ctx, v, c
        q = ctx.q
        self.q = q
        self.prime = len(ctx.units) == q - 1
        phi = spec.error_pmf()
        self.phi = phi
        logphi = np.log(phi)
        aq = np.arange(q)
        self.LCH = logphi[(aq[:, None] - aq[None, :]) % q]  # LCH[y, b] = ln P(y | b)
        # unit scaling permutations and the negation map
        self.scale_idx = np.stack([(ctx.inverse(u) * aq) % q for u in ctx.units])
        self.NEG = (-aq) % q
        # all count vectors of v-1 messages into q bins, with multinomial coefficients
        cvs = []
        for comb in combinations_with_replacement(range(q), v - 1):
            f = np.zeros(q)
            for s in comb:
                f[s] += 1
            cvs.append(f)
        self.F = np.array(cvs)
        self.coef = np.exp(np.array(
            [math.lgamma(v) - sum(math.lgamma(fi + 1) for fi in f) for f in self.F]))

    def unit_avg(self, p: np.ndarray) -> np.ndarray:
        """PMF of u*X for a uniform unit label u and X ~ p.

        For prime q every nonzero element is a unit, so the result is
        uniform over the nonzeros; building it from one shared expression
        keeps the symmetry exact in floating point.
        """
        if self.prime:
            out = np.full(self.q, (p.sum() - p[0]) / (self.q - 1))
            out[0] = p[0]
            return out
        return p[self.scale_idx].mean(axis=0)

    def cn_update(self, p: np.ndarray) -> np.ndarray:
        """Exact CN-to-VN message distribution: -h^{-1} sum of c-1 labeled inputs."""
        q = self.q
        s = self.unit_avg(p)
        t = s
        idx = (np.arange(q)[:, None] - np.arange(q)[None, :]) % q  # idx[k, j] = (k-j)%q
        for _ in range(self.c - 2):
            t = (t[None, :] * s[idx]).sum(axis=1)
        w = self.unit_avg(t[self.NEG])
        w = np.maximum(w, 0.0)
        if self.prime:
            # exact q-SC shape: w0 plus the uniform remainder, normalized
            w0 = w[0] / (w[0] + (q - 1) * w[1])
            out = np.full(q, (1.0 - w0) / (q - 1))
            out[0] = w0
            return out
        return w / w.sum()

    def vn_update(self, w: np.ndarray, xi: float) -> np.ndarray:
        """Next VN-to-CN PMF by exact enumeration of (y, count vector) outcomes.

        Counts follow the qSC model at error probability xi (the channel the
        decoder itself assumes); ties in the argmax split uniformly.
        """
        q = self.q
        d = math.log1p(-xi) - math.log(xi / (q - 1))
        qsc = np.full(q, xi / (q - 1))
        qsc[0] = 1.0 - xi
        prob_f = self.coef * np.prod(qsc[None, :] ** self.F, axis=1)
        p_next = np.zeros(q)
        ext = d * self.F  # (ncv, q)
        for y in range(q):
            E = self.LCH[y][None, :] + ext
            mx = E.max(axis=1, keepdims=True)
            ties = E == mx
            share = ties / ties.sum(axis=1, keepdims=True)
            p_next += self.phi[y] * (prob_f[:, None] * share).sum(axis=0)
        p_next = np.maximum(p_next, 0.0)
        return p_next / p_next.sum()

    def matched_qsc(self, w: np.ndarray) -> np.ndarray:
        """The qSC with the same error probability as the extrinsic distribution w."""
        q = self.q
        out = np.full(q, (1.0 - w[0]) / (q - 1))
        out[0] = w[0]
        return out

    def step(self, p: np.ndarray, iteration: int) -> DeState:
        w = self.cn_update(p)
        xi = float(min(max(1.0 - w[0], _XI_FLOOR), (self.q - 1) / self.q))
        return DeState(iteration=iteration, p=self.vn_update(w, xi), w=w, xi=xi)


def smp_de_step(ctx: RingContext, state: DeState, spec: LeeChannelSpec,
                v: int, c: int) -> DeState:
    """One SMP-DE iteration from the given state."""
    return _SmpDe(ctx, v, c, spec).step(state.p, state.iteration + 1)


def smp_de_run(ctx: RingContext, v: int, c: int, spec: LeeChannelSpec,
               lmax: int = 1000, p0_target: float = _P0_TARGET) -> DeReport:
    """Run SMP-DE at the spec's delta until convergence, a fixed point, or lmax."""
    de = _SmpDe(ctx, v, c, spec)
    p = de.phi.copy()  # p^(0)_a = P(Y = a | X = 0)
    report = DeReport(delta=spec.delta, converged=False, iterations=0,
                      p0=[], xis=[], tvs=[])
    for it in range(1, lmax + 1):
        state = de.step(p, it)
        report.p0.append(float(state.p[0]))
        report.xis.append(state.xi)
        report.tvs.append(tv_distance(state.w, de.matched_qsc(state.w)))
        moved = float(np.abs(state.p - p).max())
        p = state.p
        report.iterations = it
        if p[0] >= p0_target:
            report.converged = True
            break
        if moved < 1e-14:
            break  # fixed point below the target
    return report


def smp_threshold(ctx: RingContext, v: int, c: int, lmax: int = 1000,
                  tol: float = 5e-4):
    """Bisect delta for the largest converging SMP-DE; also returns the xi schedule.

    The schedule is the one observed at the last converging delta (just
    below threshold), padded by its final value for later iterations.
    """
    lo, hi = 1e-6, delta_q(ctx)
    best_report = None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        report = smp_de_run(ctx, v, c, LeeChannelSpec.from_delta(ctx, mid), lmax=lmax)
        if report.converged:
            lo, best_report = mid, report
        else:
            hi = mid
    if best_report is None:
        report = smp_de_run(ctx, v, c, LeeChannelSpec.from_delta(ctx, lo), lmax=lmax)
        best_report = report
    schedule = XiSchedule(xis=tuple(best_report.xis), final_xi=best_report.xis[-1])
    return 0.5 * (lo + hi), schedule


def xi_schedule(ctx: RingContext, v: int, c: int, delta: float, lmax: int) -> XiSchedule:
    """The xi trajectory of SMP-DE at the operating delta, for the finite-length decoder."""
    report = smp_de_run(ctx, v, c, LeeChannelSpec.from_delta(ctx, delta), lmax=lmax)
    return XiSchedule(xis=tuple(report.xis), final_xi=report.xis[-1])


def qsc_approximation_gap(ctx: RingContext, v: int, c: int, spec: LeeChannelSpec,
                          lmax: int = 200) -> list:
    """Per-iteration TV between the exact extrinsic distribution and its qSC fit.

    Exactly zero at every iteration when q is prime (unit averaging makes
    the CN output symmetric); the run does not stop early so the full
    evolution is visible even past a fixed point.
    """
    report = smp_de_run(ctx, v, c, spec, lmax=lmax, p0_target=2.0)
    return report.tvs


# --------------------------------------------------------------------------
# BP density evolution (population dynamics)
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _cn_fold_chain(pop, picks, uidx, uperm, out):
    """Check-node resampling: circular convolution of unit-permuted pool rows.

    out[i] = convolution of pop[picks[i, j]] permuted by the unit labels
    uperm[uidx[i, j]]; the output label and negation are applied by the
    caller.
    """
    N, q = pop.shape
    nin = picks.shape[1]
    acc = np.empty(q)
    nxt = np.empty(q)
    mp = np.empty(q)
    for i in range(N):
        src = pop[picks[i, 0]]
        for a in range(q):
            acc[a] = src[uperm[uidx[i, 0], a]]
        for j in range(1, nin):
            src = pop[picks[i, j]]
            for a in range(q):
                mp[a] = src[uperm[uidx[i, j], a]]
            for k in range(q):
                s = 0.0
                for jj in range(q):
                    kk = k - jj
                    if kk < 0:
                        kk += q
                    s += acc[jj] * mp[kk]
                nxt[k] = s
            for a in range(q):
                acc[a] = nxt[a]
        for a in range(q):
            out[i, a] = acc[a]


class _BpDe:
    """Population-dynamics BP-DE for a regular (v, c) ensemble on Z_q."""

    def __init__(self, ctx: RingContext, v: int, c: int, spec: LeeChannelSpec,
                 pop_size: int, rng: np.random.Generator):
        self.ctx, self.v, self.c = ctx, v, c
        self.N = pop_size
        self.rng = rng
        q = ctx.q
        self.q = q
        self.phi = spec.error_pmf()
        aq = np.arange(q)
        self.nu = len(ctx.units)
        self.uperm = np.stack([(ctx.inverse(u) * aq) % q for u in ctx.units]).astype(np.intp)
        self.oneg = np.stack([(-u * aq) % q for u in ctx.units]).astype(np.intp)
        self.pop = self._fresh_channel()

    def _fresh_channel(self) -> np.ndarray:
        y = self.rng.choice(self.q, size=self.N, p=self.phi)
        return self.phi[(y[:, None] - np.arange(self.q)[None, :]) % self.q]

    def iterate(self) -> float:
        """One CN + VN resampling round; returns the tie-split symbol error rate."""
        N, q, rng = self.N, self.q, self.rng
        picks = rng.integers(0, N, size=(N, self.c - 1))
        uidx = rng.integers(0, self.nu, size=(N, self.c - 1))
        oidx = rng.integers(0, self.nu, size=N)
        w = np.empty((N, q))
        _cn_fold_chain(self.pop, picks, uidx, self.uperm, w)
        w = np.take_along_axis(w, self.oneg[oidx], axis=1)
        prod = self._fresh_channel()
        for _ in range(self.v - 1):
            prod = prod * w[rng.integers(0, N, size=N)]
            prod /= np.maximum(prod.sum(axis=1, keepdims=True), 1e-300)
        self.pop = prod
        mx = prod.max(axis=1)
        nmax = (prod == mx[:, None]).sum(axis=1)
        return float(np.mean(1.0 - (prod[:, 0] == mx) / nmax))


def bp_de_run(ctx: RingContext, v: int, c: int, spec: LeeChannelSpec,
              pop_size: int = 100_000, lmax: int = 200, target: float = 1e-5,
              rng: np.random.Generator | None = None, seed: int = 0):
    """Run BP-DE at one delta; returns (converged, iterations, error trajectory).

    Declares non-convergence early once the running error minimum stops
    improving (under 3% over 60 rounds) while still far above the target.
    """
    if rng is None:
        rng = stream_rng(seed, 0)
    de = _BpDe(ctx, v, c, spec, pop_size, rng)
    errs = []
    best = math.inf
    best_it = 0
    for it in range(1, lmax + 1):
        err = de.iterate()
        errs.append(err)
        if err < best * 0.97:
            best, best_it = err, it
        if err < target:
            return True, it, errs
        if it - best_it >= 60 and best > 2e-3:
            return False, it, errs
    return False, lmax, errs


def bp_de_threshold(ctx: RingContext, v: int, c: int, pop_size: int = 100_000,
                    lmax: int = 200, target: float = 1e-5, seed: int = 0,
                    tol: float = 1e-3) -> float:
    """Bisect delta for the largest converging BP-DE (population dynamics)."""
    lo, hi = 1e-3, delta_q(ctx)
    step = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        rng = stream_rng(seed, 1000 + step)
        ok, _, _ = bp_de_run(ctx, v, c, LeeChannelSpec.from_delta(ctx, mid),
                             pop_size=pop_size, lmax=lmax, target=target, rng=rng)
        if ok:
            lo = mid
        else:
            hi = mid
        step += 1
    return 0.5 * (lo + hi)
