"""Nonbinary BP over Z_q and the low-complexity SMP decoder.

Check nodes compute the distribution (BP) or value (SMP) of
-h_cv^{-1} * sum_{v'} h_cv' X_v', so valid codewords are fixed points of
both decoders. BP exchanges full PMFs (circular convolution at checks,
Hadamard products at variables); SMP exchanges single ring elements and
aggregates them at variables under a q-ary symmetric model of the
extrinsic channel whose error probability comes from density evolution.

Both decoders process a batch of received words at once; converged frames
are compacted out of the batch. All argmax ties are broken uniformly with
the caller's generator.
"""

from dataclasses import dataclass
import math

import numpy as np

from .codes import ParityCheckCode
from .channels import LeeChannelSpec

_CLAMP = 1e-300  # message floor before normalization
_DEAD = 1e-250  # a full message below this has truly underflowed


@dataclass(frozen=True)
class XiSchedule:
    """Per-iteration extrinsic error probabilities for SMP, plus the final-decision value."""

    xis: tuple
    final_xi: float

    def __post_init__(self):
        for x in tuple(self.xis) + (self.final_xi,):
            if not 0.0 < x < 1.0:
                raise ValueError(f"xi must lie in (0, 1), got {x}")

    def at(self, iteration: int) -> float:
        """xi for 1-based iteration; the last entry repeats beyond the schedule."""
        idx = min(iteration, len(self.xis)) - 1
        return self.xis[idx]


@dataclass
class DecodeResult:
    estimate: np.ndarray
    converged: bool  # zero syndrome reached
    iterations: int
    failed: bool = False  # a message fully underflowed (BP only)


def argmax_tiebreak(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Row-wise argmax with ties broken uniformly via rng."""
    mx = values.max(axis=-1, keepdims=True)
    score = (values == mx) * (1.0 + rng.random(values.shape))
    return score.argmax(axis=-1)


class _EdgeLayout:
    """Shared edge indexing: row-major edge arrays plus check-group boundaries."""

    def __init__(self, code: ParityCheckCode):
        edges = code.edges()  # row-major, so reduceat over row starts works
        self.E = len(edges)
        self.e_cn = np.array([e[0] for e in edges])
        self.e_vn = np.array([e[1] for e in edges])
        self.e_h = np.array([e[2] for e in edges], dtype=np.int64)
        self.e_hinv = np.array([code.ctx.inverse(int(h)) for h in self.e_h], dtype=np.int64)
        cdeg = code.row_degrees()
        self.row_starts = np.concatenate(([0], np.cumsum(cdeg)[:-1]))

    def syndromes(self, X: np.ndarray, code: ParityCheckCode) -> np.ndarray:
        """Batch syndromes (B, m) for estimates X (B, n)."""
        contrib = self.e_h[None, :] * X[:, self.e_vn]
        return np.add.reduceat(contrib, self.row_starts, axis=1) % code.ctx.q


class BpDecoder:
    """Belief propagation on one code; holds index structure and scratch layout.

    An instance is not shareable mid-decode; build one per concurrent caller.
    """

    def __init__(self, code: ParityCheckCode):
        self.code = code
        ctx = code.ctx
        q = ctx.q
        lay = _EdgeLayout(code)
        self.lay = lay
        E = lay.E
        self.q = q
        aq = np.arange(q)
        hinv = lay.e_hinv
        # PFWD turns a PMF of X into the PMF of h*X; PBCK reads off -h^{-1}*(sum)
        self.PFWD = (hinv[:, None] * aq[None, :]) % q
        self.PBCK = (-lay.e_h[:, None] * aq[None, :]) % q

        cdeg = code.row_degrees()
        vdeg = code.column_degrees()
        self.cmax = int(cdeg.max())
        self.vmax = int(vdeg.max())
        # edge -> (node, slot) scatter maps, padded to the max degree
        self.cn_idx = (lay.e_cn, _slots(lay.e_cn))
        self.vn_idx = (lay.e_vn, _slots(lay.e_vn))
        self.delta0 = np.zeros(q)
        self.delta0[0] = 1.0
        self.e_range = np.arange(E)

    def _cconv(self, a, b):
        """Circular convolution along the last axis (direct O(q^2), q is tiny)."""
        q = self.q
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for k in range(q):
            for j in range(q):
                out[..., k] += a[..., j] * b[..., (k - j) % q]
        return out

    def decode_batch(self, Y, spec_or_pmfs, lmax: int, rng: np.random.Generator,
                     trace: list | None = None, early_stop: bool = True):
        """Decode B frames at once.

        Returns (estimates (B, n), converged (B,), iterations (B,), failed (B,)).
        With early_stop=False all lmax iterations run (for marginal-exactness
        checks on cycle-free graphs).
        """
        code, q = self.code, self.q
        lay = self.lay
        Y = np.atleast_2d(np.asarray(Y))
        B = Y.shape[0]
        if isinstance(spec_or_pmfs, LeeChannelSpec):
            mch = spec_or_pmfs.likelihood_matrix()[Y]  # (B, n, q)
        else:
            mch = np.broadcast_to(np.asarray(spec_or_pmfs, dtype=float),
                                  (B, code.n, q)).astype(float).copy()
            mch /= mch.sum(axis=2, keepdims=True)

        active = np.arange(B)
        msg_vc = mch[:, lay.e_vn, :].copy()  # (B, E, q): PMFs of X_v
        estimates = np.zeros((B, code.n), dtype=np.int64)
        converged = np.zeros(B, dtype=bool)
        failed = np.zeros(B, dtype=bool)
        iterations = np.full(B, lmax, dtype=int)

        for it in range(1, lmax + 1):
            nb = len(active)
            mch_act = mch[active]
            # --- CN step: convolve incoming PMFs of h*X, excluding each edge ---
            mperm = msg_vc[:, self.e_range[:, None], self.PFWD]
            M = np.zeros((nb, code.m, self.cmax, q))
            M[..., 0] = 1.0  # padding slots hold the convolution identity
            M[:, self.cn_idx[0], self.cn_idx[1], :] = mperm
            pref = np.empty((nb, code.m, self.cmax + 1, q))
            suf = np.empty((nb, code.m, self.cmax + 1, q))
            pref[:, :, 0] = self.delta0
            suf[:, :, self.cmax] = self.delta0
            for s in range(self.cmax):
                pref[:, :, s + 1] = self._cconv(pref[:, :, s], M[:, :, s])
                t = self.cmax - 1 - s
                suf[:, :, t] = self._cconv(suf[:, :, t + 1], M[:, :, t])
            u = self._cconv(pref[:, self.cn_idx[0], self.cn_idx[1]],
                            suf[:, self.cn_idx[0], self.cn_idx[1] + 1])
            msg_cv = u[:, self.e_range[:, None], self.PBCK]
            cdead = msg_cv.max(axis=2) <= _DEAD
            msg_cv = np.maximum(msg_cv, _CLAMP)
            msg_cv /= msg_cv.sum(axis=2, keepdims=True)

            # --- VN step: Hadamard products with the channel PMF, excluding each edge ---
            W = np.ones((nb, code.n, self.vmax, q))
            W[:, self.vn_idx[0], self.vn_idx[1], :] = msg_cv
            ppref = np.empty((nb, code.n, self.vmax + 1, q))
            psuf = np.empty((nb, code.n, self.vmax + 1, q))
            ppref[:, :, 0] = 1.0
            psuf[:, :, self.vmax] = 1.0
            for s in range(self.vmax):
                ppref[:, :, s + 1] = ppref[:, :, s] * W[:, :, s]
                t = self.vmax - 1 - s
                psuf[:, :, t] = psuf[:, :, t + 1] * W[:, :, t]
            mch_edge = mch_act[:, lay.e_vn]
            vout = (mch_edge *
                    ppref[:, self.vn_idx[0], self.vn_idx[1]] *
                    psuf[:, self.vn_idx[0], self.vn_idx[1] + 1])
            vdead = vout.max(axis=2) <= _DEAD
            vout = np.maximum(vout, _CLAMP)
            msg_vc = vout / vout.sum(axis=2, keepdims=True)

            # --- APP decision and early stop on zero syndrome ---
            app = mch_act * ppref[:, :, self.vmax]
            adead = app.max(axis=2) <= _DEAD
            app = np.maximum(app, _CLAMP)
            app /= app.sum(axis=2, keepdims=True)
            est = argmax_tiebreak(app, rng)
            ok = ~lay.syndromes(est, code).any(axis=1)
            if trace is not None:
                trace.append({"iteration": it,
                              "msg_vc_sums": msg_vc.sum(axis=2).copy(),
                              "app": app.copy()})
            frame_failed = cdead.any(axis=1) | vdead.any(axis=1) | adead.any(axis=1)
            estimates[active] = est
            iterations[active] = it
            failed[active] |= frame_failed
            ok &= ~frame_failed
            if it == lmax:
                converged[active[ok]] = True
                break
            drop = (ok & early_stop) | frame_failed
            if drop.any():
                converged[active[ok & early_stop]] = True
                keep = ~drop
                active = active[keep]
                msg_vc = msg_vc[keep]
                if active.size == 0:
                    break
        return estimates, converged, iterations, failed

    def decode(self, y, spec_or_pmfs, lmax: int, rng: np.random.Generator,
               trace: list | None = None, early_stop: bool = True) -> DecodeResult:
        est, conv, its, fail = self.decode_batch(np.asarray(y)[None, :], spec_or_pmfs,
                                                 lmax, rng, trace=trace,
                                                 early_stop=early_stop)
        return DecodeResult(estimate=est[0], converged=bool(conv[0]),
                            iterations=int(its[0]), failed=bool(fail[0]))


class SmpDecoder:
    """Symbol message passing on one code; each message is a single ring element."""

    def __init__(self, code: ParityCheckCode):
        self.code = code
        self.q = code.ctx.q
        self.lay = _EdgeLayout(code)

    def decode_batch(self, Y, spec: LeeChannelSpec, schedule: XiSchedule,
                     lmax: int, rng: np.random.Generator):
        """Decode B frames; returns (estimates, converged, iterations)."""
        code, q, lay = self.code, self.q, self.lay
        Y = np.atleast_2d(np.asarray(Y))
        B, n = Y.shape
        aq = np.arange(q)
        logphi = np.log(spec.error_pmf())
        LCH_all = logphi[(Y[..., None] - aq[None, None, :]) % q]  # (B, n, q)

        active = np.arange(B)
        msg = Y[:, lay.e_vn].astype(np.int64)  # (B, E)
        estimates = np.zeros((B, n), dtype=np.int64)
        converged = np.zeros(B, dtype=bool)
        iterations = np.full(B, lmax, dtype=int)

        for it in range(1, lmax + 1):
            nb = len(active)
            # --- CN step: the unique symbol satisfying the check, given the rest ---
            contrib = lay.e_h[None, :] * msg
            S = np.add.reduceat(contrib, lay.row_starts, axis=1)
            extr = (S[:, lay.e_cn] - contrib) % q
            msg_cv = (-lay.e_hinv[None, :] * extr) % q

            # --- VN step: channel L-vector plus D(xi) extrinsic votes ---
            xi = schedule.at(it)
            d_l = math.log1p(-xi) - math.log(xi / (q - 1))
            F = np.zeros((nb, n, q))
            np.add.at(F, (np.arange(nb)[:, None], lay.e_vn[None, :], msg_cv), 1.0)
            lch = LCH_all[active]
            own = msg_cv[..., None] == aq[None, None, :]
            E_edge = lch[:, lay.e_vn] + d_l * (F[:, lay.e_vn] - own)
            msg = argmax_tiebreak(E_edge, rng)

            # --- decision: all votes plus the channel, final xi on the last round ---
            if it == lmax:
                d_fin = (math.log1p(-schedule.final_xi)
                         - math.log(schedule.final_xi / (q - 1)))
            else:
                d_fin = d_l
            est = argmax_tiebreak(lch + d_fin * F, rng)
            ok = ~lay.syndromes(est, code).any(axis=1)
            estimates[active] = est
            iterations[active] = it
            if ok.any():
                converged[active[ok]] = True
                keep = ~ok
                active = active[keep]
                msg = msg[keep]
                if active.size == 0:
                    break
        return estimates, converged, iterations

    def decode(self, y, spec: LeeChannelSpec, schedule: XiSchedule,
               lmax: int, rng: np.random.Generator) -> DecodeResult:
        est, conv, its = self.decode_batch(np.asarray(y)[None, :], spec, schedule, lmax, rng)
        return DecodeResult(estimate=est[0], converged=bool(conv[0]), iterations=int(its[0]))


def _slots(node_of_edge: np.ndarray) -> np.ndarray:
    """Slot index of each edge within its node (0, 1, ... per node)."""
    slots = np.zeros(len(node_of_edge), dtype=int)
    seen: dict = {}
    for e, v in enumerate(node_of_edge):
        k = int(v)
        slots[e] = seen.get(k, 0)
        seen[k] = slots[e] + 1
    return slots


def bp_decode(code: ParityCheckCode, y, spec_or_pmfs, lmax: int,
              rng: np.random.Generator) -> DecodeResult:
    """One-shot BP decode (builds a fresh decoder; reuse BpDecoder in loops)."""
    return BpDecoder(code).decode(y, spec_or_pmfs, lmax, rng)


def smp_decode(code: ParityCheckCode, y, spec: LeeChannelSpec, schedule: XiSchedule,
               lmax: int, rng: np.random.Generator) -> DecodeResult:
    """One-shot SMP decode (builds a fresh decoder; reuse SmpDecoder in loops)."""
    return SmpDecoder(code).decode(y, spec, schedule, lmax, rng)
