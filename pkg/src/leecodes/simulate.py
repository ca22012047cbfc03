"""Seeded Monte Carlo estimation of block error rate versus delta.

Frames are processed in fixed-size batches; batch k of grid point d draws
all its randomness from the stream (seed, d, k), and the stop rule scans
batch results in index order, so the outcome is bit-identical for any
worker count. The all-zero codeword is transmitted (the channel is
symmetric and the code linear), and a block error is any nonzero final
estimate, converged or not.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
import json
import math

import numpy as np

from .ring import RingContext
from .channels import LeeChannelSpec, SphereCounter
from .codes import ParityCheckCode, peg_construct, sample_regular_ensemble
from .decoders import BpDecoder, SmpDecoder
from .density_evolution import xi_schedule
from .rng import stream_rng

SIM_CSV_COLUMNS = ["q", "n", "dv", "dc", "channel", "decoder", "delta",
                   "frames", "errors", "bler", "ci_lo", "ci_hi", "mean_iters"]


@dataclass
class SimConfig:
    """One BLER-vs-delta sweep.

    code: {"file": path} or {"construction": {"method": "peg"|"ensemble",
    "q", "n", "dv", "dc", "seed"}}. channel: "memoryless" or
    "constant-weight". decoder: "bp" or "smp" (SMP pulls its xi schedule
    from SMP-DE at each grid delta).
    """

    code: dict
    channel: str
    deltas: list
    decoder: str
    seed: int
    lmax: int = 100
    max_frames: int = 1_000_000
    max_errors: int = 200
    batch_frames: int = 256
    workers: int = 1

    def __post_init__(self):
        if self.channel not in ("memoryless", "constant-weight"):
            raise ValueError(f"unknown channel kind: {self.channel}")
        if self.decoder not in ("bp", "smp"):
            raise ValueError(f"unknown decoder kind: {self.decoder}")
        if self.max_errors < 50:
            raise ValueError("max_errors must be >= 50 for reportable points")

    @classmethod
    def from_json(cls, path) -> "SimConfig":
        with open(path) as fh:
            return cls(**json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SimRecord:
    """Per-delta outcome with a 95% Wilson confidence interval."""

    q: int
    n: int
    dv: int
    dc: int
    channel: str
    decoder: str
    delta: float
    frames: int
    errors: int
    bler: float
    ci_lo: float
    ci_hi: float
    mean_iters: float

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(errors: int, frames: int, z: float = 1.96):
    """95% Wilson score interval for a binomial proportion."""
    if frames == 0:
        return 0.0, 1.0
    phat = errors / frames
    denom = 1.0 + z * z / frames
    center = (phat + z * z / (2 * frames)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / frames + z * z / (4 * frames * frames))
    return max(0.0, center - half), min(1.0, center + half)


def build_code(code_ref: dict) -> ParityCheckCode:
    if "file" in code_ref:
        return ParityCheckCode.load(code_ref["file"])
    rec = code_ref["construction"]
    ctx = RingContext(rec["q"])
    rng = stream_rng(rec.get("seed", 0), 0)
    if rec["method"] == "peg":
        return peg_construct(ctx, rec["n"], rec["dv"], rec["dc"], rng)
    if rec["method"] == "ensemble":
        return sample_regular_ensemble(ctx, rec["n"], rec["dv"], rec["dc"], rng)
    raise ValueError(f"unknown construction method: {rec['method']}")


class _PointRunner:
    """Per-process state for one grid point: code, decoder, channel machinery."""

    def __init__(self, config: SimConfig, delta: float):
        self.config = config
        self.delta = delta
        self.code = build_code(config.code)
        ctx = self.code.ctx
        self.spec = LeeChannelSpec.from_delta(ctx, delta)
        if config.channel == "constant-weight":
            self.t = int(round(self.code.n * delta))
            self.counter = SphereCounter(ctx, self.code.n)
        if config.decoder == "bp":
            self.decoder = BpDecoder(self.code)
            self.schedule = None
        else:
            vdeg = self.code.column_degrees()
            cdeg = self.code.row_degrees()
            if len(set(vdeg)) != 1 or len(set(cdeg)) != 1:
                raise ValueError("SMP simulation needs a regular code (xi schedule from DE)")
            self.decoder = SmpDecoder(self.code)
            self.schedule = xi_schedule(ctx, int(vdeg[0]), int(cdeg[0]),
                                        delta, config.lmax)

    def batch_size(self, batch_idx: int) -> int:
        b = self.config.batch_frames
        return max(0, min(b, self.config.max_frames - batch_idx * b))

    def run_batch(self, point_idx: int, batch_idx: int):
        """Decode one batch; returns (frames, block errors, summed iterations)."""
        nb = self.batch_size(batch_idx)
        if nb == 0:
            return 0, 0, 0
        cfg = self.config
        rng = stream_rng(cfg.seed, point_idx, batch_idx)
        n, q = self.code.n, self.code.ctx.q
        if cfg.channel == "memoryless":
            Y = rng.choice(q, size=(nb, n), p=self.spec.error_pmf())
        else:
            Y = np.empty((nb, n), dtype=np.int64)
            for b in range(nb):
                e = self.counter.sample_constant_weight(self.t, rng)
                assert int(np.minimum(e, q - e).sum()) == self.t
                Y[b] = e
        if cfg.decoder == "bp":
            est, conv, iters, failed = self.decoder.decode_batch(Y, self.spec, cfg.lmax, rng)
        else:
            est, conv, iters = self.decoder.decode_batch(Y, self.spec, self.schedule,
                                                         cfg.lmax, rng)
        errors = int((est != 0).any(axis=1).sum())
        return nb, errors, int(iters.sum())


_WORKER_STATE: dict = {}


def _worker_init(config_json: str):
    _WORKER_STATE["config"] = SimConfig(**json.loads(config_json))
    _WORKER_STATE["runners"] = {}


def _worker_batch(args):
    point_idx, delta, batch_idx = args
    runners = _WORKER_STATE["runners"]
    if point_idx not in runners:
        runners[point_idx] = _PointRunner(_WORKER_STATE["config"], delta)
    return batch_idx, runners[point_idx].run_batch(point_idx, batch_idx)


def run_sim(config: SimConfig) -> list:
    """Run the sweep; returns one SimRecord per delta, in grid order."""
    code = build_code(config.code)
    vdeg = code.column_degrees()
    cdeg = code.row_degrees()
    dv = int(np.bincount(vdeg).argmax())
    dc = int(np.bincount(cdeg).argmax())
    for d in config.deltas:
        if not 0 < d < code.ctx.r:
            raise ValueError(f"delta {d} outside (0, {code.ctx.r})")

    records = []
    pool = None
    if config.workers > 1:
        pool = ProcessPoolExecutor(config.workers, initializer=_worker_init,
                                   initargs=(json.dumps(config.to_dict()),))
    try:
        for point_idx, delta in enumerate(config.deltas):
            runner = None if pool else _PointRunner(config, delta)
            nbatches = math.ceil(config.max_frames / config.batch_frames)
            done: dict = {}
            frames = errors = iters_sum = 0
            next_batch = 0
            scanned = 0
            stop = False
            while not stop and scanned < nbatches:
                wave = list(range(next_batch,
                                  min(next_batch + max(1, config.workers), nbatches)))
                next_batch = wave[-1] + 1 if wave else next_batch
                if pool:
                    for bidx, res in pool.map(_worker_batch,
                                              [(point_idx, delta, b) for b in wave]):
                        done[bidx] = res
                else:
                    for b in wave:
                        done[b] = runner.run_batch(point_idx, b)
                # consume completed prefix in batch order
                while scanned in done:
                    f, e, s = done.pop(scanned)
                    frames += f
                    errors += e
                    iters_sum += s
                    scanned += 1
                    if errors >= config.max_errors or frames >= config.max_frames:
                        stop = True
                        break
            bler = errors / frames if frames else 0.0
            lo, hi = wilson_interval(errors, frames)
            records.append(SimRecord(
                q=code.ctx.q, n=code.n, dv=dv, dc=dc, channel=config.channel,
                decoder=config.decoder, delta=delta, frames=frames, errors=errors,
                bler=bler, ci_lo=lo, ci_hi=hi,
                mean_iters=iters_sum / frames if frames else 0.0))
    finally:
        if pool:
            pool.shutdown()
    return records


def compare_to_benchmarks(records: list, bounds_rows: list) -> list:
    """Join SimRecords with bounds CSV rows on (q, n, R, delta).

    bounds_rows are dicts with q, n, R, delta, rcu_cw, rcu_ml, na_bler keys
    (strings as read from CSV are fine). Raises on any unmatched record.
    """
    merged = []
    for rec in records:
        row = rec.to_dict()
        match = None
        for b in bounds_rows:
            if (int(b["q"]) == rec.q and int(b["n"]) == rec.n
                    and abs(float(b["delta"]) - rec.delta) < 1e-9):
                match = b
                break
        if match is None:
            raise ValueError(f"no bounds row for q={rec.q} n={rec.n} delta={rec.delta}")
        row["rate"] = float(match["R"])
        for key in ("rcu_cw", "rcu_ml", "na_bler"):
            row[key] = float(match[key])
        merged.append(row)
    return merged
