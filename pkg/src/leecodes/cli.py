"""Command-line entry point: marginal, bounds, code, decode, de, simulate.

Flags mirror the conventional symbols (--q, --dv, --dc, --delta, --rate).
Every emitted CSV starts with a comment line recording version and seed.
Errors exit nonzero with a one-line message on stderr.
"""

import argparse
import json
import sys

import numpy as np

from .ring import RingContext
from .channels import LeeChannelSpec
from . import bounds as bnd
from .codes import ParityCheckCode, peg_construct, sample_regular_ensemble
from .decoders import BpDecoder, SmpDecoder
from . import density_evolution as de
from .simulate import SimConfig, run_sim, compare_to_benchmarks, SIM_CSV_COLUMNS
from .csvio import write_csv, read_csv
from .rng import stream_rng


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leecodes",
                                description="Lee-metric coding toolbox")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("marginal", help="entropy-maximizing noise marginal phi*")
    s.add_argument("--q", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", type=float)
    g.add_argument("--beta", type=float)
    s.set_defaults(func=cmd_marginal)

    s = sub.add_parser("bounds", help="RCU bounds, normal approximation, Shannon limit")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--rate", type=float, required=True)
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--deltas", type=str, default=None,
                   help="comma-separated delta grid")
    s.add_argument("--shannon", action="store_true",
                   help="print only the Shannon limit delta*")
    s.add_argument("--out", type=str, default=None, help="CSV output path")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("code", help="build or inspect a parity-check code")
    csub = s.add_subparsers(dest="code_command", required=True)
    b = csub.add_parser("build")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--dv", type=int, required=True)
    b.add_argument("--dc", type=int, required=True)
    b.add_argument("--method", choices=["peg", "ensemble"], default="peg")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", type=str, required=True)
    b.set_defaults(func=cmd_code_build)
    i = csub.add_parser("inspect")
    i.add_argument("path")
    i.set_defaults(func=cmd_code_inspect)

    s = sub.add_parser("decode", help="single-shot decode for debugging")
    s.add_argument("--code", type=str, required=True)
    s.add_argument("--y", type=str, required=True, help="received word, comma-separated")
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--decoder", choices=["bp", "smp"], default="bp")
    s.add_argument("--lmax", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("de", help="density evolution analyses")
    dsub = s.add_subparsers(dest="de_command", required=True)
    t = dsub.add_parser("threshold")
    t.add_argument("--decoder", choices=["bp", "smp"], required=True)
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--dv", type=int, required=True)
    t.add_argument("--dc", type=int, required=True)
    t.add_argument("--pop-size", type=int, default=100_000)
    t.add_argument("--lmax", type=int, default=None)
    t.add_argument("--tol", type=float, default=None)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", type=str, default=None, help="CSV output path")
    t.set_defaults(func=cmd_de_threshold)
    x = dsub.add_parser("xi-schedule")
    x.add_argument("--q", type=int, required=True)
    x.add_argument("--dv", type=int, required=True)
    x.add_argument("--dc", type=int, required=True)
    x.add_argument("--delta", type=float, required=True)
    x.add_argument("--lmax", type=int, default=100)
    x.add_argument("--out", type=str, default=None)
    x.set_defaults(func=cmd_de_xi)
    v = dsub.add_parser("tv-curve")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--dv", type=int, required=True)
    v.add_argument("--dc", type=int, required=True)
    v.add_argument("--delta", type=float, required=True)
    v.add_argument("--lmax", type=int, default=100)
    v.add_argument("--out", type=str, default=None)
    v.set_defaults(func=cmd_de_tv)

    s = sub.add_parser("simulate", help="Monte Carlo BLER sweep from a JSON config")
    s.add_argument("--config", type=str, required=True)
    s.add_argument("--out", type=str, required=True, help="CSV output path")
    s.add_argument("--sidecar", type=str, default=None,
                   help="JSON sidecar path (default: <out>.json)")
    s.add_argument("--benchmarks", type=str, default=None,
                   help="bounds CSV to merge against")
    s.add_argument("--merged", type=str, default=None,
                   help="merged CSV output path (with --benchmarks)")
    s.set_defaults(func=cmd_simulate)
    return p


def cmd_marginal(args) -> int:
    ctx = RingContext(args.q)
    if args.delta is not None:
        spec = LeeChannelSpec.from_delta(ctx, args.delta)
    else:
        spec = LeeChannelSpec.from_beta(ctx, args.beta)
    print(f"q={ctx.q} delta={spec.delta:.6g} beta={spec.beta:.6g} Z={spec.z:.6g}")
    for i, v in enumerate(spec.error_pmf()):
        print(f"phi[{i}] = {v:.6f}")
    return 0


def cmd_bounds(args) -> int:
    ctx = RingContext(args.q)
    limit = bnd.shannon_limit(ctx, args.rate)
    if args.shannon:
        print(f"{limit:.4f}")
        return 0
    if args.deltas:
        deltas = [float(d) for d in args.deltas.split(",")]
    else:
        deltas = [round(limit * k / 8, 6) for k in range(1, 9)]
    rows = []
    for d in deltas:
        spec = LeeChannelSpec.from_delta(ctx, d)
        rows.append({
            "q": ctx.q, "n": args.n, "R": args.rate, "delta": d,
            "rcu_cw": bnd.rcu_constant_weight(ctx, args.n, args.rate, d),
            "rcu_ml": bnd.rcu_memoryless(ctx, args.n, args.rate, d),
            "na_bler": bnd.na_bler(spec, args.n, args.rate),
            "shannon_limit": limit,
        })
    cols = ["q", "n", "R", "delta", "rcu_cw", "rcu_ml", "na_bler", "shannon_limit"]
    if args.out:
        write_csv(args.out, cols, rows)
        print(f"wrote {args.out}")
    else:
        print(",".join(cols))
        for r in rows:
            print(",".join(str(r[c]) for c in cols))
    return 0


def cmd_code_build(args) -> int:
    ctx = RingContext(args.q)
    rng = stream_rng(args.seed, 0)
    if args.method == "peg":
        code = peg_construct(ctx, args.n, args.dv, args.dc, rng)
    else:
        code = sample_regular_ensemble(ctx, args.n, args.dv, args.dc, rng)
    code.save(args.out)
    print(f"wrote {args.out}: q={args.q} m={code.m} n={code.n} "
          f"R0={code.design_rate:.4f} girth={code.girth()}")
    return 0


def cmd_code_inspect(args) -> int:
    code = ParityCheckCode.load(args.path)
    vdeg = code.column_degrees()
    cdeg = code.row_degrees()
    print(f"q={code.ctx.q} m={code.m} n={code.n} R0={code.design_rate:.4f}")
    print(f"vn degrees: min={vdeg.min()} max={vdeg.max()}")
    print(f"cn degrees: min={cdeg.min()} max={cdeg.max()}")
    print(f"girth: {code.girth()}")
    return 0


def cmd_decode(args) -> int:
    code = ParityCheckCode.load(args.code)
    y = np.array([int(t) for t in args.y.split(",")])
    spec = LeeChannelSpec.from_delta(code.ctx, args.delta)
    rng = stream_rng(args.seed, 0)
    if args.decoder == "bp":
        result = BpDecoder(code).decode(y, spec, args.lmax, rng)
    else:
        vdeg = code.column_degrees()
        cdeg = code.row_degrees()
        schedule = de.xi_schedule(code.ctx, int(vdeg[0]), int(cdeg[0]),
                                  args.delta, args.lmax)
        result = SmpDecoder(code).decode(y, spec, schedule, args.lmax, rng)
    print(f"estimate: {','.join(map(str, result.estimate))}")
    print(f"syndrome: {','.join(map(str, code.syndrome(result.estimate)))}")
    print(f"converged: {result.converged} iterations: {result.iterations}")
    return 0


def cmd_de_threshold(args) -> int:
    ctx = RingContext(args.q)
    if args.decoder == "smp":
        lmax = args.lmax or 1000
        tol = args.tol or 5e-4
        threshold, _ = de.smp_threshold(ctx, args.dv, args.dc, lmax=lmax, tol=tol)
    else:
        lmax = args.lmax or 200
        tol = args.tol or 1e-3
        threshold = de.bp_de_threshold(ctx, args.dv, args.dc, pop_size=args.pop_size,
                                       lmax=lmax, seed=args.seed, tol=tol)
    print(f"{threshold:.4f}")
    if args.out:
        write_csv(args.out, ["q", "dv", "dc", "decoder", "threshold"],
                  [{"q": args.q, "dv": args.dv, "dc": args.dc,
                    "decoder": args.decoder, "threshold": threshold}],
                  seed=args.seed)
    return 0


def cmd_de_xi(args) -> int:
    ctx = RingContext(args.q)
    spec = LeeChannelSpec.from_delta(ctx, args.delta)
    report = de.smp_de_run(ctx, args.dv, args.dc, spec, lmax=args.lmax, p0_target=2.0)
    rows = [{"q": args.q, "dv": args.dv, "dc": args.dc, "delta": args.delta,
             "iteration": i + 1, "p0": report.p0[i], "xi": report.xis[i]}
            for i in range(report.iterations)]
    cols = ["q", "dv", "dc", "delta", "iteration", "p0", "xi"]
    if args.out:
        write_csv(args.out, cols, rows)
        print(f"wrote {args.out}")
    else:
        for r in rows:
            print(f"{r['iteration']},{r['p0']:.8f},{r['xi']:.8f}")
    return 0


def cmd_de_tv(args) -> int:
    ctx = RingContext(args.q)
    spec = LeeChannelSpec.from_delta(ctx, args.delta)
    report = de.smp_de_run(ctx, args.dv, args.dc, spec, lmax=args.lmax, p0_target=2.0)
    rows = [{"q": args.q, "dv": args.dv, "dc": args.dc, "delta": args.delta,
             "iteration": i + 1, "p0": report.p0[i], "xi": report.xis[i],
             "tv": report.tvs[i]}
            for i in range(report.iterations)]
    cols = ["q", "dv", "dc", "delta", "iteration", "p0", "xi", "tv"]
    if args.out:
        write_csv(args.out, cols, rows)
        print(f"wrote {args.out}")
    else:
        for r in rows:
            print(f"{r['iteration']},{r['tv']:.8f}")
    return 0


def cmd_simulate(args) -> int:
    config = SimConfig.from_json(args.config)
    records = run_sim(config)
    rows = [r.to_dict() for r in records]
    write_csv(args.out, SIM_CSV_COLUMNS, rows, seed=config.seed)
    sidecar = args.sidecar or args.out + ".json"
    from . import __version__
    with open(sidecar, "w") as fh:
        json.dump({"version": __version__, "config": config.to_dict()}, fh, indent=2)
    print(f"wrote {args.out} and {sidecar}")
    if args.benchmarks:
        _, bounds_rows = read_csv(args.benchmarks)
        merged = compare_to_benchmarks(records, bounds_rows)
        merged_path = args.merged or args.out.replace(".csv", "") + "_merged.csv"
        cols = SIM_CSV_COLUMNS + ["rate", "rcu_cw", "rcu_ml", "na_bler"]
        write_csv(merged_path, cols, merged, seed=config.seed)
        print(f"wrote {merged_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
