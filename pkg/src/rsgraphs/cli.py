"""Unified command-line interface.

Exit codes: 0 success, 1 parameter error, 2 verification failure,
3 resource refusal.  Identical argv and seed produce byte-identical reports
and artifacts; reports carry the toolkit version and the resolved parameters.
"""

import argparse
import json
import math
import random
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import channels, codegraph, codes, geometric, graphs, limits, lintest, vempala
from .errors import (
    InternalCheckError,
    ParameterError,
    ResourceLimitError,
    SearchFailureError,
    VerificationError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse's own failures to exit code 1
        raise ParameterError(message)


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for key in sorted(report):
            lines.append(f"{key} = {json.dumps(_jsonable(report[key]), sort_keys=True)}")
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    path = getattr(args, "report", None)
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _base_report(args, command: str, **params) -> dict:
    resolved = {
        "seed": args.seed,
        "threads": args.threads,
        "format": args.format,
        "max_vertices": args.max_vertices,
    }
    resolved.update(params)
    return {"version": __version__, "command": command, "params": resolved}


def _max_gv_dimension(n: int, d: int) -> int:
    k = 0
    for cand in range(1, n):
        if codes.gv_condition(n, cand, d):
            k = cand
    if k == 0:
        raise ParameterError(f"no dimension satisfies the GV gate for n={n}, d>{d}")
    return k


def _chain_from_args(args, n: int, d: int) -> codes.CodeChain:
    """Code chain for the flip-class cover: from --gen, or GV search at max k."""
    gen = getattr(args, "gen", None)
    if gen:
        root = codes.read_generator(gen)
        if root.n != n:
            raise ParameterError(f"generator length {root.n} does not match n={n}")
        if root.claimed_d < d:
            raise ParameterError(
                f"generator distance {root.claimed_d} is below the required {d}"
            )
    else:
        seed = getattr(args, "gv_seed", None)
        if seed is None:
            seed = args.seed
        k = _max_gv_dimension(n, d - 1)
        root = codes.gv_search(n, k, d - 1, seed)
    return codes.build_chain(root, d)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_construct_geometric(args) -> int:
    p = geometric.GeomParams(args.c, args.n)
    g = geometric.build_geometric_graph(p, max_vertices=args.max_vertices)
    cover = geometric.decompose_geometric(p, g)
    rep = graphs.verify_cover(g, cover)
    if not rep.valid:
        raise InternalCheckError(f"geometric cover failed verification: {rep.violations[:3]}")
    if args.out:
        graphs.write_edge_list(g, args.out)
    if args.cover:
        graphs.write_cover(cover, args.cover)
    report = _base_report(args, "construct geometric", c=args.c, n=args.n)
    report.update(
        N=g.n,
        edges=g.edge_count,
        missing=math.comb(g.n, 2) - g.edge_count,
        hoeffding_bound=geometric.missing_edge_bound(p),
        mu=p.mu,
        n_even=p.n_even,
        t=rep.t,
        r_min=rep.r_min,
        r_max=rep.r_max,
        max_shell_degree=geometric.max_shell_degree(p, g),
        exponents=geometric.exponent_report(p),
    )
    _emit(report, args)
    return 0


def _cmd_construct_code(args) -> int:
    chain = _chain_from_args(args, args.n, args.d)
    p = codegraph.CodeGraphParams(args.c, args.n, args.d, chain)
    g = codegraph.build_code_graph(p, max_vertices=args.max_vertices)
    cover = codegraph.enumerate_cover(p, g)
    rep = graphs.verify_cover(g, cover)
    if not rep.valid:
        raise InternalCheckError(f"flip-class cover failed verification: {rep.violations[:3]}")
    if args.out:
        graphs.write_edge_list(g, args.out)
    if args.cover:
        graphs.write_cover(cover, args.cover)
    bound = codegraph.missing_edge_count_bound(args.c, args.n, args.d)
    e_formula, f_formula = codegraph.cover_exponents(args.c, args.n, args.d)
    report = _base_report(
        args, "construct code", c=args.c, n=args.n, d=args.d,
        gen=getattr(args, "gen", None), gv_seed=getattr(args, "gv_seed", None), k=p.k,
    )
    report.update(
        N=g.n,
        edges=g.edge_count,
        missing=math.comb(g.n, 2) - g.edge_count,
        missing_bound_exact=bound.exact,
        missing_bound_simplified=bound.simplified,
        hypothesis_d_over_n=bound.hypothesis_holds,
        t=rep.t,
        matching_size=rep.r_max,
        r_min=rep.r_min,
        r_max=rep.r_max,
        e_formula=e_formula,
        f_formula=f_formula,
    )
    _emit(report, args)
    return 0


def _cmd_codes_gv(args) -> int:
    code = codes.gv_search(args.n, args.k, args.d, args.seed if args.gv_seed is None else args.gv_seed)
    if args.out:
        codes.write_generator(code, args.out)
    report = _base_report(args, "codes gv", n=args.n, k=args.k, d=args.d, out=args.out)
    report.update(
        n=code.n,
        k=code.k,
        verified_distance=code.claimed_d,
        proper=True,
        gv_rate=codes.gv_rate(args.n, args.d),
    )
    _emit(report, args)
    return 0


def _cmd_codes_verify(args) -> int:
    code = codes.read_generator(args.generator)
    v = codes.verify_code(code)
    report = _base_report(args, "codes verify", generator=args.generator)
    report.update(
        n=code.n,
        k=code.k,
        proper=v.is_proper,
        distance=v.distance,
        rank=v.rank,
        full_rank=v.rank == code.k,
    )
    _emit(report, args)
    if not v.is_proper or v.rank != code.k:
        raise VerificationError("generator is not a proper full-rank code")
    return 0


def _cmd_limits_triangle(args) -> int:
    g = graphs.read_edge_list(args.edges)
    cover = graphs.read_cover(args.cover)
    tg = limits.triangle_graph(g, cover)
    total, per_edge = limits.triangle_census(tg.graph)
    if total != len(tg.triangles) or any(k != 1 for k in per_edge.values()):
        raise InternalCheckError("triangle graph lost the one-triangle-per-edge property")
    if args.out:
        limits.write_triangle_graph(tg, args.out)
    report = _base_report(args, "limits triangle", edges=args.edges, cover=args.cover)
    report.update(
        n_vertices=tg.graph.n,
        n_edges=tg.graph.edge_count,
        triangles=len(tg.triangles),
        crossing_edges=tg.crossing_edges,
        apexes=len(tg.apexes),
        every_edge_in_one_triangle=True,
    )
    _emit(report, args)
    return 0


def _cmd_limits_mindeg(args) -> int:
    g = graphs.read_edge_list(args.edges)
    rep = limits.check_min_degree_bound(g, args.r)
    report = _base_report(args, "limits mindeg", edges=args.edges, r=args.r)
    report.update(
        N=g.n,
        r=args.r,
        min_margin=rep.min_margin,
        num_violations=len(rep.violations),
        violating_vertices=rep.violations,
    )
    _emit(report, args)
    return 0


def _cmd_channel_two(args) -> int:
    chain = _chain_from_args(args, args.n, args.d)
    p = codegraph.CodeGraphParams(args.c, args.n, args.d, chain)
    cp = channels.partition_two(p)
    schedule = channels.build_schedule(cp, policy="sequential")
    if args.out_schedule:
        channels.write_schedule(schedule, args.out_schedule)
    sim = channels.simulate(schedule)
    n = cp.n_stations
    if sim.delivered != n * n or sim.garbled_events:
        raise InternalCheckError("two-channel schedule failed to deliver cleanly")
    report = _base_report(args, "channel two", c=args.c, n=args.n, d=args.d,
                          gen=getattr(args, "gen", None))
    report.update(
        N=n,
        naive_rounds=n * n,
        rounds_sequential=sim.rounds_used,
        rounds_parallel=schedule.parallel_round_count(),
        per_subchannel_rounds=sim.per_subchannel_rounds,
        covered_pairs=cp.subchannels[0][0].edge_count,
        remainder_pairs=cp.subchannels[1][0].edge_count,
        delivered=sim.delivered,
        garbled=len(sim.garbled_events),
    )
    _emit(report, args)
    return 0


def _cmd_channel_shifts(args) -> int:
    p = geometric.GeomParams(args.c, args.n)
    cp = channels.partition_shifts(
        p, args.channels, args.seed, max_attempts=args.attempts
    )
    schedule = channels.build_schedule(cp, policy="sequential")
    if args.out_schedule:
        channels.write_schedule(schedule, args.out_schedule)
    sim = channels.simulate(schedule)
    n = cp.n_stations
    if sim.delivered != n * n or sim.garbled_events:
        raise InternalCheckError("shift schedule failed to deliver cleanly")
    overflow = 0
    if cp.overflow_index is not None:
        overflow = cp.subchannels[cp.overflow_index][0].edge_count
    report = _base_report(args, "channel shifts", c=args.c, n=args.n,
                          channels=args.channels, attempts=args.attempts)
    report.update(
        N=n,
        naive_rounds=n * n,
        rounds_sequential=sim.rounds_used,
        rounds_parallel=schedule.parallel_round_count(),
        per_subchannel_rounds=sim.per_subchannel_rounds,
        attempts_used=cp.attempts_used,
        overflow_pairs=overflow,
        delivered=sim.delivered,
        garbled=len(sim.garbled_events),
        meshulam_bound=channels.meshulam_lower_bound(n, args.channels),
    )
    _emit(report, args)
    return 0


def _cmd_channel_simulate(args) -> int:
    schedule = channels.read_schedule(args.schedule, n_stations=args.stations)
    sim = channels.simulate(schedule)
    report = _base_report(args, "channel simulate", schedule=args.schedule)
    report.update(
        stations=schedule.n_stations,
        delivered=sim.delivered,
        rounds_used=sim.rounds_used,
        per_subchannel_rounds=sim.per_subchannel_rounds,
        garbled=len(sim.garbled_events),
        garbled_events=[list(e) for e in sim.garbled_events[:50]],
        double_deliveries=[list(e) for e in sim.double_deliveries[:50]],
    )
    _emit(report, args)
    return 0


def _make_function(descriptor: str, m: int, seed: int) -> lintest.BooleanFunction:
    if descriptor == "linear":
        return lintest.linear_function(m, random.Random(seed).getrandbits(m))
    if descriptor == "and":
        return lintest.and_function(m)
    if descriptor.startswith("random:"):
        return lintest.random_function(m, int(descriptor.split(":", 1)[1]))
    if descriptor.startswith("table:"):
        return lintest.load_table(descriptor.split(":", 1)[1], m)
    raise ParameterError(f"unknown function descriptor {descriptor!r}")


def _cmd_lintest(args) -> int:
    g = graphs.read_edge_list(args.edges)
    cover = graphs.read_cover(args.cover)
    rep = graphs.verify_cover(g, cover)
    if not rep.valid:
        raise VerificationError(
            f"test-graph cover invalid ({len(rep.violations)} violations)"
        )
    if rep.r_min != rep.r_max:
        raise ParameterError("the soundness bound needs a uniform cover; uniformize first")
    f = _make_function(args.f, args.m, args.seed)
    d_f = lintest.walsh_correlation(f)
    p_hat, stderr = lintest.estimate_soundness(g, f, args.trials, args.seed)
    report = _base_report(args, "lintest", edges=args.edges, cover=args.cover,
                          m=args.m, f=args.f, trials=args.trials)
    report.update(
        N=g.n,
        r=rep.r_max,
        t=rep.t,
        d_f=d_f,
        p_hat=p_hat,
        stderr=stderr,
        hw_bound=lintest.hw_bound(max(rep.r_max, 1), max(rep.t, 1), d_f),
        min_bound=lintest.min_bound(g.n, d_f, max(rep.r_max, 1), max(rep.t, 1)),
    )
    _emit(report, args)
    return 0


def _cmd_vempala(args) -> int:
    chain = _chain_from_args(args, args.n, args.d)
    p = codegraph.CodeGraphParams(args.c, args.n, args.d, chain)
    parts = vempala.counterexample_partition(p)
    idents = vempala.per_part_identity(parts.partition, parts.h)
    matching_ok = all(
        idents[i] == 1 for i in range(parts.matching_parts)
    )
    if not matching_ok:
        raise InternalCheckError("a matching part broke the unit-contribution identity")
    verdict = vempala.conjecture_verdict(parts.partition)
    if args.out_partition:
        vempala.write_partition(parts.partition, args.out_partition)
    e_formula, f_formula = codegraph.cover_exponents(args.c, args.n, args.d)
    report = _base_report(args, "vempala", c=args.c, n=args.n, d=args.d,
                          gen=getattr(args, "gen", None))
    report.update(
        N=parts.partition.left_n,
        k=parts.partition.right_n,
        matching_parts=parts.matching_parts,
        missing_pairs=parts.missing_pairs,
        sum=verdict.total,
        threshold=verdict.threshold,
        refutes_conjectured_bound=verdict.refutes,
        per_part_identity_ok=matching_ok,
        e_formula=e_formula,
        f_formula=f_formula,
    )
    _emit(report, args)
    return 0


# ---------------------------------------------------------------------------
# parser wiring

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--max-vertices", type=int, default=None,
                        help="vertex cap for all-pairs construction work")
    common.add_argument("--threads", type=int, default=1,
                        help="worker cap, recorded in reports; operations are "
                             "vectorized single-thread and stay deterministic")
    common.add_argument("--format", choices=("json", "text"), default="json")

    top = _Parser(prog="rsgraphs", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    construct = sub.add_parser("construct", help="build graphs with their covers")
    csub = construct.add_subparsers(dest="variant", required=True, parser_class=_Parser)

    geo = csub.add_parser("geometric", parents=[common])
    geo.add_argument("--c", type=int, required=True)
    geo.add_argument("--n", type=int, required=True)
    geo.add_argument("--out", help="edge-list output path")
    geo.add_argument("--cover", help="cover output path")
    geo.add_argument("--report", help="report output path")
    geo.set_defaults(func=_cmd_construct_geometric)

    cod = csub.add_parser("code", parents=[common])
    cod.add_argument("--c", type=int, required=True)
    cod.add_argument("--n", type=int, required=True)
    cod.add_argument("--d", type=int, required=True)
    src = cod.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator matrix file for the chain root")
    src.add_argument("--gv-seed", type=int, help="search seed for a GV chain root")
    cod.add_argument("--out", help="edge-list output path")
    cod.add_argument("--cover", help="cover output path")
    cod.add_argument("--report", help="report output path")
    cod.set_defaults(func=_cmd_construct_code)

    codes_p = sub.add_parser("codes", help="linear-code search and verification")
    codes_sub = codes_p.add_subparsers(dest="variant", required=True, parser_class=_Parser)

    gv = codes_sub.add_parser("gv", parents=[common])
    gv.add_argument("--n", type=int, required=True)
    gv.add_argument("--k", type=int, required=True)
    gv.add_argument("--d", type=int, required=True)
    gv.add_argument("--gv-seed", type=int, default=None,
                    help="search seed (defaults to --seed)")
    gv.add_argument("--out", help="generator output path")
    gv.add_argument("--report", help="report output path")
    gv.set_defaults(func=_cmd_codes_gv)

    cv = codes_sub.add_parser("verify", parents=[common])
    cv.add_argument("generator", help="generator matrix file")
    cv.add_argument("--report", help="report output path")
    cv.set_defaults(func=_cmd_codes_verify)

    lim = sub.add_parser("limits", help="structural-limit checks")
    lim_sub = lim.add_subparsers(dest="variant", required=True, parser_class=_Parser)

    tri = lim_sub.add_parser("triangle", parents=[common])
    tri.add_argument("--edges", required=True)
    tri.add_argument("--cover", required=True)
    tri.add_argument("--out", help="triangle-graph output path")
    tri.add_argument("--report", help="report output path")
    tri.set_defaults(func=_cmd_limits_triangle)

    mindeg = lim_sub.add_parser("mindeg", parents=[common])
    mindeg.add_argument("--edges", required=True)
    mindeg.add_argument("--r", type=int, required=True)
    mindeg.add_argument("--report", help="report output path")
    mindeg.set_defaults(func=_cmd_limits_mindeg)

    chan = sub.add_parser("channel", help="shared-channel scheduling")
    chan_sub = chan.add_subparsers(dest="variant", required=True, parser_class=_Parser)

    two = chan_sub.add_parser("two", parents=[common])
    two.add_argument("--c", type=int, required=True)
    two.add_argument("--n", type=int, required=True)
    two.add_argument("--d", type=int, required=True)
    two.add_argument("--gen", help="generator matrix file for the chain root")
    two.add_argument("--out-schedule", help="schedule output path")
    two.add_argument("--report", help="report output path")
    two.set_defaults(func=_cmd_channel_two)

    shifts = chan_sub.add_parser("shifts", parents=[common])
    shifts.add_argument("--c", type=int, required=True)
    shifts.add_argument("--n", type=int, required=True)
    shifts.add_argument("--channels", type=int, required=True)
    shifts.add_argument("--attempts", type=int, default=1)
    shifts.add_argument("--out-schedule", help="schedule output path")
    shifts.add_argument("--report", help="report output path")
    shifts.set_defaults(func=_cmd_channel_shifts)

    simu = chan_sub.add_parser("simulate", parents=[common])
    simu.add_argument("--schedule", required=True)
    simu.add_argument("--stations", type=int, default=None,
                      help="station count (default: inferred from the schedule)")
    simu.add_argument("--report", help="report output path")
    simu.set_defaults(func=_cmd_channel_simulate)

    lt = sub.add_parser("lintest", parents=[common],
                        help="graph-based linearity testing")
    lt.add_argument("--edges", required=True)
    lt.add_argument("--cover", required=True)
    lt.add_argument("--m", type=int, required=True)
    lt.add_argument("--f", required=True,
                    help="linear | and | random:SEED | table:FILE")
    lt.add_argument("--trials", type=int, required=True)
    lt.add_argument("--report", help="report output path")
    lt.set_defaults(func=_cmd_lintest)

    vem = sub.add_parser("vempala", parents=[common],
                         help="local-density sum for the duplication partition")
    vem.add_argument("--c", type=int, required=True)
    vem.add_argument("--n", type=int, required=True)
    vem.add_argument("--d", type=int, required=True)
    vem.add_argument("--gen", help="generator matrix file for the chain root")
    vem.add_argument("--out-partition", help="partition output path")
    vem.add_argument("--report", help="report output path")
    vem.set_defaults(func=_cmd_vempala)

    return top


def run(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 1
    except (VerificationError, InternalCheckError, SearchFailureError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
