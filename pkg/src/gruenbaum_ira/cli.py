"""Command-line entry point: ``gruenbaum-ira <command> ...``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analysis, baseline, code as codemod, decoder, graph, interleaver, sim
from .errors import ParameterError


def _read_numbers(path, kind=float):
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return np.array([kind(t) for t in text.split()])


def _write_lines(values, out):
    text = "\n".join(str(v) for v in values) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _profile(text: str) -> codemod.DegreeProfile:
    if text == "reference":
        return codemod.reference_profile()
    terms = []
    for tok in text.split(","):
        d, f = tok.split(":")
        terms.append((int(d), float(f)))
    return codemod.DegreeProfile(tuple(terms))


def cmd_graph_export(args):
    graph.write_edge_list(graph.gruenbaum_graph(), args.out)
    rep = graph.validate_graph(graph.gruenbaum_graph())
    print(f"wrote {rep.edge_count} edges on {rep.vertex_count} vertices "
          f"(degree {rep.regular_degree}, girth {rep.girth}) to {args.out}")


def cmd_interleave_gen(args):
    small = {"ref": interleaver.reference_table, "gr24": interleaver.gr24}[args.small]()
    spec = interleaver.InterleaverSpec(args.n, args.p, args.s, small)
    perm = interleaver.build_gruenbaum_interleaver(spec, args.shift)
    if args.out in (None, "-"):
        _write_lines([perm.n] + [int(v) for v in perm.map], None)
    else:
        interleaver.write_permutation(perm, args.out)


def cmd_code_build(args):
    rate = Fraction(args.rate)
    n = Fraction(args.k) / rate
    if n.denominator != 1:
        raise ParameterError(f"k={args.k} at rate {rate} gives a non-integer length")
    m = int(n) - args.k
    edges = args.edges if args.edges else 7 * args.k
    rep = codemod.realize_degrees(_profile(args.profile), args.k, edges)
    check = codemod.realize_check_degrees(edges, m)
    if args.interleaver == "builtin":
        perm = interleaver.reference_interleaver(args.small, args.shift)
    else:
        perm = interleaver.read_permutation(args.interleaver)
    pins = () if args.no_pins else codemod.REF_PINNED
    code = codemod.build_code(rep, perm, check, pins)
    codemod.write_code(code, args.out)
    print(f"k={code.k} m={code.m} n={code.n} E={code.E} rate={Fraction(code.k, code.n)} "
          f"pinned={len(code.pinned)} -> {args.out}")


def cmd_decode(args):
    code = codemod.read_code(args.code) if args.code != "reference" else codemod.reference_code()
    llrs = _read_numbers(args.inp)
    kw = dict(max_iter=args.iters, early_stop=args.early_stop, minsum=args.minsum)
    if args.scheduling == "turbo":
        res = decoder.decode_turbo(code, llrs, info_update=args.info_update, **kw)
    else:
        res = decoder.decode_flooding(code, llrs, **kw)
    bits = res.hard_bits if args.all_info else res.hard_bits[code.free_positions]
    _write_lines(bits.tolist(), args.out)
    print(f"iterations={res.iterations_used} converged={res.converged}", file=sys.stderr)


def cmd_baseline(args):
    spec = baseline.ConvCodeSpec(baseline.parse_generators(args.gens))
    if args.action == "encode":
        bits = _read_numbers(args.inp, int).astype(np.uint8)
        _write_lines(baseline.conv_encode(spec, bits).tolist(), args.out)
    else:
        llrs = _read_numbers(args.inp)
        _write_lines(baseline.viterbi_decode(spec, llrs).tolist(), args.out)


def cmd_analyze_defects(args):
    code = codemod.read_code(args.code) if args.code != "reference" else codemod.reference_code()
    print(analysis.analyze_defects(code, args.bound).as_text())


def cmd_analyze_search(args):
    p_range = analysis.parse_range(args.p_range) if args.p_range else range(1, args.n)
    s_range = analysis.parse_range(args.s_range) if args.s_range else range(args.n)
    if args.sample:
        cands = analysis.sample_candidates(args.n, args.sample, args.seed, p_range, s_range)
    else:
        n_cands = sum(1 for _ in analysis.coprime_candidates(args.n, p_range, s_range))
        if n_cands > 10_000 and not args.full:
            raise ParameterError(
                f"{n_cands} candidates; pass --sample N or --full to run them all")
        cands = analysis.coprime_candidates(args.n, p_range, s_range)
    setup = analysis.SearchSetup(n=args.n, stopping_bound=args.bound,
                                 small=interleaver.reference_spec(args.small).small)

    def progress(i, total):
        if args.verbose and (i % 50 == 0 or i == total):
            print(f"  {i}/{total}", file=sys.stderr)

    best, results = analysis.search_ps(cands, setup, args.workers, progress)
    print("p,s,cycle4_min_degree,cycle4_total,min_stopping_set_size")
    for c in results:
        r = c.report
        ss = "" if r.min_stopping_set_size is None else r.min_stopping_set_size
        print(f"{c.p},{c.s},{r.cycle4_min_degree},{r.cycle4_total},{ss}")
    print(f"# best p = {best.p}, s = {best.s}")
    print("\n".join("# " + line for line in best.report.as_text().splitlines()))


def cmd_sim_sweep(args):
    settings = sim.parse_config_text(Path(args.config).read_text()) if args.config else {}
    for key in ("system", "scheduling", "iters", "snr_points", "max_frames",
                "target_frame_errors", "seed", "eb_accounting", "workers", "info_update",
                "csv", "svg"):
        val = getattr(args, key)
        if val is not None:
            settings[key] = str(val)
    if "system" in settings:
        settings.pop("systems", None)
    configs, outputs = sim.build_configs(settings)
    csv_path = outputs.get("csv", "sweep.csv")

    def progress(r):
        print(f"{r.system:4s} {r.scheduling:8s} {r.ebno_db:5.2f} dB  frames={r.frames:6d} "
              f"fe={r.frame_errors:4d} fer={r.fer:.3e} ber={r.ber:.3e} "
              f"({r.elapsed_seconds:.1f}s)", file=sys.stderr)

    results = sim.run_comparison(configs, csv_path, outputs.get("svg"), progress)
    for cfg in configs:
        rs = [r for r in results if r.system == cfg.system]
        x = sim.crossing_ebno(rs)
        where = "not bracketed" if x is None else f"{x:.2f} dB"
        print(f"{cfg.system}: FER 1e-2 at {where}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gruenbaum-ira", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="Gruenbaum graph utilities")
    gs = g.add_subparsers(dest="action", required=True)
    ge = gs.add_parser("export", help="write the graph as an edge list")
    ge.add_argument("--out", required=True)
    ge.set_defaults(func=cmd_graph_export)

    il = sub.add_parser("interleave", help="interleaver construction")
    ils = il.add_subparsers(dest="action", required=True)
    gen = ils.add_parser("gen", help="build a permutation file")
    gen.add_argument("--n", type=int, default=interleaver.REF_N)
    gen.add_argument("--p", type=int, default=interleaver.REF_P)
    gen.add_argument("--s", type=int, default=interleaver.REF_S)
    gen.add_argument("--small", choices=["ref", "gr24"], default="ref")
    gen.add_argument("--shift", choices=list(interleaver.SHIFT_MODES), default="skip-first")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_interleave_gen)

    c = sub.add_parser("code", help="IRA code construction")
    cs = c.add_subparsers(dest="action", required=True)
    cb = cs.add_parser("build", help="write a code description file")
    cb.add_argument("--profile", default="reference", help="'reference' or 'd:f,d:f,...'")
    cb.add_argument("--k", type=int, default=codemod.REF_K)
    cb.add_argument("--rate", default="1/4")
    cb.add_argument("--edges", type=int, help="interleaver length (default 7k)")
    cb.add_argument("--interleaver", default="builtin", help="permutation file or 'builtin'")
    cb.add_argument("--small", choices=["ref", "gr24"], default="ref")
    cb.add_argument("--shift", choices=list(interleaver.SHIFT_MODES), default="skip-first")
    cb.add_argument("--no-pins", action="store_true")
    cb.add_argument("--out", required=True)
    cb.set_defaults(func=cmd_code_build)

    d = sub.add_parser("decode", help="decode one frame of channel LLRs")
    d.add_argument("--scheduling", choices=["flooding", "turbo"], default="turbo")
    d.add_argument("--iters", type=int, default=decoder.DEFAULT_ITERS)
    d.add_argument("--in", dest="inp", required=True, help="LLR file, one value per line")
    d.add_argument("--code", default="reference", help="code description file or 'reference'")
    d.add_argument("--early-stop", action="store_true")
    d.add_argument("--minsum", action="store_true")
    d.add_argument("--info-update", choices=list(decoder.INFO_UPDATES), default="edge")
    d.add_argument("--all-info", action="store_true", help="print all k bits, pins included")
    d.add_argument("--out")
    d.set_defaults(func=cmd_decode)

    b = sub.add_parser("baseline", help="K=9 convolutional baseline")
    b.add_argument("action", choices=["encode", "decode"])
    b.add_argument("--gens", default=",".join(f"{g:o}" for g in baseline.DEFAULT_GENERATORS))
    b.add_argument("--in", dest="inp", required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_baseline)

    a = sub.add_parser("analyze", help="Tanner-graph defect analysis")
    as_ = a.add_subparsers(dest="action", required=True)
    ad = as_.add_parser("defects")
    ad.add_argument("--code", default="reference")
    ad.add_argument("--bound", type=int, default=analysis.DEFAULT_STOPPING_SET_BOUND)
    ad.set_defaults(func=cmd_analyze_defects)
    sp = as_.add_parser("search-ps")
    sp.add_argument("--n", type=int, default=interleaver.REF_N)
    sp.add_argument("--p-range")
    sp.add_argument("--s-range")
    sp.add_argument("--sample", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--full", action="store_true", help="allow very large exhaustive runs")
    sp.add_argument("--small", choices=["ref", "gr24"], default="ref")
    sp.add_argument("--bound", type=int, default=analysis.DEFAULT_STOPPING_SET_BOUND)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_analyze_search)

    s = sub.add_parser("sim", help="Monte-Carlo simulation")
    ss = s.add_subparsers(dest="action", required=True)
    sw = ss.add_parser("sweep")
    sw.add_argument("--config")
    sw.add_argument("--system", help="ira, conv or ira,conv")
    sw.add_argument("--scheduling", choices=list(sim.SCHEDULINGS))
    sw.add_argument("--iters", type=int)
    sw.add_argument("--snr-points", dest="snr_points", help="comma-separated Eb/N0 values")
    sw.add_argument("--max-frames", dest="max_frames", type=int)
    sw.add_argument("--target-frame-errors", dest="target_frame_errors", type=int)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--eb-accounting", dest="eb_accounting", choices=list(sim.EB_ACCOUNTING))
    sw.add_argument("--workers", type=int)
    sw.add_argument("--info-update", dest="info_update", choices=list(decoder.INFO_UPDATES))
    sw.add_argument("--csv")
    sw.add_argument("--svg")
    sw.set_defaults(func=cmd_sim_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
