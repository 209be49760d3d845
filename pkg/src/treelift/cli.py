"""Command-line front end.

Exit codes: 0 when every identity holds, 1 on an identity violation, 2 on
bad input or usage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import identities as ident
from .arborescence import enumerate_forests, enumerate_trees
from .digraph import GraphFormatError, format_graph, is_strongly_connected, parse_graph, strongly_connected_subsets
from .lift import DEFAULT_LIFT_CAP, LiftTooLarge, build_lift, format_sidecar, lift_file_check, load_lift
from .poly import MultiPoly, format_weight
from .samples import DEFAULT_SEED
from .series import DEFAULT_ORDER
from .verify import (
    CHECK_NAMES,
    DEFAULT_EVAL_POINTS,
    DEFAULT_SYMBOLIC_CAP,
    Config,
    format_structured,
    format_text,
    run_checks,
)


class InputError(Exception):
    pass


def _read(path):
    try:
        data = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_graph(data), data
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _strong(g, path):
    if not is_strongly_connected(g):
        raise InputError(f"{path}: graph is not strongly connected")


def _lift(g, cap):
    try:
        return build_lift(g, cap)
    except LiftTooLarge as exc:
        raise InputError(f"{exc}; raise --lift-cap to proceed") from None


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _check_list(text):
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [n for n in names if n not in CHECK_NAMES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECK_NAMES)}")
    return tuple(names)


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# commands ---------------------------------------------------------------------


def cmd_verify(args):
    g, data = _read(args.graph)
    _strong(g, args.graph)
    config = Config(
        checks=args.checks,
        seed=args.seed,
        series_order=args.series_order,
        symbolic_cap=args.symbolic_cap,
        eval_points=args.eval_points,
        lift_cap=args.lift_cap,
        walk_length=args.walk_length,
        orderings=args.orderings,
    )
    try:
        rep = run_checks(g, config, source=args.graph, data=data)
    except LiftTooLarge as exc:
        raise InputError(f"{exc}; raise --lift-cap to proceed") from None
    fmt = format_structured if args.format == "structured" else format_text
    _emit(fmt(rep, timings=args.timings), args.output)
    return 0 if rep.ok else 1


def cmd_enumerate(args):
    g, _ = _read(args.graph)
    lines = []
    if args.kind == "trees":
        roots = [args.root] if args.root is not None else range(g.n)
        for r in roots:
            if not 0 <= r < g.n:
                raise InputError(f"root {r} out of range")
            for t in enumerate_trees(g, r):
                lines.append(f"tree\troot={r}\t{t.encode()}\tweight={format_weight(t.weight(g))}")
    elif args.kind == "forests":
        if not args.roots:
            raise InputError("forests need --roots")
        if not all(0 <= r < g.n for r in args.roots):
            raise InputError("root out of range")
        for f in enumerate_forests(g, args.roots):
            roots = ",".join(map(str, sorted(f.roots)))
            lines.append(f"forest\troots={roots}\t{f.encode()}\tweight={format_weight(f.weight(g))}")
    else:
        mt = ident.m_prime(g) if is_strongly_connected(g) else None
        ks = ident.k_table(g)
        for W in strongly_connected_subsets(g):
            line = f"subset\t{','.join(map(str, sorted(W)))}\tk={ks[W]}"
            if mt is not None:
                line += f"\tm={mt[W]}"
            lines.append(line)
    sys.stdout.write("".join(line + "\n" for line in lines))
    return 0


def cmd_lift(args):
    g, _ = _read(args.graph)
    _strong(g, args.graph)
    lift = _lift(g, args.lift_cap)
    text = format_graph(lift.graph)
    side = format_sidecar(lift)
    if args.out:
        Path(args.out + ".graph").write_text(text, encoding="utf-8")
        Path(args.out + ".labels").write_text(side, encoding="utf-8")
        print(f"wrote {args.out}.graph and {args.out}.labels ({lift.graph.n} vertices, {len(lift.graph.edges)} edges)")
    else:
        sys.stdout.write(text)
        if args.labels:
            Path(args.labels).write_text(side, encoding="utf-8")
    return 0


def cmd_check_lift(args):
    g, _ = _read(args.graph)
    _strong(g, args.graph)
    try:
        lift = load_lift(g, Path(args.lift).read_text(encoding="utf-8"), Path(args.labels).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load lift: {exc}") from None
    res = lift_file_check(g, lift)
    print(f"check\tlift-file\t{'PASS' if res.passed else 'FAIL'}\tvertices={lift.graph.n}\tedges={len(lift.graph.edges)}")
    for p in res.witness.get("problems", []):
        print(f"witness\tlift-file\t{p}")
    return 0 if res.passed else 1


def _symbolic_gate(g, lift, cap):
    if g.is_symbolic() and lift.graph.n > cap:
        raise InputError(
            f"lift has {lift.graph.n} vertices, above the symbolic cap {cap}; "
            "raise --symbolic-cap or use numeric weights"
        )


def cmd_phi(args):
    g, _ = _read(args.graph)
    _strong(g, args.graph)
    lift = _lift(g, args.lift_cap)
    _symbolic_gate(g, lift, args.symbolic_cap)
    rep = ident.phi_report(g, lift)
    out = [
        f"tau\t{format_weight(rep.tau)}",
        f"tau_lift\t{format_weight(rep.tau_lift)}",
        f"phi_lift\t{format_weight(rep.phi_lift)}",
        f"phi_product\t{format_weight(rep.phi_product)}",
    ]
    for k, p in enumerate(rep.phi_minor):
        out.append(f"phi_minor\t{lift.graph.labels[k]}\t{format_weight(p)}")
    out.append(f"agree\t{'yes' if rep.agree else 'no'}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0 if rep.agree else 1


def cmd_zeta(args):
    g, _ = _read(args.graph)
    if args.order < 0:
        raise InputError("order must be nonnegative")
    try:
        lhs = ident.zeta_series(g, args.order) if args.order else None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rhs = ident.inverse_det_series(g.weight_matrix(), args.order)
    out = [f"order\t{args.order}"]
    for k in range(args.order + 1):
        out.append(f"coeff\t{k}\t{format_weight(rhs[k])}")
    ok = lhs is None or lhs.mismatch(rhs) is None
    out.append(f"match\t{'yes' if ok else 'no'}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0 if ok else 1


def cmd_schrodinger(args):
    g, _ = _read(args.graph)
    _strong(g, args.graph)
    if g.vweights is None:
        g = g.replace(vweights=tuple(MultiPoly.var(f"y_{v}") for v in range(g.n)))
    lift = _lift(g, args.lift_cap)
    _symbolic_gate(g, lift, args.symbolic_cap)
    res = ident.schrodinger_identity_check(g, lift)
    mt = ident.m_prime(g)
    out = [
        f"check\tschrodinger\t{'PASS' if res.passed else 'FAIL'}",
        f"det_H\t{format_weight(res.values['det_H'])}",
        f"det_H_hat\t{format_weight(res.values['det_H_hat'])}",
    ]
    for W, e in mt.items():
        if e:
            out.append(f"factor\t{','.join(map(str, sorted(W)))}\tm={e}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0 if res.passed else 1


# parser -----------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="treelift", description="Spanning tree graphs and their identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def caps(sp):
        sp.add_argument("--lift-cap", type=int, default=DEFAULT_LIFT_CAP, help="maximum lift vertices")
        sp.add_argument("--symbolic-cap", type=int, default=DEFAULT_SYMBOLIC_CAP,
                        help="largest matrix dimension handled symbolically")

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("graph")
    v.add_argument("--checks", type=_check_list, default=None, help="comma-separated subset of checks")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--series-order", type=int, default=DEFAULT_ORDER)
    v.add_argument("--eval-points", type=int, default=DEFAULT_EVAL_POINTS)
    v.add_argument("--walk-length", type=int, default=6)
    v.add_argument("--orderings", type=int, default=5, help="edge orderings for the exploration check")
    v.add_argument("--format", choices=("text", "structured"), default="text")
    v.add_argument("--output", "-o")
    v.add_argument("--timings", action="store_true", help="include wall times (output no longer reproducible)")
    caps(v)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="list trees, forests or strongly connected subsets")
    e.add_argument("graph")
    e.add_argument("kind", choices=("trees", "forests", "subsets"))
    e.add_argument("--root", type=int)
    e.add_argument("--roots", type=_int_list)
    e.set_defaults(func=cmd_enumerate)

    lf = sub.add_parser("lift", help="write the spanning tree graph")
    lf.add_argument("graph")
    lf.add_argument("--out", help="write OUT.graph and OUT.labels")
    lf.add_argument("--labels", help="with stdout output, write the label sidecar here")
    lf.add_argument("--lift-cap", type=int, default=DEFAULT_LIFT_CAP)
    lf.set_defaults(func=cmd_lift)

    cl = sub.add_parser("check-lift", help="validate a lift graph file and label sidecar")
    cl.add_argument("graph")
    cl.add_argument("lift")
    cl.add_argument("labels")
    cl.set_defaults(func=cmd_check_lift)

    ph = sub.add_parser("phi", help="tree-graph ratio by three routes")
    ph.add_argument("graph")
    caps(ph)
    ph.set_defaults(func=cmd_phi)

    z = sub.add_parser("zeta", help="series of 1/det(I - sM) checked against closed walks")
    z.add_argument("graph")
    z.add_argument("--order", "-N", type=int, default=DEFAULT_ORDER)
    z.set_defaults(func=cmd_zeta)

    sc = sub.add_parser("schrodinger", help="determinant of the lifted Schroedinger matrix")
    sc.add_argument("graph")
    caps(sc)
    sc.set_defaults(func=cmd_schrodinger)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
