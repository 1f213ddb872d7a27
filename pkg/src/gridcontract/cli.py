"""Command-line front end.

Exit codes: 0 success, 1 a verification or internal invariant failed, 2 bad
input, 3 a search budget was exceeded.

An *instance directory* holds ``base.graph``, ``middle.graph``,
``result.graph``, ``sigma1.wit`` (base <= middle) and ``sigma2.wit``
(result <= middle). ``gen`` and ``extend-witness`` write one; ``transfer``
and ``theorem-check`` read one.
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import dot
from .conquest import transfer
from .contraction import Budget, Kind, UNBOUNDED, bcg, find_contraction, verify_contraction
from .errors import BudgetExceeded, InputError, InvariantError
from .experiment import parse_experiment, run_experiment
from .extension import (ExtensionWitness, build_intersection, build_extension_witness,
                        theorem_bound_check, verify_extension)
from .formats import (format_decomposition, format_graph, format_witness, parse_decomposition,
                      parse_family, parse_graph, parse_witness, read_text, write_text)
from .instances import gen_instance
from .treewidth import exact_treewidth, lift_bound, lift_decomposition

OK, FAILED, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3
LAYOUT = ("base.graph", "middle.graph", "result.graph", "sigma1.wit", "sigma2.wit")


def _graph(path):
    return parse_graph(read_text(path))


def _emit(args, text):
    if getattr(args, "out", None):
        write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _dot(args, text):
    if args.export_dot:
        write_text(args.export_dot, text)


def _kind(args):
    if args.kind == "unbounded":
        return UNBOUNDED
    if args.bound is None:
        raise InputError(f"--kind {args.kind} needs --bound", "bad-kind")
    return Kind(args.kind, args.bound)


def _budget(args):
    return Budget(max_vertices=args.budget)


def _write_instance(directory, base, middle, result, sigma1, sigma2):
    d = Path(directory)
    for name, text in zip(LAYOUT, (format_graph(base), format_graph(middle), format_graph(result),
                                   format_witness(sigma1), format_witness(sigma2))):
        write_text(d / name, text)


def _read_instance(directory):
    d = Path(directory)
    base, middle, result = (_graph(d / n) for n in LAYOUT[:3])
    sigma1 = parse_witness(read_text(d / LAYOUT[3]), middle, base)
    sigma2 = parse_witness(read_text(d / LAYOUT[4]), middle, result)
    return base, middle, result, sigma1, sigma2


# ---- subcommands ---------------------------------------------------------

def cmd_gen(args):
    inst = gen_instance(args.k, args.c, args.inflate, args.seed)
    _write_instance(args.directory, inst.sigma.target, inst.g, inst.h, inst.sigma, inst.phi)
    _dot(args, dot.graph_to_dot(inst.g, "middle"))
    print(f"instance k={args.k} c={args.c} inflate={args.inflate} seed={args.seed}: "
          f"|V(G)|={len(inst.g)} |V(H)|={len(inst.h)}")
    return OK


def cmd_check_contraction(args):
    g, h = _graph(args.source), _graph(args.target)
    w = parse_witness(read_text(args.witness), g, h)
    verdict = verify_contraction(w)
    _dot(args, dot.witness_to_dot(w))
    print("ok" if verdict else f"violation {verdict.code}: {verdict.detail}")
    return OK if verdict else FAILED


def cmd_find_contraction(args):
    g, h = _graph(args.source), _graph(args.target)
    w = find_contraction(g, h, _kind(args), _budget(args))
    if w is None:
        print("absent")
        return OK
    _dot(args, dot.witness_to_dot(w))
    _emit(args, format_witness(w))
    return OK


def cmd_bcg(args):
    print(bcg(_graph(args.graph), _budget(args)))
    return OK


def cmd_treewidth(args):
    g = _graph(args.graph)
    width, d = exact_treewidth(g, args.max_vertices)
    _dot(args, dot.decomposition_to_dot(d))
    if args.out:
        write_text(args.out, format_decomposition(d))
    print(width)
    return OK


def cmd_lift(args):
    g, h = _graph(args.source), _graph(args.target)
    w = parse_witness(read_text(args.witness), g, h)
    d = parse_decomposition(read_text(args.decomposition))
    lifted = lift_decomposition(w, d)
    _dot(args, dot.decomposition_to_dot(lifted))
    if args.out:
        write_text(args.out, format_decomposition(lifted))
    print(f"width {lifted.width} bound {lift_bound(w.kind.bound, d.width)}")
    return OK


def cmd_transfer(args):
    _, g, h, sigma, phi = _read_instance(args.directory)
    trace = Path(args.trace_dot) if args.trace_dot else None

    def snapshot(s, rec):
        write_text(trace / f"step_{rec.index + 1:05d}.dot",
                   dot.configuration_to_dot(s, f"step {rec.index + 1} {rec.action}"))
    res = transfer(g, sigma, phi, on_step=snapshot if trace else None)
    if res.degenerate:
        print(f"degenerate k={res.k} c={res.c} k'={res.k_prime}")
        return OK
    if args.trace_dot:
        write_text(Path(args.trace_dot) / "final.dot", dot.configuration_to_dot(res.configuration))
    verdict = verify_contraction(res.witness)
    _dot(args, dot.witness_to_dot(res.witness))
    if args.out:
        write_text(args.out, format_witness(res.witness))
    print(f"k={res.k} c={res.c} k'={res.k_prime} steps={len(res.log.records)} "
          f"{'verified' if verdict else 'FAILED ' + verdict.detail}")
    return OK if verdict else FAILED


def cmd_build_intersection(args):
    inst = build_intersection(_graph(args.host), parse_family(read_text(args.family)))
    _dot(args, dot.graph_to_dot(inst.result, "intersection"))
    _emit(args, format_graph(inst.result))
    return OK


def cmd_extend_witness(args):
    inst = build_intersection(_graph(args.host), parse_family(read_text(args.family)))
    w = build_extension_witness(inst, args.d)
    _write_instance(args.directory, w.base, w.middle, w.result, w.sigma1, w.sigma2)
    _dot(args, dot.witness_to_dot(w.sigma2, "middle"))
    verdict = verify_extension(w)
    print(f"bounds {w.bounds[0]} {w.bounds[1]}: {'ok' if verdict else verdict.detail}")
    return OK if verdict else FAILED


def cmd_theorem_check(args):
    base, middle, result, sigma1, sigma2 = _read_instance(args.directory)
    if sigma1.kind.name != "size" or sigma2.kind.name != "diameter":
        raise InputError("instance witnesses must be size and diameter bounded", "bad-kind")
    w = ExtensionWitness(base, middle, result, sigma1, sigma2,
                         (sigma1.kind.bound, sigma2.kind.bound))
    rep = theorem_bound_check(w, Fraction(args.lam), Fraction(args.exponent),
                              _budget(args), strict=False)
    for name in ("tw_result", "tw_middle", "tw_base", "bcg_result", "bcg_base"):
        value = getattr(rep, name)
        print(f"{name} {'over_budget' if value is None else value}")
    for name, status in rep.checks.items():
        print(f"{name} {status}")
    return OK if rep.ok else FAILED


def cmd_experiment(args):
    runs = parse_experiment(read_text(args.spec))
    text, passed = run_experiment(runs, jobs=args.jobs, timing=args.timing)
    _emit(args, text)
    return OK if passed else FAILED


def cmd_export_dot(args):
    text = read_text(args.input)
    head = next((ln.split()[0] for ln in text.splitlines() if ln.strip() and
                 not ln.lstrip().startswith("#")), "")
    if head == "graph":
        out = dot.graph_to_dot(parse_graph(text))
    elif head == "td":
        out = dot.decomposition_to_dot(parse_decomposition(text))
    elif head == "witness":
        if not (args.source and args.target):
            raise InputError("a witness needs --source and --target graphs", "missing-graph")
        out = dot.witness_to_dot(parse_witness(text, _graph(args.source), _graph(args.target)))
    else:
        raise InputError(f"unrecognised input header {head!r}", "parse-error")
    _emit(args, out)
    return OK


# ---- parser -------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gridcontract",
        description="Contraction witnesses, triangulated grids and treewidth bounds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=12, metavar="N",
                        help="vertex limit for exhaustive contraction searches (default 12)")
    common.add_argument("--export-dot", metavar="PATH",
                        help="also write a DOT rendering of the main result")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("gen", cmd_gen, "generate an instance directory with by-construction witnesses")
    p.add_argument("k", type=int, help="side of the triangulated grid (3..30)")
    p.add_argument("c", type=int, help="diameter bound of the H contraction")
    p.add_argument("inflate", type=int, help="largest gadget replacing a grid vertex (1..4)")
    p.add_argument("directory", help="output instance directory")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")

    p = add("check-contraction", cmd_check_contraction, "verify a witness file")
    p.add_argument("source", help="graph file of the larger graph G")
    p.add_argument("target", help="graph file of the contraction H")
    p.add_argument("witness", help="witness file mapping V(G) onto V(H)")

    p = add("find-contraction", cmd_find_contraction,
            "exhaustively search for a contraction witness (prints 'absent' if none)")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--kind", choices=("unbounded", "size", "diameter"), default="unbounded")
    p.add_argument("--bound", type=int, help="bound for size/diameter kinds")
    p.add_argument("--out", help="write the witness here instead of stdout")

    p = add("bcg", cmd_bcg, "largest k with the triangulated grid of side k as a contraction")
    p.add_argument("graph")

    p = add("treewidth", cmd_treewidth, "exact treewidth with a certifying decomposition")
    p.add_argument("graph")
    p.add_argument("--max-vertices", type=int, default=20)
    p.add_argument("--out", help="write the decomposition file here")

    p = add("lift", cmd_lift, "lift a decomposition of H through a size-bounded witness")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("witness")
    p.add_argument("decomposition", help="decomposition file of the target")
    p.add_argument("--out", help="write the lifted decomposition here")

    p = add("transfer", cmd_transfer, "carry the grid of an instance directory over to H")
    p.add_argument("directory")
    p.add_argument("--out", help="write the witness (grid <= H) here")
    p.add_argument("--trace-dot", metavar="DIR", help="write one DOT snapshot per conquest step")

    p = add("build-intersection", cmd_build_intersection,
            "intersection multigraph of a family of connected sets")
    p.add_argument("host")
    p.add_argument("family")
    p.add_argument("--out")

    p = add("extend-witness", cmd_extend_witness,
            "build the (d+1, d-1) extension witness of an intersection graph")
    p.add_argument("host")
    p.add_argument("family")
    p.add_argument("directory", help="output instance directory")
    p.add_argument("--d", type=int, required=True, help="edge-degree bound")

    p = add("theorem-check", cmd_theorem_check,
            "measure tw/bcg and test the chained treewidth bounds of an instance directory")
    p.add_argument("directory")
    p.add_argument("--lam", default="1", help="class constant lambda (rational, default 1)")
    p.add_argument("--exponent", default="1", help="class exponent c in [1, 2) (default 1)")

    p = add("experiment", cmd_experiment, "run a batch of generated transfers as CSV")
    p.add_argument("spec", help="lines 'run <k> <c> <inflate> <seeds>', seeds like 1..20")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true",
                   help="append a wall-time column (output then no longer byte-stable)")
    p.add_argument("--out")

    p = add("export-dot", cmd_export_dot, "render a graph, decomposition or witness file as DOT")
    p.add_argument("input")
    p.add_argument("--source", help="source graph (witness input only)")
    p.add_argument("--target", help="target graph (witness input only)")
    p.add_argument("--out")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return BAD_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return OVER_BUDGET
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
