"""Command-line interface.

Exit codes: 0 success, 1 verification failure (the two total-tensor routes
disagree), 2 input error (unreadable, malformed, or invalid input).  Reports
go to standard output, diagnostics to standard error, and identical
invocations produce byte-identical output.

Commands::

    tensordag validate FILE [--check-stochastic]
    tensordag order FILE
    tensordag node-tensors FILE [--node ID] [--stages] [--max-cells N]
    tensordag total FILE --method {direct,bmp,verify} [--assign LIST] [--max-cells N]
    tensordag bmp FILE...
    tensordag families [--list]
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import networks, netio
from .scalars import ExprSyntaxError, NegativeExponent, UnboundParameter
from .tensors import OrderMismatch, ShapeMismatch, Tensor, bmp

_INPUT_ERRORS = (
    netio.SchemaError,
    netio.UnknownNodeId,
    netio.DuplicateNodeId,
    netio.EntryCountMismatch,
    netio.TensorSyntaxError,
    netio.AssignmentSyntaxError,
    ExprSyntaxError,
    NegativeExponent,
    UnboundParameter,
    OrderMismatch,
    ShapeMismatch,
    networks.InvalidNetwork,
    networks.CycleDetected,
    networks.CellCapExceeded,
    networks.FamilyArityMismatch,
    OSError,
)

_FAMILY_LINES = [
    "vector                 in-degree 0; 'entries' lists one weight per state",
    "explicit               any in-degree; 'entries' lists all n^(p+1) cells row-major,"
    " own state last",
    "jukes_cantor           in-degree 1; 'alpha' on the diagonal, 'beta' off it",
    "threshold_one          in-degree p, arity 2; output fires iff some parent fired;"
    " obedient cells 'alpha', others 0",
    "quantum_threshold_one  like threshold_one with disobedient cells 'beta' instead of 0",
]


def _read_network(path: str) -> networks.NetworkSpec:
    return netio.parse_network(Path(path).read_text(encoding="utf-8"))


def _read_valid_network(path: str) -> networks.NetworkSpec:
    spec = _read_network(path)
    networks.ensure_valid(spec)
    return spec


def cmd_validate(args: argparse.Namespace) -> int:
    spec = _read_network(args.file)
    violations = networks.validate(spec)
    if violations:
        for violation in violations:
            print(violation)
        return 2
    print("valid")
    if args.check_stochastic:
        for check in networks.stochastic_report(spec):
            if check.stochastic:
                print(f"stochastic {check.node}: yes")
            else:
                inputs = ",".join(str(i + 1) for i in check.failing_input) or "-"
                print(f"stochastic {check.node}: no "
                      f"(inputs {inputs} sum to {check.failing_sum})")
    return 0


def cmd_order(args: argparse.Namespace) -> int:
    spec = _read_network(args.file)
    order = networks.topological_order(spec.node_ids(), spec.edges())
    print(",".join(order))
    return 0


def cmd_node_tensors(args: argparse.Namespace) -> int:
    spec = _read_valid_network(args.file)
    ids = spec.node_ids()
    if args.node is not None:
        if args.node not in ids:
            raise netio.UnknownNodeId(args.node)
        selected = [ids.index(args.node)]
    else:
        selected = list(range(len(ids)))
    blocks: list[str] = []
    for i in selected:
        pipeline = networks.node_pipeline(spec, i, max_cells=args.max_cells)
        if args.stages:
            blocks.append(f"node {ids[i]} stage widened\n" + netio.serialize_tensor(pipeline.widened))
            if pipeline.blown is not None:
                blocks.append(f"node {ids[i]} stage blown\n" + netio.serialize_tensor(pipeline.blown))
            blocks.append(f"node {ids[i]} stage node-tensor\n"
                          + netio.serialize_tensor(pipeline.node_tensor))
        else:
            blocks.append(f"node {ids[i]}\n" + netio.serialize_tensor(pipeline.node_tensor))
    print("\n".join(blocks), end="")
    return 0


def _format_number(value: int | Fraction | float) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _print_evaluated(tensor: Tensor, bindings: dict) -> None:
    print("shape: " + " x ".join(str(dim) for dim in tensor.shape))
    for idx, cell in zip(tensor.indices(), tensor.cells):
        value = cell.evaluate(bindings)
        if value == 0:
            continue
        key = ",".join(str(i + 1) for i in idx)
        print(f"{key} = {_format_number(value)}")


def cmd_total(args: argparse.Namespace) -> int:
    spec = _read_valid_network(args.file)
    if args.method == "verify":
        if args.assign is not None:
            raise netio.AssignmentSyntaxError(
                "verify compares the exact symbolic tensors; --assign is not allowed")
        result = networks.verify_totals(spec, max_cells=args.max_cells)
        if result.equal:
            print(f"EQUAL ({result.cells} cells)")
            return 0
        idx, direct_value, bmp_value = result.first_difference
        key = ",".join(str(i + 1) for i in idx)
        print(f"DIFFER at {key}: direct {direct_value} != bmp {bmp_value}")
        return 1
    compute = networks.total_direct if args.method == "direct" else networks.total_bmp
    tensor = compute(spec, max_cells=args.max_cells)
    if args.assign is not None:
        _print_evaluated(tensor, netio.parse_assignment(args.assign))
    else:
        print(netio.serialize_tensor(tensor), end="")
    return 0


def cmd_bmp(args: argparse.Namespace) -> int:
    factors = [netio.parse_tensor(Path(name).read_text(encoding="utf-8"))
               for name in args.files]
    print(netio.serialize_tensor(bmp(factors)), end="")
    return 0


def cmd_families(args: argparse.Namespace) -> int:
    for line in _FAMILY_LINES:
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensordag",
        description="Exact total tensors of DAG signal networks, computed by the "
                    "direct formula and by the Bhattacharya-Mesner product, with "
                    "symbolic verification that the two agree.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a network document against every invariant")
    p.add_argument("file")
    p.add_argument("--check-stochastic", action="store_true",
                   help="also report whether each activation sums to 1 over its output axis")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("order", help="print a topological order of the network's nodes")
    p.add_argument("file")
    p.set_defaults(run=cmd_order)

    p = sub.add_parser("node-tensors", help="print the order-d node tensors")
    p.add_argument("file")
    p.add_argument("--node", help="only this node id")
    p.add_argument("--stages", action="store_true",
                   help="also print the widened and blown intermediate stages")
    p.add_argument("--max-cells", type=int, default=networks.DEFAULT_CELL_CAP,
                   help="refuse tensors with more cells than this")
    p.set_defaults(run=cmd_node_tensors)

    p = sub.add_parser("total", help="compute the network's total tensor")
    p.add_argument("file")
    p.add_argument("--method", required=True, choices=("direct", "bmp", "verify"))
    p.add_argument("--assign", help="evaluate numerically, e.g. alpha=1,beta=1/2")
    p.add_argument("--max-cells", type=int, default=networks.DEFAULT_CELL_CAP,
                   help="refuse tensors with more cells than this")
    p.set_defaults(run=cmd_total)

    p = sub.add_parser("bmp", help="product of the tensors in the given files, in list order")
    p.add_argument("files", nargs="+")
    p.set_defaults(run=cmd_bmp)

    p = sub.add_parser("families", help="list the built-in activation families")
    p.add_argument("--list", action="store_true", help="list the families (default)")
    p.set_defaults(run=cmd_families)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except _INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
