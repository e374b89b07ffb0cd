"""Command-line front end: ``tropbun <group> <command> [flags]``.

Every command prints one JSON document on standard output, errors
included.  Exit codes: 0 success, 2 invalid input, 3 size limit exceeded,
4 two independent computations disagreed.  ``suite run`` exits 1 when some criterion fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import io
from .bundles import (
    Multidivisor,
    bn_rank_bundle,
    bundle_degree,
    bundle_from_local_system,
    bundle_from_multidivisor,
    bundle_iso,
    determinant,
    direct_sum,
    dual,
    is_semistable,
    is_stable,
    local_system_from_bundle,
    multidivisor_from_cocycle,
    slope,
    tensor,
    tensor_degree,
    wrr_check,
)
from .covers import FreeCover, components_and_genus, deck_group, enumerate_covers, fibered_product
from .divisor import Divisor
from .divisor_theory import linequiv, rank, reduce, rr_check
from .elliptic import (
    brill_noether_member,
    classify_semistable,
    e_trop,
    psi,
    theta_member,
    theta_member_by_rank,
)
from .errors import InvalidInput, InvariantViolation, TropbunError
from .jacobian import abel_jacobi, jac_equiv, jacobian
from .metric_graph import GraphPoint, MetricGraph, euler_and_genus, simple_model
from .rational import format_rational, parse_rational
from .root_datum import gl_datum, sl_datum, validate, weyl_group
from .suite import DEFAULT_BN_GRID, run_suite


# input helpers


def _need(value, flag: str):
    if value is None or value == []:
        raise InvalidInput(f"missing {flag}")
    return value


def _exactly(values: list | None, count: int, flag: str) -> list:
    values = values or []
    if len(values) != count:
        raise InvalidInput(f"expected {count} x {flag}, got {len(values)}")
    return values


def _graph(args) -> MetricGraph:
    return io.graph_from_json(io.load_json(_need(args.graph, "--graph")))


def _optional_graph(args) -> MetricGraph | None:
    return _graph(args) if args.graph else None


def _divisors(args, g: MetricGraph, count: int) -> list[Divisor]:
    return [io.divisor_from_json(io.load_json(p), g) for p in _exactly(args.divisor, count, "--divisor")]


def _inline_or_file(text: str) -> Any:
    stripped = text.strip()
    if stripped.startswith(("{", "[")):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed inline JSON: {exc.msg}") from None
    if Path(text).is_file():
        return io.load_json(text)
    return None


def _base_point(args, g: MetricGraph) -> GraphPoint:
    raw = _need(args.base, "--base")
    data = _inline_or_file(raw)
    if data is None:
        data = {"vertex": raw}
    return io.point_from_json(data, g)


def _bundles(args, count: int) -> list[Multidivisor]:
    g = _optional_graph(args)
    return [io.multidivisor_from_json(io.load_json(p), g) for p in _exactly(args.bundle, count, "--bundle")]


def _covers(args, count: int) -> list[FreeCover]:
    model = simple_model(_graph(args))
    return [io.cover_from_json(io.load_json(p), model)[0] for p in _exactly(args.cover, count, "--cover")]


def _length(args) -> Fraction:
    length = parse_rational(args.length) if args.length is not None else Fraction(1)
    if length <= 0:
        raise InvalidInput("--length must be positive")
    return length


def _int_flag(value, flag: str) -> int:
    return int(_need(value, flag))


# graph


def cmd_graph_info(args) -> dict:
    g = _graph(args)
    chi, genus = euler_and_genus(g)
    return {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "components": len(g.components),
        "euler_characteristic": chi,
        "genus": genus,
        "total_length": format_rational(g.total_length),
        "simple": g.is_simple,
    }


# divisors


def cmd_divisor_degree(args) -> dict:
    (d,) = _divisors(args, _graph(args), 1)
    return {"degree": d.degree}


def cmd_divisor_reduce(args) -> dict:
    g = _graph(args)
    (d,) = _divisors(args, g, 1)
    base = _base_point(args, g)
    return {"base": io.point_to_json(base), "reduced": io.divisor_to_json(reduce(d, base))}


def cmd_divisor_rank(args) -> dict:
    (d,) = _divisors(args, _graph(args), 1)
    return {"rank": rank(d)}


def cmd_divisor_equiv(args) -> dict:
    d1, d2 = _divisors(args, _graph(args), 2)
    by_reduction = linequiv(d1, d2)
    by_jacobian = jac_equiv(d1, d2)
    if by_reduction != by_jacobian:
        raise InvariantViolation(f"reduced divisors say {by_reduction}, Abel-Jacobi says {by_jacobian}")
    return {"equivalent": by_reduction}


def cmd_divisor_jacobian(args) -> dict:
    g = _graph(args)
    (d,) = _divisors(args, g, 1)
    if args.base is not None:
        if not g.is_connected:
            raise InvalidInput("--base shifting needs a connected graph")
        d = d - Divisor(g, [(_base_point(args, g), d.degree)])
    jac = jacobian(g)
    c = abel_jacobi(d, jac=jac)
    return {
        "genus": jac.genus,
        "cycle_edges": list(jac.cycle_edges),
        "coords": [format_rational(x) for x in c.canonical],
        "zero": c.is_zero(),
    }


def cmd_divisor_rr_check(args) -> dict:
    (d,) = _divisors(args, _graph(args), 1)
    return rr_check(d).to_json()


# covers


def _components_json(c: FreeCover) -> list[dict]:
    return [{"sheets": [k + 1 for k in sheets], "genus": genus} for sheets, genus in components_and_genus(c)]


def cmd_cover_build(args) -> dict:
    (c,) = _covers(args, 1)
    return {"cover": io.cover_to_json(c), "connected": c.is_connected, "components": _components_json(c)}


def cmd_cover_enumerate(args) -> dict:
    model = simple_model(_graph(args))
    n = _int_flag(args.degree, "--degree")
    covers = enumerate_covers(model, n)
    return {"degree": n, "count": len(covers), "covers": [io.cover_to_json(c) for c in covers]}


def cmd_cover_components(args) -> dict:
    (c,) = _covers(args, 1)
    return {"components": _components_json(c)}


def cmd_cover_deck(args) -> dict:
    (c,) = _covers(args, 1)
    group = deck_group(c)
    return {"order": len(group), "elements": [[io.perm_to_json(t) for t in smap] for smap in group]}


def cmd_cover_product(args) -> dict:
    c1, c2 = _covers(args, 2)
    c = fibered_product(c1, c2)
    return {"cover": io.cover_to_json(c), "components": _components_json(c)}


# bundles


def cmd_bundle_convert(args) -> dict:
    (path,) = _exactly(args.bundle, 1, "--bundle")
    data = io.load_json(path)
    g = _optional_graph(args)
    if isinstance(data, dict) and "transitions" in data:
        return io.multidivisor_to_json(multidivisor_from_cocycle(io.cocycle_from_json(data, g)))
    return io.cocycle_to_json(bundle_from_multidivisor(io.multidivisor_from_json(data, g)))


def cmd_bundle_sum(args) -> dict:
    E, F = _bundles(args, 2)
    return io.multidivisor_to_json(direct_sum(E, F))


def cmd_bundle_tensor(args) -> dict:
    E, F = _bundles(args, 2)
    tensor_degree(E, F)
    return io.multidivisor_to_json(tensor(E, F))


def cmd_bundle_dual(args) -> dict:
    (E,) = _bundles(args, 1)
    return io.multidivisor_to_json(dual(E))


def cmd_bundle_det(args) -> dict:
    (E,) = _bundles(args, 1)
    return io.multidivisor_to_json(determinant(E))


def cmd_bundle_degree(args) -> dict:
    (E,) = _bundles(args, 1)
    return {"degree": bundle_degree(E), "rank": E.rank}


def cmd_bundle_rank(args) -> dict:
    (E,) = _bundles(args, 1)
    return {"rank": bn_rank_bundle(E)}


def cmd_bundle_iso(args) -> dict:
    E, F = _bundles(args, 2)
    return {"isomorphic": bundle_iso(E, F)}


def cmd_bundle_stability(args) -> dict:
    (E,) = _bundles(args, 1)
    return {"slope": format_rational(slope(E)), "semistable": is_semistable(E), "stable": is_stable(E)}


def cmd_bundle_wrr_check(args) -> dict:
    (E,) = _bundles(args, 1)
    return wrr_check(E).to_json()


def cmd_bundle_from_localsys(args) -> dict:
    (path,) = _exactly(args.bundle, 1, "--bundle")
    lam = io.local_system_from_json(io.load_json(path), _optional_graph(args))
    return io.multidivisor_to_json(bundle_from_local_system(lam))


def cmd_bundle_to_localsys(args) -> dict:
    (E,) = _bundles(args, 1)
    return io.local_system_to_json(local_system_from_bundle(E))


# elliptic


def cmd_elliptic_etrop(args) -> dict:
    return io.multidivisor_to_json(e_trop(_int_flag(args.rank, "--rank"), _int_flag(args.degree, "--degree"), _length(args)))


def cmd_elliptic_psi(args) -> dict:
    x = parse_rational(_need(args.point, "--point"))
    n, d = _int_flag(args.rank, "--rank"), _int_flag(args.degree, "--degree")
    return io.multidivisor_to_json(psi(x, n, d, _length(args)))


def cmd_elliptic_classify(args) -> dict:
    (E,) = _bundles(args, 1)
    return io.canonical_form_to_json(classify_semistable(E))


def cmd_elliptic_bn_member(args) -> dict:
    (E,) = _bundles(args, 1)
    r = _int_flag(args.rank, "--rank")
    return {"member": brill_noether_member(E, r), "bn_rank": bn_rank_bundle(E)}


def cmd_elliptic_theta_member(args) -> dict:
    E, F = _bundles(args, 2)
    by_summand = theta_member(E, F)
    by_rank = theta_member_by_rank(E, F)
    if by_summand != by_rank:
        raise InvariantViolation(f"summand test says {by_summand}, tensor rank says {by_rank}")
    return {"member": by_summand}


# root data


def cmd_rootdatum_validate(args) -> dict:
    return validate(_datum(args)).to_json()


def cmd_rootdatum_weyl(args) -> dict:
    group = weyl_group(_datum(args))
    return {"order": len(group), "elements": [[list(row) for row in w] for w in group]}


def _datum(args):
    chosen = [x for x in (args.datum, args.gl, args.sl) if x is not None]
    if len(chosen) != 1:
        raise InvalidInput("give exactly one of --datum, --gl, --sl")
    if args.gl is not None:
        return gl_datum(args.gl)
    if args.sl is not None:
        return sl_datum(args.sl)
    return io.root_datum_from_json(io.load_json(args.datum))


# suite


def cmd_suite_run(args) -> tuple[dict, int]:
    grid = args.grid if args.grid is not None else DEFAULT_BN_GRID
    if grid < 1:
        raise InvalidInput("--grid must be positive")
    results = run_suite(bn_grid=grid, echo=lambda line: print(line, file=sys.stderr, flush=True))
    passed = all(r.passed for r in results)
    return {"passed": passed, "criteria": [r.to_json() for r in results]}, 0 if passed else 1


COMMANDS: dict[str, dict[str, Callable]] = {
    "graph": {"info": cmd_graph_info},
    "divisor": {
        "degree": cmd_divisor_degree,
        "reduce": cmd_divisor_reduce,
        "rank": cmd_divisor_rank,
        "equiv": cmd_divisor_equiv,
        "jacobian": cmd_divisor_jacobian,
        "rr-check": cmd_divisor_rr_check,
    },
    "cover": {
        "build": cmd_cover_build,
        "enumerate": cmd_cover_enumerate,
        "components": cmd_cover_components,
        "deck": cmd_cover_deck,
        "product": cmd_cover_product,
    },
    "bundle": {
        "convert": cmd_bundle_convert,
        "sum": cmd_bundle_sum,
        "tensor": cmd_bundle_tensor,
        "dual": cmd_bundle_dual,
        "det": cmd_bundle_det,
        "degree": cmd_bundle_degree,
        "rank": cmd_bundle_rank,
        "iso": cmd_bundle_iso,
        "stability": cmd_bundle_stability,
        "wrr-check": cmd_bundle_wrr_check,
        "from-localsys": cmd_bundle_from_localsys,
        "to-localsys": cmd_bundle_to_localsys,
    },
    "elliptic": {
        "etrop": cmd_elliptic_etrop,
        "psi": cmd_elliptic_psi,
        "classify": cmd_elliptic_classify,
        "bn-member": cmd_elliptic_bn_member,
        "theta-member": cmd_elliptic_theta_member,
    },
    "rootdatum": {"validate": cmd_rootdatum_validate, "weyl": cmd_rootdatum_weyl},
    "suite": {"run": cmd_suite_run},
}


def _add_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--divisor", action="append", help="divisor JSON file (repeatable)")
    p.add_argument("--cover", action="append", help="cover JSON file (repeatable)")
    p.add_argument("--bundle", action="append", help="bundle, cocycle or local system JSON file (repeatable)")
    p.add_argument("--base", help="base point: inline JSON, a JSON file or a vertex id")
    p.add_argument("--degree", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--point", help="circle coordinate, as p/q")
    p.add_argument("--length", help="circle circumference, as p/q (default 1)")
    p.add_argument("--datum", help="root datum JSON file")
    p.add_argument("--gl", type=int, help="use the GL_n root datum")
    p.add_argument("--sl", type=int, help="use the SL_n root datum")
    p.add_argument("--limit", type=int, help="unit subdivision vertex budget")
    p.add_argument("--grid", type=int, help="grid denominator for the Brill-Noether criterion")
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropbun", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, commands in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True, parser_class=_Parser)
        for name in commands:
            _add_flags(sub.add_parser(name))
    return parser


def run(argv: Sequence[str]) -> tuple[int, Any]:
    """Execute one request; returns the exit code and the output document."""
    saved = os.environ.get("TROPBUN_LIMIT")
    try:
        args = build_parser().parse_args(list(argv))
        if args.limit is not None:
            if args.limit < 1:
                raise InvalidInput("--limit must be positive")
            os.environ["TROPBUN_LIMIT"] = str(args.limit)
        out = COMMANDS[args.group][args.command](args)
        code = 0
        if isinstance(out, tuple):
            out, code = out
        return code, out
    except TropbunError as exc:
        return exc.exit_code, {"error": type(exc).__name__, "message": str(exc)}
    finally:
        # the limit applies to this request only
        if saved is None:
            os.environ.pop("TROPBUN_LIMIT", None)
        else:
            os.environ["TROPBUN_LIMIT"] = saved


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, doc = run(argv)
    pretty = "--pretty" in argv
    print(io.dump_json(doc, pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
