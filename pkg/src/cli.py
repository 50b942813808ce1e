"""
Command-line front end: one subcommand per pipeline, JSON on standard output.

Exit codes: 0 success, 2 parse or schema error, 3 violated precondition,
4 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import classify
import config
import polytope
import scomplex
import wallcross
from errors import LVMError, PreconditionError, SchemaError
from exact import complex_to_json, quad_from_json, scalar_to_json
from plot import plot_svg
from settings import Settings

LOGGER = logging.getLogger(__name__)


def dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load(path: Optional[str]):
    if path is None:
        raise SchemaError("an input file is required")
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _config(args) -> config.Configuration:
    return config.config_from_json(_load(args.input), args.field_d)


def _index(c: config.Configuration, label: int) -> int:
    if not 1 <= label <= c.n:
        raise PreconditionError(f"index {label} is outside 1..{c.n}")
    return label - 1


def _expr_json(e: classify.ManifoldExpr) -> dict:
    return {"expr": classify.expr_to_json(e), "text": classify.expr_to_text(e), "dim": classify.expr_dimension(e),
            "homology": classify.expr_homology(e).to_json()}


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> dict:
    c = _config(args)
    report = config.validate(c, args.threads)
    out = report.to_json()
    if report.admissible:
        out["lvm_dimension"] = config.lvm_dimension(c)
        if c.m == 1 and c.n == 3:
            out["torus_modulus"] = complex_to_json(config.torus_modulus(c))
    return out


def cmd_arith(args) -> dict:
    return config.arithmetic_report(_config(args)).to_json()


def cmd_glattice(args) -> dict:
    return config.g_lattice(_config(args)).to_json()


def cmd_faces(args) -> dict:
    c = _config(args)
    L = polytope.face_lattice(c)
    out = L.to_json()
    out["k"] = config.validate(c).k
    return out


def cmd_gale(args) -> dict:
    c = _config(args)
    out = polytope.gale_presentation(c).to_json()
    out["vertices"] = {",".join(str(i + 1) for i in J): [scalar_to_json(x) for x in point]
                       for J, point in sorted(polytope.vertices(c).items())}
    return out


def cmd_gale_inverse(args) -> dict:
    data = _load(args.input)
    if not isinstance(data, dict) or not {"V", "epsilon", "m"} <= set(data):
        raise SchemaError("Gale data needs 'V', 'epsilon' and 'm'")
    d = args.field_d if args.field_d is not None else data.get("d")
    c = polytope.gale_inverse([[quad_from_json(x, d) for x in row] for row in data["V"]],
                              [quad_from_json(x, d) for x in data["epsilon"]], int(data["m"]), d)
    report = config.validate(c)
    return {"config": config.config_to_json(c), "k": report.k,
            "condition_k": config.arithmetic_report(c).condition_k}


def cmd_quadrics(args) -> dict:
    P = polytope.HPolytope.from_json(_load(args.input))
    system = polytope.polytope_to_quadrics(P)
    out = system.to_json()
    out["lattice"] = polytope.hpolytope_lattice(P).to_json()
    return out


def cmd_homology(args) -> dict:
    if args.abstract_polygon is not None:
        L = polytope.polygon_lattice(args.abstract_polygon)
        k, m, d = args.k, 1, None
        expected = classify.macgavran(args.abstract_polygon, k)
    else:
        c = _config(args)
        report = config.require_admissible(c)
        L = polytope.face_lattice(c)
        k, m = report.k, c.m
        d = None
        expected = None
        if c.m == 1:
            partition = config.cyclic_partition(c)
            d = partition.d if k == 0 else None
            expected = classify.classify_polygon(partition, args.flavor)
    if args.flavor == "real":
        h = scomplex.real_moment_angle_homology(L, k, args.threads)
        out = {"h": h.to_json(), "dim": L.dim}
        if expected is not None and args.abstract_polygon is None:
            out["classification"] = _expr_json(expected)
            out["agrees"] = classify.expr_homology(expected) == h
        return out
    result = scomplex.moment_angle_homology(L, k, args.threads)
    out = result.to_json()
    out["sanity_h1"] = scomplex.sanity_report(result.h1, result.dim1, d).to_json()
    out["sanity_h0"] = scomplex.sanity_report(result.h0, result.dim0, two_connected=True).to_json()
    out["euler_characteristic"] = scomplex.euler_characteristic(result.h1)
    if expected is not None:
        out["classification"] = _expr_json(expected)
        out["agrees"] = classify.expr_homology(expected) == result.h1
    LOGGER.info("homology over %d facets, m=%d", len(L.ground), m)
    return out


def cmd_classify(args) -> dict:
    c = _config(args)
    partition = config.cyclic_partition(c)
    out = _expr_json(classify.classify_polygon(partition, args.flavor))
    out["partition"] = partition.to_json()
    out["flavor"] = args.flavor
    return out


def cmd_page(args) -> dict:
    c = _config(args)
    i = _index(c, args.drop)
    partition = config.cyclic_partition(c)
    position = next(pos for pos, cls in enumerate(partition.classes) if i in cls)
    rotated = partition.rotate(position)
    out = _expr_json(classify.half_and_page(rotated, args.flavor))
    out["partition"] = rotated.to_json()
    out["flavor"] = args.flavor
    return out


def cmd_book(args) -> dict:
    c = _config(args)
    return classify.open_book(c, _index(c, args.drop)).to_json()


def cmd_wallcross(args) -> dict:
    h = wallcross.Homotopy.from_json(_load(args.input), args.field_d)
    events = wallcross.wall_events(h, args.threads)
    chambers = []
    for t, sample in wallcross.chamber_samples(h, events):
        report = config.validate(sample)
        chambers.append({"t": scalar_to_json(t), "k": report.k,
                         "signature": wallcross.chamber_signature(sample)})
    surgeries = []
    # chambers[j + 1] is the open chamber just before event j
    for j, e in enumerate(events):
        if not e.degenerate:
            k = chambers[j + 1]["k"]
            surgeries.append(wallcross.surgery_description(e.flip, h.base.n, h.base.m, k).to_json())
    return {"events": [e.to_json() for e in events], "chambers": chambers, "surgeries": surgeries}


def cmd_lvmb(args) -> dict:
    data = _load(args.input)
    if isinstance(data, dict) and "config" in data:
        c = config.config_from_json(data["config"], args.field_d)
        family = [[i - 1 for i in e] for e in data.get("family", [])]
    else:
        c = config.config_from_json(data, args.field_d)
        family = list(config.validate(c).e_min)
    return config.lvmb_check(c, family, args.interior_mode).to_json()


def cmd_plot(args) -> str:
    return plot_svg(_config(args))


COMMANDS: Dict[str, Callable] = {
    "validate": cmd_validate,
    "arith": cmd_arith,
    "glattice": cmd_glattice,
    "faces": cmd_faces,
    "gale": cmd_gale,
    "gale-inverse": cmd_gale_inverse,
    "quadrics": cmd_quadrics,
    "homology": cmd_homology,
    "classify": cmd_classify,
    "page": cmd_page,
    "book": cmd_book,
    "wallcross": cmd_wallcross,
    "lvmb": cmd_lvmb,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvm", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", help="JSON input file")
    parser.add_argument("--field-d", type=int, default=None, help="squarefree d of the field Q(sqrt d)")
    parser.add_argument("--flavor", choices=("complex", "real"), default="complex")
    parser.add_argument("--drop", type=int, default=1, help="1-based index removed for page/book")
    parser.add_argument("--abstract-polygon", type=int, default=None, help="run homology on a p-gon")
    parser.add_argument("--k", type=int, default=0, help="circle factors for --abstract-polygon")
    parser.add_argument("--interior-mode", choices=("intersect", "full"), default="intersect")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default LVM_THREADS)")
    parser.add_argument("--out", help="write the result here instead of standard output")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else SchemaError.exit_code
    try:
        settings = Settings.from_env()
        settings.configure_logging(args.verbose)
        if args.threads is None:
            args.threads = settings.threads
        elif args.threads < 1:
            raise SchemaError("--threads must be at least 1")
        result = COMMANDS[args.command](args)
        text = result if isinstance(result, str) else dump(result)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0
    except LVMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
