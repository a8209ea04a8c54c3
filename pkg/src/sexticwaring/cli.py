"""Command-line front end.

Every subcommand reads JSON files and writes one JSON object to stdout with
``"schema_version": 1``, sorted keys and floats printed to 17 significant
digits.  ``classify`` prints a short text line per file unless ``--json`` is
given.  Exit codes: 0 success, 2 precondition violation, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Dict, List

import numpy as np

from . import __version__
from .apolarity import catalecticant
from .engine import (
    classify,
    construct_Wprime_form,
    decompose_via_kernel_cubics,
    random_form,
    second_decomposition,
    verify_expression,
)
from .errors import DegenerateCubicSystem, NumericalError, PreconditionError
from .flattening import h27_ratio, h27_vanishes
from .intersect import intersect_curves
from .pointsets import (
    PointSet,
    ProjectivePoint,
    expression_from_json,
    expression_to_json,
    h_vector,
    is_complete_intersection_33,
    pointset_from_json,
    pointset_to_json,
)
from .polycore import format_scalar, form_from_json, form_to_json, parse_scalar
from .terracini import R_det, check_lambda_N_squared, cubic_det, N_value, terracini_matrix
from . import linalg

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# output


def _plain(obj):
    """Reduce numpy and Fraction values to JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return format_scalar(complex(obj))
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _emit(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    return json.dumps(obj)


def dumps(obj) -> str:
    """Stable JSON text: sorted keys, 17 significant digits."""
    body = dict(_plain(obj))
    body["schema_version"] = SCHEMA_VERSION
    return _emit(body)


# ---------------------------------------------------------------------------
# input


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise PreconditionError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc}") from None


def _form(path: str):
    obj = _load(path)
    return form_from_json(obj.get("form", obj) if isinstance(obj, dict) else obj)


def _points(path: str) -> PointSet:
    return pointset_from_json(_load(path))


def _point_arg(text: str) -> ProjectivePoint:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raw = [c.strip() for c in text.split(",")]
    coords = [parse_scalar(c) for c in raw]
    if not all(isinstance(c, Fraction) for c in coords):
        coords = [complex(c) for c in coords]
    return ProjectivePoint(coords)


# ---------------------------------------------------------------------------
# subcommands


def _classify_one(path: str, tol: float) -> Dict:
    report = classify(_form(path), tol).to_json()
    report["file"] = path
    return report


def cmd_classify(args) -> Dict:
    if args.jobs > 1 and len(args.forms) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_classify_one, args.forms, [args.tol] * len(args.forms)))
    else:
        reports = [_classify_one(p, args.tol) for p in args.forms]
    if len(reports) == 1:
        return reports[0]
    return {"reports": reports}


def _classify_text(out: Dict) -> str:
    reports = out.get("reports", [out])
    lines = []
    for r in reports:
        lines.append(
            f"{r['file']}: {r['label']} rank_C3={r['rank_C3']} "
            f"H27_vanishes={str(r['H27_vanishes']).lower()} "
            f"expected_decompositions={r['expected_decompositions']}"
        )
    return "\n".join(lines)


def cmd_decompose(args) -> Dict:
    result = decompose_via_kernel_cubics(_form(args.form), seed=args.seed)
    out = expression_to_json(result.expression)
    out.update(
        verdict=result.verdict,
        residual=result.residual,
        base_points=pointset_to_json(result.points)["points"],
        base_coefficients=[format_scalar(a) for a in result.coefficients],
    )
    return out


def cmd_second(args) -> Dict:
    F = _form(args.form)
    A = _points(args.points)
    res = second_decomposition(F, A, seed=args.seed)
    out = expression_to_json(res.expression)
    out.update(
        residual=res.residual,
        h_vector_union=list(res.h_vector_union),
        min_distance_to_input=res.min_distance,
    )
    return out


def cmd_wprime(args) -> Dict:
    F = construct_Wprime_form(_form(args.c1), _form(args.c2), _form(args.c3), seed=args.seed)
    return {"form": form_to_json(F), "report": classify(F).to_json()}


def cmd_invariants(args) -> Dict:
    F = _form(args.form)
    cat = catalecticant(F, 3)
    det = cat.determinant()
    return {
        "rank_C3": cat.rank(args.tol),
        "H27_normalized": h27_ratio(F) if not F.is_zero() else 0.0,
        "H27_vanishes": h27_vanishes(F, args.tol),
        "det_C3": format_scalar(det),
    }


def cmd_hvector(args) -> Dict:
    Z = _points(args.points)
    out = {"h_vector": list(h_vector(Z)), "cardinality": len(Z)}
    out["ci33"] = is_complete_intersection_33(Z) if len(Z) == 9 else False
    return out


def cmd_intersect(args) -> Dict:
    hits = intersect_curves(_form(args.c1), _form(args.c2), seed=args.seed)
    pts = PointSet([p for p, _ in hits]) if hits else PointSet([])
    return {
        "points": pointset_to_json(pts)["points"],
        "multiplicities": [m for _, m in hits],
        "total": sum(m for _, m in hits),
    }


def cmd_terracini(args) -> Dict:
    Z = _points(args.points)
    if len(Z) != 9:
        raise PreconditionError(f"terracini needs nine points, got {len(Z)}")
    pts = list(Z)
    exact = Z.exact
    T = terracini_matrix(pts)
    out: Dict = {"rank_T": linalg.rank(T) if exact else linalg.rank(T, args.tol)}
    if args.aux is not None:
        q = _point_arg(args.aux)
    else:
        rng = np.random.default_rng([args.seed, 0x617578])
        if exact:
            q = ProjectivePoint([Fraction(int(v)) for v in rng.integers(1, 21, 3)])
        else:
            q = ProjectivePoint(list(rng.standard_normal(3)))
    if q.exact != exact:
        pts = [ProjectivePoint(list(p.to_complex())) for p in pts]
        q = ProjectivePoint(list(q.to_complex()))
    out["aux"] = [format_scalar(c) for c in q.coords]
    out["C"] = format_scalar(cubic_det(pts + [q]))
    out["R"] = format_scalar(R_det(pts, q))
    try:
        N = N_value(pts, seed=args.seed)
        lam, _ = check_lambda_N_squared(pts, seed=args.seed)
        out["N"] = format_scalar(N)
        out["lambda"] = format_scalar(lam)
    except DegenerateCubicSystem as exc:
        out["note"] = f"DegenerateCubicSystem: {exc}"
    return out


def cmd_random(args) -> Dict:
    F, witness = random_form(args.rank, seed=args.seed)
    out = {"form": form_to_json(F), "witness": expression_to_json(witness)}
    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        form_path = prefix.with_name(prefix.name + "_form.json")
        witness_path = prefix.with_name(prefix.name + "_witness.json")
        form_path.write_text(dumps(out["form"]) + "\n")
        witness_path.write_text(dumps(out["witness"]) + "\n")
        out["files"] = [str(form_path), str(witness_path)]
    return out


def cmd_verify(args) -> Dict:
    F = _form(args.form)
    expr = expression_from_json(_load(args.expression))
    v = verify_expression(F, expr, args.tol)
    return {"residual": v.residual, "non_redundant": v.non_redundant}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sextic-waring", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="stratum of one or more sextics")
    c.add_argument("forms", nargs="+")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--json", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("decompose", help="decomposition from the kernel cubic pencil")
    c.add_argument("form")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_decompose)

    c = sub.add_parser("second", help="second length-9 decomposition by liaison")
    c.add_argument("form")
    c.add_argument("points")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_second)

    c = sub.add_parser("wprime", help="sextic apolar to three cubics")
    c.add_argument("c1")
    c.add_argument("c2")
    c.add_argument("c3")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_wprime)

    c = sub.add_parser("invariants", help="rank of C3, normalized H27, det C3")
    c.add_argument("form")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_invariants)

    c = sub.add_parser("hvector", help="h-vector of a point set")
    c.add_argument("points")
    c.set_defaults(func=cmd_hvector)

    c = sub.add_parser("intersect", help="intersection points of two curves")
    c.add_argument("c1")
    c.add_argument("c2")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_intersect)

    c = sub.add_parser("terracini", help="rank T, C, R, N and lambda for nine points")
    c.add_argument("points")
    c.add_argument("--aux", help="auxiliary point, e.g. '[\"1\",\"2\",\"3\"]' or 1,2,3")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_terracini)

    c = sub.add_parser("random", help="random sextic of given rank with its witness")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", help="write <out>_form.json and <out>_witness.json")
    c.set_defaults(func=cmd_random)

    c = sub.add_parser("verify", help="check a Waring expression against a form")
    c.add_argument("form")
    c.add_argument("expression")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_verify)
    return p


def main(argv: List[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except PreconditionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.command == "classify" and not args.json:
        print(_classify_text(out))
    else:
        print(dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
