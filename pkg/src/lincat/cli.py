"""Command-line front end: JSON in, JSON report out.

Every invocation prints exactly one JSON report object:

    {"ok": bool, "command": str, "result": ..., "violations": [str],
     "timing_ms": int}

plus an "error" object when the input itself was unusable.  Exit codes:
0 success, 1 a well-formed check answered "no" (violations explain why),
2 malformed input.  "timing_ms" is wall-clock and is the only
non-deterministic field; strip it before comparing reports.

Category files:

    {"field": {"kind": "Q"} | {"kind": "Fp", "p": N},
     "objects": ["x", ...],
     "dims": {"x|y": int, ...},                // omitted pairs are 0
     "mult": [[x, y, z, i, j, k, scalar], ...],// 1-based, omitted = 0
     "units": {"x": [scalar, ...], ...}}

The mult entry [x,y,z,i,j,k,s] gives the k-th output coordinate of
(basis i of hom(x,y)) then (basis j of hom(y,z)).  Scalars are decimal
strings, "a/b" fractions, or plain integers.  Cochain files:

    {"degree": n, "entries": [[x0..xn, a1..an, out, scalar], ...]}

with 1-based argument and output indices.  Functor files:

    {"object_map": {"x": "y", ...},
     "matrices": {"x|y": [[scalar, ...], ...], ...}}

rows indexed by the target hom basis, columns by the source hom basis.
Bimodule files (actions of one-object algebras on an m-dimensional
space):

    {"dim": m,
     "left_action": [[[scalar ...m] ...m] ...dim(B)],
     "right_action": [[[scalar ...m] ...dim(C)] ...m]}

Dual matrix files for lifting:

    {"field": {...}, "entries": [[[value, eps], ...], ...]}

Subcommands: validate, hh, deform, trivialize, center, derivations,
morita, bimodule-check, karoubi, lift, tangent, emit-equations,
enumerate, catalog.  Checks (exit 1 on a negative answer): validate,
deform, trivialize, morita, bimodule-check, lift, tangent.  The rest
only report.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .core import GraphType, LinCat, catalog, new_lincat
from .errors import DomainViolation, InputError, ParseError
from .fields import GF, QQ, DualNumbers, FieldSpec
from .functors import LinFunctor, new_functor
from .hochschild import (
    Cochain,
    cochain_blocks,
    cochain_from_map,
    center,
    deform,
    derivations,
    hh_dims,
    inner_derivations,
    trivialize,
    Trivial,
    _flat,
)
from .bimodules import Invertible, is_invertible, morita_check, new_bimodule
from .karoubi import (
    biproduct_object,
    build_fragment,
    is_karoubian_within,
    unit_object,
    zero_object,
)
from .lifting import lift_idempotent, new_dual_matrix
from .moduli import check_hz2_inclusion, emit_system, enumerate_points

DEFAULT_CAP = 1 << 24


# serialization ----------------------------------------------------------------


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def _split_pair_key(key: str, objects: Sequence[str]) -> Tuple[str, str]:
    """Split "x|y" against the declared object names."""
    hits = []
    for pos, ch in enumerate(key):
        if ch == "|" and key[:pos] in objects and key[pos + 1 :] in objects:
            hits.append((key[:pos], key[pos + 1 :]))
    if len(hits) == 1:
        return hits[0]
    if not hits:
        raise ParseError(f"dims key {key!r} does not name two known objects")
    raise ParseError(f"dims key {key!r} is ambiguous")


def parse_category_doc(doc) -> LinCat:
    if not isinstance(doc, dict):
        raise ParseError("category file must be a JSON object")
    field = FieldSpec.from_json(doc.get("field"))
    objects = doc.get("objects")
    if (
        not isinstance(objects, list)
        or not objects
        or not all(isinstance(x, str) and x for x in objects)
        or len(set(objects)) != len(objects)
    ):
        raise ParseError("objects must be a nonempty array of distinct strings")
    dims: Dict[Tuple[str, str], int] = {}
    raw_dims = doc.get("dims", {})
    if not isinstance(raw_dims, dict):
        raise ParseError("dims must be an object")
    for x, y in iproduct(objects, repeat=2):
        dims[(x, y)] = 0
    for key, val in raw_dims.items():
        if not isinstance(val, int) or val < 0:
            raise ParseError(f"dims[{key!r}] must be a nonnegative integer")
        dims[_split_pair_key(key, objects)] = val
    graph = GraphType(tuple(objects), dims)

    def d(x: str, y: str) -> int:
        return dims.get((x, y), 0)

    mult: Dict[Tuple[str, str, str], list] = {}
    for x, y, z in iproduct(objects, repeat=3):
        if d(x, y) and d(y, z) and d(x, z):
            mult[(x, y, z)] = [
                [[field.zero for _ in range(d(x, z))] for _ in range(d(y, z))]
                for _ in range(d(x, y))
            ]
    raw_mult = doc.get("mult", [])
    if not isinstance(raw_mult, list):
        raise ParseError("mult must be an array")
    for entry in raw_mult:
        if not isinstance(entry, list) or len(entry) != 7:
            raise ParseError(f"mult entry {entry!r} must be [x,y,z,i,j,k,scalar]")
        x, y, z, i, j, k, s = entry
        if (x, y, z) not in mult:
            raise ParseError(f"mult entry names a zero hom triple {x},{y},{z}")
        if not all(isinstance(t, int) for t in (i, j, k)):
            raise ParseError(f"mult indices in {entry!r} must be integers")
        if not (1 <= i <= d(x, y) and 1 <= j <= d(y, z) and 1 <= k <= d(x, z)):
            raise ParseError(f"mult indices out of range in {entry!r}")
        mult[(x, y, z)][i - 1][j - 1][k - 1] = field.parse(s)
    raw_units = doc.get("units", {})
    if not isinstance(raw_units, dict):
        raise ParseError("units must be an object")
    units = {}
    for x in objects:
        dxx = d(x, x)
        if not dxx:
            continue
        if x not in raw_units:
            raise ParseError(f"units missing for object {x!r}")
        vec = raw_units[x]
        if not isinstance(vec, list) or len(vec) != dxx:
            raise ParseError(f"units[{x!r}] must be an array of length {dxx}")
        units[x] = tuple(field.parse(v) for v in vec)
    for x in raw_units:
        if x not in objects:
            raise ParseError(f"units name an unknown object {x!r}")
    return new_lincat(field, graph, mult, units)


def dump_category_doc(c: LinCat) -> dict:
    k = c.field
    if isinstance(k, DualNumbers):
        raise ParseError("category files hold plain-field categories only")
    dims = {}
    for x, y in iproduct(c.objects, repeat=2):
        if c.d(x, y):
            dims[f"{x}|{y}"] = c.d(x, y)
    mult = []
    for x, y, z in iproduct(c.objects, repeat=3):
        if not (c.d(x, y) and c.d(y, z) and c.d(x, z)):
            continue
        tensor = c.mult[(x, y, z)]
        for i in range(c.d(x, y)):
            for j in range(c.d(y, z)):
                for t in range(c.d(x, z)):
                    v = tensor[i][j][t]
                    if not k.is_zero(v):
                        mult.append([x, y, z, i + 1, j + 1, t + 1, k.fmt(v)])
    units = {x: [k.fmt(v) for v in c.units[x]] for x in c.objects if c.d(x, x)}
    return {
        "field": k.to_json(),
        "objects": list(c.objects),
        "dims": dims,
        "mult": mult,
        "units": units,
    }


def parse_cochain_doc(c: LinCat, doc) -> Cochain:
    if not isinstance(doc, dict) or not isinstance(doc.get("degree"), int):
        raise ParseError("cochain file needs an integer degree")
    degree = doc["degree"]
    if degree < 0:
        raise ParseError("cochain degree must be nonnegative")
    raw = doc.get("entries", [])
    if not isinstance(raw, list):
        raise ParseError("cochain entries must be an array")
    entries = {}
    width = 2 * degree + 3
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != width:
            raise ParseError(
                f"cochain entry {entry!r} must have {width} fields for degree {degree}"
            )
        objs = tuple(entry[: degree + 1])
        args = entry[degree + 1 : 2 * degree + 1]
        out = entry[2 * degree + 1]
        if not all(isinstance(x, str) for x in objs):
            raise ParseError(f"cochain entry {entry!r} has non-string objects")
        if not all(isinstance(a, int) and a >= 1 for a in list(args) + [out]):
            raise ParseError(f"cochain entry {entry!r} needs 1-based integer indices")
        entries[(objs, tuple(a - 1 for a in args), out - 1)] = c.field.parse(entry[-1])
    try:
        return cochain_from_map(c, degree, entries)
    except InputError:
        raise
    except Exception as exc:  # index/shape problems surface as ParseError
        raise ParseError(f"bad cochain entries: {exc}") from None


def dump_cochain_entries(coch: Cochain) -> list:
    c = coch.base
    k = c.field
    out = []
    for bl in cochain_blocks(c, coch.degree):
        ranges = [range(d) for d in bl.arg_dims] + [range(bl.out_dim)]
        for combo in iproduct(*ranges):
            args, t = combo[:-1], combo[-1]
            v = coch.coords[_flat(bl, args, t)]
            if not k.is_zero(v):
                out.append(
                    list(bl.objs) + [a + 1 for a in args] + [t + 1, k.fmt(v)]
                )
    return out


def parse_functor_doc(src: LinCat, dst: LinCat, doc) -> LinFunctor:
    if not isinstance(doc, dict) or not isinstance(doc.get("object_map"), dict):
        raise ParseError("functor file needs an object_map")
    omap = doc["object_map"]
    mats = {}
    raw = doc.get("matrices", {})
    if not isinstance(raw, dict):
        raise ParseError("functor matrices must be an object")
    for key, rows in raw.items():
        x, y = _split_pair_key(key, src.objects)
        if not isinstance(rows, list):
            raise ParseError(f"matrix {key!r} must be an array of rows")
        mats[(x, y)] = [[dst.field.parse(v) for v in row] for row in rows]
    return new_functor(src, dst, omap, mats)


def _parse_action(k, raw, shape, what: str):
    a, b, c = shape
    if not isinstance(raw, list) or len(raw) != a:
        raise ParseError(f"{what} must have {a} outer entries")
    out = []
    for row in raw:
        if not isinstance(row, list) or len(row) != b:
            raise ParseError(f"{what} rows must have {b} entries")
        cells = []
        for cell in row:
            if not isinstance(cell, list) or len(cell) != c:
                raise ParseError(f"{what} cells must have {c} coordinates")
            cells.append([k.parse(v) for v in cell])
        out.append(cells)
    return out


# command bodies -----------------------------------------------------------------


def _cmd_validate(ns):
    c = parse_category_doc(_load_json(ns.file))
    total = sum(c.d(x, y) for x in c.objects for y in c.objects)
    return {"objects": list(c.objects), "total_dim": total}, True, []


def _cmd_hh(ns):
    c = parse_category_doc(_load_json(ns.file))
    return {"hh": hh_dims(c, ns.max_degree)}, True, []


def _cmd_deform(ns):
    c = parse_category_doc(_load_json(ns.file))
    mu = parse_cochain_doc(c, _load_json(ns.cochain))
    deformed = deform(c, mu)
    return (
        {
            "cocycle": True,
            "deformed_valid": True,
            "objects": list(deformed.cat.objects),
        },
        True,
        [],
    )


def _cmd_trivialize(ns):
    c = parse_category_doc(_load_json(ns.file))
    mu = parse_cochain_doc(c, _load_json(ns.cochain))
    answer = trivialize(c, mu)
    if isinstance(answer, Trivial):
        return (
            {"trivial": True, "witness": dump_cochain_entries(answer.f)},
            True,
            [],
        )
    return (
        {"trivial": False},
        False,
        ["no 1-cochain trivializes the deformation"],
    )


def _cmd_center(ns):
    c = parse_category_doc(_load_json(ns.file))
    rep = center(c)
    k = c.field
    return (
        {
            "dimension": rep.dimension,
            "basis": [[k.fmt(v) for v in vec] for vec in rep.basis],
        },
        True,
        [],
    )


def _cmd_derivations(ns):
    c = parse_category_doc(_load_json(ns.file))
    return (
        {
            "dimension": len(derivations(c)),
            "inner_dimension": len(inner_derivations(c)),
        },
        True,
        [],
    )


def _cmd_morita(ns):
    src = parse_category_doc(_load_json(ns.src))
    dst = parse_category_doc(_load_json(ns.dst))
    f = parse_functor_doc(src, dst, _load_json(ns.functor))
    answer = morita_check(f)
    if isinstance(answer, Invertible):
        return {"invertible": True, "dual_dim": answer.w.dim}, True, []
    return {"invertible": False}, False, [answer.reason]


def _cmd_bimodule_check(ns):
    left = parse_category_doc(_load_json(ns.left))
    right = parse_category_doc(_load_json(ns.right))
    doc = _load_json(ns.bimodule)
    if not isinstance(doc, dict) or not isinstance(doc.get("dim"), int) or doc["dim"] < 0:
        raise ParseError("bimodule file needs a nonnegative integer dim")
    m = doc["dim"]
    if len(left.objects) != 1 or len(right.objects) != 1:
        raise ParseError("bimodule actions need one-object algebras")
    db = left.d(left.objects[0], left.objects[0])
    dc = right.d(right.objects[0], right.objects[0])
    la = _parse_action(left.field, doc.get("left_action"), (db, m, m), "left_action")
    ra = _parse_action(left.field, doc.get("right_action"), (m, dc, m), "right_action")
    v = new_bimodule(left, right, la, ra)
    answer = is_invertible(v)
    return (
        {"valid": True, "dim": m, "invertible": isinstance(answer, Invertible)},
        True,
        [],
    )


def _cmd_karoubi(ns):
    c = parse_category_doc(_load_json(ns.file))
    objs = [zero_object(c)] + [unit_object(c, x) for x in c.objects]
    units = objs[1:]
    for i in range(len(units)):
        for j in range(i, len(units)):
            objs.append(biproduct_object(units[i], units[j]))
    frag = build_fragment(c, objs)
    rep = is_karoubian_within(frag, seed=ns.seed)
    return (
        {
            "fragment_objects": len(objs),
            "zero_object_present": rep.zero_object_present,
            "missing_biproducts": [list(t) for t in rep.missing_biproducts],
            "checked_projectors": rep.checked_projectors,
            "unsplit_count": len(rep.unsplit),
            "karoubian_within_sample": rep.karoubian,
        },
        True,
        [],
    )


def _cmd_lift(ns):
    doc = _load_json(ns.file)
    if not isinstance(doc, dict):
        raise ParseError("matrix file must be a JSON object")
    base = FieldSpec.from_json(doc.get("field"))
    rows = doc.get("entries")
    if not isinstance(rows, list) or not rows:
        raise ParseError("matrix entries must be a nonempty array of rows")
    ring = DualNumbers(base)
    p = new_dual_matrix(ring, rows)
    q = lift_idempotent(p)
    out = [
        [[base.fmt(v[0]), base.fmt(v[1])] for v in row]
        for row in q.entries
    ]
    moved = not q.equals(p)
    return {"matrix": out, "correction_applied": moved}, True, []


def _cmd_tangent(ns):
    c = parse_category_doc(_load_json(ns.file))
    rep = check_hz2_inclusion(c)
    result = {
        "dim_cocycles": rep.dim_cocycles,
        "dim_normalized": rep.dim_normalized,
        "dim_tangent": rep.dim_tangent,
        "included": rep.included,
    }
    if rep.included:
        return result, True, []
    return result, False, list(rep.failures)


def _system_from_args(kind: str, args: Sequence[str]):
    def as_int(text: str) -> Optional[int]:
        try:
            return int(text)
        except ValueError:
            return None

    if kind in ("ass", "com"):
        if len(args) != 1 or as_int(args[0]) is None:
            raise ParseError(f"{kind} takes one integer dimension")
        return emit_system(kind, as_int(args[0]))
    if kind == "cat":
        if len(args) != 1:
            raise ParseError("cat takes one dimension or one category file")
        n = as_int(args[0])
        if n is not None:
            return emit_system("cat", n)
        return emit_system("cat", parse_category_doc(_load_json(args[0])))
    if kind == "fct":
        if len(args) != 2:
            raise ParseError("fct takes two category files")
        return emit_system(
            "fct",
            parse_category_doc(_load_json(args[0])),
            parse_category_doc(_load_json(args[1])),
        )
    if kind == "tn":
        if len(args) != 4:
            raise ParseError("tn takes two category files and two functor files")
        src = parse_category_doc(_load_json(args[0]))
        dst = parse_category_doc(_load_json(args[1]))
        f = parse_functor_doc(src, dst, _load_json(args[2]))
        g = parse_functor_doc(src, dst, _load_json(args[3]))
        return emit_system("tn", f, g)
    if kind == "bim":
        if len(args) != 3 or as_int(args[2]) is None:
            raise ParseError("bim takes two category files and a dimension")
        return emit_system(
            "bim",
            parse_category_doc(_load_json(args[0])),
            parse_category_doc(_load_json(args[1])),
            as_int(args[2]),
        )
    raise ParseError(f"unknown system kind {kind!r}")


def _cmd_emit(ns):
    sys_ = _system_from_args(ns.kind, ns.args)
    return (
        {
            "kind": ns.kind,
            "variables": list(sys_.variables),
            "equation_count": len(sys_.equations),
            "inverted_minors": list(sys_.inverted_minors),
            "text": sys_.text(),
        },
        True,
        [],
    )


def _cmd_enumerate(ns):
    sys_ = _system_from_args(ns.kind, ns.args)
    res = enumerate_points(sys_, ns.p, ns.cap)
    return (
        {
            "variables": list(res.variables),
            "count": res.count,
            "points": [list(pt) for pt in res.points],
        },
        True,
        [],
    )


def _cmd_catalog(ns):
    if ns.field == "Fp":
        if ns.p is None:
            raise ParseError("--field Fp needs --p")
        field = GF(ns.p)
    else:
        field = QQ
    c = catalog(ns.name, field=field)
    return dump_category_doc(c), True, []


# wiring -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ParseError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="lincat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, *positional, **flags):
        p = sub.add_parser(name)
        for arg in positional:
            if arg == "args":
                p.add_argument("args", nargs="*")
            else:
                p.add_argument(arg)
        for flag, spec in flags.items():
            p.add_argument("--" + flag.replace("_", "-"), **spec)
        p.add_argument("--format", choices=["json"], default="json")
        p.set_defaults(fn=fn)
        return p

    add("validate", _cmd_validate, "file")
    add("hh", _cmd_hh, "file", max_degree={"type": int, "default": 2})
    add("deform", _cmd_deform, "file", "cochain")
    add("trivialize", _cmd_trivialize, "file", "cochain")
    add("center", _cmd_center, "file")
    add("derivations", _cmd_derivations, "file")
    add("morita", _cmd_morita, "src", "dst", "functor")
    add("bimodule-check", _cmd_bimodule_check, "left", "right", "bimodule")
    add("karoubi", _cmd_karoubi, "file", seed={"type": int, "default": 0})
    add("lift", _cmd_lift, "file")
    add("tangent", _cmd_tangent, "file")
    add("emit-equations", _cmd_emit, "kind", "args")
    add(
        "enumerate",
        _cmd_enumerate,
        "kind",
        "args",
        p={"type": int, "required": True},
        cap={"type": int, "default": DEFAULT_CAP},
    )
    add(
        "catalog",
        _cmd_catalog,
        "name",
        field={"choices": ["Q", "Fp"], "default": "Q"},
        p={"type": int, "default": None},
    )
    return parser


def _ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def run(argv: Sequence[str]) -> int:
    t0 = time.perf_counter()
    command = next((a for a in argv if not a.startswith("-")), "")
    try:
        ns = _build_parser().parse_args(list(argv))
        command = ns.command
        result, ok, violations = ns.fn(ns)
        report = {
            "ok": ok,
            "command": command,
            "result": result,
            "violations": [str(v) for v in violations],
            "timing_ms": _ms(t0),
        }
        print(_dumps(report))
        return 0 if ok else 1
    except InputError as exc:
        report = {
            "ok": False,
            "command": command,
            "result": None,
            "violations": [],
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "timing_ms": _ms(t0),
        }
        print(_dumps(report))
        return 2
    except DomainViolation as exc:
        violations = [str(v) for v in exc.violations] or [str(exc)]
        report = {
            "ok": False,
            "command": command,
            "result": None,
            "violations": violations,
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "timing_ms": _ms(t0),
        }
        print(_dumps(report))
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
