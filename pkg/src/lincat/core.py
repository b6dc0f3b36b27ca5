"""Finite linear categories presented by structure constants.

A category here is a finite object list, a dimension for every ordered
pair of objects, a composition tensor per ordered triple, and a unit
vector per object.  Composition is written left to right: the tensor for
(x, y, z) takes C(x,y) x C(y,z) to C(x,z), and entry [i][j][k] is the
e_k-coefficient of (e_i composed with e_j).

All arithmetic goes through the carried ring object, so the same
validation code runs over Q, F_p, and the dual numbers k[eps].
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    AxiomViolation,
    BadParams,
    FieldMismatch,
    InvalidFamily,
    ShapeMismatch,
    UnknownName,
)
from .fields import DualNumbers, FieldSpec, QQ, Ring, Scalar
from .linalg import Matrix, image_basis, solve


@dataclass
class GraphType:
    """Object names plus a hom-space dimension for every ordered pair."""

    objects: Tuple[str, ...]
    dims: Dict[Tuple[str, str], int]

    def __post_init__(self):
        if len(set(self.objects)) != len(self.objects):
            raise ShapeMismatch("object names must be distinct")
        for x in self.objects:
            for y in self.objects:
                d = self.dims.get((x, y))
                if d is None or d < 0:
                    raise ShapeMismatch(f"missing or negative dimension for ({x},{y})")

    def d(self, x: str, y: str) -> int:
        return self.dims[(x, y)]


@dataclass
class LinCat:
    field: Ring
    graph: GraphType
    mult: Dict[Tuple[str, str, str], tuple]
    units: Dict[str, tuple]

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.graph.objects

    def d(self, x: str, y: str) -> int:
        return self.graph.dims[(x, y)]

    def m(self, x: str, y: str, z: str, i: int, j: int, k: int) -> Scalar:
        return self.mult[(x, y, z)][i][j][k]

    def unit(self, x: str) -> tuple:
        return self.units[x]

    def total_dim(self) -> int:
        return sum(self.graph.dims.values())


def _coerce(ring: Ring, v) -> Scalar:
    if isinstance(v, int):
        return ring.from_int(v)
    return v


def _normalize_mult(ring: Ring, graph: GraphType, mult) -> Dict[Tuple[str, str, str], tuple]:
    out: Dict[Tuple[str, str, str], tuple] = {}
    z = ring.zero
    for x in graph.objects:
        for y in graph.objects:
            for w in graph.objects:
                di, dj, dk = graph.d(x, y), graph.d(y, w), graph.d(x, w)
                raw = mult.get((x, y, w)) if mult else None
                if raw is None:
                    out[(x, y, w)] = tuple(
                        tuple((z,) * dk for _ in range(dj)) for _ in range(di)
                    )
                    continue
                if len(raw) != di or any(len(r) != dj for r in raw):
                    raise ShapeMismatch(f"mult tensor ({x},{y},{w}) has wrong shape")
                rows = []
                for r in raw:
                    cols = []
                    for cell in r:
                        if len(cell) != dk:
                            raise ShapeMismatch(f"mult tensor ({x},{y},{w}) has wrong shape")
                        cols.append(tuple(_coerce(ring, v) for v in cell))
                    rows.append(tuple(cols))
                out[(x, y, w)] = tuple(rows)
    extra = set(mult or ()) - set(out)
    if extra:
        raise ShapeMismatch(f"mult keys outside the object set: {sorted(extra)}")
    return out


def _normalize_units(ring: Ring, graph: GraphType, units) -> Dict[str, tuple]:
    out: Dict[str, tuple] = {}
    for x in graph.objects:
        if x not in units:
            raise ShapeMismatch(f"missing unit for object {x}")
        vec = tuple(_coerce(ring, v) for v in units[x])
        if len(vec) != graph.d(x, x):
            raise ShapeMismatch(f"unit of {x} has length {len(vec)}, need {graph.d(x, x)}")
        out[x] = vec
    return out


def compose(c: LinCat, x: str, y: str, z: str, f: Sequence[Scalar], g: Sequence[Scalar]) -> List[Scalar]:
    """Coordinates of (f then g) in C(x,z), for f in C(x,y) and g in C(y,z)."""
    k = c.field
    di, dj, dk = c.d(x, y), c.d(y, z), c.d(x, z)
    if len(f) != di or len(g) != dj:
        raise ShapeMismatch("operand lengths do not match hom dimensions")
    out = [k.zero] * dk
    tensor = c.mult[(x, y, z)]
    for i in range(di):
        fi = f[i]
        if k.is_zero(fi):
            continue
        ti = tensor[i]
        for j in range(dj):
            gj = g[j]
            if k.is_zero(gj):
                continue
            coeff = k.mul(fi, gj)
            row = ti[j]
            for t in range(dk):
                if not k.is_zero(row[t]):
                    out[t] = k.add(out[t], k.mul(coeff, row[t]))
    return out


def validate(c: LinCat, max_violations: int = 1000) -> List[str]:
    """All failed associativity and unit equations, as readable strings."""
    k = c.field
    out: List[str] = []
    objs = c.objects

    def record(msg: str) -> bool:
        out.append(msg)
        return len(out) >= max_violations

    for x in objs:
        for y in objs:
            dxy = c.d(x, y)
            if dxy == 0:
                continue
            ux, uy = c.units[x], c.units[y]
            tl = c.mult[(x, x, y)]
            tr = c.mult[(x, y, y)]
            for j in range(dxy):
                for t in range(dxy):
                    want = k.one if j == t else k.zero
                    acc = k.zero
                    for i in range(c.d(x, x)):
                        if not k.is_zero(ux[i]):
                            acc = k.add(acc, k.mul(ux[i], tl[i][j][t]))
                    if not k.eq(acc, want):
                        if record(f"Id_left[{x},{y}][{j + 1},{t + 1}] residual="
                                  f"{k.fmt(k.sub(acc, want))}"):
                            return out
                    acc = k.zero
                    for i in range(c.d(y, y)):
                        if not k.is_zero(uy[i]):
                            acc = k.add(acc, k.mul(uy[i], tr[j][i][t]))
                    if not k.eq(acc, want):
                        if record(f"Id_right[{x},{y}][{j + 1},{t + 1}] residual="
                                  f"{k.fmt(k.sub(acc, want))}"):
                            return out

    for x in objs:
        for y in objs:
            dxy = c.d(x, y)
            if dxy == 0:
                continue
            for z in objs:
                dyz = c.d(y, z)
                if dyz == 0:
                    continue
                txy_z = c.mult[(x, y, z)]
                for t in objs:
                    dzt = c.d(z, t)
                    dxt = c.d(x, t)
                    if dzt == 0 or dxt == 0:
                        continue
                    txz_t = c.mult[(x, z, t)]
                    tyz_t = c.mult[(y, z, t)]
                    txy_t = c.mult[(x, y, t)]
                    dxz = c.d(x, z)
                    dyt = c.d(y, t)
                    for i in range(dxy):
                        for j in range(dyz):
                            left_inner = txy_z[i][j]
                            for kk in range(dzt):
                                for p in range(dxt):
                                    acc = k.zero
                                    for l in range(dxz):
                                        v = left_inner[l]
                                        if not k.is_zero(v):
                                            acc = k.add(acc, k.mul(v, txz_t[l][kk][p]))
                                    for l in range(dyt):
                                        v = tyz_t[j][kk][l]
                                        if not k.is_zero(v):
                                            acc = k.sub(acc, k.mul(v, txy_t[i][l][p]))
                                    if not k.is_zero(acc):
                                        if record(
                                            f"Ass[{x},{y},{z},{t}]"
                                            f"[{i + 1},{j + 1},{kk + 1},{p + 1}] "
                                            f"residual={k.fmt(acc)}"
                                        ):
                                            return out
    return out


def new_lincat(field: Ring, graph: GraphType, mult, units, validate_laws: bool = True) -> LinCat:
    """Build and fully validate a category; reject on any failed equation.

    validate_laws=False skips the law check; reserved for compositions that
    hold by construction (results stay subject to downstream witness checks).
    """
    cat = LinCat(
        field,
        graph,
        _normalize_mult(field, graph, mult),
        _normalize_units(field, graph, units),
    )
    if validate_laws:
        bad = validate(cat)
        if bad:
            raise AxiomViolation("category axioms fail", bad)
    return cat


def structural_equal(a: LinCat, b: LinCat) -> bool:
    if a.field != b.field or a.objects != b.objects or a.graph.dims != b.graph.dims:
        return False
    k = a.field
    for key, ta in a.mult.items():
        tb = b.mult[key]
        for ra, rb in zip(ta, tb):
            for ca, cb in zip(ra, rb):
                if any(not k.eq(u, v) for u, v in zip(ca, cb)):
                    return False
    return all(
        all(k.eq(u, v) for u, v in zip(a.units[x], b.units[x])) for x in a.objects
    )


# one-object (algebra) helpers --------------------------------------------


def only_object(c: LinCat) -> str:
    if len(c.objects) != 1:
        raise ShapeMismatch("expected a one-object category")
    return c.objects[0]


def alg_dim(c: LinCat) -> int:
    o = only_object(c)
    return c.d(o, o)


def alg_mul(c: LinCat, u: Sequence[Scalar], v: Sequence[Scalar]) -> List[Scalar]:
    o = only_object(c)
    return compose(c, o, o, o, u, v)


def alg_unit(c: LinCat) -> tuple:
    return c.units[only_object(c)]


def left_mul_matrix(c: LinCat, u: Sequence[Scalar]) -> Matrix:
    """Matrix of v -> u*v in the algebra's basis."""
    n = alg_dim(c)
    k = c.field
    cols = []
    for j in range(n):
        e = [k.zero] * n
        e[j] = k.one
        cols.append(alg_mul(c, u, e))
    return Matrix(n, n, tuple(cols[j][i] for i in range(n) for j in range(n)), k)


def right_mul_matrix(c: LinCat, u: Sequence[Scalar]) -> Matrix:
    """Matrix of v -> v*u in the algebra's basis."""
    n = alg_dim(c)
    k = c.field
    cols = []
    for j in range(n):
        e = [k.zero] * n
        e[j] = k.one
        cols.append(alg_mul(c, e, u))
    return Matrix(n, n, tuple(cols[j][i] for i in range(n) for j in range(n)), k)


# named examples -----------------------------------------------------------


def _ones_cat(field: Ring, names: Sequence[str], dims: Dict[Tuple[str, str], int]) -> LinCat:
    """All hom spaces of dimension 0 or 1, all composites of basis elements = basis."""
    graph = GraphType(tuple(names), dims)
    mult = {}
    for x in names:
        for y in names:
            for z in names:
                if dims[(x, y)] and dims[(y, z)] and dims[(x, z)]:
                    mult[(x, y, z)] = (((field.one,),),)
    units = {x: ((field.one,) if dims[(x, x)] else ()) for x in names}
    return new_lincat(field, graph, mult, units)


def _field_cat(field: Ring) -> LinCat:
    return _ones_cat(field, ("x",), {("x", "x"): 1})


def _truncated_poly(field: Ring, n: int) -> LinCat:
    if n < 1:
        raise BadParams("truncated_poly needs n >= 1")
    graph = GraphType(("x",), {("x", "x"): n})
    tensor = tuple(
        tuple(
            tuple(field.one if i + j == t and i + j < n else field.zero for t in range(n))
            for j in range(n)
        )
        for i in range(n)
    )
    units = {"x": tuple(field.one if i == 0 else field.zero for i in range(n))}
    return new_lincat(field, graph, {("x", "x", "x"): tensor}, units)


def _matrix_algebra(field: Ring, n: int) -> LinCat:
    if n < 1:
        raise BadParams("matrix_algebra needs n >= 1")
    d = n * n
    graph = GraphType(("x",), {("x", "x"): d})
    z, o = field.zero, field.one
    tensor = [[[z] * d for _ in range(d)] for _ in range(d)]
    for a in range(n):
        for b in range(n):
            for cc in range(n):
                for e in range(n):
                    if b == cc:
                        tensor[a * n + b][cc * n + e][a * n + e] = o
    units = {"x": tuple(o if i % (n + 1) == 0 else z for i in range(d))}
    return new_lincat(field, graph, {("x", "x", "x"): tensor}, units)


def _interval(field: Ring) -> LinCat:
    names = ("0", "1")
    dims = {("0", "0"): 1, ("0", "1"): 1, ("1", "0"): 0, ("1", "1"): 1}
    return _ones_cat(field, names, dims)


def _indiscrete(field: Ring, n: int) -> LinCat:
    if n < 1:
        raise BadParams("indiscrete needs n >= 1")
    names = tuple(str(i) for i in range(n))
    dims = {(a, b): 1 for a in names for b in names}
    return _ones_cat(field, names, dims)


def _chain(field: Ring, n: int) -> LinCat:
    if n < 0:
        raise BadParams("chain needs n >= 0")
    names = tuple(str(i) for i in range(n + 1))
    dims = {(a, b): (1 if int(a) <= int(b) else 0) for a in names for b in names}
    return _ones_cat(field, names, dims)


def opposite(c: LinCat) -> LinCat:
    objs = c.objects
    dims = {(x, y): c.d(y, x) for x in objs for y in objs}
    graph = GraphType(objs, dims)
    mult = {}
    for x in objs:
        for y in objs:
            for z in objs:
                di, dj, dk = dims[(x, y)], dims[(y, z)], dims[(x, z)]
                if di and dj and dk:
                    src = c.mult[(z, y, x)]
                    mult[(x, y, z)] = tuple(
                        tuple(
                            tuple(src[j][i][k] for k in range(dk)) for j in range(dj)
                        )
                        for i in range(di)
                    )
    return new_lincat(c.field, graph, mult, dict(c.units))


def tensor_product(c: LinCat, d: LinCat) -> LinCat:
    if c.field != d.field:
        raise FieldMismatch("tensor factors live over different fields")
    k = c.field
    objs = tuple(f"{a}|{b}" for a in c.objects for b in d.objects)
    pair = {f"{a}|{b}": (a, b) for a in c.objects for b in d.objects}
    dims = {}
    for xn, (xa, xb) in pair.items():
        for yn, (ya, yb) in pair.items():
            dims[(xn, yn)] = c.d(xa, ya) * d.d(xb, yb)
    graph = GraphType(objs, dims)

    def fuse(da: int, db: int, ia: int, ib: int) -> int:
        return ia * db + ib

    mult = {}
    for xn, (xa, xb) in pair.items():
        for yn, (ya, yb) in pair.items():
            if dims[(xn, yn)] == 0:
                continue
            for zn, (za, zb) in pair.items():
                if dims[(yn, zn)] == 0 or dims[(xn, zn)] == 0:
                    continue
                ta = c.mult[(xa, ya, za)]
                tb = d.mult[(xb, yb, zb)]
                d1a, d1b = c.d(xa, ya), d.d(xb, yb)
                d2a, d2b = c.d(ya, za), d.d(yb, zb)
                d3a, d3b = c.d(xa, za), d.d(xb, zb)
                block = [
                    [[k.zero] * (d3a * d3b) for _ in range(d2a * d2b)]
                    for _ in range(d1a * d1b)
                ]
                for ia in range(d1a):
                    for ib in range(d1b):
                        for ja in range(d2a):
                            for jb in range(d2b):
                                for ka in range(d3a):
                                    va = ta[ia][ja][ka]
                                    if k.is_zero(va):
                                        continue
                                    for kb in range(d3b):
                                        vb = tb[ib][jb][kb]
                                        if k.is_zero(vb):
                                            continue
                                        block[fuse(d1a, d1b, ia, ib)][
                                            fuse(d2a, d2b, ja, jb)
                                        ][fuse(d3a, d3b, ka, kb)] = k.mul(va, vb)
                mult[(xn, yn, zn)] = block
    units = {}
    for xn, (xa, xb) in pair.items():
        ua, ub = c.units[xa], d.units[xb]
        da, db = c.d(xa, xa), d.d(xb, xb)
        vec = [k.zero] * (da * db)
        for ia in range(da):
            for ib in range(db):
                vec[fuse(da, db, ia, ib)] = k.mul(ua[ia], ub[ib])
        units[xn] = vec
    return new_lincat(k, graph, mult, units)


def disjoint_union(c: LinCat, d: LinCat) -> LinCat:
    """Side-by-side union with no cross homs; objects prefixed a:/b:."""
    if c.field != d.field:
        raise FieldMismatch("union factors live over different fields")
    names = tuple(f"a:{x}" for x in c.objects) + tuple(f"b:{x}" for x in d.objects)
    dims = {}
    for xn in names:
        for yn in names:
            if xn[0] == yn[0] == "a":
                dims[(xn, yn)] = c.d(xn[2:], yn[2:])
            elif xn[0] == yn[0] == "b":
                dims[(xn, yn)] = d.d(xn[2:], yn[2:])
            else:
                dims[(xn, yn)] = 0
    graph = GraphType(names, dims)
    mult = {}
    for (x, y, z), tensor in c.mult.items():
        mult[(f"a:{x}", f"a:{y}", f"a:{z}")] = tensor
    for (x, y, z), tensor in d.mult.items():
        mult[(f"b:{x}", f"b:{y}", f"b:{z}")] = tensor
    units = {f"a:{x}": v for x, v in c.units.items()}
    units.update({f"b:{x}": v for x, v in d.units.items()})
    return new_lincat(c.field, graph, mult, units)


def extend_to_duals(c: LinCat) -> LinCat:
    """The same structure constants over k[eps] (the trivial deformation)."""
    ring = DualNumbers(c.field)
    mult = {
        key: tuple(
            tuple(tuple(ring.lift(v) for v in cell) for cell in row) for row in tensor
        )
        for key, tensor in c.mult.items()
    }
    units = {x: tuple(ring.lift(v) for v in vec) for x, vec in c.units.items()}
    return new_lincat(ring, c.graph, mult, units)


_BASE_BUILDERS = {
    "field_cat": (_field_cat, 0),
    "truncated_poly": (_truncated_poly, 1),
    "matrix_algebra": (_matrix_algebra, 1),
    "interval": (_interval, 0),
    "invertible_interval": (lambda f: _indiscrete(f, 2), 0),
    "chain": (_chain, 1),
    "indiscrete": (_indiscrete, 1),
}

_ALIASES = {
    "m2": "matrix_algebra(2)",
    "m3": "matrix_algebra(3)",
    "delta1": "invertible_interval",
    "tpoly2": "truncated_poly(2)",
    "tpoly3": "truncated_poly(3)",
}


def catalog_names() -> List[str]:
    return sorted(_BASE_BUILDERS) + sorted(_ALIASES)


def _split_args(body: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UnknownName(f"unbalanced parentheses in {body!r}")
        cur.append(ch)
    if depth != 0:
        raise UnknownName(f"unbalanced parentheses in {body!r}")
    parts.append("".join(cur).strip())
    return parts


def catalog(name: str, params: Optional[dict] = None, field: Ring = QQ) -> LinCat:
    """A named example category; composite names tensor(a,b), opposite(a),
    disjoint_union(a,b) are parsed recursively."""
    name = name.strip()
    if name in _ALIASES:
        name = _ALIASES[name]
    head, arg_body = name, None
    if "(" in name:
        if not name.endswith(")"):
            raise UnknownName(f"malformed catalog name {name!r}")
        head, arg_body = name[: name.index("(")], name[name.index("(") + 1 : -1]
    head = head.strip()
    if head == "tensor":
        if arg_body is None:
            raise BadParams("tensor needs two arguments")
        args = _split_args(arg_body)
        if len(args) != 2:
            raise BadParams("tensor needs two arguments")
        return tensor_product(catalog(args[0], None, field), catalog(args[1], None, field))
    if head == "opposite":
        if arg_body is None:
            raise BadParams("opposite needs one argument")
        args = _split_args(arg_body)
        if len(args) != 1:
            raise BadParams("opposite needs one argument")
        return opposite(catalog(args[0], None, field))
    if head == "disjoint_union":
        if arg_body is None:
            raise BadParams("disjoint_union needs two arguments")
        args = _split_args(arg_body)
        if len(args) != 2:
            raise BadParams("disjoint_union needs two arguments")
        return disjoint_union(catalog(args[0], None, field), catalog(args[1], None, field))
    if head not in _BASE_BUILDERS:
        raise UnknownName(f"no catalog entry named {head!r}")
    builder, arity = _BASE_BUILDERS[head]
    n = None
    if arg_body is not None:
        args = _split_args(arg_body)
        if len(args) != 1 or not args[0].lstrip("-").isdigit():
            raise BadParams(f"{head} takes one integer parameter")
        n = int(args[0])
    if params and "n" in params:
        if n is not None and n != params["n"]:
            raise BadParams("conflicting parameters")
        n = int(params["n"])
    if arity == 0:
        if n is not None:
            raise BadParams(f"{head} takes no parameter")
        return builder(field)
    if n is None:
        raise BadParams(f"{head} needs an integer parameter")
    return builder(field, n)


# matrix ring and idempotent splitting -------------------------------------


@dataclass
class IdempotentFamily:
    algebra: LinCat
    elements: Tuple[tuple, ...]


def validate_idempotent_family(a: LinCat, elements: Sequence[Sequence[Scalar]]) -> List[str]:
    k = a.field
    n = alg_dim(a)
    out = []
    elems = [tuple(_coerce(k, v) for v in e) for e in elements]
    for idx, e in enumerate(elems):
        if len(e) != n:
            return [f"element {idx + 1} has length {len(e)}, need {n}"]
    for i, ei in enumerate(elems):
        for j, ej in enumerate(elems):
            prod = alg_mul(a, ei, ej)
            want = ei if i == j else [k.zero] * n
            if any(not k.eq(u, v) for u, v in zip(prod, want)):
                kind = "p*p != p" if i == j else "p_i*p_j != 0"
                out.append(f"({i + 1},{j + 1}): {kind}")
    total = [k.zero] * n
    for e in elems:
        total = [k.add(u, v) for u, v in zip(total, e)]
    if any(not k.eq(u, v) for u, v in zip(total, alg_unit(a))):
        out.append("sum of the family is not the unit")
    return out


def matrix_ring_layout(c: LinCat) -> List[Tuple[str, str, int]]:
    return [
        (x, y, i)
        for x in c.objects
        for y in c.objects
        for i in range(c.d(x, y))
    ]


def matrix_ring(c: LinCat, validate_laws: bool = True) -> Tuple[LinCat, IdempotentFamily]:
    """The one-object block-matrix algebra of c, plus the object idempotents.

    Associativity and unitality transfer from c, so callers holding an
    already-validated category may skip the law re-check."""
    k = c.field
    layout = matrix_ring_layout(c)
    pos = {key: t for t, key in enumerate(layout)}
    n = len(layout)
    z = k.zero
    tensor = [[[z] * n for _ in range(n)] for _ in range(n)]
    for a, (x, y, i) in enumerate(layout):
        for b, (y2, w, j) in enumerate(layout):
            if y2 != y:
                continue
            row = c.mult[(x, y, w)][i][j]
            for t in range(c.d(x, w)):
                if not k.is_zero(row[t]):
                    tensor[a][b][pos[(x, w, t)]] = row[t]
    unit = [z] * n
    fam = []
    for x in c.objects:
        p = [z] * n
        for i in range(c.d(x, x)):
            p[pos[(x, x, i)]] = c.units[x][i]
            unit[pos[(x, x, i)]] = c.units[x][i]
        fam.append(tuple(p))
    graph = GraphType(("o",), {("o", "o"): n})
    alg = new_lincat(k, graph, {("o", "o", "o"): tensor}, {"o": unit}, validate_laws=validate_laws)
    return alg, IdempotentFamily(alg, tuple(fam))


def category_from_idempotents(a: LinCat, fam: IdempotentFamily) -> LinCat:
    """Split a one-object algebra along a complete orthogonal family."""
    k = a.field
    bad = validate_idempotent_family(a, fam.elements)
    if bad:
        raise InvalidFamily("not a complete orthogonal idempotent family", bad)
    n = alg_dim(a)
    elems = fam.elements
    names = tuple(f"p{i}" for i in range(len(elems)))
    bases: Dict[Tuple[str, str], List[List[Scalar]]] = {}
    for i, pi in enumerate(elems):
        li = left_mul_matrix(a, pi)
        for j, pj in enumerate(elems):
            rj = right_mul_matrix(a, pj)
            bases[(names[i], names[j])] = image_basis(rj.matmul(li))
    dims = {key: len(b) for key, b in bases.items()}
    graph = GraphType(names, dims)

    def coords_in(key: Tuple[str, str], vec: Sequence[Scalar]) -> List[Scalar]:
        basis = bases[key]
        m = Matrix(n, len(basis), tuple(basis[t][r] for r in range(n) for t in range(len(basis))), k)
        sol = solve(m, list(vec))
        if sol is None:
            raise InvalidFamily("subspace bases do not close under product", [])
        return sol

    mult = {}
    for xi in names:
        for yi in names:
            if dims[(xi, yi)] == 0:
                continue
            for zi in names:
                if dims[(yi, zi)] == 0 or dims[(xi, zi)] == 0:
                    continue
                block = []
                for u in bases[(xi, yi)]:
                    rowl = []
                    for v in bases[(yi, zi)]:
                        rowl.append(coords_in((xi, zi), alg_mul(a, u, v)))
                    block.append(rowl)
                mult[(xi, yi, zi)] = block
    units = {names[i]: coords_in((names[i], names[i]), elems[i]) for i in range(len(elems))}
    return new_lincat(k, graph, mult, units)
