"""Polynomial presentations of the schemes classifying structure constants.

Fixing a dimension pattern, the valid structure tensors form an affine
scheme cut out by integer polynomials: associativity and unit equations
for categories, commutators for commutative algebras, and analogous
systems for functors, natural transformations, and two-sided actions.
This module emits those systems as explicit data, linearizes them at a
point to get the tangent space, checks that normalized 2-cocycles land
in the tangent space of the category scheme, and enumerates points over
tiny finite fields by exhaustion.

Equation text grammar (one equation per line, byte-stable):

    line     := '#' comment | equation
    equation := '0' | term (' + ' term)*
    term     := integer ['*' variable]*
    variable := m[x,y,z][k,i,j] | u[x][i] | f[x,y][i,j] | a[x][i]
              | mu[l][i,j,k]

Object names appear verbatim inside brackets; basis indices are
1-based.  Monomials are sorted (higher degree first, then by variable
names) and like terms are combined, so equal polynomials render to
equal bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import lcm
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .core import GraphType, LinCat, compose, new_lincat
from .errors import BadParams, NotAPoint, SearchTooLarge
from .fields import GF, QQ, DualNumbers, FieldSpec, Scalar
from .functors import LinFunctor
from .hochschild import cochain_blocks, differential_matrix, normalized_two_cocycles, _flat
from .kernels import enumerate_points_kernel
from .linalg import Matrix, kernel_basis, rank

Monomial = Tuple[str, ...]


@dataclass(frozen=True)
class Poly:
    """Integer-coefficient polynomial; terms are (sorted monomial, coefficient)."""

    terms: Tuple[Tuple[Monomial, int], ...]

    def variables(self) -> Tuple[str, ...]:
        seen = []
        for mono, _ in self.terms:
            for v in mono:
                if v not in seen:
                    seen.append(v)
        return tuple(seen)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in self.terms:
            parts.append(str(coef) if not mono else str(coef) + "*" + "*".join(mono))
        return " + ".join(parts)

    def evaluate(self, k: FieldSpec, values: Mapping[str, Scalar]) -> Scalar:
        acc = k.zero
        for mono, coef in self.terms:
            term = k.from_int(coef)
            for v in mono:
                term = k.mul(term, values[v])
            acc = k.add(acc, term)
        return acc

    def derivative(self, var: str) -> "Poly":
        out: Dict[Monomial, int] = {}
        for mono, coef in self.terms:
            mult = mono.count(var)
            if not mult:
                continue
            rest = list(mono)
            rest.remove(var)
            key = tuple(rest)
            out[key] = out.get(key, 0) + coef * mult
        return _freeze(out)


def _freeze(terms: Dict[Monomial, Union[int, Fraction]]) -> Poly:
    cleaned = {m: c for m, c in terms.items() if c}
    if any(isinstance(c, Fraction) for c in cleaned.values()):
        denom = lcm(*(Fraction(c).denominator for c in cleaned.values()))
        cleaned = {m: int(Fraction(c) * denom) for m, c in cleaned.items()}
    ordered = sorted(cleaned.items(), key=lambda item: (-len(item[0]), item[0]))
    return Poly(tuple((m, int(c)) for m, c in ordered))


@dataclass(frozen=True)
class PolySystem:
    """Declared variables plus labelled equation sections.

    ``inverted_minors`` is reserved for determinant symbols marking open
    subloci; every system emitted here leaves it empty.
    """

    variables: Tuple[str, ...]
    sections: Tuple[Tuple[str, Tuple[Poly, ...]], ...]
    inverted_minors: Tuple[str, ...] = ()

    @property
    def equations(self) -> Tuple[Poly, ...]:
        return tuple(p for _, polys in self.sections for p in polys)

    def text(self) -> str:
        lines: List[str] = []
        for label, polys in self.sections:
            lines.append("# " + label)
            for p in polys:
                lines.append(p.render())
        for name in self.inverted_minors:
            lines.append("# inverted minor: " + name)
        return "\n".join(lines) + "\n"


def _new_system(
    variables: Sequence[str],
    sections: Sequence[Tuple[str, Sequence[Poly]]],
    minors: Sequence[str] = (),
) -> PolySystem:
    declared = set(variables)
    for label, polys in sections:
        for p in polys:
            for v in p.variables():
                if v not in declared:
                    raise BadParams(f"equation in section {label!r} uses undeclared {v}")
    return PolySystem(
        tuple(variables),
        tuple((label, tuple(polys)) for label, polys in sections),
        tuple(minors),
    )


# variable names ---------------------------------------------------------------

_NAME_BREAKERS = re.compile(r"[\[\],#\s]")


def _check_object_names(objects: Sequence[str]) -> None:
    for x in objects:
        if not x or _NAME_BREAKERS.search(x):
            raise BadParams(f"object name {x!r} cannot appear inside a variable name")


def _mv(x: str, y: str, z: str, k: int, i: int, j: int) -> str:
    return f"m[{x},{y},{z}][{k},{i},{j}]"


def _uv(x: str, i: int) -> str:
    return f"u[{x}][{i}]"


def _fv(x: str, y: str, i: int, j: int) -> str:
    return f"f[{x},{y}][{i},{j}]"


def _av(x: str, i: int) -> str:
    return f"a[{x}][{i}]"


def _muv(l: int, i: int, j: int, k: int) -> str:
    return f"mu[{l}][{i},{j},{k}]"


# scheme emitters --------------------------------------------------------------


def _as_graph(d) -> GraphType:
    if isinstance(d, LinCat):
        return d.graph
    if isinstance(d, GraphType):
        return d
    if isinstance(d, int):
        if d < 0:
            raise BadParams("dimension must be nonnegative")
        return GraphType(("1",), {("1", "1"): d})
    raise BadParams("expected a category, a graph, or a single dimension")


def _dim(g: GraphType, x: str, y: str) -> int:
    return g.dims.get((x, y), 0)


def _cat_variables(g: GraphType) -> List[str]:
    names: List[str] = []
    for x, y, z in iproduct(g.objects, repeat=3):
        dxy, dyz, dxz = _dim(g, x, y), _dim(g, y, z), _dim(g, x, z)
        if dxy and dyz and dxz:
            for k in range(1, dxz + 1):
                for i in range(1, dxy + 1):
                    for j in range(1, dyz + 1):
                        names.append(_mv(x, y, z, k, i, j))
    for x in g.objects:
        for i in range(1, _dim(g, x, x) + 1):
            names.append(_uv(x, i))
    return names


def _associativity(g: GraphType) -> List[Poly]:
    eqs: List[Poly] = []
    for x, y, z, w in iproduct(g.objects, repeat=4):
        dxy, dyz, dzw, dxw = _dim(g, x, y), _dim(g, y, z), _dim(g, z, w), _dim(g, x, w)
        dxz, dyw = _dim(g, x, z), _dim(g, y, w)
        if not (dxy and dyz and dzw and dxw):
            continue
        for k in range(1, dxw + 1):
            for i in range(1, dxy + 1):
                for j in range(1, dyz + 1):
                    for l in range(1, dzw + 1):
                        terms: Dict[Monomial, int] = {}
                        for t in range(1, dxz + 1):
                            mono = tuple(sorted((_mv(x, y, z, t, i, j), _mv(x, z, w, k, t, l))))
                            terms[mono] = terms.get(mono, 0) + 1
                        for t in range(1, dyw + 1):
                            mono = tuple(sorted((_mv(y, z, w, t, j, l), _mv(x, y, w, k, i, t))))
                            terms[mono] = terms.get(mono, 0) - 1
                        eqs.append(_freeze(terms))
    return eqs


def _unit_equations(g: GraphType) -> Tuple[List[Poly], List[Poly]]:
    left: List[Poly] = []
    right: List[Poly] = []
    for x, y in iproduct(g.objects, repeat=2):
        dxy = _dim(g, x, y)
        if not dxy:
            continue
        dxx, dyy = _dim(g, x, x), _dim(g, y, y)
        for k in range(1, dxy + 1):
            for j in range(1, dxy + 1):
                terms: Dict[Monomial, int] = {}
                for i in range(1, dxx + 1):
                    mono = tuple(sorted((_uv(x, i), _mv(x, x, y, k, i, j))))
                    terms[mono] = terms.get(mono, 0) + 1
                if j == k:
                    terms[()] = terms.get((), 0) - 1
                left.append(_freeze(terms))
        for k in range(1, dxy + 1):
            for j in range(1, dxy + 1):
                terms = {}
                for i in range(1, dyy + 1):
                    mono = tuple(sorted((_uv(y, i), _mv(x, y, y, k, j, i))))
                    terms[mono] = terms.get(mono, 0) + 1
                if j == k:
                    terms[()] = terms.get((), 0) - 1
                right.append(_freeze(terms))
    return left, right


def _cat_system(g: GraphType) -> PolySystem:
    _check_object_names(g.objects)
    left, right = _unit_equations(g)
    return _new_system(
        _cat_variables(g),
        [
            ("associativity", _associativity(g)),
            ("left units", left),
            ("right units", right),
        ],
    )


def _ass_system(n: int) -> PolySystem:
    g = _as_graph(n)
    names = [
        _mv("1", "1", "1", k, i, j)
        for k in range(1, n + 1)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    ]
    return _new_system(names, [("associativity", _associativity(g))])


def _com_system(n: int) -> PolySystem:
    g = _as_graph(n)
    sys = _cat_system(g)
    comm: List[Poly] = []
    o = "1"
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                comm.append(
                    _freeze({(_mv(o, o, o, k, i, j),): 1, (_mv(o, o, o, k, j, i),): -1})
                )
    return _new_system(sys.variables, list(sys.sections) + [("commutators", comm)])


def _base_scalar_to_coef(k: FieldSpec, v: Scalar) -> Union[int, Fraction]:
    if isinstance(k, DualNumbers):
        raise BadParams("scheme emission needs categories over a plain field")
    return v if k.kind == "Q" else int(v)


def _require_same_base(a: LinCat, b: LinCat) -> FieldSpec:
    if isinstance(a.field, DualNumbers) or isinstance(b.field, DualNumbers):
        raise BadParams("scheme emission needs categories over a plain field")
    if a.field != b.field:
        raise BadParams("both categories must share one base field")
    return a.field


def _basis_vec(k: FieldSpec, n: int, i: int) -> List[Scalar]:
    v = [k.zero] * n
    v[i] = k.one
    return v


def _struct_coefs(c: LinCat, x: str, y: str, z: str, i: int, j: int) -> List[Scalar]:
    """Coordinates of (basis i of hom(x,y)) then (basis j of hom(y,z))."""
    k = c.field
    ei = _basis_vec(k, c.d(x, y), i)
    ej = _basis_vec(k, c.d(y, z), j)
    return compose(c, x, y, z, ei, ej)


def _fct_system(c: LinCat, d: LinCat) -> PolySystem:
    base = _require_same_base(c, d)
    if c.objects != d.objects:
        raise BadParams("functor equations fix the object map to the identity")
    _check_object_names(c.objects)
    names: List[str] = []
    for x, y in iproduct(c.objects, repeat=2):
        if c.d(x, y) and d.d(x, y):
            for i in range(1, d.d(x, y) + 1):
                for j in range(1, c.d(x, y) + 1):
                    names.append(_fv(x, y, i, j))
    comp: List[Poly] = []
    for x, y, z in iproduct(c.objects, repeat=3):
        if not (c.d(x, y) and c.d(y, z) and d.d(x, z)):
            continue
        for k in range(1, d.d(x, z) + 1):
            for i in range(1, c.d(x, y) + 1):
                for j in range(1, c.d(y, z) + 1):
                    terms: Dict[Monomial, Union[int, Fraction]] = {}
                    if c.d(x, z):
                        coords = _struct_coefs(c, x, y, z, i - 1, j - 1)
                        for t in range(1, c.d(x, z) + 1):
                            coef = _base_scalar_to_coef(base, coords[t - 1])
                            if coef:
                                mono = (_fv(x, z, k, t),)
                                terms[mono] = terms.get(mono, 0) + coef
                    for a in range(1, d.d(x, y) + 1):
                        for b in range(1, d.d(y, z) + 1):
                            coef = _base_scalar_to_coef(
                                base, _struct_coefs(d, x, y, z, a - 1, b - 1)[k - 1]
                            )
                            if coef:
                                mono = tuple(sorted((_fv(x, y, a, i), _fv(y, z, b, j))))
                                terms[mono] = terms.get(mono, 0) - coef
                    comp.append(_freeze(terms))
    units: List[Poly] = []
    for x in c.objects:
        if not d.d(x, x):
            continue
        for k in range(1, d.d(x, x) + 1):
            terms = {}
            for i in range(1, c.d(x, x) + 1):
                coef = _base_scalar_to_coef(base, c.units[x][i - 1])
                if coef:
                    mono = (_fv(x, x, k, i),)
                    terms[mono] = terms.get(mono, 0) + coef
            const = _base_scalar_to_coef(base, d.units[x][k - 1])
            if const:
                terms[()] = terms.get((), 0) - const
            units.append(_freeze(terms))
    return _new_system(names, [("composition", comp), ("units image", units)])


def _tn_system(f: LinFunctor, g: LinFunctor) -> PolySystem:
    if f.src is not g.src or f.dst is not g.dst:
        raise BadParams("transformations need functors sharing source and target")
    c, d = f.src, f.dst
    base = _require_same_base(c, d)
    _check_object_names(c.objects)
    names: List[str] = []
    for x in c.objects:
        for i in range(1, d.d(f.obj(x), g.obj(x)) + 1):
            names.append(_av(x, i))
    nat: List[Poly] = []
    for x, y in iproduct(c.objects, repeat=2):
        dc = c.d(x, y)
        if not dc:
            continue
        fx, fy, gx, gy = f.obj(x), f.obj(y), g.obj(x), g.obj(y)
        if not d.d(fx, gy):
            continue
        for k in range(1, d.d(fx, gy) + 1):
            for j in range(1, dc + 1):
                terms: Dict[Monomial, Union[int, Fraction]] = {}
                fcol = f.apply(x, y, _basis_vec(base, dc, j - 1))
                for t in range(1, d.d(fx, fy) + 1):
                    ft = _base_scalar_to_coef(base, fcol[t - 1])
                    if not ft:
                        continue
                    for s in range(1, d.d(fy, gy) + 1):
                        coef = ft * _base_scalar_to_coef(
                            base, _struct_coefs(d, fx, fy, gy, t - 1, s - 1)[k - 1]
                        )
                        if coef:
                            mono = (_av(y, s),)
                            terms[mono] = terms.get(mono, 0) + coef
                gcol = g.apply(x, y, _basis_vec(base, dc, j - 1))
                for s in range(1, d.d(fx, gx) + 1):
                    for t in range(1, d.d(gx, gy) + 1):
                        gt = _base_scalar_to_coef(base, gcol[t - 1])
                        if not gt:
                            continue
                        coef = gt * _base_scalar_to_coef(
                            base, _struct_coefs(d, fx, gx, gy, s - 1, t - 1)[k - 1]
                        )
                        if coef:
                            mono = (_av(x, s),)
                            terms[mono] = terms.get(mono, 0) - coef
                nat.append(_freeze(terms))
    return _new_system(names, [("naturality", nat)])


def _only(c: LinCat, what: str) -> str:
    if len(c.objects) != 1:
        raise BadParams(f"{what} must have exactly one object")
    return c.objects[0]


def _bim_system(b: LinCat, c: LinCat, m: int) -> PolySystem:
    base = _require_same_base(b, c)
    ob, oc = _only(b, "left algebra"), _only(c, "right algebra")
    if not isinstance(m, int) or m < 0:
        raise BadParams("middle dimension must be a nonnegative integer")
    db, dc = b.d(ob, ob), c.d(oc, oc)
    names = [
        _muv(l, i, j, k)
        for l in range(1, m + 1)
        for i in range(1, db + 1)
        for j in range(1, m + 1)
        for k in range(1, dc + 1)
    ]
    eqs: List[Poly] = []
    for i1 in range(1, db + 1):
        for i2 in range(1, db + 1):
            bb = _struct_coefs(b, ob, ob, ob, i1 - 1, i2 - 1)
            for j in range(1, m + 1):
                for k2 in range(1, dc + 1):
                    for k1 in range(1, dc + 1):
                        cc = _struct_coefs(c, oc, oc, oc, k2 - 1, k1 - 1)
                        for l in range(1, m + 1):
                            terms: Dict[Monomial, Union[int, Fraction]] = {}
                            for t in range(1, m + 1):
                                mono = tuple(
                                    sorted((_muv(t, i2, j, k2), _muv(l, i1, t, k1)))
                                )
                                terms[mono] = terms.get(mono, 0) + 1
                            for s in range(1, db + 1):
                                cs = _base_scalar_to_coef(base, bb[s - 1])
                                if not cs:
                                    continue
                                for u in range(1, dc + 1):
                                    coef = cs * _base_scalar_to_coef(base, cc[u - 1])
                                    if coef:
                                        mono = (_muv(l, s, j, u),)
                                        terms[mono] = terms.get(mono, 0) - coef
                            eqs.append(_freeze(terms))
    return _new_system(names, [("action compatibility", eqs)])


def emit_system(kind: str, *params) -> PolySystem:
    """Emit the polynomial system of the named classifying scheme.

    kinds: ``cat`` (graph, category, or one-object dimension), ``ass``
    (dimension, no units), ``com`` (one-object dimension plus
    commutators), ``fct`` (two categories on the same objects), ``tn``
    (two functors sharing endpoints), ``bim`` (two one-object algebras
    and a middle dimension).  Identical parameters give byte-identical
    ``text()`` output.
    """
    if kind == "cat":
        if len(params) != 1:
            raise BadParams("cat takes one parameter")
        return _cat_system(_as_graph(params[0]))
    if kind == "ass":
        if len(params) != 1 or not isinstance(params[0], int) or params[0] < 0:
            raise BadParams("ass takes one nonnegative dimension")
        return _ass_system(params[0])
    if kind == "com":
        if len(params) != 1 or not isinstance(params[0], int) or params[0] < 0:
            raise BadParams("com takes one nonnegative dimension")
        return _com_system(params[0])
    if kind == "fct":
        if len(params) != 2 or not all(isinstance(p, LinCat) for p in params):
            raise BadParams("fct takes two categories")
        return _fct_system(params[0], params[1])
    if kind == "tn":
        if len(params) != 2 or not all(isinstance(p, LinFunctor) for p in params):
            raise BadParams("tn takes two functors")
        return _tn_system(params[0], params[1])
    if kind == "bim":
        if len(params) != 3 or not all(isinstance(p, LinCat) for p in params[:2]):
            raise BadParams("bim takes two algebras and a dimension")
        return _bim_system(params[0], params[1], params[2])
    raise BadParams(f"unknown system kind {kind!r}")


# tangent spaces ---------------------------------------------------------------


@dataclass(frozen=True)
class TangentSpace:
    variables: Tuple[str, ...]
    basis: Tuple[Tuple[Scalar, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _coerce_point(k: FieldSpec, sys: PolySystem, point: Mapping) -> Dict[str, Scalar]:
    values: Dict[str, Scalar] = {}
    for name in sys.variables:
        if name not in point:
            raise BadParams(f"point does not assign {name}")
        v = point[name]
        values[name] = k.parse(v) if isinstance(v, (int, str)) else v
    for name in point:
        if name not in values:
            raise BadParams(f"point assigns unknown variable {name}")
    return values


def _residuals(k: FieldSpec, sys: PolySystem, values: Mapping[str, Scalar]) -> List[str]:
    bad: List[str] = []
    idx = 0
    for label, polys in sys.sections:
        for p in polys:
            r = p.evaluate(k, values)
            if not k.is_zero(r):
                bad.append(f"equation {idx} ({label}): residual {k.fmt(r)}")
            idx += 1
    return bad


def _jacobian(k: FieldSpec, sys: PolySystem, values: Mapping[str, Scalar]) -> Matrix:
    rows = []
    for p in sys.equations:
        row = [p.derivative(v).evaluate(k, values) for v in sys.variables]
        rows.append(row)
    if not rows:
        rows = [[k.zero for _ in sys.variables]]
    return Matrix.from_rows(k, rows)


def tangent_space(sys: PolySystem, point: Mapping, field: FieldSpec = QQ) -> TangentSpace:
    """Kernel of the Jacobian at an exact solution of the system."""
    values = _coerce_point(field, sys, point)
    bad = _residuals(field, sys, values)
    if bad:
        raise NotAPoint("assignment does not satisfy the system", bad)
    basis = kernel_basis(_jacobian(field, sys, values))
    return TangentSpace(sys.variables, tuple(tuple(v) for v in basis))


# the cocycle inclusion check --------------------------------------------------


def structure_point(c: LinCat) -> Dict[str, Scalar]:
    """The assignment giving c's own structure constants."""
    point: Dict[str, Scalar] = {}
    for x, y, z in iproduct(c.objects, repeat=3):
        dxy, dyz, dxz = c.d(x, y), c.d(y, z), c.d(x, z)
        if not (dxy and dyz and dxz):
            continue
        tensor = c.mult[(x, y, z)]
        for k in range(dxz):
            for i in range(dxy):
                for j in range(dyz):
                    point[_mv(x, y, z, k + 1, i + 1, j + 1)] = tensor[i][j][k]
    for x in c.objects:
        for i in range(c.d(x, x)):
            point[_uv(x, i + 1)] = c.units[x][i]
    return point


@dataclass(frozen=True)
class InclusionReport:
    dim_cocycles: int
    dim_normalized: int
    dim_tangent: int
    included: bool
    failures: Tuple[str, ...]


def check_hz2_inclusion(c: LinCat) -> InclusionReport:
    """Normalized 2-cocycles, paired with a zero unit direction, are
    tangent vectors of the category scheme at c.

    Unit coordinates are genuine scheme variables, so the tangent space
    can be larger than the cocycle space; the checked statement is the
    inclusion, not an equality.
    """
    if isinstance(c.field, DualNumbers):
        raise BadParams("scheme emission needs categories over a plain field")
    k = c.field
    sys = emit_system("cat", c.graph)
    point = structure_point(c)
    values = _coerce_point(k, sys, point)
    bad = _residuals(k, sys, values)
    if bad:
        raise NotAPoint("category does not satisfy its own scheme equations", bad)
    jac = _jacobian(k, sys, values)
    dim_tangent = len(sys.variables) - rank(jac)
    d2 = differential_matrix(c, 2)
    dim_cocycles = d2.cols - rank(d2)
    normalized = normalized_two_cocycles(c)
    var_index = {name: t for t, name in enumerate(sys.variables)}
    blocks = cochain_blocks(c, 2)
    failures: List[str] = []
    for n_idx, vec in enumerate(normalized):
        tangent_vec = [k.zero] * len(sys.variables)
        for bl in blocks:
            x, y, z = bl.objs
            for i in range(bl.arg_dims[0]):
                for j in range(bl.arg_dims[1]):
                    for out in range(bl.out_dim):
                        val = vec[_flat(bl, (i, j), out)]
                        if not k.is_zero(val):
                            tangent_vec[var_index[_mv(x, y, z, out + 1, i + 1, j + 1)]] = val
        image = jac.apply(tangent_vec)
        nonzero = [t for t, v in enumerate(image) if not k.is_zero(v)]
        if nonzero:
            failures.append(
                f"normalized cocycle {n_idx} violates linearized equations {nonzero[:4]}"
            )
    return InclusionReport(
        dim_cocycles=dim_cocycles,
        dim_normalized=len(normalized),
        dim_tangent=dim_tangent,
        included=not failures,
        failures=tuple(failures),
    )


# point enumeration ------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationResult:
    variables: Tuple[str, ...]
    count: int
    points: Tuple[Tuple[int, ...], ...]


_M_VAR = re.compile(r"^m\[([^,\]]+),([^,\]]+),([^,\]]+)\]\[(\d+),(\d+),(\d+)\]$")
_U_VAR = re.compile(r"^u\[([^,\]]+)\]\[(\d+)\]$")


def _reconstruct_graph(variables: Sequence[str]) -> Union[GraphType, None]:
    objects: List[str] = []
    dims: Dict[Tuple[str, str], int] = {}

    def see(x: str) -> None:
        if x not in objects:
            objects.append(x)

    def grow(x: str, y: str, n: int) -> None:
        dims[(x, y)] = max(dims.get((x, y), 0), n)

    for name in variables:
        mm = _M_VAR.match(name)
        if mm:
            x, y, z = mm.group(1), mm.group(2), mm.group(3)
            k, i, j = int(mm.group(4)), int(mm.group(5)), int(mm.group(6))
            see(x), see(y), see(z)
            grow(x, y, i), grow(y, z, j), grow(x, z, k)
            continue
        mu = _U_VAR.match(name)
        if mu:
            see(mu.group(1))
            grow(mu.group(1), mu.group(1), int(mu.group(2)))
            continue
        return None
    for x, y in iproduct(objects, repeat=2):
        dims.setdefault((x, y), 0)
    return GraphType(tuple(objects), dims)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def enumerate_points(sys: PolySystem, p: int, cap: int = 1 << 24) -> EnumerationResult:
    """All solutions over the p-element field, by exhaustion.

    Points are value tuples aligned with sys.variables, listed in
    lexicographic order.  When the variables are exactly a category
    scheme's (m and u families), every point is rebuilt and re-validated
    through new_lincat before being reported.
    """
    if not _is_prime(p):
        raise BadParams("enumeration needs a prime modulus")
    nvars = len(sys.variables)
    if p ** nvars > cap:
        raise SearchTooLarge(f"{p}^{nvars} assignments exceed the cap of {cap}")
    # Kernel digit v is assignment slot nvars-1-v, so ascending codes come out
    # in the same lexicographic order as itertools.product would give.
    index = {name: nvars - 1 - t for t, name in enumerate(sys.variables)}
    nterms = sum(len(poly.terms) for poly in sys.equations)
    coefs = np.zeros(nterms, dtype=np.int64)
    exps = np.zeros((nterms, nvars), dtype=np.int64)
    eq_off = np.zeros(len(sys.equations) + 1, dtype=np.int64)
    ti = 0
    for e, poly in enumerate(sys.equations):
        for mono, coef in poly.terms:
            coefs[ti] = coef % p
            for v in mono:
                exps[ti, index[v]] += 1
            ti += 1
        eq_off[e + 1] = ti
    codes = enumerate_points_kernel(nvars, p, coefs, exps, eq_off)
    radix = [p ** (nvars - 1 - t) for t in range(nvars)]
    points: List[Tuple[int, ...]] = [
        tuple(int(code) // r % p for r in radix) for code in codes
    ]
    graph = _reconstruct_graph(sys.variables)
    if graph is not None and emit_system("cat", graph).variables == sys.variables:
        k = GF(p)
        for pt in points:
            _revalidate_category_point(k, graph, sys.variables, pt)
    return EnumerationResult(sys.variables, len(points), tuple(points))


def _revalidate_category_point(
    k: FieldSpec, g: GraphType, variables: Sequence[str], pt: Sequence[int]
) -> None:
    values = dict(zip(variables, pt))
    mult = {}
    for x, y, z in iproduct(g.objects, repeat=3):
        dxy, dyz, dxz = _dim(g, x, y), _dim(g, y, z), _dim(g, x, z)
        if not (dxy and dyz and dxz):
            continue
        mult[(x, y, z)] = tuple(
            tuple(
                tuple(
                    k.from_int(values[_mv(x, y, z, kk + 1, i + 1, j + 1)])
                    for kk in range(dxz)
                )
                for j in range(dyz)
            )
            for i in range(dxy)
        )
    units = {
        x: tuple(k.from_int(values[_uv(x, i + 1)]) for i in range(_dim(g, x, x)))
        for x in g.objects
        if _dim(g, x, x)
    }
    new_lincat(k, g, mult, units)
