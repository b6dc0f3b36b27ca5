"""Idempotent lifting across the square-zero extension k[eps]/(eps^2).

An element that is idempotent modulo eps lifts to an exactly idempotent
element by a single polynomial correction, because the error term
squares to zero.  A complete orthogonal family lifts by conjugating each
new element away from the sum of the previous ones and re-lifting; the
last element is the complement of the rest.  Every output is re-checked
exactly before it is returned, so a wrong correction cannot escape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from .core import (
    GraphType,
    IdempotentFamily,
    LinCat,
    alg_dim,
    alg_mul,
    alg_unit,
    new_lincat,
    only_object,
    validate_idempotent_family,
)
from .errors import (
    AxiomViolation,
    InvalidFamily,
    NotIdempotentModEps,
    ShapeMismatch,
)
from .fields import DualNumbers, FieldSpec, Scalar


# dual-number matrices --------------------------------------------------------


@dataclass(frozen=True)
class DualMatrix:
    """Square matrix over k[eps]/(eps^2); entries are (value, eps part) pairs."""

    ring: DualNumbers
    n: int
    entries: Tuple[Tuple[Scalar, ...], ...]

    def at(self, i: int, j: int) -> Scalar:
        return self.entries[i][j]

    def matmul(self, other: "DualMatrix") -> "DualMatrix":
        r = self.ring
        n = self.n
        if other.n != n:
            raise ShapeMismatch("matrix sizes differ")
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = r.zero
                for l in range(n):
                    acc = r.add(acc, r.mul(self.entries[i][l], other.entries[l][j]))
                row.append(acc)
            rows.append(tuple(row))
        return DualMatrix(r, n, tuple(rows))

    def add(self, other: "DualMatrix") -> "DualMatrix":
        r = self.ring
        return DualMatrix(
            r,
            self.n,
            tuple(
                tuple(r.add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def sub(self, other: "DualMatrix") -> "DualMatrix":
        r = self.ring
        return DualMatrix(
            r,
            self.n,
            tuple(
                tuple(r.sub(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def scale_int(self, c: int) -> "DualMatrix":
        r = self.ring
        f = r.from_int(c)
        return DualMatrix(
            r, self.n, tuple(tuple(r.mul(f, a) for a in row) for row in self.entries)
        )

    def equals(self, other: "DualMatrix") -> bool:
        r = self.ring
        return self.n == other.n and all(
            r.eq(a, b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def is_zero(self) -> bool:
        r = self.ring
        return all(r.is_zero(a) for row in self.entries for a in row)

    def reduction(self) -> List[List[Scalar]]:
        """The matrix of values at eps = 0."""
        return [[a[0] for a in row] for row in self.entries]

    def eps_component(self) -> List[List[Scalar]]:
        return [[a[1] for a in row] for row in self.entries]


def dual_identity(ring: DualNumbers, n: int) -> DualMatrix:
    return DualMatrix(
        ring, n, tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n))
    )


def new_dual_matrix(ring: Union[FieldSpec, DualNumbers], rows: Sequence[Sequence]) -> DualMatrix:
    """Entries may be ints, base scalars, or (value, eps) pairs."""
    r = ring if isinstance(ring, DualNumbers) else DualNumbers(ring)
    n = len(rows)
    ent = []
    for row in rows:
        if len(row) != n:
            raise ShapeMismatch("dual matrix must be square")
        ent.append(tuple(r.parse(v) for v in row))
    return DualMatrix(r, n, tuple(ent))


def lift_idempotent(p: DualMatrix) -> DualMatrix:
    """The exactly idempotent q = p + (p^2-p)(1-2p)(1-4(p^2-p)).

    Requires p to be idempotent at eps = 0; the returned q agrees with p
    at eps = 0 and the correction commutes with p.
    """
    r = p.ring
    base = r.base
    e = p.matmul(p).sub(p)
    if any(not base.is_zero(v) for row in e.reduction() for v in row):
        raise NotIdempotentModEps("matrix is not idempotent at eps = 0")
    ident = dual_identity(r, p.n)
    k = e.matmul(ident.sub(p.scale_int(2))).matmul(ident.sub(e.scale_int(4)))
    q = p.add(k)
    _check(q.matmul(q).equals(q), "lifted matrix fails q*q = q")
    _check(
        all(base.eq(a, b) for ra, rb in zip(q.reduction(), p.reduction()) for a, b in zip(ra, rb)),
        "lifted matrix moved at eps = 0",
    )
    _check(k.matmul(p).equals(p.matmul(k)), "correction does not commute with the input")
    return q


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise AxiomViolation(message, [])


# element lifting inside a dual-number algebra --------------------------------


def _dual_ring(b: LinCat) -> DualNumbers:
    if not isinstance(b.field, DualNumbers):
        raise ShapeMismatch("algebra is not defined over dual numbers")
    return b.field


def _coerce_base(k: FieldSpec, v) -> Scalar:
    return k.from_int(v) if isinstance(v, int) else v


def _coerce_dual(r: DualNumbers, v) -> Scalar:
    if isinstance(v, (tuple, list)):
        if len(v) == 2 and not any(isinstance(part, (tuple, list)) for part in v):
            return (_coerce_base(r.base, v[0]), _coerce_base(r.base, v[1]))
        raise ShapeMismatch("scalar must be a base value or a (value, eps) pair")
    return (_coerce_base(r.base, v), r.base.zero)


def reduction_algebra(b: LinCat) -> LinCat:
    """The value of a dual-number category at eps = 0."""
    r = _dual_ring(b)
    mult = {
        key: tuple(tuple(tuple(v[0] for v in cell) for cell in row) for row in t)
        for key, t in b.mult.items()
    }
    units = {x: tuple(v[0] for v in u) for x, u in b.units.items()}
    graph = GraphType(b.objects, dict(b.graph.dims))
    return new_lincat(r.base, graph, mult, units)


def embed_base_vector(b: LinCat, vec: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    """Coordinates over the base field, embedded with zero eps part."""
    r = _dual_ring(b)
    return tuple(r.lift(v if not isinstance(v, int) else r.base.from_int(v)) for v in vec)


def _vec_sub(r, u, v):
    return tuple(r.sub(a, b) for a, b in zip(u, v))


def _vec_add(r, u, v):
    return tuple(r.add(a, b) for a, b in zip(u, v))


def _vec_int(r, c: int, u):
    f = r.from_int(c)
    return tuple(r.mul(f, a) for a in u)


def lift_algebra_idempotent(b: LinCat, p: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    """lift_idempotent for an element of a one-object dual-number algebra."""
    r = _dual_ring(b)
    n = alg_dim(b)
    p = tuple(_coerce_dual(r, v) for v in p)
    if len(p) != n:
        raise ShapeMismatch("element length does not match the algebra dimension")
    e = _vec_sub(r, alg_mul(b, p, p), p)
    if any(not r.base.is_zero(v[0]) for v in e):
        raise NotIdempotentModEps("element is not idempotent at eps = 0")
    unit = alg_unit(b)
    t1 = _vec_sub(r, unit, _vec_int(r, 2, p))
    t2 = _vec_sub(r, unit, _vec_int(r, 4, e))
    k = alg_mul(b, alg_mul(b, e, t1), t2)
    q = _vec_add(r, p, k)
    _check(
        all(r.eq(a, c) for a, c in zip(alg_mul(b, q, q), q)),
        "lifted element fails q*q = q",
    )
    _check(all(r.base.eq(a[0], c[0]) for a, c in zip(q, p)), "lifted element moved at eps = 0")
    return q


def lift_orthogonal_family(b: LinCat, fam: Union[IdempotentFamily, Sequence[Sequence[Scalar]]]):
    """Lift a complete orthogonal idempotent family of the eps = 0 reduction.

    The inputs are elements of b whose values at eps = 0 form a complete
    orthogonal family; their eps parts are arbitrary first guesses (zero
    eps parts give the plain embedding).  Each input is lifted on its
    own, conjugated by (1 - s) on both sides (s the sum of the lifts
    already accepted) to restore exact orthogonality, and lifted once
    more; the last element is 1 - s.  The finished family is validated
    exactly over the dual numbers.
    """
    r = _dual_ring(b)
    red = reduction_algebra(b)
    raw = fam.elements if isinstance(fam, IdempotentFamily) else tuple(fam)
    elements = tuple(tuple(_coerce_dual(r, v) for v in e) for e in raw)
    if any(len(e) != alg_dim(b) for e in elements):
        raise ShapeMismatch("element length does not match the algebra dimension")
    reductions = tuple(tuple(v[0] for v in e) for e in elements)
    bad = validate_idempotent_family(red, reductions)
    if bad:
        raise InvalidFamily("reductions are not a complete orthogonal family", bad)
    n_elems = len(elements)
    unit = alg_unit(b)
    s = tuple(r.zero for _ in range(alg_dim(b)))
    out: List[Tuple[Scalar, ...]] = []
    for i in range(n_elems - 1):
        q1 = lift_algebra_idempotent(b, elements[i])
        comp = _vec_sub(r, unit, s)
        q2 = alg_mul(b, alg_mul(b, comp, q1), comp)
        k = lift_algebra_idempotent(b, q2)
        _check(
            all(r.is_zero(v) for v in alg_mul(b, s, k))
            and all(r.is_zero(v) for v in alg_mul(b, k, s)),
            "corrected lift is not orthogonal to the accumulated sum",
        )
        out.append(k)
        s = _vec_add(r, s, k)
    if n_elems:
        out.append(_vec_sub(r, unit, s))
    for got, want in zip(out, reductions):
        _check(
            all(r.base.eq(a[0], w) for a, w in zip(got, want)),
            "lifted family moved at eps = 0",
        )
    bad = validate_idempotent_family(b, out)
    if bad:
        raise AxiomViolation("lifted family fails exact verification", bad)
    return IdempotentFamily(b, tuple(tuple(v) for v in out))


def lift_projective_presentation(
    d: LinCat, p: Union[Sequence[Scalar], Sequence[Sequence[Sequence[Scalar]]]]
):
    """Lift a presentation projector along the square-zero extension.

    p is an idempotent at eps = 0 (eps parts allowed and corrected):
    either one element of the algebra, or a square matrix of elements
    presenting a projective module of higher rank.  The lift has the
    same shape, squares to itself exactly, and reduces back to p at
    eps = 0, so the presented module reduces back to the one p presents.
    """
    r = _dual_ring(d)
    n = alg_dim(d)
    # a matrix is rows of cells, each cell a coordinate vector
    is_matrix = bool(p) and isinstance(p[0], (list, tuple)) and bool(p[0]) and isinstance(
        p[0][0], (list, tuple)
    )
    if not is_matrix:
        return lift_algebra_idempotent(d, p)
    rank = len(p)
    mat = [[tuple(_coerce_dual(r, v) for v in cell) for cell in row] for row in p]
    if any(len(row) != rank for row in mat):
        raise ShapeMismatch("presentation projector must be square")

    def mm(a, bb):
        out = []
        for i in range(rank):
            row = []
            for j in range(rank):
                acc = tuple(r.zero for _ in range(n))
                for l in range(rank):
                    acc = _vec_add(r, acc, alg_mul(d, a[i][l], bb[l][j]))
                row.append(acc)
            out.append(row)
        return out

    def msub(a, bb):
        return [[_vec_sub(r, x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, bb)]

    def madd(a, bb):
        return [[_vec_add(r, x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, bb)]

    def mint(c, a):
        return [[_vec_int(r, c, x) for x in row] for row in a]

    unit = alg_unit(d)
    zero = tuple(r.zero for _ in range(n))
    ident = [[tuple(unit) if i == j else zero for j in range(rank)] for i in range(rank)]
    e = msub(mm(mat, mat), mat)
    if any(not r.base.is_zero(v[0]) for row in e for cell in row for v in cell):
        raise NotIdempotentModEps("presentation is not idempotent at eps = 0")
    k = mm(mm(e, msub(ident, mint(2, mat))), msub(ident, mint(4, e)))
    q = madd(mat, k)
    diff = msub(mm(q, q), q)
    _check(
        all(r.is_zero(v) for row in diff for cell in row for v in cell),
        "lifted presentation fails q*q = q",
    )
    _check(
        all(
            r.base.eq(a[0], m[0])
            for rq, rm in zip(q, mat)
            for ca, cm in zip(rq, rm)
            for a, m in zip(ca, cm)
        ),
        "lifted presentation moved at eps = 0",
    )
    return q
