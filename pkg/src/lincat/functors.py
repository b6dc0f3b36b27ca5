"""Linear functors, natural transformations, and equivalence checks.

A functor stores one matrix per hom pair, columns indexed by the source
basis; applying a functor to a coordinate vector is a matrix product.
Isomorphism-of-objects search is linear for one fixed forward morphism
(the two-sided inverse conditions are linear in the backward one), so the
nonlinear part reduces to picking forward candidates: exhaustively over
small prime fields, by seeded random trials over Q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import LinCat, compose, structural_equal
from .errors import AxiomViolation, NotComposable, ShapeMismatch, UnknownName
from .fields import DualNumbers, Scalar
from .linalg import Matrix, invert_dual, rank, solve, solve_dual


@dataclass
class LinFunctor:
    src: LinCat
    dst: LinCat
    object_map: Dict[str, str]
    matrices: Dict[Tuple[str, str], Matrix]

    def obj(self, x: str) -> str:
        return self.object_map[x]

    def apply(self, x: str, y: str, vec: Sequence[Scalar]) -> List[Scalar]:
        return self.matrices[(x, y)].apply(vec)


@dataclass
class NatTrans:
    f: LinFunctor
    g: LinFunctor
    components: Dict[str, tuple]


def _ring_solve(ring, mat: Matrix, b):
    if isinstance(ring, DualNumbers):
        return solve_dual(mat, b)
    return solve(mat, b)


def _basis(ring, n: int, i: int) -> List[Scalar]:
    v = [ring.zero] * n
    v[i] = ring.one
    return v


def validate_functor(f: LinFunctor) -> List[str]:
    src, dst, k = f.src, f.dst, f.dst.field
    out: List[str] = []
    for x in src.objects:
        fx = f.obj(x)
        mat = f.matrices[(x, x)]
        img = mat.apply(list(src.units[x]))
        for t, (got, want) in enumerate(zip(img, dst.units[fx])):
            if not k.eq(got, want):
                out.append(f"FctId[{x}][{t + 1}] residual={k.fmt(k.sub(got, want))}")
    for x in src.objects:
        for y in src.objects:
            if src.d(x, y) == 0:
                continue
            for z in src.objects:
                if src.d(y, z) == 0:
                    continue
                fx, fy, fz = f.obj(x), f.obj(y), f.obj(z)
                for i in range(src.d(x, y)):
                    ei = _basis(k, src.d(x, y), i)
                    fi = f.apply(x, y, ei)
                    for j in range(src.d(y, z)):
                        ej = _basis(k, src.d(y, z), j)
                        lhs = f.apply(x, z, compose(src, x, y, z, ei, ej))
                        rhs = compose(dst, fx, fy, fz, fi, f.apply(y, z, ej))
                        for t, (a, b) in enumerate(zip(lhs, rhs)):
                            if not k.eq(a, b):
                                out.append(
                                    f"Fct[{x},{y},{z}][{i + 1},{j + 1},{t + 1}] "
                                    f"residual={k.fmt(k.sub(a, b))}"
                                )
    return out


def new_functor(src: LinCat, dst: LinCat, object_map: Dict[str, str], matrices) -> LinFunctor:
    if src.field != dst.field:
        raise ShapeMismatch("functor endpoints live over different rings")
    k = dst.field
    omap = dict(object_map)
    for x in src.objects:
        if x not in omap:
            raise UnknownName(f"object map misses {x!r}")
        if omap[x] not in dst.objects:
            raise UnknownName(f"object map sends {x!r} outside the target")
    mats: Dict[Tuple[str, str], Matrix] = {}
    for x in src.objects:
        for y in src.objects:
            rows_n = dst.d(omap[x], omap[y])
            cols_n = src.d(x, y)
            raw = matrices.get((x, y)) if matrices else None
            if raw is None:
                mats[(x, y)] = Matrix.zeros(k, rows_n, cols_n)
                continue
            if isinstance(raw, Matrix):
                mat = raw
            else:
                mat = Matrix.from_rows(k, [[_c(k, v) for v in row] for row in raw]) \
                    if raw else Matrix.zeros(k, 0, cols_n)
            if mat.rows != rows_n or mat.cols != cols_n:
                raise ShapeMismatch(
                    f"matrix for ({x},{y}) is {mat.rows}x{mat.cols}, "
                    f"need {rows_n}x{cols_n}"
                )
            mats[(x, y)] = mat
    f = LinFunctor(src, dst, omap, mats)
    bad = validate_functor(f)
    if bad:
        raise AxiomViolation("functor equations fail", bad)
    return f


def _c(ring, v):
    return ring.from_int(v) if isinstance(v, int) else v


def identity_functor(c: LinCat) -> LinFunctor:
    mats = {
        (x, y): Matrix.identity(c.field, c.d(x, y))
        for x in c.objects
        for y in c.objects
    }
    return LinFunctor(c, c, {x: x for x in c.objects}, mats)


def compose_functors(f: LinFunctor, g: LinFunctor) -> LinFunctor:
    """Apply f first, then g."""
    if not structural_equal(f.dst, g.src):
        raise NotComposable("middle categories differ")
    omap = {x: g.obj(f.obj(x)) for x in f.src.objects}
    mats = {
        (x, y): g.matrices[(f.obj(x), f.obj(y))].matmul(f.matrices[(x, y)])
        for x in f.src.objects
        for y in f.src.objects
    }
    out = LinFunctor(f.src, g.dst, omap, mats)
    bad = validate_functor(out)
    if bad:
        raise AxiomViolation("composite functor fails equations", bad)
    return out


def validate_nat_trans(a: NatTrans) -> List[str]:
    f, g = a.f, a.g
    if f.src is not g.src and not structural_equal(f.src, g.src):
        return ["endpoints have different sources"]
    if f.dst is not g.dst and not structural_equal(f.dst, g.dst):
        return ["endpoints have different targets"]
    src, dst, k = f.src, f.dst, f.dst.field
    out: List[str] = []
    for x in src.objects:
        if len(a.components[x]) != dst.d(f.obj(x), g.obj(x)):
            return [f"component at {x} has the wrong length"]
    for x in src.objects:
        for y in src.objects:
            if src.d(x, y) == 0:
                continue
            fx, fy = f.obj(x), f.obj(y)
            gx, gy = g.obj(x), g.obj(y)
            for j in range(src.d(x, y)):
                ej = _basis(k, src.d(x, y), j)
                lhs = compose(dst, fx, fy, gy, f.apply(x, y, ej), a.components[y])
                rhs = compose(dst, fx, gx, gy, a.components[x], g.apply(x, y, ej))
                for t, (u, v) in enumerate(zip(lhs, rhs)):
                    if not k.eq(u, v):
                        out.append(
                            f"TN[{x},{y}][{j + 1},{t + 1}] residual={k.fmt(k.sub(u, v))}"
                        )
    return out


def new_nat_trans(f: LinFunctor, g: LinFunctor, components) -> NatTrans:
    k = f.dst.field
    comps = {x: tuple(_c(k, v) for v in components[x]) for x in f.src.objects}
    a = NatTrans(f, g, comps)
    bad = validate_nat_trans(a)
    if bad:
        raise AxiomViolation("naturality equations fail", bad)
    return a


def identity_nat(f: LinFunctor) -> NatTrans:
    comps = {x: tuple(f.dst.units[f.obj(x)]) for x in f.src.objects}
    return NatTrans(f, f, comps)


def vertical_compose(a: NatTrans, b: NatTrans) -> NatTrans:
    """Apply a first, then b (a: f => g, b: g => h gives f => h)."""
    if a.g is not b.f and not _same_functor(a.g, b.f):
        raise NotComposable("middle functors differ")
    dst = a.f.dst
    comps = {}
    for x in a.f.src.objects:
        fx, gx, hx = a.f.obj(x), a.g.obj(x), b.g.obj(x)
        comps[x] = tuple(compose(dst, fx, gx, hx, a.components[x], b.components[x]))
    out = NatTrans(a.f, b.g, comps)
    bad = validate_nat_trans(out)
    if bad:
        raise AxiomViolation("composite transformation fails equations", bad)
    return out


def _same_functor(f: LinFunctor, g: LinFunctor) -> bool:
    if f.object_map != g.object_map:
        return False
    k = f.dst.field
    for key, m in f.matrices.items():
        n = g.matrices[key]
        if m.rows != n.rows or m.cols != n.cols:
            return False
        if any(not k.eq(u, v) for u, v in zip(m.entries, n.entries)):
            return False
    return True


# isomorphism search --------------------------------------------------------


@dataclass
class Witness:
    fwd: tuple
    bwd: tuple


@dataclass
class CertifiedNo:
    reason: str


@dataclass
class NoneFound:
    trials: int


IsoResult = Union[Witness, CertifiedNo, NoneFound]


def _inverse_system(c: LinCat, x: str, y: str, f: Sequence[Scalar]) -> Tuple[Matrix, list]:
    """Stacked linear system in g for m(f,g) = 1_x and m(g,f) = 1_y."""
    k = c.field
    dyx = c.d(y, x)
    rows = []
    rhs = []
    txyx = c.mult[(x, y, x)]
    for t in range(c.d(x, x)):
        row = []
        for j in range(dyx):
            acc = k.zero
            for i in range(c.d(x, y)):
                if not k.is_zero(f[i]):
                    acc = k.add(acc, k.mul(f[i], txyx[i][j][t]))
            row.append(acc)
        rows.append(row)
        rhs.append(c.units[x][t])
    tyxy = c.mult[(y, x, y)]
    for t in range(c.d(y, y)):
        row = []
        for j in range(dyx):
            acc = k.zero
            for i in range(c.d(x, y)):
                if not k.is_zero(f[i]):
                    acc = k.add(acc, k.mul(tyxy[j][i][t], f[i]))
            row.append(acc)
        rows.append(row)
        rhs.append(c.units[y][t])
    return Matrix.from_rows(k, rows) if rows else Matrix.zeros(k, 0, dyx), rhs


def _try_forward(c: LinCat, x: str, y: str, f: Sequence[Scalar]) -> Optional[Witness]:
    mat, rhs = _inverse_system(c, x, y, f)
    g = _ring_solve(c.field, mat, rhs)
    if g is None:
        return None
    k = c.field
    lhs = compose(c, x, y, x, f, g)
    if any(not k.eq(u, v) for u, v in zip(lhs, c.units[x])):
        return None
    rhs2 = compose(c, y, x, y, g, f)
    if any(not k.eq(u, v) for u, v in zip(rhs2, c.units[y])):
        return None
    return Witness(tuple(f), tuple(g))


def find_isomorphism(
    c: LinCat, x: str, y: str, seed: int = 0, cap: int = 10**6, trials: int = 32
) -> IsoResult:
    if x not in c.objects or y not in c.objects:
        raise UnknownName(f"unknown object in ({x!r}, {y!r})")
    k = c.field
    if x == y:
        return Witness(tuple(c.units[x]), tuple(c.units[x]))
    dims = (c.d(x, x), c.d(x, y), c.d(y, x), c.d(y, y))
    if len(set(dims)) != 1:
        return CertifiedNo(f"hom dimensions {dims} are not all equal")
    d = dims[1]
    if d == 0:
        return Witness((), ())
    if getattr(k, "kind", None) == "Fp" and k.p**d <= cap:
        digits = [0] * d
        while True:
            f = [k.from_int(v) for v in digits]
            if any(v for v in digits):
                w = _try_forward(c, x, y, f)
                if w is not None:
                    return w
            pos = d - 1
            while pos >= 0 and digits[pos] == k.p - 1:
                digits[pos] = 0
                pos -= 1
            if pos < 0:
                break
            digits[pos] += 1
        return CertifiedNo("exhausted all forward candidates")
    rng = random.Random(seed)
    tried = 0
    for i in range(d):
        w = _try_forward(c, x, y, _basis(k, d, i))
        tried += 1
        if w is not None:
            return w
    w = _try_forward(c, x, y, [k.one] * d)
    tried += 1
    if w is not None:
        return w
    for _ in range(trials):
        if getattr(k, "kind", None) == "Fp":
            f = [k.from_int(rng.randrange(k.p)) for _ in range(d)]
        else:
            f = [k.from_int(rng.randint(-3, 3)) for _ in range(d)]
        tried += 1
        w = _try_forward(c, x, y, f)
        if w is not None:
            return w
    return NoneFound(tried)


@dataclass
class EquivalenceReport:
    fully_faithful: bool
    essentially_surjective: str  # "yes" | "no" | "probabilistic"
    equivalence: str  # "yes" | "no" | "undetermined"
    details: List[str]


def _matrix_bijective(k, mat: Matrix) -> bool:
    if mat.rows != mat.cols:
        return False
    if mat.rows == 0:
        return True
    if isinstance(k, DualNumbers):
        return invert_dual(mat) is not None
    return rank(mat) == mat.rows


def is_equivalence(f: LinFunctor, seed: int = 0, cap: int = 10**6, trials: int = 32) -> EquivalenceReport:
    k = f.dst.field
    details: List[str] = []
    ff = True
    for x in f.src.objects:
        for y in f.src.objects:
            mat = f.matrices[(x, y)]
            if not _matrix_bijective(k, mat):
                ff = False
                details.append(f"hom matrix ({x},{y}) is not bijective")
    image = {f.obj(x) for x in f.src.objects}
    ess = "yes"
    for z in f.dst.objects:
        if z in image:
            continue
        hit = False
        saw_probabilistic = False
        for o in sorted(image):
            res = find_isomorphism(f.dst, z, o, seed=seed, cap=cap, trials=trials)
            if isinstance(res, Witness):
                hit = True
                break
            if isinstance(res, NoneFound):
                saw_probabilistic = True
        if not hit:
            if saw_probabilistic:
                ess = "probabilistic"
                details.append(f"object {z}: no isomorphism found (random search only)")
            else:
                ess = "no"
                details.append(f"object {z}: certified not isomorphic to the image")
                break
    if ff and ess == "yes":
        verdict = "yes"
    elif not ff or ess == "no":
        verdict = "no"
    else:
        verdict = "undetermined"
    return EquivalenceReport(ff, ess, verdict, details)


def is_nat_iso(a: NatTrans) -> Tuple[bool, Optional[NatTrans]]:
    """Decide pointwise invertibility; return the inverse transformation."""
    f, g, dst = a.f, a.g, a.f.dst
    k = dst.field
    inv_comps: Dict[str, tuple] = {}
    for x in f.src.objects:
        fx, gx = f.obj(x), g.obj(x)
        w = _try_forward_between(dst, fx, gx, a.components[x])
        if w is None:
            return False, None
        inv_comps[x] = w
    out = NatTrans(g, f, inv_comps)
    bad = validate_nat_trans(out)
    if bad:
        return False, None
    return True, out


def _try_forward_between(c: LinCat, x: str, y: str, f: Sequence[Scalar]) -> Optional[tuple]:
    mat, rhs = _inverse_system(c, x, y, f)
    g = _ring_solve(c.field, mat, rhs)
    if g is None:
        return None
    k = c.field
    if any(not k.eq(u, v) for u, v in zip(compose(c, x, y, x, f, g), c.units[x])):
        return None
    if any(not k.eq(u, v) for u, v in zip(compose(c, y, x, y, g, f), c.units[y])):
        return None
    return tuple(g)
