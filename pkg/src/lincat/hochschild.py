"""The Hochschild complex of a finite linear category.

Degree-n cochains assign to every object tuple (x0..xn) a multilinear map
C(x0,x1) x ... x C(x_{n-1},x_n) -> C(x0,xn).  The canonical basis orders
tuples lexicographically along the category's object order, then runs the
argument indices and the output index row-major (output fastest); tuples
whose hom spaces include a zero-dimensional factor carry no coordinates.

The differential of f takes n+1 arguments:

    (df)(c1,...,c_{n+1}) = m(c1, f(c2,...))
                         + sum_j (-1)^j f(..., m(c_j, c_{j+1}), ...)
                         + (-1)^{n+1} m(f(c1,...,c_n), c_{n+1})

and d(d(f)) = 0 is re-checked per category rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .core import LinCat, compose, extend_to_duals, validate
from .errors import (
    AxiomViolation,
    DegreeTooLarge,
    NotACocycle,
    ShapeMismatch,
)
from .fields import DualNumbers, Scalar
from .functors import LinFunctor, NatTrans, identity_functor, validate_functor, validate_nat_trans
from .linalg import Matrix, image_basis, kernel_basis, rank, solve

DEGREE_CAP = 4


@dataclass
class Block:
    objs: Tuple[str, ...]
    arg_dims: Tuple[int, ...]
    out_dim: int
    offset: int

    def size(self) -> int:
        n = self.out_dim
        for d in self.arg_dims:
            n *= d
        return n


def cochain_blocks(c: LinCat, degree: int) -> List[Block]:
    if degree < 0:
        raise ShapeMismatch("cochain degree must be nonnegative")
    blocks: List[Block] = []
    offset = 0
    for objs in iproduct(c.objects, repeat=degree + 1):
        arg_dims = tuple(c.d(objs[t], objs[t + 1]) for t in range(degree))
        out_dim = c.d(objs[0], objs[-1])
        if out_dim == 0 or any(d == 0 for d in arg_dims):
            continue
        b = Block(objs, arg_dims, out_dim, offset)
        offset += b.size()
        blocks.append(b)
    return blocks


def cochain_dim(c: LinCat, degree: int) -> int:
    blocks = cochain_blocks(c, degree)
    return blocks[-1].offset + blocks[-1].size() if blocks else 0


def _flat(block: Block, args: Sequence[int], out: int) -> int:
    idx = 0
    for d, a in zip(block.arg_dims, args):
        idx = idx * d + a
    return block.offset + idx * block.out_dim + out


@dataclass
class Cochain:
    base: LinCat
    degree: int
    coords: tuple

    def is_zero(self) -> bool:
        k = self.base.field
        return all(k.is_zero(v) for v in self.coords)


def zero_cochain(c: LinCat, degree: int) -> Cochain:
    return Cochain(c, degree, (c.field.zero,) * cochain_dim(c, degree))


def cochain_from_map(c: LinCat, degree: int, entries: Dict) -> Cochain:
    """Entries keyed ((x0..xn), (i1..in), k) with 0-based indices."""
    k = c.field
    blocks = {b.objs: b for b in cochain_blocks(c, degree)}
    coords = [k.zero] * cochain_dim(c, degree)
    for (objs, args, out), val in entries.items():
        b = blocks.get(tuple(objs))
        if b is None:
            raise ShapeMismatch(f"no cochain block for objects {objs}")
        if len(args) != degree or any(
            not (0 <= a < d) for a, d in zip(args, b.arg_dims)
        ) or not (0 <= out < b.out_dim):
            raise ShapeMismatch(f"index out of range in cochain entry {objs},{args},{out}")
        coords[_flat(b, tuple(args), out)] = val if not isinstance(val, int) else k.from_int(val)
    return Cochain(c, degree, tuple(coords))


def eval_cochain(coch: Cochain, objs: Sequence[str], vectors: Sequence[Sequence[Scalar]]) -> List[Scalar]:
    """Apply the cochain to coordinate vectors along the given object tuple."""
    c = coch.base
    k = c.field
    if len(objs) != coch.degree + 1 or len(vectors) != coch.degree:
        raise ShapeMismatch("evaluation arity does not match the degree")
    out_dim = c.d(objs[0], objs[-1])
    out = [k.zero] * out_dim
    block = None
    for b in cochain_blocks(c, coch.degree):
        if b.objs == tuple(objs):
            block = b
            break
    if block is None:
        return out
    for args in iproduct(*(range(d) for d in block.arg_dims)):
        w = k.one
        for t, a in enumerate(args):
            w = k.mul(w, vectors[t][a])
            if k.is_zero(w):
                break
        if k.is_zero(w):
            continue
        for q in range(out_dim):
            v = coch.coords[_flat(block, args, q)]
            if not k.is_zero(v):
                out[q] = k.add(out[q], k.mul(w, v))
    return out


def differential_matrix(c: LinCat, n: int, cap: int = DEGREE_CAP) -> Matrix:
    """Matrix of d: HC^n -> HC^{n+1} in the canonical bases."""
    if n > cap:
        raise DegreeTooLarge(f"degree {n} above the configured cap {cap}")
    k = c.field
    src = cochain_blocks(c, n)
    dst = cochain_blocks(c, n + 1)
    dst_by_objs = {b.objs: b for b in dst}
    nrows = dst[-1].offset + dst[-1].size() if dst else 0
    ncols = src[-1].offset + src[-1].size() if src else 0
    entries = [k.zero] * (nrows * ncols)

    def add(row: int, col: int, val: Scalar) -> None:
        if not k.is_zero(val):
            idx = row * ncols + col
            entries[idx] = k.add(entries[idx], val)

    minus_one = k.neg(k.one)
    last_sign = k.one if (n + 1) % 2 == 0 else minus_one
    for b in src:
        T = b.objs
        x0, xn = T[0], T[-1]
        for args in iproduct(*(range(d) for d in b.arg_dims)):
            for out in range(b.out_dim):
                col = _flat(b, args, out)
                # m(c1, f(...)) with a fresh first argument from y
                for y in c.objects:
                    d_new = c.d(y, x0)
                    if d_new == 0:
                        continue
                    tb = dst_by_objs.get((y,) + T)
                    if tb is None:
                        continue
                    tensor = c.mult[(y, x0, xn)]
                    for a in range(d_new):
                        row_c = tensor[a][out]
                        for q in range(c.d(y, xn)):
                            add(_flat(tb, (a,) + args, q), col, row_c[q])
                # inner contractions, sign (-1)^j
                sign = k.one
                for j in range(1, n + 1):
                    sign = k.neg(sign)
                    xa, xb = T[j - 1], T[j]
                    for y in c.objects:
                        d1, d2 = c.d(xa, y), c.d(y, xb)
                        if d1 == 0 or d2 == 0:
                            continue
                        tb = dst_by_objs.get(T[:j] + (y,) + T[j:])
                        if tb is None:
                            continue
                        tensor = c.mult[(xa, y, xb)]
                        target_i = args[j - 1]
                        for a in range(d1):
                            for bb in range(d2):
                                v = tensor[a][bb][target_i]
                                if k.is_zero(v):
                                    continue
                                new_args = args[: j - 1] + (a, bb) + args[j:]
                                add(_flat(tb, new_args, out), col, k.mul(sign, v))
                # m(f(...), c_{n+1}) with a fresh last argument into y
                for y in c.objects:
                    d_new = c.d(xn, y)
                    if d_new == 0:
                        continue
                    tb = dst_by_objs.get(T + (y,))
                    if tb is None:
                        continue
                    tensor = c.mult[(x0, xn, y)]
                    for bb in range(d_new):
                        row_c = tensor[out][bb]
                        for q in range(c.d(x0, y)):
                            add(_flat(tb, args + (bb,), q), col, k.mul(last_sign, row_c[q]))
    return Matrix(nrows, ncols, tuple(entries), k)


def apply_differential(c: LinCat, coch: Cochain, cap: int = DEGREE_CAP) -> Cochain:
    mat = differential_matrix(c, coch.degree, cap)
    return Cochain(c, coch.degree + 1, tuple(mat.apply(list(coch.coords))))


@dataclass
class CohomologyReport:
    degree: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_hh: int
    cocycle_basis: Optional[List[List[Scalar]]]
    coboundary_basis: Optional[List[List[Scalar]]]
    method: str = "direct"


def cohomology(c: LinCat, n: int, cap: int = DEGREE_CAP) -> CohomologyReport:
    d_n = differential_matrix(c, n, cap)
    cocycles = kernel_basis(d_n)
    if n == 0:
        boundaries: List[List[Scalar]] = []
    else:
        d_prev = differential_matrix(c, n - 1, cap)
        if not _product_is_zero(d_n, d_prev):
            raise AxiomViolation("differential does not square to zero", [f"degree {n - 1}"])
        boundaries = image_basis(d_prev)
    return CohomologyReport(
        degree=n,
        dim_cochains=d_n.cols,
        dim_cocycles=len(cocycles),
        dim_coboundaries=len(boundaries),
        dim_hh=len(cocycles) - len(boundaries),
        cocycle_basis=cocycles,
        coboundary_basis=boundaries,
    )


def hh_dims(c: LinCat, max_degree: int, cap: int = DEGREE_CAP) -> List[int]:
    """Cohomology dimensions in degrees 0..max_degree, with a d*d = 0 check."""
    if max_degree > cap:
        raise DegreeTooLarge(f"degree {max_degree} above the configured cap {cap}")
    mats = [differential_matrix(c, t, cap) for t in range(max_degree + 1)]
    for t in range(max_degree):
        if not _product_is_zero(mats[t + 1], mats[t]):
            raise AxiomViolation("differential does not square to zero", [f"degree {t}"])
    ranks = [rank(m) for m in mats]
    out = []
    for t in range(max_degree + 1):
        prev = ranks[t - 1] if t else 0
        out.append(mats[t].cols - ranks[t] - prev)
    return out


def _product_is_zero(a: Matrix, b: Matrix) -> bool:
    """Exact check of a*b = 0 exploiting sparsity."""
    k = a.field
    if a.cols != b.rows:
        raise ShapeMismatch("inner dimensions differ")
    b_rows: List[List[Tuple[int, Scalar]]] = [
        [(j, v) for j, v in enumerate(b.row(t)) if not k.is_zero(v)] for t in range(b.rows)
    ]
    for i in range(a.rows):
        acc: Dict[int, Scalar] = {}
        arow = a.row(i)
        for t in range(a.cols):
            v = arow[t]
            if k.is_zero(v):
                continue
            for j, w in b_rows[t]:
                acc[j] = k.add(acc.get(j, k.zero), k.mul(v, w))
        if any(not k.is_zero(v) for v in acc.values()):
            return False
    return True


# first-order deformations ---------------------------------------------------


@dataclass
class DeformedCat:
    base: LinCat
    mu: Cochain
    cat: LinCat  # over the dual numbers


def _deformed_structure(c: LinCat, mu: Cochain) -> LinCat:
    """The dual-number category (m + mu*eps, units 1_x - mu(1_x,1_x)*eps),
    built without validation."""
    ring = DualNumbers(c.field)
    blocks = {b.objs: b for b in cochain_blocks(c, 2)}
    mult = {}
    for (x, y, z), tensor in c.mult.items():
        di, dj, dk = c.d(x, y), c.d(y, z), c.d(x, z)
        b = blocks.get((x, y, z))
        new = []
        for i in range(di):
            row = []
            for j in range(dj):
                cell = []
                for t in range(dk):
                    eps = mu.coords[_flat(b, (i, j), t)] if b is not None else c.field.zero
                    cell.append((tensor[i][j][t], eps))
                row.append(tuple(cell))
            new.append(tuple(row))
        mult[(x, y, z)] = tuple(new)
    units = {}
    for x in c.objects:
        corr = eval_cochain(mu, (x, x, x), (c.units[x], c.units[x]))
        units[x] = tuple(
            (u, c.field.neg(v)) for u, v in zip(c.units[x], corr)
        )
    return LinCat(ring, c.graph, mult, units)


def deformed_law_violations(c: LinCat, mu: Cochain) -> List[str]:
    """Axiom failures of the eps-extended structure, checked over k[eps]."""
    return validate(_deformed_structure(c, mu))


def deform(c: LinCat, mu: Cochain) -> DeformedCat:
    if mu.degree != 2 or mu.base is not c and mu.base != c:
        if mu.degree != 2:
            raise ShapeMismatch("deformation direction must be a degree-2 cochain")
    residual = differential_matrix(c, 2).apply(list(mu.coords))
    k = c.field
    bad = [
        f"coordinate {i + 1}: {k.fmt(v)}" for i, v in enumerate(residual) if not k.is_zero(v)
    ]
    if bad:
        raise NotACocycle("d(mu) is nonzero", bad[:20])
    cat = _deformed_structure(c, mu)
    viol = validate(cat)
    if viol:
        # the cocycle identity and dual-number validation must agree
        raise AxiomViolation("cocycle passed but the deformed law fails", viol[:20])
    return DeformedCat(c, mu, cat)


@dataclass
class Trivial:
    f: Cochain
    iso: LinFunctor  # from the deformed category to the trivial one
    inverse: LinFunctor


@dataclass
class NonTrivial:
    pass


def _one_cochain_block_matrix(c: LinCat, coords: Sequence[Scalar], x: str, y: str):
    """The (x,y) block of a 1-cochain as a d(x,y)-square matrix [out][in]."""
    blocks = {b.objs: b for b in cochain_blocks(c, 1)}
    d = c.d(x, y)
    b = blocks.get((x, y))
    rows = []
    for t in range(d):
        rows.append([coords[_flat(b, (j,), t)] for j in range(d)])
    return rows


def trivialize(c: LinCat, mu: Cochain):
    """Solve d(f) = mu; on success assemble the dual-number isomorphism
    (identity + f*eps) from the deformed category to the trivial one."""
    deformed = deform(c, mu)  # raises NotACocycle when mu is not closed
    d1 = differential_matrix(c, 1)
    sol = solve(d1, list(mu.coords))
    if sol is None:
        return NonTrivial()
    f = Cochain(c, 1, tuple(sol))
    dual_triv = extend_to_duals(c)
    ring = dual_triv.field
    k = c.field
    mats = {}
    inv_mats = {}
    for x in c.objects:
        for y in c.objects:
            d = c.d(x, y)
            if d == 0:
                mats[(x, y)] = Matrix.zeros(ring, 0, 0)
                inv_mats[(x, y)] = Matrix.zeros(ring, 0, 0)
                continue
            blk = _one_cochain_block_matrix(c, sol, x, y)
            fwd = []
            bwd = []
            for t in range(d):
                for j in range(d):
                    base = k.one if t == j else k.zero
                    fwd.append((base, blk[t][j]))
                    bwd.append((base, k.neg(blk[t][j])))
            mats[(x, y)] = Matrix(d, d, tuple(fwd), ring)
            inv_mats[(x, y)] = Matrix(d, d, tuple(bwd), ring)
    omap = {x: x for x in c.objects}
    iso = LinFunctor(deformed.cat, dual_triv, omap, mats)
    bad = validate_functor(iso)
    if bad:
        raise AxiomViolation("solved cochain does not assemble to a functor", bad[:20])
    inverse = LinFunctor(dual_triv, deformed.cat, omap, inv_mats)
    bad = validate_functor(inverse)
    if bad:
        raise AxiomViolation("inverse functor fails equations", bad[:20])
    return Trivial(f, iso, inverse)


# center and derivations ------------------------------------------------------


@dataclass
class CenterReport:
    dimension: int
    basis: List[List[Scalar]]
    product_table: List[List[List[Scalar]]]


def center(c: LinCat) -> CenterReport:
    k = c.field
    d0 = differential_matrix(c, 0)
    basis = kernel_basis(d0)
    nb = len(basis)
    if nb == 0:
        return CenterReport(0, [], [])
    dim0 = cochain_dim(c, 0)
    stacked = Matrix(
        dim0, nb, tuple(basis[j][i] for i in range(dim0) for j in range(nb)), k
    )
    offsets = {b.objs[0]: b.offset for b in cochain_blocks(c, 0)}
    table = []
    for u in basis:
        row = []
        for v in basis:
            w = [k.zero] * dim0
            for x in c.objects:
                dx = c.d(x, x)
                if dx == 0:
                    continue
                off = offsets[x]
                px = compose(c, x, x, x, u[off : off + dx], v[off : off + dx])
                for t in range(dx):
                    w[off + t] = px[t]
            coords = solve(stacked, w)
            if coords is None:
                raise AxiomViolation("center is not closed under the product", [])
            row.append(coords)
        table.append(row)
    return CenterReport(nb, basis, table)


def derivations(c: LinCat) -> List[List[Scalar]]:
    return kernel_basis(differential_matrix(c, 1))


def inner_derivations(c: LinCat) -> List[List[Scalar]]:
    return image_basis(differential_matrix(c, 0))


def nat_iso_from_0cochain(c: LinCat, g: Cochain) -> Tuple[NatTrans, LinFunctor]:
    """The transformation (1 + g*eps): identity => identity + d(g)*eps over k[eps]."""
    if g.degree != 0:
        raise ShapeMismatch("need a degree-0 cochain")
    k = c.field
    dual = extend_to_duals(c)
    ring = dual.field
    dg = differential_matrix(c, 0).apply(list(g.coords))
    mats = {}
    for x in c.objects:
        for y in c.objects:
            d = c.d(x, y)
            if d == 0:
                mats[(x, y)] = Matrix.zeros(ring, 0, 0)
                continue
            blk = _one_cochain_block_matrix(c, dg, x, y)
            flat = []
            for t in range(d):
                for j in range(d):
                    flat.append((k.one if t == j else k.zero, blk[t][j]))
            mats[(x, y)] = Matrix(d, d, tuple(flat), ring)
    target = LinFunctor(dual, dual, {x: x for x in c.objects}, mats)
    bad = validate_functor(target)
    if bad:
        raise AxiomViolation("coboundary functor fails equations", bad[:20])
    offsets = {b.objs[0]: b.offset for b in cochain_blocks(c, 0)}
    comps = {}
    for x in c.objects:
        dx = c.d(x, x)
        off = offsets.get(x, 0)
        comps[x] = tuple(
            (c.units[x][t], g.coords[off + t]) for t in range(dx)
        )
    alpha = NatTrans(identity_functor(dual), target, comps)
    bad = validate_nat_trans(alpha)
    if bad:
        raise AxiomViolation("transformation fails naturality", bad[:20])
    return alpha, target


def normalized_two_cocycles(c: LinCat) -> List[List[Scalar]]:
    """Basis of 2-cocycles vanishing whenever an argument is a unit."""
    k = c.field
    d2 = differential_matrix(c, 2)
    dim2 = d2.cols
    blocks = {b.objs: b for b in cochain_blocks(c, 2)}
    extra_rows: List[List[Scalar]] = []
    for x in c.objects:
        for y in c.objects:
            dxy = c.d(x, y)
            if dxy == 0:
                continue
            bl = blocks.get((x, x, y))
            if bl is not None:
                for j in range(dxy):
                    for t in range(dxy):
                        row = [k.zero] * dim2
                        for i in range(c.d(x, x)):
                            row[_flat(bl, (i, j), t)] = c.units[x][i]
                        extra_rows.append(row)
            br = blocks.get((x, y, y))
            if br is not None:
                for j in range(dxy):
                    for t in range(dxy):
                        row = [k.zero] * dim2
                        for i in range(c.d(y, y)):
                            row[_flat(br, (j, i), t)] = c.units[y][i]
                        extra_rows.append(row)
    stacked = d2
    if extra_rows:
        stacked = d2.vstack(Matrix.from_rows(k, extra_rows))
    return kernel_basis(stacked)


def random_cochain(c: LinCat, degree: int, rng) -> Cochain:
    """Small random coordinates, for seeded property tests."""
    k = c.field
    coords = []
    for _ in range(cochain_dim(c, degree)):
        if getattr(k, "kind", None) == "Fp":
            coords.append(k.from_int(rng.randrange(k.p)))
        else:
            coords.append(k.from_int(rng.randint(-2, 2)))
    return Cochain(c, degree, tuple(coords))
