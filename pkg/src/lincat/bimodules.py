"""Bimodules over one-object linear categories (algebras).

A bimodule stores two action tensors: left_action[i][j][l] gives the
coordinates of b_i . v_j and right_action[j][k][l] those of v_j . c_k.
The action axioms mirror the composition convention of LinCat, so
act(mult(a, b), v) = act(a, act(b, v)) on the left and symmetrically on
the right.  Multi-object situations are reduced to algebras through
matrix_ring before any bimodule is formed.

Invertibility is decided by pairings: the dual W of v (left-linear maps
into the left algebra), the evaluation v (x) W -> B, the action map
rho: C -> End_B(v), and the induced W (x) v -> C.  The bimodule is
invertible exactly when all three are bijective; the tensor round-trips
are then isomorphic to the regular bimodules via those same pairings,
and the isomorphisms are re-verified rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import List, Optional, Sequence, Tuple

from .core import (
    LinCat,
    catalog,
    matrix_ring,
    matrix_ring_layout,
    opposite,
    structural_equal,
    tensor_product,
)
from .errors import (
    AlgebraMismatch,
    AxiomViolation,
    DegreeTooLarge,
    SearchTooLarge,
    ShapeMismatch,
)
from .fields import FieldSpec, Scalar
from .functors import LinFunctor, validate_functor
from .hochschild import CohomologyReport
from .linalg import (
    Matrix,
    SparseIntMatrix,
    kernel_basis,
    kernel_basis_sparse,
    rank,
    rref,
    solve,
    solve_many,
    sparse_rref,
)

EXT_DEGREE_CAP = 4
_DENSE_CELLS = 200_000


def _one_object(a: LinCat) -> str:
    if len(a.objects) != 1:
        raise ShapeMismatch("expected a one-object category")
    return a.objects[0]


def _alg_dim(a: LinCat) -> int:
    o = _one_object(a)
    return a.d(o, o)


def _alg_mult(a: LinCat):
    o = _one_object(a)
    return a.mult[(o, o, o)]


def _alg_unit(a: LinCat):
    o = _one_object(a)
    return a.units[o]


@dataclass
class Bimodule:
    left_alg: LinCat
    right_alg: LinCat
    dim: int
    left_action: tuple  # [i][j][l]
    right_action: tuple  # [j][k][l]

    @property
    def field(self) -> FieldSpec:
        return self.left_alg.field


def _freeze3(t) -> tuple:
    return tuple(tuple(tuple(col) for col in row) for row in t)


def _nz2(k, tensor):
    """tensor[a][b] -> list of (c, value) with nonzero value."""
    return [
        [[(c, v) for c, v in enumerate(cell) if not k.is_zero(v)] for cell in row]
        for row in tensor
    ]


def _diff_keys(k, lhs: dict, rhs: dict) -> bool:
    for key in set(lhs) | set(rhs):
        if not k.is_zero(k.sub(lhs.get(key, k.zero), rhs.get(key, k.zero))):
            return True
    return False


def validate_bimodule(v: Bimodule) -> List[str]:
    k = v.field
    db, dc, m = _alg_dim(v.left_alg), _alg_dim(v.right_alg), v.dim
    lam, rho = v.left_action, v.right_action
    tb, tc = _alg_mult(v.left_alg), _alg_mult(v.right_alg)
    ub, uc = _alg_unit(v.left_alg), _alg_unit(v.right_alg)
    bad: List[str] = []
    if len(lam) != db or any(len(r) != m or any(len(c) != m for c in r) for r in lam):
        raise ShapeMismatch("left action tensor has the wrong shape")
    if len(rho) != m or any(len(r) != dc or any(len(c) != m for c in r) for r in rho):
        raise ShapeMismatch("right action tensor has the wrong shape")
    lam_nz = _nz2(k, lam)
    rho_nz = _nz2(k, rho)
    tb_nz = _nz2(k, tb)
    tc_nz = _nz2(k, tc)
    for j in range(m):
        got: dict = {}
        for i in range(db):
            if k.is_zero(ub[i]):
                continue
            for l, val in lam_nz[i][j]:
                got[l] = k.add(got.get(l, k.zero), k.mul(ub[i], val))
        want = {j: k.one}
        if _diff_keys(k, got, want):
            bad.append(f"LeftUnit[{j + 1}]")
        got = {}
        for i in range(dc):
            if k.is_zero(uc[i]):
                continue
            for l, val in rho_nz[j][i]:
                got[l] = k.add(got.get(l, k.zero), k.mul(uc[i], val))
        if _diff_keys(k, got, want):
            bad.append(f"RightUnit[{j + 1}]")
    for i1 in range(db):
        for i2 in range(db):
            prods = tb_nz[i1][i2]
            for j in range(m):
                lhs: dict = {}
                for s, c1 in prods:
                    for l, c2 in lam_nz[s][j]:
                        lhs[l] = k.add(lhs.get(l, k.zero), k.mul(c1, c2))
                rhs: dict = {}
                for t, c1 in lam_nz[i2][j]:
                    for l, c2 in lam_nz[i1][t]:
                        rhs[l] = k.add(rhs.get(l, k.zero), k.mul(c1, c2))
                if _diff_keys(k, lhs, rhs):
                    bad.append(f"LeftAss[{i1 + 1},{i2 + 1},{j + 1}]")
    for k1 in range(dc):
        for k2 in range(dc):
            prods = tc_nz[k1][k2]
            for j in range(m):
                lhs = {}
                for s, c1 in prods:
                    for l, c2 in rho_nz[j][s]:
                        lhs[l] = k.add(lhs.get(l, k.zero), k.mul(c1, c2))
                rhs = {}
                for t, c1 in rho_nz[j][k1]:
                    for l, c2 in rho_nz[t][k2]:
                        rhs[l] = k.add(rhs.get(l, k.zero), k.mul(c1, c2))
                if _diff_keys(k, lhs, rhs):
                    bad.append(f"RightAss[{k1 + 1},{k2 + 1},{j + 1}]")
    for i in range(db):
        for kk in range(dc):
            for j in range(m):
                lhs = {}
                for t, c1 in lam_nz[i][j]:
                    for l, c2 in rho_nz[t][kk]:
                        lhs[l] = k.add(lhs.get(l, k.zero), k.mul(c1, c2))
                rhs = {}
                for t, c1 in rho_nz[j][kk]:
                    for l, c2 in lam_nz[i][t]:
                        rhs[l] = k.add(rhs.get(l, k.zero), k.mul(c1, c2))
                if _diff_keys(k, lhs, rhs):
                    bad.append(f"Commute[{i + 1},{kk + 1},{j + 1}]")
    return bad


def new_bimodule(left_alg: LinCat, right_alg: LinCat, left_action, right_action) -> Bimodule:
    if left_alg.field != right_alg.field:
        raise AlgebraMismatch("bimodule algebras live over different fields")
    k = left_alg.field

    def coerce(t):
        return tuple(
            tuple(tuple(v if not isinstance(v, int) else k.from_int(v) for v in c) for c in r)
            for r in t
        )

    lam = coerce(left_action)
    rho = coerce(right_action)
    m = len(rho)
    v = Bimodule(left_alg, right_alg, m, lam, rho)
    bad = validate_bimodule(v)
    if bad:
        raise AxiomViolation("bimodule axioms fail", bad)
    return v


@dataclass
class BimoduleMap:
    src: Bimodule
    dst: Bimodule
    matrix: Matrix  # dim(dst) x dim(src)


def validate_bimodule_map(f: BimoduleMap) -> List[str]:
    v, w, mat = f.src, f.dst, f.matrix
    k = v.field
    if mat.rows != w.dim or mat.cols != v.dim:
        raise ShapeMismatch("bimodule map matrix has the wrong shape")
    bad: List[str] = []
    db, dc = _alg_dim(v.left_alg), _alg_dim(v.right_alg)
    for i in range(db):
        for j in range(v.dim):
            lhs = _apply_cols(mat, [v.left_action[i][j][l] for l in range(v.dim)], k)
            rhs = [k.zero] * w.dim
            for t in range(w.dim):
                c = mat.at(t, j)
                if k.is_zero(c):
                    continue
                for l in range(w.dim):
                    rhs[l] = k.add(rhs[l], k.mul(c, w.left_action[i][t][l]))
            if any(not k.is_zero(k.sub(a, b)) for a, b in zip(lhs, rhs)):
                bad.append(f"MapLeft[{i + 1},{j + 1}]")
    for kk in range(dc):
        for j in range(v.dim):
            lhs = _apply_cols(mat, [v.right_action[j][kk][l] for l in range(v.dim)], k)
            rhs = [k.zero] * w.dim
            for t in range(w.dim):
                c = mat.at(t, j)
                if k.is_zero(c):
                    continue
                for l in range(w.dim):
                    rhs[l] = k.add(rhs[l], k.mul(c, w.right_action[t][kk][l]))
            if any(not k.is_zero(k.sub(a, b)) for a, b in zip(lhs, rhs)):
                bad.append(f"MapRight[{kk + 1},{j + 1}]")
    return bad


def _apply_cols(mat: Matrix, vec: Sequence[Scalar], k: FieldSpec) -> List[Scalar]:
    out = [k.zero] * mat.rows
    for j, c in enumerate(vec):
        if k.is_zero(c):
            continue
        for i in range(mat.rows):
            out[i] = k.add(out[i], k.mul(c, mat.at(i, j)))
    return out


def regular_bimodule(a: LinCat) -> Bimodule:
    t = _alg_mult(a)
    return Bimodule(a, a, _alg_dim(a), t, t)


def bimodule_of_functor(f: LinFunctor) -> Bimodule:
    """The space of maps from destination objects into the image, as a
    ([dst], [src])-bimodule: left action by pre-composition, right action
    through the functor."""
    bad = validate_functor(f)
    if bad:
        raise AxiomViolation("functor equations fail", bad[:20])
    c, d = f.src, f.dst
    k = c.field
    # both endpoint categories were validated at construction time
    balg, _ = matrix_ring(d, validate_laws=False)
    calg, _ = matrix_ring(c, validate_laws=False)
    blayout = matrix_ring_layout(d)
    clayout = matrix_ring_layout(c)
    mod_layout: List[Tuple[str, str, int]] = []
    for y in d.objects:
        for x in c.objects:
            for t in range(d.d(y, f.obj(x))):
                mod_layout.append((y, x, t))
    pos = {key: t for t, key in enumerate(mod_layout)}
    m = len(mod_layout)
    db, dc = len(blayout), len(clayout)
    z = k.zero
    lam = [[[z] * m for _ in range(m)] for _ in range(db)]
    for bi, (u, w, s) in enumerate(blayout):
        for mj, (y, x, t) in enumerate(mod_layout):
            if w != y:
                continue
            row = d.mult[(u, y, f.obj(x))][s][t]
            for r in range(d.d(u, f.obj(x))):
                if not k.is_zero(row[r]):
                    lam[bi][mj][pos[(u, x, r)]] = row[r]
    rho = [[[z] * m for _ in range(dc)] for _ in range(m)]
    for mj, (y, x, t) in enumerate(mod_layout):
        for ci, (a, b, s) in enumerate(clayout):
            if a != x:
                continue
            fm = f.matrices[(a, b)]
            tensor = d.mult[(y, f.obj(a), f.obj(b))]
            for r in range(fm.rows):
                coef = fm.at(r, s)
                if k.is_zero(coef):
                    continue
                for l in range(d.d(y, f.obj(b))):
                    val = k.mul(coef, tensor[t][r][l])
                    if not k.is_zero(val):
                        q = pos[(y, b, l)]
                        rho[mj][ci][q] = k.add(rho[mj][ci][q], val)
    v = Bimodule(balg, calg, m, _freeze3(lam), _freeze3(rho))
    bad = validate_bimodule(v)
    if bad:
        raise AxiomViolation("functor bimodule fails action axioms", bad[:20])
    return v


# balanced tensor product ----------------------------------------------------


class _Quotient:
    """Quotient of k^n by a row space, with coordinates on free columns.

    Relations arrive as sparse rows (column -> coefficient)."""

    def __init__(self, n: int, relations: List[dict], k: FieldSpec):
        self.k = k
        self.n = n
        self.red, self.pivots = sparse_rref(k, n, relations)
        pivset = set(self.pivots)
        self.free = [j for j in range(n) if j not in pivset]

    @property
    def dim(self) -> int:
        return len(self.free)

    def project(self, vec: dict) -> List[Scalar]:
        k = self.k
        v = dict(vec)
        for row, pc in zip(self.red, self.pivots):
            c = v.get(pc)
            if c is None or k.is_zero(c):
                continue
            for j, x in row.items():
                nv = k.sub(v.get(j, k.zero), k.mul(c, x))
                if k.is_zero(nv):
                    v.pop(j, None)
                else:
                    v[j] = nv
        return [v.get(j, k.zero) for j in self.free]


def _balanced_tensor(v: Bimodule, w: Bimodule) -> Tuple[Bimodule, _Quotient]:
    if not structural_equal(v.right_alg, w.left_alg):
        raise AlgebraMismatch("middle algebras differ")
    k = v.field
    mv, mw = v.dim, w.dim
    dmid = _alg_dim(v.right_alg)
    n = mv * mw
    relations: List[dict] = []
    for j in range(mv):
        for kk in range(dmid):
            for u in range(mw):
                row: dict = {}
                for j2 in range(mv):
                    c = v.right_action[j][kk][j2]
                    if not k.is_zero(c):
                        row[j2 * mw + u] = k.add(row.get(j2 * mw + u, k.zero), c)
                for u2 in range(mw):
                    c = w.left_action[kk][u][u2]
                    nv = k.sub(row.get(j * mw + u2, k.zero), c)
                    if k.is_zero(nv):
                        row.pop(j * mw + u2, None)
                    else:
                        row[j * mw + u2] = nv
                if row:
                    relations.append(row)
    q = _Quotient(n, relations, k)
    m = q.dim
    db = _alg_dim(v.left_alg)
    de = _alg_dim(w.right_alg)
    z = k.zero
    lam = [[[z] * m for _ in range(m)] for _ in range(db)]
    rho = [[[z] * m for _ in range(de)] for _ in range(m)]
    for t in range(m):
        j, u = divmod(q.free[t], mw)
        for i in range(db):
            vec = {
                j2 * mw + u: c
                for j2 in range(mv)
                if not k.is_zero(c := v.left_action[i][j][j2])
            }
            coords = q.project(vec)
            for l in range(m):
                lam[i][t][l] = coords[l]
        for e in range(de):
            vec = {
                j * mw + u2: c
                for u2 in range(mw)
                if not k.is_zero(c := w.right_action[u][e][u2])
            }
            coords = q.project(vec)
            for l in range(m):
                rho[t][e][l] = coords[l]
    out = Bimodule(v.left_alg, w.right_alg, m, _freeze3(lam), _freeze3(rho))
    bad = validate_bimodule(out)
    if bad:
        raise AxiomViolation("tensor product fails action axioms", bad[:20])
    return out, q


def tensor_over_middle(v: Bimodule, w: Bimodule) -> Bimodule:
    return _balanced_tensor(v, w)[0]


# dual, pairings, invertibility ----------------------------------------------


@dataclass
class Pairing:
    tensor: Bimodule
    matrix: Matrix  # target algebra dim x tensor dim
    bijective: bool


@dataclass
class DualReport:
    w: Bimodule
    w_basis: List[List[Scalar]]  # each: flattened, phi(v_j) = sum_s vec[j*dB+s] b_s
    e_b: Pairing
    rho_matrix: Matrix
    end_b_dim: int
    rho_bijective: bool
    e_c: Optional[Pairing]


def _end_b_basis(v: Bimodule) -> List[List[Scalar]]:
    """Left-algebra-linear endomorphisms, flattened as phi[j*m+l]."""
    k = v.field
    m, db = v.dim, _alg_dim(v.left_alg)
    rows: List[dict] = []
    for i in range(db):
        for j in range(m):
            for l in range(m):
                row: dict = {}
                for j2 in range(m):
                    c = v.left_action[i][j][j2]
                    if not k.is_zero(c):
                        row[j2 * m + l] = k.add(row.get(j2 * m + l, k.zero), c)
                for t in range(m):
                    c = v.left_action[i][t][l]
                    nv = k.sub(row.get(j * m + t, k.zero), c)
                    if k.is_zero(nv):
                        row.pop(j * m + t, None)
                    else:
                        row[j * m + t] = nv
                if row:
                    rows.append(row)
    return kernel_basis_sparse(k, m * m, rows)


def _stack_columns(vectors: List[List[Scalar]], k: FieldSpec, nrows: int) -> Matrix:
    return Matrix(
        nrows,
        len(vectors),
        tuple(vectors[j][i] for i in range(nrows) for j in range(len(vectors))),
        k,
    )


def _induced_on_quotient(
    raw_cols: List[List[Scalar]], q: _Quotient, k: FieldSpec, nrows: int
) -> Matrix:
    """The matrix of a linear map on quotient coordinates, after checking the
    raw map vanishes on every relation."""
    for row, _ in zip(q.red, q.pivots):
        img = [k.zero] * nrows
        for j, c in row.items():
            if k.is_zero(c):
                continue
            for i in range(nrows):
                img[i] = k.add(img[i], k.mul(c, raw_cols[j][i]))
        if any(not k.is_zero(x) for x in img):
            raise AxiomViolation("pairing does not factor through the tensor product", [])
    cols = [raw_cols[fc] for fc in q.free]
    return _stack_columns(cols, k, nrows)


def dual_and_pairings(v: Bimodule) -> DualReport:
    k = v.field
    m, db, dc = v.dim, _alg_dim(v.left_alg), _alg_dim(v.right_alg)
    tb = _alg_mult(v.left_alg)
    # W: solutions phi[j][s] of phi(b_i . v_j) = b_i . phi(v_j)
    rows: List[dict] = []
    for i in range(db):
        for j in range(m):
            for s in range(db):
                row: dict = {}
                for j2 in range(m):
                    c = v.left_action[i][j][j2]
                    if not k.is_zero(c):
                        row[j2 * db + s] = k.add(row.get(j2 * db + s, k.zero), c)
                for t in range(db):
                    c = tb[i][t][s]
                    nv = k.sub(row.get(j * db + t, k.zero), c)
                    if k.is_zero(nv):
                        row.pop(j * db + t, None)
                    else:
                        row[j * db + t] = nv
                if row:
                    rows.append(row)
    w_basis = kernel_basis_sparse(k, m * db, rows)
    wdim = len(w_basis)
    span = _stack_columns(w_basis, k, m * db)

    tb_nz = _nz2(k, tb)
    vrho_nz = _nz2(k, v.right_action)
    pending: List[List[Scalar]] = []
    for t in range(wdim):
        phi = w_basis[t]
        for ci in range(dc):
            vec = [k.zero] * (m * db)
            for j in range(m):
                for j2, c in vrho_nz[j][ci]:
                    for s in range(db):
                        x = phi[j2 * db + s]
                        if not k.is_zero(x):
                            vec[j * db + s] = k.add(vec[j * db + s], k.mul(c, x))
            pending.append(vec)
        for bi in range(db):
            vec = [k.zero] * (m * db)
            for j in range(m):
                for s in range(db):
                    c = phi[j * db + s]
                    if k.is_zero(c):
                        continue
                    for s2, x in tb_nz[s][bi]:
                        vec[j * db + s2] = k.add(vec[j * db + s2], k.mul(c, x))
            pending.append(vec)
    sols = solve_many(span, pending)
    if any(sol is None for sol in sols):
        raise AxiomViolation("dual space is not closed under the actions", [])
    z = k.zero
    lamW = [[[z] * wdim for _ in range(wdim)] for _ in range(dc)]
    rhoW = [[[z] * wdim for _ in range(db)] for _ in range(wdim)]
    at = 0
    for t in range(wdim):
        for ci in range(dc):
            for l, cval in enumerate(sols[at]):
                lamW[ci][t][l] = cval
            at += 1
        for bi in range(db):
            for l, cval in enumerate(sols[at]):
                rhoW[t][bi][l] = cval
            at += 1
    w_bim = Bimodule(v.right_alg, v.left_alg, wdim, _freeze3(lamW), _freeze3(rhoW))
    bad = validate_bimodule(w_bim)
    if bad:
        raise AxiomViolation("dual bimodule fails action axioms", bad[:20])

    # evaluation v (x)_C W -> B, raw on v_j (x) phi_t, then pushed to the quotient
    t1, q1 = _balanced_tensor(v, w_bim)
    raw1: List[List[Scalar]] = []
    for j in range(m):
        for t in range(wdim):
            phi = w_basis[t]
            raw1.append([phi[j * db + s] for s in range(db)])
    eb_mat = _induced_on_quotient(raw1, q1, k, db)
    eb_bij = t1.dim == db and rank(eb_mat) == db
    e_b = Pairing(t1, eb_mat, eb_bij)

    # rho: C -> End_B(v)
    endb = _end_b_basis(v)
    rho_cols = [
        [v.right_action[j][ci][l] for j in range(m) for l in range(m)] for ci in range(dc)
    ]
    rho_mat = _stack_columns(rho_cols, k, m * m)
    rho_bij = dc == len(endb) and rank(rho_mat) == dc

    e_c: Optional[Pairing] = None
    if rho_bij:
        t2, q2 = _balanced_tensor(w_bim, v)
        lam_nz = _nz2(k, v.left_action)
        psis: List[List[Scalar]] = []
        for t in range(wdim):
            phi = w_basis[t]
            for j in range(m):
                psi = [k.zero] * (m * m)
                for r in range(m):
                    for s in range(db):
                        c = phi[r * db + s]
                        if k.is_zero(c):
                            continue
                        for l, x in lam_nz[s][j]:
                            psi[r * m + l] = k.add(psi[r * m + l], k.mul(c, x))
                psis.append(psi)
        raw2 = solve_many(rho_mat, psis)
        if all(sol is not None for sol in raw2):
            ec_mat = _induced_on_quotient(raw2, q2, k, dc)
            ec_bij = t2.dim == dc and rank(ec_mat) == dc
            e_c = Pairing(t2, ec_mat, ec_bij)
    return DualReport(w_bim, w_basis, e_b, rho_mat, len(endb), rho_bij, e_c)


@dataclass
class Invertible:
    w: Bimodule
    e_b: Pairing
    e_c: Pairing


@dataclass
class NotInvertible:
    reason: str


def is_invertible(v: Bimodule):
    rep = dual_and_pairings(v)
    if not rep.rho_bijective:
        return NotInvertible(
            "action map into the endomorphism algebra is not bijective "
            f"({rep.rho_matrix.cols} vs {rep.end_b_dim} dimensions, rank {rank(rep.rho_matrix)})"
        )
    if not rep.e_b.bijective:
        return NotInvertible("left evaluation pairing is not bijective")
    if rep.e_c is None or not rep.e_c.bijective:
        return NotInvertible("right evaluation pairing is not bijective")
    for pairing, target in ((rep.e_b, v.left_alg), (rep.e_c, v.right_alg)):
        f = BimoduleMap(pairing.tensor, regular_bimodule(target), pairing.matrix)
        bad = validate_bimodule_map(f)
        if bad:
            raise AxiomViolation("pairing is not a bimodule map", bad[:20])
    return Invertible(rep.w, rep.e_b, rep.e_c)


def morita_check(f: LinFunctor):
    return is_invertible(bimodule_of_functor(f))


def bimodule_map_space(v: Bimodule, w: Bimodule) -> List[Matrix]:
    """Basis of the space of bimodule maps v -> w."""
    if not structural_equal(v.left_alg, w.left_alg) or not structural_equal(
        v.right_alg, w.right_alg
    ):
        raise AlgebraMismatch("bimodule maps need matching algebra pairs")
    k = v.field
    db, dc = _alg_dim(v.left_alg), _alg_dim(v.right_alg)
    mv, mw = v.dim, w.dim
    rows: List[dict] = []
    # unknowns F[t][j] flattened t*mv + j
    for i in range(db):
        for j in range(mv):
            for l in range(mw):
                row: dict = {}
                for j2 in range(mv):
                    c = v.left_action[i][j][j2]
                    if not k.is_zero(c):
                        row[l * mv + j2] = k.add(row.get(l * mv + j2, k.zero), c)
                for t in range(mw):
                    c = w.left_action[i][t][l]
                    nv = k.sub(row.get(t * mv + j, k.zero), c)
                    if k.is_zero(nv):
                        row.pop(t * mv + j, None)
                    else:
                        row[t * mv + j] = nv
                if row:
                    rows.append(row)
    for kk in range(dc):
        for j in range(mv):
            for l in range(mw):
                row = {}
                for j2 in range(mv):
                    c = v.right_action[j][kk][j2]
                    if not k.is_zero(c):
                        row[l * mv + j2] = k.add(row.get(l * mv + j2, k.zero), c)
                for t in range(mw):
                    c = w.right_action[t][kk][l]
                    nv = k.sub(row.get(t * mv + j, k.zero), c)
                    if k.is_zero(nv):
                        row.pop(t * mv + j, None)
                    else:
                        row[t * mv + j] = nv
                if row:
                    rows.append(row)
    basis = kernel_basis_sparse(k, mw * mv, rows)
    return [Matrix(mw, mv, tuple(vec), k) for vec in basis]


def find_bimodule_isomorphism(v: Bimodule, w: Bimodule, seed: int = 0, trials: int = 32) -> Optional[BimoduleMap]:
    """Search the map space for an invertible element; None when dims differ
    or no sampled combination is invertible."""
    import random

    if v.dim != w.dim:
        return None
    k = v.field
    space = bimodule_map_space(v, w)
    if not space:
        return None if v.dim else BimoduleMap(v, w, Matrix.zeros(k, 0, 0))
    candidates: List[List[Scalar]] = []
    nb = len(space)
    for t in range(nb):
        candidates.append([k.one if i == t else k.zero for i in range(nb)])
    candidates.append([k.one] * nb)
    rng = random.Random(seed)
    hi = k.p - 1 if getattr(k, "kind", None) == "Fp" else 3
    for _ in range(trials):
        candidates.append([k.from_int(rng.randint(0, hi)) for _ in range(nb)])
    for coeffs in candidates:
        flat = [k.zero] * (w.dim * v.dim)
        for cf, mat in zip(coeffs, space):
            if k.is_zero(cf):
                continue
            for idx, entry in enumerate(mat.entries):
                flat[idx] = k.add(flat[idx], k.mul(cf, entry))
        mat = Matrix(w.dim, v.dim, tuple(flat), k)
        if rank(mat) == v.dim:
            f = BimoduleMap(v, w, mat)
            bad = validate_bimodule_map(f)
            if bad:
                raise AxiomViolation("map space produced a non-map", bad[:20])
            return f
    return None


# Ext complex over an algebra -------------------------------------------------


def _left_module_checked(b: LinCat, mod: Bimodule) -> None:
    if not structural_equal(mod.left_alg, b):
        raise AlgebraMismatch("module is not over the given algebra")
    bad = [s for s in validate_bimodule(mod) if s.startswith("Left")]
    if bad:
        raise AxiomViolation("left action axioms fail", bad[:20])


def _ext_differential_entries(b: LinCat, mod: Bimodule, n: int):
    """Yield (row, col, value) for the bar-type differential C^n -> C^{n+1},
    where C^t = Hom(B^(x)t (x) M, M)."""
    k = b.field
    db, m = _alg_dim(b), mod.dim
    tb = _alg_mult(b)
    lam = mod.left_action

    def flat(T, j, l):
        idx = 0
        for t in T:
            idx = idx * db + t
        return (idx * m + j) * m + l

    neg = k.neg
    last_neg = (n + 1) % 2 == 1
    for T in iproduct(range(db), repeat=n):
        for j in range(m):
            for l in range(m):
                col = flat(T, j, l)
                for s1 in range(db):
                    for r in range(m):
                        val = lam[s1][l][r]
                        if not k.is_zero(val):
                            yield flat((s1,) + T, j, r), col, val
                sign_neg = False
                for i in range(1, n + 1):
                    sign_neg = not sign_neg
                    ti = T[i - 1]
                    for a in range(db):
                        for bb in range(db):
                            val = tb[a][bb][ti]
                            if k.is_zero(val):
                                continue
                            yield (
                                flat(T[: i - 1] + (a, bb) + T[i:], j, l),
                                col,
                                neg(val) if sign_neg else val,
                            )
                for bb in range(db):
                    for q in range(m):
                        val = lam[bb][q][j]
                        if k.is_zero(val):
                            continue
                        yield flat(T + (bb,), q, l), col, neg(val) if last_neg else val


def _ext_dims(b: LinCat, m: int, top: int) -> List[int]:
    db = _alg_dim(b)
    return [(db ** t) * m * m for t in range(top + 1)]


def _scalar_to_int_pair(k: FieldSpec, v: Scalar) -> Tuple[int, int]:
    if k.kind == "Fp":
        return int(v), 1
    f = Fraction(v)
    return f.numerator, f.denominator


def _build_ext_matrices(b: LinCat, mod: Bimodule, top: int):
    """Each degree's differential: dense when small, sparse integer otherwise
    (rescaled by a common denominator, which leaves ranks untouched)."""
    k = b.field
    dims = _ext_dims(b, mod.dim, top + 1)
    mats = []
    for t in range(top + 1):
        nrows, ncols = dims[t + 1], dims[t]
        if nrows * ncols <= _DENSE_CELLS:
            flat = [k.zero] * (nrows * ncols)
            for r, c, v in _ext_differential_entries(b, mod, t):
                flat[r * ncols + c] = k.add(flat[r * ncols + c], v)
            mats.append(("dense", Matrix(nrows, ncols, tuple(flat), k)))
        else:
            entries = []
            denom = 1
            for r, c, v in _ext_differential_entries(b, mod, t):
                num, den = _scalar_to_int_pair(k, v)
                entries.append((r, c, num, den))
                if den != 1:
                    denom = denom * den // math.gcd(denom, den)
            sp = SparseIntMatrix(nrows, ncols)
            for r, c, num, den in entries:
                sp.add_at(r, c, num * (denom // den))
            mats.append(("sparse", sp))
    return mats


def _sparse_of(mat, k: FieldSpec) -> SparseIntMatrix:
    kind, payload = mat
    if kind == "sparse":
        return payload
    dense: Matrix = payload
    cells = []
    denom = 1
    for i in range(dense.rows):
        for j in range(dense.cols):
            v = dense.at(i, j)
            if k.is_zero(v):
                continue
            num, den = _scalar_to_int_pair(k, v)
            cells.append((i, j, num, den))
            if den != 1:
                denom = denom * den // math.gcd(denom, den)
    sp = SparseIntMatrix(dense.rows, dense.cols)
    for i, j, num, den in cells:
        sp.add_at(i, j, num * (denom // den))
    return sp


def _certified_rank(k: FieldSpec, sp: SparseIntMatrix, upper: int) -> Tuple[int, str]:
    """Exact rank via modular lower bounds meeting the d.d = 0 upper bound,
    falling back to exact elimination when they do not meet."""
    if k.kind == "Fp":
        lo = sp.rank_lower_modp(k.p, seed=1)
        if lo == upper:
            return lo, "certified-modular"
        if sp.rows * sp.cols <= 40_000_000:
            return sp.rank_exact(k), "exact"
        raise SearchTooLarge("cannot certify the rank of a differential this large")
    lo = sp.rank_lower_mod2(seed=1)
    if lo == upper:
        return lo, "certified-modular"
    lo = max(lo, sp.rank_lower_modp(2147483629, seed=2))
    if lo == upper:
        return lo, "certified-modular"
    return sp.rank_exact(k), "exact"


def ext_ranks(b: LinCat, mod: Bimodule, top: int, cap: int = EXT_DEGREE_CAP) -> Tuple[List[int], str]:
    """Exact ranks of the differentials d_0..d_top of the Ext complex."""
    if top > cap:
        raise DegreeTooLarge(f"degree {top} above the configured cap {cap}")
    k = b.field
    _left_module_checked(b, mod)
    mats = _build_ext_matrices(b, mod, top)
    dims = _ext_dims(b, mod.dim, top + 1)
    sparse: List[Optional[SparseIntMatrix]] = [None] * len(mats)

    def sp_at(t: int) -> SparseIntMatrix:
        if sparse[t] is None:
            sparse[t] = _sparse_of(mats[t], k)
        return sparse[t]

    for t in range(top):
        prod = sp_at(t + 1).matmul(sp_at(t))
        ok = prod.is_zero_mod(k.p) if k.kind == "Fp" else prod.is_zero()
        if not ok:
            raise AxiomViolation("Ext differential does not square to zero", [f"degree {t}"])
    ranks: List[int] = []
    method = "direct"
    for t in range(top + 1):
        kind, payload = mats[t]
        if kind == "dense":
            ranks.append(rank(payload))
            continue
        upper = dims[t] - ranks[t - 1] if t else min(dims[0], dims[1])
        r, how = _certified_rank(k, sp_at(t), upper)
        if how != "exact":
            method = "certified-modular"
        ranks.append(r)
    return ranks, method


def module_ext_complex(b: LinCat, mod: Bimodule, n: int, cap: int = EXT_DEGREE_CAP) -> CohomologyReport:
    """Dimensions of Ext^n over the algebra, through the bar-type complex
    on Hom(B^(x)t (x) M, M)."""
    ranks, method = ext_ranks(b, mod, n, cap)
    dims = _ext_dims(b, mod.dim, n)
    r_prev = ranks[n - 1] if n else 0
    cocycles = dims[n] - ranks[n]
    return CohomologyReport(
        degree=n,
        dim_cochains=dims[n],
        dim_cocycles=cocycles,
        dim_coboundaries=r_prev,
        dim_hh=cocycles - r_prev,
        cocycle_basis=None,
        coboundary_basis=None,
        method=method,
    )


def enveloping_module(c: LinCat) -> Tuple[LinCat, Bimodule]:
    """The enveloping algebra of the matrix ring acting on the matrix ring
    from both sides at once, packaged as a left module."""
    a, _ = matrix_ring(c)
    k = c.field
    env = tensor_product(opposite(a), a)
    da = _alg_dim(a)
    t = _alg_mult(a)
    z = k.zero
    lam = [[[z] * da for _ in range(da)] for _ in range(da * da)]
    for ia in range(da):
        for ib in range(da):
            e = ia * da + ib
            for u in range(da):
                acc = [z] * da
                for s in range(da):
                    c1 = t[ib][u][s]
                    if k.is_zero(c1):
                        continue
                    row = t[s][ia]
                    for l in range(da):
                        if not k.is_zero(row[l]):
                            acc[l] = k.add(acc[l], k.mul(c1, row[l]))
                lam[e][u] = acc
    trivial = catalog("field_cat", field=k)
    rho = [
        [tuple(k.one if j == l else z for l in range(da))] for j in range(da)
    ]
    mod = Bimodule(env, trivial, da, _freeze3(lam), tuple(tuple(r) for r in rho))
    bad = validate_bimodule(mod)
    if bad:
        raise AxiomViolation("enveloping action fails axioms", bad[:20])
    return env, mod


def hochschild_dims_by_ext(c: LinCat, max_degree: int, cap: int = EXT_DEGREE_CAP) -> Tuple[List[int], str]:
    """Hochschild dimensions recomputed as Ext over the enveloping algebra."""
    env, mod = enveloping_module(c)
    ranks, method = ext_ranks(env, mod, max_degree, cap)
    dims = _ext_dims(env, mod.dim, max_degree)
    out = []
    for t in range(max_degree + 1):
        prev = ranks[t - 1] if t else 0
        out.append(dims[t] - ranks[t] - prev)
    return out, method
