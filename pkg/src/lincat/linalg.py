"""Exact dense linear algebra over Q and F_p.

Q uses fraction-free (Bareiss) elimination on integer-scaled rows to keep
intermediate entries small, with a final exact normalization pass; F_p uses
the dense kernels from :mod:`lincat.kernels`.  Pivoting is always "first
nonzero entry in column order", so ranks, kernels and solutions are
deterministic and reproducible.

A small sparse-integer matrix type supports the certified modular rank
bounds used on matrices too large for direct exact elimination: a mod-p
rank is a true lower bound for the rank over Q (a nonzero minor mod p is a
nonzero integer), and callers combine it with structural upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ShapeMismatch
from .fields import FieldSpec, Scalar
from . import kernels


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple
    field: FieldSpec

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries,"
                f" got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence[Scalar]]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise ShapeMismatch("ragged rows")
            flat.extend(row)
        return Matrix(nrows, ncols, tuple(flat), field)

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), field)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, (field.zero,) * (rows * cols), field)

    def at(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_lists(self) -> List[List[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
            self.field,
        )

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch("inner dimensions differ")
        k = self.field
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = k.zero
                for t in range(self.cols):
                    x = ri[t]
                    if not k.is_zero(x):
                        acc = k.add(acc, k.mul(x, other.at(t, j)))
                out.append(acc)
        return Matrix(self.rows, other.cols, tuple(out), k)

    def apply(self, vec: Sequence[Scalar]) -> List[Scalar]:
        if len(vec) != self.cols:
            raise ShapeMismatch("vector length differs from column count")
        k = self.field
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            acc = k.zero
            for t in range(self.cols):
                if not k.is_zero(vec[t]):
                    acc = k.add(acc, k.mul(ri[t], vec[t]))
            out.append(acc)
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ShapeMismatch("row counts differ")
        out = []
        for i in range(self.rows):
            out.extend(self.row(i))
            out.extend(other.row(i))
        return Matrix(self.rows, self.cols + other.cols, tuple(out), self.field)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ShapeMismatch("column counts differ")
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries, self.field)

    def is_zero(self) -> bool:
        k = self.field
        return all(k.is_zero(x) for x in self.entries)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _rref_q(mat: Matrix) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon over Q: Bareiss echelon phase, then normalize."""
    rows, cols = mat.rows, mat.cols
    m: List[List[int]] = []
    for i in range(rows):
        den = 1
        row = mat.row(i)
        for x in row:
            den = _lcm(den, Fraction(x).denominator)
        m.append([int(Fraction(x) * den) for x in row])
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        mrc = m[r][c]
        for i in range(r + 1, rows):
            mic = m[i][c]
            # skipping is sound only when the update is the identity
            if mic == 0 and mrc == prev:
                continue
            mi, mr = m[i], m[r]
            for j in range(c + 1, cols):
                mi[j] = (mrc * mi[j] - mic * mr[j]) // prev
            mi[c] = 0
        prev = mrc
        pivots.append(c)
        r += 1
    rk = len(pivots)
    red = [[Fraction(x) for x in m[i]] for i in range(rk)]
    for idx in range(rk - 1, -1, -1):
        c = pivots[idx]
        inv = 1 / red[idx][c]
        red[idx] = [x * inv for x in red[idx]]
        for i in range(idx):
            f = red[i][c]
            if f:
                red[i] = [a - f * b for a, b in zip(red[i], red[idx])]
    return red, pivots


def _rref_fp(mat: Matrix) -> Tuple[List[List[int]], List[int]]:
    p = mat.field.p
    if mat.rows == 0 or mat.cols == 0:
        return [], []
    arr = np.array(mat.to_lists(), dtype=np.int64)
    red, piv, rk = kernels.fp_rref(arr, p)
    return [[int(x) for x in red[i]] for i in range(rk)], [int(c) for c in piv]


def rref(mat: Matrix) -> Tuple[List[List[Scalar]], List[int]]:
    """Nonzero rows of the reduced row echelon form, plus pivot columns."""
    if mat.rows == 0 or mat.cols == 0:
        return [], []
    if mat.field.kind == "Q":
        return _rref_q(mat)
    return _rref_fp(mat)


def rank(mat: Matrix) -> int:
    return len(rref(mat)[1])


def kernel_basis(mat: Matrix) -> List[List[Scalar]]:
    """Deterministic basis of the right null space (one vector per free column)."""
    k = mat.field
    red, pivots = rref(mat)
    pivot_set = set(pivots)
    basis = []
    for fc in range(mat.cols):
        if fc in pivot_set:
            continue
        v = [k.zero] * mat.cols
        v[fc] = k.one
        for i, pc in enumerate(pivots):
            x = red[i][fc]
            if not k.is_zero(x):
                v[pc] = k.neg(x)
        basis.append(v)
    return basis


def solve(mat: Matrix, b: Sequence[Scalar]) -> Optional[List[Scalar]]:
    """One exact solution of mat*x = b, or None when b is outside the image.

    Free coordinates are set to zero, so the answer is deterministic.
    """
    if len(b) != mat.rows:
        raise ShapeMismatch("right-hand side length differs from row count")
    k = mat.field
    aug = mat.hstack(Matrix(mat.rows, 1, tuple(b), k))
    red, pivots = rref(aug)
    if mat.cols in pivots:
        return None
    x = [k.zero] * mat.cols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][mat.cols]
    return x


def invert(mat: Matrix) -> Optional[Matrix]:
    if mat.rows != mat.cols:
        return None
    n = mat.rows
    aug = mat.hstack(Matrix.identity(mat.field, n))
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return Matrix.from_rows(mat.field, [red[i][n:] for i in range(n)])


def image_basis(mat: Matrix) -> List[List[Scalar]]:
    """Canonical (echelonized) basis of the column space."""
    red, _ = rref(mat.transpose())
    return [list(r) for r in red]


def row_space_contains(basis_rows: Matrix, vec: Sequence[Scalar]) -> Optional[List[Scalar]]:
    """Coordinates of vec in the span of the rows, or None."""
    return solve(basis_rows.transpose(), list(vec))


def solve_many(mat: Matrix, rhs_cols: Sequence[Sequence[Scalar]]) -> List[Optional[List[Scalar]]]:
    """Solve mat*x = b for many right-hand sides with one elimination.

    Requires the columns of mat to be linearly independent (the usual case
    of coordinates against a basis); columns outside the span come back None.
    """
    k = mat.field
    n = mat.cols
    if not rhs_cols:
        return []
    aug = Matrix(
        mat.rows,
        n + len(rhs_cols),
        tuple(
            mat.at(i, j) if j < n else rhs_cols[j - n][i]
            for i in range(mat.rows)
            for j in range(n + len(rhs_cols))
        ),
        k,
    )
    red, pivots = rref(aug)
    if [p for p in pivots if p < n] != list(range(n)):
        raise ShapeMismatch("solve_many needs independent columns")
    pivset = set(pivots)
    out: List[Optional[List[Scalar]]] = []
    for t in range(len(rhs_cols)):
        col = n + t
        if col in pivset:
            out.append(None)
            continue
        sol = [k.zero] * n
        solvable = True
        for r, p in enumerate(pivots):
            if p < n:
                sol[p] = red[r][col]
            elif p < col and not k.is_zero(red[r][col]):
                solvable = False
                break
        out.append(sol if solvable else None)
    return out


# sparse exact elimination ---------------------------------------------------


def sparse_rref(field: FieldSpec, ncols: int, rows) -> Tuple[List[dict], List[int]]:
    """Reduced echelon form of dict-encoded rows; returns unit-pivot rows
    sorted by pivot column, fully back-eliminated."""
    k = field
    pivrows: dict = {}
    for row in rows:
        r = {j: v for j, v in row.items() if not k.is_zero(v)}
        while r:
            c = min(r)
            piv = pivrows.get(c)
            if piv is None:
                break
            f = r.pop(c)
            for j, v in piv.items():
                if j == c:
                    continue
                nv = k.sub(r.get(j, k.zero), k.mul(f, v))
                if k.is_zero(nv):
                    r.pop(j, None)
                else:
                    r[j] = nv
        if not r:
            continue
        c = min(r)
        inv = k.inv(r[c])
        pivrows[c] = {j: k.mul(inv, v) for j, v in r.items()}
    pivots = sorted(pivrows)
    for idx in range(len(pivots) - 1, -1, -1):
        c = pivots[idx]
        prow = pivrows[c]
        for c2 in pivots[:idx]:
            row = pivrows[c2]
            f = row.get(c)
            if f is None or k.is_zero(f):
                continue
            for j, v in prow.items():
                nv = k.sub(row.get(j, k.zero), k.mul(f, v))
                if k.is_zero(nv):
                    row.pop(j, None)
                else:
                    row[j] = nv
    return [pivrows[c] for c in pivots], pivots


def kernel_basis_sparse(field: FieldSpec, ncols: int, rows) -> List[List[Scalar]]:
    """Kernel basis of a sparse system, one vector per free column."""
    k = field
    red, pivots = sparse_rref(field, ncols, rows)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    out = []
    for fc in free:
        v = [k.zero] * ncols
        v[fc] = k.one
        for row, pc in zip(red, pivots):
            c = row.get(fc)
            if c is not None and not k.is_zero(c):
                v[pc] = k.neg(c)
        out.append(v)
    return out


# dual-number systems ------------------------------------------------------


def dual_parts(mat: Matrix) -> Tuple[Matrix, Matrix]:
    """Split a matrix over k[eps] into its base and eps parts over k."""
    base = mat.field.base
    a0 = tuple(e[0] for e in mat.entries)
    a1 = tuple(e[1] for e in mat.entries)
    return (
        Matrix(mat.rows, mat.cols, a0, base),
        Matrix(mat.rows, mat.cols, a1, base),
    )


def solve_dual(mat: Matrix, b: Sequence) -> Optional[List[tuple]]:
    """Exact solution of a linear system over k[eps], or None.

    (A0 + A1 eps) x = b unfolds to the base-field block system
    [[A0, 0], [A1, A0]] (x0; x1) = (b0; b1), which is solved exactly, so
    solvability is decided completely even when A0 is singular.
    """
    a0, a1 = dual_parts(mat)
    k = a0.field
    zero_block = Matrix.zeros(k, mat.rows, mat.cols)
    big = a0.hstack(zero_block).vstack(a1.hstack(a0))
    rhs = [e[0] for e in b] + [e[1] for e in b]
    sol = solve(big, rhs)
    if sol is None:
        return None
    n = mat.cols
    return [(sol[t], sol[n + t]) for t in range(n)]


def invert_dual(mat: Matrix) -> Optional[Matrix]:
    """Inverse over k[eps]: exists iff the base part is invertible."""
    a0, a1 = dual_parts(mat)
    b0 = invert(a0)
    if b0 is None:
        return None
    b1 = b0.matmul(a1).matmul(b0)
    k = a0.field
    entries = tuple(
        (b0.entries[t], k.neg(b1.entries[t])) for t in range(len(b0.entries))
    )
    return Matrix(mat.rows, mat.cols, entries, mat.field)


# sparse integer matrices -------------------------------------------------


class SparseIntMatrix:
    """COO-ish sparse matrix with exact integer entries."""

    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.data: dict = {}

    def add_at(self, i: int, j: int, v: int) -> None:
        if v == 0:
            return
        key = (i, j)
        nv = self.data.get(key, 0) + v
        if nv:
            self.data[key] = nv
        else:
            del self.data[key]

    def nnz(self) -> int:
        return len(self.data)

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch("inner dimensions differ")
        by_row: dict = {}
        for (i, j), v in other.data.items():
            by_row.setdefault(i, []).append((j, v))
        out = SparseIntMatrix(self.rows, other.cols)
        acc: dict = {}
        for (i, t), v in self.data.items():
            for j, w in by_row.get(t, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) + v * w
        out.data = {k: v for k, v in acc.items() if v}
        return out

    def is_zero(self) -> bool:
        return not self.data

    def is_zero_mod(self, p: int) -> bool:
        return all(v % p == 0 for v in self.data.values())

    def to_matrix(self, field: FieldSpec) -> Matrix:
        z = field.zero
        flat = [z] * (self.rows * self.cols)
        for (i, j), v in self.data.items():
            flat[i * self.cols + j] = field.from_int(v)
        return Matrix(self.rows, self.cols, tuple(flat), field)

    def rank_lower_mod2(self, seed: int = 0) -> int:
        """Exact rank over F_2 (a certified lower bound for the rank over Q).

        When the matrix is much taller than wide, a sparse random row sketch
        S*A is reduced instead; rank(S*A) <= rank(A) holds for every S, so
        the bound stays sound no matter how the sketch falls.
        """
        target = self.cols + 128
        if self.rows > 2 * target:
            rng = np.random.RandomState(seed)
            nwords = (self.cols + 63) // 64
            words = np.zeros((target, nwords), dtype=np.uint64)
            # each source row lands in three random buckets (weight-3 sketch)
            assign = rng.randint(0, target, size=(3, self.rows))
            for (i, j), v in self.data.items():
                if v & 1:
                    w, bit = j >> 6, np.uint64(1 << (j & 63))
                    for h in range(3):
                        words[assign[h, i], w] ^= bit
            return int(kernels.mod2_rank(words, self.cols))
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.data.items():
            dense[i, j] = v & 1
        return int(kernels.mod2_rank(kernels.pack_bits(dense), self.cols))

    def rank_lower_modp(self, p: int, seed: int = 0) -> int:
        """Exact rank over F_p (certified lower bound over Q); sketched when tall."""
        target = self.cols + 32
        if self.rows > 2 * target:
            rng = np.random.RandomState(seed)
            dense = np.zeros((target, self.cols), dtype=np.int64)
            assign = rng.randint(0, target, size=(3, self.rows))
            coef = rng.randint(1, p, size=(3, self.rows))
            for (i, j), v in self.data.items():
                vm = v % p
                for h in range(3):
                    dense[assign[h, i], j] = (dense[assign[h, i], j] + coef[h, i] * vm) % p
            dense %= p
        else:
            dense = np.zeros((self.rows, self.cols), dtype=np.int64)
            for (i, j), v in self.data.items():
                dense[i, j] = v % p
        return int(kernels.fp_rref(dense, p)[2])

    def rank_exact(self, field: FieldSpec) -> int:
        """Exact rank over the field, by direct elimination (no shortcuts)."""
        if field.kind == "Fp":
            dense = np.zeros((self.rows, self.cols), dtype=np.int64)
            for (i, j), v in self.data.items():
                dense[i, j] = v % field.p
            return int(kernels.fp_rref(dense, field.p)[2])
        if self.rows * self.cols <= 400_000:
            return rank(self.to_matrix(field))
        return self._rank_exact_q_sparse()

    def _rank_exact_q_sparse(self) -> int:
        rows = [dict() for _ in range(self.rows)]
        col_index: dict = {}
        for (i, j), v in self.data.items():
            rows[i][j] = Fraction(v)
            col_index.setdefault(j, set()).add(i)
        active = set(range(self.rows))
        rk = 0
        for c in range(self.cols):
            # col_index is not pruned during elimination, so drop rows whose
            # entry in this column has since been canceled
            holders = sorted(i for i in col_index.get(c, ()) & active if c in rows[i])
            if not holders:
                continue
            pi = holders[0]
            active.discard(pi)
            prow = rows[pi]
            pval = prow[c]
            for i in holders[1:]:
                row = rows[i]
                f = row[c] / pval
                for j, v in prow.items():
                    nv = row.get(j, Fraction(0)) - f * v
                    if nv:
                        row[j] = nv
                        col_index.setdefault(j, set()).add(i)
                    elif j in row:
                        del row[j]
            rk += 1
        return rk
