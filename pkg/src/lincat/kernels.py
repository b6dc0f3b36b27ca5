"""Dense mod-p kernels: row reduction, mod-2 bitset rank, point enumeration.

Two interchangeable implementations live here: numba ``@njit`` loops (the
default) and a pure-numpy vectorized fallback.  The environment variable
``LINCAT_BACKEND`` selects one: ``numba`` (default, falls back to numpy when
numba is unavailable) or ``numpy``.  Both paths use the same first-nonzero
pivoting, so outputs are bit-identical; ``benchmarks/bench_kernels.py``
compares their speed.

All arithmetic is int64 with p < 2^31, so products never overflow.
"""

from __future__ import annotations

import os

import numpy as np


def fp_rref_numpy(a: np.ndarray, p: int):
    """Reduced row echelon form mod p.  Returns (rref, pivot columns, rank)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64), r


def mod2_rank_numpy(words: np.ndarray, ncols: int) -> int:
    """Rank over F_2 of a bit-packed matrix (uint64 words, 64 columns each)."""
    w = np.array(words, dtype=np.uint64)
    rows = w.shape[0]
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        word, bit = divmod(c, 64)
        mask = np.uint64(1 << bit)
        nz = np.nonzero(w[r:, word] & mask)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            w[[r, i]] = w[[i, r]]
        below = (w[r + 1 :, word] & mask) != 0
        if below.any():
            w[r + 1 :][below] ^= w[r]
        r += 1
    return r


def enumerate_points_numpy(nvars, p, coefs, exps, eq_off):
    """All assignments in F_p^nvars killing every equation, as base-p codes.

    Equation e is sum over term ti in [eq_off[e], eq_off[e+1]) of
    coefs[ti] * prod_v x_v^exps[ti, v].
    """
    total = p**nvars
    found = []
    radix = np.array([p**v for v in range(nvars)], dtype=np.int64)
    batch = 1 << 14
    for start in range(0, total, batch):
        codes = np.arange(start, min(start + batch, total), dtype=np.int64)
        pts = (codes[:, None] // radix[None, :]) % p
        alive = np.ones(codes.shape[0], dtype=bool)
        for e in range(eq_off.size - 1):
            acc = np.zeros(codes.shape[0], dtype=np.int64)
            for ti in range(eq_off[e], eq_off[e + 1]):
                term = np.full(codes.shape[0], coefs[ti] % p, dtype=np.int64)
                for v in range(nvars):
                    for _ in range(exps[ti, v]):
                        term = term * pts[:, v] % p
                acc = (acc + term) % p
            alive &= acc == 0
            if not alive.any():
                break
        found.append(codes[alive])
    return np.concatenate(found) if found else np.empty(0, dtype=np.int64)


_BACKEND_REQUEST = os.environ.get("LINCAT_BACKEND", "numba")
BACKEND = "numpy"

if _BACKEND_REQUEST != "numpy":
    try:
        from numba import njit

        BACKEND = "numba"
    except ImportError:
        njit = None

if BACKEND == "numba":

    @njit(cache=True)
    def _fp_inv(a, p):
        t, newt = 0, 1
        r, newr = p, a % p
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        return t % p

    @njit(cache=True)
    def _fp_rref_jit(a, p):
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _fp_inv(a[r, c], p)
            for j in range(cols):
                a[r, j] = a[r, j] * inv % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return a, pivots[:r].copy(), r

    def fp_rref_numba(a: np.ndarray, p: int):
        a = np.array(a, dtype=np.int64) % p
        return _fp_rref_jit(a, p)

    @njit(cache=True)
    def _mod2_rank_jit(w, ncols):
        rows, nwords = w.shape
        r = 0
        for c in range(ncols):
            if r == rows:
                break
            word = c >> 6
            mask = np.uint64(1) << np.uint64(c & 63)
            piv = -1
            for i in range(r, rows):
                if w[i, word] & mask:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(nwords):
                    tmp = w[r, j]
                    w[r, j] = w[piv, j]
                    w[piv, j] = tmp
            for i in range(r + 1, rows):
                if w[i, word] & mask:
                    for j in range(nwords):
                        w[i, j] ^= w[r, j]
            r += 1
        return r

    def mod2_rank_numba(words: np.ndarray, ncols: int) -> int:
        return _mod2_rank_jit(np.array(words, dtype=np.uint64), ncols)

    @njit(cache=True)
    def _enumerate_jit(nvars, p, coefs, exps, eq_off):
        total = np.int64(1)
        for _ in range(nvars):
            total *= p
        out = np.empty(total, dtype=np.int64)
        nout = 0
        point = np.zeros(nvars, dtype=np.int64)
        for code in range(total):
            t = code
            for v in range(nvars):
                point[v] = t % p
                t //= p
            ok = True
            for e in range(eq_off.size - 1):
                s = np.int64(0)
                for ti in range(eq_off[e], eq_off[e + 1]):
                    term = coefs[ti] % p
                    for v in range(nvars):
                        for _ in range(exps[ti, v]):
                            term = term * point[v] % p
                    s = (s + term) % p
                if s != 0:
                    ok = False
                    break
            if ok:
                out[nout] = code
                nout += 1
        return out[:nout].copy()

    def enumerate_points_numba(nvars, p, coefs, exps, eq_off):
        return _enumerate_jit(nvars, p, coefs, exps, eq_off)

    fp_rref = fp_rref_numba
    mod2_rank = mod2_rank_numba
    enumerate_points_kernel = enumerate_points_numba
else:
    fp_rref = fp_rref_numpy
    mod2_rank = mod2_rank_numpy
    enumerate_points_kernel = enumerate_points_numpy


def pack_bits(dense01: np.ndarray) -> np.ndarray:
    """Pack a 0/1 int matrix into uint64 words, little-endian within a word."""
    rows, cols = dense01.shape
    nwords = (cols + 63) // 64
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = dense01 & 1
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(rows, nwords)
