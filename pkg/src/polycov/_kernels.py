"""Hot loops over permutation tables.

Every kernel has a numba version and a vectorised numpy version with the same
signature and results.  Set ``POLYCOV_NUMBA=0`` to force the numpy path (also
used automatically when numba is not importable).
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba ships with the dev environment
    numba = None

USE_NUMBA = numba is not None and os.environ.get("POLYCOV_NUMBA", "1") != "0"

# Rows per numpy batch; bounds the temporary (rows x degree) arrays.
_NUMPY_BATCH_CELLS = 1 << 23


def sift_rank_numpy(perms, base, pos, uinv, offsets, radix):
    """Rank of each row of ``perms`` in the chain, or -1 for non-members.

    ``pos[i, x]`` is the transversal slot of point ``x`` at level ``i`` (-1 if
    outside the basic orbit), ``uinv[offsets[i] + t]`` the inverse coset
    representative for that slot and ``radix[i]`` the product of the deeper
    orbit lengths.
    """
    nrows, degree = perms.shape
    out = np.empty(nrows, dtype=np.int64)
    step = max(1, _NUMPY_BATCH_CELLS // max(degree, 1))
    ident = np.arange(degree, dtype=perms.dtype)
    for start in range(0, nrows, step):
        work = np.array(perms[start:start + step], dtype=np.int64)
        alive = np.ones(len(work), dtype=bool)
        rank = np.zeros(len(work), dtype=np.int64)
        for i in range(len(base)):
            slot = pos[i, work[:, base[i]]]
            alive &= slot >= 0
            slot = np.where(alive, slot, 0)
            work = uinv[offsets[i] + slot[:, None], work]
            rank += slot * radix[i]
        alive &= (work == ident).all(axis=1)
        out[start:start + len(work)] = np.where(alive, rank, -1)
    return out


def _sift_rank_loops(perms, base, pos, uinv, offsets, radix):
    nrows, degree = perms.shape
    out = np.empty(nrows, dtype=np.int64)
    work = np.empty(degree, dtype=np.int64)
    for r in range(nrows):
        for x in range(degree):
            work[x] = perms[r, x]
        rank = 0
        ok = True
        for i in range(base.shape[0]):
            t = pos[i, work[base[i]]]
            if t < 0:
                ok = False
                break
            row = offsets[i] + t
            for x in range(degree):
                work[x] = uinv[row, work[x]]
            rank += t * radix[i]
        if ok:
            for x in range(degree):
                if work[x] != x:
                    ok = False
                    break
        out[r] = rank if ok else -1
    return out


def compose_rows_numpy(left, right):
    """Row-wise composition: ``out[r] = right[r][left[r]]`` (left acts first)."""
    return np.take_along_axis(right, left.astype(np.int64), axis=1)


def _compose_rows_loops(left, right):
    nrows, degree = left.shape
    out = np.empty_like(right)
    for r in range(nrows):
        for x in range(degree):
            out[r, x] = right[r, left[r, x]]
    return out


def orbit_union_numpy(table, gens):
    """Connected components of ``x ~ table[x, g]`` for the columns ``gens``.

    Returns, for each row, the smallest row index in its component.
    """
    n = table.shape[0]
    label = np.arange(n, dtype=np.int64)
    cols = table[:, list(gens)].astype(np.int64) if len(gens) else np.empty((n, 0), np.int64)
    while True:
        new = label.copy()
        for c in range(cols.shape[1]):
            np.minimum.at(new, cols[:, c], label)
            new = np.minimum(new, new[cols[:, c]])
        new = new[new]
        if np.array_equal(new, label):
            return label
        label = new


def _orbit_union_loops(table, gens):
    n = table.shape[0]
    parent = np.arange(n, dtype=np.int64)
    for c in gens:
        for x in range(n):
            a = x
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = table[x, c]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
    for x in range(n):
        a = x
        while parent[a] != a:
            a = parent[a]
        parent[x] = a
    return parent


if USE_NUMBA:
    _sift_rank_nb = numba.njit(cache=True)(_sift_rank_loops)
    _compose_rows_nb = numba.njit(cache=True)(_compose_rows_loops)
    _orbit_union_nb = numba.njit(cache=True)(_orbit_union_loops)

    def sift_rank(perms, base, pos, uinv, offsets, radix):
        return _sift_rank_nb(np.ascontiguousarray(perms), base, pos, uinv, offsets, radix)

    def compose_rows(left, right):
        return _compose_rows_nb(np.ascontiguousarray(left), np.ascontiguousarray(right))

    def orbit_union(table, gens):
        return _orbit_union_nb(np.ascontiguousarray(table), np.asarray(list(gens), dtype=np.int64))
else:
    sift_rank = sift_rank_numpy
    compose_rows = compose_rows_numpy
    orbit_union = orbit_union_numpy
