# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Schubert kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, free

cdef enum:
    MAXCELLS = 512
    MAXROWS = 64


cdef void _strips(int *lam, int rows, int cols, int i, int remaining,
                  int *nu, list out):
    cdef int upper, lo, add, top, t
    if i == rows:
        if remaining == 0:
            out.append(tuple([nu[t] for t in range(rows) if nu[t] != 0]))
        return
    upper = cols if i == 0 else lam[i - 1]
    lo = lam[i]
    top = upper - lo
    if remaining < top:
        top = remaining
    add = top
    while add >= 0:
        nu[i] = lo + add
        _strips(lam, rows, cols, i + 1, remaining - add, nu, out)
        add -= 1


def horizontal_strips(lam, int k, int rows, int cols):
    cdef int clam[MAXROWS]
    cdef int nu[MAXROWS]
    cdef int i
    cdef list out = []
    if rows > MAXROWS:
        raise ValueError("too many rows for the compiled kernel")
    if len(lam) > rows or (len(lam) and lam[0] > cols):
        return out
    for i in range(rows):
        clam[i] = lam[i] if i < len(lam) else 0
        nu[i] = 0
    _strips(clam, rows, cols, 0, k, nu, out)
    return out


cdef long long _lr(int pos, int ncells, int *ci, int *cj, int *grid, int width,
                   int *counts, int *need, int m):
    cdef int i, j, v, hi, lo, right, above
    cdef long long total = 0
    if pos == ncells:
        return 1
    i = ci[pos]
    j = cj[pos]
    hi = i + 1
    if m < hi:
        hi = m
    right = grid[i * width + j + 1]
    if right > 0 and right < hi:
        hi = right
    lo = 1
    if i > 0:
        above = grid[(i - 1) * width + j]
        if above > 0:
            lo = above + 1
    v = lo
    while v <= hi:
        if counts[v] < need[v] and (v == 1 or counts[v] + 1 <= counts[v - 1]):
            counts[v] += 1
            grid[i * width + j] = v
            total += _lr(pos + 1, ncells, ci, cj, grid, width, counts, need, m)
            grid[i * width + j] = 0
            counts[v] -= 1
        v += 1
    return total


def lr_coefficient(outer, inner, content):
    cdef int n_rows = len(outer)
    cdef int m = len(content)
    cdef int width, ncells = 0, i, j
    cdef int ci[MAXCELLS]
    cdef int cj[MAXCELLS]
    cdef int *grid
    cdef int *counts
    cdef int *need
    cdef long long result
    inner = list(inner) + [0] * (n_rows - len(inner))
    if len(inner) > n_rows or any(inner[i] > outer[i] for i in range(n_rows)):
        return 0
    if sum(outer) - sum(inner) != sum(content):
        return 0
    if sum(outer) - sum(inner) > MAXCELLS:
        raise ValueError("skew shape too large for the compiled kernel")
    width = (outer[0] if n_rows else 0) + 2
    for i in range(n_rows):
        for j in range(outer[i] - 1, inner[i] - 1, -1):
            ci[ncells] = i
            cj[ncells] = j
            ncells += 1
    if ncells == 0:
        return 1
    grid = <int *>malloc(sizeof(int) * (n_rows + 1) * width)
    counts = <int *>malloc(sizeof(int) * (m + 1))
    need = <int *>malloc(sizeof(int) * (m + 1))
    try:
        for i in range((n_rows + 1) * width):
            grid[i] = 0
        counts[0] = 0
        need[0] = 0
        for i in range(m):
            counts[i + 1] = 0
            need[i + 1] = content[i]
        result = _lr(0, ncells, ci, cj, grid, width, counts, need, m)
    finally:
        free(grid)
        free(counts)
        free(need)
    return int(result)
