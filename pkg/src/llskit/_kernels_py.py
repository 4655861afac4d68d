"""Pure-Python Schubert kernels; the fallback for the compiled ``_kernels_c``.

Partitions are tuples without trailing zeros.
"""


def horizontal_strips(lam, k, rows, cols):
    """Partitions nu in the rows x cols box with nu/lam a horizontal k-strip."""
    lam = list(lam) + [0] * (rows - len(lam))
    out = []
    nu = []

    def rec(i, remaining):
        if i == rows:
            if remaining == 0:
                out.append(tuple(x for x in nu if x))
            return
        upper = cols if i == 0 else lam[i - 1]
        lo = lam[i]
        for add in range(min(remaining, upper - lo), -1, -1):
            nu.append(lo + add)
            rec(i + 1, remaining - add)
            nu.pop()

    if len(lam) > rows or (lam and lam[0] > cols):
        return out
    rec(0, k)
    return out


def lr_coefficient(outer, inner, content):
    """Number of Littlewood-Richardson tableaux of shape outer/inner and weight content.

    Cells are filled in reverse reading order (rows top to bottom, each
    row right to left); rows weakly increase, columns strictly increase
    and every prefix of the reading word is a lattice word.
    """
    n_rows = len(outer)
    inner = list(inner) + [0] * (n_rows - len(inner))
    if len(inner) > n_rows or any(inner[i] > outer[i] for i in range(n_rows)):
        return 0
    if sum(outer) - sum(inner) != sum(content):
        return 0
    m = len(content)
    cells = [(i, j) for i in range(n_rows) for j in range(outer[i] - 1, inner[i] - 1, -1)]
    if not cells:
        return 1
    filled = {}
    counts = [0] * (m + 1)
    need = [0] + list(content)

    def rec(pos):
        if pos == len(cells):
            return 1
        i, j = cells[pos]
        hi = min(m, i + 1)
        right = filled.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        above = filled.get((i - 1, j)) if i > 0 else None
        lo = 1 if above is None else above + 1
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= need[v]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filled[(i, j)] = v
            total += rec(pos + 1)
            del filled[(i, j)]
            counts[v] -= 1
        return total

    return rec(0)
