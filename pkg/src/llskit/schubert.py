"""Exact Schubert calculus on the Grassmannian G(r+1, d+1).

Classes are indexed by partitions in the (r+1) x (d-r) box. Products use
two code paths that share no logic above the kernels: the Pieri rule
(horizontal strips) for special classes and Littlewood-Richardson
tableau counting for everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import InputError


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing parts inside a rows x cols box (trailing zeros dropped)."""

    parts: tuple[int, ...]
    rows: int
    cols: int

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if self.rows < 0 or self.cols < 0:
            raise InputError(f"invalid box {self.rows}x{self.cols}")
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise InputError(f"{list(self.parts)} is not a partition")
        if len(parts) > self.rows or (parts and parts[0] > self.cols):
            raise InputError(f"partition {list(parts)} does not fit in the {self.rows}x{self.cols} box")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str, rows: int, cols: int) -> "Partition":
        text = text.strip()
        if text in ("", "0", "-", "()"):
            return cls((), rows, cols)
        try:
            parts = tuple(int(p) for p in text.split(","))
        except ValueError:
            raise InputError(f"cannot parse partition {text!r}") from None
        return cls(parts, rows, cols)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def padded(self) -> tuple[int, ...]:
        return self.parts + (0,) * (self.rows - len(self.parts))

    def conjugate(self) -> "Partition":
        conj = tuple(sum(1 for p in self.parts if p > i) for i in range(self.cols))
        return Partition(conj, self.cols, self.rows)

    def __str__(self):
        return ",".join(map(str, self.parts))


def box_for(r: int, d: int) -> tuple[int, int]:
    if not 0 <= r <= d:
        raise InputError(f"need 0 <= r <= d, got r={r}, d={d}")
    return r + 1, d - r


def partitions_in_box(rows: int, cols: int, size: int | None = None) -> list[Partition]:
    """All partitions in the box, in lexicographic order of their parts."""
    out = []

    def rec(prefix, cap, remaining_rows):
        if remaining_rows == 0:
            out.append(prefix)
            return
        for p in range(cap + 1):
            rec(prefix + (p,), p, remaining_rows - 1)

    rec((), cols, rows)
    parts = sorted({tuple(x for x in p if x) for p in out})
    result = [Partition(p, rows, cols) for p in parts]
    if size is not None:
        result = [p for p in result if p.size == size]
    return result


def vanishing_to_partition(a: Sequence[int], r: int, d: int) -> Partition:
    """Ramification partition of a vanishing sequence: lambda_j = a_{r-j} - (r-j)."""
    rows, cols = box_for(r, d)
    a = tuple(a)
    if len(a) != r + 1:
        raise InputError(f"vanishing sequence {list(a)} should have {r + 1} entries")
    if a[0] < 0 or a[-1] > d or any(x >= y for x, y in zip(a, a[1:])):
        raise InputError(f"vanishing sequence {list(a)} must satisfy 0 <= a_0 < ... < a_r <= {d}")
    return Partition(tuple(a[r - j] - (r - j) for j in range(r + 1)), rows, cols)


def partition_to_vanishing(lam: Partition, r: int) -> tuple[int, ...]:
    """Inverse of :func:`vanishing_to_partition`."""
    padded = lam.padded()
    return tuple(padded[r - i] + i for i in range(r + 1))


def complement_partition(lam: Partition) -> Partition:
    padded = lam.padded()
    return Partition(
        tuple(lam.cols - padded[lam.rows - 1 - j] for j in range(lam.rows)), lam.rows, lam.cols
    )


def full_box(rows: int, cols: int) -> Partition:
    return Partition((cols,) * rows if cols else (), rows, cols)


class ClassCombination:
    """Formal nonnegative integer combination of Schubert classes in one box."""

    __slots__ = ("rows", "cols", "terms")

    def __init__(self, rows: int, cols: int, terms: Mapping[Partition | tuple, int] | None = None):
        self.rows = rows
        self.cols = cols
        self.terms: dict[Partition, int] = {}
        for key, coef in (terms or {}).items():
            lam = key if isinstance(key, Partition) else Partition(tuple(key), rows, cols)
            if (lam.rows, lam.cols) != (rows, cols):
                raise InputError(f"class {lam} lives in a different box")
            if coef < 0:
                raise InputError("coefficients must be nonnegative")
            if coef:
                self.terms[lam] = self.terms.get(lam, 0) + int(coef)

    @classmethod
    def of(cls, lam: Partition) -> "ClassCombination":
        return cls(lam.rows, lam.cols, {lam: 1})

    def coefficient(self, lam: Partition | tuple) -> int:
        if not isinstance(lam, Partition):
            lam = Partition(tuple(lam), self.rows, self.cols)
        return self.terms.get(lam, 0)

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other: "ClassCombination") -> "ClassCombination":
        out = ClassCombination(self.rows, self.cols, self.terms)
        for lam, c in other.terms.items():
            out.terms[lam] = out.terms.get(lam, 0) + c
        return out

    def scale(self, k: int) -> "ClassCombination":
        return ClassCombination(self.rows, self.cols, {lam: k * c for lam, c in self.terms.items()})

    def __mul__(self, other: "ClassCombination") -> "ClassCombination":
        out: dict[Partition, int] = {}
        for lam, a in self.terms.items():
            for mu, b in other.terms.items():
                for nu, c in lr_product(lam, mu).terms.items():
                    out[nu] = out.get(nu, 0) + a * b * c
        return ClassCombination(self.rows, self.cols, out)

    def __eq__(self, other):
        if not isinstance(other, ClassCombination):
            return NotImplemented
        return (self.rows, self.cols, self.terms) == (other.rows, other.cols, other.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"ClassCombination({self.rows}x{self.cols}: {self.format()})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*σ[{lam}]" for lam, c in self.items())


def pieri_product(c: ClassCombination, k: int) -> ClassCombination:
    """Multiply by the special class sigma_k (add k boxes, no two in a column)."""
    if not 1 <= k <= c.cols:
        raise InputError(f"special class index {k} out of range 1..{c.cols}")
    out: dict[tuple, int] = {}
    for lam, coef in c.terms.items():
        for nu in kernels.horizontal_strips(lam.parts, k, c.rows, c.cols):
            out[nu] = out.get(nu, 0) + coef
    return ClassCombination(c.rows, c.cols, out)


@lru_cache(maxsize=65536)
def _lr_terms(lam: tuple, mu: tuple, rows: int, cols: int) -> tuple:
    size = sum(lam) + sum(mu)
    out = []
    for nu in partitions_in_box(rows, cols, size):
        padded = nu.padded()
        if any(padded[i] < p for i, p in enumerate(lam)) or any(
            padded[i] < p for i, p in enumerate(mu)
        ):
            continue
        coef = kernels.lr_coefficient(nu.parts, lam, mu)
        if coef:
            out.append((nu.parts, coef))
    return tuple(out)


def lr_product(lam: Partition, mu: Partition) -> ClassCombination:
    """sigma_lam * sigma_mu via Littlewood-Richardson tableaux, truncated to the box."""
    if (lam.rows, lam.cols) != (mu.rows, mu.cols):
        raise InputError("partitions live in different boxes")
    return ClassCombination(lam.rows, lam.cols, dict(_lr_terms(lam.parts, mu.parts, lam.rows, lam.cols)))


def _is_row(lam: Partition) -> bool:
    return len(lam.parts) <= 1


def intersection_number(
    conds: Iterable[Partition | Sequence[int]], r: int, d: int, method: str = "auto"
) -> int:
    """Degree of the product of the given Schubert classes in G(r+1, d+1).

    ``method`` is ``"pieri"`` (special classes only, or their conjugates),
    ``"lr"``, or ``"auto"`` which takes the Pieri path when it applies.
    """
    rows, cols = box_for(r, d)
    conds = [c if isinstance(c, Partition) else Partition(tuple(c), rows, cols) for c in conds]
    for c in conds:
        if (c.rows, c.cols) != (rows, cols):
            raise InputError(f"condition {c} lives in a {c.rows}x{c.cols} box, expected {rows}x{cols}")
    if sum(c.size for c in conds) != rows * cols:
        return 0
    nonempty = [c for c in conds if c.size]
    if method not in ("auto", "pieri", "lr"):
        raise InputError(f"unknown method {method!r}")
    if method in ("auto", "pieri"):
        if all(_is_row(c) for c in nonempty):
            return _pieri_degree([c.size for c in nonempty], rows, cols)
        if all(_is_row(c.conjugate()) for c in nonempty):
            return _pieri_degree([c.size for c in nonempty], cols, rows)
        if method == "pieri":
            raise InputError("the Pieri path needs every condition to be a row or a column")
    acc = ClassCombination(rows, cols, {(): 1})
    for c in sorted(nonempty, key=lambda p: -p.size):
        acc = acc * ClassCombination.of(c)
        if not acc:
            return 0
    return acc.coefficient(full_box(rows, cols))


def _pieri_degree(sizes: list[int], rows: int, cols: int) -> int:
    acc = ClassCombination(rows, cols, {(): 1})
    for k in sorted(sizes, reverse=True):
        acc = pieri_product(acc, k)
    return acc.coefficient(full_box(rows, cols))


def brill_noether_rho(g: int, r: int, d: int) -> int:
    """rho = g - (r+1)(g-d+r)."""
    if g < 0:
        raise InputError("genus must be nonnegative")
    return g - (r + 1) * (g - d + r)


def syt_count(shape: Sequence[int]) -> int:
    """Standard Young tableaux of ``shape`` by the hook length formula."""
    shape = [p for p in shape if p]
    n = sum(shape)
    conj = [sum(1 for p in shape if p > j) for j in range(shape[0])] if shape else []
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(n) // hooks


def syt_rectangle_count(rows: int, cols: int) -> int:
    if rows < 1 or cols < 1:
        raise InputError("rectangle sides must be positive")
    return syt_count([cols] * rows)
