"""Partitions, Maya diagrams and the combinatorics that labels rational extensions.

A Maya diagram is stored by its two finite deviation sets from the trivial
diagram ``M_0 = {m < 0}``: the non-negative members and the negative
non-members. Everything else is computed lazily over the integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from sympy.utilities.iterables import partitions as _sympy_partitions

IndexSet = tuple  # sorted tuple of distinct ints


def as_index_set(values: Iterable[int]) -> tuple[int, ...]:
    vals = [int(v) for v in values]
    if len(set(vals)) != len(vals):
        raise ValueError(f"index set has repeated entries: {vals}")
    return tuple(sorted(vals))


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(p for p in parts if p != 0))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """1-based part access, zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def to_json(self) -> list[int]:
        return list(self.parts)

    @classmethod
    def from_json(cls, data) -> "Partition":
        return cls(tuple(data))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of ``n``."""
    if n == 0:
        yield Partition()
        return
    for mult in _sympy_partitions(n):
        parts = sorted((k for k, c in mult.items() for _ in range(c)), reverse=True)
        yield Partition(tuple(parts))


def partitions_up_to(n: int) -> list[Partition]:
    return [lam for k in range(n + 1) for lam in partitions_of(k)]


@dataclass(frozen=True)
class MayaDiagram:
    filled_nonneg: frozenset = frozenset()
    empty_neg: frozenset = frozenset()

    def __post_init__(self):
        f = frozenset(int(m) for m in self.filled_nonneg)
        e = frozenset(int(m) for m in self.empty_neg)
        if any(m < 0 for m in f):
            raise ValueError("filled_nonneg must hold integers >= 0")
        if any(m >= 0 for m in e):
            raise ValueError("empty_neg must hold integers < 0")
        object.__setattr__(self, "filled_nonneg", f)
        object.__setattr__(self, "empty_neg", e)

    @classmethod
    def trivial(cls) -> "MayaDiagram":
        return cls()

    @classmethod
    def from_index_set(cls, K: Iterable[int]) -> "MayaDiagram":
        return multi_flip(cls(), K)

    @classmethod
    def from_predicate(cls, member: Callable[[int], bool], lo: int, hi: int) -> "MayaDiagram":
        # member(m) must hold for m < lo and fail for m >= hi
        lo, hi = min(lo, 0), max(hi, 0)
        return cls(
            frozenset(m for m in range(0, hi) if member(m)),
            frozenset(m for m in range(lo, 0) if not member(m)),
        )

    def __contains__(self, m: int) -> bool:
        return m in self.filled_nonneg if m >= 0 else m not in self.empty_neg

    @property
    def index(self) -> int:
        """sigma_M = #{m in M, m >= 0} - #{m not in M, m < 0}."""
        return len(self.filled_nonneg) - len(self.empty_neg)

    sigma = index

    def window(self) -> tuple[int, int]:
        """``(lo, hi)`` with every m < lo a member and every m >= hi a non-member."""
        lo = min(min(self.empty_neg, default=0), 0)
        hi = max(self.filled_nonneg, default=-1) + 1
        return lo, max(hi, 0)

    def index_set(self) -> tuple[int, ...]:
        return as_index_set(self.filled_nonneg | self.empty_neg)

    def members_desc(self) -> Iterator[int]:
        """Members in decreasing order (infinite)."""
        lo, hi = self.window()
        m = hi - 1
        while True:
            if m < lo or m in self:
                yield m
            m -= 1

    def largest(self, count: int) -> list[int]:
        it = self.members_desc()
        return [next(it) for _ in range(count)]

    def to_json(self) -> dict:
        return {
            "filled_nonneg": sorted(self.filled_nonneg),
            "empty_neg": sorted(self.empty_neg),
            "index": self.index,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MayaDiagram":
        M = cls(frozenset(data["filled_nonneg"]), frozenset(data["empty_neg"]))
        if "index" in data and data["index"] != M.index:
            raise ValueError("stored index disagrees with deviation sets")
        return M

    def __str__(self):
        lo, hi = self.window()
        shown = [m for m in range(lo - 2, hi) if m in self]
        return "{..., " + ", ".join(map(str, shown)) + "}"


def maya_from_partition(lam: Partition) -> MayaDiagram:
    """M_lambda = {lambda_i - i : i >= 1}, which has index 0."""
    ell = lam.length
    vals = {lam.part(i) - i for i in range(1, ell + 1)}
    return MayaDiagram(
        frozenset(v for v in vals if v >= 0),
        frozenset(m for m in range(-ell, 0) if m not in vals),
    )


def translate(M: MayaDiagram, n: int) -> MayaDiagram:
    lo, hi = M.window()
    return MayaDiagram.from_predicate(lambda m: (m - n) in M, lo + n, hi + n)


def partition_from_maya(M: MayaDiagram) -> Partition:
    shifted = translate(M, -M.index)
    parts = []
    for i, m in enumerate(shifted.members_desc(), start=1):
        if m + i == 0:
            break
        parts.append(m + i)
    return Partition(tuple(parts))


def multi_flip(M: MayaDiagram, K: Iterable[int]) -> MayaDiagram:
    K = frozenset(int(k) for k in K)
    lo, hi = M.window()
    lo = min([lo, *K]) if K else lo
    hi = max([hi, *(k + 1 for k in K)]) if K else hi
    return MayaDiagram.from_predicate(lambda m: (m in M) != (m in K), lo, hi)


def symmetric_difference(M1: MayaDiagram, M2: MayaDiagram) -> tuple[int, ...]:
    lo1, hi1 = M1.window()
    lo2, hi2 = M2.window()
    return tuple(m for m in range(min(lo1, lo2), max(hi1, hi2)) if (m in M1) != (m in M2))


def hooklengths(lam: Partition) -> dict[tuple[int, int], int]:
    """Map each cell (i, j) of the Young diagram (1-based, row i) to its hooklength."""
    conj = lam.conjugate()
    return {
        (i, j): (lam.part(i) - j) + (conj.part(j) - i) + 1
        for i in range(1, lam.length + 1)
        for j in range(1, lam.part(i) + 1)
    }


def dim_tableaux(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam, via the hook formula."""
    return math.factorial(lam.weight) // math.prod(hooklengths(lam).values())


def dim_tableaux_index_form(lam: Partition) -> int:
    """Same number via N!/d = prod k_i! / prod_{i<j} (k_i - k_j), k_i = lam_i - i + ell."""
    ell = lam.length
    k = [lam.part(i) - i + ell for i in range(1, ell + 1)]
    num = math.prod(math.factorial(v) for v in k)
    den = math.prod(k[i] - k[j] for i in range(ell) for j in range(i + 1, ell))
    return math.factorial(lam.weight) * den // num


def is_q_core(M: MayaDiagram, q: int) -> bool:
    """True iff M is a subset of M + q."""
    lo, hi = M.window()
    # for q < 0 the members just below the window matter as well
    return all((m - q) in M for m in range(lo - max(-q, 0), hi) if m in M)


def threshold_degree(lam: Partition) -> int:
    return lam.part(1) + lam.length


def critical_degrees(lam: Partition, q_max: int) -> set[int]:
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    M = maya_from_partition(lam)
    return {q for q in range(1, q_max + 1) if is_q_core(M, q)}


def insertion(m: int, lam: Partition) -> tuple[int, Partition]:
    """The sign and partition of m |> lam; requires m not in M_lam."""
    M = maya_from_partition(lam)
    if m in M:
        raise ValueError(f"{m} belongs to M_lambda for lambda={lam}; insertion is undefined")
    j = 0
    while m + j < lam.part(j + 1):
        j += 1
    parts = [lam.part(i) - 1 for i in range(1, j + 1)] + [m + j] + list(lam.parts[j:])
    above = sum(1 for k in range(m + 1, M.window()[1]) if k in M)
    return (-1) ** above, Partition(tuple(p for p in parts if p > 0))


def bound_state_indices(M: MayaDiagram, count: int) -> list[int]:
    """First ``count`` elements of Z minus M, increasing."""
    if count < 0:
        raise ValueError("count must be >= 0")
    out = []
    m = M.window()[0]
    while len(out) < count:
        if m not in M:
            out.append(m)
        m += 1
    return out


def is_krein_adler_regular(M: MayaDiagram) -> bool:
    """Every finite block of consecutive members has even length."""
    lo, hi = M.window()
    run = None  # None while still inside the infinite lower block
    for m in range(lo, hi + 1):
        if m in M:
            if run is not None:
                run += 1
        else:
            if run:
                if run % 2:
                    return False
            run = 0
    return True
