"""Brute-force enumeration of overpartitions and their statistics.

Everything here is computed straight from the combinatorial definitions and
is meant as ground truth for the generating-function code in
:mod:`ovmoments.genfun`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

ENUMERATION_CAP = 40

KINDS = ("rank", "m2rank", "crank1", "crank2")

# contributions of the partition (1) to the crank counts, M(0,1) = -1 and M(+-1,1) = 1
_CRANK_OF_ONE = ((0, -1), (-1, 1), (1, 1))


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class Overpartition:
    """An overpartition: parts in weakly decreasing order plus overlined sizes.

    For each size in ``overlined`` the first occurrence of that size is the
    overlined one.
    """

    parts: tuple[int, ...]
    overlined: frozenset[int] = frozenset()

    def __post_init__(self):
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if not self.overlined <= set(self.parts):
            raise ValueError("an overlined size must occur among the parts")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def non_overlined_parts(self) -> tuple[int, ...]:
        """Parts left after removing the overlined first occurrences."""
        seen: set[int] = set()
        out = []
        for p in self.parts:
            if p in self.overlined and p not in seen:
                seen.add(p)
                continue
            out.append(p)
        return tuple(out)

    def __str__(self) -> str:
        if not self.parts:
            return "()"
        seen: set[int] = set()
        shown = []
        for p in self.parts:
            if p in self.overlined and p not in seen:
                seen.add(p)
                shown.append(f"{p}̅")
            else:
                shown.append(str(p))
        return "+".join(shown)


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Ordinary partitions of ``n`` in weakly decreasing order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def enumerate_overpartitions(n: int, cap: int = ENUMERATION_CAP) -> list[Overpartition]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise EnumerationCapError(f"refusing to enumerate overpartitions of {n} (cap {cap})")
    out = []
    for lam in partitions(n):
        sizes = sorted(set(lam))
        for flags in product((False, True), repeat=len(sizes)):
            over = frozenset(s for s, f in zip(sizes, flags) if f)
            out.append(Overpartition(lam, over))
    return out


def dyson_rank(lam: Overpartition) -> int:
    return lam.largest - len(lam.parts)


def m2_rank(lam: Overpartition) -> int:
    if not lam.parts:
        return 0
    ell = lam.largest
    odd_non_overlined = sum(1 for p in lam.non_overlined_parts() if p % 2)
    chi = 1 if ell % 2 and ell not in lam.overlined else 0
    return -(-ell // 2) - len(lam.parts) + odd_non_overlined - chi


def crank(parts: tuple[int, ...]) -> int:
    """Andrews-Garvan crank of an ordinary partition (the empty partition has crank 0)."""
    if not parts:
        return 0
    ones = parts.count(1)
    if ones == 0:
        return max(parts)
    return sum(1 for p in parts if p > ones) - ones


def _crank_contributions(sub: tuple[int, ...]) -> list[tuple[int, int]]:
    if sub == (1,):
        return list(_CRANK_OF_ONE)
    return [(crank(sub), 1)]


def residual_crank1_contributions(lam: Overpartition) -> list[tuple[int, int]]:
    return _crank_contributions(lam.non_overlined_parts())


def residual_crank2_contributions(lam: Overpartition) -> list[tuple[int, int]]:
    halved = tuple(p // 2 for p in lam.non_overlined_parts() if p % 2 == 0)
    return _crank_contributions(halved)


def contributions(kind: str, lam: Overpartition) -> list[tuple[int, int]]:
    if kind == "rank":
        return [(dyson_rank(lam), 1)]
    if kind == "m2rank":
        return [(m2_rank(lam), 1)]
    if kind == "crank1":
        return residual_crank1_contributions(lam)
    if kind == "crank2":
        return residual_crank2_contributions(lam)
    raise ValueError(f"unknown statistic kind {kind!r}")


@dataclass(frozen=True)
class StatisticTable:
    """Signed counts ``entries[(m, n)]`` of overpartitions of ``n`` with statistic ``m``."""

    kind: str
    n_max: int
    entries: dict[tuple[int, int], int]

    def row(self, n: int) -> dict[int, int]:
        return {m: c for (m, nn), c in self.entries.items() if nn == n and c}

    def total(self, n: int) -> int:
        return sum(self.row(n).values())

    def moment(self, k: int, n: int) -> int:
        return sum(m**k * c for m, c in self.row(n).items())


@lru_cache(maxsize=None)
def _overpartitions_cached(n: int, cap: int) -> tuple[Overpartition, ...]:
    return tuple(enumerate_overpartitions(n, cap))


def statistic_table(kind: str, n_max: int, cap: int = ENUMERATION_CAP) -> StatisticTable:
    entries: Counter = Counter()
    for n in range(n_max + 1):
        for lam in _overpartitions_cached(n, cap):
            for m, w in contributions(kind, lam):
                entries[(m, n)] += w
    return StatisticTable(kind, n_max, {k: v for k, v in entries.items() if v})


def moment(kind: str, k: int, n: int, cap: int = ENUMERATION_CAP) -> int:
    total = 0
    for lam in _overpartitions_cached(n, cap):
        for m, w in contributions(kind, lam):
            total += w * m**k
    return total


def _smallest_part_count(lam: Overpartition) -> tuple[int, int]:
    s = lam.parts[-1]
    return s, lam.parts.count(s)


def spt_statistics(n: int, cap: int = ENUMERATION_CAP) -> tuple[int, int, int]:
    """``(spt1bar(n), spt2bar(n), sptbar(n))`` by enumeration."""
    odd = even = 0
    for lam in _overpartitions_cached(n, cap):
        if not lam.parts:
            continue
        s, c = _smallest_part_count(lam)
        if s % 2:
            odd += c
        else:
            even += c
    return odd, even, odd + even


def andrews_spt(n: int) -> int:
    """Andrews' smallest parts function on ordinary partitions."""
    return sum(lam.count(lam[-1]) for lam in partitions(n) if lam)


def nov_ov(n: int, cap: int = ENUMERATION_CAP) -> tuple[int, int]:
    """Sums of non-overlined and overlined parts over all overpartitions of ``n``."""
    nov = ov = 0
    for lam in _overpartitions_cached(n, cap):
        ov += sum(lam.overlined)
        nov += lam.weight - sum(lam.overlined)
    return nov, ov


def alpha_bar(n: int, cap: int = ENUMERATION_CAP) -> int:
    """Even-rank minus odd-rank overpartitions of ``n``."""
    return sum(-1 if dyson_rank(lam) % 2 else 1 for lam in _overpartitions_cached(n, cap))
