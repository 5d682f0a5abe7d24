"""Recursively expanded Tanner graphs and their odd/even relabelings.

Two families are built by doubling a level-(L-1) graph: the plain family
(check i carries the unique even label 2i) and the prime family (check i
carries the unique odd label 2i-1).  Both start from the single check {1,2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class TannerGraph:
    """A level-L check structure: 2^{L-1} checks over variables {1..2^L}."""

    level: int
    checks: tuple[frozenset[int], ...]
    kind: str  # "plain" or "prime"

    def __post_init__(self):
        if self.kind not in ("plain", "prime"):
            raise ValueError(f"unknown kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.checks)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.checks)

    @property
    def variables(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.checks:
            out |= c
        return frozenset(out)


def _expand(L: int, kind: str, cross_offset: int) -> TannerGraph:
    """Shared doubling recursion; cross_offset is -1 for plain, 0 for prime.

    Starting from [{1,2}], each step maps the 2^{L-2} checks C_i of the
    previous level to 2^{L-1} checks:
      check i            = C_i + {2^{L-1} + 2i + cross_offset}
      check 2^{L-2} + i  = (C_i shifted by 2^{L-1}) + {2i + cross_offset}
    """
    if L < 1:
        raise ValueError(f"level must be >= 1, got {L}")
    checks: list[frozenset[int]] = [frozenset({1, 2})]
    for lvl in range(2, L + 1):
        half = 1 << (lvl - 1)
        first = [c | {half + 2 * i + cross_offset} for i, c in enumerate(checks, start=1)]
        second = [
            frozenset(u + half for u in c) | {2 * i + cross_offset}
            for i, c in enumerate(checks, start=1)
        ]
        checks = first + second
    return TannerGraph(level=L, checks=tuple(checks), kind=kind)


def expand_g(L: int) -> TannerGraph:
    """Plain-family graph G at level L (check i holds the unique label 2i)."""
    return _expand(L, "plain", cross_offset=-1)


def expand_gprime(L: int) -> TannerGraph:
    """Prime-family graph G' at level L (check i holds the unique label 2i-1)."""
    return _expand(L, "prime", cross_offset=0)


def relabel_odd(g: TannerGraph, block: int, L_total: int | None = None) -> TannerGraph:
    """Map label u to 2u-1, shifted into the given diagonal block.

    block 0 lands on odd labels 1..2^{L+1}-1, block 1 on the next odd range
    2^{L+1}+1..2^{L+2}-1 (with L = L_total, defaulting to g.level).
    """
    if block not in (0, 1):
        raise ValueError(f"block must be 0 or 1, got {block}")
    if L_total is None:
        L_total = g.level
    shift = block << (L_total + 1)
    checks = tuple(frozenset(2 * u - 1 + shift for u in c) for c in g.checks)
    return TannerGraph(level=g.level, checks=checks, kind=g.kind)


def relabel_even(g: TannerGraph) -> TannerGraph:
    """Map every variable label u to 2u."""
    checks = tuple(frozenset(2 * u for u in c) for c in g.checks)
    return TannerGraph(level=g.level, checks=checks, kind=g.kind)
