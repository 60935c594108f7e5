"""Ground truth for the matching question by exhaustive search.

Deliberately shares nothing with the encoder or solver beyond the Graph type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph

DEFAULT_LIMIT = 22


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    max_size: int
    witness: frozenset[int]  # edge indices, 1-based


def max_matching(g: Graph, limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Maximum matching by include/exclude branching over edges in order."""
    m = g.m
    if m > limit:
        raise OracleTooLarge(f"instance too large for exhaustive oracle: "
                             f"{m} edges > limit {limit}")
    ends = [(1 << u) | (1 << v) for u, v in g.edges]
    best_size = 0
    best: list[int] = []
    chosen: list[int] = []

    def branch(x: int, used: int) -> None:
        nonlocal best_size, best
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = list(chosen)
        if x == m:
            return
        free = g.n - bin(used).count("1")
        if len(chosen) + min(m - x, free // 2) <= best_size:
            return
        mask = ends[x]
        if not used & mask:
            chosen.append(x + 1)
            branch(x + 1, used | mask)
            chosen.pop()
        branch(x + 1, used)

    branch(0, 0)
    return OracleResult(best_size, frozenset(best))


def max_matching_by_subsets(g: Graph, limit: int = 16) -> int:
    """Second opinion: largest edge subset with pairwise disjoint endpoints."""
    if g.m > limit:
        raise OracleTooLarge(f"{g.m} edges > subset-enumeration limit {limit}")
    edges = [frozenset(e) for e in g.edges]
    for size in range(min(g.m, g.n // 2), 0, -1):
        for combo in combinations(edges, size):
            if len(frozenset().union(*combo)) == 2 * size:
                return size
    return 0


def decide(g: Graph, k: int, limit: int = DEFAULT_LIMIT) -> bool:
    return max_matching(g, limit).max_size >= k
