"""Graph instances, the edge-list file format, and edge adjacency."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

MIN_K = 2


class GraphError(ValueError):
    """Invalid graph input. ``kind`` names the violated rule, ``line`` the
    offending 1-based line of the source document (when parsed from text)."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n.

    The position of an edge in ``edges`` is its index: ``edges[0]`` is e_1.
    Construction does not validate; use :meth:`validate` or
    :func:`parse_graph`.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, x: int) -> tuple[int, int]:
        return self.edges[x - 1]

    @cached_property
    def incidence(self) -> dict[int, tuple[int, ...]]:
        """Vertex -> indices of incident edges, ascending."""
        inc: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for x, (u, v) in enumerate(self.edges, start=1):
            inc[u].append(x)
            inc[v].append(x)
        return {v: tuple(xs) for v, xs in inc.items()}

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {1}
        stack = [1]
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def validate(self, require_connected: bool = True) -> "Graph":
        _check_edges(self.n, self.edges)
        _check_connected(self, require_connected, line=None)
        return self

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, tuple(edges), self.name)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    k: int


def _check_edges(n: int, edges, lines: list[int] | None = None) -> None:
    if n < 2:
        raise GraphError("too-few-vertices", f"need n >= 2, got n={n}",
                         lines[0] if lines else None)
    if not edges:
        raise GraphError("no-edges", "need at least one edge",
                         lines[0] if lines else None)
    seen: set[frozenset[int]] = set()
    for pos, (u, v) in enumerate(edges):
        line = lines[pos + 1] if lines else None
        for w in (u, v):
            if not 1 <= w <= n:
                raise GraphError("vertex-range",
                                 f"vertex {w} outside 1..{n}", line)
        if u == v:
            raise GraphError("self-loop", f"self-loop at vertex {u}", line)
        key = frozenset((u, v))
        if key in seen:
            raise GraphError("duplicate-edge",
                             f"duplicate edge {u} {v}", line)
        seen.add(key)


def _check_connected(g: Graph, require: bool, line: int | None) -> None:
    if g.is_connected():
        return
    if require:
        raise GraphError("disconnected", "graph is not connected", line)
    warnings.warn("graph is not connected; the encoding does not depend on "
                  "connectivity", stacklevel=3)


def parse_graph(text: str, name: str | None = None,
                require_connected: bool = True) -> Graph:
    """Parse the edge-list format: header ``n m`` then m lines ``u v``.

    ``#`` comment lines and blank lines are skipped. Edge order is the order
    of appearance.
    """
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphError("malformed", f"expected integers, got {s!r}",
                             lineno) from None
        if len(nums) != 2 or any(v < 0 for v in nums):
            raise GraphError("malformed",
                             f"expected two non-negative integers, got {s!r}",
                             lineno)
        rows.append((lineno, nums))
    if not rows:
        raise GraphError("malformed", "missing header line 'n m'")
    header_line, (n, m) = rows[0]
    body = rows[1:]
    if len(body) != m:
        bad = body[m][0] if len(body) > m else header_line
        raise GraphError("malformed",
                         f"header declares {m} edges, found {len(body)}", bad)
    edges = tuple((u, v) for _, (u, v) in body)
    lines = [header_line] + [ln for ln, _ in body]
    _check_edges(n, edges, lines)
    g = Graph(n, edges, name)
    _check_connected(g, require_connected, header_line)
    return g


def serialize_graph(g: Graph) -> str:
    out = []
    if g.name:
        out.append(f"# {g.name}")
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def read_graph(path, require_connected: bool = True) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), name=str(path),
                           require_connected=require_connected)


def adjacent_pairs(g: Graph) -> frozenset[tuple[int, int]]:
    """All (x, y), x < y, such that edges e_x and e_y share an endpoint."""
    pairs = set()
    for xs in g.incidence.values():
        for a in range(len(xs)):
            for b in range(a + 1, len(xs)):
                pairs.add((xs[a], xs[b]))
    return frozenset(pairs)


def validate_instance(g: Graph, k: int,
                      require_connected: bool = True) -> Instance:
    """Check the matching-problem assumptions and bundle (graph, K).

    K larger than the edge count is accepted; such instances encode to an
    unsatisfiable formula.
    """
    if not isinstance(k, int) or isinstance(k, bool):
        raise InstanceError(f"K must be an integer, got {k!r}")
    if k < MIN_K:
        raise InstanceError(f"K={k} is below the minimum K >= {MIN_K}")
    g.validate(require_connected)
    return Instance(g, k)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((v, v + 1) for v in range(1, n)), f"P{n}")


def cycle_graph(n: int) -> Graph:
    edges = [(v, v + 1) for v in range(1, n)] + [(1, n)]
    return Graph(n, tuple(edges), f"C{n}")


def complete_graph(n: int) -> Graph:
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    return Graph(n, tuple(edges), f"K{n}")


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((1, v) for v in range(2, leaves + 2)),
                 f"K1,{leaves}")
