"""Turn a model back into a matching and check it without trusting the solver."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, adjacent_pairs


class DecodeError(ValueError):
    def __init__(self, kind: str, edge: int, message: str):
        self.kind = kind
        self.edge = edge
        super().__init__(message)


@dataclass(frozen=True)
class MatchingCertificate:
    matched: frozenset[int]
    index_table: tuple[int, ...]  # index_table[x - 1] is the index of edge x
    k: int

    @property
    def size(self) -> int:
        return len(self.matched)

    def to_text(self) -> str:
        return (f"matched: {' '.join(map(str, sorted(self.matched)))}\n"
                f"index: {' '.join(map(str, self.index_table))}\n")

    @classmethod
    def from_text(cls, text: str, k: int) -> "MatchingCertificate":
        fields: dict[str, list[int]] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, rest = line.partition(":")
            fields[key.strip()] = [int(t) for t in rest.split()]
        return cls(frozenset(fields["matched"]), tuple(fields["index"]), k)


def check_model(cnf, assignment: dict[int, bool]) -> list[int]:
    """Indices of clauses of ``cnf`` that ``assignment`` leaves false.

    A variable missing from the assignment counts as false for positive
    literals and as unsatisfying for negative ones, so partial models fail.
    """
    bad = []
    for n, c in enumerate(cnf.clauses):
        for lit in c.literals:
            v = assignment.get(abs(lit))
            if v is not None and v == (lit > 0):
                break
        else:
            bad.append(n)
    return bad


def decode(cnf, assignment: dict[int, bool]) -> MatchingCertificate:
    vm = cnf.varmap
    matched = frozenset(x for x in range(1, vm.m + 1)
                        if assignment.get(vm.f_var(x), False))
    table = []
    for x in range(1, vm.m + 1):
        hits = [i for i in vm.domain(x) if assignment.get(vm.l_var(i, x), False)]
        if not hits:
            raise DecodeError("no-index", x, f"edge {x} carries no index")
        if len(hits) > 1:
            raise DecodeError("duplicate-index", x,
                              f"edge {x} carries indices {hits}")
        table.append(hits[0])
    return MatchingCertificate(matched, tuple(table), vm.k)


def reconstruct_l(m: int, matched) -> tuple[int, ...]:
    """Running count of matched edges among e_1..e_x, for x = 1..m."""
    out = []
    count = 0
    for x in range(1, m + 1):
        if x in matched:
            count += 1
        out.append(count)
    return tuple(out)


def verify(cert: MatchingCertificate, g: Graph) -> list[str]:
    """Every violated property of ``cert`` on ``g``; empty means valid."""
    problems: list[str] = []
    m = g.m
    table = cert.index_table
    stray = sorted(x for x in cert.matched if not 1 <= x <= m)
    if stray:
        problems.append(f"matched edges outside 1..{m}: {stray}")
    for x, y in sorted(adjacent_pairs(g)):
        if x in cert.matched and y in cert.matched:
            problems.append(f"BFC: edges {x} and {y} share a vertex and are "
                            "both matched")
    if len(cert.matched) < cert.k:
        problems.append(f"OFC: {len(cert.matched)} matched edges < K={cert.k}")
    if len(table) != m:
        problems.append(f"index table has {len(table)} entries, expected {m}")
        return problems
    if table[0] not in (0, 1):
        problems.append(f"edge 1 has index {table[0]}, expected 0 or 1")
    for x in range(1, m):
        step = table[x] - table[x - 1]
        want = 1 if (x + 1) in cert.matched else 0
        if step != want:
            problems.append(f"index step {x}->{x + 1} is {step}, expected {want}")
    expected = reconstruct_l(m, cert.matched)
    if table != expected:
        problems.append(f"index table {list(table)} != running count "
                        f"{list(expected)}")
    if table[-1] < cert.k:
        problems.append(f"last edge index {table[-1]} < K={cert.k}")
    used = set(table)
    top = max(used)
    missing = [i for i in range(1, top) if i not in used]
    if missing:
        problems.append(f"indices {missing} inactive below active index {top}")
    if (0 in used) == (1 in cert.matched):
        problems.append("index 0 must be active exactly when edge 1 is unmatched")
    return problems
