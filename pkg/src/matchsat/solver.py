"""DPLL search with unit propagation and chronological backtracking.

Literal-indexed tables use Python's negative indexing: a list of length
2n + 1 holds literal ``l`` at ``[l]`` and ``-l`` at ``[-l]`` without
collision. Binary clauses become implication lists; longer clauses use two
watched literals. No clause learning.
"""

from __future__ import annotations

import enum
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    # propagation-only mode stopped without a verdict
    UNDECIDED = "UNDECIDED"


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    seconds: float = 0.0


@dataclass
class SolveResult:
    status: Status
    assignment: dict[int, bool] | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT

    @property
    def decided(self) -> bool:
        return self.status in (Status.SAT, Status.UNSAT)


@dataclass
class Propagation:
    """Outcome of :func:`unit_propagate`: either the closed assignment or
    the clause that became false."""

    assignment: dict[int, bool]
    conflict: int | None = None  # index of the falsified clause


@dataclass(frozen=True)
class StructureReport:
    sign_histogram: dict[tuple[int, int], int]  # (#pos, #neg) -> clauses
    width_histogram: dict[int, int]
    max_width: int
    is_horn: bool
    all_have_negative_except: tuple[str, ...]
    num_clauses: int

    def to_dict(self) -> dict:
        return {
            "sign_histogram": [[p, n, c] for (p, n), c in
                               sorted(self.sign_histogram.items())],
            "width_histogram": {str(w): c for w, c in
                                sorted(self.width_histogram.items())},
            "max_width": self.max_width,
            "is_horn": self.is_horn,
            "all_have_negative_except": list(self.all_have_negative_except),
            "num_clauses": self.num_clauses,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StructureReport":
        return cls(
            sign_histogram={(p, n): c for p, n, c in d["sign_histogram"]},
            width_histogram={int(w): c for w, c in d["width_histogram"].items()},
            max_width=d["max_width"],
            is_horn=d["is_horn"],
            all_have_negative_except=tuple(d["all_have_negative_except"]),
            num_clauses=d["num_clauses"],
        )


class Solver:
    """Clause database plus search state over variables 1..num_vars.

    ``order`` fixes the branching sequence (default 1..n); ``phase`` is the
    value tried first (default False).
    """

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = (),
                 order: Sequence[int] | None = None, phase: bool = False):
        self.num_vars = num_vars
        size = 2 * num_vars + 1
        self.val = [0] * size
        self.imp: list[list[int]] = [[] for _ in range(size)]
        self.watch: list[list[list[int]]] = [[] for _ in range(size)]
        self.units: list[int] = []
        self.has_empty = False
        self.order = list(order) if order is not None else list(
            range(1, num_vars + 1))
        if sorted(self.order) != list(range(1, num_vars + 1)):
            raise ValueError("order must be a permutation of 1..num_vars")
        self.phase = phase
        self.trail: list[int] = []
        self.stats = SolveStats()
        self.add_clauses(clauses)

    def fork(self) -> "Solver":
        """Independent copy of the clause database, with empty search state."""
        other = Solver.__new__(Solver)
        other.num_vars = self.num_vars
        other.val = [0] * len(self.val)
        other.imp = [list(x) for x in self.imp]
        copies: dict[int, list[int]] = {}
        watch = []
        for ws in self.watch:
            row = []
            for c in ws:
                cc = copies.get(id(c))
                if cc is None:
                    cc = copies[id(c)] = list(c)
                row.append(cc)
            watch.append(row)
        other.watch = watch
        other.units = list(self.units)
        other.has_empty = self.has_empty
        other.order = self.order
        other.phase = self.phase
        other.trail = []
        other.stats = SolveStats()
        return other

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        imp, watch = self.imp, self.watch
        for c in clauses:
            n = len(c)
            if n > 1:
                c = tuple(dict.fromkeys(c))
                if any(-lit in c for lit in c):
                    continue
                n = len(c)
            if n == 2:
                a, b = c
                imp[-a].append(b)
                imp[-b].append(a)
            elif n > 2:
                lits = list(c)
                watch[lits[0]].append(lits)
                watch[lits[1]].append(lits)
            elif n == 1:
                self.units.append(c[0])
            else:
                self.has_empty = True

    def _assign(self, lit: int) -> None:
        self.val[lit] = 1
        self.val[-lit] = -1
        self.trail.append(lit)

    def _undo(self, pos: int) -> None:
        val, trail = self.val, self.trail
        for lit in trail[pos:]:
            val[lit] = 0
            val[-lit] = 0
        del trail[pos:]

    def _propagate(self, head: int) -> list[int] | None:
        """Propagate trail[head:]; return a falsified clause or None."""
        val, imp, watch, trail = self.val, self.imp, self.watch, self.trail
        start = len(trail)
        try:
            return self._propagate_loop(head, val, imp, watch, trail)
        finally:
            self.stats.propagations += len(trail) - start

    @staticmethod
    def _propagate_loop(head, val, imp, watch, trail):
        while head < len(trail):
            p = trail[head]
            head += 1
            for q in imp[p]:
                vq = val[q]
                if vq == 0:
                    val[q] = 1
                    val[-q] = -1
                    trail.append(q)
                elif vq < 0:
                    return [-p, q]
            false_lit = -p
            ws = watch[false_lit]
            if not ws:
                continue
            keep = []
            n = len(ws)
            k = 0
            while k < n:
                c = ws[k]
                k += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                other = c[0]
                if val[other] > 0:
                    keep.append(c)
                    continue
                for t in range(2, len(c)):
                    lt = c[t]
                    if val[lt] >= 0:
                        c[1] = lt
                        c[t] = false_lit
                        watch[lt].append(c)
                        break
                else:
                    keep.append(c)
                    if val[other] == 0:
                        val[other] = 1
                        val[-other] = -1
                        trail.append(other)
                    else:
                        keep.extend(ws[k:])
                        watch[false_lit] = keep
                        return list(c)
            watch[false_lit] = keep
        return None

    def _root(self) -> list[int] | None:
        """Assert unit clauses and propagate at level 0."""
        if self.has_empty:
            return []
        for u in self.units:
            v = self.val[u]
            if v < 0:
                return [u]
            if v == 0:
                self._assign(u)
                self.stats.propagations += 1
        return self._propagate(0)

    def _model(self) -> dict[int, bool]:
        val = self.val
        return {v: val[v] > 0 for v in range(1, self.num_vars + 1)}

    def propagate_only(self) -> tuple[dict[int, bool], list[int] | None]:
        conflict = self._root()
        val = self.val
        partial = {v: val[v] > 0 for v in range(1, self.num_vars + 1)
                   if val[v] != 0}
        return partial, conflict

    def solve(self, budget: int | None = None,
              propagate_only: bool = False) -> SolveResult:
        """Complete search. ``budget`` caps decisions + propagated
        assignments; exceeding it yields BUDGET_EXHAUSTED, never UNSAT."""
        t0 = time.perf_counter()
        stats = self.stats
        result = self._search(budget, propagate_only)
        stats.seconds = time.perf_counter() - t0
        result.stats = stats
        return result

    def _search(self, budget, propagate_only) -> SolveResult:
        stats = self.stats
        trail = self.trail
        if self._root() is not None:
            stats.conflicts += 1
            return SolveResult(Status.UNSAT)
        order, val = self.order, self.val
        first = 1 if self.phase else -1
        nvars = len(order)
        ptr = 0
        # (trail length before decision, decided literal, order position,
        #  whether the second value is already being tried)
        stack: list[tuple[int, int, int, bool]] = []
        limit = budget if budget is not None else -1
        while True:
            while ptr < nvars and val[order[ptr]] != 0:
                ptr += 1
            if ptr == nvars:
                return SolveResult(Status.SAT, self._model())
            if propagate_only:
                return SolveResult(Status.UNDECIDED)
            if limit >= 0 and stats.decisions + stats.propagations >= limit:
                return SolveResult(Status.BUDGET_EXHAUSTED)
            lit = first * order[ptr]
            stack.append((len(trail), lit, ptr, False))
            stats.decisions += 1
            head = len(trail)
            self._assign(lit)
            while self._propagate(head) is not None:
                stats.conflicts += 1
                while stack and stack[-1][3]:
                    stack.pop()
                if not stack:
                    return SolveResult(Status.UNSAT)
                pos, lit, ptr, _ = stack.pop()
                self._undo(pos)
                stack.append((pos, -lit, ptr, True))
                head = pos
                self._assign(-lit)


def solve(cnf, budget: int | None = None, order: Sequence[int] | None = None,
          phase: bool = False, propagate_only: bool = False) -> SolveResult:
    """Decide an encoder :class:`~matchsat.encoder.Cnf`."""
    s = Solver(cnf.num_vars, cnf.literal_lists(), order=order, phase=phase)
    return s.solve(budget=budget, propagate_only=propagate_only)


def solve_clauses(num_vars: int, clauses: Iterable[Sequence[int]], **kw) -> SolveResult:
    budget = kw.pop("budget", None)
    propagate_only = kw.pop("propagate_only", False)
    s = Solver(num_vars, clauses, **kw)
    return s.solve(budget=budget, propagate_only=propagate_only)


def unit_propagate(cnf, partial: dict[int, bool] | None = None) -> Propagation:
    """Close ``partial`` under unit resolution over the clauses of ``cnf``.

    ``cnf`` may be an encoder Cnf or a ``(num_vars, clauses)`` pair.
    """
    if isinstance(cnf, tuple):
        num_vars, clauses = cnf
        clauses = [tuple(c) for c in clauses]
    else:
        num_vars, clauses = cnf.num_vars, cnf.literal_lists()
    units = [v if b else -v for v, b in (partial or {}).items()]
    s = Solver(num_vars, clauses)
    s.units = units + s.units
    fixpoint, conflict = s.propagate_only()
    if conflict is None:
        return Propagation(fixpoint)
    key = frozenset(conflict)
    idx = next((n for n, c in enumerate(clauses) if frozenset(c) == key), -1)
    return Propagation(fixpoint, idx)


def analyze_structure(cnf) -> StructureReport:
    signs: Counter = Counter()
    widths: Counter = Counter()
    no_negative: set[str] = set()
    for c in cnf.clauses:
        pos = sum(1 for lit in c.literals if lit > 0)
        neg = len(c.literals) - pos
        signs[(pos, neg)] += 1
        widths[len(c.literals)] += 1
        if neg == 0:
            no_negative.add(c.family)
    return StructureReport(
        sign_histogram=dict(sorted(signs.items())),
        width_histogram=dict(sorted(widths.items())),
        max_width=max(widths) if widths else 0,
        is_horn=all(p <= 1 for p, _ in signs),
        all_have_negative_except=tuple(sorted(no_negative)),
        num_clauses=len(cnf.clauses),
    )


def parse_dimacs(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Read DIMACS CNF. Clauses may span lines; ``c`` lines are comments."""
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("c") or s.startswith("%"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {s!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        for tok in s.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"line {lineno}: literal {lit} out of range")
                cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if num_vars is None:
        raise ValueError("missing problem line")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return num_vars, clauses


def solve_dimacs(text: str, **kw) -> SolveResult:
    num_vars, clauses = parse_dimacs(text)
    return solve_clauses(num_vars, clauses, **kw)
