"""CNF encoding of "is there a matching with at least K edges".

Variables are F(x), "edge x is matched", and L(i, x), "exactly i of the edges
e_1..e_x are matched". L(i, x) exists only inside the index domain of edge x
(see :class:`VarMap`). Every clause schema is instantiated with the rule that
a variable outside its domain is false: a positive literal on it is dropped,
a negative literal on it satisfies the clause, which is then not emitted.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple

from .graph import Graph, Instance, adjacent_pairs

# Emission order; also the order of the per-family counts in DIMACS comments.
FAMILIES = (
    "η3", "η2", "η5", "η8", "η9", "η10b",
    "η12", "η13", "η14", "η15", "η16", "η18",
    "η8b", "η8c", "η10d",
    "η22", "η23", "η24",
    "BFC", "η25", "η26", "η27",
    "EMPTY",
)


@dataclass(frozen=True)
class EncodeFlags:
    embed_bfc: bool = False
    tighten_ranges: bool = False
    include_redundant: bool = True

    def label(self) -> str:
        on = [name for name, v in (("embed_bfc", self.embed_bfc),
                                   ("tighten_ranges", self.tighten_ranges))
              if v]
        if not self.include_redundant:
            on.append("no_redundant")
        return "+".join(on) or "default"


ALL_FLAG_COMBINATIONS = tuple(
    EncodeFlags(e, t, r) for e in (False, True) for t in (False, True)
    for r in (True, False))


class Clause(NamedTuple):
    literals: tuple[int, ...]
    family: str


class VarMap:
    """Variable numbering for one (m, K, tighten) triple.

    F(x) is variable x. L variables follow, ordered by edge then index.
    Edge x < m may take indices 0..x; edge m only K..m. With tightening,
    edge x additionally needs index >= K - (m - x), which is the only way
    a run of m - x remaining edges can still reach K.
    """

    def __init__(self, m: int, k: int, tighten: bool = False):
        self.m = m
        self.k = k
        self.tighten = tighten
        self._lo = [0] * (m + 1)
        self._hi = [-1] * (m + 1)
        self._base = [0] * (m + 1)
        nxt = m + 1
        for x in range(1, m + 1):
            lo = k if x == m else 0
            if tighten:
                lo = max(lo, k - (m - x))
            hi = x
            self._lo[x] = lo
            self._hi[x] = hi
            self._base[x] = nxt - lo
            if hi >= lo:
                nxt += hi - lo + 1
        self.total_vars = nxt - 1

    @property
    def num_f_vars(self) -> int:
        return self.m

    @property
    def num_l_vars(self) -> int:
        return self.total_vars - self.m

    def f_var(self, x: int) -> int:
        if not 1 <= x <= self.m:
            raise IndexError(f"no edge {x}")
        return x

    def domain(self, x: int) -> range:
        if not 1 <= x <= self.m:
            return range(0)
        return range(self._lo[x], self._hi[x] + 1)

    def l_var(self, i: int, x: int) -> int | None:
        """Variable id of L(i, x), or None when undefined."""
        if 1 <= x <= self.m and self._lo[x] <= i <= self._hi[x]:
            return self._base[x] + i
        return None

    def describe(self, var: int) -> str:
        if 1 <= var <= self.m:
            return f"F({var})"
        for x in range(1, self.m + 1):
            d = self.domain(x)
            if d and self._base[x] + d.start <= var <= self._base[x] + d.stop - 1:
                return f"L({var - self._base[x]},{x})"
        raise IndexError(f"no variable {var}")

    def l_vars(self):
        """Yield (var, i, x) for every defined L variable in id order."""
        for x in range(1, self.m + 1):
            for i in self.domain(x):
                yield self._base[x] + i, i, x

    def __eq__(self, other):
        return (isinstance(other, VarMap) and
                (self.m, self.k, self.tighten) ==
                (other.m, other.k, other.tighten))

    def __hash__(self):
        return hash((self.m, self.k, self.tighten))

    def __repr__(self):
        return (f"VarMap(m={self.m}, k={self.k}, tighten={self.tighten}, "
                f"total_vars={self.total_vars})")


@dataclass
class Cnf:
    varmap: VarMap
    clauses: list[Clause]
    flags: EncodeFlags = field(default_factory=EncodeFlags)
    family_counts: dict[str, int] = field(default_factory=dict)
    # clauses[:base_len] depend only on (m, K, flags), not on the graph
    base_len: int = 0

    @property
    def num_vars(self) -> int:
        return self.varmap.total_vars

    def literal_lists(self) -> list[tuple[int, ...]]:
        return [c.literals for c in self.clauses]


def build_varmap(inst: Instance, flags: EncodeFlags = EncodeFlags()) -> VarMap:
    return VarMap(inst.graph.m, inst.k, flags.tighten_ranges)


def _make(family: str, neg=(), pos=()) -> Clause | None:
    """Instantiate a clause schema; None entries are undefined variables."""
    lits: list[int] = []
    for v in neg:
        if v is None:
            return None
        if -v not in lits:
            lits.append(-v)
    for v in pos:
        if v is None:
            continue
        if -v in lits:
            return None
        if v not in lits:
            lits.append(v)
    return Clause(tuple(lits), family)


def _collect(out: list, clause: Clause | None) -> None:
    if clause is not None:
        out.append(clause)


def emit_bfc(g: Graph, vm: VarMap) -> list[Clause]:
    return [Clause((-vm.f_var(x), -vm.f_var(y)), "BFC")
            for x, y in sorted(adjacent_pairs(g))]


def emit_uniqueness(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    for x in range(1, vm.m + 1):
        fam = "η3" if x == 1 else "η2"
        dom = vm.domain(x)
        for a, i in enumerate(dom):
            for j in dom[a + 1:]:
                out.append(Clause((-vm.l_var(i, x), -vm.l_var(j, x)), fam))
    return out


def emit_first_edge(vm: VarMap) -> list[Clause]:
    c = _make("η5", pos=(vm.l_var(1, 1), vm.l_var(0, 1)))
    return [c]


def emit_forward(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L = vm.l_var
    for x in range(1, vm.m):
        for i in vm.domain(x):
            _collect(out, _make("η8", neg=(L(i, x),),
                                pos=(L(i, x + 1), L(i + 1, x + 1))))
    return out


def emit_forward_tighten(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L = vm.l_var
    for x in range(1, vm.m):
        nxt = vm.domain(x + 1)
        for i in vm.domain(x):
            for j in nxt:
                if j != i and j != i + 1:
                    out.append(Clause((-L(i, x), -L(j, x + 1)), "η9"))
    return out


def emit_last_edge_forcing(vm: VarMap) -> list[Clause]:
    m, k = vm.m, vm.k
    if m < 2:
        return []
    c = _make("η10b", neg=(vm.l_var(k - 1, m - 1),), pos=(vm.l_var(k, m),))
    return [c] if c is not None else []


def emit_match_defs(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L, F, m = vm.l_var, vm.f_var, vm.m
    _collect(out, _make("η12", neg=(L(1, 1),), pos=(F(1),)))
    _collect(out, _make("η13", neg=(L(0, 1), F(1))))
    for x in range(2, m):
        _collect(out, _make("η14", neg=(L(0, x), F(x))))
    for x in range(2, m):
        _collect(out, _make("η15", neg=(L(0, x),), pos=(L(0, x - 1),)))
    for x in range(2, m + 1):
        for i in vm.domain(x):
            if i >= 1:
                _collect(out, _make("η16", neg=(L(i, x), L(i - 1, x - 1)),
                                    pos=(F(x),)))
    for x in range(2, m + 1):
        for i in vm.domain(x):
            if i >= 1:
                _collect(out, _make("η18", neg=(L(i, x), L(i, x - 1), F(x))))
    return out


def emit_forward_matched(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L, F, m, k = vm.l_var, vm.f_var, vm.m, vm.k
    for x in range(1, m):
        for i in vm.domain(x):
            _collect(out, _make("η8b", neg=(L(i, x), F(x + 1)),
                                pos=(L(i + 1, x + 1),)))
    for x in range(1, m):
        for i in vm.domain(x):
            _collect(out, _make("η8c", neg=(L(i, x),),
                                pos=(F(x + 1), L(i, x + 1))))
    if m >= 2:
        _collect(out, _make("η10d", neg=(L(k - 1, m - 1),), pos=(F(m),)))
        _collect(out, _make("η10d", neg=(L(k - 1, m - 1),), pos=(L(k, m),)))
    return out


def emit_backward(vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L, F, m = vm.l_var, vm.f_var, vm.m
    for x in range(2, m + 1):
        for i in vm.domain(x):
            if i >= 1:
                _collect(out, _make("η22", neg=(L(i, x), F(x)),
                                    pos=(L(i - 1, x - 1),)))
    for x in range(2, m + 1):
        for i in vm.domain(x):
            if i >= 1:
                _collect(out, _make("η23", neg=(L(i, x),),
                                    pos=(F(x), L(i, x - 1))))
    for p in range(2, m + 1):
        _collect(out, _make("η24", neg=(L(p, p),), pos=(L(p - 1, p - 1),)))
    return out


def emit_bfc_embedding(g: Graph, vm: VarMap) -> list[Clause]:
    out: list[Clause] = []
    L, F = vm.l_var, vm.f_var
    pairs = sorted(adjacent_pairs(g))
    for x, y in pairs:
        for i in vm.domain(x):
            if i < 1:
                continue
            for j in vm.domain(y):
                if j <= i:
                    continue
                _collect(out, _make("η25", neg=(L(i, x), L(j, y)),
                                    pos=(L(i, x - 1), L(j, y - 1))))
                _collect(out, _make("η26", neg=(L(i, x), L(j, y), F(x), F(y))))
    for x, y in pairs:
        _collect(out, _make("η27", neg=(L(y, y),)))
    return out


def emit_empty_domains(vm: VarMap) -> list[Clause]:
    """Every edge must carry an index, so an edge with no index variable at
    all makes the formula unsatisfiable. Emitted as the empty clause."""
    return [Clause((), "EMPTY") for x in range(1, vm.m + 1)
            if not vm.domain(x)][:1]


def _dedup(groups: Iterable[list[Clause]], seen: set,
           counts: Counter) -> list[Clause]:
    out = []
    for group in groups:
        for c in group:
            counts[c.family] += 1
            key = frozenset(c.literals)
            if key in seen:
                continue
            seen.add(key)
            out.append(c)
    return out


@lru_cache(maxsize=128)
def _graph_free_part(m: int, k: int, flags: EncodeFlags):
    vm = VarMap(m, k, flags.tighten_ranges)
    groups = []
    if flags.include_redundant:
        groups.append(emit_uniqueness(vm))
    groups += [emit_first_edge(vm), emit_forward(vm),
               emit_forward_tighten(vm), emit_last_edge_forcing(vm),
               emit_match_defs(vm), emit_forward_matched(vm),
               emit_backward(vm)]
    seen: set = set()
    counts: Counter = Counter()
    clauses = _dedup(groups, seen, counts)
    empty = emit_empty_domains(vm)
    clauses += _dedup([empty], seen, counts)
    return vm, tuple(clauses), frozenset(seen), dict(counts)


def graph_free_clauses(m: int, k: int,
                       flags: EncodeFlags = EncodeFlags()) -> tuple[Clause, ...]:
    """The clauses that depend only on (m, K, flags); cached."""
    return _graph_free_part(m, k, flags)[1]


def encode(inst: Instance, flags: EncodeFlags = EncodeFlags()) -> Cnf:
    """Full formula for ``inst``. Deterministic for fixed input and flags.

    Duplicate clauses are merged (first family wins); ``family_counts``
    reports counts before merging.
    """
    g = inst.graph
    vm, base, base_keys, base_counts = _graph_free_part(g.m, inst.k, flags)
    counts = Counter(base_counts)
    groups = [emit_bfc(g, vm)]
    if flags.embed_bfc:
        groups.append(emit_bfc_embedding(g, vm))
    extra = _dedup(groups, set(base_keys), counts)
    ordered = {f: counts[f] for f in FAMILIES if counts.get(f)}
    return Cnf(vm, list(base) + extra, flags, ordered, len(base))


def to_dimacs(cnf: Cnf) -> str:
    vm = cnf.varmap
    lines = [f"c matching encoding m={vm.m} K={vm.k} flags={cnf.flags.label()}"]
    for x in range(1, vm.m + 1):
        lines.append(f"c var {x} = F({x})")
    for var, i, x in vm.l_vars():
        lines.append(f"c var {var} = L({i},{x})")
    for fam, n in cnf.family_counts.items():
        lines.append(f"c family {fam} count={n}")
    lines.append(f"p cnf {vm.total_vars} {len(cnf.clauses)}")
    for c in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in c.literals + (0,)))
    return "\n".join(lines) + "\n"
