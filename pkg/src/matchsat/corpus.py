"""Exhaustive small-graph corpus: solver answers against the oracle.

Every connected simple labeled graph on up to ``max_n`` vertices is encoded
for each K and flag variant, solved, and compared with the exhaustive
maximum matching. SAT answers are decoded and verified. Disagreements are
shrunk greedily to a small reproducer.
"""

from __future__ import annotations

import itertools
import json
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .certifier import DecodeError, check_model, decode, verify
from .encoder import Cnf, EncodeFlags, encode
from .graph import Graph, Instance, serialize_graph
from .oracle import max_matching
from .solver import SolveResult, Solver, Status

FLAG_SWEEP = tuple(EncodeFlags(embed_bfc=e, tighten_ranges=t)
                   for e in (False, True) for t in (False, True))


def connected_graphs(n: int) -> Iterator[Graph]:
    """All connected simple graphs on labeled vertices 1..n.

    Edges are listed in lexicographic order of their endpoint pairs.
    """
    slots = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1, 1 << len(slots)):
        edges = tuple(e for b, e in enumerate(slots) if mask >> b & 1)
        if _spans(n, edges):
            yield Graph(n, edges)


def _spans(n: int, edges) -> bool:
    nbr = [0] * (n + 1)
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    reach = frontier = 1 << 1
    while frontier:
        new = 0
        for v in range(1, n + 1):
            if frontier >> v & 1:
                new |= nbr[v]
        frontier = new & ~reach
        reach |= new
    return reach == (1 << (n + 1)) - 2


def corpus_graphs(max_n: int, min_n: int = 2) -> list[Graph]:
    return [g for n in range(min_n, max_n + 1) for g in connected_graphs(n)]


def edge_orderings(g: Graph) -> Iterator[Graph]:
    """``g`` under every permutation of its edge list (identity first)."""
    for perm in itertools.permutations(g.edges):
        yield g.with_edges(perm)


@dataclass(frozen=True)
class CorpusSpec:
    max_n: int = 6
    min_n: int = 2
    k_range: str | tuple[int, ...] = "all"
    flag_variants: tuple[EncodeFlags, ...] = (EncodeFlags(),)
    # graphs with n <= orderings_max_n are also run under every edge order
    orderings_max_n: int = 0
    budget: int | None = None

    def ks(self, m: int) -> Sequence[int]:
        if self.k_range == "all":
            return range(2, m + 1)
        return tuple(self.k_range)


@dataclass
class Discrepancy:
    instance: Instance
    flags: EncodeFlags
    sat_answer: str
    oracle_answer: bool
    shrunk: Instance | None = None
    ordering: tuple[tuple[int, int], ...] | None = None

    def to_dict(self) -> dict:
        d = {
            "graph": serialize_graph(self.instance.graph),
            "k": self.instance.k,
            "flags": self.flags.label(),
            "sat_answer": self.sat_answer,
            "oracle_answer": self.oracle_answer,
        }
        if self.shrunk is not None:
            d["shrunk_graph"] = serialize_graph(self.shrunk.graph)
            d["shrunk_k"] = self.shrunk.k
        return d


@dataclass
class CorpusSummary:
    graphs: int = 0
    instances: int = 0
    agree_sat: int = 0
    agree_unsat: int = 0
    disagree: int = 0
    budget_exhausted: int = 0
    decided_by_propagation: int = 0
    certificates_checked: int = 0
    certificate_failures: list[str] = field(default_factory=list)
    flag_differences: list[str] = field(default_factory=list)
    ordering_differences: list[str] = field(default_factory=list)
    discrepancies: list[Discrepancy] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def clean(self) -> bool:
        return not (self.disagree or self.budget_exhausted
                    or self.certificate_failures or self.flag_differences
                    or self.ordering_differences)

    def merge(self, other: "CorpusSummary") -> None:
        for name in ("graphs", "instances", "agree_sat", "agree_unsat",
                     "disagree", "budget_exhausted", "decided_by_propagation",
                     "certificates_checked"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.certificate_failures += other.certificate_failures
        self.flag_differences += other.flag_differences
        self.ordering_differences += other.ordering_differences
        self.discrepancies += other.discrepancies

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "graphs": self.graphs,
            "instances": self.instances,
            "agree_sat": self.agree_sat,
            "agree_unsat": self.agree_unsat,
            "disagree": self.disagree,
            "budget_exhausted": self.budget_exhausted,
            "decided_by_propagation": self.decided_by_propagation,
            "certificates_checked": self.certificates_checked,
            "certificate_failures": self.certificate_failures,
            "flag_differences": self.flag_differences,
            "ordering_differences": self.ordering_differences,
            "discrepancies": [x.to_dict() for x in self.discrepancies],
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


class Checker:
    """Encodes and solves instances, reusing a solver built from the
    graph-independent clause block of each (m, K, flags)."""

    def __init__(self, budget: int | None = None, cache_size: int = 96,
                 drop_families: Iterable[str] = ()):
        self.budget = budget
        self.cache_size = cache_size
        # ablation hook: clause families left out of every formula
        self.drop_families = frozenset(drop_families)
        self._templates: OrderedDict = OrderedDict()

    def encode(self, inst: Instance, flags: EncodeFlags) -> Cnf:
        cnf = encode(inst, flags)
        if self.drop_families:
            keep = [c for c in cnf.clauses[:cnf.base_len]
                    if c.family not in self.drop_families]
            rest = [c for c in cnf.clauses[cnf.base_len:]
                    if c.family not in self.drop_families]
            cnf = Cnf(cnf.varmap, keep + rest, cnf.flags, cnf.family_counts,
                      len(keep))
        return cnf

    def _template(self, cnf: Cnf) -> Solver:
        key = (cnf.varmap.m, cnf.varmap.k, cnf.flags)
        tpl = self._templates.get(key)
        if tpl is None:
            tpl = Solver(cnf.num_vars,
                         [c.literals for c in cnf.clauses[:cnf.base_len]])
            self._templates[key] = tpl
            if len(self._templates) > self.cache_size:
                self._templates.popitem(last=False)
        else:
            self._templates.move_to_end(key)
        return tpl

    def solve(self, inst: Instance, flags: EncodeFlags) -> tuple[Cnf, SolveResult]:
        cnf = self.encode(inst, flags)
        s = self._template(cnf).fork()
        s.add_clauses(c.literals for c in cnf.clauses[cnf.base_len:])
        return cnf, s.solve(budget=self.budget)

    def disagrees(self, inst: Instance, flags: EncodeFlags) -> bool:
        _, r = self.solve(inst, flags)
        if not r.decided:
            return False
        return r.sat != (max_matching(inst.graph).max_size >= inst.k)


def certificate_problems(cnf: Cnf, r: SolveResult, g: Graph) -> list[str]:
    bad = check_model(cnf, r.assignment)
    if bad:
        return [f"model falsifies clauses {bad[:5]}"]
    try:
        cert = decode(cnf, r.assignment)
    except DecodeError as exc:
        return [f"decode: {exc}"]
    return verify(cert, g)


def _shrink_candidates(inst: Instance) -> Iterator[Instance]:
    g, k = inst.graph, inst.k
    if g.m > 1:
        for drop in range(g.m):
            edges = g.edges[:drop] + g.edges[drop + 1:]
            h = _compact(g.n, edges)
            if h is not None:
                yield Instance(h, k)
    for v in range(1, g.n + 1):
        edges = tuple(e for e in g.edges if v not in e)
        h = _compact(g.n, edges)
        if h is not None:
            yield Instance(h, k)
    if k > 2:
        yield Instance(g, k - 1)


def _compact(n: int, edges) -> Graph | None:
    """Drop isolated vertices and relabel; None unless connected with an edge."""
    if not edges:
        return None
    used = sorted({w for e in edges for w in e})
    relabel = {v: i for i, v in enumerate(used, start=1)}
    h = Graph(len(used), tuple((relabel[u], relabel[v]) for u, v in edges))
    if h.n < 2 or not h.is_connected():
        return None
    return h


def shrink(inst: Instance, fails: Callable[[Instance], bool],
           max_steps: int = 1000) -> Instance:
    """Greedy reduction: drop an edge, else a vertex, else lower K, keeping
    ``fails`` true. Returns the first local minimum found."""
    for _ in range(max_steps):
        for cand in _shrink_candidates(inst):
            if fails(cand):
                inst = cand
                break
        else:
            return inst
    return inst


def check_graph(gid: int, g: Graph, spec: CorpusSpec,
                checker: Checker) -> CorpusSummary:
    out = CorpusSummary(graphs=1)
    oracle = max_matching(g).max_size
    orderings = [g]
    if g.n <= spec.orderings_max_n:
        orderings = list(edge_orderings(g))
    first = spec.flag_variants[0]
    # (flags, K) -> answer in file order
    canonical: dict[tuple[EncodeFlags, int], bool] = {}
    for flags in spec.flag_variants:
        for order_no, h in enumerate(orderings):
            for k in spec.ks(h.m):
                inst = Instance(h, k)
                cnf, r = checker.solve(inst, flags)
                out.instances += 1
                if not r.decided:
                    out.budget_exhausted += 1
                    continue
                if r.stats.decisions == 0:
                    out.decided_by_propagation += 1
                expected = oracle >= k
                label = f"graph#{gid} {list(h.edges)} K={k} {flags.label()}"
                if r.sat != expected:
                    out.disagree += 1
                    shrunk = shrink(inst, lambda c: checker.disagrees(c, flags))
                    out.discrepancies.append(Discrepancy(
                        inst, flags, r.status.value, expected, shrunk,
                        h.edges if order_no else None))
                elif r.sat:
                    out.agree_sat += 1
                else:
                    out.agree_unsat += 1
                if r.sat:
                    out.certificates_checked += 1
                    for p in certificate_problems(cnf, r, h):
                        out.certificate_failures.append(f"{label}: {p}")
                if order_no == 0:
                    canonical[(flags, k)] = r.sat
                    ref, why = canonical.get((first, k)), first.label()
                    if flags == first:
                        ref = None
                    target = out.flag_differences
                else:
                    ref, why = canonical.get((flags, k)), "file order"
                    target = out.ordering_differences
                if ref is not None and ref != r.sat:
                    target.append(f"{label}: {r.status.value} vs "
                                  f"{'SAT' if ref else 'UNSAT'} under {why}")
    return out


_worker_checker: Checker | None = None


def _run_chunk(args) -> list[tuple[int, CorpusSummary]]:
    global _worker_checker
    chunk, spec = args
    if _worker_checker is None or _worker_checker.budget != spec.budget:
        _worker_checker = Checker(budget=spec.budget)
    return [(gid, check_graph(gid, g, spec, _worker_checker))
            for gid, g in chunk]


def run_corpus(spec: CorpusSpec, workers: int = 1,
               graphs: Sequence[Graph] | None = None,
               checker: Checker | None = None,
               progress: Callable[[int, int], None] | None = None) -> CorpusSummary:
    """Run the whole corpus; results are merged in graph order regardless
    of ``workers``."""
    t0 = time.perf_counter()
    if graphs is None:
        graphs = corpus_graphs(spec.max_n, spec.min_n)
    items = list(enumerate(graphs))
    # group by edge count so cached solver templates are reused
    items.sort(key=lambda it: (it[1].m, it[0]))
    chunks = [items[i:i + 64] for i in range(0, len(items), 64)]
    results: list[tuple[int, CorpusSummary]] = []
    if workers <= 1 or checker is not None:
        checker = checker or Checker(budget=spec.budget)
        for n, chunk in enumerate(chunks):
            results += [(gid, check_graph(gid, g, spec, checker))
                        for gid, g in chunk]
            if progress:
                progress(n + 1, len(chunks))
    else:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(workers) as pool:
            for n, part in enumerate(pool.imap_unordered(
                    _run_chunk, [(c, spec) for c in chunks])):
                results += part
                if progress:
                    progress(n + 1, len(chunks))
    results.sort(key=lambda r: r[0])
    total = CorpusSummary()
    for _, s in results:
        total.merge(s)
    total.seconds = time.perf_counter() - t0
    return total


def write_report(summary: CorpusSummary, path, timing: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary.to_dict(timing), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
