"""Remove the fewest segments so that the arrangement has a single cell.

When no point lies on three segments, an arrangement with n segments,
k intersecting pairs and c connected pieces has exactly k - n + c + 1 faces,
which is one more than the cycle rank of the intersection graph.  So the
arrangement collapses to one cell exactly when the surviving segments form a
forest in the intersection graph, and the task becomes feedback vertex set.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import arrangement
from .errors import InternalConsistencyError, PreconditionError, TooLargeError
from .geom import triple_points
from .separation import intersection_graph

DEFAULT_GUARD = 14


class Mode(enum.Enum):
    EXACT = "exact"
    APPROX2 = "approx2"
    BRUTE = "brute"


@dataclass
class AllCellsResult:
    removed: tuple
    mode: Mode
    stats: dict = field(default_factory=dict)


def simple_graph(segments) -> dict:
    """Intersection graph as {id: set of neighbour ids}."""
    G = intersection_graph(list(segments))
    return {s: set(G.adj[s]) for s in G.adj}


def is_forest(graph: dict, removed=()) -> bool:
    removed = set(removed)
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for u in graph:
        if u in removed:
            continue
        for v in graph[u]:
            if v in removed or not u < v:
                continue
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
    return True


def brute_force_fvs(graph: dict) -> tuple:
    verts = sorted(graph)
    for k in range(len(verts) + 1):
        for combo in combinations(verts, k):
            if is_forest(graph, combo):
                return combo
    return tuple(verts)


# ---------------------------------------------------------------------------
# Exact search
# ---------------------------------------------------------------------------

class Multigraph:
    """Undirected multigraph with self-loops, adj[u][v] = multiplicity."""

    def __init__(self, adj=None):
        self.adj = {u: dict(nb) for u, nb in (adj or {}).items()}

    @classmethod
    def from_simple(cls, graph: dict):
        return cls({u: {v: 1 for v in nb} for u, nb in graph.items()})

    def copy(self):
        return Multigraph(self.adj)

    def degree(self, u) -> int:
        # a self-loop adds two to the degree
        return sum(self.adj[u].values()) + self.adj[u].get(u, 0)

    def remove(self, u):
        for v in self.adj.pop(u):
            if v != u:
                del self.adj[v][u]

    def add_edge(self, u, v):
        self.adj[u][v] = self.adj[u].get(v, 0) + 1
        if u != v:
            self.adj[v][u] = self.adj[v].get(u, 0) + 1


def reduce_graph(g: Multigraph) -> list:
    """Apply the safe rules in place and return the vertices they force.

    Rules: a vertex with a self-loop is forced; a vertex of degree at most
    one is dropped; a vertex of degree two is bypassed by an edge joining its
    neighbours (possibly a self-loop).
    """
    forced = []
    changed = True
    while changed:
        changed = False
        for u in sorted(g.adj):
            if u not in g.adj:
                continue
            if g.adj[u].get(u, 0):
                forced.append(u)
                g.remove(u)
                changed = True
                continue
            d = g.degree(u)
            if d <= 1:
                g.remove(u)
                changed = True
            elif d == 2:
                nbs = [v for v, m in sorted(g.adj[u].items()) for _ in range(m)]
                g.remove(u)
                g.add_edge(nbs[0], nbs[1])
                changed = True
    return forced


def _short_cycle(g: Multigraph) -> list:
    """Vertices of a shortest cycle (the graph has minimum degree three)."""
    best = None
    for s in sorted(g.adj):
        dist, par = {s: 0}, {s: None}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for v in sorted(g.adj[u]):
                if v not in dist:
                    dist[v], par[v] = dist[u] + 1, u
                    queue.append(v)
                elif par[u] != v:
                    found = (u, v)
                    break
        if found is None:
            continue
        u, v = found
        pu, pv = [u], [v]
        while par[pu[-1]] is not None:
            pu.append(par[pu[-1]])
        while par[pv[-1]] is not None:
            pv.append(par[pv[-1]])
        common = set(pu) & set(pv)
        cyc = [x for x in pu if x not in common] + [x for x in pv if x not in common]
        meet = next(x for x in pu if x in common)
        cyc.append(meet)
        if best is None or len(cyc) < len(best):
            best = cyc
            if len(best) <= 3:
                break
    return sorted(best)


def _search(g: Multigraph, k: int, stats: dict):
    stats["nodes"] = stats.get("nodes", 0) + 1
    g = g.copy()
    forced = reduce_graph(g)
    k -= len(forced)
    if k < 0:
        return None
    if not g.adj:
        return forced
    if k == 0:
        return None
    double = next(((u, v) for u in sorted(g.adj) for v, m in sorted(g.adj[u].items()) if m >= 2 and u < v), None)
    branch = list(double) if double else _short_cycle(g)
    for v in branch:
        h = g.copy()
        h.remove(v)
        sub = _search(h, k - 1, stats)
        if sub is not None:
            return forced + [v] + sub
    return None


def fvs_exact(graph: dict, stats=None) -> tuple:
    """Minimum feedback vertex set by iterative deepening on its size."""
    stats = {} if stats is None else stats
    g = Multigraph.from_simple(graph)
    k = 0
    while True:
        sol = _search(g, k, stats)
        if sol is not None:
            stats["k"] = k
            return tuple(sorted(sol))
        k += 1


# ---------------------------------------------------------------------------
# Local-ratio 2-approximation
# ---------------------------------------------------------------------------

def _prune_low_degree(graph: dict):
    queue = [u for u in sorted(graph) if len(graph[u]) <= 1]
    while queue:
        u = queue.pop()
        if u not in graph or len(graph[u]) > 1:
            continue
        for v in graph.pop(u):
            graph[v].discard(u)
            if len(graph[v]) <= 1:
                queue.append(v)


def _semidisjoint_cycle(graph: dict):
    """A cycle whose vertices all have degree two except at most one."""
    seen = set()
    for u in sorted(graph):
        if len(graph[u]) != 2 or u in seen:
            continue
        chain = {u}
        ends = []
        for start in sorted(graph[u]):
            prev, cur = u, start
            while len(graph[cur]) == 2 and cur not in chain:
                chain.add(cur)
                nxt = next(x for x in graph[cur] if x != prev)
                prev, cur = cur, nxt
            ends.append(cur)
        seen |= chain
        if ends[0] in chain:  # the whole component is a cycle
            return sorted(chain)
        if ends[0] == ends[1]:
            return sorted(chain | {ends[0]})
    return None


def fvs_2approx(graph: dict, stats=None) -> tuple:
    """Feedback vertex set of size at most twice the optimum."""
    g = {u: set(nb) for u, nb in graph.items()}
    weight = {u: Fraction(1) for u in g}
    stack = []
    rounds = 0
    _prune_low_degree(g)
    while g:
        rounds += 1
        cyc = _semidisjoint_cycle(g)
        if cyc is not None:
            gamma = min(weight[u] for u in cyc)
            for u in cyc:
                weight[u] -= gamma
        else:
            gamma = min(weight[u] / (len(g[u]) - 1) for u in g)
            for u in g:
                weight[u] -= gamma * (len(g[u]) - 1)
        for u in sorted(g):
            if weight[u] == 0:
                stack.append(u)
                for v in g.pop(u):
                    g[v].discard(u)
        _prune_low_degree(g)
    chosen = set(stack)
    for u in reversed(stack):
        if is_forest(graph, chosen - {u}):
            chosen.discard(u)
    if stats is not None:
        stats["rounds"] = rounds
    return tuple(sorted(chosen))


# ---------------------------------------------------------------------------
# Arrangement front end
# ---------------------------------------------------------------------------

def brute_force_all_cells(segments, guard: int = DEFAULT_GUARD) -> AllCellsResult:
    segments = list(segments)
    if len(segments) > guard:
        raise TooLargeError(f"brute force limited to {guard} segments, got {len(segments)}")
    dg = arrangement.dual(arrangement.build(segments))
    ids = sorted(s.id for s in segments)
    tried = 0
    for k in range(len(ids) + 1):
        for combo in combinations(ids, k):
            tried += 1
            if dg.n_components(set(combo)) == 1:
                return AllCellsResult(combo, Mode.BRUTE, {"subsets": tried})
    raise InternalConsistencyError("removing every segment must leave one cell")


def solve_all_cells(segments, mode=Mode.EXACT, guard: int = DEFAULT_GUARD) -> AllCellsResult:
    segments = list(segments)
    mode = Mode(mode)
    if mode is Mode.BRUTE:
        res = brute_force_all_cells(segments, guard)
    else:
        triples = triple_points(segments)
        if triples:
            raise PreconditionError(f"point {triples[0]} lies on three or more segments")
        graph = simple_graph(segments)
        stats = {}
        removed = fvs_exact(graph, stats) if mode is Mode.EXACT else fvs_2approx(graph, stats)
        if not is_forest(graph, removed):
            raise InternalConsistencyError("returned set leaves a cycle in the intersection graph")
        res = AllCellsResult(removed, mode, stats)
    kept = [s for s in segments if s.id not in set(res.removed)]
    faces = arrangement.face_count(arrangement.build(kept))
    if faces != 1:
        raise InternalConsistencyError(f"arrangement still has {faces} faces after removal")
    return res
