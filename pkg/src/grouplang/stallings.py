"""Stallings graphs of finitely generated subgroups of free groups.

Edges are stored once, positively oriented, as ``(source, letter, target)``
with ``letter > 0``; reading ``-letter`` walks the edge backwards.  Vertex 0
is the basepoint and vertices are numbered breadth-first from it, so two
folds of the same subgroup give identical graphs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import Nfa, Transducer
from .words import Alphabet, Word, invert, reduce


@dataclass(frozen=True)
class StallingsGraph:
    rank: int
    n_vertices: int
    edges: frozenset

    basepoint = 0

    def __post_init__(self):
        Alphabet(self.rank)
        for u, a, v in self.edges:
            if not (0 < a <= self.rank and 0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"bad edge {(u, a, v)}")

    def adjacency(self) -> dict:
        """``{(vertex, signed letter): neighbour}``; well defined because the graph is folded."""
        out = {}
        for u, a, v in self.edges:
            out[(u, a)] = v
            out[(v, -a)] = u
        return out

    def is_folded(self) -> bool:
        seen_out, seen_in = set(), set()
        for u, a, v in self.edges:
            if (u, a) in seen_out or (v, a) in seen_in:
                return False
            seen_out.add((u, a))
            seen_in.add((v, a))
        return True

    def is_complete(self) -> bool:
        adj = self.adjacency()
        return all(
            (v, a) in adj for v in range(self.n_vertices) for a in Alphabet(self.rank).letters()
        )

    @property
    def subgroup_rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    def read(self, w: Sequence[int], start: int = 0) -> int | None:
        """End vertex of the path reading ``w`` from ``start``, or ``None`` if it falls off."""
        adj = self.adjacency()
        v = start
        for a in w:
            v = adj.get((v, a))
            if v is None:
                return None
        return v

    def __str__(self):
        return to_text(self)


def _bfs_order(n, edges, rank, roots=(0,)):
    adj = {}
    for u, a, v in edges:
        adj.setdefault(u, []).append((a, v))
        adj.setdefault(v, []).append((-a, u))
    for k in adj:
        adj[k].sort(key=lambda e: (abs(e[0]), e[0] < 0, e[1]))
    order = {r: i for i, r in enumerate(roots)}
    todo = deque(roots)
    while todo:
        u = todo.popleft()
        for _, v in adj.get(u, ()):
            if v not in order:
                order[v] = len(order)
                todo.append(v)
    return order


def _normalise(rank, edges, base) -> StallingsGraph:
    order = _bfs_order(None, edges, rank, (base,))
    new = frozenset((order[u], a, order[v]) for u, a, v in edges if u in order and v in order)
    return StallingsGraph(rank, len(order), new)


def _fold_edges(edges: set) -> set:
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    while True:
        out, inc = {}, {}
        merge = None
        for u, a, v in edges:
            u, v = find(u), find(v)
            if out.setdefault((u, a), v) != v:
                merge = (out[(u, a)], v)
                break
            if inc.setdefault((v, a), u) != u:
                merge = (inc[(v, a)], u)
                break
        if merge is None:
            return {(find(u), a, find(v)) for u, a, v in edges}
        x, y = merge
        lo, hi = min(x, y), max(x, y)
        parent[hi] = lo
        edges = {(find(u), a, find(v)) for u, a, v in edges}


def _core(edges: set, base=0) -> set:
    edges = set(edges)
    while True:
        degree: dict = {}
        for u, _, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaves = {x for x, d in degree.items() if d == 1 and x != base}
        if not leaves:
            return edges
        edges = {e for e in edges if e[0] not in leaves and e[2] not in leaves}


def fold(generators: Iterable[Sequence[int]], rank: int) -> StallingsGraph:
    """Folded core graph of the subgroup generated by ``generators``."""
    alpha = Alphabet(rank)
    edges = set()
    fresh = 1
    for gen in generators:
        w = reduce(alpha.check(gen))
        if not w:
            continue
        path = [0] + list(range(fresh, fresh + len(w) - 1)) + [0]
        fresh += len(w) - 1
        for i, a in enumerate(w):
            u, v = path[i], path[i + 1]
            edges.add((u, a, v) if a > 0 else (v, -a, u))
    return _normalise(rank, _core(_fold_edges(edges)), 0)


def member(g: StallingsGraph, w: Sequence[int]) -> bool:
    return g.read(reduce(w)) == g.basepoint


def index(g: StallingsGraph):
    """Vertex count of a complete graph, ``math.inf`` otherwise (exact for core graphs)."""
    return g.n_vertices if g.is_complete() else math.inf


def intersection(g: StallingsGraph, h: StallingsGraph) -> StallingsGraph:
    """Pullback: the core graph of ``<g> ∩ <h>``."""
    if g.rank != h.rank:
        raise ValueError("subgroups of different free groups")
    ag, ah = g.adjacency(), h.adjacency()
    ids = {(0, 0): 0}
    todo = deque([(0, 0)])
    edges = set()
    while todo:
        p, q = todo.popleft()
        for a in range(1, g.rank + 1):
            for sign in (a, -a):
                if (p, sign) in ag and (q, sign) in ah:
                    nxt = (ag[(p, sign)], ah[(q, sign)])
                    if nxt not in ids:
                        ids[nxt] = len(ids)
                        todo.append(nxt)
                    s, t = ids[(p, q)], ids[nxt]
                    edges.add((s, a, t) if sign > 0 else (t, a, s))
    return _normalise(g.rank, _core(edges), 0)


@dataclass(frozen=True)
class SpanningData:
    """Spanning tree of a graph and the free basis it induces.

    ``transversal[v]`` reads the tree path from the basepoint to ``v``;
    ``basis_edges`` lists the non-tree edges in basis order, and
    ``basis_words`` their words ``T_u a T_v^-1``.
    """

    transversal: tuple
    tree: frozenset
    basis_edges: tuple
    basis_words: tuple


def spanning_data(g: StallingsGraph, priority: frozenset | None = None) -> SpanningData:
    """BFS spanning tree from the basepoint with letter-order tie-breaking.

    Edges in ``priority`` (an embedded subgraph) are explored first so the
    tree restricts to a spanning tree of that subgraph; their non-tree
    edges also come first in the basis.
    """
    priority = g.edges if priority is None else priority
    adj: dict = {}
    for e in g.edges:
        u, a, v = e
        adj.setdefault(u, []).append((a, v, e))
        adj.setdefault(v, []).append((-a, u, e))
    for k in adj:
        adj[k].sort(key=lambda t: (abs(t[0]), t[0] < 0, t[1]))
    transversal: dict = {0: ()}
    tree = set()
    for allowed in (priority, g.edges):
        todo = deque(sorted(transversal, key=lambda v: (len(transversal[v]), v)))
        while todo:
            u = todo.popleft()
            for a, v, e in adj.get(u, ()):
                if e in allowed and v not in transversal:
                    transversal[v] = transversal[u] + (a,)
                    tree.add(e)
                    todo.append(v)
    if len(transversal) != g.n_vertices:
        raise ValueError("graph is not connected")
    rest = sorted(g.edges - tree, key=lambda e: (e not in priority, e))
    words = tuple(reduce(transversal[u] + (a,) + invert(transversal[v])) for u, a, v in rest)
    return SpanningData(
        tuple(transversal[v] for v in range(g.n_vertices)), frozenset(tree), tuple(rest), words
    )


def subgroup_basis(g: StallingsGraph) -> tuple[Word, ...]:
    return spanning_data(g).basis_words


def coordinates(g: StallingsGraph, w: Sequence[int]) -> Word | None:
    """Express ``w`` in the free basis of ``g`` (``None`` if ``w`` is not in the subgroup)."""
    data = spanning_data(g)
    number = {e: i + 1 for i, e in enumerate(data.basis_edges)}
    adj = {}
    for e in g.edges:
        u, a, v = e
        adj[(u, a)] = (v, number.get(e, 0))
        adj[(v, -a)] = (u, -number.get(e, 0))
    v, out = 0, []
    for a in reduce(w):
        if (v, a) not in adj:
            return None
        v, k = adj[(v, a)]
        if k:
            out.append(k)
    return reduce(out) if v == 0 else None


@dataclass(frozen=True)
class CompleteCover:
    """A complete (permutation-labelled) graph containing an embedded subgroup graph.

    The cover's subgroup ``N`` has finite index equal to the vertex count;
    its basis lists the embedded subgroup's basis first, then the rest.
    """

    graph: StallingsGraph
    embedded: StallingsGraph
    data: SpanningData
    h_rank: int

    @property
    def rank(self) -> int:
        return self.graph.rank

    @property
    def index(self) -> int:
        return self.graph.n_vertices

    @property
    def transversal(self) -> tuple:
        return self.data.transversal

    @property
    def basis(self) -> tuple:
        return self.data.basis_words

    @property
    def basis_rank(self) -> int:
        return len(self.data.basis_words)

    def coset(self, w: Sequence[int]) -> int:
        """Vertex reached by ``w``: the right coset ``N w``."""
        return self.graph.read(w)


def _cover_from(graph: StallingsGraph, embedded: StallingsGraph) -> CompleteCover:
    if not embedded.edges <= graph.edges or embedded.n_vertices > graph.n_vertices:
        raise ValueError("embedded graph is not a subgraph of the cover")
    data = spanning_data(graph, embedded.edges)
    h_rank = sum(1 for e in data.basis_edges if e in embedded.edges)
    return CompleteCover(graph, embedded, data, h_rank)


def as_cover(g: StallingsGraph) -> CompleteCover:
    """View a complete graph (a finite-index subgroup) as its own cover."""
    if not g.is_complete():
        raise ValueError("subgroup has infinite index")
    return _cover_from(g, g)


def hall_completion(g: StallingsGraph) -> CompleteCover:
    """Complete each letter's partial permutation, matching deficient vertices in order.

    No vertices are added, so ``g`` embeds with the same numbering and its
    subgroup is a free factor of the cover's finite-index subgroup.
    """
    edges = set(g.edges)
    for a in range(1, g.rank + 1):
        has_out = {u for u, b, _ in g.edges if b == a}
        has_in = {v for _, b, v in g.edges if b == a}
        sources = [v for v in range(g.n_vertices) if v not in has_out]
        targets = [v for v in range(g.n_vertices) if v not in has_in]
        edges |= {(u, a, v) for u, v in zip(sources, targets)}
    return _cover_from(StallingsGraph(g.rank, g.n_vertices, frozenset(edges)), g)


def free_basis(cover: CompleteCover, embedded: StallingsGraph | None = None):
    """``(basis of H, basis of H')`` with ``N = H * H'``."""
    if embedded is not None and embedded != cover.embedded:
        cover = _cover_from(cover.graph, embedded)
    words = cover.basis
    return words[: cover.h_rank], words[cover.h_rank:]


def schreier_transducer(cover: CompleteCover, final: Iterable[int] | None = None) -> Transducer:
    """Coset-tracking rewriter from the parent alphabet to the basis of ``N``.

    Running ``w`` from the basepoint outputs ``u`` and stops at ``q`` with
    ``w = u(basis) · transversal[q]`` in the free group.  Non-tree edges
    emit their basis letter, tree edges emit nothing.
    """
    number = {e: i + 1 for i, e in enumerate(cover.data.basis_edges)}
    trans = []
    for e in sorted(cover.graph.edges):
        u, a, v = e
        k = number.get(e)
        trans.append((u, a, (k,) if k else (), v))
        trans.append((v, -a, (-k,) if k else (), u))
    states = range(cover.index) if final is None else final
    return Transducer(
        cover.rank,
        max(cover.basis_rank, 1),
        cover.index,
        0,
        tuple(trans),
        {s: () for s in states},
    )


def schreier_rewrite(cover: CompleteCover, w: Sequence[int]) -> tuple[Word, int]:
    """Deterministic run of the Schreier transducer: ``(u, q)`` with ``w = u(basis) · T_q``."""
    (out, q), = schreier_transducer(cover).runs(w)
    return out, q


def path_transducer(cover: CompleteCover, end: int) -> Transducer:
    """Inverse rewriter: basis words of ``N`` to reduced parent words times ``transversal[end]``.

    A basis letter for the edge ``(s, a, t)`` walks the tree geodesic from
    the current vertex to ``s`` and crosses the edge; acceptance appends the
    geodesic to ``end``.  A reduced input gives a reduced output, since a
    reduced path in a folded graph reads a reduced word.
    """
    data = cover.data
    parent: dict = {}
    for v, w in enumerate(data.transversal):
        if w:
            parent[v] = cover.graph.read(w[:-1])

    def geodesic(x, y):
        tx, ty = data.transversal[x], data.transversal[y]
        k = 0
        while k < min(len(tx), len(ty)) and tx[k] == ty[k]:
            k += 1
        return invert(tx[k:]) + ty[k:]

    trans = []
    for i, (s, a, t) in enumerate(data.basis_edges):
        k = i + 1
        for v in range(cover.index):
            trans.append((v, k, geodesic(v, s) + (a,), t))
            trans.append((v, -k, geodesic(v, t) + (-a,), s))
    return Transducer(
        max(cover.basis_rank, 1),
        cover.rank,
        cover.index,
        0,
        tuple(trans),
        {v: geodesic(v, end) for v in range(cover.index)},
    )


def coset_automaton(cover: CompleteCover, cosets: Iterable[int]) -> Nfa:
    """Automaton for the full preimage of a union of right cosets of ``N``."""
    trans = set()
    for u, a, v in cover.graph.edges:
        trans.add((u, a, v))
        trans.add((v, -a, u))
    return Nfa(cover.rank, cover.index, frozenset(trans), frozenset({0}), frozenset(cosets))


def to_text(g: StallingsGraph) -> str:
    lines = [f"states {g.n_vertices}", "base 0"]
    lines += [f"{u} a{a} {v}" for u, a, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"
