"""Subset handles: a group context, a subset class and a finite representation.

Rational handles carry an automaton, context-free and algebraic handles a
grammar (its image under the canonical map is the subset), recognizable
handles finite-index data: a complete cover plus accepted cosets over free
contexts, a full-rank lattice plus residues over ``Z^m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .. import automata, grammars
from ..automata import Nfa
from ..grammars import Cfg
from ..stallings import StallingsGraph, index
from ..words import reduce
from .contexts import ContextMismatch, FreeAbelian, is_free

CLASSES = ("rat", "rec", "cf", "alg")


class NotRecognizable(ValueError):
    """Raised when a subgroup of infinite index is offered as a recognizable set."""


class Undecided(ValueError):
    """Raised when exact membership is unavailable and no bound was given."""


@dataclass(frozen=True)
class CosetData:
    """Union of right cosets ``F·T_v`` (``v`` in ``cosets``) of a finite-index ``F``."""

    graph: StallingsGraph
    cosets: frozenset

    def __post_init__(self):
        if not self.graph.is_complete():
            raise NotRecognizable("coset data needs a finite-index subgroup (complete graph)")

    def automaton(self) -> Nfa:
        trans = set()
        for u, a, v in self.graph.edges:
            trans |= {(u, a, v), (v, -a, u)}
        return Nfa(self.graph.rank, self.graph.n_vertices, frozenset(trans), frozenset({0}), frozenset(self.cosets))


@dataclass(frozen=True)
class LatticeData:
    """Union of cosets ``r + L`` of a full-rank lattice ``L ⊆ Z^m``.

    ``hnf`` holds the columns of the Hermite normal form of ``L`` (upper
    triangular, positive diagonal); ``residues`` are reduced representatives.
    """

    hnf: tuple
    residues: frozenset

    @property
    def m(self) -> int:
        return len(self.hnf)

    @property
    def index(self) -> int:
        out = 1
        for j, col in enumerate(self.hnf):
            out *= col[j]
        return out

    def residue(self, x: Sequence[int]) -> tuple[int, ...]:
        x = list(x)
        for j in range(self.m - 1, -1, -1):
            col = self.hnf[j]
            q = x[j] // col[j]
            for i in range(j + 1):
                x[i] -= q * col[i]
        return tuple(x)

    def __contains__(self, x) -> bool:
        return self.residue(x) in self.residues

    def automaton(self) -> Nfa:
        """Congruence automaton on letter counts: states are ``Z^m / L``."""
        zero = (0,) * self.m
        ids = {zero: 0}
        todo = [zero]
        trans = set()
        while todo:
            x = todo.pop()
            for a in range(1, self.m + 1):
                for s in (a, -a):
                    y = list(x)
                    y[a - 1] += 1 if s > 0 else -1
                    y = self.residue(y)
                    if y not in ids:
                        ids[y] = len(ids)
                        todo.append(y)
                    trans.add((ids[x], s, ids[y]))
        final = {ids[r] for r in self.residues}
        return Nfa(self.m, len(ids), frozenset(trans), frozenset({0}), frozenset(final))


def lattice_data(generators: Iterable[Sequence[int]], residues: Iterable[Sequence[int]], m: int) -> LatticeData:
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form

    cols = [tuple(int(x) for x in g) for g in generators]
    if any(len(c) != m for c in cols):
        raise ValueError(f"lattice generators must have dimension {m}")
    M = Matrix(m, len(cols), lambda i, j: cols[j][i]) if cols else Matrix.zeros(m, 0)
    if M.rank() < m:
        raise NotRecognizable("lattice is not of full rank, so its index is infinite")
    H = hermite_normal_form(M)
    hnf = tuple(tuple(int(H[i, j]) for i in range(m)) for j in range(H.shape[1]))
    data = LatticeData(hnf, frozenset())
    return LatticeData(hnf, frozenset(data.residue(r) for r in residues))


@dataclass(frozen=True)
class SubsetHandle:
    context: object
    kind: str
    rep: object

    def __post_init__(self):
        if self.kind not in CLASSES:
            raise ValueError(f"unknown subset class {self.kind!r}")
        expected = {"rat": Nfa, "cf": Cfg, "alg": Cfg, "rec": (CosetData, LatticeData)}[self.kind]
        if not isinstance(self.rep, expected):
            raise TypeError(f"{self.kind} handle cannot hold {type(self.rep).__name__}")
        if isinstance(self.rep, LatticeData) != isinstance(self.context, FreeAbelian) and self.kind == "rec":
            raise ContextMismatch("lattice data belongs to free-abelian contexts, coset data to free ones")
        if self.rank != self.context.rank:
            raise ContextMismatch(f"representation rank {self.rank} vs context rank {self.context.rank}")

    @property
    def rank(self) -> int:
        if isinstance(self.rep, LatticeData):
            return self.rep.m
        if isinstance(self.rep, CosetData):
            return self.rep.graph.rank
        return self.rep.rank

    def automaton(self) -> Nfa:
        """Automaton for the representation (rational) or full preimage (recognizable)."""
        if self.kind == "rat":
            return self.rep
        if self.kind == "rec":
            return self.rep.automaton()
        raise TypeError("grammar handles have no automaton")

    def words(self, bound: int) -> list:
        if self.kind in ("cf", "alg"):
            return grammars.enumerate_words(self.rep, bound)
        return automata.enumerate_words(self.automaton(), bound)

    def image(self, bound: int) -> set:
        """Bounded image: normal forms of all witness words of length <= ``bound``."""
        return {self.context.normal_form(w) for w in self.words(bound)}

    @cached_property
    def reduced_form(self) -> bool:
        """True when a grammar handle over a free context derives reduced words only.

        Then the grammar's language is exactly the set of reduced
        representatives, and membership reduces to CYK on ``reduce(w)``.
        """
        if self.kind not in ("cf", "alg") or not is_free(self.context):
            return False
        bad = grammars.intersect_rational(self.rep, automata.nonreduced_word_automaton(self.rank))
        return grammars.is_empty(bad)

    @cached_property
    def _red_automaton(self) -> Nfa:
        return automata.red_language(self.rep)

    def contains(self, w: Sequence[int], bound: int | None = None) -> bool:
        """Membership of the element ``w``; exact where a decision procedure exists."""
        w = tuple(w)
        if self.kind == "rec":
            if isinstance(self.rep, LatticeData):
                return self.context.normal_form(w) in self.rep
            return self.rep.graph.read(reduce(w)) in self.rep.cosets
        if self.kind == "rat" and is_free(self.context):
            return automata.accepts(self._red_automaton, reduce(w))
        if self.reduced_form:
            return grammars.cyk_member(self._cnf, reduce(w))
        if bound is None:
            raise Undecided("membership in this subset is only available up to a word-length bound")
        return self.context.normal_form(w) in self.image(bound)

    @cached_property
    def _cnf(self):
        return grammars.to_cnf(self.rep)


def rat_handle(ctx, x: Nfa) -> SubsetHandle:
    return SubsetHandle(ctx, "rat", x)


def cf_handle(ctx, g: Cfg) -> SubsetHandle:
    return SubsetHandle(ctx, "cf", g)


def alg_handle(ctx, g: Cfg) -> SubsetHandle:
    return SubsetHandle(ctx, "alg", g)


def red_form(g: Cfg) -> Cfg:
    """Keep only the reduced words of ``L(g)`` (the subset may shrink)."""
    return grammars.intersect_rational(g, automata.reduced_word_automaton(g.rank))


def as_recognizable(ctx, graph: StallingsGraph, representatives: Iterable[Sequence[int]] = ((),)) -> SubsetHandle:
    """Recognizable handle for a union of cosets ``H b`` of a subgroup of the free context.

    Refuses subgroups of infinite index: such an ``H`` is rational but not
    recognizable.
    """
    if index(graph) == float("inf"):
        raise NotRecognizable("subgroup has infinite index, so it is not recognizable")
    cosets = set()
    for b in representatives:
        v = graph.read(reduce(b))
        cosets.add(v)
    return SubsetHandle(ctx, "rec", CosetData(graph, frozenset(cosets)))


def rec_lattice(ctx: FreeAbelian, generators, residues=None) -> SubsetHandle:
    """Recognizable handle ``residues + L`` with ``L`` spanned by ``generators``."""
    residues = [(0,) * ctx.m] if residues is None else residues
    return SubsetHandle(ctx, "rec", lattice_data(generators, residues, ctx.m))
