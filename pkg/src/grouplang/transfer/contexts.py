"""Group contexts: which group a word denotes an element of, and its normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..stallings import CompleteCover, StallingsGraph, coordinates, subgroup_basis
from ..words import Alphabet, Word, invert, reduce


class ContextMismatch(ValueError):
    pass


def expand(basis: Sequence[Word], w: Sequence[int]) -> Word:
    """Substitute basis words for the letters of ``w`` and reduce."""
    out: list[int] = []
    for k in w:
        out.extend(basis[k - 1] if k > 0 else invert(basis[-k - 1]))
    return reduce(out)


@dataclass(frozen=True)
class FreeGroup:
    rank: int

    def __post_init__(self):
        Alphabet(self.rank)

    def normal_form(self, w: Sequence[int]) -> Word:
        return reduce(w)


@dataclass(frozen=True)
class FreeAbelian:
    """``Z^m`` on generators ``e_1..e_m``; normal form is the integer vector."""

    m: int

    def __post_init__(self):
        Alphabet(self.m)

    @property
    def rank(self) -> int:
        return self.m

    def normal_form(self, w: Sequence[int]) -> tuple[int, ...]:
        v = [0] * self.m
        for a in w:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(v)


@dataclass(frozen=True)
class SubgroupOfFree:
    """A finitely generated subgroup of a free group, with words over its free basis.

    Basis letter ``k`` stands for ``subgroup_basis(graph)[k-1]``.
    """

    graph: StallingsGraph

    def __post_init__(self):
        if self.graph.subgroup_rank < 1:
            raise ValueError("the trivial subgroup has no basis alphabet")

    @property
    def rank(self) -> int:
        return self.graph.subgroup_rank

    @property
    def parent(self) -> FreeGroup:
        return FreeGroup(self.graph.rank)

    @property
    def basis(self) -> tuple[Word, ...]:
        return subgroup_basis(self.graph)

    def normal_form(self, w: Sequence[int]) -> Word:
        return reduce(w)

    def to_parent(self, w: Sequence[int]) -> Word:
        return expand(self.basis, w)

    def from_parent(self, w: Sequence[int]) -> Word | None:
        return coordinates(self.graph, w)


@dataclass(frozen=True)
class FiniteIndexSubgroupOfFree:
    """The finite-index subgroup ``N`` of a complete cover, over the cover's basis."""

    cover: CompleteCover

    @property
    def rank(self) -> int:
        return self.cover.basis_rank

    @property
    def parent(self) -> FreeGroup:
        return FreeGroup(self.cover.rank)

    @property
    def basis(self) -> tuple[Word, ...]:
        return self.cover.basis

    def normal_form(self, w: Sequence[int]) -> Word:
        return reduce(w)

    def to_parent(self, w: Sequence[int]) -> Word:
        return expand(self.basis, w)


@dataclass(frozen=True)
class SemidirectZmZ:
    """``Z^m ⋊ Z`` with ``t^-1 e_i t = e_i Q`` (row vectors, right action).

    Letters ``1..m`` are the ``e_i`` and letter ``m+1`` is the stable letter ``t``.
    """

    m: int
    Q: tuple

    def __init__(self, m: int, Q: Sequence[Sequence[int]]):
        Q = tuple(tuple(int(x) for x in row) for row in Q)
        if len(Q) != m or any(len(row) != m for row in Q):
            raise ValueError(f"Q must be {m}x{m}")
        from .semidirect import det

        if abs(det(Q)) != 1:
            raise ValueError("Q must be invertible over the integers (|det Q| = 1)")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "Q", Q)

    @property
    def rank(self) -> int:
        return self.m + 1

    @property
    def stable(self) -> int:
        return self.m + 1

    def normal_form(self, w: Sequence[int]):
        from .semidirect import semidirect_eval

        return semidirect_eval(self, w)


GroupContext = FreeGroup | FreeAbelian | SubgroupOfFree | FiniteIndexSubgroupOfFree | SemidirectZmZ


def is_free(ctx) -> bool:
    return isinstance(ctx, (FreeGroup, SubgroupOfFree, FiniteIndexSubgroupOfFree))
