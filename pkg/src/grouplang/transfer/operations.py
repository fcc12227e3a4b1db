"""Transfer constructions between a free group and its subgroups.

Coset decomposition writes a subset ``K`` of ``F`` as ``⋃ L_i b_i`` with
``L_i`` over a finite-index subgroup ``N`` (given by a complete cover) and
``b_i`` the Schreier transversal; composition goes back.  Free-factor
embedding lifts a subset of ``H`` to ``F`` through a Hall completion, and
recognizable restriction moves coset data from ``F`` down to ``H``.
"""

from __future__ import annotations

from typing import Sequence

from .. import automata, grammars
from ..automata import literal
from ..grammars import Cfg
from ..stallings import (
    CompleteCover,
    StallingsGraph,
    coordinates,
    coset_automaton,
    fold,
    hall_completion,
    intersection,
    member,
    path_transducer,
    schreier_rewrite,
    schreier_transducer,
    spanning_data,
    subgroup_basis,
)
from ..words import Word, invert, reduce
from .contexts import (
    ContextMismatch,
    FiniteIndexSubgroupOfFree,
    FreeGroup,
    SubgroupOfFree,
)
from .handles import CosetData, SubsetHandle


class NotContained(ValueError):
    """``K`` is not inside ``H``; ``witness`` is an element of ``K`` outside ``H``."""

    def __init__(self, witness: Word):
        super().__init__(f"subset not contained in the subgroup: witness {witness}")
        self.witness = witness


def _same_context(*hs: SubsetHandle):
    if len({h.context for h in hs}) != 1:
        raise ContextMismatch("subsets live in different groups")


def mul_rational(K: SubsetHandle, R: SubsetHandle, side: str = "right") -> SubsetHandle:
    """``K·R`` (or ``R·K``) for a rational ``R``; the class of ``K`` is kept."""
    _same_context(K, R)
    if R.kind != "rat":
        raise ValueError("the multiplier must be a rational subset")
    if K.kind == "rat":
        pair = (K.rep, R.rep) if side == "right" else (R.rep, K.rep)
        return SubsetHandle(K.context, "rat", automata.concat(*pair))
    if K.kind in ("cf", "alg"):
        return SubsetHandle(K.context, K.kind, grammars.concat_rational(K.rep, R.rep, side))
    raise ValueError("recognizable subsets are not closed under rational products")


def intersect_recognizable(K: SubsetHandle, M: SubsetHandle) -> SubsetHandle:
    """``K ∩ M`` for recognizable ``M``: intersect the witness language with ``M``'s preimage."""
    _same_context(K, M)
    if M.kind != "rec":
        raise ValueError("second argument must be recognizable")
    pre = M.automaton()
    if K.kind == "rat":
        return SubsetHandle(K.context, "rat", automata.trim(automata.intersect(K.rep, pre)))
    if K.kind in ("cf", "alg"):
        return SubsetHandle(K.context, K.kind, grammars.intersect_rational(K.rep, pre))
    raise ValueError("use coset data directly to intersect two recognizable subsets")


def decompose(K: SubsetHandle, cover: CompleteCover) -> list[tuple[SubsetHandle, Word]]:
    """Components ``(L_i, b_i)``, one per coset of ``N``, with ``K = ⋃ L_i b_i``.

    ``L_i`` is built as ``(L ∩ coset_i) · b_i^-1`` rewritten into ``N``'s
    basis by the Schreier transducer.
    """
    if not isinstance(K.context, FreeGroup) or K.context.rank != cover.rank:
        raise ContextMismatch("decompose needs a subset of the cover's parent free group")
    if K.kind not in ("cf", "alg"):
        raise ValueError("decompose works on context-free or algebraic handles")
    ctx = FiniteIndexSubgroupOfFree(cover)
    rewrite = schreier_transducer(cover, final=[0])
    out = []
    for i, b in enumerate(cover.transversal):
        g = grammars.intersect_rational(K.rep, coset_automaton(cover, {i}))
        g = grammars.concat_rational(g, literal(invert(b), cover.rank))
        g = grammars.transduce(g, rewrite)
        out.append((SubsetHandle(ctx, K.kind, g), b))
    return out


def compose(components: Sequence[tuple[SubsetHandle, Sequence[int]]], parent: FreeGroup | None = None,
            method: str = "path") -> SubsetHandle:
    """``⋃ L_i b_i`` as a subset of the parent free group.

    ``method="substitute"`` substitutes basis words letter by letter and
    appends ``b_i``.  ``method="path"`` (default) runs a transducer that
    walks tree geodesics in the cover instead, so reduced component words
    come out reduced and the composite of a decomposition reproduces the
    original language word for word.
    """
    if method not in ("path", "substitute"):
        raise ValueError(f"unknown compose method {method!r}")
    covers = {h.context for h, _ in components}
    if len(covers) > 1:
        raise ContextMismatch("components over different covers")
    if not components:
        if parent is None:
            raise ValueError("parent group needed to compose an empty component list")
        return SubsetHandle(parent, "cf", Cfg(parent.rank, "S", ()))
    ctx = next(iter(covers))
    if not isinstance(ctx, FiniteIndexSubgroupOfFree):
        raise ContextMismatch("components must live over a finite-index subgroup")
    cover = ctx.cover
    if parent is not None and parent.rank != cover.rank:
        raise ContextMismatch("parent rank differs from the cover's")
    kinds = {h.kind for h, _ in components}
    kind = "cf" if kinds == {"cf"} else "alg"
    parts = []
    for h, b in components:
        g = h.rep
        u, q = schreier_rewrite(cover, b)
        if u:
            g = grammars.concat_rational(g, literal(u, ctx.rank))
        if method == "path":
            parts.append(grammars.transduce(g, path_transducer(cover, q)))
        else:
            h_map = {k: cover.basis[k - 1] for k in range(1, ctx.rank + 1)}
            g = grammars.substitute(g, h_map, cover.rank)
            parts.append(grammars.concat_rational(g, literal(cover.transversal[q], cover.rank)))
    return SubsetHandle(FreeGroup(cover.rank), kind, grammars.union_grammars(parts))


def rec_restrict(K: SubsetHandle, H: StallingsGraph | CompleteCover) -> SubsetHandle:
    """Recognizable ``K ⊆ H`` of ``F`` as a recognizable subset of ``H``.

    ``K = ⋃ F_0 b_v``; containment is checked exactly (each ``b_v`` and each
    basis word of ``F_0`` must lie in ``H``), then ``F_0 ∩ H`` is computed by
    pullback and rewritten over ``H``'s basis, where it has finite index.
    """
    H = H.graph if isinstance(H, CompleteCover) else H
    if K.kind != "rec" or not isinstance(K.rep, CosetData) or not isinstance(K.context, FreeGroup):
        raise ValueError("rec_restrict needs recognizable coset data over a free group")
    if H.rank != K.rank:
        raise ContextMismatch("subgroup lives in a different free group")
    F0 = K.rep.graph
    transversal = spanning_data(F0).transversal
    reps = [transversal[v] for v in sorted(K.rep.cosets)]
    for b in reps:
        if not member(H, b):
            raise NotContained(b)
    if reps:
        for f in subgroup_basis(F0):
            if not member(H, f):
                raise NotContained(reduce(f + reps[0]))
    meet = intersection(F0, H)
    ctx = SubgroupOfFree(H)
    sub = fold([coordinates(H, f) for f in subgroup_basis(meet)], ctx.rank)
    cosets = frozenset(sub.read(coordinates(H, b)) for b in reps)
    return SubsetHandle(ctx, "rec", CosetData(sub, cosets))


def cf_embed_free_factor(K: SubsetHandle, method: str = "path") -> SubsetHandle:
    """Lift a subset of ``H`` (words over ``H``'s basis) to the parent free group.

    Hall completion gives ``N = H * H'`` of finite index; ``K``'s grammar is
    read over ``N``'s basis and composed up to ``F`` as a single component
    with trivial transversal word.
    """
    if not isinstance(K.context, SubgroupOfFree):
        raise ContextMismatch("embedding needs a subset of a subgroup of a free group")
    if K.kind not in ("cf", "alg"):
        raise ValueError("embedding works on context-free or algebraic handles")
    H = K.context.graph
    cover = hall_completion(H)
    n_ctx = FiniteIndexSubgroupOfFree(cover)
    letter_map = {}
    for k, w in enumerate(subgroup_basis(H), start=1):
        u, q = schreier_rewrite(cover, w)
        assert q == 0, "subgroup basis word must close up in the cover"
        letter_map[k] = u
    g = grammars.substitute(K.rep, letter_map, n_ctx.rank)
    return compose([(SubsetHandle(n_ctx, K.kind, g), ())], FreeGroup(H.rank), method)
