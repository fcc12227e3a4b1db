"""Named experiments: pumping refutations, the powers-of-two example, round trips.

Each experiment returns a small report object whose ``status`` is one of
``PASS``, ``FAIL`` or ``INCONCLUSIVE``; the CLI prints them verbatim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .. import grammars
from ..automata import letters, star
from ..grammars import Cfg, example_3_12_grammar, parikh_image
from ..semilinear import (
    LinearSet,
    PowersOfTwoCertificate,
    SemilinearSet,
    affine_image,
    is_power_of_two,
    powers_of_two_conflict,
)
from ..stallings import as_cover, fold
from ..words import Word, reduce
from .contexts import FreeGroup
from .handles import SubsetHandle, red_form
from .operations import compose, decompose


@dataclass(frozen=True)
class PumpingReport:
    status: str
    p: int
    z: Word
    checked: int
    survivor: tuple | None = None

    def __str__(self):
        if self.survivor is None:
            return f"p={self.p}: all {self.checked} factorizations leave the language when pumped"
        u, v, w, x, y = self.survivor
        return f"p={self.p}: factorization u={u} v={v} w={w} x={x} y={y} survives pumping"


def pumping_refute(member: Callable[[Word], bool], z: Sequence[int], p: int) -> PumpingReport:
    """Check every ``z = uvwxy`` with ``|vwx| <= p``, ``|vx| >= 1`` against ``i = 0, 2``.

    PASS when each factorization has a pumped word outside the language,
    so ``z`` refutes the context-free pumping lemma at constant ``p``.
    """
    z = tuple(z)
    if not member(z):
        raise ValueError("the witness word is not in the language")
    if len(z) < p:
        raise ValueError("the witness must have length at least p")
    n = len(z)
    checked = 0
    for s in range(n):
        for e in range(s, min(n, s + p) + 1):
            # vwx = z[s:e]; split it as v, w, x
            for i in range(s, e + 1):
                for j in range(i, e + 1):
                    v, w, x = z[s:i], z[i:j], z[j:e]
                    if not v and not x:
                        continue
                    checked += 1
                    u, y = z[:s], z[e:]
                    if member(u + w + y) and member(u + v * 2 + w + x * 2 + y):
                        return PumpingReport("FAIL", p, z, checked, (u, v, w, x, y))
    return PumpingReport("PASS", p, z, checked)


def two_counter_member(w: Sequence[int]) -> bool:
    """``n_e1 = n_e1^-1`` and ``n_e2 = n_e2^-1``: the preimage of ``0 × 0 × Z^(m-2)``."""
    return w.count(1) == w.count(-1) and w.count(2) == w.count(-2)


def two_counter_witness(p: int) -> Word:
    return (1,) * p + (2,) * p + (-1,) * p + (-2,) * p


def triple_block_member(w: Sequence[int]) -> bool:
    """``w = a1^n a2^n a1^-n`` for some ``n >= 0``."""
    n, r = divmod(len(w), 3)
    return r == 0 and tuple(w) == (1,) * n + (2,) * n + (-1,) * n


def triple_block_witness(p: int) -> Word:
    return (1,) * p + (2,) * p + (-1,) * p


@dataclass(frozen=True)
class Candidate:
    label: str
    presentation: SemilinearSet
    certificate: PowersOfTwoCertificate
    verified: bool


@dataclass(frozen=True)
class Example312Report:
    bound: int
    exponents: tuple
    witnesses: dict = field(hash=False)
    candidates: tuple = ()

    @property
    def powers_only(self) -> bool:
        return all(is_power_of_two(k) for k in self.exponents)

    @property
    def status(self) -> str:
        ok = self.powers_only and self.candidates and all(c.verified for c in self.candidates)
        return "PASS" if ok else "FAIL"


def example_3_12_exponents(bound: int) -> dict[int, Word]:
    """``{k: shortest witness}`` for the ``a2^k`` among images of words of length <= bound."""
    found: dict[int, Word] = {}
    for w in grammars.enumerate_words(example_3_12_grammar(), bound):
        r = reduce(w)
        if r and all(x == 2 for x in r) and len(r) not in found:
            found[len(r)] = w
    return found


def example_3_12_experiment(bound: int) -> Example312Report:
    """Enumerate, collect the ``a2`` exponents, and refute candidate semilinear presentations.

    Candidates: the difference map ``u3 - u4`` applied to the Parikh image
    of the whole grammar and of its language-level intersection with
    ``a2*``, the observed exponent set, and arithmetic progressions through
    consecutive observed exponents.  Every candidate gets a certificate.
    """
    g = example_3_12_grammar()
    found = example_3_12_exponents(bound)
    exps = tuple(sorted(found))
    diff = [[0, 0, 1, -1]]
    sets = [
        ("u3-u4 of p(L(G))", affine_image(parikh_image(g), diff)),
        ("u3-u4 of p(L(G) ∩ a2*)", affine_image(parikh_image(
            grammars.intersect_rational(g, _a2_star())), diff)),
        ("observed exponents", SemilinearSet(1, [LinearSet((k,)) for k in exps])),
    ]
    for a, b in zip(exps, exps[1:]):
        sets.append((f"progression {a} + N·{b - a}", SemilinearSet.linear((a,), [(b - a,)])))
    cands = []
    for label, s in sets:
        cert = powers_of_two_conflict(s)
        cands.append(Candidate(label, s, cert, cert.verify(s)))
    return Example312Report(bound, exps, found, tuple(cands))


def _a2_star():
    return star(letters([2], 2))


def random_grammar(rng: random.Random, rank: int = 2, n_nonterminals: int = 3, n_rules: int = 7,
                   max_rhs: int = 3) -> Cfg:
    names = ["S"] + [f"X{i}" for i in range(1, n_nonterminals)]
    symbols = names + [a for i in range(1, rank + 1) for a in (i, -i)]
    prods = [(rng.choice(names), ())]
    for _ in range(n_rules):
        rhs = tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_rhs)))
        prods.append((rng.choice(names), rhs))
    # one terminal-only rule per nonterminal keeps most grammars productive
    prods += [(a, (rng.choice(symbols[n_nonterminals:]),)) for a in names]
    return Cfg(rank, "S", prods)


def index_two_covers():
    """The two index-2 covers of ``F2`` used by round-trip checks."""
    return [
        as_cover(fold([(1, 1), (2,), (1, 2, -1)], 2)),
        as_cover(fold([(1, 1), (1, 2), (1, -2)], 2)),
    ]


@dataclass(frozen=True)
class RoundTripReport:
    bound: int
    cases: int
    failures: tuple

    @property
    def status(self) -> str:
        return "PASS" if not self.failures else "FAIL"


def roundtrip_experiment(n_grammars: int = 20, bound: int = 8, seed: int = 0) -> RoundTripReport:
    """``compose(decompose(K))`` against ``K`` by bounded reduce-and-compare.

    ``K`` ranges over random grammars restricted to reduced words, paired
    with each index-2 cover.
    """
    rng = random.Random(seed)
    ctx = FreeGroup(2)
    failures = []
    cases = 0
    for n in range(n_grammars):
        K = SubsetHandle(ctx, "cf", red_form(random_grammar(rng)))
        want = K.image(bound)
        for c, cover in enumerate(index_two_covers()):
            cases += 1
            back = compose(decompose(K, cover), ctx)
            if back.image(bound) != want:
                failures.append((n, c))
    return RoundTripReport(bound, cases, tuple(failures))
