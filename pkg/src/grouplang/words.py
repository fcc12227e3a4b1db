"""Involutive alphabets, group words and free reduction.

Letters are signed integers: ``i`` is the generator ``a_i`` and ``-i`` its
formal inverse.  A word is a tuple of letters; the empty tuple is the empty
word.  Text syntax: ``a1 a2- a1`` (whitespace separated), ``e`` for the empty
word, ``t``/``t-`` for a stable letter when the caller supplies its index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """The involutive alphabet ``{a_1^{±1}, ..., a_n^{±1}}``."""

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"alphabet rank must be positive, got {self.rank}")

    def letters(self) -> list[int]:
        """Letters in canonical order ``a1, a1-, a2, a2-, ...``."""
        out = []
        for i in range(1, self.rank + 1):
            out += [i, -i]
        return out

    def __contains__(self, letter) -> bool:
        return isinstance(letter, int) and 1 <= abs(letter) <= self.rank

    def check(self, w: Iterable[int]) -> Word:
        w = tuple(w)
        for letter in w:
            if letter not in self:
                raise ValueError(f"letter {letter} outside alphabet of rank {self.rank}")
        return w


def involution(letter: int) -> int:
    return -letter


def letter_key(letter: int) -> int:
    """Position of ``letter`` in the canonical order (also its Parikh slot)."""
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def word_key(w: Sequence[int]):
    """Sort key for length-lexicographic order."""
    return (len(w), tuple(letter_key(x) for x in w))


def reduce(w: Iterable[int]) -> Word:
    """Freely reduce ``w`` in a single left-to-right pass."""
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*ws: Sequence[int]) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return tuple(out)


def multiply(*ws: Sequence[int]) -> Word:
    """Product in the free group, returned reduced."""
    return reduce(concat(*ws))


def parikh(w: Iterable[int], rank: int) -> tuple[int, ...]:
    """Letter counts ordered ``(n_a1, n_a1-, ..., n_an, n_an-)``."""
    counts = [0] * (2 * rank)
    for x in w:
        if not 1 <= abs(x) <= rank:
            raise ValueError(f"letter {x} outside alphabet of rank {rank}")
        counts[letter_key(x)] += 1
    return tuple(counts)


def power(w: Sequence[int], n: int) -> Word:
    """``w^n`` as a (not necessarily reduced) word; negative ``n`` inverts."""
    if n < 0:
        return tuple(invert(w)) * (-n)
    return tuple(w) * n


def parse_word(text: str, rank: int | None = None, stable: int | None = None) -> Word:
    """Parse ``"a1 a2- t"`` into a word.

    ``stable`` is the letter index used for ``t``; without it ``t`` is an
    error.  With ``rank`` given, generator indices are range-checked.
    """
    tokens = text.split()
    if tokens == ["e"] or not tokens:
        return EMPTY
    out = []
    for tok in tokens:
        if tok == "e":
            continue
        inverse = tok.endswith("-")
        body = tok[:-1] if inverse else tok
        if body == "t":
            if stable is None:
                raise ValueError("stable letter 't' used outside a semidirect context")
            idx = stable
        elif body.startswith("a") and body[1:].isdigit() and int(body[1:]) >= 1:
            idx = int(body[1:])
            if rank is not None and idx > rank:
                raise ValueError(f"generator {body} exceeds rank {rank}")
        else:
            raise ValueError(f"bad letter token {tok!r}")
        out.append(-idx if inverse else idx)
    return tuple(out)


def format_letter(x: int, stable: int | None = None) -> str:
    name = "t" if stable is not None and abs(x) == stable else f"a{abs(x)}"
    return name if x > 0 else name + "-"


def format_word(w: Sequence[int], stable: int | None = None) -> str:
    if not w:
        return "e"
    return " ".join(format_letter(x, stable) for x in w)
