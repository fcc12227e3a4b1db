"""Finite automata over involutive alphabets.

Automata are never determinised.  Two automata are compared by bounded
language equality (``enumerate`` up to a length bound), which is all the
group-level constructions need.

Label ``0`` is epsilon; every other label is a signed letter.  All public
constructors return trimmed automata.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import EMPTY, Alphabet, Word, format_letter

EPS = 0


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Nfa:
    rank: int
    n_states: int
    transitions: frozenset  # of (src, label, dst)
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        Alphabet(self.rank)
        for p, a, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transition {(p, a, q)} leaves the state range")
            if a != EPS and not 1 <= abs(a) <= self.rank:
                raise ValueError(f"label {a} outside alphabet of rank {self.rank}")
        for s in self.initial | self.final:
            if not 0 <= s < self.n_states:
                raise ValueError(f"state {s} out of range")

    def successors(self):
        """``{state: [(label, dst), ...]}`` with labels sorted canonically."""
        out = {p: [] for p in range(self.n_states)}
        for p, a, q in sorted(self.transitions):
            out[p].append((a, q))
        return out

    def __str__(self):
        return to_text(self)


def _make(rank, n, transitions, initial, final, trimmed=True) -> Nfa:
    x = Nfa(rank, n, frozenset(transitions), frozenset(initial), frozenset(final))
    return trim(x) if trimmed else x


def _same_alphabet(x: Nfa, y: Nfa):
    if x.rank != y.rank:
        raise AlphabetMismatch(f"rank {x.rank} vs rank {y.rank}")


def _shift(x: Nfa, k: int):
    return {(p + k, a, q + k) for p, a, q in x.transitions}


def trim(x: Nfa) -> Nfa:
    """Keep only states on some initial-to-final path, renumbered densely."""
    fwd = {p: set() for p in range(x.n_states)}
    bwd = {p: set() for p in range(x.n_states)}
    for p, _, q in x.transitions:
        fwd[p].add(q)
        bwd[q].add(p)
    keep = _closure(x.initial, fwd) & _closure(x.final, bwd)
    order = sorted(keep)
    ren = {s: i for i, s in enumerate(order)}
    trans = {(ren[p], a, ren[q]) for p, a, q in x.transitions if p in keep and q in keep}
    return Nfa(
        x.rank,
        len(order),
        frozenset(trans),
        frozenset(ren[s] for s in x.initial if s in keep),
        frozenset(ren[s] for s in x.final if s in keep),
    )


def _closure(start, adj) -> set:
    seen = set(start)
    todo = list(start)
    while todo:
        p = todo.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def empty(rank: int) -> Nfa:
    return _make(rank, 0, (), (), ())


def literal(w: Sequence[int], rank: int) -> Nfa:
    w = Alphabet(rank).check(w)
    trans = {(i, a, i + 1) for i, a in enumerate(w)}
    return _make(rank, len(w) + 1, trans, {0}, {len(w)})


def letters(alphabet_letters: Iterable[int], rank: int) -> Nfa:
    """One-letter words from the given set."""
    trans = {(0, a, 1) for a in alphabet_letters}
    return _make(rank, 2, trans, {0}, {1})


def everything(rank: int) -> Nfa:
    """The full monoid ``Ã*``."""
    trans = {(0, a, 0) for a in Alphabet(rank).letters()}
    return _make(rank, 1, trans, {0}, {0})


def union(x: Nfa, y: Nfa) -> Nfa:
    _same_alphabet(x, y)
    k = x.n_states
    return _make(
        x.rank,
        k + y.n_states,
        set(x.transitions) | _shift(y, k),
        set(x.initial) | {s + k for s in y.initial},
        set(x.final) | {s + k for s in y.final},
    )


def concat(x: Nfa, y: Nfa) -> Nfa:
    _same_alphabet(x, y)
    k = x.n_states
    trans = set(x.transitions) | _shift(y, k)
    trans |= {(f, EPS, i + k) for f in x.final for i in y.initial}
    return _make(x.rank, k + y.n_states, trans, x.initial, {s + k for s in y.final})


def star(x: Nfa) -> Nfa:
    s = x.n_states
    trans = set(x.transitions)
    trans |= {(s, EPS, i) for i in x.initial}
    trans |= {(f, EPS, s) for f in x.final}
    return _make(x.rank, s + 1, trans, {s}, {s})


def epsilon_closure(x: Nfa) -> list[frozenset]:
    adj = {p: set() for p in range(x.n_states)}
    for p, a, q in x.transitions:
        if a == EPS:
            adj[p].add(q)
    return [frozenset(_closure({p}, adj)) for p in range(x.n_states)]


def _delta(x: Nfa):
    out: dict = {}
    for p, a, q in x.transitions:
        if a != EPS:
            out.setdefault((p, a), set()).add(q)
    return out


def accepts(x: Nfa, w: Sequence[int]) -> bool:
    closure = epsilon_closure(x)
    delta = _delta(x)
    current = set().union(*(closure[i] for i in x.initial)) if x.initial else set()
    for a in w:
        nxt = set()
        for p in current:
            for q in delta.get((p, a), ()):
                nxt |= closure[q]
        current = nxt
        if not current:
            return False
    return bool(current & x.final)


def is_empty(x: Nfa) -> bool:
    return not trim(x).final


def enumerate_words(x: Nfa, maxlen: int) -> list[Word]:
    """Accepted words of length <= ``maxlen`` in length-lexicographic order."""
    x = trim(x)
    if not x.initial:
        return []
    closure = epsilon_closure(x)
    delta = _delta(x)
    order = Alphabet(x.rank).letters()
    start = frozenset().union(*(closure[i] for i in x.initial))
    level = [(EMPTY, start)]
    out = []
    for n in range(maxlen + 1):
        nxt = []
        for w, states in level:
            if states & x.final:
                out.append(w)
            if n == maxlen:
                continue
            for a in order:
                target = set()
                for p in states:
                    for q in delta.get((p, a), ()):
                        target |= closure[q]
                if target:
                    nxt.append((w + (a,), frozenset(target)))
        level = nxt
    return out


def intersect(x: Nfa, y: Nfa) -> Nfa:
    """Product automaton; epsilon moves interleave on either side."""
    _same_alphabet(x, y)
    dx, dy = x.successors(), y.successors()
    ids: dict = {}
    todo = deque()

    def state(pair):
        if pair not in ids:
            ids[pair] = len(ids)
            todo.append(pair)
        return ids[pair]

    initial = {state((p, q)) for p in sorted(x.initial) for q in sorted(y.initial)}
    trans = set()
    while todo:
        p, q = todo.popleft()
        src = ids[(p, q)]
        for a, p2 in dx[p]:
            if a == EPS:
                trans.add((src, EPS, state((p2, q))))
        for a, q2 in dy[q]:
            if a == EPS:
                trans.add((src, EPS, state((p, q2))))
        for a, p2 in dx[p]:
            if a == EPS:
                continue
            for b, q2 in dy[q]:
                if a == b:
                    trans.add((src, a, state((p2, q2))))
    final = {i for (p, q), i in ids.items() if p in x.final and q in y.final}
    return _make(x.rank, len(ids), trans, initial, final)


def reduced_word_automaton(rank: int) -> Nfa:
    """Accepts exactly the freely reduced words; one state per last letter plus a start."""
    alpha = Alphabet(rank).letters()
    slot = {a: i + 1 for i, a in enumerate(alpha)}
    trans = set()
    for a in alpha:
        trans.add((0, a, slot[a]))
        for b in alpha:
            if b != -a:
                trans.add((slot[a], b, slot[b]))
    n = 2 * rank + 1
    return _make(rank, n, trans, {0}, range(n), trimmed=False)


def nonreduced_word_automaton(rank: int) -> Nfa:
    """Accepts the words containing some factor ``a a^-1`` (the complement of the above)."""
    alpha = Alphabet(rank).letters()
    done = 2 * rank + 1
    trans = set()
    for i, a in enumerate(alpha):
        trans |= {(0, a, 0), (done, a, done), (0, a, i + 1), (i + 1, -a, done)}
    return _make(rank, done + 1, trans, {0}, {done})


def benois_saturate(x: Nfa) -> Nfa:
    """Add epsilon edges ``p -> q`` whenever some ``p -> q`` path reads a word equal to 1.

    Fixpoint: ``p -a-> r ~> s -a^-1-> q`` with ``r ~> s`` already
    epsilon-connected yields a new epsilon edge ``(p, q)``.  Each round
    recomputes the epsilon closure, so the cost is O(states^3) per round.
    """
    trans = set(x.transitions)
    by_label: dict = {}
    for p, a, q in x.transitions:
        if a != EPS:
            by_label.setdefault(a, []).append((p, q))
    while True:
        cur = Nfa(x.rank, x.n_states, frozenset(trans), x.initial, x.final)
        closure = epsilon_closure(cur)
        added = set()
        for a, edges in by_label.items():
            back = by_label.get(-a, ())
            if not back:
                continue
            for p, r in edges:
                reach = closure[r]
                for s, q in back:
                    if s in reach and q not in closure[p]:
                        added.add((p, EPS, q))
        added -= trans
        if not added:
            return cur
        trans |= added


def red_language(x: Nfa) -> Nfa:
    """The reduced representatives ``Red(L(x))`` as an automaton."""
    return trim(intersect(benois_saturate(x), reduced_word_automaton(x.rank)))


def to_text(x: Nfa, stable: int | None = None) -> str:
    """Adjacency format: ``initial``/``final`` header lines then ``src label dst``."""
    lines = [
        f"states {x.n_states}",
        "initial " + " ".join(map(str, sorted(x.initial))),
        "final " + " ".join(map(str, sorted(x.final))),
    ]
    for p, a, q in sorted(x.transitions):
        label = "eps" if a == EPS else format_letter(a, stable)
        lines.append(f"{p} {label} {q}")
    return "\n".join(lines) + "\n"


def from_text(text: str, rank: int) -> Nfa:
    from .words import parse_word

    n, initial, final, trans = 0, set(), set(), set()
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "states":
            n = int(parts[1])
        elif parts[0] == "initial":
            initial = {int(s) for s in parts[1:]}
        elif parts[0] == "final":
            final = {int(s) for s in parts[1:]}
        else:
            p, label, q = parts
            a = EPS if label == "eps" else parse_word(label, rank)[0]
            trans.add((int(p), a, int(q)))
            n = max(n, int(p) + 1, int(q) + 1)
    return Nfa(rank, n, frozenset(trans), frozenset(initial), frozenset(final))


@dataclass(frozen=True)
class Transducer:
    """Letter-to-word transducer with optional final output words.

    ``transitions`` holds ``(src, input_letter, output_word, dst)``;
    ``final`` maps accepting states to the word emitted on acceptance.
    """

    in_rank: int
    out_rank: int
    n_states: int
    initial: int
    transitions: tuple
    final: dict = field(hash=False)

    def __post_init__(self):
        Alphabet(self.in_rank)
        Alphabet(self.out_rank)
        for p, a, out, q in self.transitions:
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError(f"transducer transition {(p, a, out, q)} leaves the state range")
            if not 1 <= abs(a) <= self.in_rank:
                raise ValueError(f"input letter {a} outside rank {self.in_rank}")
            Alphabet(self.out_rank).check(out)
        for s, out in self.final.items():
            if not 0 <= s < self.n_states:
                raise ValueError(f"final state {s} out of range")
            Alphabet(self.out_rank).check(out)

    def runs(self, w: Sequence[int]) -> set:
        """All ``(output, end_state)`` pairs of accepting runs on ``w``."""
        table: dict = {}
        for p, a, out, q in self.transitions:
            table.setdefault((p, a), []).append((tuple(out), q))
        current = {(EMPTY, self.initial)}
        for a in w:
            current = {
                (out + o, q) for out, p in current for o, q in table.get((p, a), ())
            }
        return {(out + tuple(self.final[p]), p) for out, p in current if p in self.final}

    def images(self, w: Sequence[int]) -> set:
        return {out for out, _ in self.runs(w)}


def identity_transducer(rank: int) -> Transducer:
    trans = tuple((0, a, (a,), 0) for a in Alphabet(rank).letters())
    return Transducer(rank, rank, 1, 0, trans, {0: EMPTY})
