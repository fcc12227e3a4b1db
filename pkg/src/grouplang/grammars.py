"""Context-free grammars over involutive alphabets.

Right-hand sides mix terminals and nonterminals: an ``int`` is a letter,
a ``str`` is a nonterminal.  Every construction here returns a grammar with
useless symbols removed and nonterminals renamed compactly (``S``, ``N1``,
``N2``, ...), so repeated constructions do not grow unreadable names.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import automata
from .automata import EPS, AlphabetMismatch, Nfa, Transducer
from .semilinear import HybridSet, SemilinearSet
from .words import Alphabet, Word, invert, parikh, reduce, word_key


def _sym_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, x)


def _prod_key(p):
    return (p[0], tuple(_sym_key(x) for x in p[1]))


@dataclass(frozen=True)
class Cfg:
    rank: int
    start: str
    productions: tuple

    def __init__(self, rank: int, start: str, productions: Iterable):
        alpha = Alphabet(rank)
        prods = set()
        for lhs, rhs in productions:
            rhs = tuple(rhs)
            if not isinstance(lhs, str):
                raise ValueError(f"left-hand side {lhs!r} is not a nonterminal")
            for x in rhs:
                if isinstance(x, int):
                    if x not in alpha:
                        raise ValueError(f"letter {x} outside alphabet of rank {rank}")
                elif not isinstance(x, str):
                    raise ValueError(f"bad symbol {x!r}")
            prods.add((lhs, rhs))
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "productions", tuple(sorted(prods, key=_prod_key)))

    @property
    def nonterminals(self) -> list[str]:
        seen = dict.fromkeys([self.start])
        for lhs, rhs in self.productions:
            seen[lhs] = None
            for x in rhs:
                if isinstance(x, str):
                    seen[x] = None
        return list(seen)

    def rules(self, lhs: str) -> list[tuple]:
        return [rhs for a, rhs in self.productions if a == lhs]

    def __str__(self):
        return self.to_text()

    def to_text(self, stable: int | None = None) -> str:
        """DSL rule syntax; ``stable`` names the letter printed as ``t``."""
        from .words import format_letter

        def sym(x):
            return format_letter(x, stable) if isinstance(x, int) else x

        out = []
        for a in self.nonterminals:
            alts = [" ".join(sym(x) for x in rhs) or "e" for rhs in self.rules(a)]
            if alts:
                out.append(f"{a} -> " + " | ".join(alts))
        return " ;\n".join(out)


@dataclass(frozen=True)
class Cnf:
    """Chomsky normal form: ``A -> B C``, ``A -> a`` and optionally ``start -> ε``.

    The start symbol never occurs on a right-hand side.
    """

    rank: int
    start: str
    binary: tuple
    terminal: tuple
    nullable: bool

    def as_cfg(self) -> Cfg:
        prods = [(a, (b, c)) for a, b, c in self.binary]
        prods += [(a, (x,)) for a, x in self.terminal]
        if self.nullable:
            prods.append((self.start, ()))
        return Cfg(self.rank, self.start, prods)


def example_3_12_grammar(rank: int = 2) -> Cfg:
    """``S -> a1 S a1^-1 | T``, ``T -> a1^-1 T T a1 | a2``.

    Its image meets ``<a2>`` in exactly ``{a2^(2^n)}``.
    """
    if rank < 2:
        raise ValueError("the grammar needs at least two generators")
    return Cfg(
        rank,
        "S",
        [("S", (1, "S", -1)), ("S", ("T",)), ("T", (-1, "T", "T", 1)), ("T", (2,))],
    )


def productive(g: Cfg) -> set[str]:
    good: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.productions:
            if lhs not in good and all(isinstance(x, int) or x in good for x in rhs):
                good.add(lhs)
                changed = True
    return good


def nullable(g: Cfg) -> set[str]:
    null: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.productions:
            if lhs not in null and all(isinstance(x, str) and x in null for x in rhs):
                null.add(lhs)
                changed = True
    return null


def is_empty(g: Cfg) -> bool:
    return g.start not in productive(g)


def remove_useless(g: Cfg) -> Cfg:
    good = productive(g)
    prods = [
        (lhs, rhs)
        for lhs, rhs in g.productions
        if lhs in good and all(isinstance(x, int) or x in good for x in rhs)
    ]
    if g.start not in good:
        return Cfg(g.rank, g.start, ())
    by_lhs: dict = {}
    for lhs, rhs in prods:
        by_lhs.setdefault(lhs, []).append(rhs)
    seen = {g.start}
    todo = [g.start]
    while todo:
        a = todo.pop()
        for rhs in by_lhs.get(a, ()):
            for x in rhs:
                if isinstance(x, str) and x not in seen:
                    seen.add(x)
                    todo.append(x)
    return Cfg(g.rank, g.start, [(lhs, rhs) for lhs, rhs in prods if lhs in seen])


def compact(g: Cfg) -> Cfg:
    """Rename nonterminals to ``S, N1, N2, ...`` in breadth-first order from the start."""
    g = remove_useless(g)
    by_lhs: dict = {}
    for lhs, rhs in g.productions:
        by_lhs.setdefault(lhs, []).append(rhs)
    names = {g.start: "S"}
    todo = deque([g.start])
    while todo:
        a = todo.popleft()
        for rhs in by_lhs.get(a, ()):
            for x in rhs:
                if isinstance(x, str) and x not in names:
                    names[x] = f"N{len(names)}"
                    todo.append(x)
    prods = [
        (names[lhs], tuple(names[x] if isinstance(x, str) else x for x in rhs))
        for lhs, rhs in g.productions
    ]
    return Cfg(g.rank, "S", prods)


class _Fresh:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.n = 0

    def __call__(self, hint: str) -> str:
        while True:
            self.n += 1
            name = f"_{hint}{self.n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def to_cnf(g: Cfg) -> Cnf:
    g = remove_useless(g)
    if not g.productions:
        return Cnf(g.rank, g.start, (), (), False)
    fresh = _Fresh(g.nonterminals)
    null = nullable(g)
    start = fresh("S")
    prods = {(start, (g.start,))} | set(g.productions)

    no_eps = set()
    for lhs, rhs in prods:
        options = [[(x,), ()] if isinstance(x, str) and x in null else [(x,)] for x in rhs]
        for combo in product(*options):
            r = sum(combo, ())
            if r:
                no_eps.add((lhs, r))

    term_nt: dict = {}
    lifted = set()
    for lhs, rhs in no_eps:
        if len(rhs) >= 2:
            new = []
            for x in rhs:
                if isinstance(x, int):
                    if x not in term_nt:
                        term_nt[x] = fresh("X")
                    new.append(term_nt[x])
                else:
                    new.append(x)
            lifted.add((lhs, tuple(new)))
        else:
            lifted.add((lhs, rhs))
    lifted |= {(nt, (a,)) for a, nt in term_nt.items()}

    units: dict = {}
    nonunit: dict = {}
    for lhs, rhs in lifted:
        if len(rhs) == 1 and isinstance(rhs[0], str):
            units.setdefault(lhs, set()).add(rhs[0])
        else:
            nonunit.setdefault(lhs, set()).add(rhs)
    lhs_all = {lhs for lhs, _ in lifted}
    flat = set()
    for a in lhs_all:
        reach = {a}
        todo = [a]
        while todo:
            b = todo.pop()
            for c in units.get(b, ()):
                if c not in reach:
                    reach.add(c)
                    todo.append(c)
        for b in reach:
            for rhs in nonunit.get(b, ()):
                flat.add((a, rhs))

    chain: dict = {}
    final = set()
    for lhs, rhs in flat:
        while len(rhs) > 2:
            tail = rhs[1:]
            if tail not in chain:
                chain[tail] = fresh("C")
            final.add((lhs, (rhs[0], chain[tail])))
            lhs, rhs = chain[tail], tail
        final.add((lhs, rhs))

    clean = remove_useless(Cfg(g.rank, start, final))
    binary = tuple((a, r[0], r[1]) for a, r in clean.productions if len(r) == 2)
    terminal = tuple((a, r[0]) for a, r in clean.productions if len(r) == 1)
    return Cnf(g.rank, start, binary, terminal, g.start in null)


def cyk_member(c: Cnf | Cfg, w: Sequence[int]) -> bool:
    if isinstance(c, Cfg):
        c = to_cnf(c)
    n = len(w)
    if n == 0:
        return c.nullable
    by_letter: dict = {}
    for a, x in c.terminal:
        by_letter.setdefault(x, set()).add(a)
    by_pair: dict = {}
    for a, b, d in c.binary:
        by_pair.setdefault((b, d), set()).add(a)
    table = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, x in enumerate(w):
        table[i][1] = set(by_letter.get(x, ()))
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            cell = table[i][length]
            for k in range(1, length):
                left, right = table[i][k], table[i + k][length - k]
                if not left or not right:
                    continue
                for b in left:
                    for d in right:
                        cell |= by_pair.get((b, d), set())
    return c.start in table[0][n]


def enumerate_words(g: Cfg | Cnf, maxlen: int) -> list[Word]:
    """All words of length <= ``maxlen``, each once, in length-lexicographic order.

    Dynamic programming over the CNF: the words of ``A`` of length ``n``
    are the concatenations ``uv`` over rules ``A -> BC`` and splits of ``n``.
    """
    c = g if isinstance(g, Cnf) else to_cnf(g)
    table: dict = {}
    for a, b, d in c.binary:
        table.setdefault(a, [set() for _ in range(maxlen + 1)])
        table.setdefault(b, [set() for _ in range(maxlen + 1)])
        table.setdefault(d, [set() for _ in range(maxlen + 1)])
    for a, x in c.terminal:
        table.setdefault(a, [set() for _ in range(maxlen + 1)])
        if maxlen >= 1:
            table[a][1].add((x,))
    for n in range(2, maxlen + 1):
        for a, b, d in c.binary:
            target = table[a][n]
            left, right = table[b], table[d]
            for i in range(1, n):
                if not left[i] or not right[n - i]:
                    continue
                for u in left[i]:
                    for v in right[n - i]:
                        target.add(u + v)
    out = [()] if c.nullable else []
    if c.start in table:
        for n in range(1, maxlen + 1):
            out.extend(sorted(table[c.start][n], key=word_key))
    return out


def red_oracle(g: Cfg, bound: int) -> set[Word]:
    """``{reduce(w) : w in L(g), |w| <= bound}``: the bounded stand-in for ``Red(L)``."""
    return {reduce(w) for w in enumerate_words(g, bound)}


def _check_rank(g: Cfg, x):
    if g.rank != x.rank:
        raise AlphabetMismatch(f"grammar rank {g.rank} vs automaton rank {x.rank}")


def _eps_free(x: Nfa):
    closure = automata.epsilon_closure(x)
    delta: dict = {}
    for p in range(x.n_states):
        for p2 in closure[p]:
            for q2, a, r in x.transitions:
                if q2 == p2 and a != EPS:
                    delta.setdefault((p, a), set()).add(r)
    final = {p for p in range(x.n_states) if closure[p] & x.final}
    return delta, final


def _triple_product(c: Cnf, n_states: int, starts, terminal_rules):
    """Shared core of the Bar-Hillel and grammar/transducer products.

    ``terminal_rules(p, letter, q)`` yields right-hand sides for the triple
    ``(p, A, q)`` when ``A -> letter``.
    """
    binary: dict = {}
    for a, b, d in c.binary:
        binary.setdefault(a, []).append((b, d))
    term: dict = {}
    for a, x in c.terminal:
        term.setdefault(a, []).append(x)

    def name(p, a, q):
        return f"{p}.{a}.{q}"

    prods = []
    seen = set()
    todo = deque()
    for t in starts:
        if t not in seen:
            seen.add(t)
            todo.append(t)
    while todo:
        p, a, q = todo.popleft()
        lhs = name(p, a, q)
        for x in term.get(a, ()):
            for rhs in terminal_rules(p, x, q):
                prods.append((lhs, tuple(rhs)))
        for b, d in binary.get(a, ()):
            for r in range(n_states):
                left, right = (p, b, r), (r, d, q)
                for t in (left, right):
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
                prods.append((lhs, (name(*left), name(*right))))
    return prods, name


def intersect_rational(g: Cfg, x: Nfa) -> Cfg:
    """Bar-Hillel triple construction: ``L(out) = L(g) ∩ L(x)``."""
    _check_rank(g, x)
    c = to_cnf(g)
    delta, final = _eps_free(x)

    def terminal_rules(p, a, q):
        if q in delta.get((p, a), ()):
            yield (a,)

    starts = [(i, c.start, f) for i in sorted(x.initial) for f in sorted(final)]
    prods, name = _triple_product(c, x.n_states, starts, terminal_rules)
    top = "__top__"
    prods += [(top, (name(*t),)) for t in starts]
    if c.nullable and x.initial & final:
        prods.append((top, ()))
    return compact(Cfg(g.rank, top, prods))


def _prefixed(g: Cfg, prefix: str) -> list:
    return [
        (prefix + lhs, tuple(prefix + s if isinstance(s, str) else s for s in rhs))
        for lhs, rhs in g.productions
    ]


def nfa_grammar(x: Nfa) -> Cfg:
    """Right-linear grammar for ``L(x)``."""
    prods = [("R", (f"q{i}",)) for i in x.initial]
    for p, a, q in x.transitions:
        prods.append((f"q{p}", (f"q{q}",) if a == EPS else (a, f"q{q}")))
    prods += [(f"q{f}", ()) for f in x.final]
    return compact(Cfg(x.rank, "R", prods))


def concat_rational(g: Cfg, x: Nfa, side: str = "right") -> Cfg:
    """``L(g)·L(x)`` for ``side="right"``, ``L(x)·L(g)`` for ``side="left"``."""
    _check_rank(g, x)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    r = nfa_grammar(x)
    prods = _prefixed(g, "G.") + _prefixed(r, "R.")
    pair = ("G." + g.start, "R." + r.start)
    prods.append(("__top__", pair if side == "right" else pair[::-1]))
    return compact(Cfg(g.rank, "__top__", prods))


def concat_grammars(*gs: Cfg) -> Cfg:
    ranks = {g.rank for g in gs}
    if len(ranks) != 1:
        raise AlphabetMismatch(f"ranks differ: {sorted(ranks)}")
    prods = []
    for i, g in enumerate(gs):
        prods += _prefixed(g, f"C{i}.")
    prods.append(("__top__", tuple(f"C{i}.{g.start}" for i, g in enumerate(gs))))
    return compact(Cfg(gs[0].rank, "__top__", prods))


def union_grammars(gs: Sequence[Cfg], rank: int | None = None) -> Cfg:
    """Union; an empty list gives the empty language over ``rank``."""
    if not gs:
        if rank is None:
            raise ValueError("rank needed for an empty union")
        return Cfg(rank, "S", ())
    ranks = {g.rank for g in gs}
    if len(ranks) != 1:
        raise AlphabetMismatch(f"ranks differ: {sorted(ranks)}")
    prods = []
    for i, g in enumerate(gs):
        prods += _prefixed(g, f"U{i}.")
        prods.append(("__top__", (f"U{i}.{g.start}",)))
    return compact(Cfg(gs[0].rank, "__top__", prods))


def substitute(g: Cfg, h: Mapping[int, Sequence[int]], out_rank: int | None = None) -> Cfg:
    """Image of ``L(g)`` under the monoid morphism extending ``h``.

    ``h`` must respect the involution: ``h(-a) == invert(h(a))``.  Images of
    inverse letters may be omitted and are then derived.
    """
    out_rank = g.rank if out_rank is None else out_rank
    out_alpha = Alphabet(out_rank)
    full: dict = {}
    for a in range(1, g.rank + 1):
        if a in h:
            full[a] = out_alpha.check(h[a])
            full[-a] = invert(full[a])
            if -a in h and tuple(h[-a]) != full[-a]:
                raise ValueError(f"substitution is not involutive at letter {a}")
        elif -a in h:
            full[-a] = out_alpha.check(h[-a])
            full[a] = invert(full[-a])
        else:
            raise ValueError(f"substitution undefined on letter {a}")
    prods = []
    for lhs, rhs in g.productions:
        new = []
        for x in rhs:
            new.extend(full[x] if isinstance(x, int) else (x,))
        prods.append((lhs, tuple(new)))
    return compact(Cfg(out_rank, g.start, prods))


def transduce(g: Cfg, t: Transducer) -> Cfg:
    """Grammar for ``T(L(g))`` by the grammar/transducer triple product."""
    if t.in_rank != g.rank:
        raise AlphabetMismatch(f"transducer input rank {t.in_rank} vs grammar rank {g.rank}")
    c = to_cnf(g)
    table: dict = {}
    for p, a, out, q in t.transitions:
        table.setdefault((p, a), []).append((tuple(out), q))

    def terminal_rules(p, a, q):
        for out, q2 in table.get((p, a), ()):
            if q2 == q:
                yield out

    finals = sorted(t.final)
    starts = [(t.initial, c.start, f) for f in finals]
    prods, name = _triple_product(c, t.n_states, starts, terminal_rules)
    top = "__top__"
    prods += [(top, (name(*s),) + tuple(t.final[s[2]])) for s in starts]
    if c.nullable and t.initial in t.final:
        prods.append((top, tuple(t.final[t.initial])))
    return compact(Cfg(t.out_rank, top, prods))


def _matrix_star(m: list[list[HybridSet]], dim: int) -> list[list[HybridSet]]:
    n = len(m)
    for k in range(n):
        s = m[k][k].star()
        m = [[m[i][j].union(m[i][k].plus(s).plus(m[k][j])) for j in range(n)] for i in range(n)]
    one = HybridSet.point((0,) * dim)
    return [[m[i][j].union(one) if i == j else m[i][j] for j in range(n)] for i in range(n)]


def parikh_image(g: Cfg) -> SemilinearSet:
    """Semilinear Parikh image of ``L(g)`` in ``N^(2 rank)``.

    Solves the commutative fixpoint system ``X = f(X)`` (one equation per
    nonterminal) by Newton iteration over grouped semilinear sets:
    ``ν <- J_f(ν)* · f(ν)``, starting at ``f(∅)``.  For commutative
    idempotent semirings this reaches the least fixpoint after as many
    steps as there are nonterminals.
    """
    g = remove_useless(g)
    dim = 2 * g.rank
    if not g.productions:
        return SemilinearSet.empty(dim)
    empty = HybridSet(dim)
    names = g.nonterminals
    idx = {a: i for i, a in enumerate(names)}
    rules = []
    for lhs, rhs in g.productions:
        const = HybridSet.point(parikh([x for x in rhs if isinstance(x, int)], g.rank))
        rules.append((idx[lhs], const, [idx[x] for x in rhs if isinstance(x, str)]))

    def monomial(const, vars_, nu):
        acc = const
        for v in vars_:
            acc = acc.plus(nu[v])
            if acc.is_empty:
                break
        return acc

    def f(nu):
        out = [empty] * len(names)
        for lhs, const, vars_ in rules:
            out[lhs] = out[lhs].union(monomial(const, vars_, nu))
        return out

    nu = f([empty] * len(names))
    for _ in range(len(names)):
        jac = [[empty] * len(names) for _ in names]
        for lhs, const, vars_ in rules:
            for j, y in enumerate(vars_):
                rest = vars_[:j] + vars_[j + 1:]
                jac[lhs][y] = jac[lhs][y].union(monomial(const, rest, nu))
        js = _matrix_star(jac, dim)
        fx = f(nu)
        nu = []
        for i in range(len(names)):
            acc = empty
            for j in range(len(names)):
                acc = acc.union(js[i][j].plus(fx[j]))
            nu.append(acc)
    return nu[idx[g.start]].to_semilinear()
