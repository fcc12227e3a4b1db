import random

import pytest

from grouplang.automata import (
    AlphabetMismatch,
    Transducer,
    empty,
    everything,
    identity_transducer,
    letters,
    literal,
    star,
)
from grouplang.grammars import (
    Cfg,
    concat_grammars,
    concat_rational,
    cyk_member,
    enumerate_words,
    example_3_12_grammar,
    intersect_rational,
    is_empty,
    nfa_grammar,
    parikh_image,
    red_oracle,
    remove_useless,
    substitute,
    to_cnf,
    transduce,
    union_grammars,
)
from grouplang.semilinear import LinearSet, SemilinearSet, member
from grouplang.words import parikh, reduce
from corpus import corpus
from oracles import all_words, brute_language, earley_member, nfa_accepts, parikh_vectors, random_nfa, sentential_bfs

G = example_3_12_grammar()
EPS_ONLY = Cfg(2, "S", [("S", ())])


def lang(g, n):
    return set(enumerate_words(g, n))


def test_example_grammar_shape():
    assert G.productions == Cfg(2, "S", [
        ("S", (1, "S", -1)), ("S", ("T",)), ("T", (-1, "T", "T", 1)), ("T", (2,))]).productions
    assert len(G.productions) == 4
    assert enumerate_words(G, 1) == [(2,)]
    assert cyk_member(to_cnf(G), [1, 2, -1])
    assert not cyk_member(to_cnf(G), [1, 2, 1])
    with pytest.raises(ValueError):
        example_3_12_grammar(1)


def test_example_grammar_against_derivation_bfs():
    want = sentential_bfs(G, 9)
    assert lang(G, 9) == want
    assert lang(G, 3) == {(2,), (1, 2, -1)}


def test_cnf_shape_and_trivial_cases():
    c = to_cnf(EPS_ONLY)
    assert c.nullable and not c.binary and not c.terminal
    assert lang(EPS_ONLY, 5) == {()}
    assert cyk_member(c, [])
    one = to_cnf(Cfg(2, "S", [("S", (1,))]))
    assert len(one.terminal) == 1 and not one.binary
    for g in corpus():
        c = to_cnf(g)
        rhs_syms = {b for _, b, _ in c.binary} | {d for _, _, d in c.binary}
        assert c.start not in rhs_syms


def test_empty_grammars():
    assert is_empty(Cfg(2, "S", [("S", ("S",))]))
    assert lang(Cfg(2, "S", [("S", ("S",))]), 6) == set()
    assert is_empty(Cfg(2, "S", []))
    assert not is_empty(EPS_ONLY)
    assert enumerate_words(Cfg(2, "S", [("S", (1, "X"))]), 4) == []


def test_enumerate_matches_earley_oracle():
    for g in corpus():
        assert lang(g, 5) == brute_language(g, 5), g


def test_cyk_matches_enumeration():
    rng = random.Random(0)
    for g in corpus():
        c = to_cnf(g)
        words = lang(g, 10)
        for w in words:
            assert cyk_member(c, w)
        for _ in range(300):
            w = tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 10)))
            assert cyk_member(c, w) == (w in words) == earley_member(g, w)


def test_intersect_rational_examples():
    assert lang(intersect_rational(G, everything(2)), 8) == lang(G, 8)
    # a language-level intersection: a2 a2 only occurs wrapped as a1- ... a1
    a2s = star(literal([2], 2))
    assert lang(intersect_rational(G, a2s), 4) == {w for w in lang(G, 4) if nfa_accepts(a2s, w)} == {(2,)}
    assert is_empty(intersect_rational(G, empty(2)))


def test_intersect_rational_against_oracle():
    rng = random.Random(1)
    for g in corpus():
        for _ in range(10):
            x = random_nfa(rng)
            got = lang(intersect_rational(g, x), 8)
            assert got == {w for w in lang(g, 8) if nfa_accepts(x, w)}


def test_concat_rational():
    a1 = Cfg(2, "S", [("S", (1,))])
    assert lang(concat_rational(a1, literal([2], 2)), 4) == {(1, 2)}
    assert lang(concat_rational(a1, literal([2], 2), "left"), 4) == {(2, 1)}
    assert lang(concat_rational(G, literal([], 2)), 8) == lang(G, 8)
    assert lang(concat_rational(G, literal([-1], 2)), 6) == {w + (-1,) for w in lang(G, 5)}
    with pytest.raises(ValueError):
        concat_rational(G, literal([], 2), "middle")
    with pytest.raises(AlphabetMismatch):
        concat_rational(G, literal([], 3))


def test_union_and_concat_grammars():
    gs = corpus()[:4]
    assert lang(union_grammars(gs), 6) == set().union(*(lang(g, 6) for g in gs))
    assert lang(union_grammars([], 2), 4) == set()
    two = concat_grammars(G, G)
    assert lang(two, 6) == {u + v for u in lang(G, 6) for v in lang(G, 6) if len(u + v) <= 6}


def test_nfa_grammar():
    rng = random.Random(2)
    for _ in range(20):
        x = random_nfa(rng)
        assert lang(nfa_grammar(x), 6) == {w for w in all_words(2, 6) if nfa_accepts(x, w)}


def _apply(h, w):
    out = ()
    for a in w:
        out += h[a] if a > 0 else tuple(-x for x in reversed(h[-a]))
    return out


def test_substitute_against_word_level_image():
    h = {1: (-3, 1, 3), 2: (2,)}
    for g in corpus():
        s = substitute(g, h, 3)
        assert lang(s, 9) == {u for u in map(lambda w: _apply(h, w), lang(g, 9)) if len(u) <= 9}
    assert lang(substitute(G, {1: (1,), 2: (2,)}), 8) == lang(G, 8)


def test_substitute_checks_involution():
    with pytest.raises(ValueError):
        substitute(G, {1: (1,), -1: (1,), 2: (2,)})
    with pytest.raises(ValueError):
        substitute(G, {1: (1,)})
    assert lang(substitute(G, {-1: (-2,), 2: (1,)}), 3) == {(1,), (2, 1, -2)}


def test_transduce_identity_and_doubling():
    for g in corpus():
        assert lang(transduce(g, identity_transducer(2)), 7) == lang(g, 7)
    dbl = Transducer(2, 2, 1, 0, tuple([(0, 1, (1, 1), 0), (0, -1, (-1,), 0), (0, 2, (2,), 0), (0, -2, (-2,), 0)]),
                     {0: ()})
    for g in corpus():
        want = {o for w in lang(g, 10) for o in dbl.images(w) if len(o) <= 10}
        assert lang(transduce(g, dbl), 10) == want


def test_transduce_random_transducers():
    rng = random.Random(3)
    letters_ = [1, -1, 2, -2]
    for _ in range(30):
        trans = []
        for p in range(2):
            for a in letters_:
                for _ in range(rng.randint(0, 2)):
                    out = tuple(rng.choice(letters_) for _ in range(rng.randint(1, 2)))
                    trans.append((p, a, out, rng.randrange(2)))
        t = Transducer(2, 2, 2, 0, tuple(trans), {rng.randrange(2): (rng.choice(letters_),)})
        for g in corpus()[:6]:
            # outputs are never shorter than inputs, so length <= 7 sources suffice
            want = {o for w in lang(g, 7) for o in t.images(w) if len(o) <= 7}
            assert lang(transduce(g, t), 7) == want


def test_red_oracle():
    assert red_oracle(G, 6) == {(2,), (2, 2)} | {reduce(w) for w in lang(G, 6)}
    assert (2, 2) in red_oracle(G, 6)


def test_remove_useless_keeps_language():
    g = Cfg(2, "S", [("S", (1, "A")), ("S", (2,)), ("A", ("A",)), ("B", (1,))])
    r = remove_useless(g)
    assert lang(r, 5) == {(2,)}
    assert {lhs for lhs, _ in r.productions} == {"S"}


def test_parikh_examples():
    assert parikh_image(EPS_ONLY) == SemilinearSet.point((0, 0, 0, 0))
    s = parikh_image(Cfg(2, "S", [("S", (1, "S", -1)), ("S", ())]))
    assert s.components == (LinearSet((0, 0, 0, 0), [(1, 1, 0, 0)]),)
    assert member(s, (2, 2, 0, 0)) and not member(s, (2, 1, 0, 0))
    assert parikh_image(Cfg(2, "S", [("S", ("S",))])).is_empty


def test_parikh_sound_and_complete_on_corpus():
    for g in corpus():
        s = parikh_image(g)
        vecs = parikh_vectors(g, 12)
        assert all(member(s, v) for v in vecs)
        assert s.points(12) == vecs


def test_parikh_oracle_agrees_with_enumeration():
    for g in corpus():
        assert parikh_vectors(g, 7) == {parikh(w, 2) for w in lang(g, 7)}


def test_text_form():
    assert G.to_text() == "S -> a1 S a1- | T ;\nT -> a1- T T a1 | a2"
    g = Cfg(3, "S", [("S", (-3, "S", 3)), ("S", (1,))])
    assert g.to_text(stable=3) == "S -> t- S t | a1"


def test_letters_automaton_feeds_grammars():
    g = intersect_rational(G, star(letters([1, -1, 2], 2)))
    assert lang(g, 5) == {w for w in lang(G, 5) if -2 not in w}
