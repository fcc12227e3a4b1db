import random

import pytest

from grouplang.automata import (
    EPS,
    AlphabetMismatch,
    Nfa,
    accepts,
    benois_saturate,
    concat,
    empty,
    enumerate_words,
    everything,
    from_text,
    intersect,
    is_empty,
    letters,
    literal,
    nonreduced_word_automaton,
    red_language,
    reduced_word_automaton,
    star,
    to_text,
    trim,
    union,
)
from grouplang.words import is_reduced, reduce
from oracles import all_words, nfa_accepts, nfa_language, nfa_reduced_images, random_nfa, reduced_witness_lengths


def lang(x, n):
    return set(enumerate_words(x, n))


def test_constructors():
    assert lang(literal([], 2), 4) == {()}
    assert lang(union(literal([1], 2), literal([2], 2)), 3) == {(1,), (2,)}
    assert lang(star(literal([2], 2)), 3) == {(), (2,), (2, 2), (2, 2, 2)}
    assert lang(concat(literal([1], 2), star(literal([2], 2))), 2) == {(1,), (1, 2)}


def test_accepts():
    a2s = star(literal([2], 2))
    assert accepts(a2s, [2, 2])
    assert not accepts(a2s, [1])
    assert accepts(benois_saturate(literal([1, -1], 2)), [])


def test_intersect():
    x = random_nfa(random.Random(3))
    assert lang(intersect(x, x), 8) == lang(x, 8)
    assert lang(intersect(star(literal([1], 2)), star(literal([2], 2))), 6) == {()}
    assert is_empty(intersect(reduced_word_automaton(2), literal([1, -1], 2)))


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        union(literal([1], 1), literal([1], 2))
    with pytest.raises(AlphabetMismatch):
        intersect(literal([1], 1), literal([1], 2))


def test_nfa_validation():
    with pytest.raises(ValueError):
        Nfa(2, 1, frozenset({(0, 3, 0)}), frozenset({0}), frozenset({0}))
    with pytest.raises(ValueError):
        Nfa(2, 1, frozenset({(0, 1, 1)}), frozenset({0}), frozenset({0}))


def test_reduced_word_automaton():
    r = reduced_word_automaton(2)
    assert accepts(r, [])
    assert not accepts(r, [1, -1])
    assert len(enumerate_words(r, 3)) == 1 + 4 + 12 + 36
    assert lang(r, 5) == {w for w in all_words(2, 5) if is_reduced(w)}


def test_nonreduced_word_automaton_is_the_complement():
    n = nonreduced_word_automaton(2)
    assert lang(n, 5) == {w for w in all_words(2, 5) if not is_reduced(w)}


def test_empty_and_enumerate():
    assert is_empty(Nfa(2, 2, frozenset({(0, 1, 1)}), frozenset({0}), frozenset()))
    assert is_empty(empty(2))
    assert enumerate_words(star(literal([2], 2)), 2) == [(), (2,), (2, 2)]


def test_trim_keeps_only_useful_states():
    x = Nfa(2, 4, frozenset({(0, 1, 1), (1, 2, 2), (0, 2, 3)}), frozenset({0}), frozenset({2}))
    t = trim(x)
    assert t.n_states == 3
    assert lang(t, 4) == lang(x, 4) == {(1, 2)}


def test_benois_examples():
    assert accepts(benois_saturate(literal([1, -1], 2)), [])
    assert lang(red_language(literal([1, 2, -2], 2)), 6) == {(1,)}
    a2s = star(literal([2], 2))
    assert lang(red_language(a2s), 8) == lang(a2s, 8)
    assert lang(red_language(literal([], 2)), 6) == {()}
    assert lang(red_language(literal([1, -1, 2], 2)), 6) == {(2,)}
    assert lang(red_language(star(literal([1, -1], 2))), 8) == {()}


def test_saturation_is_monotone_and_idempotent():
    rng = random.Random(5)
    for _ in range(100):
        x = random_nfa(rng)
        s = benois_saturate(x)
        assert x.transitions <= s.transitions
        assert benois_saturate(s).transitions == s.transitions
        assert lang(x, 5) <= lang(s, 5)


def test_enumerate_matches_simulation_oracle():
    rng = random.Random(6)
    for _ in range(50):
        x = random_nfa(rng)
        assert lang(x, 5) == nfa_language(x, 5)
        for w in all_words(2, 3):
            assert accepts(x, w) == nfa_accepts(x, w)


def test_intersect_enumerate_consistency():
    rng = random.Random(7)
    for _ in range(100):
        x, y = random_nfa(rng), random_nfa(rng)
        assert lang(intersect(x, y), 8) == lang(x, 8) & lang(y, 8)


def test_witness_oracle_matches_explicit_search():
    # the fast witness-length oracle against the explicit path search
    rng = random.Random(9)
    for _ in range(40):
        x = random_nfa(rng)
        w = reduced_witness_lengths(x, 6)
        assert nfa_reduced_images(x, 18, 6) == {r for r, c in w.items() if c <= 18}


def test_red_language_is_exact_on_random_automata():
    # unbounded witness lengths: Red(L) restricted to length 8, exactly
    rng = random.Random(8)
    for _ in range(1000):
        x = random_nfa(rng)
        assert lang(red_language(x), 8) == set(reduced_witness_lengths(x, 8))


def test_red_language_is_sound_against_bounded_reduction():
    rng = random.Random(10)
    for _ in range(200):
        x = random_nfa(rng)
        red = lang(red_language(x), 6)
        assert {reduce(w) for w in lang(x, 8) if len(reduce(w)) <= 6} <= red


def test_saturation_needs_long_witnesses_sometimes():
    # a1 is only produced as a2 a2^-1 a1, so a1^8 needs 26 input letters
    x = Nfa(2, 6, frozenset({(4, 0, 4), (0, 0, 3), (3, 2, 1), (5, 0, 4), (3, 2, 4), (5, -2, 1),
                              (5, 1, 3), (1, 0, 5)}), frozenset({0}), frozenset({4}))
    assert accepts(red_language(x), (1,) * 8)
    assert reduced_witness_lengths(x, 8)[(1,) * 8] == 26
    assert (1,) * 8 not in nfa_reduced_images(x, 24, 8)


def test_text_roundtrip():
    x = red_language(concat(literal([1, -1], 2), star(letters([2, -1], 2))))
    text = to_text(x)
    assert text.splitlines()[0].startswith("states ")
    y = from_text(text, 2)
    assert y == x
    assert "eps" in to_text(benois_saturate(literal([1, -1], 2)))


def test_everything_accepts_all():
    assert lang(everything(2), 3) == set(all_words(2, 3))
    assert EPS == 0
