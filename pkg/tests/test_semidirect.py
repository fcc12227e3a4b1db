import random

import pytest

from grouplang.grammars import enumerate_words
from grouplang.transfer.contexts import SemidirectZmZ
from grouplang.transfer.semidirect import (
    FIBONACCI_Q,
    SemidirectElement,
    det,
    fibonacci_check,
    mat_pow,
    orbit_enumerate,
    orbit_grammar,
    orbit_rationality_probe,
    semidirect_eval,
    semidirect_multiply,
    unimodular_inverse,
)
from grouplang.words import invert
from oracles import fib, random_word, semidirect_two_pass

CTX = SemidirectZmZ(2, FIBONACCI_Q)


def elem(pair):
    return SemidirectElement(*pair)


def test_context_validation():
    assert CTX.rank == 3 and CTX.stable == 3
    with pytest.raises(ValueError):
        SemidirectZmZ(2, [[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        SemidirectZmZ(2, [[1, 0]])


def test_eval_examples():
    assert semidirect_eval(CTX, []) == SemidirectElement(0, (0, 0))
    assert semidirect_eval(CTX, [-3, 1, 3]) == SemidirectElement(0, (2, 1))
    assert semidirect_eval(CTX, [3]) == SemidirectElement(1, (0, 0))
    with pytest.raises(ValueError):
        semidirect_eval(CTX, [4])


def test_eval_matches_two_pass_oracle():
    rng = random.Random(0)
    for _ in range(2000):
        w = random_word(rng, 3, 20)
        assert semidirect_eval(CTX, w) == elem(semidirect_two_pass(FIBONACCI_Q, 2, w))


def test_eval_is_a_homomorphism():
    rng = random.Random(1)
    swap = SemidirectZmZ(2, [[0, 1], [1, 0]])
    for _ in range(10_000):
        u, v = random_word(rng, 3, 12), random_word(rng, 3, 12)
        for ctx in (CTX, swap):
            whole = semidirect_eval(ctx, u + v)
            assert whole == semidirect_multiply(ctx, semidirect_eval(ctx, u), semidirect_eval(ctx, v))
        assert semidirect_eval(CTX, u + invert(u)) == SemidirectElement(0, (0, 0))


def test_matrix_helpers():
    assert det(FIBONACCI_Q) == 1
    inv = unimodular_inverse(FIBONACCI_Q)
    assert inv == ((1, -1), (-1, 2))
    assert mat_pow(FIBONACCI_Q, -3) == mat_pow(inv, 3)
    assert mat_pow(FIBONACCI_Q, 0) == ((1, 0), (0, 1))
    assert unimodular_inverse([[-1]]) == ((-1,),)
    with pytest.raises(ValueError):
        unimodular_inverse([[2, 0], [0, 1]])


def test_orbit_enumerate_and_fibonacci():
    orbit = orbit_enumerate(FIBONACCI_Q, (1, 0), 60)
    assert orbit[1] == (2, 1) and orbit[2] == (5, 3)
    # first rows of Q^k are (f(2k+1), f(2k)); entries pass 2^64 before k = 60
    assert all(v == (fib(2 * k + 1), fib(2 * k)) for k, v in enumerate(orbit))
    assert orbit[60][0] > 2 ** 64
    assert fibonacci_check(30) and fibonacci_check(60)


def test_orbit_grammar():
    w = (1, -2)
    g = orbit_grammar(CTX, w)
    words = enumerate_words(g, len(w) + 4)
    assert set(words) == {w, (-3,) + w + (3,), (-3, -3) + w + (3, 3)}
    for u in enumerate_words(g, 24):
        n = u.count(3)
        e = semidirect_eval(CTX, u)
        want = semidirect_two_pass(FIBONACCI_Q, 2, w)[1]
        for _ in range(n):
            want = (2 * want[0] + want[1], want[0] + want[1])
        assert e == SemidirectElement(0, want)
    with pytest.raises(ValueError):
        orbit_grammar(CTX, [3])


def test_orbit_probe():
    p = orbit_rationality_probe(FIBONACCI_Q, (1, 0), 20)
    assert p.status == "NOT_EVENTUALLY_PERIODIC_UP_TO_BOUND"
    assert p.gaps == tuple(fib(2 * k + 3) - fib(2 * k + 1) for k in range(20))
    assert all(a < b for a, b in zip(p.gaps, p.gaps[1:]))
    assert orbit_rationality_probe(((1, 0), (0, 1)), (1, 0), 20).status == "INCONCLUSIVE"
    assert orbit_rationality_probe(((0, 1), (1, 0)), (1, 0), 20).status == "INCONCLUSIVE"
    # a unipotent matrix gives an arithmetic progression: periodic, no certificate
    assert orbit_rationality_probe(((1, 0), (1, 1)), (0, 1), 20).status == "INCONCLUSIVE"
