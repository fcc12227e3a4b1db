import pytest

from grouplang.grammars import enumerate_words, example_3_12_grammar
from grouplang.semilinear import is_power_of_two
from grouplang.transfer.experiments import (
    example_3_12_experiment,
    example_3_12_exponents,
    pumping_refute,
    triple_block_member,
    triple_block_witness,
    two_counter_member,
    two_counter_witness,
)
from grouplang.words import reduce


def witness_length(d):
    # S wraps d a1-pairs around a full T-tree of depth d: 3 * 2^d - 2 letters inside
    return 3 * 2 ** d - 2 + 2 * d


@pytest.mark.parametrize("p", range(1, 7))
def test_pumping_witnesses_pass(p):
    z = two_counter_witness(p)
    assert z == (1,) * p + (2,) * p + (-1,) * p + (-2,) * p
    assert pumping_refute(two_counter_member, z, p).status == "PASS"
    assert pumping_refute(triple_block_member, triple_block_witness(p), p).status == "PASS"


def test_pumping_survivor_for_regular_language():
    rep = pumping_refute(lambda w: all(x == 1 for x in w), (1,) * 4, 4)
    assert rep.status == "FAIL" and rep.survivor is not None
    u, v, w, x, y = rep.survivor
    assert u + v + w + x + y == (1,) * 4 and v + x
    with pytest.raises(ValueError):
        pumping_refute(two_counter_member, (1,), 1)
    with pytest.raises(ValueError):
        pumping_refute(two_counter_member, (), 2)


def test_pumping_counts_every_factorization():
    # |z| = n, windows of width <= p: count (s, i, j, e) with v or x nonempty
    n, p = 8, 2
    rep = pumping_refute(two_counter_member, two_counter_witness(2), p)
    want = 0
    for s in range(n):
        for e in range(s, min(n, s + p) + 1):
            for i in range(s, e + 1):
                for j in range(i, e + 1):
                    want += (i > s) or (e > j)
    assert rep.checked == want


def test_example_exponents_small_bound():
    assert sorted(example_3_12_exponents(6)) == [1, 2]
    assert sorted(example_3_12_exponents(16)) == [1, 2, 4]


def test_example_exponents_follow_witness_lengths():
    found = example_3_12_exponents(34)
    assert {k: len(w) for k, w in found.items()} == {2 ** d: witness_length(d) for d in range(4)}
    for w in found.values():
        assert w in set(enumerate_words(example_3_12_grammar(), len(w)))
    for bound in range(1, 35):
        want = {2 ** d for d in range(6) if witness_length(d) <= bound}
        assert {k for k, w in found.items() if len(w) <= bound} == want


def test_example_exponents_at_bound_30():
    found = example_3_12_exponents(30)
    assert sorted(found) == [1, 2, 4, 8]
    assert reduce(found[8]) == (2,) * 8 and len(found[8]) == 28


def test_example_experiment_report():
    rep = example_3_12_experiment(30)
    assert rep.status == "PASS" and rep.powers_only
    assert all(is_power_of_two(k) for k in rep.exponents)
    assert rep.candidates and all(c.verified for c in rep.candidates)
    labels = [c.label for c in rep.candidates]
    assert "observed exponents" in labels
    kinds = {c.label: c.certificate.kind for c in rep.candidates}
    assert kinds["observed exponents"] == "FINITE"
