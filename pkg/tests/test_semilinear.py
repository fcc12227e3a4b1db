import itertools
import random

import pytest

from grouplang.semilinear import (
    DimensionMismatch,
    HybridSet,
    LinearSet,
    SemilinearSet,
    UnboundedSearch,
    affine_image,
    from_text,
    is_power_of_two,
    member,
    minkowski_sum,
    one_dim_normal_form,
    powers_of_two_conflict,
    simplify,
    star,
    to_text,
    union,
)


def brute_points(c: LinearSet, nmax=6):
    out = set()
    for ns in itertools.product(range(nmax + 1), repeat=len(c.periods)):
        out.add(tuple(c.base[i] + sum(n * p[i] for n, p in zip(ns, c.periods)) for i in range(c.dim)))
    return out


def random_linear(rng, dim, entries=5, negative=False):
    lo = -entries if negative else 0
    base = [rng.randint(0, entries) for _ in range(dim)]
    periods = [[rng.randint(lo, entries) for _ in range(dim)] for _ in range(rng.randint(0, 3))]
    return LinearSet(base, periods)


def test_linear_set_drops_zero_periods():
    c = LinearSet((1, 2), [(0, 0), (1, 0), (1, 0)])
    assert c.periods == ((1, 0),)
    with pytest.raises(DimensionMismatch):
        LinearSet((1, 2), [(1,)])


def test_member_examples():
    s = SemilinearSet.linear((0, 0), [(1, 1)])
    assert member(s, (3, 3)) and not member(s, (3, 2))
    c = LinearSet((2, 5, 1), [(1, 0, 2)])
    assert member(SemilinearSet(3, [c]), c.base)
    with pytest.raises(DimensionMismatch):
        member(s, (1,))


def test_member_matches_brute_force_nonnegative():
    rng = random.Random(0)
    for _ in range(300):
        dim = rng.randint(1, 4)
        c = random_linear(rng, dim)
        pts = brute_points(c)
        s = SemilinearSet(dim, [c])
        for x in pts:
            assert member(s, x)
        # inside the box 0..5 every n_i <= 5 (periods are nonzero and nonnegative),
        # so the brute-force points there are complete
        for x in itertools.product(range(6), repeat=dim):
            assert member(s, x) == (x in pts), (c, x)


def test_member_matches_brute_force_mixed_signs():
    rng = random.Random(1)
    checked = 0
    for _ in range(400):
        dim = rng.randint(1, 3)
        c = random_linear(rng, dim, negative=True)
        s = SemilinearSet(dim, [c])
        pts = brute_points(c)
        for x in list(pts)[:20]:
            try:
                assert member(s, x)
                checked += 1
            except UnboundedSearch:
                pass
    assert checked > 1000


def test_unbounded_search_is_reported():
    s = SemilinearSet.linear((0, 0), [(1, -1), (-1, 1)])
    with pytest.raises(UnboundedSearch):
        member(s, (3, 3))
    # in one dimension both signs give the subgroup gcd * Z
    t = SemilinearSet.linear((1,), [(4,), (-6,)])
    assert member(t, (3,)) and member(t, (-1,)) and not member(t, (2,))


def test_union_and_affine_image():
    a = SemilinearSet.linear((0,), [(2,)])
    b = SemilinearSet.linear((1,), [(2,)])
    nf = one_dim_normal_form(union(a, b))
    assert nf.period == 2 and nf.residues == {0, 1} and all(x in nf for x in range(40))
    s = SemilinearSet.linear((1, 2, 3), [(1, 0, 1), (0, 2, 0)])
    assert affine_image(s, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]).components == s.components
    d = affine_image(s, [(0, 0, 1)], (-1,))
    assert d.components == (LinearSet((2,), [(1,)]),)
    with pytest.raises(DimensionMismatch):
        affine_image(s, [(1, 0)])
    with pytest.raises(DimensionMismatch):
        union(a, s)


def test_affine_image_sound_and_complete():
    rng = random.Random(2)
    for _ in range(100):
        dim = rng.randint(1, 3)
        s = SemilinearSet(dim, [random_linear(rng, dim) for _ in range(2)])
        M = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(2)]
        c = [rng.randint(-3, 3) for _ in range(2)]
        img = affine_image(s, M, c)
        # periods with equal images merge, so the image side needs n_i <= 3 * 3
        reach = set().union(*(brute_points(ic, 9) for ic in img.components))
        for comp in s.components:
            for x in brute_points(comp, 3):
                y = tuple(sum(r[i] * x[i] for i in range(dim)) + ci for r, ci in zip(M, c))
                assert y in reach


def test_difference_map_on_example_words():
    # Parikh vectors of a2^(2^k) witnesses: u3 - u4 recovers the exponent
    from grouplang.transfer.experiments import example_3_12_exponents
    from grouplang.words import parikh
    for k, w in example_3_12_exponents(14).items():
        pv = parikh(w, 2)
        img = affine_image(SemilinearSet.point(pv), [(0, 0, 1, -1)])
        assert img.components[0].base == (k,)


def test_one_dim_normal_forms():
    nf = one_dim_normal_form(SemilinearSet.linear((5,), [(0,)]))
    assert nf.period == 0 and nf.is_finite and [x for x in range(30) if x in nf] == [5]
    nf = one_dim_normal_form(SemilinearSet.linear((1,), [(2,)]))
    assert nf.period == 2 and nf.residues == {1}
    s = SemilinearSet(1, [LinearSet((0,), [(3,)]), LinearSet((1,), [(3,)])])
    nf = one_dim_normal_form(s)
    assert nf.period == 3 and nf.residues == {0, 1}
    assert [x for x in range(31) if x in nf] == [x for x in range(31) if x % 3 in (0, 1)]
    with pytest.raises(ValueError):
        one_dim_normal_form(SemilinearSet.linear((0,), [(-1,)]))


def test_normal_form_agrees_with_member():
    rng = random.Random(3)
    for _ in range(200):
        s = SemilinearSet(1, [random_linear(rng, 1, entries=7) for _ in range(rng.randint(1, 3))])
        nf = one_dim_normal_form(s)
        for x in range(nf.threshold + 3 * nf.period + 1):
            assert (x in nf) == member(s, (x,)), (s, x)


def test_powers_of_two_conflict_examples():
    fin = SemilinearSet(1, [LinearSet((1,)), LinearSet((2,)), LinearSet((4,))])
    cert = powers_of_two_conflict(fin)
    assert cert.kind == "FINITE" and cert.finite_members == {1, 2, 4} and cert.verify(fin)
    s = SemilinearSet.linear((2,), [(2,)])
    cert = powers_of_two_conflict(s)
    assert cert.kind == "WITNESS" and cert.triple == (2, 4, 6) and cert.value == 6 and cert.verify(s)
    assert not cert.verify(SemilinearSet.linear((2,), [(4,)]))


def test_powers_of_two_conflict_is_total():
    rng = random.Random(4)
    for _ in range(500):
        comps = [random_linear(rng, 1, entries=9) for _ in range(rng.randint(0, 3))]
        s = SemilinearSet(1, comps)
        cert = powers_of_two_conflict(s)
        assert cert.verify(s)
        if cert.kind == "WITNESS":
            assert not is_power_of_two(cert.value)


def test_text_roundtrip():
    s = SemilinearSet(2, [LinearSet((1, 0), [(1, 1), (0, 2)]), LinearSet((0, 0))])
    text = to_text(s)
    assert text == "dim 2\nbase (1,0) periods (0,2) (1,1)\nbase (0,0) periods \n"
    assert from_text(text) == s
    assert from_text("dim 3\n") == SemilinearSet.empty(3)
    with pytest.raises(ValueError):
        from_text("base (1,2) period (1)")


def test_sum_star_and_simplify_preserve_points():
    rng = random.Random(5)
    for _ in range(60):
        dim = rng.randint(1, 3)
        s = SemilinearSet(dim, [random_linear(rng, dim, 3) for _ in range(2)])
        t = SemilinearSet(dim, [random_linear(rng, dim, 3) for _ in range(2)])
        want = {tuple(a + b for a, b in zip(u, v)) for u in s.points(10) for v in t.points(10)}
        assert minkowski_sum(s, t).points(10) == {w for w in want if sum(w) <= 10}
        assert simplify(union(s, t)).points(10) == union(s, t).points(10)
        closure = {(0,) * dim}
        frontier = set(closure)
        gens = s.points(10)
        while frontier:
            frontier = {tuple(a + b for a, b in zip(u, g)) for u in frontier for g in gens} - closure
            frontier = {w for w in frontier if sum(w) <= 10}
            closure |= frontier
        assert star(s).points(10) == closure


def test_hybrid_set_operations_match_points():
    rng = random.Random(6)
    for _ in range(60):
        dim = rng.randint(1, 3)
        s = SemilinearSet(dim, [random_linear(rng, dim, 3) for _ in range(2)])
        t = SemilinearSet(dim, [random_linear(rng, dim, 3) for _ in range(2)])
        hs, ht = HybridSet.from_semilinear(s), HybridSet.from_semilinear(t)
        assert hs.to_semilinear().points(10) == s.points(10)
        assert hs.union(ht).to_semilinear().points(10) == union(s, t).points(10)
        assert hs.plus(ht).to_semilinear().points(10) == minkowski_sum(s, t).points(10)
        assert hs.star().to_semilinear().points(10) == star(s).points(10)
    assert HybridSet(2).is_empty and HybridSet(2).to_semilinear().is_empty
