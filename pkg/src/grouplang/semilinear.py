"""Semilinear subsets of Z^k.

A linear set is ``u + N v_1 + ... + N v_m``; a semilinear set is a finite
union of them.  Vectors are tuples of Python ints, so entries never overflow.

Besides membership, union and affine images this module provides the
semiring operations (Minkowski sum, Kleene star) used to compute Parikh
images, a one-dimensional eventually-periodic normal form, and a refutation
procedure showing that no one-dimensional semilinear set equals the powers
of two.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class UnboundedSearch(ValueError):
    """Raised when membership has no sound finite search bound."""


def _vec(v) -> Vector:
    return tuple(int(x) for x in v)


def _add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _scale(k, v) -> Vector:
    return tuple(k * a for a in v)


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass(frozen=True)
class LinearSet:
    base: Vector
    periods: tuple[Vector, ...]

    def __init__(self, base: Iterable[int], periods: Iterable[Iterable[int]] = ()):
        base = _vec(base)
        ps = {_vec(p) for p in periods}
        for p in ps:
            if len(p) != len(base):
                raise DimensionMismatch(f"period {p} does not match base dimension {len(base)}")
        ps.discard((0,) * len(base))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(sorted(ps)))

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def is_finite(self) -> bool:
        return not self.periods

    @property
    def nonnegative(self) -> bool:
        return all(x >= 0 for x in self.base) and all(x >= 0 for p in self.periods for x in p)

    def __contains__(self, x) -> bool:
        return _linear_member(self.base, self.periods, _vec(x))

    def points(self, max_sum: int) -> set[Vector]:
        """Members with coordinate sum <= ``max_sum`` (nonnegative sets only)."""
        if not self.nonnegative:
            raise UnboundedSearch("points() needs nonnegative base and periods")
        if sum(self.base) > max_sum:
            return set()
        seen = {self.base}
        todo = [self.base]
        while todo:
            v = todo.pop()
            for p in self.periods:
                w = _add(v, p)
                if sum(w) <= max_sum and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def __str__(self):
        def fmt(v):
            return "(" + ",".join(map(str, v)) + ")"

        return f"base {fmt(self.base)} periods " + " ".join(fmt(p) for p in self.periods)


def _positive_functional(periods: Sequence[Vector]) -> Vector | None:
    """A weight ``c`` with ``c . v > 0`` for every period, tried from a short candidate list."""
    if not periods:
        return None
    k = len(periods[0])
    candidates = []
    for j in range(k):
        e = [0] * k
        e[j] = 1
        candidates += [tuple(e), tuple(-x for x in e)]
    candidates += [(1,) * k, (-1,) * k]
    for c in candidates:
        if all(_dot(c, p) > 0 for p in periods):
            return c
    return None


def _linear_member(base: Vector, periods: tuple[Vector, ...], x: Vector) -> bool:
    if len(x) != len(base):
        raise DimensionMismatch(f"vector of dimension {len(x)} vs set of dimension {len(base)}")
    d = _sub(x, base)
    if not periods:
        return not any(d)
    if len(d) == 1 and any(p[0] > 0 for p in periods) and any(p[0] < 0 for p in periods):
        # a submonoid of Z with elements of both signs is the subgroup gcd * Z
        g = math.gcd(*(p[0] for p in periods))
        return d[0] % g == 0
    if all(x >= 0 for p in periods for x in p):
        return _box_member(tuple(periods), d)
    c = _positive_functional(periods)
    if c is None:
        raise UnboundedSearch(f"no positive functional found for periods {periods}")
    weights = [_dot(c, p) for p in periods]
    return _monoid_solve(periods, tuple(weights), d, _dot(c, d))


@lru_cache(maxsize=1 << 16)
def _box_member(periods: tuple, d: Vector) -> bool:
    """``d in N·periods`` for nonnegative periods: reachability inside the box ``0 <= x <= d``."""
    if any(x < 0 for x in d):
        return False
    usable = [p for p in periods if all(a <= b for a, b in zip(p, d))]
    seen = {d}
    todo = [d]
    while todo:
        r = todo.pop()
        if not any(r):
            return True
        for p in usable:
            s = _sub(r, p)
            if s not in seen and all(x >= 0 for x in s):
                seen.add(s)
                todo.append(s)
    return False


def _monoid_solve(periods, weights, d, budget) -> bool:
    # sum n_i * weights[i] == budget bounds every n_i
    @lru_cache(maxsize=None)
    def go(i, rest, left):
        if i == len(periods):
            return not any(rest)
        p, w = periods[i], weights[i]
        if i == len(periods) - 1:
            j = next(k for k, x in enumerate(p) if x)
            n, r = divmod(rest[j], p[j])
            return r == 0 and n >= 0 and _scale(n, p) == rest
        n = 0
        while n * w <= left:
            if go(i + 1, _sub(rest, _scale(n, p)), left - n * w):
                return True
            n += 1
        return False

    if budget < 0:
        return False
    return go(0, d, budget)


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...] = ()

    def __init__(self, dim: int, components: Iterable[LinearSet] = ()):
        comps = tuple(dict.fromkeys(components))
        for c in comps:
            if c.dim != dim:
                raise DimensionMismatch(f"component of dimension {c.dim} in a set of dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "components", comps)

    @classmethod
    def empty(cls, dim: int) -> "SemilinearSet":
        return cls(dim)

    @classmethod
    def point(cls, v: Iterable[int]) -> "SemilinearSet":
        v = _vec(v)
        return cls(len(v), [LinearSet(v)])

    @classmethod
    def linear(cls, base, periods=()) -> "SemilinearSet":
        ls = LinearSet(base, periods)
        return cls(ls.dim, [ls])

    def __contains__(self, x) -> bool:
        return member(self, x)

    def __or__(self, other):
        return union(self, other)

    def __add__(self, other):
        return minkowski_sum(self, other)

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def nonnegative(self) -> bool:
        return all(c.nonnegative for c in self.components)

    def points(self, max_sum: int) -> set[Vector]:
        out: set[Vector] = set()
        for c in self.components:
            out |= c.points(max_sum)
        return out

    def __str__(self):
        return to_text(self)


def _check_dims(*sets: SemilinearSet):
    dims = {s.dim for s in sets}
    if len(dims) > 1:
        raise DimensionMismatch(f"dimensions differ: {sorted(dims)}")


def member(s: SemilinearSet, x) -> bool:
    """Decide ``x in s`` by bounded search over period multiplicities.

    The bound comes from a weight vector ``c`` with ``c . v > 0`` for every
    period ``v``: then ``sum n_i (c . v_i) = c . (x - u)`` caps each ``n_i``.
    In dimension one, periods of both signs generate ``gcd * Z`` exactly.
    Anything else raises ``UnboundedSearch`` instead of looping.
    """
    x = _vec(x)
    if len(x) != s.dim:
        raise DimensionMismatch(f"vector of dimension {len(x)} vs set of dimension {s.dim}")
    return any(x in c for c in s.components)


def union(*sets: SemilinearSet) -> SemilinearSet:
    _check_dims(*sets)
    return SemilinearSet(sets[0].dim, [c for s in sets for c in s.components])


def affine_image(s: SemilinearSet, matrix: Sequence[Sequence[int]], shift: Sequence[int] | None = None) -> SemilinearSet:
    """Image under ``x -> M x + c``; zero period images are dropped."""
    rows = [_vec(r) for r in matrix]
    if any(len(r) != s.dim for r in rows):
        raise DimensionMismatch(f"matrix columns do not match dimension {s.dim}")
    shift = _vec(shift) if shift is not None else (0,) * len(rows)
    if len(shift) != len(rows):
        raise DimensionMismatch("shift does not match matrix rows")

    def apply(v):
        return tuple(_dot(r, v) for r in rows)

    comps = [LinearSet(_add(apply(c.base), shift), [apply(p) for p in c.periods]) for c in s.components]
    return SemilinearSet(len(rows), comps)


def minkowski_sum(s: SemilinearSet, t: SemilinearSet) -> SemilinearSet:
    _check_dims(s, t)
    comps = [
        LinearSet(_add(a.base, b.base), a.periods + b.periods)
        for a in s.components
        for b in t.components
    ]
    return simplify(SemilinearSet(s.dim, comps))


def star(s: SemilinearSet) -> SemilinearSet:
    """Submonoid generated by ``s``: the sum of the stars of its components."""
    out = SemilinearSet.point((0,) * s.dim)
    for c in s.components:
        if not any(c.base):
            cs = SemilinearSet(s.dim, [c])
        else:
            cs = SemilinearSet(
                s.dim,
                [LinearSet((0,) * s.dim), LinearSet(c.base, c.periods + (c.base,))],
            )
        out = minkowski_sum(out, cs)
    return out


@lru_cache(maxsize=1 << 16)
def _in_monoid(periods: tuple, base: Vector, x: Vector) -> bool:
    try:
        return _linear_member(base, periods, x)
    except UnboundedSearch:
        return False


def _included(a: LinearSet, b: LinearSet) -> bool:
    """Sufficient test for ``a ⊆ b``: base and every period of ``a`` lie in ``b``'s monoid."""
    if b.nonnegative:
        # b - b.base is a nonnegative cone: cheap sign rejections first
        if any(x < y for x, y in zip(a.base, b.base)) or any(x < 0 for p in a.periods for x in p):
            return False
    if not _in_monoid(b.periods, b.base, a.base):
        return False
    zero = (0,) * a.dim
    return all(_in_monoid(b.periods, zero, p) for p in a.periods)


def _drop_redundant_periods(c: LinearSet) -> LinearSet:
    """Remove periods that are N-combinations of the remaining ones."""
    periods = list(c.periods)
    zero = (0,) * c.dim
    for p in sorted(c.periods, key=lambda v: (-sum(map(abs, v)), v)):
        rest = tuple(q for q in periods if q != p)
        if rest and _in_monoid(rest, zero, p):
            periods = list(rest)
    return c if len(periods) == len(c.periods) else LinearSet(c.base, periods)


def _absorb_point(b: Vector, c: LinearSet) -> bool:
    """``{b} ∪ c == b + N·P`` for ``c = u + N·P``.

    Holds when ``b + p == u`` for some period ``p`` and ``b + q`` lies in
    ``c`` for every other period ``q``: then any ``b + Σ n_i p_i`` with some
    ``n_i > 0`` is already in ``c``.
    """
    if not any(_add(b, p) == c.base for p in c.periods):
        return False
    try:
        return all(_add(b, q) in c for q in c.periods)
    except UnboundedSearch:
        return False


def simplify(s: SemilinearSet) -> SemilinearSet:
    """Drop components contained in another and fold points into neighbouring bases.

    Sound (the set never changes) but not a canonical form.
    """
    comps = {_drop_redundant_periods(c) for c in s.components}
    while True:
        ordered = sorted(comps, key=lambda c: (-len(c.periods), c.base, c.periods))
        kept: list[LinearSet] = []
        for c in ordered:
            if any(_included(c, k) for k in kept):
                continue
            kept = [k for k in kept if not _included(k, c)]
            kept.append(c)
        comps = set(kept)
        merged = False
        for pt in sorted((c for c in kept if not c.periods), key=lambda c: c.base):
            host = next((c for c in sorted(comps, key=lambda c: (c.base, c.periods))
                         if c.periods and _absorb_point(pt.base, c)), None)
            if host is not None and pt in comps:
                comps -= {pt, host}
                comps.add(LinearSet(pt.base, host.periods))
                merged = True
        if not merged:
            break
    kept = sorted(comps, key=lambda c: (sum(c.base), c.base, c.periods))
    return SemilinearSet(s.dim, kept)


def _covers(periods: tuple, base: Vector, x: Vector) -> bool:
    # nonnegative periods can only reach points that dominate the base
    if all(v >= 0 for p in periods for v in p) and any(a < b for a, b in zip(x, base)):
        return False
    return _in_monoid(periods, base, x)


class HybridSet:
    """Finite union of ``B + N·P`` groups (finite base set ``B`` per period set ``P``).

    Working form for fixpoint computations: grouping bases by period set
    keeps sums and stars small, since ``(B + N·P)* = {0} ∪ (B + N·(P ∪ B))``
    is one group instead of ``2^|B|`` linear sets.
    """

    def __init__(self, dim: int, groups=None):
        self.dim = dim
        self.groups: dict[tuple, frozenset] = {}
        for periods, bases in (groups or {}).items():
            self._add_group(periods, bases)
        self._prune()

    @classmethod
    def point(cls, v) -> "HybridSet":
        v = _vec(v)
        return cls(len(v), {(): frozenset([v])})

    @classmethod
    def from_semilinear(cls, s: SemilinearSet) -> "HybridSet":
        h = cls(s.dim)
        for c in s.components:
            h._add_group(c.periods, [c.base])
        h._prune()
        return h

    @property
    def is_empty(self) -> bool:
        return not self.groups

    def _add_group(self, periods, bases):
        if not bases:
            return
        key = _drop_redundant_periods(LinearSet((0,) * self.dim, periods)).periods
        self.groups[key] = self.groups.get(key, frozenset()) | frozenset(bases)

    def _prune(self):
        """Drop each base already covered by another group whose monoid contains this group's periods."""
        zero = (0,) * self.dim
        keys = sorted(self.groups, key=lambda k: (-len(k), k))
        kept: dict[tuple, list] = {}
        for key in keys:
            covers = [(k, bs) for k, bs in kept.items() if all(_in_monoid(k, zero, p) for p in key)]
            out: list = []
            for b in sorted(self.groups[key], key=lambda v: (sum(map(abs, v)), v)):
                if any(_covers(key, b2, b) for b2 in out):
                    continue
                if any(_covers(k, b2, b) for k, bs in covers for b2 in bs):
                    continue
                out.append(b)
            if out:
                kept[key] = out
        self.groups = {k: frozenset(v) for k, v in kept.items()}

    def union(self, other: "HybridSet") -> "HybridSet":
        h = HybridSet(self.dim, self.groups)
        for k, bs in other.groups.items():
            h._add_group(k, bs)
        h._prune()
        return h

    def plus(self, other: "HybridSet") -> "HybridSet":
        h = HybridSet(self.dim)
        for k1, b1 in self.groups.items():
            for k2, b2 in other.groups.items():
                h._add_group(k1 + k2, {_add(u, v) for u in b1 for v in b2})
        h._prune()
        return h

    def star(self) -> "HybridSet":
        out = HybridSet.point((0,) * self.dim)
        for k, bs in self.groups.items():
            part = HybridSet.point((0,) * self.dim)
            part._add_group(k + tuple(bs), bs)
            part._prune()
            out = out.plus(part)
        return out

    def to_semilinear(self) -> SemilinearSet:
        comps = [LinearSet(b, k) for k, bs in self.groups.items() for b in bs]
        return simplify(SemilinearSet(self.dim, comps))


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """``sporadic ∪ {x >= threshold : x mod period in residues}``; period 0 means finite."""

    threshold: int
    period: int
    sporadic: frozenset
    residues: frozenset

    def __post_init__(self):
        if self.period == 0 and self.residues:
            raise ValueError("a finite normal form has no residues")

    def __contains__(self, x: int) -> bool:
        if x < self.threshold:
            return x in self.sporadic
        return self.period > 0 and x % self.period in self.residues

    @property
    def is_finite(self) -> bool:
        return self.period == 0 or not self.residues


def one_dim_normal_form(s: SemilinearSet) -> EventuallyPeriodicSet:
    """Eventually periodic normal form of a semilinear subset of N.

    The period is the lcm of all nonzero periods.  Per component
    ``u + N{v_i}`` with ``g = gcd(v_i)``, Schur's bound on the Frobenius
    number puts every ``u + g*k`` with ``k >= (a_min-1)(a_max-1)`` inside,
    where ``a = v/g``; the threshold is the largest such cut.
    """
    if s.dim != 1:
        raise DimensionMismatch("normal form needs dimension 1")
    thresholds = [0]
    periods = []
    for c in s.components:
        u = c.base[0]
        vs = [p[0] for p in c.periods]
        if u < 0 or any(v < 0 for v in vs):
            raise ValueError(f"component {c} has members below zero")
        if not vs:
            thresholds.append(u + 1)
            continue
        g = math.gcd(*vs)
        lo, hi = min(vs) // g, max(vs) // g
        thresholds.append(u + g * (lo - 1) * (hi - 1))
        periods.extend(vs)
    d = math.lcm(*periods) if periods else 0
    t = max(thresholds)
    sporadic = frozenset(x for x in range(t) if member(s, (x,)))
    residues = frozenset(r for r in range(d) if member(s, (t + (r - t) % d,))) if d else frozenset()
    return EventuallyPeriodicSet(t, d, sporadic, residues)


@dataclass(frozen=True)
class PowersOfTwoCertificate:
    """Evidence that a 1-D semilinear set differs from ``{2^n : n >= 0}``.

    ``kind`` is ``"WITNESS"``: a component ``u + N v`` whose members
    ``u, u+v, u+2v`` cannot all be powers of two; ``value`` is one that is
    not.  Or ``"FINITE"``: every component has no periods, so the set is
    finite while the powers of two are not.
    """

    kind: str
    component: int | None = None
    triple: tuple = ()
    value: int | None = None
    finite_members: frozenset = frozenset()

    def verify(self, s: SemilinearSet) -> bool:
        if self.kind == "WITNESS":
            c = s.components[self.component]
            v = c.periods[0][0]
            u = c.base[0]
            return (
                self.triple == (u, u + v, u + 2 * v)
                and self.value in self.triple
                and member(s, (self.value,))
                and not is_power_of_two(self.value)
            )
        if self.kind == "FINITE":
            return all(c.is_finite for c in s.components) and self.finite_members == frozenset(
                c.base[0] for c in s.components
            )
        return False

    def __str__(self):
        if self.kind == "WITNESS":
            return (
                f"WITNESS component {self.component}: members {self.triple}, "
                f"{self.value} is not a power of two"
            )
        return f"FINITE: members {sorted(self.finite_members)}; the powers of two are infinite"


def powers_of_two_conflict(s: SemilinearSet) -> PowersOfTwoCertificate:
    """Refute ``s == {2^n : n in N}`` for any 1-D semilinear ``s``.

    If ``u = 2^a`` and ``u + v = 2^b`` then ``u + 2v = 2^a (2^(b+1-a) - 1)``,
    a power of two only when ``a == b``, i.e. ``v == 0``.  So any component
    with a nonzero period contains a non-power of two among
    ``u, u+v, u+2v``.  Without periods the set is finite.
    """
    if s.dim != 1:
        raise DimensionMismatch("powers-of-two refutation needs dimension 1")
    for i, c in enumerate(s.components):
        if c.periods:
            u, v = c.base[0], c.periods[0][0]
            triple = (u, u + v, u + 2 * v)
            bad = next(x for x in triple if not is_power_of_two(x))
            return PowersOfTwoCertificate("WITNESS", i, triple, bad)
    return PowersOfTwoCertificate(
        "FINITE", finite_members=frozenset(c.base[0] for c in s.components)
    )


_VEC = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)")


def parse_vector(text: str) -> Vector:
    m = _VEC.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad vector {text!r}")
    return tuple(int(x) for x in m.group(1).split(","))


def to_text(s: SemilinearSet) -> str:
    """One component per line after a ``dim k`` header."""
    return "\n".join([f"dim {s.dim}"] + [str(c) for c in s.components]) + "\n"


def from_text(text: str) -> SemilinearSet:
    dim = None
    comps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim"):
            dim = int(line.split()[1])
            continue
        m = re.fullmatch(r"base\s*(\([^)]*\))\s*periods\s*(.*)", line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'base (..) periods (..) ...'")
        base = parse_vector(m.group(1))
        periods = [parse_vector(p) for p in re.findall(r"\([^)]*\)", m.group(2))]
        comps.append(LinearSet(base, periods))
    if dim is None:
        if not comps:
            raise ValueError("empty semilinear text needs a 'dim k' header")
        dim = comps[0].dim
    return SemilinearSet(dim, comps)
