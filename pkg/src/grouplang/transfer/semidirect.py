"""``Z^m ⋊ Z``: normal forms ``t^a g``, orbits of the automorphism, and the
Fibonacci orbit that is not rational.

Vectors are rows and ``Q`` acts on the right, so the orbit of ``(1, 0)`` is
the sequence of first rows of ``Q^k``.  All arithmetic is on Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..grammars import Cfg

Matrix = tuple[tuple[int, ...], ...]


def det(Q: Sequence[Sequence[int]]) -> int:
    """Determinant by cofactor expansion (matrices here are tiny)."""
    n = len(Q)
    if n == 1:
        return Q[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in (tuple(r) for r in Q[1:])]
        total += (-1) ** j * Q[0][j] * det(minor)
    return total


def identity(m: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def mat_mul(A, B) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in A)


def vec_mat(v: Sequence[int], A) -> tuple[int, ...]:
    return tuple(sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0])))


def unimodular_inverse(Q) -> Matrix:
    """Inverse of an integer matrix with determinant ±1 (adjugate / det)."""
    n = len(Q)
    d = det(Q)
    if abs(d) != 1:
        raise ValueError("matrix is not invertible over the integers")
    if n == 1:
        return ((d,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(map(tuple, Q)) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(x * d for x in row) for row in adj)


def mat_pow(Q, k: int) -> Matrix:
    base = tuple(map(tuple, Q)) if k >= 0 else unimodular_inverse(Q)
    k = abs(k)
    out = identity(len(base))
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


@dataclass(frozen=True)
class SemidirectElement:
    """Normal form ``t^t_exponent · vector``."""

    t_exponent: int
    vector: tuple[int, ...]

    def __str__(self):
        return f"t^{self.t_exponent} ({', '.join(map(str, self.vector))})"


def semidirect_multiply(ctx, x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    """``(a, u)(b, v) = (a + b, u Q^b + v)``."""
    moved = vec_mat(x.vector, mat_pow(ctx.Q, y.t_exponent))
    return SemidirectElement(x.t_exponent + y.t_exponent, tuple(p + q for p, q in zip(moved, y.vector)))


def semidirect_eval(ctx, w: Sequence[int]) -> SemidirectElement:
    """Left-to-right scan: ``e_i`` adds a unit vector, ``t^±1`` applies ``Q^±1``."""
    Qinv = unimodular_inverse(ctx.Q)
    a, v = 0, [0] * ctx.m
    for x in w:
        if abs(x) == ctx.stable:
            v = list(vec_mat(v, ctx.Q if x > 0 else Qinv))
            a += 1 if x > 0 else -1
        elif 1 <= abs(x) <= ctx.m:
            v[abs(x) - 1] += 1 if x > 0 else -1
        else:
            raise ValueError(f"letter {x} outside the semidirect alphabet")
    return SemidirectElement(a, tuple(v))


def orbit_grammar(ctx, w: Sequence[int]) -> Cfg:
    """``S -> t^-1 S t | w``: the words ``t^-n w t^n``."""
    t = ctx.stable
    if any(abs(x) == t for x in w):
        raise ValueError("orbit word must not contain the stable letter")
    return Cfg(ctx.rank, "S", [("S", (-t, "S", t)), ("S", tuple(w))])


def orbit_enumerate(Q, v: Sequence[int], kmax: int) -> list[tuple[int, ...]]:
    """``v, vQ, ..., vQ^kmax``."""
    out = [tuple(v)]
    for _ in range(kmax):
        out.append(vec_mat(out[-1], Q))
    return out


FIBONACCI_Q: Matrix = ((2, 1), (1, 1))


def fibonacci_check(kmax: int) -> bool:
    """``Q^k == [[f(2k+1), f(2k)], [f(2k), f(2k-1)]]`` for ``1 <= k <= kmax``."""
    f = [0, 1]
    while len(f) < 2 * kmax + 2:
        f.append(f[-1] + f[-2])
    P = identity(2)
    for k in range(1, kmax + 1):
        P = mat_mul(P, FIBONACCI_Q)
        if P != ((f[2 * k + 1], f[2 * k]), (f[2 * k], f[2 * k - 1])):
            return False
    return True


@dataclass(frozen=True)
class OrbitProbe:
    """Outcome of the eventual-periodicity probe on one projected coordinate.

    ``NOT_EVENTUALLY_PERIODIC_UP_TO_BOUND`` means the projected values end in
    a strictly increasing run whose gaps strictly increase, with the last gap
    larger than any gap value that repeats: an eventually periodic set
    matching these values would need a period of at least ``min_period``,
    and the growth shows no fixed period survives further terms.
    """

    status: str
    values: tuple
    gaps: tuple
    min_period: int
    detail: str

    def __str__(self):
        return f"{self.status}: {self.detail}"


def orbit_rationality_probe(Q, v: Sequence[int], bound: int, coordinate: int = 0, min_run: int = 3) -> OrbitProbe:
    values = tuple(x[coordinate] for x in orbit_enumerate(Q, v, bound))
    if len(set(values)) < len(values):
        return OrbitProbe(
            "INCONCLUSIVE", values, (), 0,
            f"projection repeats ({len(set(values))} distinct values): finite orbit, periodic",
        )
    seq = values if values[-1] >= values[0] else tuple(-x for x in values)
    gaps = tuple(b - a for a, b in zip(seq, seq[1:]))
    run = 0
    for i in range(len(gaps) - 1, -1, -1):
        if gaps[i] <= 0 or (i < len(gaps) - 1 and gaps[i] >= gaps[i + 1]):
            break
        run += 1
    repeated = [g for g in set(gaps) if gaps.count(g) > 1]
    ceiling = max(repeated, default=0)
    if run >= min_run and gaps[-1] > ceiling:
        return OrbitProbe(
            "NOT_EVENTUALLY_PERIODIC_UP_TO_BOUND", values, gaps, gaps[-1],
            f"last {run} gaps strictly increase up to {gaps[-1]} (largest repeated gap {ceiling})",
        )
    return OrbitProbe("INCONCLUSIVE", values, gaps, 0, "no sustained gap growth within the bound")
