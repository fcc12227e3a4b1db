"""The orbit of a1 under Q = [[2, 1], [1, 1]] in Z^2 x| Z.

Conjugating a1 by t^n gives the vector (1, 0) Q^n, whose entries are odd and
even indexed Fibonacci numbers.  The words t^-n a1 t^n form a context-free
(even linear) language, yet the first coordinates of the orbit grow
geometrically, so their set is not eventually periodic and the orbit is not
a rational subset of Z^2.  The script checks the matrix identity with exact
integers, evaluates the orbit grammar and runs the periodicity probe.

Run: python demos/fibonacci_orbit.py [bound]
"""

import sys

from grouplang.grammars import enumerate_words
from grouplang.transfer.contexts import SemidirectZmZ
from grouplang.transfer.semidirect import (
    FIBONACCI_Q,
    fibonacci_check,
    mat_pow,
    orbit_grammar,
    orbit_rationality_probe,
    semidirect_eval,
)
from grouplang.words import format_word

bound = int(sys.argv[1]) if len(sys.argv) > 1 else 20
ctx = SemidirectZmZ(2, FIBONACCI_Q)
print(f"Q^k has Fibonacci entries for k <= 60: {fibonacci_check(60)}")
print(f"Q^60 = {mat_pow(FIBONACCI_Q, 60)}  (exact, beyond 64 bits)")

g = orbit_grammar(ctx, (1,))
print("\norbit grammar:", g.to_text(stable=ctx.stable))
for w in enumerate_words(g, 9):
    print(f"  {format_word(w, ctx.stable):<28} -> {semidirect_eval(ctx, w)}")

probe = orbit_rationality_probe(FIBONACCI_Q, (1, 0), bound)
print(f"\nfirst coordinates up to n = {bound}: {list(probe.values)}")
print(probe)
