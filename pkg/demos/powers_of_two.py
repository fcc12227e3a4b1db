"""Why the grammar S -> a1 S a1- | T, T -> a1- T T a1 | a2 has a non-semilinear shadow.

Reducing the words of this grammar and keeping only those that collapse to a
power of a2 leaves exponents 1, 2, 4, 8, ...: each T splits into two copies
that only cancel back to a2-powers when the two halves agree, so exponents
double.  If the subset were context-free in F2 its intersection with the
rational subset a2* would have a semilinear exponent set.  The script lists
the exponents with their shortest witnesses and then refutes every
semilinear candidate that the pipeline produces.

Run: python demos/powers_of_two.py [bound]
"""

import sys
import time

from grouplang.transfer.experiments import example_3_12_experiment
from grouplang.words import format_word

bound = int(sys.argv[1]) if len(sys.argv) > 1 else 30
t0 = time.perf_counter()
report = example_3_12_experiment(bound)
print(f"words of length <= {bound}, {time.perf_counter() - t0:.2f} s")
for k in report.exponents:
    w = report.witnesses[k]
    print(f"a2^{k:<3} from a word of length {len(w)}: {format_word(w)}")

# the shortest witness for a2^(2^d) has 3*2^d - 2 + 2d letters
print("\ncandidate semilinear presentations of the exponent set:")
for c in report.candidates:
    print(f"  {c.label}: {c.certificate}  verified={c.verified}")
print("\nstatus:", report.status)
