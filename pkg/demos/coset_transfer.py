"""Moving a context-free subset between F2 and a finite-index subgroup.

H = <a1 a1, a2, a1 a2 a1-> has index 2 in F2 (even a1-exponent sum).  A
context-free subset K of F2 splits into one piece per coset of H, and each
piece becomes a context-free subset of H written in H's free basis; putting
the pieces back together recovers K.  The second half goes the other way:
a subset of the infinite-index subgroup <a1 a1> is embedded into F2 through
the Hall completion, where <a1 a1> is a free factor of a finite-index
subgroup.

Run: python demos/coset_transfer.py
"""

from grouplang.grammars import Cfg
from grouplang.stallings import fold, free_basis, hall_completion
from grouplang.transfer.contexts import FreeGroup, SubgroupOfFree
from grouplang.transfer.handles import cf_handle, red_form
from grouplang.transfer.operations import cf_embed_free_factor, compose, decompose
from grouplang.words import format_word

F2 = FreeGroup(2)
H = fold([(1, 1), (2,), (1, 2, -1)], 2)
cover = hall_completion(H)
print(f"index {cover.index}, basis {[format_word(b) for b in cover.basis]}")

# K = {a1^n a2^n}: even n lands in H, odd n in the coset a1 H
K = cf_handle(F2, red_form(Cfg(2, "S", [("S", ()), ("S", (1, "S", 2))])))
parts = decompose(K, cover)
for i, (piece, rep) in enumerate(parts):
    sample = [format_word(u) for u in piece.words(4)][:4]
    print(f"coset {i} (representative '{format_word(rep)}'): in basis letters {sample}")
back = compose(parts, F2)
print("round trip equal up to length 8:", set(back.words(8)) == set(K.words(8)))

# b1^n b1^n over H = <a1 a1>, i.e. a1^(4n) in F2
H1 = fold([(1, 1)], 2)
c1 = hall_completion(H1)
print(f"\n<a1 a1>: Hall completion index {c1.index}, bases {[[format_word(w) for w in b] for b in free_basis(c1)]}")
L = cf_handle(SubgroupOfFree(H1), red_form(Cfg(1, "S", [("S", ()), ("S", (1, "S", 1))])))
up = cf_embed_free_factor(L)
for w in [(1,) * 4, (1,) * 2, (1,) * 8, (2, 1, 1, 1, 1, -2)]:
    print(f"  {format_word(w) or 'e':<22} in embedded subset: {up.contains(w)}")
