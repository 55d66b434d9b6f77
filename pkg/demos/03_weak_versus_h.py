"""
Bounded complexes: weak exactness is weaker than h-exactness
============================================================

In a bounded variant (complexes living in degrees ``[0, p]``) truncation
replaces the plain cone, and homology can no longer see everything that homotopy
sees. Over the integers the complex ``Z -2-> Z -1-> Z/2`` on ``[0, 2]`` has zero
homology yet no contraction, so the sequence ``0 -> A -> 0`` is weakly exact
without being h-exact.
"""

from hexact import (POSITIVE, ChainComplex, Homotopy, PresentedModule, ZZ, classify_exactness,
                    counit_sigma_omega, homology, interval, is_contractible, weak_tests, zero_map)
from hexact.exactness import HDiffSequence

A = ChainComplex(ZZ, {2: PresentedModule.free(ZZ, 1), 1: PresentedModule.free(ZZ, 1),
                      0: PresentedModule.from_invariants(ZZ, 0, [2])},
                 {2: [[2]], 1: [[1]]})
print(A)
print("homology:", [homology(A, n).describe() for n in A.support])
print("contraction:", is_contractible(A))

# %%
# A contraction would need s_0: Z/2 -> Z with d_1 s_0 = 1, but Z/2 has no nonzero map to Z.
O = ChainComplex.empty(ZZ)
s = HDiffSequence(zero_map(O, A), zero_map(A, O), Homotopy(zero_map(O, O), zero_map(O, O)))
for p in (2, 3):
    flags = classify_exactness(s, interval(p)).flags
    print(f"interval [0, {p}]: weak={flags['weak']}  h={flags['h']}")

# %%
# In the positive variant Omega discards degree 0, so Sigma Omega A -> A is a weak
# equivalence exactly when H_0(A) vanishes.
for B in (ChainComplex.free(ZZ, {1: 1, 0: 1}, {1: [[1]]}), ChainComplex.free(ZZ, {1: 1, 0: 1}, {1: [[5]]})):
    eps = counit_sigma_omega(B)
    print(f"H_0 = {homology(B, 0).describe():>4}:  counit weak equivalence = "
          f"{weak_tests(eps, POSITIVE).is_weak_equivalence}")
