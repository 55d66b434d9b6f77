"""
Homotopy kernels, cokernels and the fibre-cofibre sequence
==========================================================

A map of chain complexes has a homotopy kernel ``Kf`` and a homotopy cokernel
``Cf`` (the mapping cone). In the unbounded setting the two are related by a
strict shift, and repeating the cone construction produces a long sequence in
which every three consecutive terms form an h-exact piece.
"""

from hexact import ChainComplex, ChainMap, ZZ, classify_exactness, fibre_cofibre_sequence, hcok, hker, homology, shift, validate
from hexact.exactness import HDiffSequence

# Two small complexes over the integers: A is Z in degree 0 and B is Z -2-> Z.
A = ChainComplex.free(ZZ, {0: 1})
B = ChainComplex.free(ZZ, {1: 1, 0: 1}, {1: [[2]]})
f = ChainMap(A, B, {0: [[1]]})

# constructors do not check d f = f d; validate() lists what is wrong, if anything
assert not validate(f)
print("H_0(A) =", homology(A, 0).describe(), "  H_0(B) =", homology(B, 0).describe())

# %%
# The homotopy kernel sits one step below the cone: Kf_n = A_n + B_{n+1}.
K, C = hker(f), hcok(f)
print("Kf:", K.object)
print("Cf:", C.object)
for n in C.object.support:
    print(f"  H_{n}(Cf) = {homology(C.object, n).describe()}")

# Strict stability: suspending Kf gives Cf on the nose, not merely up to homotopy.
print("Sigma Kf == Cf:", shift(K.object, 1) == C.object)

# %%
# Rolling the cone construction along gives the long sequence
#   ... -> Omega Cf -> A -> B -> Cf -> Sigma A -> Sigma B -> ...
seq = fibre_cofibre_sequence(f, left=2, right=2)
for i in seq.windows():
    flags = classify_exactness(HDiffSequence(*seq.window(i))).flags
    print(f"window at {i:+d}: strong={flags['strong']}  h={flags['h']}")
