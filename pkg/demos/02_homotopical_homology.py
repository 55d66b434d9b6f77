"""
Homotopical homology of an h-differential sequence
==================================================

An h-differential sequence ``X -f-> A -g-> Y`` comes with a nullhomotopy
``alpha: 0 ~ g f`` rather than the strict equation ``g f = 0``. Its
homotopical homology ``H`` is computed twice, as the cone of ``u_alpha`` and as
the homotopy kernel of ``v_alpha``; the two agree exactly. The sequence is
h-exact precisely when ``H`` is contractible.
"""

from hexact import (ChainComplex, ChainMap, Homotopy, ZZ, classify_exactness, hcok, homology,
                    homotopical_homology, identity, zero_map)
from hexact.exactness import HDiffSequence

A = ChainComplex.free(ZZ, {0: 1})
B = ChainComplex.free(ZZ, {1: 1, 0: 1}, {1: [[3]]})
f = ChainMap(A, B, {0: [[1]]})


def report(name: str, s: HDiffSequence) -> None:
    hh = homotopical_homology(s)
    r = classify_exactness(s)
    H = ", ".join(f"H_{n}={homology(hh.H, n).describe()}" for n in hh.H.support) or "H = 0"
    on = [k for k, v in r.flags.items() if v]
    print(f"{name:>10}: {H}")
    print(f"{'':>10}  exact in the sense of: {', '.join(on) or 'none'}")
    for k, why in r.refutations.items():
        print(f"{'':>10}  not {k}: {why}")


# %%
# The cofibre template A -f-> B -c-> Cf with its canonical nullhomotopy gamma is h-exact,
# so its homotopical homology is contractible (although not zero as a complex).
hc = hcok(f)
report("cofibre", HDiffSequence(f, hc.c, hc.gamma))

# %%
# Replacing c by the zero map keeps the sequence h-differential but destroys exactness.
z = zero_map(B, hc.object)
report("zero g", HDiffSequence(f, z, Homotopy(zero_map(A, hc.object), zero_map(A, hc.object))))

# %%
# g f need not vanish strictly: below g f = i is nonzero and alpha is a witness that it is
# nullhomotopic. The homotopy kernel of an identity is contractible while A is not, so the
# sequence is only pseudo-exact and H_1 records the discrepancy.
E = ChainComplex.free(ZZ, {1: 1, 0: 1}, {1: [[1]]})
i = ChainMap(A, E, {0: [[1]]})
alpha = Homotopy(zero_map(A, E), i, {0: [[1]]})
report("nonstrict", HDiffSequence(i, identity(E), alpha))
