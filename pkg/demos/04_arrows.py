"""
Sequences of arrows
===================

A complex concentrated in degrees 0 and 1 is just a module map ``d: A' -> A''``.
For such arrows the homotopical homology of ``X -> A -> Y`` collapses to a single
map ``w: B -> Z`` from a pushout to a pullback, and the sequence is h-exact exactly
when ``w`` is invertible. Exactness can then be read off from ordinary modules.
"""

from hexact import (ArrowMap, ArrowObject, ArrowSequence, ModuleMap, PresentedModule, ZZ, arrow_classify, arrow_w,
                    left_template, right_template, strong_template)
from hexact.linalg import ExactMatrix

Z = PresentedModule.free(ZZ, 1)
Z4 = PresentedModule.from_invariants(ZZ, 0, [4])


def mm(M, N, entries) -> ModuleMap:
    return ModuleMap(M, N, ExactMatrix(ZZ, N.gens, M.gens, entries))


# %%
# A factorisation d_A = h'' h' of an arrow gives a strongly exact sequence.
h1, h2 = mm(Z, Z, [[2]]), mm(Z, Z4, [[1]])
s = strong_template(h1, h2)
wd = arrow_w(s)
print("w:", wd.w.boundary.source.describe(), "->", wd.w.boundary.target.describe())
print("flags:", arrow_classify(s).flags)

# %%
# The left template of g builds X as a pullback, so left exactness is automatic and
# right exactness is not. Here it is even h-exact while failing to be right exact.
A = ArrowObject(mm(Z, Z, [[2]]))
g = ArrowMap(A, A, mm(Z, Z, [[2]]), mm(Z, Z, [[2]]))
F = arrow_classify(left_template(g)).flags
print(f"left template:  left={F['left']} right={F['right']} h={F['h']}")
F = arrow_classify(right_template(g)).flags
print(f"right template: left={F['left']} right={F['right']} h={F['h']}")

# %%
# alpha is part of the data: the zero map is not a valid nullhomotopy of g f here.
bad = ArrowSequence(s.f, s.g, mm(s.f.source.bottom, s.g.target.top, [[0]]))
print("alpha = 0 still valid:", bad.is_valid())
