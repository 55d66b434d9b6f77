import numpy as np
import pytest

from conftest import RINGS, ring_params
from oracles import exhaustive_nullhomotopy_gf2, field_rank, homology_invariants_sympy, ints
from hexact.bounded import POSITIVE, deformation_retract_data
from hexact.chain import (
    ChainComplex,
    ChainMap,
    Homotopy,
    TwoHomotopy,
    adjointify,
    compose,
    concat,
    find_homotopy,
    find_nullhomotopy,
    find_two_homotopy,
    homology,
    homology_invariants,
    homotopy_equivalence_witness,
    identity,
    induced_map,
    is_contractible,
    reverse,
    validate,
    whisker,
    zero_homotopy,
    zero_map,
)
from hexact.generators import _contractible_sum, random_chain_map, random_complex, random_graded_map, random_homotopic
from hexact.linalg import ExactMatrix
from hexact.modules import PresentedModule, module_is_iso
from hexact.rings import GF, QQ, ZZ

TWO = ChainComplex.free(ZZ, {0: 1, 1: 1}, {1: [[2]]})
ONE = ChainComplex.free(ZZ, {0: 1, 1: 1}, {1: [[1]]})
POINT = ChainComplex.free(ZZ, {0: 1})


def zmod(n):
    return PresentedModule.from_invariants(ZZ, 0, [n])


class TestValidate:
    def test_dd_located_at_higher_degree(self):
        C = ChainComplex.free(ZZ, {0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[2]]})
        diags = validate(C)
        assert len(diags) == 1 and diags[0].degree == 2 and diags[0].kind == "dd"

    def test_homotopy_degree_zero_only(self):
        # with zero differentials every degree-one family is a self-homotopy
        C = ChainComplex.free(ZZ, {0: 1, 1: 1})
        f = zero_map(C, C)
        h = Homotopy(f, f, {0: [[1]]})
        assert not validate(h)
        D = ChainComplex.free(ZZ, {0: 1})
        g = ChainMap(D, D, {0: [[2]]})
        h = Homotopy(zero_map(D, D), g)
        diags = validate(h)
        assert [d.degree for d in diags] == [0]

    def test_ill_defined_component(self):
        C = ChainComplex(ZZ, {0: zmod(2)})
        D = ChainComplex(ZZ, {0: PresentedModule.free(ZZ, 1)})
        f = ChainMap(C, D, {0: [[1]]})
        assert [d.kind for d in validate(f)] == ["ill-defined"]

    def test_constructions_validate(self, rng):
        from hexact.constructions import hcok, hker

        for _ in range(20):
            A, B = random_complex(ZZ, rng, 0, 2), random_complex(ZZ, rng, 0, 2)
            f = random_chain_map(A, B, rng)
            hk, hc = hker(f), hcok(f)
            for part in (hk.object, hk.k, hk.kappa, hc.object, hc.c, hc.gamma):
                assert not validate(part)


class TestAlgebra:
    def test_concat_reverse_whisker(self, rng):
        A, B = random_complex(ZZ, rng, 0, 2), random_complex(ZZ, rng, 0, 2)
        f = random_chain_map(A, B, rng)
        g, a = random_homotopic(f, rng)
        assert concat(a, reverse(a)).is_zero()
        assert whisker(None, a, None).same_matrices(a)
        assert whisker(identity(B), a, identity(A)).same_matrices(a)
        g2, b = random_homotopic(g, rng)
        u = random_chain_map(A, A, rng)
        v = random_chain_map(B, B, rng)
        lhs = whisker(v, concat(a, b), u)
        rhs = concat(whisker(v, a, u), whisker(v, b, u))
        assert lhs.same_matrices(rhs)

    def test_compose_shape_mismatch(self):
        with pytest.raises(ValueError):
            compose(identity(TWO), identity(POINT))


class TestHomology:
    def test_examples(self):
        assert homology_invariants(TWO, 0) == (0, (2,))
        assert homology(TWO, 1).is_zero()
        C = ChainComplex.free(ZZ, {0: 2, 1: 3})
        assert homology_invariants(C, 0) == (2, ()) and homology_invariants(C, 1) == (3, ())
        assert all(homology(ONE, n).is_zero() for n in (0, 1))

    def test_against_sympy(self, rng):
        for _ in range(100):
            C = random_complex(ZZ, rng, 0, 3)
            ranks = {n: C.gens(n) for n in C.support}
            diffs = {n: ints(C.d(n)) for n in C.support if n - 1 in C.support}
            for n in C.support:
                assert homology_invariants(C, n) == homology_invariants_sympy(ranks, diffs, n)

    @pytest.mark.parametrize("R,p", [(QQ, None), (GF(5), 5)], ids=["Q", "Z5"])
    def test_field_betti(self, R, p, rng):
        for _ in range(60):
            C = random_complex(R, rng, 0, 3)
            for n in C.support:
                rk_out = field_rank(C.d(n), p) if n - 1 in C.support else 0
                rk_in = field_rank(C.d(n + 1), p) if n + 1 in C.support else 0
                assert homology_invariants(C, n) == (C.gens(n) - rk_out - rk_in, ())


class TestSolvers:
    def test_nullhomotopy_examples(self):
        a = find_nullhomotopy(identity(ONE))
        assert a is not None and not validate(a) and a[0] == ExactMatrix.identity(ZZ, 1)
        assert find_nullhomotopy(ChainMap(POINT, POINT, {0: [[2]]})) is None
        z = find_nullhomotopy(zero_map(TWO, TWO))
        assert z is not None and z.is_zero()

    def test_nullhomotopy_sound(self, rng):
        for R in RINGS:
            for _ in range(40):
                A, B = random_complex(R, rng, 0, 2, torsion=True), random_complex(R, rng, 0, 2, torsion=True)
                f = random_chain_map(A, B, rng)
                h = find_nullhomotopy(f)
                if h is not None:
                    assert not validate(h) and h.end.equals(f) and h.start.is_zero()
                g, a = random_homotopic(zero_map(A, B), rng)
                assert find_nullhomotopy(g) is not None

    def test_nullhomotopy_complete_gf2(self, rng):
        R = GF(2)
        for _ in range(150):
            A = random_complex(R, rng, 0, int(rng.integers(0, 3)), max_rank=2)
            B = random_complex(R, rng, 0, int(rng.integers(0, 3)), max_rank=2)
            f = random_chain_map(A, B, rng)
            L = max(A.hi, B.hi, 0) + 1
            sr = [A.gens(n) for n in range(L)]
            tr = [B.gens(n) for n in range(L)]
            sd = [np.array(ints(A.d(n)), dtype=np.int64).reshape(sr[n - 1], sr[n]) for n in range(1, L)]
            td = [np.array(ints(B.d(n)), dtype=np.int64).reshape(tr[n - 1], tr[n]) for n in range(1, L)]
            comps = [np.array(ints(f[n]), dtype=np.int64).reshape(tr[n], sr[n]) for n in range(L)]
            assert (find_nullhomotopy(f) is not None) == exhaustive_nullhomotopy_gf2(sr, sd, tr, td, comps)

    def test_find_homotopy(self, rng):
        A, B = random_complex(ZZ, rng, 0, 3), random_complex(ZZ, rng, 0, 3)
        f = random_chain_map(A, B, rng)
        g, _ = random_homotopic(f, rng)
        h = find_homotopy(f, g)
        assert h is not None and not validate(h)

    def test_two_homotopy_examples(self, rng):
        a = find_nullhomotopy(identity(ONE))
        lam = find_two_homotopy(a, a)
        assert lam is not None and lam.is_zero()
        # two adjacent degrees leave no room for a degree-two witness
        C = ChainComplex.free(ZZ, {0: 1, 1: 1})
        f = zero_map(C, C)
        a0, a1 = Homotopy(f, f), Homotopy(f, f, {0: [[1]]})
        assert not validate(a1)
        assert find_two_homotopy(a0, a1) is None

    def test_two_homotopy_reconstructs(self, rng):
        for R in RINGS:
            for _ in range(15):
                A, B = random_complex(R, rng, 0, 3), random_complex(R, rng, 0, 3)
                f = random_chain_map(A, B, rng)
                g, a = random_homotopic(f, rng)
                lam = random_graded_map(A, B, 2, rng)
                comps = {}
                for n in a.degrees():
                    m = a[n]
                    if n in lam and B.gens(n + 2):
                        m = m + B.d(n + 2) @ lam[n]
                    if n - 1 in lam and A.gens(n - 1):
                        m = m - lam[n - 1] @ A.d(n)
                    comps[n] = m
                a2 = Homotopy(f, g, comps)
                assert not validate(a2)
                w = find_two_homotopy(a, a2)
                assert w is not None and not validate(w)


class TestContractible:
    def test_examples(self):
        s = is_contractible(ONE)
        assert s is not None and not validate(s)
        # Z/2 -> Z/4 -> Z/2 is acyclic but does not split
        C = ChainComplex(ZZ, {2: zmod(2), 1: zmod(4), 0: zmod(2)}, {2: [[2]], 1: [[1]]})
        assert not validate(C)
        assert all(homology(C, n).is_zero() for n in C.support)
        assert is_contractible(C) is None
        Q = ChainComplex.free(QQ, {2: 1, 1: 2, 0: 1}, {2: [[1], [0]], 1: [[0, 1]]})
        assert is_contractible(Q) is not None

    def test_empty_complex(self):
        s = is_contractible(ChainComplex.empty(ZZ))
        assert s is not None

    @ring_params()
    def test_contractible_vs_acyclic(self, R, rng):
        for _ in range(200):
            C = random_complex(R, rng, 0, int(rng.integers(0, 4)), contractible=bool(rng.random() < 0.4),
                               torsion=True)
            s = is_contractible(C)
            acyclic = all(homology(C, n).is_zero() for n in C.support)
            if s is not None:
                assert not validate(s) and acyclic
            if R.is_field:
                assert (s is not None) == acyclic

    def test_greedy_agrees_with_joint_solver(self, rng):
        seen = set()
        for _ in range(120):
            C = random_complex(ZZ, rng, 0, int(rng.integers(1, 4)), contractible=bool(rng.random() < 0.5), torsion=True)
            s = is_contractible(C)
            assert (s is not None) == (find_nullhomotopy(identity(C)) is not None)
            if s is not None:
                assert not validate(s)
            seen.add(s is not None)
        assert seen == {True, False}


class TestEquivalences:
    def test_identity(self):
        w = homotopy_equivalence_witness(identity(TWO))
        assert w is not None and not w.validate()
        assert w.g.equals(identity(TWO))

    def test_not_equivalence(self):
        assert homotopy_equivalence_witness(ChainMap(POINT, POINT, {0: [[2]]})) is None

    def test_deformation_retract(self, rng):
        for _ in range(10):
            X, A = random_complex(ZZ, rng, 0, 2), random_complex(ZZ, rng, 0, 2)
            f = random_chain_map(X, A, rng)
            d = deformation_retract_data(f, POSITIVE)
            w = homotopy_equivalence_witness(d.u)
            assert w is not None and not w.validate()
            adj = adjointify(d.u, d.u_prime, zero_homotopy(identity(X)), d.sigma)
            assert not validate(adj.left) and not validate(adj.right)

    def test_contractible_summand(self, rng):
        for R in RINGS:
            for _ in range(10):
                C = random_complex(R, rng, 0, 2)
                Y, e = _contractible_sum(C, rng)
                w = homotopy_equivalence_witness(e)
                assert w is not None and not w.validate()
                adj = adjointify(w.f, w.g, w.alpha, w.beta)
                assert adj.left is not None and adj.right is not None
                for n in C.support:
                    assert module_is_iso(induced_map(e, n))

    def test_adjointify_identity(self):
        I = identity(TWO)
        adj = adjointify(I, I, zero_homotopy(I), zero_homotopy(I))
        assert adj.equivalence.beta.is_zero()

    def test_homology_invariance(self, rng):
        for _ in range(30):
            A, B = random_complex(ZZ, rng, 0, 2), random_complex(ZZ, rng, 0, 2)
            f = random_chain_map(A, B, rng)
            if homotopy_equivalence_witness(f) is not None:
                assert all(module_is_iso(induced_map(f, n)) for n in set(A.support) | set(B.support))
