"""Homotopy kernels and cokernels, shifts, universal factorisations and fibre-cofibre sequences.

Block conventions (``+`` is direct sum, first summand first):

* ``(Kf)_n = A_n + B_{n+1}``, ``d(a, b) = (da, fa - db)``, ``kf(a, b) = a``, ``kappa_f(a, b) = b``;
* ``(Cf)_n = A_{n-1} + B_n``, ``d(a, b) = (-da, -fa + db)``, ``cf(b) = (0, b)``, ``gamma_f(a) = (-a, 0)``;
* ``(Sigma A)_n = A_{n-1}`` and ``(Omega A)_n = A_{n+1}``, both with negated differential.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import (
    ChainComplex,
    ChainMap,
    GradedMap,
    Homotopy,
    TwoHomotopy,
    compose,
    concat,
    identity,
    reverse,
    validate,
    whisker,
    zero_map,
)
from .linalg import ExactMatrix, block, hstack, vstack
from .modules import direct_sum


@dataclass(frozen=True)
class HKernelData:
    f: ChainMap
    object: ChainComplex
    k: ChainMap
    kappa: Homotopy


@dataclass(frozen=True)
class HCokernelData:
    f: ChainMap
    object: ChainComplex
    c: ChainMap
    gamma: Homotopy


def _sum2(R, M, N):
    return direct_sum(R, [M, N])


def hker(f: ChainMap) -> HKernelData:
    A, B, R = f.source, f.target, f.ring
    lo = min(A.lo, B.lo - 1)
    hi = max(A.hi, B.hi - 1)
    mods, diffs = {}, {}
    for n in range(lo, hi + 1):
        mods[n] = _sum2(R, A.module(n), B.module(n + 1))
    for n in range(lo + 1, hi + 1):
        a, b = A.gens(n), B.gens(n + 1)
        a1, b1 = A.gens(n - 1), B.gens(n)
        diffs[n] = block(R, [a1, b1], [a, b], {(0, 0): A.d(n), (1, 0): f[n], (1, 1): -B.d(n + 1)})
    K = ChainComplex(R, mods, diffs)
    k = ChainMap(K, A, {n: hstack(R, A.gens(n), [ExactMatrix.identity(R, A.gens(n)),
                                                 ExactMatrix.zeros(R, A.gens(n), B.gens(n + 1))]) for n in K.support})
    kappa = Homotopy(zero_map(K, B), compose(f, k), {
        n: hstack(R, B.gens(n + 1), [ExactMatrix.zeros(R, B.gens(n + 1), A.gens(n)),
                                     ExactMatrix.identity(R, B.gens(n + 1))]) for n in K.support})
    return HKernelData(f, K, k, kappa)


def hcok(f: ChainMap) -> HCokernelData:
    A, B, R = f.source, f.target, f.ring
    lo = min(A.lo + 1, B.lo)
    hi = max(A.hi + 1, B.hi)
    mods, diffs = {}, {}
    for n in range(lo, hi + 1):
        mods[n] = _sum2(R, A.module(n - 1), B.module(n))
    for n in range(lo + 1, hi + 1):
        a, b = A.gens(n - 1), B.gens(n)
        a1, b1 = A.gens(n - 2), B.gens(n - 1)
        diffs[n] = block(R, [a1, b1], [a, b], {(0, 0): -A.d(n - 1), (1, 0): -f[n - 1], (1, 1): B.d(n)})
    C = ChainComplex(R, mods, diffs)
    c = ChainMap(B, C, {n: vstack(R, B.gens(n), [ExactMatrix.zeros(R, A.gens(n - 1), B.gens(n)),
                                                 ExactMatrix.identity(R, B.gens(n))]) for n in B.support})
    gamma = Homotopy(zero_map(A, C), compose(c, f), {
        n: vstack(R, A.gens(n), [-ExactMatrix.identity(R, A.gens(n)),
                                 ExactMatrix.zeros(R, B.gens(n + 1), A.gens(n))]) for n in A.support})
    return HCokernelData(f, C, c, gamma)


# ---------------------------------------------------------------------------
# strict shifts


def _shift_complex(A: ChainComplex, k: int) -> ChainComplex:
    sign = -1 if k % 2 else 1
    mods = {n + k: A.module(n) for n in A.support}
    diffs = {n + k: A.d(n) * sign for n in range(A.lo + 1, A.hi + 1)}
    return ChainComplex(A.ring, mods, diffs)


def _shift_comps(h: GradedMap, k: int) -> dict:
    sign = -1 if (k * h.degree) % 2 else 1
    return {n + k: h[n] * sign for n in h.degrees()}


def shift(x, k: int):
    """``Sigma^k`` for ``k > 0`` and ``Omega^-k`` for ``k < 0``, strictly.

    Works on complexes, chain maps, homotopies and 2-homotopies. A component
    of degree ``d`` picks up the sign ``(-1)^(k d)``, so ``shift(shift(x, k), -k) == x``.
    """
    if k == 0:
        return x
    if isinstance(x, ChainComplex):
        return _shift_complex(x, k)
    A, B = _shift_complex(x.source, k), _shift_complex(x.target, k)
    comps = _shift_comps(x, k)
    if isinstance(x, ChainMap):
        return ChainMap(A, B, comps)
    if isinstance(x, TwoHomotopy):
        return TwoHomotopy(shift(x.start, k), shift(x.end, k), comps)
    if isinstance(x, Homotopy):
        return Homotopy(shift(x.start, k), shift(x.end, k), comps)
    return GradedMap(A, B, x.degree, comps)


def suspension(A: ChainComplex) -> ChainComplex:
    return shift(A, 1)


def loop(A: ChainComplex) -> ChainComplex:
    return shift(A, -1)


# ---------------------------------------------------------------------------
# universal factorisations


def _require_valid(h: Homotopy, what: str):
    problems = validate(h)
    if problems:
        raise ValueError(f"{what} is not a valid homotopy: {problems[0]}")


def factor_through_hker(hk: HKernelData, x: ChainMap, xi: Homotopy) -> ChainMap:
    """The unique ``u: X -> Kf`` with ``kf u = x`` and ``kappa_f u = xi``; ``u_n = (x_n, xi_n)``."""
    f = hk.f
    if x.target != f.source or xi.source != x.source or xi.target != f.target:
        raise ValueError("factorisation data has the wrong shape")
    _require_valid(xi, "xi")
    if not xi.start.is_zero() or not xi.end.equals(compose(f, x)):
        raise ValueError("xi must be a nullhomotopy of f x")
    X, R = x.source, f.ring
    return ChainMap(X, hk.object, {n: vstack(R, X.gens(n), [x[n], xi[n]]) for n in X.support})


def factor_through_hcok(hc: HCokernelData, y: ChainMap, eta: Homotopy) -> ChainMap:
    """The unique ``v: Cf -> Y`` with ``v cf = y`` and ``v gamma_f = eta``; ``v_n = (-eta_{n-1}, y_n)``."""
    f = hc.f
    if y.source != f.target or eta.source != f.source or eta.target != y.target:
        raise ValueError("factorisation data has the wrong shape")
    _require_valid(eta, "eta")
    if not eta.start.is_zero() or not eta.end.equals(compose(y, f)):
        raise ValueError("eta must be a nullhomotopy of y f")
    C, Y, R = hc.object, y.target, f.ring
    return ChainMap(C, Y, {n: hstack(R, Y.gens(n), [-eta[n - 1], y[n]]) for n in C.support})


# ---------------------------------------------------------------------------
# stability data


@dataclass(frozen=True)
class StabilityData:
    rho: Homotopy  # 0 ~ 0: Kf -> Cf, components cf.kappa_f - gamma_f.kf
    V: ChainMap  # Sigma Kf -> Cf
    U: ChainMap  # Kf -> Omega Cf


def canonical_stability(f: ChainMap) -> StabilityData:
    hk, hc = hker(f), hcok(f)
    a = whisker(hc.c, hk.kappa, None)
    b = whisker(None, hc.gamma, hk.k)
    rho = concat(a, reverse(b))
    SK, OC = shift(hk.object, 1), shift(hc.object, -1)
    if SK != hc.object or OC != hk.object:
        raise AssertionError("strict stability failed: Sigma Kf != Cf")
    V = ChainMap(SK, hc.object, {n: ExactMatrix.identity(f.ring, SK.gens(n)) for n in SK.support})
    U = ChainMap(hk.object, OC, {n: ExactMatrix.identity(f.ring, OC.gens(n)) for n in OC.support})
    return StabilityData(rho, V, U)


# ---------------------------------------------------------------------------
# coherent functoriality on squares


@dataclass(frozen=True)
class Square:
    """``f1: X -> X'``, ``f2: Y -> Y'`` over ``x: X -> Y``, ``y: X' -> Y'`` with ``phi: f2 x ~ y f1``."""

    x: ChainMap
    y: ChainMap
    f1: ChainMap
    f2: ChainMap
    phi: Homotopy

    @classmethod
    def strict(cls, x: ChainMap, y: ChainMap, f1: ChainMap, f2: ChainMap) -> "Square":
        lhs, rhs = compose(f2, x), compose(y, f1)
        if not lhs.equals(rhs):
            raise ValueError("square does not commute")
        return cls(x, y, f1, f2, Homotopy(lhs, rhs))

    def check(self):
        _require_valid(self.phi, "phi")
        if not (self.phi.start.equals(compose(self.f2, self.x)) and self.phi.end.equals(compose(self.y, self.f1))):
            raise ValueError("phi must be a homotopy f2 x ~ y f1")


def coherent_k(sq: Square) -> tuple[ChainMap, HKernelData, HKernelData]:
    """``K(f): Kx -> Ky`` with ``ky K(f) = f1 kx`` and ``kappa_y K(f) = f2.kappa_x + phi.kx``.

    Blockwise ``K(f)_n = [[f1_n, 0], [phi_n, f2_{n+1}]]``.
    """
    sq.check()
    hx, hy = hker(sq.x), hker(sq.y)
    xi = concat(whisker(sq.f2, hx.kappa, None), whisker(None, sq.phi, hx.k))
    return factor_through_hker(hy, compose(sq.f1, hx.k), xi), hx, hy


def coherent_c(sq: Square) -> tuple[ChainMap, HCokernelData, HCokernelData]:
    """``C(f): Cx -> Cy`` with ``C(f) cx = cy f2`` and ``C(f) gamma_x = gamma_y.f1 - cy.phi``.

    Blockwise ``C(f)_n = [[f1_{n-1}, 0], [phi_{n-1}, f2_n]]``.
    """
    sq.check()
    cx, cy = hcok(sq.x), hcok(sq.y)
    eta = concat(whisker(None, cy.gamma, sq.f1), reverse(whisker(cy.c, sq.phi, None)))
    return factor_through_hcok(cx, compose(cy.c, sq.f2), eta), cx, cy


# ---------------------------------------------------------------------------
# fibre-cofibre sequence


def connecting_map(f: ChainMap) -> ChainMap:
    """``delta: Cf -> Sigma A``, ``(a, b) -> -a``."""
    hc = hcok(f)
    A, C, R = f.source, hc.object, f.ring
    SA = shift(A, 1)
    return ChainMap(C, SA, {n: hstack(R, SA.gens(n), [-ExactMatrix.identity(R, SA.gens(n)),
                                                      ExactMatrix.zeros(R, SA.gens(n), f.target.gens(n))]) for n in C.support})


def sigma_homotopy(f: ChainMap) -> Homotopy:
    """``sigma_f: 0 ~ (Sigma f) delta``, ``(a, b) -> b``."""
    C = hcok(f).object
    SB, R = shift(f.target, 1), f.ring
    d = connecting_map(f)
    return Homotopy(zero_map(C, SB), compose(shift(f, 1), d), {
        n: hstack(R, f.target.gens(n), [ExactMatrix.zeros(R, f.target.gens(n), f.source.gens(n - 1)),
                                        ExactMatrix.identity(R, f.target.gens(n))]) for n in C.support})


def shift_identity(B: ChainComplex, k: int) -> GradedMap:
    """The degree +1 identity ``Sigma^k B -> Sigma^(k+1) B`` (``sigma_B`` for ``k = 0``, ``omega_B`` for ``k = -1``)."""
    S, T = shift(B, k), shift(B, k + 1)
    return GradedMap(S, T, 1, {n: ExactMatrix.identity(B.ring, S.gens(n)) for n in S.support})


@dataclass(frozen=True)
class FibreCofibreSequence:
    """Positions ``first .. last`` of ``... -> Omega Cf -> A -> B -> Cf -> Sigma A -> ...``.

    Position ``3k + r`` holds ``Sigma^k`` of ``(A, B, Cf)[r]``; ``maps[i]`` goes from
    position ``i`` to ``i + 1`` and ``homotopies[i]: 0 ~ maps[i+1] maps[i]``.
    """

    f: ChainMap
    first: int
    last: int
    objects: dict
    maps: dict
    homotopies: dict

    def window(self, i: int) -> tuple[ChainMap, ChainMap, Homotopy]:
        return self.maps[i], self.maps[i + 1], self.homotopies[i]

    def windows(self) -> list[int]:
        return [i for i in range(self.first, self.last - 1)]


def fibre_cofibre_sequence(f: ChainMap, left: int = 3, right: int = 3) -> FibreCofibreSequence:
    """The sequence with ``left`` objects before ``A`` and ``right`` objects after ``B``.

    Generated by strictly shifting the window ``A -f-> B -cf-> Cf -delta-> Sigma A``
    with nullhomotopies ``gamma_f``, ``0`` and ``sigma_f``; so on the fibre side the
    maps are ``Omega cf: b -> (0, b)`` and ``Omega delta = -kf``.
    """
    hc = hcok(f)
    base_obj = (f.source, f.target, hc.object)
    delta = connecting_map(f)
    base_map = (f, hc.c, delta)
    dc = compose(delta, hc.c)
    base_hom = (hc.gamma, Homotopy(zero_map(dc.source, dc.target), dc), sigma_homotopy(f))
    first, last = -left, 1 + right
    objects, maps, homs = {}, {}, {}
    for i in range(first, last + 1):
        k, r = divmod(i, 3)
        objects[i] = shift(base_obj[r], k)
        if i < last:
            maps[i] = shift(base_map[r], k)
        if i < last - 1:
            homs[i] = shift(base_hom[r], k)
    return FibreCofibreSequence(f, first, last, objects, maps, homs)
