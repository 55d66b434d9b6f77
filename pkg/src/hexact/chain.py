"""Chain complexes of presented modules, chain maps, homotopies and 2-homotopies.

Sign conventions:

* a homotopy ``alpha: f ~ g`` satisfies ``-f_n + g_n = alpha_{n-1} d_n + d_{n+1} alpha_n``;
* a 2-homotopy ``L: alpha ~~ alpha'`` satisfies ``alpha'_n - alpha_n = d L_n - L_{n-1} d``.

All identities are checked as module homomorphisms, i.e. modulo the relations
of the target module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .linalg import ExactMatrix, column_space_basis, hstack, kron, nullspace, vec, unvec, vstack
from .modules import ModuleMap, PresentedModule, _maps_into_relations, _snf, lift, lift_homomorphism, module_cokernel, module_kernel, solve
from .rings import Ring


class ChainComplex:
    """A bounded chain complex ``... -> C_n -d_n-> C_{n-1} -> ...``.

    Zero modules at either end of the support are trimmed, so two complexes
    are equal exactly when their presentations and differentials agree.
    """

    __slots__ = ("ring", "lo", "hi", "_modules", "_diffs", "_hash")

    def __init__(self, ring: Ring, modules: Mapping[int, PresentedModule], differentials: Mapping | None = None):
        differentials = dict(differentials or {})
        nz = sorted(n for n, m in modules.items() if m.gens > 0)
        self.ring = ring
        if nz:
            self.lo, self.hi = nz[0], nz[-1]
        else:
            self.lo, self.hi = 0, -1
        zero = PresentedModule.zero(ring)
        self._modules = {n: modules.get(n, zero) for n in range(self.lo, self.hi + 1)}
        self._diffs = {}
        for n in range(self.lo + 1, self.hi + 1):
            d = differentials.pop(n, None)
            shape = (self._modules[n - 1].gens, self._modules[n].gens)
            if d is None:
                d = ExactMatrix.zeros(ring, *shape)
            elif isinstance(d, ModuleMap):
                d = d.matrix
            elif not isinstance(d, ExactMatrix):
                d = ExactMatrix(ring, shape[0], shape[1], d)
            if d.shape != shape:
                raise ValueError(f"differential d_{n} has shape {d.shape}, expected {shape}")
            self._diffs[n] = d
        for n, d in differentials.items():
            m = d.matrix if isinstance(d, ModuleMap) else d
            if isinstance(m, ExactMatrix) and not m.is_zero():
                raise ValueError(f"differential d_{n} leaves the support")
        self._hash = None

    @classmethod
    def free(cls, ring: Ring, ranks: Mapping[int, int], differentials: Mapping | None = None) -> "ChainComplex":
        return cls(ring, {n: PresentedModule.free(ring, r) for n, r in ranks.items()}, differentials)

    @classmethod
    def empty(cls, ring: Ring) -> "ChainComplex":
        return cls(ring, {})

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    @property
    def support(self) -> range:
        return range(self.lo, self.hi + 1)

    def module(self, n: int) -> PresentedModule:
        m = self._modules.get(n)
        return m if m is not None else PresentedModule.zero(self.ring)

    def gens(self, n: int) -> int:
        m = self._modules.get(n)
        return 0 if m is None else m.gens

    def d(self, n: int) -> ExactMatrix:
        m = self._diffs.get(n)
        if m is None:
            return ExactMatrix.zeros(self.ring, self.gens(n - 1), self.gens(n))
        return m

    def dmap(self, n: int) -> ModuleMap:
        return ModuleMap(self.module(n), self.module(n - 1), self.d(n), check=False)

    @property
    def is_free(self) -> bool:
        return all(m.is_free_presentation for m in self._modules.values())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (self.ring == other.ring and self.lo == other.lo and self.hi == other.hi
                and self._modules == other._modules and self._diffs == other._diffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.lo, self.hi, tuple(self._modules.values()), tuple(self._diffs.values())))
        return self._hash

    def __repr__(self):
        if self.is_empty:
            return f"ChainComplex({self.ring}, empty)"
        parts = " <- ".join(f"[{n}] {self.module(n).describe()}" for n in self.support)
        return f"ChainComplex({self.ring}, {parts})"


class GradedMap:
    """Degree-``degree`` family of matrices ``A_n -> B_{n+degree}``."""

    __slots__ = ("source", "target", "degree", "_comps")

    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int, components: Mapping | None = None):
        if source.ring != target.ring:
            raise ValueError("source and target live over different rings")
        self.source = source
        self.target = target
        self.degree = degree
        components = dict(components or {})
        R = source.ring
        comps = {}
        for n in self.degrees():
            shape = (target.gens(n + degree), source.gens(n))
            m = components.pop(n, None)
            if m is None:
                m = ExactMatrix.zeros(R, *shape)
            elif isinstance(m, ModuleMap):
                m = m.matrix
            elif not isinstance(m, ExactMatrix):
                m = ExactMatrix(R, shape[0], shape[1], m)
            if m.shape != shape:
                raise ValueError(f"component {n} has shape {m.shape}, expected {shape}")
            comps[n] = m
        for n, m in components.items():
            m = m.matrix if isinstance(m, ModuleMap) else m
            if isinstance(m, ExactMatrix) and m.rows and m.cols:
                raise ValueError(f"component {n} is outside the supports")
        self._comps = comps

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def degrees(self) -> list[int]:
        return [n for n in self.source.support if self.target.gens(n + self.degree) > 0]

    def __getitem__(self, n: int) -> ExactMatrix:
        m = self._comps.get(n)
        if m is None:
            return ExactMatrix.zeros(self.ring, self.target.gens(n + self.degree), self.source.gens(n))
        return m

    def component(self, n: int) -> ModuleMap:
        return ModuleMap(self.source.module(n), self.target.module(n + self.degree), self[n], check=False)

    def components(self) -> dict[int, ExactMatrix]:
        return dict(self._comps)

    def same_matrices(self, other: "GradedMap") -> bool:
        return (self.source == other.source and self.target == other.target
                and self.degree == other.degree and self._comps == other._comps)

    def equals(self, other: "GradedMap") -> bool:
        """Componentwise equality as module homomorphisms."""
        if not (self.source == other.source and self.target == other.target and self.degree == other.degree):
            return False
        return all(_maps_into_relations(self.target.module(n + self.degree), self[n] - other[n]) for n in self.degrees())

    def _like(self, comps) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree, comps)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        _check_parallel(self, other)
        return self._like({n: self[n] + other[n] for n in self.degrees()})

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        _check_parallel(self, other)
        return self._like({n: self[n] - other[n] for n in self.degrees()})

    def __neg__(self) -> "GradedMap":
        return self._like({n: -self[n] for n in self.degrees()})

    def is_zero(self) -> bool:
        return all(self[n].is_zero() for n in self.degrees())

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree}, {self.source!r} -> {self.target!r})"


def _check_parallel(a: GradedMap, b: GradedMap):
    if a.source != b.source or a.target != b.target or a.degree != b.degree:
        raise ValueError("graded maps are not parallel")


class ChainMap(GradedMap):
    __slots__ = ()

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Mapping | None = None):
        super().__init__(source, target, 0, components)

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self.same_matrices(other)

    __hash__ = None

    def _like(self, comps):
        return ChainMap(self.source, self.target, comps)


class Homotopy(GradedMap):
    """Degree +1 map ``alpha: start ~ end``; a nullhomotopy has ``start = 0``."""

    __slots__ = ("start", "end")

    def __init__(self, start: ChainMap, end: ChainMap, components: Mapping | None = None):
        if start.source != end.source or start.target != end.target:
            raise ValueError("homotopy endpoints are not parallel")
        super().__init__(start.source, start.target, 1, components)
        self.start = start
        self.end = end

    def __eq__(self, other):
        return (isinstance(other, Homotopy) and self.same_matrices(other)
                and self.start == other.start and self.end == other.end)

    __hash__ = None

    def _like(self, comps):
        return GradedMap(self.source, self.target, 1, comps)


class TwoHomotopy(GradedMap):
    """Degree +2 map ``L`` with ``end - start = d L - L d``."""

    __slots__ = ("start", "end")

    def __init__(self, start: Homotopy, end: Homotopy, components: Mapping | None = None):
        if not (start.start.equals(end.start) and start.end.equals(end.end)):
            raise ValueError("2-homotopy needs parallel homotopies")
        super().__init__(start.source, start.target, 2, components)
        self.start = start
        self.end = end

    def _like(self, comps):
        return GradedMap(self.source, self.target, 2, comps)


def identity(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {n: ExactMatrix.identity(C.ring, C.gens(n)) for n in C.support})


def zero_map(A: ChainComplex, B: ChainComplex) -> ChainMap:
    return ChainMap(A, B)


def zero_homotopy(f: ChainMap) -> Homotopy:
    return Homotopy(f, f)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    degree: int
    message: str

    def __str__(self):
        return f"degree {self.degree}: {self.kind}: {self.message}"


def _validate_complex(C: ChainComplex) -> list[Diagnostic]:
    out = []
    for n in range(C.lo + 1, C.hi + 1):
        if not C.dmap(n).is_well_defined():
            out.append(Diagnostic("ill-defined", n, f"d_{n} does not respect relations"))
    for n in range(C.lo + 2, C.hi + 1):
        dd = ModuleMap(C.module(n), C.module(n - 2), C.d(n - 1) @ C.d(n), check=False)
        if not dd.is_zero():
            out.append(Diagnostic("dd", n, f"d_{n - 1} d_{n} = {dd.matrix.tolist()} is not zero"))
    return out


def _validate_components(h: GradedMap) -> list[Diagnostic]:
    return [Diagnostic("ill-defined", n, "component does not respect relations")
            for n in h.degrees() if not h.component(n).is_well_defined()]


def _boundary(h: GradedMap, n: int, sign_prev: int, sign_next: int) -> ExactMatrix:
    """``sign_prev * h_{n-1} d^A_n + sign_next * d^B_{n+deg} h_n`` as a matrix ``A_n -> B_{n+deg-1}``."""
    A, B, k = h.source, h.target, h.degree
    left = h[n - 1] @ A.d(n)
    right = B.d(n + k) @ h[n]
    return left * sign_prev + right * sign_next


def validate(entity) -> list[Diagnostic]:
    """List every violated identity; empty means the entity is valid."""
    if isinstance(entity, ChainComplex):
        return _validate_complex(entity)
    if isinstance(entity, ChainMap):
        out = _validate_components(entity)
        A, B = entity.source, entity.target
        for n in A.support:
            comm = B.d(n) @ entity[n] - entity[n - 1] @ A.d(n)
            if B.gens(n - 1) and not _maps_into_relations(B.module(n - 1), comm):
                out.append(Diagnostic("chain", n, "d f_n != f_{n-1} d"))
        return out
    if isinstance(entity, TwoHomotopy):
        out = [Diagnostic("endpoint", d.degree, "start: " + d.message) for d in validate(entity.start)]
        out += [Diagnostic("endpoint", d.degree, "end: " + d.message) for d in validate(entity.end)]
        out += _validate_components(entity)
        for n in entity.source.support:
            lhs = entity.end[n] - entity.start[n]
            rhs = _boundary(entity, n, -1, 1)
            if entity.target.gens(n + 1) and not _maps_into_relations(entity.target.module(n + 1), lhs - rhs):
                out.append(Diagnostic("2-homotopy", n, "end - start != d L - L d"))
        return out
    if isinstance(entity, Homotopy):
        out = [Diagnostic("endpoint", d.degree, "start: " + d.message) for d in validate(entity.start)]
        out += [Diagnostic("endpoint", d.degree, "end: " + d.message) for d in validate(entity.end)]
        out += _validate_components(entity)
        for n in entity.source.support:
            lhs = entity.end[n] - entity.start[n]
            rhs = _boundary(entity, n, 1, 1)
            if entity.target.gens(n) and not _maps_into_relations(entity.target.module(n), lhs - rhs):
                out.append(Diagnostic("homotopy", n, "-f_n + g_n != alpha d + d alpha"))
        return out
    raise TypeError(f"cannot validate {type(entity).__name__}")


# ---------------------------------------------------------------------------
# algebra of maps and homotopies


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    if g.source != f.target:
        raise ValueError("maps are not composable")
    comps = {n: g[n + f.degree] @ f[n] for n in f.source.support}
    k = f.degree + g.degree
    if k == 0:
        return ChainMap(f.source, g.target, comps)
    return GradedMap(f.source, g.target, k, comps)


def whisker(v: ChainMap | None, alpha: Homotopy, u: ChainMap | None) -> Homotopy:
    """``v . alpha . u`` with components ``v_{n+1} alpha_n u_n``; ``None`` stands for an identity."""
    start, end, h = alpha.start, alpha.end, alpha
    if u is not None:
        start, end, h = compose(start, u), compose(end, u), compose(h, u)
    if v is not None:
        start, end, h = compose(v, start), compose(v, end), compose(v, h)
    return Homotopy(start, end, h.components())


def concat(alpha: Homotopy, beta: Homotopy) -> Homotopy:
    """Vertical composite ``alpha + beta: f ~ h`` for ``alpha: f ~ g``, ``beta: g ~ h``."""
    if not alpha.end.equals(beta.start):
        raise ValueError("homotopies are not consecutive")
    return Homotopy(alpha.start, beta.end, {n: alpha[n] + beta[n] for n in alpha.degrees()})


def reverse(alpha: Homotopy) -> Homotopy:
    return Homotopy(alpha.end, alpha.start, {n: -alpha[n] for n in alpha.degrees()})


def whisker2(v: ChainMap | None, lam: TwoHomotopy, u: ChainMap | None) -> TwoHomotopy:
    h = lam
    if u is not None:
        h = compose(h, u)
    if v is not None:
        h = compose(v, h)
    return TwoHomotopy(whisker(v, lam.start, u), whisker(v, lam.end, u), h.components())


# ---------------------------------------------------------------------------
# homology


def homology_data(C: ChainComplex, n: int) -> tuple[PresentedModule, PresentedModule, ModuleMap]:
    """``(H_n, Z_n, Z_n -> C_n)``; ``H_n`` is presented on the generators of ``Z_n``."""
    Z, inc = module_kernel(C.dmap(n))
    b = lift(inc, C.dmap(n + 1))
    assert b is not None, "boundaries must be cycles"
    H, _ = module_cokernel(b)
    return H, Z, inc


def homology(C: ChainComplex, n: int) -> PresentedModule:
    """``ker d_n / im d_{n+1}``; ``.invariants()`` gives the invariant factors."""
    return homology_data(C, n)[0]


def homology_invariants(C: ChainComplex, n: int) -> tuple[int, tuple]:
    return homology(C, n).invariants()


def homology_map(A: ChainComplex, B: ChainComplex, n: int, m: int, matrix: ExactMatrix) -> ModuleMap:
    """Map ``H_n(A) -> H_m(B)`` induced by a matrix ``A_n -> B_m`` sending cycles to cycles.

    The matrix only needs to be well defined on homology, not on the chain level.
    """
    HA, ZA, iA = homology_data(A, n)
    HB, ZB, iB = homology_data(B, m)
    R = A.ring
    img = matrix @ iA.matrix
    sol = solve(hstack(R, B.gens(m), [iB.matrix, B.module(m).relations]), img)
    if sol is None:
        raise ValueError("matrix does not send cycles to cycles")
    X = sol.submatrix(0, ZB.gens, 0, ZA.gens)
    return ModuleMap(HA, HB, X)


def induced_map(f: ChainMap, n: int) -> ModuleMap:
    return homology_map(f.source, f.target, n, n, f[n])


# ---------------------------------------------------------------------------
# lifting solvers


def _solve_graded(A: ChainComplex, B: ChainComplex, degree: int, targets: Mapping[int, ExactMatrix],
                  sign_prev: int, sign_next: int) -> dict[int, ExactMatrix] | None:
    """Find a degree-``degree`` map ``h: A -> B`` with, for every n and modulo relations,

        targets[n] = sign_prev * h_{n-1} d^A_n + sign_next * d^B_{n+degree} h_n,

    each ``h_n`` being a well-defined module map. The constraints form one
    linear system whose blocks only couple consecutive degrees; it is solved
    exactly by a forward sweep (retaining the full affine solution set for each
    block) and back substitution, so ``None`` means no solution exists.
    """
    R = A.ring
    degs = list(A.support)
    if not degs:
        return {}
    steps = []
    p_prev = ExactMatrix.zeros(R, 0, 1)
    K_prev = ExactMatrix.zeros(R, 0, 0)
    for n in degs:
        a, a_prev = A.gens(n), A.gens(n - 1)
        t, b = B.gens(n + degree - 1), B.gens(n + degree)
        rel_t = B.module(n + degree - 1).relations
        rel_b = B.module(n + degree).relations
        rel_a = A.module(n).relations
        nx_prev, nx, nw, nz = t * a_prev, b * a, rel_t.cols * a, rel_b.cols * rel_a.cols
        Ia, It, Ib = ExactMatrix.identity(R, a), ExactMatrix.identity(R, t), ExactMatrix.identity(R, b)
        m_prev = vstack(R, nx_prev, [kron(It, A.d(n).T) * sign_prev, ExactMatrix.zeros(R, b * rel_a.cols, nx_prev)])
        m_cur = vstack(R, nx, [kron(B.d(n + degree), Ia) * sign_next, kron(Ib, rel_a.T)])
        m_aux = vstack(R, nw + nz, [
            hstack(R, t * a, [-kron(rel_t, Ia), ExactMatrix.zeros(R, t * a, nz)]),
            hstack(R, b * rel_a.cols, [ExactMatrix.zeros(R, b * rel_a.cols, nw), -kron(rel_b, ExactMatrix.identity(R, rel_a.cols))]),
        ])
        tgt = targets.get(n)
        tv = vec(tgt) if tgt is not None else [R.zero] * (t * a)
        rhs = ExactMatrix._raw(R, t * a + b * rel_a.cols, 1, [[x] for x in tv] + [[R.zero]] * (b * rel_a.cols))
        rhs_red = rhs - m_prev @ p_prev
        rows = rhs.rows
        M = hstack(R, rows, [m_prev @ K_prev, m_cur, m_aux])
        z0 = solve(M, rhs_red)
        if z0 is None:
            return None
        k = K_prev.cols
        p_n = z0.submatrix(k, k + nx, 0, 1)
        ns = nullspace(M, _snf(M)) if M.cols else ExactMatrix.zeros(R, 0, 0)
        proj = ns.submatrix(k, k + nx, 0, ns.cols)
        K_n = column_space_basis(proj) if proj.cols and not proj.is_zero() else ExactMatrix.zeros(R, nx, 0)
        steps.append((n, m_prev, m_cur, m_aux, rhs, p_prev, K_prev, (b, a)))
        p_prev, K_prev = p_n, K_n

    sol = {}
    x = p_prev
    for idx in range(len(steps) - 1, -1, -1):
        n, m_prev, m_cur, m_aux, rhs, pp, Kp, shape = steps[idx]
        sol[n] = unvec(R, [r[0] for r in x.data], *shape)
        if idx == 0:
            break
        M = hstack(R, rhs.rows, [m_prev @ Kp, m_aux])
        r = rhs - m_prev @ pp - m_cur @ x
        w = solve(M, r)
        assert w is not None, "back substitution failed"
        x = pp + Kp @ w.submatrix(0, Kp.cols, 0, 1)
    return sol


def find_nullhomotopy(f: ChainMap) -> Homotopy | None:
    """A homotopy ``0 ~ f`` if one exists over the ring, else ``None``.

    Complete: all degrees are solved as one joint linear system together with
    the well-definedness constraints of each component.
    """
    comps = _solve_graded(f.source, f.target, 1, f.components(), 1, 1)
    if comps is None:
        return None
    return Homotopy(zero_map(f.source, f.target), f, comps)


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A homotopy ``f ~ g`` if one exists."""
    h = find_nullhomotopy(g - f)
    return None if h is None else Homotopy(f, g, h.components())


def find_two_homotopy(alpha: Homotopy, alpha2: Homotopy) -> TwoHomotopy | None:
    """A 2-homotopy ``L`` with ``alpha2 - alpha = d L - L d``, if one exists."""
    if not (alpha.start.equals(alpha2.start) and alpha.end.equals(alpha2.end)):
        raise ValueError("homotopies are not parallel")
    delta = {n: alpha2[n] - alpha[n] for n in alpha.degrees()}
    comps = _solve_graded(alpha.source, alpha.target, 2, delta, -1, 1)
    if comps is None:
        return None
    return TwoHomotopy(alpha, alpha2, comps)


def _greedy_contraction(C: ChainComplex) -> dict[int, ExactMatrix] | None:
    # Degree by degree: sigma_n lifts phi = 1 - sigma_{n-1} d_n through d_{n+1}.
    # Complete for any complex: d_n phi = 0, so for a contraction tau,
    # phi = d (tau phi) and a lift always exists. Earlier choices never block later ones.
    R = C.ring
    sigma = {}
    prev = ExactMatrix.zeros(R, C.gens(C.lo), C.gens(C.lo - 1))
    for n in C.support:
        phi = ExactMatrix.identity(R, C.gens(n)) - prev @ C.d(n)
        if C.is_free:
            s = solve(C.d(n + 1), phi)
        else:
            m = lift_homomorphism(C.dmap(n + 1), ModuleMap(C.module(n), C.module(n), phi, check=False))
            s = None if m is None else m.matrix
        if s is None:
            return None
        sigma[n] = s
        prev = s
    return sigma


def is_contractible(C: ChainComplex) -> Homotopy | None:
    """A contraction ``sigma: 0 ~ id_C`` (so ``id = sigma d + d sigma``), or ``None``."""
    if not C.is_free and any(not homology(C, n).is_zero() for n in C.support):
        return None  # contractible implies acyclic, and homology is cheap
    comps = _greedy_contraction(C)
    return None if comps is None else Homotopy(zero_map(C, C), identity(C), comps)


# ---------------------------------------------------------------------------
# homotopy equivalences


@dataclass(frozen=True)
class HomotopyEquivalence:
    """``f: A -> B`` with inverse ``g``, ``alpha: 1 ~ gf`` and ``beta: fg ~ 1``."""

    f: ChainMap
    g: ChainMap
    alpha: Homotopy
    beta: Homotopy

    def validate(self) -> list[Diagnostic]:
        out = validate(self.f) + validate(self.g) + validate(self.alpha) + validate(self.beta)
        gf, fg = compose(self.g, self.f), compose(self.f, self.g)
        if not (self.alpha.start.equals(identity(self.f.source)) and self.alpha.end.equals(gf)):
            out.append(Diagnostic("equivalence", 0, "alpha is not 1 ~ gf"))
        if not (self.beta.start.equals(fg) and self.beta.end.equals(identity(self.f.target))):
            out.append(Diagnostic("equivalence", 0, "beta is not fg ~ 1"))
        return out


def homotopy_equivalence_witness(f: ChainMap) -> HomotopyEquivalence | None:
    """Decide whether ``f`` is a homotopy equivalence by contracting its mapping cone.

    With ``Cf_n = A_{n-1} + B_n`` and a contraction ``sigma`` written in blocks
    ``[[p, q], [r, s]]``, the inverse is ``g = -q``, ``alpha_{n-1} = p_n`` and
    ``beta_n = s_n``; the result is re-validated before it is returned.
    """
    from .constructions import hcok

    A, B = f.source, f.target
    sigma = is_contractible(hcok(f).object)
    if sigma is None:
        return None
    g, alpha, beta = {}, {}, {}
    for n in range(min(A.lo, B.lo) - 1, max(A.hi, B.hi) + 2):
        blk = sigma[n]
        a_prev, a_n = A.gens(n - 1), A.gens(n)
        g[n] = -blk.submatrix(0, a_n, a_prev, blk.cols)
        alpha[n - 1] = blk.submatrix(0, a_n, 0, a_prev)
        beta[n] = blk.submatrix(a_n, blk.rows, a_prev, blk.cols)
    g = ChainMap(B, A, {n: m for n, m in g.items() if n in B.support})
    alpha = Homotopy(identity(A), compose(g, f), {n: m for n, m in alpha.items() if n in A.support})
    beta = Homotopy(compose(f, g), identity(B), {n: m for n, m in beta.items() if n in B.support})
    eq = HomotopyEquivalence(f, g, alpha, beta)
    problems = eq.validate()
    if problems:
        raise AssertionError(f"cone contraction produced an invalid equivalence: {problems}")
    return eq


def is_homotopy_equivalence(f: ChainMap) -> bool:
    from .constructions import hcok

    return is_contractible(hcok(f).object) is not None


@dataclass(frozen=True)
class AdjointEquivalence:
    """An equivalence whose triangle identities hold up to the 2-homotopies ``left``, ``right``.

    ``left: 0_f ~~ f.alpha + beta'.f`` and ``right: 0_g ~~ alpha.g + g.beta'``.
    """

    equivalence: HomotopyEquivalence
    left: TwoHomotopy
    right: TwoHomotopy


def adjointify(f: ChainMap, g: ChainMap, alpha: Homotopy, beta: Homotopy) -> AdjointEquivalence:
    """Replace ``beta`` by ``(-beta.fg - f.alpha.g) + beta`` and certify both triangle identities."""
    eq = HomotopyEquivalence(f, g, alpha, beta)
    problems = eq.validate()
    if problems:
        raise ValueError(f"inputs are not a homotopy equivalence: {problems}")
    fg = compose(f, g)
    beta2 = concat(concat(reverse(whisker(None, beta, fg)), reverse(whisker(f, alpha, g))), beta)
    tri_f = concat(whisker(f, alpha, None), whisker(None, beta2, f))
    tri_g = concat(whisker(None, alpha, g), whisker(g, beta2, None))
    left = find_two_homotopy(zero_homotopy(f), tri_f)
    right = find_two_homotopy(zero_homotopy(g), tri_g)
    if left is None or right is None:
        raise AssertionError("triangle identities could not be certified")
    return AdjointEquivalence(HomotopyEquivalence(f, g, alpha, beta2), left, right)
