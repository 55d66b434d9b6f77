"""Bounded variants: positive, negative and interval ``[0, p]`` chain complexes.

Each variant is a full subcategory of all complexes with a reflector ``L`` and
a coreflector ``R``. Inside a variant the h-kernel is ``R`` of the ambient
h-kernel and the h-cokernel is ``L`` of the ambient h-cokernel; concretely the
bottom degree of an h-kernel becomes a pullback and the top degree of an
h-cokernel becomes a pushout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chain import (
    ChainComplex,
    ChainMap,
    Homotopy,
    compose,
    homology,
    homology_data,
    homology_map,
    identity,
    validate,
    whisker,
    zero_map,
)
from .constructions import HCokernelData, HKernelData, factor_through_hcok, factor_through_hker, hcok, hker, shift
from .linalg import ExactMatrix, hstack, vstack
from .modules import (
    ModuleMap,
    PresentedModule,
    is_epi,
    is_mono,
    lift,
    module_cokernel,
    module_is_iso,
    module_kernel,
    module_pullback,
    module_pushout,
    solve,
)


@dataclass(frozen=True)
class BoundedVariant:
    """``kind`` is ``unbounded``, ``positive``, ``negative`` or ``interval`` (with top degree ``p >= 1``)."""

    kind: str = "unbounded"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("unbounded", "positive", "negative", "interval"):
            raise ValueError(f"unknown variant {self.kind!r}")
        if self.kind == "interval":
            if self.p is None or self.p < 1:
                raise ValueError("interval variant needs p >= 1")
        elif self.p is not None:
            raise ValueError("only the interval variant has a top degree")

    @classmethod
    def parse(cls, text: str) -> "BoundedVariant":
        """``unbounded``, ``positive``, ``negative`` or ``interval:P``."""
        if text.startswith("interval"):
            _, _, p = text.partition(":")
            if not p.strip().isdigit():
                raise ValueError(f"interval variant needs a top degree, e.g. 'interval:2' (got {text!r})")
            return cls("interval", int(p))
        return cls(text)

    def __str__(self):
        return f"interval:{self.p}" if self.kind == "interval" else self.kind

    @property
    def bottom(self) -> int | None:
        return 0 if self.kind in ("positive", "interval") else None

    @property
    def top(self) -> int | None:
        return {"negative": 0, "interval": self.p}.get(self.kind)

    def contains(self, C: ChainComplex) -> bool:
        if C.is_empty:
            return True
        if self.bottom is not None and C.lo < self.bottom:
            return False
        return self.top is None or C.hi <= self.top

    def degrees(self, *complexes: ChainComplex) -> range:
        """Degrees where homology can be nonzero for the given complexes."""
        nonempty = [C for C in complexes if not C.is_empty]
        lo = self.bottom if self.bottom is not None else min((C.lo for C in nonempty), default=0)
        hi = self.top if self.top is not None else max((C.hi for C in nonempty), default=-1)
        return range(lo, hi + 1)

    def check(self, *objs):
        for o in objs:
            cx = [o] if isinstance(o, ChainComplex) else [o.source, o.target]
            for C in cx:
                if not self.contains(C):
                    raise ValueError(f"complex supported in [{C.lo}, {C.hi}] lies outside the {self} variant")

    # -- constructions inside the variant ----------------------------------

    def hker(self, f: ChainMap) -> HKernelData:
        self.check(f)
        return variant_hker(f, self)

    def hcok(self, f: ChainMap) -> HCokernelData:
        self.check(f)
        return variant_hcok(f, self)

    def factor_through_hker(self, hk: HKernelData, x: ChainMap, xi: Homotopy) -> ChainMap:
        u = factor_through_hker(hker(hk.f), x, xi)
        return _lift_into(u, hk.object, self.bottom)

    def factor_through_hcok(self, hc: HCokernelData, y: ChainMap, eta: Homotopy) -> ChainMap:
        v = factor_through_hcok(hcok(hc.f), y, eta)
        return ChainMap(hc.object, y.target, {n: v[n] for n in hc.object.support})


UNBOUNDED = BoundedVariant("unbounded")
POSITIVE = BoundedVariant("positive")
NEGATIVE = BoundedVariant("negative")


def interval(p: int) -> BoundedVariant:
    return BoundedVariant("interval", p)


# ---------------------------------------------------------------------------
# truncations


@dataclass(frozen=True)
class Truncation:
    """A truncated complex with its comparison map (``R C -> C`` or ``C -> L C``)."""

    object: ChainComplex
    map: ChainMap


def truncate_R(C: ChainComplex, bottom: int | None = None, top: int | None = None) -> Truncation:
    """Coreflection: kernel of the outgoing differential at ``bottom``, cut off above ``top``."""
    R = C.ring
    mods = {n: C.module(n) for n in C.support
            if (bottom is None or n > bottom) and (top is None or n <= top)}
    diffs = {n: C.d(n) for n in mods if n - 1 in mods}
    incl = {n: ExactMatrix.identity(R, C.gens(n)) for n in mods}
    if bottom is not None and (top is None or bottom <= top) and C.gens(bottom):
        Z, inc = module_kernel(C.dmap(bottom))
        mods[bottom] = Z
        incl[bottom] = inc.matrix
        if bottom + 1 in mods:
            diffs[bottom + 1] = lift(inc, C.dmap(bottom + 1)).matrix
    T = ChainComplex(R, mods, diffs)
    return Truncation(T, ChainMap(T, C, {n: incl[n] for n in T.support}))


def truncate_L(C: ChainComplex, bottom: int | None = None, top: int | None = None) -> Truncation:
    """Reflection: cokernel of the incoming differential at ``top``, cut off below ``bottom``."""
    R = C.ring
    mods = {n: C.module(n) for n in C.support
            if (bottom is None or n >= bottom) and (top is None or n < top)}
    if top is not None and (bottom is None or top >= bottom) and C.gens(top):
        mods[top], _ = module_cokernel(C.dmap(top + 1))
    diffs = {n: C.d(n) for n in mods if n - 1 in mods}
    T = ChainComplex(R, mods, diffs)
    return Truncation(T, ChainMap(C, T, {n: ExactMatrix.identity(R, C.gens(n)) for n in T.support}))


def truncate(A: ChainComplex, variant: BoundedVariant) -> tuple[Truncation, Truncation]:
    """``(L A, R A)`` for the variant; both are identities when ``A`` already lies in it."""
    if variant.kind == "unbounded":
        return Truncation(A, identity(A)), Truncation(A, identity(A))
    b, t = variant.bottom, variant.top
    if variant.kind == "positive":
        return truncate_L(A, bottom=0), truncate_R(A, bottom=0)
    if variant.kind == "negative":
        return truncate_L(A, top=0), truncate_R(A, top=0)
    return truncate_L(A, bottom=b, top=t), truncate_R(A, bottom=b, top=t)


def _lift_into(u: ChainMap, RK: ChainComplex, bottom: int | None) -> ChainMap:
    """Factor an ambient map ``X -> K`` through ``R K -> K`` (only the bottom degree changes)."""
    comps = {}
    for n in u.source.support:
        if bottom is not None and n == bottom and RK.gens(n):
            _, inc = module_kernel(u.target.dmap(n))
            lifted = lift(inc, u.component(n))
            if lifted is None:
                raise ValueError("map does not factor through the truncation")
            comps[n] = lifted.matrix
        else:
            comps[n] = u[n]
    return ChainMap(u.source, RK, {n: m for n, m in comps.items() if n in RK.support})


def variant_hker(f: ChainMap, variant: BoundedVariant) -> HKernelData:
    amb = hker(f)
    if variant.bottom is None:
        return amb
    T = truncate_R(amb.object, bottom=variant.bottom)
    k = compose(amb.k, T.map)
    kappa = whisker(None, amb.kappa, T.map)
    return HKernelData(f, T.object, k, kappa)


def variant_hcok(f: ChainMap, variant: BoundedVariant) -> HCokernelData:
    amb = hcok(f)
    if variant.top is None:
        return amb
    T = truncate_L(amb.object, top=variant.top)
    c = compose(T.map, amb.c)
    gamma = whisker(T.map, amb.gamma, None)
    return HCokernelData(f, T.object, c, gamma)


def variant_shift(A: ChainComplex, k: int, variant: BoundedVariant) -> ChainComplex:
    """``Sigma`` (``k = 1``) or ``Omega`` (``k = -1``) computed inside the variant."""
    R = A.ring
    Z = ChainComplex.empty(R)
    if k == 1:
        return variant_hcok(zero_map(A, Z), variant).object
    if k == -1:
        return variant_hker(zero_map(Z, A), variant).object
    raise ValueError("only single shifts are defined in a bounded variant")


def counit_sigma_omega(A: ChainComplex) -> ChainMap:
    """The counit ``Sigma Omega A -> A`` in the positive variant.

    ``(Sigma Omega A)_1 = ker d_1``, ``(Sigma Omega A)_0 = 0`` and the map is the
    identity above degree 1 and the kernel inclusion in degree 1.
    """
    POSITIVE.check(A)
    OA = variant_shift(A, -1, POSITIVE)
    SOA = variant_hcok(zero_map(OA, ChainComplex.empty(A.ring)), POSITIVE).object
    _, inc = module_kernel(A.dmap(1)) if A.gens(1) else (None, None)
    comps = {}
    for n in SOA.support:
        comps[n] = inc.matrix if n == 1 else ExactMatrix.identity(A.ring, A.gens(n))
    return ChainMap(SOA, A, comps)


# ---------------------------------------------------------------------------
# deformation retract in the positive variant


@dataclass(frozen=True)
class DeformationRetract:
    """``u: X -> Kcf``, ``u': Kcf -> X`` with ``u' u = 1`` and ``sigma: u u' ~ 1``."""

    u: ChainMap
    u_prime: ChainMap
    sigma: Homotopy


def deformation_retract_data(f: ChainMap, variant: BoundedVariant = POSITIVE) -> DeformationRetract:
    """With ``(Kcf)_n = A_n + X_n + A_{n+1}``: ``u(x) = (fx, -x, 0)``, ``u'(a, x, a') = -x``, ``sigma(a, x, a') = (a', 0, 0)``.

    Degree 0 of ``Kcf`` is the kernel of ``(a, x, a') -> a + fx - da'``; the maps there
    are composed with or lifted through its inclusion.
    """
    if variant.kind != "positive":
        raise ValueError("deformation retract data is defined for the positive variant")
    variant.check(f)
    X, A, R = f.source, f.target, f.ring
    hc = variant_hcok(f, variant)
    hk = variant_hker(hc.c, variant)
    K = hk.object
    amb = hker(hc.c).object
    u = variant.factor_through_hker(hk, f, hc.gamma)
    inc = {n: (module_kernel(amb.dmap(n))[1].matrix if n == 0 else ExactMatrix.identity(R, amb.gens(n)))
           for n in K.support}

    def u_prime_amb(n):
        a, x, a1 = A.gens(n), X.gens(n), A.gens(n + 1)
        return hstack(R, x, [ExactMatrix.zeros(R, x, a), -ExactMatrix.identity(R, x), ExactMatrix.zeros(R, x, a1)])

    def sigma_amb(n):
        # (a, x, a') -> (a', 0, 0) into A_{n+1} + X_{n+1} + A_{n+2}
        a, x, a1 = A.gens(n), X.gens(n), A.gens(n + 1)
        top = hstack(R, a1, [ExactMatrix.zeros(R, a1, a + x), ExactMatrix.identity(R, a1)])
        return vstack(R, a + x + a1, [top, ExactMatrix.zeros(R, amb.gens(n + 1) - a1, a + x + a1)])

    u_prime = ChainMap(K, X, {n: u_prime_amb(n) @ inc[n] for n in K.support})
    uu = compose(u, u_prime)
    sigma = Homotopy(uu, identity(K), {n: sigma_amb(n) @ inc[n] for n in K.support})
    return DeformationRetract(u, u_prime, sigma)


# ---------------------------------------------------------------------------
# homology machinery in the interval variant


def is_exact_at(phi: ModuleMap, psi: ModuleMap) -> bool:
    """``M1 -phi-> M2 -psi-> M3`` is exact at ``M2``."""
    if not (psi @ phi).is_zero():
        return False
    C, _ = module_cokernel(phi)
    return is_mono(ModuleMap(C, psi.target, psi.matrix))


@dataclass
class ExactLadder:
    """A sequence of modules ``modules[0] -> modules[1] -> ...`` with labelled maps."""

    modules: list
    maps: list
    labels: list
    starts_with_zero: bool = False
    ends_with_zero: bool = False

    def exact_nodes(self) -> list[bool]:
        out = []
        if self.starts_with_zero:
            out.append(is_mono(self.maps[0]))
        for i in range(len(self.maps) - 1):
            out.append(is_exact_at(self.maps[i], self.maps[i + 1]))
        if self.ends_with_zero:
            out.append(is_epi(self.maps[-1]))
        return out

    def is_exact(self) -> bool:
        return all(self.exact_nodes())


@dataclass
class HomologyLadder:
    fibre: ExactLadder
    cofibre: ExactLadder


def _cycle_lift_map(A: ChainComplex, B: ChainComplex, n: int, m: int, matrix: ExactMatrix,
                    embed: ExactMatrix | None = None, ambient: PresentedModule | None = None) -> ModuleMap:
    """Homology map from a chain-level matrix that may land in an ambient module containing ``B_m``."""
    if embed is None:
        return homology_map(A, B, n, m, matrix)
    HA, _, iA = homology_data(A, n)
    HB, ZB, iB = homology_data(B, m)
    R = A.ring
    img = matrix @ iA.matrix
    sol = solve(hstack(R, ambient.gens, [embed @ iB.matrix, ambient.relations]), img)
    if sol is None:
        raise ValueError("matrix does not send cycles into the truncated cycles")
    return ModuleMap(HA, HB, sol.submatrix(0, ZB.gens, 0, HA.gens))


def homology_ladders(f: ChainMap, variant: BoundedVariant) -> HomologyLadder:
    """The H-fibre and H-cofibre sequences of ``f``, each verified exact by :meth:`ExactLadder.is_exact`."""
    if variant.kind != "interval":
        raise ValueError("homology ladders are defined for the interval variant")
    variant.check(f)
    A, B, R, p = f.source, f.target, f.ring, variant.p
    hk, hc = variant_hker(f, variant), variant_hcok(f, variant)
    K, C = hk.object, hc.object
    ambK = hker(f).object
    _, incK0 = module_kernel(ambK.dmap(0))

    fm, fl = [], []
    fmods = []
    for n in range(p, -1, -1):
        fmods += [homology(K, n), homology(A, n), homology(B, n)]
        fm += [homology_map(K, A, n, n, hk.k[n]), homology_map(A, B, n, n, f[n])]
        fl += [f"H{n}(kf)", f"H{n}(f)"]
        if n > 0:
            # b -> (0, b) into (Kf)_{n-1} = A_{n-1} + B_n
            d = _fibre_connecting(A, B, n)
            if n - 1 == 0:
                fm.append(_cycle_lift_map(B, K, n, 0, d, incK0.matrix, ambK.module(0)))
            else:
                fm.append(homology_map(B, K, n, n - 1, d))
            fl.append(f"d{n}")
    cm, cl, cmods = [], [], []
    for n in range(p, -1, -1):
        cmods += [homology(A, n), homology(B, n), homology(C, n)]
        cm += [homology_map(A, B, n, n, f[n]), homology_map(B, C, n, n, hc.c[n])]
        cl += [f"H{n}(f)", f"H{n}(cf)"]
        if n > 0:
            cm.append(homology_map(C, A, n, n - 1, _cofibre_connecting(A, B, n)))
            cl.append(f"delta{n}")
    return HomologyLadder(ExactLadder(fmods, fm, fl, starts_with_zero=True),
                          ExactLadder(cmods, cm, cl, ends_with_zero=True))


def _fibre_connecting(A: ChainComplex, B: ChainComplex, n: int) -> ExactMatrix:
    R = A.ring
    top = ExactMatrix.zeros(R, A.gens(n - 1), B.gens(n))
    return ExactMatrix._raw(R, A.gens(n - 1) + B.gens(n), B.gens(n),
                            [*top.data, *ExactMatrix.identity(R, B.gens(n)).data])


def _cofibre_connecting(A: ChainComplex, B: ChainComplex, n: int) -> ExactMatrix:
    # (a, b) -> -a on (Cf)_n = A_{n-1} + B_n
    R = A.ring
    return hstack(R, A.gens(n - 1), [-ExactMatrix.identity(R, A.gens(n - 1)), ExactMatrix.zeros(R, A.gens(n - 1), B.gens(n))])


@dataclass
class WeakReport:
    is_weak_equivalence: bool | None = None
    is_weakly_null: bool | None = None
    detail: dict = field(default_factory=dict)


def weak_tests(x, variant: BoundedVariant) -> WeakReport:
    """Homology-level tests: weakly null objects and weak equivalences.

    For a map the detail records, per degree, whether ``H_n(f)`` is iso, mono
    and epi, together with conditions (a) ``Kf weakly null`` and (a*) ``Cf weakly null``.
    """
    variant.check(x)
    if isinstance(x, ChainComplex):
        degs = variant.degrees(x)
        detail = {n: homology(x, n).describe() for n in degs}
        return WeakReport(is_weakly_null=all(homology(x, n).is_zero() for n in degs), detail=detail)
    f = x
    degs = variant.degrees(f.source, f.target)
    detail = {}
    for n in degs:
        h = homology_map(f.source, f.target, n, n, f[n])
        detail[n] = {"iso": module_is_iso(h), "mono": is_mono(h), "epi": is_epi(h)}
    iso = all(d["iso"] for d in detail.values())
    rep = WeakReport(is_weak_equivalence=iso, detail=detail)
    if variant.kind == "interval":
        p = variant.p
        K = variant_hker(f, variant).object
        C = variant_hcok(f, variant).object
        cond_a = all(detail[n]["iso"] for n in degs if n > 0) and detail[0]["mono"]
        cond_a_star = all(detail[n]["iso"] for n in degs if n < p) and detail[p]["epi"]
        detail["a"] = (cond_a, weak_tests(K, variant).is_weakly_null)
        detail["a*"] = (cond_a_star, weak_tests(C, variant).is_weakly_null)
    return rep


@dataclass(frozen=True)
class BoundaryHomology:
    H: ChainComplex
    bottom: PresentedModule
    top: PresentedModule | None
    bottom_iso: ModuleMap
    top_iso: ModuleMap | None


def boundary_homology(s, variant: BoundedVariant) -> BoundaryHomology:
    """Degree-0 and top components of ``H(f, g; alpha)`` in a bounded variant.

    In the positive and interval variants ``H_0 = pb(g_0, d_1^Y)`` (equal
    presentations); in the interval variant ``H_p = po(d_p^X, f_p)`` up to the
    explicit isomorphism ``(x, a) -> (-x, a)``; in the negative variant ``H_0 =
    po(d_0^X, f_0)`` likewise.
    """
    from .exactness import homotopical_homology

    HH = homotopical_homology(s, variant)
    H, R = HH.H, s.f.ring
    X, A, Y = s.f.source, s.f.target, s.g.target
    out_bottom = out_top = None
    iso_b = iso_t = None
    if variant.bottom is not None:
        P, _, _ = module_pullback(s.g.component(0), Y.dmap(1))
        iso_b = ModuleMap(H.module(0), P, ExactMatrix.identity(R, P.gens))
        out_bottom = P
    t = variant.top
    if t is not None:
        P, _, _ = module_pushout(X.dmap(t), s.f.component(t))
        x, a = X.gens(t - 1), A.gens(t)
        m = ExactMatrix(R, x + a, x + a, [[R((-1 if i < x else 1) if i == j else 0) for j in range(x + a)] for i in range(x + a)])
        iso_t = ModuleMap(H.module(t), P, m)
        out_top = P
        if variant.bottom is None:
            out_bottom, iso_b, out_top, iso_t = out_top, iso_t, None, None
    return BoundaryHomology(H, out_bottom, out_top, iso_b, iso_t)
