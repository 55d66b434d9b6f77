"""h-differential sequences, homotopical homology and the exactness classifier."""

from __future__ import annotations

from dataclasses import dataclass, field

from .bounded import UNBOUNDED, BoundedVariant, weak_tests
from .chain import (
    ChainComplex,
    ChainMap,
    Diagnostic,
    GradedMap,
    Homotopy,
    TwoHomotopy,
    compose,
    concat,
    find_nullhomotopy,
    find_two_homotopy,
    homology_map,
    homotopy_equivalence_witness,
    identity,
    is_contractible,
    reverse,
    validate,
    whisker,
)
from .constructions import HCokernelData, HKernelData
from .linalg import block
from .modules import direct_sum, is_epi, is_mono, module_is_iso


@dataclass(frozen=True)
class HDiffSequence:
    """``X -f-> A -g-> Y`` with ``alpha: 0 ~ g f``."""

    f: ChainMap
    g: ChainMap
    alpha: Homotopy

    @property
    def X(self) -> ChainComplex:
        return self.f.source

    @property
    def A(self) -> ChainComplex:
        return self.f.target

    @property
    def Y(self) -> ChainComplex:
        return self.g.target

    def validate(self) -> list[Diagnostic]:
        if self.f.target != self.g.source:
            return [Diagnostic("shape", 0, "f and g are not composable")]
        out = validate(self.f) + validate(self.g) + validate(self.alpha)
        if self.alpha.source != self.X or self.alpha.target != self.Y:
            return out + [Diagnostic("shape", 0, "alpha must be a homotopy X -> Y")]
        if not self.alpha.start.is_zero():
            out.append(Diagnostic("sequence", 0, "alpha must start at the zero map"))
        if not self.alpha.end.equals(compose(self.g, self.f)):
            out.append(Diagnostic("sequence", 0, "alpha must end at g f"))
        return out

    def check(self):
        problems = self.validate()
        if problems:
            raise ValueError(f"invalid h-differential sequence: {problems[0]}")


def _eq(a: GradedMap, b: GradedMap) -> bool:
    return a.equals(b)


@dataclass
class SequenceDiagram:
    sequence: HDiffSequence
    variant: BoundedVariant
    hker_g: HKernelData
    hcok_f: HCokernelData
    hker_cf: HKernelData
    hcok_kg: HCokernelData
    u_alpha: ChainMap
    v_alpha: ChainMap
    u_f: ChainMap
    v_g: ChainMap
    u: ChainMap
    v: ChainMap
    lam: Homotopy
    mu: Homotopy
    equations: dict = field(default_factory=dict)

    def all_hold(self) -> bool:
        return all(self.equations.values())


def sequence_diagram(s: HDiffSequence, variant: BoundedVariant = UNBOUNDED) -> SequenceDiagram:
    """Build ``u_alpha, v_alpha, u_f, v_g, u = k(v_alpha), v = c(u_alpha)`` and verify their defining equations."""
    s.check()
    V = variant
    V.check(s.f, s.g)
    f, g, alpha = s.f, s.g, s.alpha
    hk_g, hc_f = V.hker(g), V.hcok(f)
    u_alpha = V.factor_through_hker(hk_g, f, alpha)
    v_alpha = V.factor_through_hcok(hc_f, g, alpha)
    hk_cf, hc_kg = V.hker(hc_f.c), V.hcok(hk_g.k)
    u_f = V.factor_through_hker(hk_cf, f, hc_f.gamma)
    v_g = V.factor_through_hcok(hc_kg, g, hk_g.kappa)
    lam = whisker(v_alpha, hk_cf.kappa, None)
    u = V.factor_through_hker(hk_g, hk_cf.k, lam)
    mu = whisker(None, hc_kg.gamma, u_alpha)
    v = V.factor_through_hcok(hc_f, hc_kg.c, mu)
    eq = {
        "kg.u_alpha = f": _eq(compose(hk_g.k, u_alpha), f),
        "kappa_g.u_alpha = alpha": _eq(whisker(None, hk_g.kappa, u_alpha), alpha),
        "v_alpha.cf = g": _eq(compose(v_alpha, hc_f.c), g),
        "v_alpha.gamma_f = alpha": _eq(whisker(v_alpha, hc_f.gamma, None), alpha),
        "kcf.u_f = f": _eq(compose(hk_cf.k, u_f), f),
        "kappa_cf.u_f = gamma_f": _eq(whisker(None, hk_cf.kappa, u_f), hc_f.gamma),
        "v_g.ckg = g": _eq(compose(v_g, hc_kg.c), g),
        "v_g.gamma_ckg = kappa_g": _eq(whisker(v_g, hc_kg.gamma, None), hk_g.kappa),
        "kg.u = kcf": _eq(compose(hk_g.k, u), hk_cf.k),
        "kappa_g.u = v_alpha.kappa_cf": _eq(whisker(None, hk_g.kappa, u), lam),
        "v.cf = ckg": _eq(compose(v, hc_f.c), hc_kg.c),
        "v.gamma_f = gamma_ckg.u_alpha": _eq(whisker(v, hc_f.gamma, None), mu),
        "u.u_f = u_alpha": _eq(compose(u, u_f), u_alpha),
        "v_g.v = v_alpha": _eq(compose(v_g, v), v_alpha),
    }
    for m in (u_alpha, v_alpha, u_f, v_g, u, v):
        if validate(m):
            raise AssertionError("sequence diagram produced an invalid chain map")
    return SequenceDiagram(s, V, hk_g, hc_f, hk_cf, hc_kg, u_alpha, v_alpha, u_f, v_g, u, v, lam, mu, eq)


@dataclass
class HomotopicalHomology:
    """``H = C(u_alpha) = K(v_alpha)`` with ``cu: Kg -> H`` and ``kv: H -> Cf``."""

    H: ChainComplex
    cu: ChainMap
    kv: ChainMap
    gamma_u: Homotopy
    kappa_v: Homotopy
    diagram: SequenceDiagram


def homotopical_homology(s: HDiffSequence, variant: BoundedVariant = UNBOUNDED,
                         diagram: SequenceDiagram | None = None) -> HomotopicalHomology:
    """Compute ``hcok(u_alpha)`` and ``hker(v_alpha)`` independently and require them to coincide exactly."""
    D = diagram or sequence_diagram(s, variant)
    V = D.variant
    hc = V.hcok(D.u_alpha)
    hk = V.hker(D.v_alpha)
    if hc.object != hk.object:
        raise AssertionError("C(u_alpha) and K(v_alpha) differ")
    return HomotopicalHomology(hc.object, hc.c, hk.k, hc.gamma, hk.kappa, D)


def homology_formula(s: HDiffSequence) -> ChainComplex:
    """``H_n = X_{n-1} + A_n + Y_{n+1}`` with ``d(x, a, y) = (-dx, -fx + da, -alpha x + g a - dy)``."""
    f, g, al = s.f, s.g, s.alpha
    X, A, Y, R = s.X, s.A, s.Y, f.ring
    nz = [C for C in (X, A, Y) if not C.is_empty]
    if not nz:
        return ChainComplex.empty(R)
    lo = min([X.lo + 1, A.lo, Y.lo - 1][i] for i, C in enumerate((X, A, Y)) if not C.is_empty)
    hi = max([X.hi + 1, A.hi, Y.hi - 1][i] for i, C in enumerate((X, A, Y)) if not C.is_empty)
    mods = {n: direct_sum(R, [X.module(n - 1), direct_sum(R, [A.module(n), Y.module(n + 1)])]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        rs = [X.gens(n - 2), A.gens(n - 1), Y.gens(n)]
        cs = [X.gens(n - 1), A.gens(n), Y.gens(n + 1)]
        diffs[n] = block(R, rs, cs, {(0, 0): -X.d(n - 1), (1, 0): -f[n - 1], (1, 1): A.d(n),
                                     (2, 0): -al[n - 1], (2, 1): g[n], (2, 2): -Y.d(n + 1)})
    return ChainComplex(R, mods, diffs)


@dataclass
class Comparison:
    i: ChainMap
    relations: dict
    rho: Homotopy
    rho_found: Homotopy | None


def comparison_i(s: HDiffSequence, variant: BoundedVariant = UNBOUNDED,
                 hh: HomotopicalHomology | None = None) -> Comparison:
    """The comparison ``i: C(u_alpha) -> K(v_alpha)``, which is the identity here.

    ``rho = i.gamma_u`` is the nullhomotopy of ``x u_alpha`` (``x = i cu``) lying over
    ``gamma_f``; ``rho_found`` is an independent witness from the lifting solver.
    """
    hh = hh or homotopical_homology(s, variant)
    D = hh.diagram
    i = identity(hh.H)
    x = compose(i, hh.cu)
    rho = whisker(i, hh.gamma_u, None)
    rel = {
        "kv.i.cu = cf.kg": _eq(compose(hh.kv, x), compose(D.hcok_f.c, D.hker_g.k)),
        "kv.i.gamma_u = gamma_f": _eq(whisker(hh.kv, rho, None), D.hcok_f.gamma),
        "kappa_v.i.cu = kappa_g": _eq(whisker(None, hh.kappa_v, x), D.hker_g.kappa),
    }
    return Comparison(i, rel, rho, find_nullhomotopy(compose(x, D.u_alpha)))


# ---------------------------------------------------------------------------
# classifier

FLAG_NAMES = ("pseudo", "left", "right", "strong", "h", "weak")


@dataclass
class ExactnessReport:
    variant: BoundedVariant
    flags: dict
    witnesses: dict = field(default_factory=dict)
    refutations: dict = field(default_factory=dict)
    weak_conditions: dict = field(default_factory=dict)
    cross_checks: dict = field(default_factory=dict)

    def vector(self) -> tuple:
        return tuple(self.flags[k] for k in FLAG_NAMES)

    def implications_hold(self) -> bool:
        F = self.flags
        ok = F["strong"] == (F["left"] and F["right"])
        ok &= not F["strong"] or F["h"]
        ok &= not F["h"] or F["pseudo"]
        if F["weak"] is not None:
            ok &= not F["h"] or F["weak"]
        return bool(ok)


def _equivalence(name: str, m: ChainMap, wit: dict, ref: dict) -> bool:
    w = homotopy_equivalence_witness(m)
    if w is None:
        ref[name] = "mapping cone is not contractible"
        return False
    wit[name] = w
    return True


def weak_conditions(D: SequenceDiagram, hh: HomotopicalHomology) -> dict:
    """The six conditions (a), (b), (c), (a'), (b'), (c') of weak exactness.

    Conditions (b) and (b') use the top degree ``p`` and are only evaluated for
    interval variants.
    """
    V = D.variant
    cond = {
        "a": weak_tests(D.v, V).is_weak_equivalence,
        "c": weak_tests(hh.H, V).is_weakly_null,
        "a'": weak_tests(D.u, V).is_weak_equivalence,
        "c'": weak_tests(hh.H, V).is_weakly_null,
    }
    if V.kind == "interval":
        p = V.p
        ua, va = D.u_alpha, D.v_alpha
        b = True
        for n in range(0, p + 1):
            h = homology_map(ua.source, ua.target, n, n, ua[n])
            b &= module_is_iso(h) if n < p else is_epi(h)
        b2 = True
        for n in range(0, p + 1):
            h = homology_map(va.source, va.target, n, n, va[n])
            b2 &= module_is_iso(h) if n > 0 else is_mono(h)
        cond["b"], cond["b'"] = bool(b), bool(b2)
    return cond


def classify_exactness(s: HDiffSequence, variant: BoundedVariant = UNBOUNDED) -> ExactnessReport:
    """Decide pseudo, left, right, strong, h and weak exactness from the definitions.

    Homotopy equivalences are decided by contracting mapping cones. In the
    unbounded variant the h flag is cross-checked against contractibility of
    ``H(f, g; alpha)``.
    """
    D = sequence_diagram(s, variant)
    hh = homotopical_homology(s, variant, D)
    wit, ref = {}, {}
    flags = {}
    gf = find_nullhomotopy(compose(s.g, s.f))
    ck = find_nullhomotopy(compose(D.hcok_f.c, D.hker_g.k))
    flags["pseudo"] = gf is not None and ck is not None
    if flags["pseudo"]:
        wit["pseudo"] = (gf, ck)
    else:
        ref["pseudo"] = "g f is not nullhomotopic" if gf is None else "cf kg is not nullhomotopic"
    flags["left"] = _equivalence("left", D.u_alpha, wit, ref)
    flags["right"] = _equivalence("right", D.v_alpha, wit, ref)
    flags["strong"] = flags["left"] and flags["right"]
    hu = _equivalence("h:u", D.u, wit, ref)
    hv = _equivalence("h:v", D.v, wit, ref)
    flags["h"] = hu and hv
    conds = weak_conditions(D, hh)
    flags["weak"] = conds["c"]
    report = ExactnessReport(variant, flags, wit, ref, conds)
    if variant.kind == "unbounded":
        report.cross_checks["h = H contractible"] = flags["h"] == (is_contractible(hh.H) is not None)
    report.cross_checks["weak conditions agree"] = len(set(conds.values())) == 1
    return report


# ---------------------------------------------------------------------------
# coherent equivalence


@dataclass
class EquivalenceData:
    """Vertical maps ``u1: X -> X'``, ``u: A -> A'``, ``u2: Y -> Y'`` with ``phi: u f ~ x u1`` and ``psi: u2 g ~ y u``."""

    u1: ChainMap
    u: ChainMap
    u2: ChainMap
    phi: Homotopy
    psi: Homotopy


@dataclass
class EquivalenceCertificate:
    ok: bool
    reasons: list
    lam: TwoHomotopy | None = None
    equivalences: tuple = ()


def coherent_equivalence_check(s1: HDiffSequence, s2: HDiffSequence, data: EquivalenceData) -> EquivalenceCertificate:
    """Check ``beta.u1 - y.phi ~~ u2.alpha + psi.f`` and that ``u1, u, u2`` are homotopy equivalences."""
    f, g, alpha = s1.f, s1.g, s1.alpha
    x, y, beta = s2.f, s2.g, s2.alpha
    d = data
    shapes = [(d.u1, s1.X, s2.X), (d.u, s1.A, s2.A), (d.u2, s1.Y, s2.Y)]
    for m, src, tgt in shapes:
        if m.source != src or m.target != tgt:
            raise ValueError("equivalence data does not match the sequences")
    reasons = []
    for name, h, start, end in (("phi", d.phi, compose(d.u, f), compose(x, d.u1)),
                                ("psi", d.psi, compose(d.u2, g), compose(y, d.u))):
        if validate(h) or not (h.start.equals(start) and h.end.equals(end)):
            reasons.append(f"{name} is not a valid homotopy of the required shape")
    eqs = tuple(homotopy_equivalence_witness(m) for m in (d.u1, d.u, d.u2))
    for name, w in zip(("u'", "u", "u''"), eqs):
        if w is None:
            reasons.append(f"{name} is not a homotopy equivalence")
    if reasons:
        return EquivalenceCertificate(False, reasons, None, eqs)
    lhs = concat(whisker(None, beta, d.u1), reverse(whisker(y, d.phi, None)))
    rhs = concat(whisker(d.u2, alpha, None), whisker(None, d.psi, f))
    lam = find_two_homotopy(lhs, rhs)
    if lam is None:
        return EquivalenceCertificate(False, ["coherence 2-homotopy does not exist"], None, eqs)
    return EquivalenceCertificate(True, [], lam, eqs)
