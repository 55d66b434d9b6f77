"""Seeded random instances: matrices, complexes, chain maps, h-differential sequences.

Every random chain map or sequence is a random lattice point of the linear
system its defining equations span, so the generators never emit invalid
data. All entry points take a ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounded import BoundedVariant, UNBOUNDED
from .chain import (
    ChainComplex,
    ChainMap,
    Homotopy,
    compose,
    find_homotopy,
    homotopy_equivalence_witness,
    identity,
    validate,
    whisker,
    zero_map,
)
from .exactness import HDiffSequence
from .linalg import ExactMatrix, block_diag, kron, nullspace, unvec, vstack
from .modules import ModuleMap, PresentedModule
from .rings import Ring, ZZ


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _elem(ring: Ring, rng: np.random.Generator, bound: int, nonzero: bool = False):
    lo = -bound
    while True:
        x = ring.reduce(int(rng.integers(lo, bound + 1)))
        if not nonzero or x != ring.zero:
            return x


def random_matrix(ring: Ring, rng, rows: int, cols: int, bound: int = 9, density: float = 1.0) -> ExactMatrix:
    rng = rng_from(rng)
    data = [[_elem(ring, rng, bound) if rng.random() < density else ring.zero for _ in range(cols)] for _ in range(rows)]
    return ExactMatrix(ring, rows, cols, data)


def random_unimodular(ring: Ring, rng, n: int, steps: int | None = None) -> tuple[ExactMatrix, ExactMatrix]:
    """An invertible ``n x n`` matrix and its inverse, built from elementary moves."""
    rng = rng_from(rng)
    P = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    red = ring.reduce
    for _ in range(n if steps is None else steps):
        if n < 2:
            break
        i, j = (int(v) for v in rng.choice(n, 2, replace=False))
        c = red(int(rng.choice([-1, 1])))
        # P <- E P adds c * row j to row i; Q <- Q E^-1 subtracts c * column i from column j
        P[i] = [red(a + c * b) for a, b in zip(P[i], P[j])]
        for row in Q:
            row[j] = red(row[j] - c * row[i])
    if n and rng.random() < 0.5:
        k = int(rng.integers(n))
        P[k] = [red(-x) for x in P[k]]
        for row in Q:
            row[k] = red(-row[k])
    return ExactMatrix(ring, n, n, P), ExactMatrix(ring, n, n, Q)


# ---------------------------------------------------------------------------
# complexes


def _divisor(ring: Ring, rng, unit: bool) -> object:
    if unit:
        return ring.reduce(int(rng.choice([-1, 1])))
    if ring.is_field:
        return _elem(ring, rng, 3, nonzero=True)
    return int(rng.choice([-3, -2, -1, 1, 2, 3]))


def random_complex(ring: Ring, rng, bottom: int = 0, top: int | None = None, max_rank: int = 3,
                   torsion: bool = False, contractible: bool = False) -> ChainComplex:
    """Sum of elementary pieces in degrees ``[bottom, top]`` after a random change of basis.

    Pieces are ``R`` alone (free homology), ``R -d-> R`` across two degrees and,
    with ``torsion`` over Z, ``Z/m`` alone. ``contractible`` keeps only unit pairs,
    including ``Z/m -1-> Z/m`` when ``torsion`` is also set.
    """
    rng = rng_from(rng)
    if top is None:
        top = bottom + int(rng.integers(0, 4))
    degrees = list(range(bottom, top + 1))
    # generator lists per degree: (kind, partner index or divisor)
    gens: dict[int, list] = {n: [] for n in degrees}
    pairs = []
    for n in degrees:
        if not contractible and rng.random() < 0.5:
            gens[n].append(("free", None))
        if torsion and ring == ZZ and not contractible and rng.random() < 0.3:
            gens[n].append(("tors", int(rng.choice([2, 3, 4]))))
        if n > bottom:
            for _ in range(int(rng.integers(0, 2 if contractible else 3))):
                if len(gens[n]) >= max_rank or len(gens[n - 1]) >= max_rank:
                    break
                d = _divisor(ring, rng, unit=contractible)
                pairs.append((n, len(gens[n]), len(gens[n - 1]), d))
                gens[n].append(("hi", None))
                gens[n - 1].append(("lo", None))
            if (contractible and torsion and ring == ZZ and rng.random() < 0.4
                    and len(gens[n]) < max_rank and len(gens[n - 1]) < max_rank):
                m = int(rng.choice([2, 3, 4]))
                pairs.append((n, len(gens[n]), len(gens[n - 1]), ring.one))
                gens[n].append(("tors", m))
                gens[n - 1].append(("tors", m))
    return _assemble(ring, rng, degrees, gens, pairs)


def _assemble(ring, rng, degrees, gens, pairs) -> ChainComplex:
    modules, diffs = {}, {}
    bases = {}
    for n in degrees:
        g = len(gens[n])
        rel_cols = [k for k, (kind, _) in enumerate(gens[n]) if kind == "tors"]
        rel = [[ring.zero] * len(rel_cols) for _ in range(g)]
        for c, k in enumerate(rel_cols):
            rel[k][c] = gens[n][k][1]
        P, Pinv = random_unimodular(ring, rng, g)
        bases[n] = (P, Pinv)
        modules[n] = PresentedModule(ring, P @ ExactMatrix(ring, g, len(rel_cols), rel))
    for n in degrees[1:]:
        D = [[ring.zero] * len(gens[n]) for _ in range(len(gens[n - 1]))]
        for (m, hi, lo, d) in pairs:
            if m == n:
                D[lo][hi] = d
        D = ExactMatrix(ring, len(gens[n - 1]), len(gens[n]), D)
        diffs[n] = bases[n - 1][0] @ D @ bases[n][1]
    return ChainComplex(ring, modules, diffs)


# ---------------------------------------------------------------------------
# linear systems in matrix unknowns


class _System:
    """Equations ``sum P_i X_i Q_i = 0`` in matrix unknowns, solved by a random lattice point."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.blocks: dict = {}
        self.size = 0
        self.rows: list = []

    def unknown(self, key, rows: int, cols: int) -> None:
        self.blocks[key] = (self.size, rows, cols)
        self.size += rows * cols

    def equation(self, rows: int, cols: int, terms) -> None:
        if rows * cols == 0:
            return
        R = self.ring
        parts = []
        for P, key, Q in terms:
            off, r, c = self.blocks[key]
            P = ExactMatrix.identity(R, r) if P is None else P
            Q = ExactMatrix.identity(R, c) if Q is None else Q
            parts.append((off, kron(P, Q.T)))
        self.rows.append((rows * cols, parts))

    def matrix(self) -> ExactMatrix:
        R = self.ring
        M = []
        for height, parts in self.rows:
            block = [[R.zero] * self.size for _ in range(height)]
            for off, K in parts:
                for i, row in enumerate(K.data):
                    Mi = block[i]
                    for j, x in enumerate(row):
                        if x:
                            Mi[off + j] = R.reduce(Mi[off + j] + x)
            M.extend(block)
        return ExactMatrix(R, len(M), self.size, M)

    def random_solution(self, rng, bound: int = 1) -> dict:
        R = self.ring
        if self.rows:
            N = nullspace(self.matrix())
        else:
            N = ExactMatrix.identity(R, self.size)
        c = [_elem(R, rng, bound) for _ in range(N.cols)]
        x = [R.reduce(sum(a * b for a, b in zip(row, c))) for row in N.data]
        return {k: unvec(R, x[off:off + r * c_], r, c_) for k, (off, r, c_) in self.blocks.items()}


def _rel(C: ChainComplex, n: int) -> ExactMatrix:
    return C.module(n).relations


def _add_map_equations(S: _System, A: ChainComplex, B: ChainComplex, key, degree: int = 0, chain: bool = True) -> None:
    """Unknowns ``key(n)`` for ``A_n -> B_{n+degree}``, well defined modulo relations, and a chain map when asked."""
    R = S.ring
    for n in A.support:
        S.unknown((key, n), B.gens(n + degree), A.gens(n))
    for n in A.support:
        rA, rB = _rel(A, n), _rel(B, n + degree)
        if rA.cols and B.gens(n + degree):
            if rB.cols:
                S.unknown((key, "w", n), rB.cols, rA.cols)
            terms = [(None, (key, n), rA)]
            if rB.cols:
                terms.append((rB * -1, (key, "w", n), None))
            S.equation(B.gens(n + degree), rA.cols, terms)
    if not chain:
        return
    for n in A.support:
        if n - 1 not in A.support and n + degree - 1 not in B.support:
            continue
        rows, cols = B.gens(n + degree - 1), A.gens(n)
        terms = []
        if B.gens(n + degree):
            terms.append((B.d(n + degree), (key, n), None))
        if A.gens(n - 1):
            terms.append((ExactMatrix.scalar(R, rows, -1), (key, n - 1), A.d(n)))
        r = _rel(B, n + degree - 1)
        if r.cols:
            S.unknown((key, "z", n), r.cols, cols)
            terms.append((r * -1, (key, "z", n), None))
        if terms:
            S.equation(rows, cols, terms)


def random_chain_map(A: ChainComplex, B: ChainComplex, rng, bound: int = 1) -> ChainMap:
    rng = rng_from(rng)
    S = _System(A.ring)
    _add_map_equations(S, A, B, "f")
    sol = S.random_solution(rng, bound)
    return ChainMap(A, B, {n: sol[("f", n)] for n in A.support if B.gens(n)})


def random_graded_map(A: ChainComplex, B: ChainComplex, degree: int, rng, bound: int = 2) -> dict:
    """Well-defined components of a random degree-``degree`` map, keyed by source degree."""
    rng = rng_from(rng)
    S = _System(A.ring)
    _add_map_equations(S, A, B, "h", degree, chain=False)
    sol = S.random_solution(rng, bound)
    return {n: sol[("h", n)] for n in A.support if B.gens(n + degree)}


def random_homotopic(f: ChainMap, rng, bound: int = 1) -> tuple[ChainMap, Homotopy]:
    """``g = f + h d + d h`` for a random well-defined degree-one ``h``, with ``h: f ~ g``."""
    A, B = f.source, f.target
    h = random_graded_map(A, B, 1, rng, bound)
    R = A.ring
    comps = {}
    for n in A.support:
        m = f[n]
        if n - 1 in h and A.gens(n - 1):
            m = m + h[n - 1] @ A.d(n)
        if n in h and B.gens(n + 1):
            m = m + B.d(n + 1) @ h[n]
        comps[n] = m
    g = ChainMap(A, B, comps)
    return g, Homotopy(f, g, h)


def random_finite_module(ring: Ring, rng, max_order: int = 64, max_gens: int = 3) -> PresentedModule:
    """A presented module of order at most ``max_order`` (over Z or Z/p)."""
    rng = rng_from(rng)
    if ring.kind == "Q":
        raise ValueError("modules over Q are never finite unless zero")
    while True:
        g = int(rng.integers(0, max_gens + 1))
        if ring.kind == "Zp":
            M = PresentedModule(ring, random_matrix(ring, rng, g, int(rng.integers(0, g + 2)), bound=ring.p))
        else:
            # a square relation block keeps the module finite; extra columns add relations
            extra = int(rng.integers(0, 2))
            M = PresentedModule(ring, random_matrix(ring, rng, g, g + extra, bound=4))
        n = M.order()
        if n is not None and n <= max_order:
            return M


def random_module_map(M: PresentedModule, N: PresentedModule, rng, bound: int = 3) -> "ModuleMap":
    """A random well-defined map ``M -> N``."""
    rng = rng_from(rng)
    R = M.ring
    S = _System(R)
    S.unknown("f", N.gens, M.gens)
    rM, rN = M.relations, N.relations
    if rM.cols and N.gens:
        terms = [(None, "f", rM)]
        if rN.cols:
            S.unknown("w", rN.cols, rM.cols)
            terms.append((rN * -1, "w", None))
        S.equation(N.gens, rM.cols, terms)
    return ModuleMap(M, N, S.random_solution(rng, bound)["f"])


# ---------------------------------------------------------------------------
# sequences


def _contractible_sum(C: ChainComplex, rng, contractible: bool = True) -> tuple[ChainComplex, ChainMap]:
    """``Y = C + D`` with ``D`` random contractible (or arbitrary), after a random basis change, and the inclusion."""
    lo, hi = (C.lo, C.hi) if not C.is_empty else (0, 1)
    D = random_complex(C.ring, rng, lo, hi, max_rank=2, contractible=contractible)
    R = C.ring
    mods, diffs, inc = {}, {}, {}
    degs = sorted(set(C.support) | set(D.support))
    bases = {}
    for n in degs:
        a, b = C.gens(n), D.gens(n)
        P, Pinv = random_unimodular(R, rng, a + b)
        bases[n] = (P, Pinv)
        rel = block_diag(R, [C.module(n).relations, D.module(n).relations])
        mods[n] = PresentedModule(R, P @ rel)
        inc[n] = P @ vstack(R, a, [ExactMatrix.identity(R, a), ExactMatrix.zeros(R, b, a)])
    for n in degs:
        if n - 1 in bases:
            dd = block_diag(R, [C.d(n), D.d(n)])
            diffs[n] = bases[n - 1][0] @ dd @ bases[n][1]
    Y = ChainComplex(R, mods, diffs)
    return Y, ChainMap(C, Y, {n: inc[n] for n in C.support})


@dataclass(frozen=True)
class GeneratedSequence:
    sequence: HDiffSequence
    mode: str


SEQUENCE_MODES = ("random", "cofibre", "fibre", "cofibre+equivalence", "fibre+equivalence", "cofibre+map")


def random_sequence(ring: Ring, rng, variant: BoundedVariant = UNBOUNDED, mode: str | None = None,
                    max_rank: int = 2, length: int = 3) -> GeneratedSequence:
    """A valid h-differential sequence ``(f, g; alpha)``.

    ``random`` solves for ``(g, alpha)`` jointly; the template modes start from
    ``(f, cf; gamma_f)`` or ``(kg, g; kappa_g)`` and optionally post- or pre-compose
    with a random homotopy equivalence (exact) or a random chain map (usually not).
    """
    rng = rng_from(rng)
    if mode is None:
        mode = SEQUENCE_MODES[int(rng.integers(len(SEQUENCE_MODES)))]
    lo, hi = _window(variant, rng, length)
    free_only = variant.kind == "unbounded"
    tors = not free_only and ring == ZZ

    def cx():
        return random_complex(ring, rng, lo, hi, max_rank=max_rank, torsion=tors)

    if mode == "random":
        X, A, Y = cx(), cx(), cx()
        f = random_chain_map(X, A, rng)
        g, alpha = _random_g_alpha(f, Y, rng)
        return GeneratedSequence(HDiffSequence(f, g, alpha), mode)
    if mode.startswith("cofibre"):
        X, A = cx(), cx()
        f = random_chain_map(X, A, rng)
        hc = variant.hcok(f)
        s = HDiffSequence(f, hc.c, hc.gamma)
        if mode == "cofibre":
            return GeneratedSequence(s, mode)
        if mode == "cofibre+equivalence" and free_only:
            Y, e = _contractible_sum(hc.object, rng)
        else:
            mode = "cofibre+map"
            Y = cx()
            e = random_chain_map(hc.object, Y, rng)
        return GeneratedSequence(_postcompose(s, e), mode)
    # fibre templates
    A, Y = cx(), cx()
    g = random_chain_map(A, Y, rng)
    hk = variant.hker(g)
    s = HDiffSequence(hk.k, g, hk.kappa)
    if mode == "fibre+equivalence" and free_only:
        W, e = _contractible_sum(hk.object, rng)
        # restrict along a retraction of the split inclusion: precompose with a map W -> K
        r = _retraction(e, rng)
        return GeneratedSequence(_precompose(s, r), mode)
    return GeneratedSequence(s, "fibre")


def _window(variant: BoundedVariant, rng, length: int) -> tuple[int, int]:
    if variant.kind == "interval":
        return 0, variant.p
    if variant.kind == "positive":
        return 0, int(rng.integers(0, length))
    if variant.kind == "negative":
        return -int(rng.integers(0, length)), 0
    lo = int(rng.integers(-1, 1))
    return lo, lo + int(rng.integers(0, length))


def _random_g_alpha(f: ChainMap, Y: ChainComplex, rng) -> tuple[ChainMap, Homotopy]:
    X, A = f.source, f.target
    R = X.ring
    S = _System(R)
    _add_map_equations(S, A, Y, "g")
    _add_map_equations(S, X, Y, "a", 1, chain=False)
    # g_n f_n = alpha_{n-1} d_X + d_Y alpha_n modulo the relations of Y_n
    for n in X.support:
        rows, cols = Y.gens(n), X.gens(n)
        if not rows or not cols:
            continue
        terms = []
        if A.gens(n):
            terms.append((None, ("g", n), f[n]))
        if X.gens(n - 1):
            terms.append((ExactMatrix.scalar(R, rows, -1), ("a", n - 1), X.d(n)))
        if Y.gens(n + 1):
            terms.append((Y.d(n + 1) * -1, ("a", n), None))
        r = _rel(Y, n)
        if r.cols:
            S.unknown(("e", n), r.cols, cols)
            terms.append((r * -1, ("e", n), None))
        S.equation(rows, cols, terms)
    sol = S.random_solution(rng)
    g = ChainMap(A, Y, {n: sol[("g", n)] for n in A.support if Y.gens(n)})
    gf = compose(g, f)
    alpha = Homotopy(zero_map(X, Y), gf, {n: sol[("a", n)] for n in X.support if Y.gens(n + 1)})
    return g, alpha


def _postcompose(s: HDiffSequence, e: ChainMap) -> HDiffSequence:
    g = compose(e, s.g)
    return HDiffSequence(s.f, g, whisker(e, s.alpha, None))


def _precompose(s: HDiffSequence, r: ChainMap) -> HDiffSequence:
    f = compose(s.f, r)
    return HDiffSequence(f, s.g, whisker(None, s.alpha, r))


def _retraction(e: ChainMap, rng) -> ChainMap:
    """A homotopy equivalence ``W -> K`` for a split inclusion ``e: K -> W = K + D`` with ``D`` contractible."""
    w = homotopy_equivalence_witness(e)
    if w is None:
        raise AssertionError("inclusion of a contractible complement is not an equivalence")
    return w.g


# ---------------------------------------------------------------------------
# arrows (p = 1)


def random_iso_pair(C: ChainComplex, rng) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """An isomorphic copy ``C2`` of a free ``C`` with ``f: C -> C2`` and its inverse."""
    R = C.ring
    P = {n: random_unimodular(R, rng, C.gens(n)) for n in C.support}
    diffs = {n: P[n - 1][0] @ C.d(n) @ P[n][1] for n in C.support if n - 1 in P}
    C2 = ChainComplex.free(R, {n: C.gens(n) for n in C.support}, diffs)
    return C2, ChainMap(C, C2, {n: P[n][0] for n in P}), ChainMap(C2, C, {n: P[n][1] for n in P})


def random_equivalence_data(C: ChainComplex, rng):
    """``(f, g, alpha, beta)`` with ``f`` an isomorphism and ``g`` a perturbed inverse."""
    C2, f, finv = random_iso_pair(C, rng)
    g, _ = random_homotopic(finv, rng)
    alpha = find_homotopy(identity(C), compose(g, f))
    beta = find_homotopy(compose(f, g), identity(C2))
    if alpha is None or beta is None or validate(alpha) or validate(beta):
        raise AssertionError("perturbed inverse lost its homotopies")
    return f, g, alpha, beta


__all__ = [
    "GeneratedSequence",
    "SEQUENCE_MODES",
    "random_chain_map",
    "random_complex",
    "random_equivalence_data",
    "random_graded_map",
    "random_homotopic",
    "random_iso_pair",
    "random_finite_module",
    "random_matrix",
    "random_module_map",
    "random_sequence",
    "random_unimodular",
    "rng_from",
]
