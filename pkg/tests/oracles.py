"""Independent oracles: brute-force enumeration and sympy normal forms.

Nothing here calls the package's own elimination code; inputs are read off
its data structures as plain integer lists.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from hexact.rings import ZZ


def ints(m) -> list[list[int]]:
    return [[int(x) for x in row] for row in m.data]


# ---------------------------------------------------------------------------
# finite modules


class FiniteModule:
    """A finite quotient ``Z^g / L`` with canonical coset representatives from the column HNF of ``L``."""

    def __init__(self, gens: int, relations: list[list[int]], p: int | None = None):
        self.gens = gens
        cols = [list(c) for c in zip(*relations)] if relations and relations[0] else []
        if p is not None:
            cols += [[p if i == j else 0 for i in range(gens)] for j in range(gens)]
        if gens == 0:
            self.diag = []
            self.H = None
            return
        if not cols:
            raise ValueError("infinite module")
        H = hermite_normal_form(Matrix(gens, len(cols), lambda i, j: cols[j][i]))
        if H.shape != (gens, gens) or any(H[i, i] <= 0 for i in range(gens)):
            raise ValueError("infinite module")
        for i in range(gens):
            for j in range(i):
                assert H[i, j] == 0
        self.H = [[int(H[i, j]) for j in range(gens)] for i in range(gens)]
        self.diag = [self.H[i][i] for i in range(gens)]

    @classmethod
    def of(cls, M) -> "FiniteModule":
        R = M.ring
        p = R.p if R.kind == "Zp" else None
        if R.kind == "Q":
            raise ValueError("modules over Q are infinite")
        return cls(M.gens, ints(M.relations), p)

    @property
    def order(self) -> int:
        return int(np.prod(self.diag)) if self.diag else 1

    def canon(self, v) -> tuple:
        v = [int(x) for x in v]
        for i in reversed(range(self.gens)):
            q = v[i] // self.diag[i]
            if q:
                for r in range(i + 1):
                    v[r] -= q * self.H[r][i]
        return tuple(v)

    def elements(self) -> list[tuple]:
        return list(itertools.product(*[range(d) for d in self.diag]))


def apply(matrix: list[list[int]], v) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in matrix]


def map_table(f) -> dict:
    """Element table of a ModuleMap between finite modules."""
    S, T = FiniteModule.of(f.source), FiniteModule.of(f.target)
    M = ints(f.matrix)
    return {x: T.canon(apply(M, x)) for x in S.elements()}


def is_bijective(f) -> bool:
    tab = map_table(f)
    T = FiniteModule.of(f.target)
    return len(set(tab.values())) == len(tab) == T.order


def set_kernel(f) -> set:
    T = FiniteModule.of(f.target)
    zero = T.canon([0] * f.target.gens)
    return {x for x, y in map_table(f).items() if y == zero}


def subgroup(M: FiniteModule, gens: list) -> set:
    """Subgroup of ``M`` generated by ``gens`` (closure under addition)."""
    zero = M.canon([0] * M.gens)
    seen = {zero}
    frontier = [zero]
    gens = [M.canon(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = M.canon([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def check_pullback(f, g, P, p1, p2) -> bool:
    """``P -> {(x, y) : f x = g y}``, ``z -> (p1 z, p2 z)`` is a bijection."""
    A, B, Q = FiniteModule.of(f.source), FiniteModule.of(g.source), FiniteModule.of(f.target)
    F, G = ints(f.matrix), ints(g.matrix)
    target = {(x, y) for x in A.elements() for y in B.elements()
              if Q.canon(apply(F, x)) == Q.canon(apply(G, y))}
    FP = FiniteModule.of(P)
    P1, P2 = ints(p1.matrix), ints(p2.matrix)
    image = {(A.canon(apply(P1, z)), B.canon(apply(P2, z))) for z in FP.elements()}
    return image == target and FP.order == len(target)


def check_pushout(f, g, P, i1, i2) -> bool:
    """``(A + B) / {(f q, -g q)} -> P``, ``[x, y] -> i1 x + i2 y`` is a bijection."""
    A, B, Q = FiniteModule.of(f.target), FiniteModule.of(g.target), FiniteModule.of(f.source)
    F, G = ints(f.matrix), ints(g.matrix)
    AB = FiniteModule(A.gens + B.gens, _block_relations(f.target, g.target))
    rel = [list(map(int, apply(F, q))) + [-x for x in apply(G, q)] for q in Q.elements()]
    S = subgroup(AB, rel)
    FP = FiniteModule.of(P)
    I = [a + b for a, b in zip(_pad(ints(i1.matrix), P.gens, A.gens), _pad(ints(i2.matrix), P.gens, B.gens))]
    cosets = {}
    for v in AB.elements():
        key = min(AB.canon([a + b for a, b in zip(v, s)]) for s in S)
        img = FP.canon(apply(I, v))
        if cosets.setdefault(key, img) != img:
            return False  # not well defined on the quotient
    return len(set(cosets.values())) == len(cosets) == FP.order


def _pad(m, rows, cols):
    return m if m else [[0] * cols for _ in range(rows)]


def _block_relations(M, N) -> list[list[int]]:
    a, b = ints(M.relations), ints(N.relations)
    ra, rb = M.relations.cols, N.relations.cols
    p = M.ring.p if M.ring.kind == "Zp" else None
    rows = [(a[i] if ra else []) + [0] * rb for i in range(M.gens)]
    rows += [[0] * ra + (b[i] if rb else []) for i in range(N.gens)]
    if p is not None:
        g = M.gens + N.gens
        rows = [r + [p if i == j else 0 for j in range(g)] for i, r in enumerate(rows)]
    return rows


# ---------------------------------------------------------------------------
# linear algebra over small fields


def exhaustive_solve(A: list[list[int]], B: list[list[int]], p: int) -> bool:
    """Whether ``A X = B`` has a solution over ``Z/p``, by enumerating every ``X``."""
    r, k = len(A), len(A[0]) if A else 0
    m = len(B[0]) if B else 0
    An, Bn = np.array(A, dtype=np.int64).reshape(r, k), np.array(B, dtype=np.int64).reshape(r, m)
    for col in range(m):
        found = False
        for x in itertools.product(range(p), repeat=k):
            if np.all((An @ np.array(x, dtype=np.int64) - Bn[:, col]) % p == 0):
                found = True
                break
        if not found:
            return False
    return True


def gf2_complexes(max_order: int = 64, max_length: int = 3):
    """Every complex over Z/2 on ``[0, length)`` with nonzero bottom and ``2^(sum ranks) <= max_order``."""
    max_rank = int(np.log2(max_order))
    for length in range(1, max_length + 1):
        for ranks in itertools.product(range(max_rank + 1), repeat=length):
            if ranks[0] == 0 or ranks[-1] == 0 or sum(ranks) > max_rank:
                continue
            diffs_choices = []
            for n in range(1, length):
                rows, cols = ranks[n - 1], ranks[n]
                diffs_choices.append([np.array(bits, dtype=np.int64).reshape(rows, cols)
                                      for bits in itertools.product((0, 1), repeat=rows * cols)])
            for ds in itertools.product(*diffs_choices):
                if all(not ((ds[i] @ ds[i + 1]) % 2).any() for i in range(len(ds) - 1)):
                    yield ranks, list(ds)


def _all_matrices(rows: int, cols: int) -> np.ndarray:
    n = rows * cols
    if n == 0:
        return np.zeros((1, rows, cols), dtype=np.int64)
    bits = ((np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    return bits.reshape(-1, rows, cols)


def exhaustive_nullhomotopy_gf2(src_ranks, src_d, tgt_ranks, tgt_d, f) -> bool:
    """Whether ``f = h d + d h`` for some degree-one ``h`` over Z/2, by enumerating every ``h``.

    Complexes sit on ``[0, len(ranks))``; ``src_d[n-1]`` is ``d_n``; ``f[n]`` is ``f_n``.
    """
    L = max(len(src_ranks), len(tgt_ranks))
    sr = list(src_ranks) + [0] * (L + 1 - len(src_ranks))
    tr = list(tgt_ranks) + [0] * (L + 1 - len(tgt_ranks))

    def d(ds, ranks, n):  # d_n: C_n -> C_{n-1}
        if 1 <= n < len(ds) + 1:
            return ds[n - 1]
        return np.zeros((ranks[n - 1] if n >= 1 else 0, ranks[n]), dtype=np.int64)

    # h_n: A_n -> B_{n+1}; enumerate the product of all h_n in vectorized batches
    shapes = [(tr[n + 1], sr[n]) for n in range(L)]
    choices = [_all_matrices(*s) for s in shapes]
    sizes = [len(c) for c in choices]
    total = int(np.prod(sizes))
    idx = np.indices(sizes).reshape(len(sizes), -1)
    ok = np.ones(total, dtype=bool)
    for n in range(L):
        lhs = np.broadcast_to(np.asarray(f[n], dtype=np.int64).reshape(tr[n], sr[n]), (total, tr[n], sr[n]))
        acc = np.zeros((total, tr[n], sr[n]), dtype=np.int64)
        if n >= 1:
            acc += choices[n - 1][idx[n - 1]] @ d(src_d, sr, n)
        acc += d(tgt_d, tr, n + 1) @ choices[n][idx[n]]
        ok &= ~(((acc - lhs) % 2).reshape(total, -1).any(axis=1))
    return bool(ok.any())


# ---------------------------------------------------------------------------
# homology over Z via sympy


def homology_invariants_sympy(ranks: dict, diffs: dict, n: int) -> tuple[int, tuple]:
    """Free rank and torsion of ``H_n`` of a free complex over Z."""
    r = ranks.get(n, 0)
    dn = diffs.get(n)
    dn1 = diffs.get(n + 1)
    rank_dn = Matrix(dn).rank() if dn is not None and len(dn) and len(dn[0]) else 0
    z = r - rank_dn
    if dn1 is None or not len(dn1) or not len(dn1[0]):
        return z, ()
    S = smith_normal_form(Matrix(dn1))
    divisors = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    return z - len(divisors), tuple(d for d in divisors if d != 1)


def field_rank(m, p: int | None) -> int:
    rows = [[Fraction(int(x.numerator), int(x.denominator)) if p is None else int(x) for x in r] for r in m.data]
    if not rows or not rows[0]:
        return 0
    M = Matrix(rows)
    if p is None:
        return M.rank()
    # Gaussian elimination mod p
    A = [[int(x) % p for x in r] for r in rows]
    rank, cols = 0, len(A[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                A[i] = [(x - A[i][c] * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def is_zz(R) -> bool:
    return R == ZZ
