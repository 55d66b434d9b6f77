"""Finitely presented modules and their maps.

A module is ``R^g / im(relations)``; a map ``P -> Q`` is a matrix sending
generators of ``P`` to combinations of generators of ``Q``. Presentations are
not canonical: two modules are "the same" only through an explicit
isomorphism (see :func:`module_is_iso`).
"""

from __future__ import annotations

from functools import lru_cache, reduce
from typing import Sequence

from .linalg import (
    ExactMatrix,
    SmithDecomposition,
    block,
    block_diag,
    column_space_basis,
    hstack,
    kron,
    nullspace,
    smith_normal_form,
    solve_matrix_equation,
    unvec,
    vec,
    vstack,
)
from .rings import Ring


@lru_cache(maxsize=4096)
def _snf(m: ExactMatrix) -> SmithDecomposition:
    return smith_normal_form(m)


def solve(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix | None:
    """``solve_matrix_equation`` with the Smith form of ``A`` cached."""
    if A.cols == 0:
        return ExactMatrix.zeros(A.ring, 0, B.cols) if B.is_zero() else None
    return solve_matrix_equation(A, B, _snf(A))


class PresentedModule:
    """``ring^gens / (column span of relations)``."""

    __slots__ = ("ring", "relations")

    def __init__(self, ring: Ring, relations: ExactMatrix):
        if relations.ring != ring:
            raise ValueError("relations live over a different ring")
        if relations.rows == 0 and relations.cols:
            relations = ExactMatrix.zeros(ring, 0, 0)
        self.ring = ring
        self.relations = relations

    @classmethod
    def free(cls, ring: Ring, n: int) -> "PresentedModule":
        return cls(ring, ExactMatrix.zeros(ring, n, 0))

    @classmethod
    def zero(cls, ring: Ring) -> "PresentedModule":
        return cls.free(ring, 0)

    @classmethod
    def from_invariants(cls, ring: Ring, free_rank: int, torsion: Sequence[int] = ()) -> "PresentedModule":
        """``ring^free_rank + ring/d_1 + ...`` with one generator per summand."""
        g = free_rank + len(torsion)
        data = [[0] * len(torsion) for _ in range(g)]
        for k, d in enumerate(torsion):
            data[free_rank + k][k] = d
        return cls(ring, ExactMatrix(ring, g, len(torsion), data))

    @property
    def gens(self) -> int:
        return self.relations.rows

    @property
    def is_free_presentation(self) -> bool:
        return self.relations.cols == 0

    def __eq__(self, other):
        if not isinstance(other, PresentedModule):
            return NotImplemented
        return self.ring == other.ring and self.relations == other.relations

    def __hash__(self):
        return hash((self.ring, self.relations))

    def __repr__(self):
        return f"PresentedModule({self.ring}, gens={self.gens}, relations={self.relations.cols}) ~ {self.describe()}"

    def snf(self) -> SmithDecomposition:
        return _snf(self.relations)

    def invariants(self) -> tuple[int, tuple]:
        """(free rank, non-unit invariant factors d_1 | d_2 | ...)."""
        s = self.snf()
        torsion = tuple(d for d in s.divisors if not self.ring.is_unit(d))
        return self.gens - s.rank, torsion

    def is_zero(self) -> bool:
        free, torsion = self.invariants()
        return free == 0 and not torsion

    def order(self) -> int | None:
        """Number of elements, or ``None`` for an infinite module."""
        free, torsion = self.invariants()
        if self.ring.kind == "Zp":
            return self.ring.p ** free
        if free:
            return None
        return reduce(lambda a, b: a * abs(b), torsion, 1)

    def describe(self) -> str:
        free, torsion = self.invariants()
        R = self.ring
        field = {"Q": "Q", "Zp": f"F{R.p}"}.get(R.kind)
        parts = []
        if free:
            base = field or "Z"
            parts.append(base if free == 1 else f"{base}^{free}")
        parts += [f"Z/{abs(d)}" for d in torsion]
        return " + ".join(parts) if parts else "0"

    def minimize(self) -> tuple["PresentedModule", "ModuleMap", "ModuleMap"]:
        """Smallest presentation ``ring^r + (torsion)`` with inverse isomorphisms.

        Returns ``(M, to_min, from_min)`` where ``to_min: self -> M``.
        """
        R = self.ring
        s = self.snf()
        keep = [i for i in range(self.gens) if i >= s.rank or not R.is_unit(s.divisors[i])]
        torsion_idx = [i for i in keep if i < s.rank]
        free_idx = [i for i in keep if i >= s.rank]
        order = free_idx + torsion_idx
        M = PresentedModule.from_invariants(R, len(free_idx), [s.divisors[i] for i in torsion_idx])
        to_rows = [s.U.data[i] for i in order]
        to_min = ModuleMap(self, M, ExactMatrix._raw(R, len(order), self.gens, to_rows), check=False)
        from_cols = [s.U_inv.column(i) for i in order]
        from_mat = ExactMatrix._raw(R, self.gens, len(order), list(zip(*from_cols)) if order else [[]] * self.gens)
        from_min = ModuleMap(M, self, from_mat, check=False)
        return M, to_min, from_min


def direct_sum(ring: Ring, modules: Sequence[PresentedModule]) -> PresentedModule:
    return PresentedModule(ring, block_diag(ring, [m.relations for m in modules]))


def _maps_into_relations(target: PresentedModule, D: ExactMatrix) -> bool:
    """Every column of ``D`` lies in the relation submodule of ``target``."""
    if target.relations.cols == 0:
        return D.is_zero()
    return solve(target.relations, D) is not None


class ModuleMap:
    """A homomorphism of presented modules given on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: PresentedModule, target: PresentedModule, matrix: ExactMatrix, check: bool = True):
        if matrix.shape != (target.gens, source.gens):
            raise ValueError(f"map matrix has shape {matrix.shape}, expected {(target.gens, source.gens)}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not self.is_well_defined():
            raise ValueError("matrix does not send relations to relations")

    @classmethod
    def zero(cls, source: PresentedModule, target: PresentedModule) -> "ModuleMap":
        return cls(source, target, ExactMatrix.zeros(source.ring, target.gens, source.gens), check=False)

    @classmethod
    def identity(cls, m: PresentedModule) -> "ModuleMap":
        return cls(m, m, ExactMatrix.identity(m.ring, m.gens), check=False)

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def is_well_defined(self) -> bool:
        if self.source.relations.cols == 0:
            return True
        return _maps_into_relations(self.target, self.matrix @ self.source.relations)

    def is_zero(self) -> bool:
        return _maps_into_relations(self.target, self.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        """Equality as homomorphisms (matrices agree modulo target relations)."""
        return _maps_into_relations(self.target, self.matrix - other.matrix)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target.gens != self.source.gens:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def __repr__(self):
        return f"ModuleMap({self.source.describe()} -> {self.target.describe()}, {self.matrix!r})"


def module_kernel(f: ModuleMap) -> tuple[PresentedModule, ModuleMap]:
    """Kernel of ``f`` with its inclusion into ``f.source``.

    The kernel is presented on a basis of the lattice of generator
    combinations that ``f`` sends into the target relations.
    """
    R = f.ring
    P, Q = f.source, f.target
    g = P.gens
    big = hstack(R, Q.gens, [f.matrix, -Q.relations])
    ns = nullspace(big, _snf(big))
    N = column_space_basis(ns.submatrix(0, g, 0, ns.cols))
    rel = solve(N, P.relations)
    assert rel is not None, "source relations must lie in the kernel lattice"
    K = PresentedModule(R, rel)
    return K, ModuleMap(K, P, N, check=False)


def module_cokernel(f: ModuleMap) -> tuple[PresentedModule, ModuleMap]:
    """Cokernel ``target / im f`` with its projection (identity on generators)."""
    R = f.ring
    Q = f.target
    C = PresentedModule(R, hstack(R, Q.gens, [Q.relations, f.matrix]))
    return C, ModuleMap(Q, C, ExactMatrix.identity(R, Q.gens), check=False)


def module_pullback(f: ModuleMap, g: ModuleMap) -> tuple[PresentedModule, ModuleMap, ModuleMap]:
    """Pullback of ``P -f-> Q <-g- S`` as the kernel of ``(f, -g): P + S -> Q``."""
    if f.target != g.target:
        raise ValueError("pullback needs maps into the same module")
    R = f.ring
    P, S = f.source, g.source
    PS = direct_sum(R, [P, S])
    diff = ModuleMap(PS, f.target, hstack(R, f.target.gens, [f.matrix, -g.matrix]), check=False)
    K, inc = module_kernel(diff)
    p1 = ModuleMap(K, P, inc.matrix.submatrix(0, P.gens, 0, K.gens), check=False)
    p2 = ModuleMap(K, S, inc.matrix.submatrix(P.gens, PS.gens, 0, K.gens), check=False)
    return K, p1, p2


def module_pushout(f: ModuleMap, g: ModuleMap) -> tuple[PresentedModule, ModuleMap, ModuleMap]:
    """Pushout of ``P <-f- Q -g-> S`` as the cokernel of ``(f, -g): Q -> P + S``."""
    if f.source != g.source:
        raise ValueError("pushout needs maps out of the same module")
    R = f.ring
    P, S = f.target, g.target
    PS = direct_sum(R, [P, S])
    pair = ModuleMap(f.source, PS, vstack(R, f.source.gens, [f.matrix, -g.matrix]), check=False)
    C, proj = module_cokernel(pair)
    i1 = ModuleMap(P, C, block(R, [P.gens, S.gens], [P.gens], {(0, 0): ExactMatrix.identity(R, P.gens)}), check=False)
    i2 = ModuleMap(S, C, block(R, [P.gens, S.gens], [S.gens], {(1, 0): ExactMatrix.identity(R, S.gens)}), check=False)
    return C, i1, i2


def module_is_iso(f: ModuleMap) -> bool:
    return module_kernel(f)[0].is_zero() and module_cokernel(f)[0].is_zero()


def is_mono(f: ModuleMap) -> bool:
    return module_kernel(f)[0].is_zero()


def is_epi(f: ModuleMap) -> bool:
    return module_cokernel(f)[0].is_zero()


def module_inverse(f: ModuleMap) -> ModuleMap | None:
    """Two-sided inverse of ``f``, or ``None`` when ``f`` is not invertible."""
    if not module_is_iso(f):
        return None
    R = f.ring
    Q = f.target
    sol = solve(hstack(R, Q.gens, [f.matrix, Q.relations]), ExactMatrix.identity(R, Q.gens))
    X = sol.submatrix(0, f.source.gens, 0, Q.gens)
    inv = ModuleMap(Q, f.source, X)
    assert (inv @ f).equals(ModuleMap.identity(f.source))
    return inv


def lift(through: ModuleMap, h: ModuleMap) -> ModuleMap | None:
    """``X`` with ``through @ X == h`` (as homomorphisms), or ``None``.

    ``through`` is typically a kernel or pullback inclusion, so the lift is a
    well-defined map and unique.
    """
    if through.target.gens != h.target.gens:
        raise ValueError("lift: maps must share a target")
    R = h.ring
    C = h.target
    A = hstack(R, C.gens, [through.matrix, C.relations])
    sol = solve(A, h.matrix)
    if sol is None:
        return None
    X = sol.submatrix(0, through.source.gens, 0, h.source.gens)
    return ModuleMap(h.source, through.source, X)


def lift_homomorphism(through: ModuleMap, h: ModuleMap) -> ModuleMap | None:
    """A well-defined ``X`` with ``through @ X == h``, for any ``through``; ``None`` if there is none.

    Unlike :func:`lift` the well-definedness of ``X`` is part of the system
    (``X`` must carry relations of ``h.source`` into relations of ``through.source``),
    so the answer is complete when ``through`` is not mono.
    """
    if through.target.gens != h.target.gens:
        raise ValueError("lift: maps must share a target")
    R = h.ring
    P, M, N = h.source, through.source, h.target
    p, m, n = P.gens, M.gens, N.gens
    rp, rm, rn = P.relations.cols, M.relations.cols, N.relations.cols
    if p == 0:
        return ModuleMap(P, M, ExactMatrix.zeros(R, m, 0))
    # the column-wise lift solves the first block row alone; when it has no solution
    # neither has the joint system, and when it happens to be well defined we are done
    sol = solve(hstack(R, n, [through.matrix, N.relations]), h.matrix)
    if sol is None:
        return None
    X = sol.submatrix(0, m, 0, p)
    if rp == 0 or _maps_into_relations(M, X @ P.relations):
        return ModuleMap(P, M, X, check=False)
    # unknowns vec(X) (m x p), vec(Y) (rn x p), vec(Z) (rm x rp):
    #   through X - rel_N Y = h,   X rel_P - rel_M Z = 0
    Ip = ExactMatrix.identity(R, p)
    top = hstack(R, n * p, [kron(through.matrix, Ip), -kron(N.relations, Ip), ExactMatrix.zeros(R, n * p, rm * rp)])
    parts = [top]
    if rp:
        Irp = ExactMatrix.identity(R, rp)
        parts.append(hstack(R, m * rp, [kron(ExactMatrix.identity(R, m), P.relations.T),
                                        ExactMatrix.zeros(R, m * rp, rn * p), -kron(M.relations, Irp)]))
    A = vstack(R, m * p + rn * p + rm * rp, parts)
    rhs = ExactMatrix._raw(R, A.rows, 1, [[x] for x in vec(h.matrix)] + [[R.zero]] * (A.rows - n * p))
    sol = solve(A, rhs)
    if sol is None:
        return None
    X = unvec(R, [r[0] for r in sol.data[:m * p]], m, p)
    return ModuleMap(P, M, X)
