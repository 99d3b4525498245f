"""Finitely presented abelian groups with a group action.

A :class:`GModule` is ``Z^k / rowspan(relations)`` together with one k x k
integer matrix per group element.  The matrices only have to be an action
*on the quotient*; all comparisons go through the canonical Smith
coordinates of the presentation, computed once per module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import inf, prod
from typing import Iterator, Sequence

from .exactla import (AbelianInvariants, IntMatrix, NoSolution, hermite_rows, kernel_basis,
                      snf)
from .groups import FiniteGroup, subgroup

__all__ = [
    "GModule",
    "ModuleMap",
    "ModuleElement",
    "ModuleError",
    "ELEMENT_CAP",
    "trivial_module",
    "group_ring",
    "group_ring_mod",
    "augmentation_ideal",
    "zero_module",
    "direct_sum",
    "fixed_points",
    "p_primary",
    "p_primary_projection",
    "map_kernel",
    "map_cokernel",
    "simplify",
    "restrict",
    "order",
    "elements",
    "lattice_preimage",
]

ELEMENT_CAP = 4096


class ModuleError(ValueError):
    """A presentation, action or map violates a module invariant."""


@dataclass(frozen=True)
class _Smith:
    to_canon: tuple[tuple[int, ...], ...]    # k' x k
    from_canon: tuple[tuple[int, ...], ...]  # k x k'
    moduli: tuple[int, ...]                  # 0 = free coordinate


def _reduce(vec, moduli):
    return tuple(x % m if m else x for x, m in zip(vec, moduli))


class GModule:
    """A G-module ``Z^k / R`` with action matrices indexed by group element."""

    def __init__(self, group: FiniteGroup, ambient_rank: int, relations, action,
                 name: str | None = None, check: bool = True):
        k = int(ambient_rank)
        if not isinstance(relations, IntMatrix):
            relations = IntMatrix.from_rows(relations, k)
        action = tuple(a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a, k) for a in action)
        if relations.cols != k:
            raise ModuleError(f"relations have {relations.cols} columns, ambient rank is {k}")
        if len(action) != group.order:
            raise ModuleError(f"need {group.order} action matrices, got {len(action)}")
        if any(a.shape != (k, k) for a in action):
            raise ModuleError(f"action matrices must be {k}x{k}")
        self.group = group
        self.ambient_rank = k
        self.relations = relations
        self.action = action
        self.name = name
        if check:
            self.validate()

    def __repr__(self) -> str:
        label = self.name or "GModule"
        return f"<{label} over {self.group!r}: {self.invariants()}>"

    # -- canonical coordinates -------------------------------------------

    @cached_property
    def _smith(self) -> _Smith:
        k = self.ambient_rank
        if self.relations.rows == 0:
            eye = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
            return _Smith(eye, eye, (0,) * k)
        res = snf(self.relations)
        diag = res.diagonal + [0] * (k - len(res.diagonal))
        keep = [j for j in range(k) if diag[j] != 1]
        VT = res.V.T
        to_canon = tuple(VT.row(j) for j in keep)
        from_canon = tuple(tuple(res.Vinv[j, i] for j in keep) for i in range(k))
        return _Smith(to_canon, from_canon, tuple(diag[j] for j in keep))

    @property
    def moduli(self) -> tuple[int, ...]:
        """Orders of the canonical cyclic generators (0 = infinite)."""
        return self._smith.moduli

    @property
    def canonical_rank(self) -> int:
        return len(self._smith.moduli)

    def canonical(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical residue coordinates of an ambient vector."""
        raw = tuple(sum(a * b for a, b in zip(row, vec)) for row in self._smith.to_canon)
        return _reduce(raw, self._smith.moduli)

    def lift(self, coords: Sequence[int]) -> list[int]:
        """An ambient vector with the given canonical coordinates."""
        return [sum(a * b for a, b in zip(row, coords)) for row in self._smith.from_canon]

    def is_zero(self, vec: Sequence[int]) -> bool:
        return not any(self.canonical(vec))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(u, v)])

    @cached_property
    def canonical_action(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Action matrices in canonical coordinates, rows reduced by their modulus."""
        sm = self._smith
        out = []
        for A in self.action:
            cols = []
            for j in range(len(sm.moduli)):
                lifted = [row[j] for row in sm.from_canon]
                cols.append(self.canonical(A.apply(lifted)))
            out.append(tuple(zip(*cols)) if cols else ())
        return tuple(out)

    def act(self, g: int, vec: Sequence[int]) -> list[int]:
        return self.action[g].apply(list(vec))

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        G = self.group
        for g, A in enumerate(self.action):
            for i in range(self.relations.rows):
                if not self.is_zero(A.apply(list(self.relations.row(i)))):
                    raise ModuleError(f"action of element {g} does not preserve relation {i} "
                                      "(relation row-span must be stable)")
        canon = self.canonical_action
        n = len(self.moduli)
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        if canon[0] != ident:
            raise ModuleError("identity element does not act as the identity on the cokernel")
        mods = self.moduli
        for g in range(G.order):
            Ag = canon[g]
            for h in range(G.order):
                Ah = canon[h]
                Agh = canon[G.mul[g][h]]
                for j in range(n):
                    col = [sum(Ag[i][t] * Ah[t][j] for t in range(n)) for i in range(n)]
                    if _reduce(col, mods) != tuple(Agh[i][j] for i in range(n)):
                        raise ModuleError(f"action is not multiplicative at ({g}, {h}): "
                                          "action[g]·action[h] must induce action[g·h]")

    # -- basic invariants ------------------------------------------------

    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants.from_diagonal(self.moduli)

    @property
    def is_finite(self) -> bool:
        return all(self.moduli)

    def order(self) -> int | float:
        """Number of elements, ``math.inf`` for an infinite module."""
        return prod(self.moduli) if self.is_finite else inf

    def exponent(self) -> int:
        if not self.is_finite:
            return 0
        return self.invariants().exponent

    # -- elements --------------------------------------------------------

    def element(self, vec: Sequence[int]) -> "ModuleElement":
        return ModuleElement(self, self.canonical(vec))

    def element_from_canonical(self, coords: Sequence[int]) -> "ModuleElement":
        if len(coords) != len(self.moduli):
            raise ModuleError("wrong number of canonical coordinates")
        return ModuleElement(self, _reduce(tuple(int(c) for c in coords), self.moduli))

    def zero(self) -> "ModuleElement":
        return ModuleElement(self, (0,) * len(self.moduli))

    def elements(self) -> Iterator["ModuleElement"]:
        return elements(self)

    def to_json(self) -> dict:
        from .serialize import module_to_json
        return module_to_json(self)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """An element of a module, stored by canonical residue coordinates."""

    owner: GModule
    coords: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleElement) and other.owner is self.owner
                and other.coords == self.coords)

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return self.owner.element_from_canonical([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "ModuleElement":
        return self.owner.element_from_canonical([-a for a in self.coords])

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "ModuleElement":
        return self.owner.element_from_canonical([k * a for a in self.coords])

    def act(self, g: int) -> "ModuleElement":
        A = self.owner.canonical_action[g]
        n = len(self.coords)
        return self.owner.element_from_canonical(
            [sum(A[i][j] * self.coords[j] for j in range(n)) for i in range(n)])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def lift(self) -> list[int]:
        return self.owner.lift(self.coords)


class ModuleMap:
    """G-equivariant homomorphism given by a matrix on ambient coordinates."""

    def __init__(self, source: GModule, target: GModule, matrix, check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix.from_rows(matrix, source.ambient_rank)
        if matrix.shape != (target.ambient_rank, source.ambient_rank):
            raise ModuleError(f"map matrix must be {target.ambient_rank}x{source.ambient_rank}")
        if source.group != target.group:
            raise ModuleError("source and target live over different groups")
        self.source, self.target, self.matrix = source, target, matrix
        if check:
            self.validate()

    def validate(self) -> None:
        S, T, F = self.source, self.target, self.matrix
        for i in range(S.relations.rows):
            if not T.is_zero(F.apply(list(S.relations.row(i)))):
                raise ModuleError(f"map is not well defined: relation {i} of the source "
                                  "does not map into the target relations")
        k = S.ambient_rank
        for g in range(S.group.order):
            for c in range(k):
                e = [int(i == c) for i in range(k)]
                lhs = F.apply(S.act(g, e))
                rhs = T.act(g, F.apply(e))
                if not T.equal(lhs, rhs):
                    raise ModuleError(f"map is not G-equivariant at element {g}, basis vector {c}")

    def __call__(self, vec: Sequence[int]) -> list[int]:
        return self.matrix.apply(list(vec))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def is_zero(self) -> bool:
        k = self.source.ambient_rank
        return all(self.target.is_zero(list(self.matrix.col(c))) for c in range(k))

    def kernel(self):
        return map_kernel(self)

    def cokernel(self):
        return map_cokernel(self)

    def is_injective(self) -> bool:
        return map_kernel(self)[0].invariants().is_trivial

    def is_surjective(self) -> bool:
        return map_cokernel(self)[0].invariants().is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


# --------------------------------------------------------------------------
# constructors


def _eye(k):
    return IntMatrix.identity(k)


def trivial_module(G: FiniteGroup, invariants: AbelianInvariants | Sequence[int]) -> GModule:
    """The abelian group ``invariants`` with every element acting as the identity."""
    if not isinstance(invariants, AbelianInvariants):
        invariants = AbelianInvariants.from_diagonal(invariants)
    f = invariants.factors
    k = len(f) + invariants.free_rank
    rel = IntMatrix.diagonal(list(f), rows=len(f), cols=k)
    return GModule(G, k, rel, [_eye(k)] * G.order, name=f"trivial{invariants}", check=False)


def zero_module(G: FiniteGroup) -> GModule:
    return trivial_module(G, AbelianInvariants())


def _regular_action(G: FiniteGroup, copies: int = 1) -> list[IntMatrix]:
    n = G.order
    mats = []
    for g in range(G.order):
        rows = [[0] * (n * copies) for _ in range(n * copies)]
        for r in range(copies):
            for h in range(n):
                rows[r * n + G.mul[g][h]][r * n + h] = 1
        mats.append(IntMatrix.from_rows(rows, n * copies))
    return mats


def group_ring(G: FiniteGroup, copies: int = 1) -> GModule:
    """Z[G]^copies with left translation; basis vector (r, h) is index r*|G| + h."""
    k = G.order * copies
    return GModule(G, k, IntMatrix.zeros(0, k), _regular_action(G, copies),
                   name="Z[G]" if copies == 1 else f"Z[G]^{copies}", check=False)


def group_ring_mod(G: FiniteGroup, n: int, copies: int = 1) -> GModule:
    """(Z/n)[G]^copies."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    k = G.order * copies
    return GModule(G, k, IntMatrix.diagonal([n] * k), _regular_action(G, copies),
                   name=f"(Z/{n})[G]" + (f"^{copies}" if copies != 1 else ""), check=False)


def augmentation_ideal(G: FiniteGroup) -> GModule:
    """I_G, free on e_t <-> (t - 1) for t != 1; s·e_t = e_{st} - e_s with e_1 = 0."""
    n = G.order
    k = n - 1
    mats = []
    for s in range(n):
        rows = [[0] * k for _ in range(k)]
        for t in range(1, n):
            st = G.mul[s][t]
            if st:
                rows[st - 1][t - 1] += 1
            if s:
                rows[s - 1][t - 1] -= 1
        mats.append(IntMatrix.from_rows(rows, k))
    return GModule(G, k, IntMatrix.zeros(0, k), mats, name="I_G", check=False)


def _block_diag(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = [list(r) + [0] * b.cols for r in a.entries] + [[0] * a.cols + list(r) for r in b.entries]
    return IntMatrix(a.rows + b.rows, a.cols + b.cols, tuple(map(tuple, rows)))


def direct_sum(*mods: GModule) -> GModule:
    """Block-diagonal direct sum, ambient coordinates concatenated in order."""
    if not mods:
        raise ValueError("need at least one summand")
    G = mods[0].group
    if any(M.group != G for M in mods):
        raise ModuleError("direct sum of modules over different groups")
    rel, acts, k = mods[0].relations, list(mods[0].action), mods[0].ambient_rank
    for M in mods[1:]:
        rel = _block_diag(rel, M.relations)
        acts = [_block_diag(a, b) for a, b in zip(acts, M.action)]
        k += M.ambient_rank
    name = " ⊕ ".join(M.name or "M" for M in mods)
    return GModule(G, k, rel, acts, name=name, check=False)


def restrict(M: GModule, elements) -> GModule:
    """Restriction of M to the subgroup on ``elements``."""
    H, emb = subgroup(M.group, elements)
    return GModule(H, M.ambient_rank, M.relations, [M.action[g] for g in emb],
                   name=M.name, check=False)


# --------------------------------------------------------------------------
# lattices inside the ambient space


def lattice_preimage(F: IntMatrix, target: GModule) -> list[list[int]]:
    """Hermite basis (rows) of ``{x : F x ∈ rowspan(target.relations)}``."""
    k = F.cols
    R = target.relations
    if R.rows:
        aug = F.hstack(-R.T)
    else:
        aug = F
    if aug.rows == 0:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    K = kernel_basis(aug)
    vecs = [list(K.col(j))[:k] for j in range(K.cols)]
    return hermite_rows(vecs, k)


class _Coordinates:
    """Coordinates with respect to the columns of a full-column-rank matrix."""

    def __init__(self, B: IntMatrix):
        self.B = B
        res = snf(B)
        self.U, self.V = res.U, res.V
        self.diag = res.diagonal
        if any(d == 0 for d in self.diag) or len(self.diag) < B.cols:
            raise ModuleError("basis matrix is rank deficient")

    def __call__(self, y: Sequence[int]) -> list[int]:
        uy = self.U.apply(list(y))
        r = self.B.cols
        if any(uy[r:]):
            raise NoSolution("vector is outside the lattice")
        z = []
        for i in range(r):
            q, rem = divmod(uy[i], self.diag[i])
            if rem:
                raise NoSolution("vector is outside the lattice")
            z.append(q)
        return self.V.apply(z)


def _sublattice_module(M: GModule, basis: list[list[int]], name: str) -> tuple[GModule, IntMatrix]:
    """Module structure on a G-stable lattice L with rowspan(R) ⊆ L ⊆ Z^k."""
    k = M.ambient_rank
    r = len(basis)
    B = IntMatrix(k, r, tuple(zip(*basis)) if basis else tuple(() for _ in range(k)))
    if r == 0:
        return GModule(M.group, 0, IntMatrix.zeros(0, 0), [IntMatrix.zeros(0, 0)] * M.group.order,
                       name=name, check=False), B
    coords = _Coordinates(B)
    rel = [coords(list(M.relations.row(i))) for i in range(M.relations.rows)]
    acts = []
    for A in M.action:
        AB = A @ B
        cols = [coords(list(AB.col(j))) for j in range(r)]
        acts.append(IntMatrix.from_rows(list(zip(*cols)), r))
    sub = GModule(M.group, r, IntMatrix.from_rows(rel, r) if rel else IntMatrix.zeros(0, r),
                  acts, name=name)
    return sub, B


def simplify(M: GModule) -> tuple[GModule, ModuleMap, ModuleMap]:
    """Isomorphic module on the canonical Smith coordinates.

    Returns ``(M', to, back)`` with ``to: M -> M'`` and ``back: M' -> M``
    mutually inverse.
    """
    sm = M._smith
    k2 = len(sm.moduli)
    rel = IntMatrix.from_rows([[m if i == j else 0 for j in range(k2)]
                               for i, m in enumerate(sm.moduli) if m], k2)
    acts = [IntMatrix.from_rows(A, k2) if k2 else IntMatrix.zeros(0, 0) for A in M.canonical_action]
    S = GModule(M.group, k2, rel, acts, name=M.name, check=False)
    to = ModuleMap(M, S, IntMatrix(k2, M.ambient_rank, sm.to_canon), check=False)
    back = ModuleMap(S, M, IntMatrix(M.ambient_rank, k2, sm.from_canon), check=False)
    return S, to, back


# --------------------------------------------------------------------------
# sub- and quotient modules


def fixed_points(M: GModule) -> tuple[AbelianInvariants, ModuleMap]:
    """M^G as an abelian group with its inclusion into M.

    Computed as the preimage of the relations under the stacked matrix of
    all ``action[g] - 1``.
    """
    k = M.ambient_rank
    G = M.group
    rows = []
    for g in range(1, G.order):
        D = M.action[g] - _eye(k)
        rows.extend(D.entries)
    stacked_target = direct_sum(*([M] * (G.order - 1))) if G.order > 1 else None
    if stacked_target is None:
        basis = [[int(i == j) for j in range(k)] for i in range(k)]
    else:
        F = IntMatrix(len(rows), k, tuple(rows))
        basis = lattice_preimage(F, stacked_target)
    trivial = GModule(G, M.ambient_rank, M.relations, [_eye(k)] * G.order, check=False)
    sub, B = _sublattice_module(trivial, basis, "fixed points")
    sub2, _, back = simplify(sub)
    incl = ModuleMap(sub2, M, B @ back.matrix)
    return sub2.invariants(), incl


def map_kernel(f: ModuleMap) -> tuple[GModule, ModuleMap]:
    """Kernel of f re-presented as a module, with its inclusion."""
    M = f.source
    basis = lattice_preimage(f.matrix, f.target)
    sub, B = _sublattice_module(M, basis, "ker")
    sub2, _, back = simplify(sub)
    return sub2, ModuleMap(sub2, M, B @ back.matrix)


def map_cokernel(f: ModuleMap) -> tuple[GModule, ModuleMap]:
    """Cokernel of f, with the projection from the target."""
    N = f.target
    rel = N.relations.vstack(f.matrix.T) if f.matrix.cols else N.relations
    C = GModule(N.group, N.ambient_rank, rel, N.action, name="coker")
    C2, to, _ = simplify(C)
    return C2, ModuleMap(N, C2, to.matrix)


def p_primary_projection(M: GModule, p: int) -> ModuleMap:
    """The projection of a finite module onto its p-primary part.

    The p-part is ``M / p^a M`` where p^a is the p-part of the exponent;
    the prime-to-p part is exactly what this quotient kills.
    """
    if not M.is_finite:
        raise ModuleError("p-primary part requested for an infinite module")
    e = M.exponent()
    a = 0
    while e % p == 0:
        e //= p
        a += 1
    k = M.ambient_rank
    rel = M.relations.vstack(IntMatrix.diagonal([p ** a] * k))
    Q = GModule(M.group, k, rel, M.action, name=f"{M.name or 'M'}_({p})", check=False)
    Q2, to, _ = simplify(Q)
    return ModuleMap(M, Q2, to.matrix, check=False)


def p_primary(M: GModule, p: int) -> GModule:
    return p_primary_projection(M, p).target


def order(M: GModule) -> int | float:
    return M.order()


def elements(M: GModule) -> Iterator[ModuleElement]:
    """All elements in lexicographic order of canonical residues."""
    if not M.is_finite:
        raise ModuleError("cannot enumerate an infinite module")
    if M.order() > ELEMENT_CAP:
        raise ModuleError(f"module has {M.order()} elements; enumeration cap is {ELEMENT_CAP}")
    for coords in itertools.product(*(range(m) for m in M.moduli)):
        yield ModuleElement(M, tuple(coords))
