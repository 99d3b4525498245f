"""Group extensions with abelian kernel and their splitting modules.

A group extension 1 -> A -> E -> G -> 1 is stored by its normalized
cocycle.  ``star`` turns it into the module extension
0 -> A -> M -> I_G -> 0 on the splitting module, ``dagger`` goes back
through a section of M -> I_G, and the round-trip checks certify that the
two constructions are mutually inverse on concrete data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cohomology import CapExceeded, Cocycle2, coboundary, is_coboundary
from .exactla import IntMatrix, NoSolution, solve
from .gmodules import (GModule, ModuleError, ModuleMap, augmentation_ideal, elements,
                       map_kernel, p_primary_projection)
from .groups import FiniteGroup, from_table, is_p_group

__all__ = [
    "ExtensionError",
    "GroupExtensionData",
    "ModuleExtensionData",
    "splitting_module",
    "star",
    "dagger",
    "canonical_section",
    "middle_group",
    "MiddleGroup",
    "equivalent",
    "Equivalence",
    "splitting_isomorphism",
    "roundtrip_check",
    "roundtrip_check_module",
    "RoundTripReport",
    "p_quotient",
    "MIDDLE_GROUP_CAP",
]

MIDDLE_GROUP_CAP = 4096


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupExtensionData:
    """An extension of ``quotient`` by the finite module ``kernel``."""

    quotient: FiniteGroup
    kernel: GModule
    cocycle: Cocycle2

    def __post_init__(self):
        if self.kernel.group != self.quotient:
            raise ExtensionError("kernel module is defined over a different group")
        if not self.kernel.is_finite:
            raise ExtensionError("kernel must be finite")
        if self.cocycle.group != self.quotient or self.cocycle.coefficients is not self.kernel:
            raise ExtensionError("cocycle does not live on (quotient, kernel)")

    @classmethod
    def split(cls, G: FiniteGroup, A: GModule) -> "GroupExtensionData":
        return cls(G, A, Cocycle2.zero(G, A))

    def to_json(self) -> dict:
        from .serialize import extension_to_json
        return extension_to_json(self)


@dataclass(eq=False)
class ModuleExtensionData:
    """0 -> kernel -> middle -> I_G -> 0 with explicit maps."""

    kernel: GModule
    middle: GModule
    inject: ModuleMap
    project: ModuleMap
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.check:
            self.validate()

    @property
    def group(self) -> FiniteGroup:
        return self.middle.group

    def validate(self) -> None:
        G = self.group
        IG = augmentation_ideal(G)
        T = self.project.target
        if T.ambient_rank != IG.ambient_rank or T.action != IG.action or T.relations.rows:
            raise ExtensionError("project must land in the augmentation ideal I_G")
        if self.inject.source is not self.kernel or self.inject.target is not self.middle:
            raise ExtensionError("inject must go from kernel to middle")
        if self.project.source is not self.middle:
            raise ExtensionError("project must start at middle")
        if not self.project.compose(self.inject).is_zero():
            raise ExtensionError("project ∘ inject is not zero")
        if not self.inject.is_injective():
            raise ExtensionError("inject is not injective")
        if not self.project.is_surjective():
            raise ExtensionError("project is not surjective")
        K, _ = map_kernel(self.project)
        if K.order() != self.kernel.order():
            raise ExtensionError(f"not exact in the middle: ker(project) has order {K.order()}, "
                                 f"kernel has order {self.kernel.order()}")


# --------------------------------------------------------------------------
# splitting module and the two dictionary maps


def splitting_module(eps: GroupExtensionData) -> GModule:
    """A ⊕ ⊕_{t≠1} Z b_t with s·b_t = b_{st} - b_s + f(s, t), b_1 = 0."""
    G, A, f = eps.quotient, eps.kernel, eps.cocycle
    n, ka = G.order, A.ambient_rank
    k = ka + n - 1
    rel = [list(r) + [0] * (n - 1) for r in A.relations.entries]
    mats = []
    for s in range(n):
        rows = [[0] * k for _ in range(k)]
        As = A.action[s]
        for i in range(ka):
            for j in range(ka):
                rows[i][j] = As[i, j]
        for t in range(1, n):
            col = ka + t - 1
            st = G.mul[s][t]
            if st:
                rows[ka + st - 1][col] += 1
            if s:
                rows[ka + s - 1][col] -= 1
            for i, x in enumerate(A.lift(f.value(s, t))):
                rows[i][col] += x
        mats.append(IntMatrix.from_rows(rows, k))
    return GModule(G, k, IntMatrix.from_rows(rel, k), mats,
                   name=f"M({A.name or 'A'})", check=False)


def star(eps: GroupExtensionData) -> ModuleExtensionData:
    G, A = eps.quotient, eps.kernel
    M = splitting_module(eps)
    n, ka = G.order, A.ambient_rank
    k = M.ambient_rank
    inj = IntMatrix.from_rows([[int(i == j) for j in range(ka)] for i in range(k)], ka)
    proj = IntMatrix.from_rows([[int(j == ka + i) for j in range(k)] for i in range(n - 1)], k)
    return ModuleExtensionData(A, M, ModuleMap(A, M, inj, check=False),
                               ModuleMap(M, augmentation_ideal(G), proj, check=False))


def canonical_section(e: ModuleExtensionData) -> list[list[int]]:
    """s(e_t) for t = 1..|G|-1: the canonical solve preimage of each basis vector."""
    P = e.project.matrix
    out = []
    for t in range(P.rows):
        b = [int(i == t) for i in range(P.rows)]
        try:
            out.append(solve(P, b))
        except NoSolution:
            raise ExtensionError(f"project is not surjective: e_{t + 1} has no preimage") from None
    return out


def _kernel_coordinates(e: ModuleExtensionData, vec) -> tuple[int, ...]:
    """Canonical coordinates in A of a middle vector lying in inject(A)."""
    A, M = e.kernel, e.middle
    F = e.inject.matrix
    if M.relations.rows:
        F = F.hstack(M.relations.T)
    try:
        y = solve(F, list(vec))
    except NoSolution:
        raise ExtensionError("value does not lie in the image of the kernel") from None
    return A.canonical(y[:A.ambient_rank])


def dagger(e: ModuleExtensionData) -> GroupExtensionData:
    """f(s, t) = s·sec(t) - sec(st) + sec(s) pulled back to A, with sec(1) = 0."""
    G, M, A = e.group, e.middle, e.kernel
    sec = canonical_section(e)
    zero = [0] * M.ambient_rank

    def s_of(g):
        return sec[g - 1] if g else zero

    table = {}
    for s in range(1, G.order):
        for t in range(1, G.order):
            st = G.mul[s][t]
            v = [a - b + c for a, b, c in zip(M.act(s, s_of(t)), s_of(st), s_of(s))]
            table[s, t] = _kernel_coordinates(e, v)
    return GroupExtensionData(G, A, Cocycle2(G, A, table))


# --------------------------------------------------------------------------
# middle group


@dataclass(frozen=True)
class MiddleGroup:
    group: FiniteGroup
    inject: tuple[int, ...]      # kernel element index -> group element
    project: tuple[int, ...]     # group element -> quotient element


def middle_group(eps: GroupExtensionData, cap: int = MIDDLE_GROUP_CAP) -> MiddleGroup:
    """A × G with (a, s)(b, t) = (a + s·b + f(s, t), st); (a, s) has index idx(a)·|G| + s.

    The table goes through full validation, so a broken cocycle surfaces as
    a NotAssociative error.
    """
    G, A, f = eps.quotient, eps.kernel, eps.cocycle
    n, size = G.order, A.order() * G.order
    if size > cap:
        raise CapExceeded(size, cap, "middle group order")
    elems = list(elements(A))
    index = {a.coords: i for i, a in enumerate(elems)}
    acted = [[index[a.act(s).coords] for a in elems] for s in range(n)]
    add = [[index[(a + b).coords] for b in elems] for a in elems]
    fval = [[index[f.element(s, t).coords] for t in range(n)] for s in range(n)]
    mul = []
    for x in range(size):
        a, s = divmod(x, n)
        row = []
        for y in range(size):
            b, t = divmod(y, n)
            c = add[add[a][acted[s][b]]][fval[s][t]]
            row.append(c * n + G.mul[s][t])
        mul.append(row)
    E = from_table(mul, name=f"ext({G.name or G.order})")
    return MiddleGroup(E, tuple(i * n for i in range(len(elems))),
                       tuple(x % n for x in range(size)))


# --------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: dict[int, tuple[int, ...]] | None

    def __bool__(self) -> bool:
        return self.equivalent


def _same_coefficients(e1: GroupExtensionData, e2: GroupExtensionData) -> None:
    if e1.quotient != e2.quotient:
        raise ExtensionError("extensions have different quotient groups")
    A, B = e1.kernel, e2.kernel
    if A is not B and (A.ambient_rank != B.ambient_rank or A.relations != B.relations
                       or A.action != B.action):
        raise ExtensionError("extensions have different kernel modules")


def equivalent(e1: GroupExtensionData, e2: GroupExtensionData) -> Equivalence:
    """Strong equivalence: f1 - f2 = ∂c; the witness is c."""
    _same_coefficients(e1, e2)
    A = e1.kernel
    f2 = e2.cocycle if e2.kernel is A else Cocycle2(e1.quotient, A, e2.cocycle.table)
    c = is_coboundary(e1.cocycle - f2)
    return Equivalence(c is not None, c)


def splitting_isomorphism(e1: GroupExtensionData, e2: GroupExtensionData,
                          c: dict[int, tuple[int, ...]]) -> ModuleMap:
    """M_(e1) -> M_(e2), a ↦ a, b_s ↦ b_s + c(s), for ∂c = f1 - f2 (validated)."""
    _same_coefficients(e1, e2)
    A = e1.kernel
    M1, M2 = splitting_module(e1), splitting_module(e2)
    ka, n = A.ambient_rank, e1.quotient.order
    k = ka + n - 1
    rows = [[int(i == j) for j in range(k)] for i in range(k)]
    for s in range(1, n):
        for i, x in enumerate(A.lift(c.get(s, (0,) * A.canonical_rank))):
            rows[i][ka + s - 1] += x
    return ModuleMap(M1, M2, IntMatrix.from_rows(rows, k))


# --------------------------------------------------------------------------
# round trips


@dataclass
class RoundTripReport:
    ok: bool
    checks: dict[str, bool]
    witness: list[list[int]] | None = None   # φ matrix for module round trips
    detail: str = ""

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checks": self.checks}
        if self.witness is not None:
            out["phi"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


def roundtrip_check(eps: GroupExtensionData) -> RoundTripReport:
    """dagger(star(eps)) against eps: literal table equality and equivalence."""
    e = star(eps)
    checks = {}
    try:
        e.validate()
        checks["star_exact"] = True
    except (ExtensionError, ModuleError):
        checks["star_exact"] = False
    back = dagger(e)
    checks["identical_tables"] = back.cocycle.table == eps.cocycle.table
    checks["equivalent"] = bool(equivalent(back, eps))
    return RoundTripReport(all(checks.values()), checks)


def roundtrip_check_module(e: ModuleExtensionData) -> RoundTripReport:
    """Certify M_(e†) ≅ middle(e) through φ|A = inject, φ(b_s) = sec(e_s)."""
    G, A, M = e.group, e.kernel, e.middle
    eps = dagger(e)
    e2 = star(eps)
    sec = canonical_section(e)
    ka, n = A.ambient_rank, G.order
    cols = [list(e.inject.matrix.col(j)) for j in range(ka)] + sec
    rows = [[col[i] for col in cols] for i in range(M.ambient_rank)]
    Phi = IntMatrix.from_rows(rows, ka + n - 1)
    checks = {}
    detail = ""
    try:
        phi = ModuleMap(e2.middle, M, Phi)
        checks["well_defined_equivariant"] = True
    except ModuleError as exc:
        phi = ModuleMap(e2.middle, M, Phi, check=False)
        checks["well_defined_equivariant"] = False
        detail = str(exc)
    checks["bijective"] = phi.is_isomorphism()
    lhs = phi.compose(e2.inject)
    checks["commutes_with_inject"] = all(
        M.equal(list(lhs.matrix.col(j)), list(e.inject.matrix.col(j))) for j in range(ka))
    down = e.project.compose(phi)
    checks["commutes_with_project"] = down.matrix == e2.project.matrix
    return RoundTripReport(all(checks.values()), checks, [list(r) for r in Phi.entries], detail)


# --------------------------------------------------------------------------
# p-parts


def p_quotient(eps: GroupExtensionData, p: int) -> GroupExtensionData:
    """Push the extension along A -> A_(p); defined when G is a p-group."""
    G, A = eps.quotient, eps.kernel
    if G.order != 1 and is_p_group(G) != p:
        raise ExtensionError(f"p_quotient needs a {p}-group, got order {G.order}")
    pi = p_primary_projection(A, p)
    Ap = pi.target
    table = {key: Ap.canonical(pi(A.lift(v))) for key, v in eps.cocycle.table.items()}
    return GroupExtensionData(G, Ap, Cocycle2(G, Ap, table))


def shifted(eps: GroupExtensionData, c: dict[int, tuple[int, ...]]) -> GroupExtensionData:
    """The extension with cocycle f + ∂c (same class)."""
    d = coboundary(eps.quotient, eps.kernel, c)
    return GroupExtensionData(eps.quotient, eps.kernel, eps.cocycle + d)
