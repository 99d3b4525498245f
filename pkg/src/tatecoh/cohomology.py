"""Tate cohomology of finite groups with coefficients in presented modules.

Degrees >= 1 use the normalized bar cochain complex, degrees <= -2 the
normalized bar chain complex (Ĥ^{-n} = H_{n-1}), and degrees 0, -1 the
norm map.  All three reduce to one primitive: the invariants of
``ker(D_next) / (im(D_prev) + relations)`` for sparse integer matrices over
a space whose coordinates carry moduli.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

from .exactla import (AbelianInvariants, IntMatrix, LatticeEchelon, NoSolution,
                      echelon_invariants, modular_invariants, snf, solve)
from .gmodules import GModule, restrict
from .groups import FiniteGroup, subgroups

__all__ = [
    "tate",
    "cyclic_tate_oracle",
    "Cocycle2",
    "H2Description",
    "h2",
    "is_coboundary",
    "coboundary",
    "is_cohomologically_trivial",
    "TrivialityVerdict",
    "CohomologyError",
    "DegreeWindowError",
    "CapExceeded",
    "DEFAULT_WINDOW",
    "DEFAULT_COCHAIN_CAP",
]

DEFAULT_WINDOW = 6
DEFAULT_COCHAIN_CAP = 20000
H2_MODULE_CAP = 64
H2_GROUP_CAP = 16
H2_ENUMERATION_CAP = 512


class CohomologyError(ValueError):
    pass


class DegreeWindowError(CohomologyError):
    pass


class CapExceeded(CohomologyError):
    def __init__(self, required: int, cap: int, what: str = "cochain space"):
        self.required, self.cap = required, cap
        super().__init__(f"{what}: {required} exceeds the cap {cap} "
                         f"(raise the cap to at least {required})")


# --------------------------------------------------------------------------
# module data in canonical coordinates


@dataclass(frozen=True)
class _Coeffs:
    n: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    moduli: tuple[int, ...]
    action: tuple  # per element, k x k nested tuples

    @property
    def k(self) -> int:
        return len(self.moduli)


def _coeffs(M: GModule) -> _Coeffs:
    G = M.group
    return _Coeffs(G.order, G.mul, G.inv, M.moduli, M.canonical_action)


def _blocks(C: _Coeffs) -> list[_Coeffs]:
    """Split into direct summands spanned by canonical coordinates."""
    k = C.k
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for A in C.action:
        for i in range(k):
            row = A[i]
            for j in range(k):
                if i != j and row[j]:
                    a, b = find(i), find(j)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    if len(groups) <= 1:
        return [C]
    out = []
    for idx in groups.values():
        acts = tuple(tuple(tuple(A[i][j] for j in idx) for i in idx) for A in C.action)
        out.append(_Coeffs(C.n, C.mul, C.inv, tuple(C.moduli[i] for i in idx), acts))
    return out


# --------------------------------------------------------------------------
# normalized bar complexes


def _tuples(n: int, q: int):
    return list(itertools.product(range(1, n), repeat=q))


def _index(t: Sequence[int], n: int) -> int:
    i = 0
    for g in t:
        i = i * (n - 1) + (g - 1)
    return i


def _emit(cols, ti, ui, k, sign, A):
    """Add sign*A (A None = identity) from input block ti to output block ui."""
    for c in range(k):
        col = cols[ti * k + c]
        if A is None:
            key = ui * k + c
            col[key] = col.get(key, 0) + sign
        else:
            for r in range(k):
                a = A[r][c]
                if a:
                    key = ui * k + r
                    col[key] = col.get(key, 0) + sign * a


def _clean(cols):
    return [{r: x for r, x in col.items() if x} for col in cols]


def _cochain_differential(C: _Coeffs, q: int) -> list[dict[int, int]]:
    """Columns of d^q: C^q -> C^{q+1} (normalized inhomogeneous cochains)."""
    n, k, mul = C.n, C.k, C.mul
    dim_in = (n - 1) ** q
    cols = [dict() for _ in range(dim_in * k)]
    for u in _tuples(n, q + 1):
        ui = _index(u, n)
        _emit(cols, _index(u[1:], n), ui, k, 1, C.action[u[0]])
        for i in range(1, q + 1):
            h = mul[u[i - 1]][u[i]]
            if h:
                t = u[:i - 1] + (h,) + u[i + 1:]
                _emit(cols, _index(t, n), ui, k, (-1) ** i, None)
        _emit(cols, _index(u[:q], n), ui, k, (-1) ** (q + 1), None)
    return _clean(cols)


def _chain_differential(C: _Coeffs, q: int) -> list[dict[int, int]]:
    """Columns of d_q: C_q -> C_{q-1} for homology with coefficients in M (q >= 1)."""
    n, k, mul, inv = C.n, C.k, C.mul, C.inv
    tuples = _tuples(n, q)
    cols = [dict() for _ in range(len(tuples) * k)]
    for t in tuples:
        ti = _index(t, n)
        _emit(cols, ti, _index(t[1:], n), k, 1, C.action[inv[t[0]]])
        for i in range(1, q):
            h = mul[t[i - 1]][t[i]]
            if h:
                _emit(cols, ti, _index(t[:i - 1] + (h,) + t[i + 1:], n), k, (-1) ** i, None)
        _emit(cols, ti, _index(t[:q - 1], n), k, (-1) ** q, None)
    return _clean(cols)


def _norm_columns(C: _Coeffs) -> list[dict[int, int]]:
    k = C.k
    cols = []
    for c in range(k):
        col = {}
        for A in C.action:
            for r in range(k):
                if A[r][c]:
                    col[r] = col.get(r, 0) + A[r][c]
        cols.append({r: x for r, x in col.items() if x})
    return cols


# --------------------------------------------------------------------------
# subquotients


@dataclass
class _Subquotient:
    invariants: AbelianInvariants
    kernel_rows: list = field(default_factory=list)   # generators of K, keyed by mid coordinate
    presentation: list = field(default_factory=list)  # relations of K/L on those generators
    modulus: int = 0                                   # reduce presentation entries by this


def _subquotient(dim_mid: int, mod_mid: Sequence[int],
                 next_cols: Sequence[dict[int, int]], dim_next: int, mod_next: Sequence[int],
                 prev_vectors: Iterable[dict[int, int]], keep_data: bool = False) -> _Subquotient:
    """Invariants of ker(D_next) / (span(prev) + relations) at the middle space.

    ``next_cols[j]`` is the image of the j-th middle coordinate.  Moduli are
    per coordinate, 0 meaning a free coordinate.  Raises AssertionError if
    some ``prev`` vector is not a cycle (D_next ∘ D_prev != 0).
    """
    reducers = {r: m for r, m in enumerate(mod_next) if m}
    reducers.update({dim_next + j: m for j, m in enumerate(mod_mid) if m})
    ech = LatticeEchelon(reducers)
    for r, m in enumerate(mod_next):
        if m:
            ech.add({r: m})
    for j, m in enumerate(mod_mid):
        if m:
            ech.add({dim_next + j: m})
    for j in range(dim_mid):
        v = dict(next_cols[j]) if j < len(next_cols) else {}
        v[dim_next + j] = v.get(dim_next + j, 0) + 1
        ech.add(v)
    # Howell property: K is spanned by these rows plus the middle moduli
    mid_mods = {j: m for j, m in enumerate(mod_mid) if m}
    finite = all(mod_mid) and dim_mid > 0
    e = lcm(*mod_mid) if finite else 0
    kbasis = LatticeEchelon({j: e for j in range(dim_mid)} if e else None)
    for c, row in ech.rows():
        if c >= dim_next:
            kbasis.add({key - dim_next: x for key, x in row.items()})
    gens = [{j: m} for j, m in mid_mods.items()]
    for g in gens:
        kbasis.add(g)
    krows = kbasis.rows()
    rank = len(krows)
    pos = {c: i for i, (c, _) in enumerate(krows)}

    def reduced(v):
        w = {}
        for j, x in v.items():
            m = mid_mods.get(j)
            if m:
                x %= m
            if x:
                w[j] = x
        return w

    rels = []
    if e:
        # K/eZ is presented by the Howell rows modulo their annihilator relations
        for c, row in krows:
            g = row[c]
            tail = {k: (e // g) * x for k, x in row.items() if k != c}
            d = kbasis.coordinates(tail, modular=True) if tail else {}
            rel = {pos[p]: -q for p, q in d.items()}
            rel[pos[c]] = rel.get(pos[c], 0) + e // g
            rels.append(rel)
    for w in itertools.chain(gens, map(reduced, prev_vectors)):
        c = kbasis.coordinates(w, modular=bool(e))
        if c is None:
            raise AssertionError("boundary is not a cycle: D_next ∘ D_prev != 0")
        if c:
            rels.append({pos[p]: q for p, q in c.items()})
    if e:
        inv = modular_invariants(rels, rank, e)
    else:
        qech = LatticeEchelon()
        for r in rels:
            qech.add(r)
        inv = echelon_invariants(qech.rows(), rank)
    out = _Subquotient(inv)
    if keep_data:
        out.kernel_rows = krows
        out.presentation = rels
        out.modulus = e
    return out


def _lattice_torsion(dim_mid: int, prev_vectors: Iterable[dict[int, int]], n: int) -> AbelianInvariants:
    """Torsion of Z^dim_mid / span(prev), given that it is killed by n.

    For a complex of lattices whose homology at the middle is finite, the
    cycles are the saturation of the boundaries, so the homology is exactly
    the torsion of the cokernel of the incoming map.  Its invariant factors
    divide n, hence they survive reduction modulo n^2 unchanged, while the
    free part of the cokernel shows up as factors equal to n^2.
    """
    if n == 1 or dim_mid == 0:
        return AbelianInvariants()
    big = n * n
    inv = modular_invariants(prev_vectors, dim_mid, big)
    return AbelianInvariants(tuple(f for f in inv.factors if f != big), 0)


def _space_dims(n: int, k: int, i: int) -> int:
    if i >= 1:
        return (n - 1) ** (i + 1) * k
    if i <= -2:
        return (n - 1) ** (-i) * k
    return k


def _truncated_moduli(C: _Coeffs) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Moduli for the middle and next spaces that leave Tate cohomology unchanged.

    Free coordinates get modulus q = n·e in the middle space and q² in the
    next one, where e is the exponent of the torsion and n = |G| kills the
    answer.  A middle vector that is a cycle modulo q² differs from a true
    cycle by q times something, because the torsion of the cokernel of the
    next differential is killed by n·e; and a true cycle that is a boundary
    modulo q is a boundary, because n kills cycles modulo boundaries while e
    kills the torsion of the space of non-cycles.
    """
    e = lcm(*(m for m in C.moduli if m)) if any(C.moduli) else 1
    q = C.n * e
    return (tuple(m or q for m in C.moduli), tuple(m or q * q for m in C.moduli))


def _tate_block(C: _Coeffs, i: int, exact: bool = False) -> AbelianInvariants:
    n, k = C.n, C.k
    if k == 0 or n == 1:
        return AbelianInvariants()
    if not exact and not any(C.moduli):
        return _tate_lattice(C, i)
    if exact or all(C.moduli):
        mods = mods_next = C.moduli
    else:
        mods, mods_next = _truncated_moduli(C)
    if i == 0:
        nxt = _cochain_differential(C, 0)
        return _subquotient(k, mods, nxt, (n - 1) * k, mods_next * (n - 1),
                            _norm_columns(C)).invariants
    if i == -1:
        prev = _chain_differential(C, 1) if n > 1 else []
        return _subquotient(k, mods, _norm_columns(C), k, mods_next, prev).invariants
    if i >= 1:
        dim_mid = (n - 1) ** i
        nxt = _cochain_differential(C, i)
        prev = _cochain_differential(C, i - 1)
        return _subquotient(dim_mid * k, mods * dim_mid, nxt, dim_mid * (n - 1) * k,
                            mods_next * (dim_mid * (n - 1)), prev).invariants
    q = -i - 1
    dim_mid = (n - 1) ** q
    nxt = _chain_differential(C, q)
    prev = _chain_differential(C, q + 1) if dim_mid else []
    dim_next = (n - 1) ** (q - 1)
    return _subquotient(dim_mid * k, mods * dim_mid, nxt, dim_next * k, mods_next * dim_next,
                        prev).invariants


def _tate_lattice(C: _Coeffs, i: int) -> AbelianInvariants:
    n, k = C.n, C.k
    if i == 0:
        return _lattice_torsion(k, _norm_columns(C), n)
    if i == -1:
        return _lattice_torsion(k, _chain_differential(C, 1) if n > 1 else [], n)
    if i >= 1:
        return _lattice_torsion((n - 1) ** i * k, _cochain_differential(C, i - 1), n)
    q = -i - 1
    return _lattice_torsion((n - 1) ** q * k, _chain_differential(C, q + 1), n)


def tate(G: FiniteGroup, M: GModule, i: int, *, window: int = DEFAULT_WINDOW,
         cochain_cap: int = DEFAULT_COCHAIN_CAP, exact: bool = False) -> AbelianInvariants:
    """Invariant factors of the Tate cohomology group Ĥ^i(G, M).

    ``exact`` keeps free coordinates free (plain integer elimination, no
    truncation modulo a multiple of |G|).  It is much slower and exists to
    cross-check the default route on small inputs.
    """
    if M.group != G:
        raise CohomologyError("module is defined over a different group")
    if abs(i) > window:
        raise DegreeWindowError(f"degree {i} outside the window [-{window}, {window}] "
                                "(widen it with the window argument)")
    total = AbelianInvariants()
    for B in _blocks(_coeffs(M)):
        need = _space_dims(B.n, B.k, i)
        if need > cochain_cap:
            raise CapExceeded(need, cochain_cap)
        total = total + _tate_block(B, i, exact)
    return total


def cyclic_tate_oracle(G: FiniteGroup, M: GModule, i: int) -> AbelianInvariants:
    """Tate cohomology of a cyclic group from the two-periodic complex.

    Even degrees give ker(s - 1) / N·M, odd degrees ker(N) / (s - 1)·M, for
    a generator s.  Nothing from the bar resolution is used.
    """
    if M.group != G:
        raise CohomologyError("module is defined over a different group")
    s = G.cyclic_generator()
    if s is None:
        raise CohomologyError("group is not cyclic")
    C = _coeffs(M)
    k = C.k
    if k == 0:
        return AbelianInvariants()
    A = C.action[s]
    sm1 = [{r: A[r][c] - (r == c) for r in range(k) if A[r][c] - (r == c)} for c in range(k)]
    norm = _norm_columns(C)
    if not any(C.moduli):
        return _lattice_torsion(k, norm if i % 2 == 0 else sm1, C.n)
    mods, mods_next = _truncated_moduli(C)
    if i % 2 == 0:
        return _subquotient(k, mods, sm1, k, mods_next, norm).invariants
    return _subquotient(k, mods, norm, k, mods_next, sm1).invariants


# --------------------------------------------------------------------------
# 2-cocycles


class Cocycle2:
    """A normalized 2-cocycle f: G x G -> A.

    ``table`` maps pairs of non-identity elements to canonical coordinates
    of A; pairs involving the identity are zero by normalization.
    """

    def __init__(self, group: FiniteGroup, coefficients: GModule,
                 table: dict[tuple[int, int], Sequence[int]], check: bool = True):
        if coefficients.group != group:
            raise CohomologyError("coefficient module lives over a different group")
        self.group = group
        self.coefficients = coefficients
        k = coefficients.canonical_rank
        mods = coefficients.moduli
        full = {}
        for s in range(1, group.order):
            for t in range(1, group.order):
                v = table.get((s, t), (0,) * k)
                if len(v) != k:
                    raise CohomologyError(f"value at {(s, t)} has {len(v)} coordinates, expected {k}")
                full[s, t] = tuple(int(x) % m if m else int(x) for x, m in zip(v, mods))
        for (s, t), v in table.items():
            if (s == 0 or t == 0) and any(int(x) % m if m else x for x, m in zip(v, mods)):
                raise CohomologyError(f"cocycle is not normalized at {(s, t)}")
        self.table = full
        if check:
            bad = self.defect()
            if bad is not None:
                raise CohomologyError(f"cocycle identity fails at {bad}")

    @classmethod
    def zero(cls, group: FiniteGroup, A: GModule) -> "Cocycle2":
        return cls(group, A, {}, check=False)

    @classmethod
    def from_vector(cls, group, A, vec, check=True) -> "Cocycle2":
        k = A.canonical_rank
        pairs = _tuples(group.order, 2)
        return cls(group, A, {p: tuple(vec[i * k:(i + 1) * k]) for i, p in enumerate(pairs)},
                   check=check)

    @classmethod
    def normalized_from(cls, group: FiniteGroup, A: GModule,
                        full_table: dict[tuple[int, int], Sequence[int]]) -> "Cocycle2":
        """Shift an arbitrary cocycle (all pairs given) by a coboundary so f(1, 1) = 0.

        Uses f'(s, t) = f(s, t) - s·f(1, 1), which subtracts the coboundary of
        the constant cochain f(1, 1).
        """
        f11 = A.element_from_canonical(full_table[0, 0])
        table = {}
        for s in range(group.order):
            shift = f11.act(s)
            for t in range(group.order):
                v = A.element_from_canonical(full_table[s, t]) - shift
                if s and t:
                    table[s, t] = v.coords
                elif not v.is_zero():
                    raise CohomologyError(f"input is not a cocycle (fails at {(s, t)})")
        return cls(group, A, table)

    def value(self, s: int, t: int) -> tuple[int, ...]:
        if s == 0 or t == 0:
            return (0,) * self.coefficients.canonical_rank
        return self.table[s, t]

    def element(self, s: int, t: int):
        return self.coefficients.element_from_canonical(self.value(s, t))

    def vector(self) -> list[int]:
        out = []
        for p in _tuples(self.group.order, 2):
            out.extend(self.table[p])
        return out

    def defect(self):
        """First triple where the cocycle identity fails, or None."""
        G = self.group
        mul = G.mul
        for s, t, u in itertools.product(range(1, G.order), repeat=3):
            lhs = (self.element(t, u).act(s) - self.element(mul[s][t], u)
                   + self.element(s, mul[t][u]) - self.element(s, t))
            if not lhs.is_zero():
                return (s, t, u)
        return None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cocycle2) and self.group == other.group
                and self.coefficients is other.coefficients and self.table == other.table)

    def __hash__(self):
        return hash(tuple(sorted(self.table.items())))

    def __sub__(self, other: "Cocycle2") -> "Cocycle2":
        A = self.coefficients
        return Cocycle2(self.group, A, {p: (A.element_from_canonical(v)
                                            - A.element_from_canonical(other.table[p])).coords
                                        for p, v in self.table.items()}, check=False)

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        A = self.coefficients
        return Cocycle2(self.group, A, {p: (A.element_from_canonical(v)
                                            + A.element_from_canonical(other.table[p])).coords
                                        for p, v in self.table.items()}, check=False)

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.table.values())

    def to_json(self) -> dict:
        from .serialize import cocycle_to_json
        return cocycle_to_json(self)


def coboundary(G: FiniteGroup, A: GModule, c: dict[int, Sequence[int]]) -> Cocycle2:
    """∂c(s, t) = s·c(t) - c(st) + c(s) for a cochain with c(1) = 0."""
    k = A.canonical_rank
    zero = (0,) * k

    def el(g):
        return A.element_from_canonical(c.get(g, zero) if g else zero)

    table = {}
    for s in range(1, G.order):
        for t in range(1, G.order):
            table[s, t] = (el(t).act(s) - el(G.mul[s][t]) + el(s)).coords
    return Cocycle2(G, A, table, check=False)


@dataclass
class H2Description:
    """H^2(G, A): class group plus one canonical cocycle per class."""

    class_group: AbelianInvariants
    representatives: list[Cocycle2]
    complete: bool

    def index_of(self, f: Cocycle2) -> int:
        """Position of the class of ``f`` in ``representatives``."""
        for i, r in enumerate(self.representatives):
            if is_coboundary(f - r) is not None:
                return i
        raise KeyError("class not among the listed representatives")


def _h2_data(G: FiniteGroup, A: GModule):
    C = _coeffs(A)
    n, k = C.n, C.k
    mods = C.moduli
    d1 = _cochain_differential(C, 1)
    d2 = _cochain_differential(C, 2)
    dim2 = (n - 1) ** 2
    sq = _subquotient(dim2 * k, mods * dim2, d2, dim2 * (n - 1) * k, mods * (dim2 * (n - 1)),
                      d1, keep_data=True)
    return C, sq, d1


def _coboundary_hermite(C: _Coeffs, d1, dim: int) -> list[tuple[int, dict[int, int]]]:
    mods = C.moduli * ((C.n - 1) ** 2)
    ech = LatticeEchelon({j: m for j, m in enumerate(mods)})
    for j, m in enumerate(mods):
        ech.add({j: m})
    for col in d1:
        ech.add(col)
    return ech.rows()


def _canonical_rep(vec: list[int], rows, moduli: Sequence[int]) -> list[int]:
    """Lexicographically least vector in vec + (coboundaries + moduli).

    ``rows`` is a Howell basis with per-column reducers ``moduli``: the
    pivot at column c (or the modulus when there is none) generates the
    c-th entries of lattice vectors vanishing before c.
    """
    v = list(vec)
    piv = dict(rows)
    for c, m in enumerate(moduli):
        r = piv.get(c)
        if r is None:
            v[c] %= m
            continue
        q = v[c] // r[c]
        if q:
            for j, x in r.items():
                v[j] -= q * x
    return v


def h2(G: FiniteGroup, A: GModule, enumerate: bool = True, *,
       module_cap: int = H2_MODULE_CAP, group_cap: int = H2_GROUP_CAP,
       enumeration_cap: int = H2_ENUMERATION_CAP) -> H2Description:
    """Second cohomology via normalized cocycles modulo normalized coboundaries."""
    if A.group != G:
        raise CohomologyError("module is defined over a different group")
    if not A.is_finite:
        raise CohomologyError("H^2 enumeration needs a finite coefficient module")
    if A.order() > module_cap:
        raise CapExceeded(A.order(), module_cap, "coefficient module order")
    if G.order > group_cap:
        raise CapExceeded(G.order, group_cap, "group order")
    if G.order == 1 or A.canonical_rank == 0:
        return H2Description(AbelianInvariants(), [Cocycle2.zero(G, A)], True)
    C, sq, d1 = _h2_data(G, A)
    if not enumerate:
        return H2Description(sq.invariants, [], False)
    rank = len(sq.kernel_rows)
    e = sq.modulus
    dense = [[row.get(j, 0) % e for j in range(rank)] for row in sq.presentation]
    dense += [[e * (i == j) for j in range(rank)] for i in range(rank)]
    res = snf(IntMatrix.from_rows(dense, rank))
    diag = res.diagonal + [0] * (rank - len(res.diagonal))
    ncoords = (C.n - 1) ** 2 * C.k
    gens, orders = [], []
    for j in range(rank):
        d = diag[j]
        if d == 1:
            continue
        comb = res.Vinv.row(j)
        vec = [0] * ncoords
        for coef, (_, row) in zip(comb, sq.kernel_rows):
            if coef:
                for key, x in row.items():
                    vec[key] += coef * x
        gens.append(vec)
        orders.append(d)
    if any(d == 0 for d in orders):
        raise CohomologyError("infinite H^2 for a finite module (inconsistent data)")
    hermite = _coboundary_hermite(C, d1, ncoords)
    total = 1
    for d in orders:
        total *= d
    complete = total <= enumeration_cap
    reps = set()
    for idx, combo in zip(range(enumeration_cap), itertools.product(*(range(d) for d in orders))):
        vec = [0] * ncoords
        for a, g in zip(combo, gens):
            if a:
                for j in range(ncoords):
                    vec[j] += a * g[j]
        reps.add(tuple(_canonical_rep(vec, hermite, list(C.moduli) * ((C.n - 1) ** 2))))
    reps = sorted(reps)
    cocycles = [Cocycle2.from_vector(G, A, list(r), check=False) for r in reps]
    return H2Description(sq.invariants, cocycles, complete)


def is_coboundary(f: Cocycle2) -> dict[int, tuple[int, ...]] | None:
    """A cochain c with ∂c = f (canonical choice), or None."""
    G, A = f.group, f.coefficients
    if G.order == 1 or A.canonical_rank == 0:
        return {}
    C = _coeffs(A)
    n, k = C.n, C.k
    d1 = _cochain_differential(C, 1)
    rows = (n - 1) ** 2 * k
    cols = (n - 1) * k
    dense = [[0] * cols for _ in range(rows)]
    for j, col in enumerate(d1):
        for r, x in col.items():
            dense[r][j] = x
    try:
        x = solve(IntMatrix(rows, cols, tuple(map(tuple, dense))), f.vector(),
                  list(C.moduli) * ((n - 1) ** 2))
    except NoSolution:
        return None
    out = {}
    for g in range(1, n):
        out[g] = A.element_from_canonical(x[(g - 1) * k:g * k]).coords
    return out


# --------------------------------------------------------------------------
# cohomological triviality


@dataclass
class TrivialityVerdict:
    trivial: bool
    evidence: tuple[tuple[int, ...], int] | None
    checked: list[tuple[tuple[int, ...], int, AbelianInvariants]]

    def __bool__(self) -> bool:
        return self.trivial


def is_cohomologically_trivial(G: FiniteGroup, M: GModule, window: tuple[int, int] = (-2, 2),
                               **kw) -> TrivialityVerdict:
    """Check Ĥ^i(H, M) = 0 over all subgroups H.

    Degrees 0 and 1 are checked for every subgroup first (two consecutive
    vanishing degrees on all subgroups suffice); the remaining degrees of
    ``window`` are then checked as well.  The first nonvanishing pair is
    reported as evidence.
    """
    checked = []
    lo, hi = window
    order = [0, 1] + [i for i in range(lo, hi + 1) if i not in (0, 1)]
    subs = subgroups(G)
    for i in order:
        for H in subs:
            MH = restrict(M, H)
            h = tate(MH.group, MH, i, **kw)
            checked.append((tuple(sorted(H)), i, h))
            if not h.is_trivial:
                return TrivialityVerdict(False, (tuple(sorted(H)), i), checked)
    return TrivialityVerdict(True, None, checked)
