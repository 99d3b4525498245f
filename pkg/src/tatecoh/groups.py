"""Finite groups given by multiplication tables.

Element 0 is always the identity.  Tables are validated eagerly, so every
downstream computation may assume the group axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from sympy import factorint

__all__ = [
    "FiniteGroup",
    "GroupError",
    "NotAssociative",
    "NoIdentity",
    "NoInverse",
    "cyclic",
    "direct_product",
    "dihedral8",
    "quaternion8",
    "from_table",
    "builtin",
    "BUILTIN_NAMES",
    "subgroups",
    "subgroup",
    "is_p_group",
    "SUBGROUP_CAP",
]

SUBGROUP_CAP = 64
_ASSOC_CHECK_CAP = 64


class GroupError(ValueError):
    """Base class for rejected multiplication tables."""


class NotAssociative(GroupError):
    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"table is not associative at ({a}, {b}, {c})")


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    def __init__(self, g: int):
        self.element = g
        super().__init__(f"element {g} has no two-sided inverse")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group of order ``order`` on the elements ``0..order-1``."""

    mul: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    name: str | None = None
    inv: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.mul)
        if n == 0:
            raise GroupError("empty table")
        if any(len(r) != n for r in self.mul):
            raise GroupError("table is not square")
        if any(not 0 <= x < n for r in self.mul for x in r):
            raise GroupError("table entry out of range")
        mul = self.mul
        if any(mul[0][g] != g or mul[g][0] != g for g in range(n)):
            raise NoIdentity("element 0 is not a two-sided identity")
        inv = []
        for g in range(n):
            row = mul[g]
            try:
                h = row.index(0)
            except ValueError:
                raise NoInverse(g) from None
            if mul[h][g] != 0:
                raise NoInverse(g)
            inv.append(h)
        if n <= _ASSOC_CHECK_CAP:
            for a in range(n):
                ra = mul[a]
                for b in range(n):
                    ab = ra[b]
                    rab, rb = mul[ab], mul[b]
                    for c in range(n):
                        if rab[c] != ra[rb[c]]:
                            raise NotAssociative(a, b, c)
        if self.labels is not None and len(self.labels) != n:
            raise GroupError("label count does not match order")
        object.__setattr__(self, "inv", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.mul)

    identity = 0

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.mul == other.mul

    def __hash__(self) -> int:
        return hash(self.mul)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul[x][g]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        e = 1
        for g in range(self.order):
            k = self.element_order(g)
            e = e * k // gcd(e, k)
        return e

    def is_abelian(self) -> bool:
        mul = self.mul
        return all(mul[a][b] == mul[b][a] for a in range(self.order) for b in range(a))

    def cyclic_generator(self) -> int | None:
        """Smallest element generating the whole group, or None."""
        n = self.order
        for g in range(n):
            if self.element_order(g) == n:
                return g
        return None

    def is_cyclic(self) -> bool:
        return self.cyclic_generator() is not None

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        x = 0
        for _ in range(k):
            x = self.mul[x][g]
        return x

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def to_json(self) -> dict:
        out = {"order": self.order, "mul": [list(r) for r in self.mul]}
        if self.labels:
            out["labels"] = list(self.labels)
        return out


def from_table(mul: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
               name: str | None = None) -> FiniteGroup:
    """Validate a table; if the identity is not element 0 it is relabelled to 0."""
    table = [list(map(int, r)) for r in mul]
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise GroupError("table must be a non-empty square")
    ident = next((e for e in range(n)
                  if all(table[e][g] == g and table[g][e] == g for g in range(n))), None)
    if ident is None:
        raise NoIdentity("no two-sided identity element")
    if ident != 0:
        perm = list(range(n))
        perm[0], perm[ident] = ident, 0  # new index -> old index
        pos = {old: new for new, old in enumerate(perm)}
        table = [[pos[table[perm[a]][perm[b]]] for b in range(n)] for a in range(n)]
        if labels is not None:
            labels = [labels[perm[i]] for i in range(n)]
    return FiniteGroup(tuple(map(tuple, table)), tuple(labels) if labels else None, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)),
                       tuple(f"s^{k}" if k > 1 else ("s" if k else "1") for k in range(n)),
                       f"C{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """(g, h) is element g*|H| + h."""
    m = H.order
    n = G.order * m
    mul = tuple(tuple(G.mul[a // m][b // m] * m + H.mul[a % m][b % m] for b in range(n))
                for a in range(n))
    labels = tuple(f"({G.label(a // m)},{H.label(a % m)})" for a in range(n))
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    return FiniteGroup(mul, labels, name)


def dihedral8() -> FiniteGroup:
    """Symmetries of the square: r^i s^j is element 4j + i."""
    def m(x, y):
        i, j = x % 4, x // 4
        k, l = y % 4, y // 4
        # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
        return ((i + (k if j == 0 else -k)) % 4) + 4 * ((j + l) % 2)
    labels = tuple(("r^%d" % i if i else "1") if j == 0 else ("r^%ds" % i if i else "s")
                   for j in range(2) for i in range(4))
    return FiniteGroup(tuple(tuple(m(a, b) for b in range(8)) for a in range(8)), labels, "D8")


def quaternion8() -> FiniteGroup:
    """Elements 1, -1, i, -i, j, -j, k, -k."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basis = {"1": (1, "1"), "-1": (-1, "1"), "i": (1, "i"), "-i": (-1, "i"),
             "j": (1, "j"), "-j": (-1, "j"), "k": (1, "k"), "-k": (-1, "k")}
    units = {("1", x): (1, x) for x in "1ijk"}
    units.update({(x, "1"): (1, x) for x in "1ijk"})
    units.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def m(a, b):
        sa, ua = basis[names[a]]
        sb, ub = basis[names[b]]
        s, u = units[ua, ub]
        s *= sa * sb
        return names.index(u if s > 0 else ("-" + u))
    return FiniteGroup(tuple(tuple(m(a, b) for b in range(8)) for a in range(8)),
                       tuple(names), "Q8")


def _builtins():
    c2, c4 = cyclic(2), cyclic(4)
    return {
        "C1": cyclic(1),
        "C2": c2,
        "C3": cyclic(3),
        "C4": c4,
        "C5": cyclic(5),
        "C8": cyclic(8),
        "C2xC2": direct_product(c2, c2),
        "C2xC4": direct_product(c2, c4),
        "D8": dihedral8(),
        "Q8": quaternion8(),
    }


BUILTIN_NAMES = tuple(_builtins())


def builtin(name: str) -> FiniteGroup:
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    table = _builtins()
    if name not in table:
        raise KeyError(f"unknown builtin group {name!r}; known: {', '.join(table)}")
    return table[name]


def subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All subgroups, sorted by order and then by element list."""
    if G.order > SUBGROUP_CAP:
        raise ValueError(f"subgroup enumeration capped at order {SUBGROUP_CAP}")
    mul = G.mul

    def close(gens: frozenset[int]) -> frozenset[int]:
        elems = {0} | set(gens)
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    for x in (mul[a][g], mul[g][a]):
                        if x not in elems:
                            elems.add(x)
                            new.append(x)
            frontier = new
        return frozenset(elems)

    seen = {frozenset([0])}
    todo = [frozenset([0])]
    while todo:
        H = todo.pop()
        for g in range(G.order):
            if g not in H:
                K = close(H | {g})
                if K not in seen:
                    seen.add(K)
                    todo.append(K)
    return sorted(seen, key=lambda H: (len(H), sorted(H)))


def subgroup(G: FiniteGroup, elements) -> tuple[FiniteGroup, list[int]]:
    """The subgroup on ``elements`` as a standalone group, plus its embedding.

    Elements are relabelled in increasing order, so 0 stays the identity.
    """
    elems = sorted(set(elements))
    if not elems or elems[0] != 0:
        raise GroupError("a subgroup must contain the identity")
    pos = {g: i for i, g in enumerate(elems)}
    try:
        mul = tuple(tuple(pos[G.mul[a][b]] for b in elems) for a in elems)
    except KeyError:
        raise GroupError("element set is not closed under multiplication") from None
    labels = tuple(G.label(g) for g in elems) if G.labels else None
    return FiniteGroup(mul, labels), elems


def is_p_group(G: FiniteGroup) -> int | None:
    """The prime p when |G| = p^k with k >= 1; None otherwise.

    The trivial group is a p-group for every p and gets None here; callers
    that accept it test ``G.order == 1`` separately.
    """
    f = factorint(G.order)
    if len(f) == 1:
        return next(iter(f))
    return None
