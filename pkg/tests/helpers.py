"""Shared builders and brute-force oracles for the test suite."""

from __future__ import annotations

import functools
import itertools
import random
from math import prod

from sympy import factorint

from tatecoh.exactla import AbelianInvariants, IntMatrix, snf
from tatecoh.extensions import ModuleExtensionData
from tatecoh.gmodules import (GModule, ModuleMap, augmentation_ideal, direct_sum, group_ring,
                              group_ring_mod, map_cokernel, trivial_module)
from tatecoh.groups import FiniteGroup, subgroups
from tatecoh.theorems import KernelSpec


def z_trivial(G: FiniteGroup) -> GModule:
    return trivial_module(G, AbelianInvariants(free_rank=1))


def sign_module(G: FiniteGroup, m: int, H) -> GModule:
    """Z/m (m = 0 for Z) with g acting by +1 on H and -1 off it."""
    acts = [[[1 if g in H else -1]] for g in range(G.order)]
    return GModule(G, 1, [[m]], acts)


def permutation_module(G: FiniteGroup, H, m: int = 0) -> GModule:
    return KernelSpec("perm", (), m, tuple(sorted(H))).build(G)


def basic_pieces(G: FiniteGroup, rng: random.Random) -> list[GModule]:
    n = G.order
    pieces = [z_trivial(G), augmentation_ideal(G), group_ring(G),
              trivial_module(G, [rng.choice([2, 3, 4, 6, n])]),
              group_ring_mod(G, rng.choice([2, n]))]
    subs = subgroups(G)
    for H in subs:
        if 2 * len(H) == n:
            pieces.append(sign_module(G, rng.choice([0, 3, 4, 5]), H))
    for H in subs:
        if 1 < n // len(H) < n:
            pieces.append(permutation_module(G, H, rng.choice([0, 2])))
    return pieces


def quotient_by_orbit(M: GModule, v: list[int]) -> GModule:
    """M / (Z[G]·v)."""
    G = M.group
    F = group_ring(G)
    cols = [M.act(h, v) for h in range(G.order)]
    mat = IntMatrix.from_rows([[c[i] for c in cols] for i in range(M.ambient_rank)], G.order)
    Q, _ = map_cokernel(ModuleMap(F, M, mat))
    return Q


def random_module(G: FiniteGroup, rng: random.Random, max_rank: int = 8) -> GModule:
    """A direct sum of 1-2 basic pieces, optionally cut down by a random cyclic submodule."""
    pool = [P for P in basic_pieces(G, rng) if P.ambient_rank <= max_rank]
    parts = rng.sample(pool, rng.choice([1, 1, 2]))
    while sum(P.ambient_rank for P in parts) > max_rank:
        parts.pop()
    M = direct_sum(*parts) if len(parts) > 1 else parts[0]
    if rng.random() < 0.5 and M.ambient_rank:
        v = [rng.randint(-2, 2) for _ in range(M.ambient_rank)]
        M = quotient_by_orbit(M, v)
    return M


# --------------------------------------------------------------------------
# brute force over the elements of a finite module


def _elements(M: GModule):
    return list(itertools.product(*[range(m) for m in M.moduli]))


def _reduce(M, v):
    return tuple(x % m for x, m in zip(v, M.moduli))


def _apply(M, g, v):
    A = M.canonical_action[g]
    return _reduce(M, [sum(a * x for a, x in zip(row, v)) for row in A])


def _span(M, gens) -> set:
    """Subgroup generated by ``gens`` (closure under addition)."""
    zero = tuple(0 for _ in M.moduli)
    seen = {zero}
    frontier = [zero]
    gens = [g for g in gens if any(g)]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = _reduce(M, [x + y for x, y in zip(a, g)])
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    return seen


def invariants_from_torsion_counts(count, exponent: int) -> AbelianInvariants:
    """Recover a finite abelian group from ``count(d) = #{x : d·x = 0}``."""
    diag = []
    for p, a in factorint(exponent).items():
        prev = 0
        layers = []
        for k in range(1, a + 1):
            c = count(p ** k)
            t = 0
            while c % p == 0 and c > 1:
                c //= p
                t += 1
            layers.append(t - prev)
            prev = t
        # layers[k-1] = #{cyclic p-factors of exponent >= k}
        for k in range(1, a + 1):
            nxt = layers[k] if k < a else 0
            diag += [p ** k] * (layers[k - 1] - nxt)
    return AbelianInvariants.from_diagonal(diag)


def brute_tate_low(M: GModule, i: int) -> AbelianInvariants:
    """Ĥ^0 or Ĥ^-1 of a finite module by enumerating its elements."""
    G = M.group
    elems = _elements(M)

    def norm(v):
        acc = [0] * len(v)
        for g in range(G.order):
            acc = [a + b for a, b in zip(acc, _apply(M, g, v))]
        return _reduce(M, acc)

    if i == 0:
        top = [v for v in elems if all(_apply(M, g, v) == v for g in range(G.order))]
        bottom = _span(M, {norm(v) for v in elems})
    elif i == -1:
        zero = tuple(0 for _ in M.moduli)
        top = [v for v in elems if norm(v) == zero]
        bottom = _span(M, {_reduce(M, [a - b for a, b in zip(_apply(M, g, v), v)])
                           for g in range(G.order) for v in elems})
    else:
        raise ValueError("brute force covers degrees 0 and -1")
    if len(top) == len(bottom):
        return AbelianInvariants()

    def count(d):
        killed = sum(1 for v in top if _reduce(M, [d * x for x in v]) in bottom)
        return killed // len(bottom)

    e = len(top) // len(bottom)
    return invariants_from_torsion_counts(count, e)


def merge(*xs: AbelianInvariants) -> AbelianInvariants:
    return AbelianInvariants.from_diagonal([d for x in xs for d in x.factors],
                                           sum(x.free_rank for x in xs))


def order(X: AbelianInvariants) -> int:
    return prod(X.factors)


def scrambled(e: ModuleExtensionData, rng: random.Random) -> ModuleExtensionData:
    """The same extension with the middle term written in a random unimodular basis."""
    k = e.middle.ambient_rank
    U = IntMatrix.identity(k)
    for _ in range(3 * k):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i != j:
            E = [[int(a == b) for b in range(k)] for a in range(k)]
            E[i][j] = rng.choice([-2, -1, 1, 2])
            U = IntMatrix.from_rows(E, k) @ U
    Uinv = unimodular_inverse(U)
    M = e.middle
    # relation vectors r become U·r
    rel = M.relations @ U.T if M.relations.rows else M.relations
    acts = [U @ a @ Uinv for a in M.action]
    M2 = GModule(M.group, k, rel, acts)
    inj = ModuleMap(e.kernel, M2, U @ e.inject.matrix)
    proj = ModuleMap(M2, e.project.target, e.project.matrix @ Uinv)
    return ModuleExtensionData(e.kernel, M2, inj, proj)


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    r = snf(U)
    # U = Uinv_s · S · Vinv_s with S = ±I, so U^{-1} = V · S · U_s
    return r.V @ r.S @ r.U


class TateLog:
    """Every Tate group handed back to the tests, with the order of its group."""

    def __init__(self):
        self.count = 0
        self.violations: list[str] = []

    def record(self, n: int, i: int, X: AbelianInvariants) -> None:
        self.count += 1
        if not (X.is_finite and X.killed_by(n)):
            self.violations.append(f"order {n}, degree {i}: {X}")


TATE_LOG = TateLog()


def recording(fn):
    """Wrap a (G, M, i) -> invariants routine so each result lands in TATE_LOG."""
    @functools.wraps(fn)
    def wrapper(G, M, i, *args, **kw):
        X = fn(G, M, i, *args, **kw)
        TATE_LOG.record(G.order, i, X)
        return X
    wrapper.recorded = True
    return wrapper
