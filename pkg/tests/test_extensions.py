import random

import pytest
from hypothesis import given, strategies as st

from helpers import scrambled, sign_module
from tatecoh.cohomology import CapExceeded, Cocycle2, h2, tate
from tatecoh.exactla import AbelianInvariants, IntMatrix
from tatecoh.extensions import (ExtensionError, GroupExtensionData, ModuleExtensionData,
                                canonical_section, dagger, equivalent, middle_group, p_quotient,
                                roundtrip_check, roundtrip_check_module, shifted,
                                splitting_isomorphism, splitting_module, star)
from tatecoh.gmodules import ModuleMap, augmentation_ideal, direct_sum, trivial_module
from tatecoh.groups import NotAssociative, builtin
from tatecoh.theorems import census_kernels

AI = AbelianInvariants


def c2_z2(nontrivial=True):
    G = builtin("C2")
    A = trivial_module(G, [2])
    f = Cocycle2(G, A, {(1, 1): (1,)} if nontrivial else {})
    return GroupExtensionData(G, A, f)


def all_extensions(name, bound):
    G = builtin(name)
    for spec in census_kernels(G, bound):
        A = spec.build(G)
        for f in h2(G, A).representatives:
            yield GroupExtensionData(G, A, f)


# -- splitting module --------------------------------------------------------------


def test_split_extension_gives_direct_sum():
    for name in ["C2", "C3", "C2xC2"]:
        G = builtin(name)
        A = trivial_module(G, [2, 4])
        M = splitting_module(GroupExtensionData.split(G, A))
        S = direct_sum(A, augmentation_ideal(G))
        assert M.relations == S.relations and M.action == S.action


def test_nontrivial_c2_splitting_module():
    M = splitting_module(c2_z2())
    # coordinates (a, b): σ·a = a, σ·b = a - b
    assert M.act(1, [1, 0]) == [1, 0]
    assert M.act(1, [0, 1]) == [1, -1]
    assert M.invariants() == AI((2,), 1)


def test_trivial_quotient_gives_kernel():
    C1 = builtin("C1")
    A = trivial_module(C1, [3])
    M = splitting_module(GroupExtensionData.split(C1, A))
    assert M.relations == A.relations and M.ambient_rank == A.ambient_rank


@pytest.mark.parametrize("name,bound", [("C2", 4), ("C3", 3), ("C4", 4), ("C2xC2", 2)])
def test_splitting_module_profile(name, bound):
    for eps in all_extensions(name, bound):
        M = splitting_module(eps)
        M.validate()
        X = M.invariants()
        assert X.free_rank == eps.quotient.order - 1
        assert AI(X.factors) == eps.kernel.invariants()


# -- star / dagger --------------------------------------------------------------------


def test_star_examples():
    e = star(c2_z2())
    e.validate()
    assert e.project.compose(e.inject).is_zero()
    from tatecoh.gmodules import map_kernel
    K, _ = map_kernel(e.project)
    assert K.order() == 2
    # split case: the section e_σ ↦ b_σ is equivariant
    e0 = star(c2_z2(False))
    sec = canonical_section(e0)
    IG = augmentation_ideal(builtin("C2"))
    s = ModuleMap(IG, e0.middle, IntMatrix.from_rows([[v[i] for v in sec]
                                                      for i in range(e0.middle.ambient_rank)], 1))
    s.validate()


def test_dagger_examples():
    eps = c2_z2()
    assert dagger(star(eps)).cocycle.table == eps.cocycle.table
    G = builtin("C3")
    A = trivial_module(G, [3])
    S = direct_sum(A, augmentation_ideal(G))
    inj = ModuleMap(A, S, IntMatrix.from_rows([[1], [0], [0]]))
    proj = ModuleMap(S, augmentation_ideal(G), IntMatrix.from_rows([[0, 1, 0], [0, 0, 1]]))
    back = dagger(ModuleExtensionData(A, S, inj, proj))
    assert back.cocycle.is_zero()
    assert back.cocycle.defect() is None


@pytest.mark.parametrize("name,bound", [("C2", 4), ("C3", 3), ("C2xC2", 2)])
def test_round_trips_through_scrambled_presentations(name, bound):
    rng = random.Random(name)
    for eps in all_extensions(name, bound):
        e = scrambled(star(eps), rng)
        back = dagger(e)
        assert back.cocycle.defect() is None
        assert equivalent(back, eps)
        rep = roundtrip_check_module(e)
        assert rep.ok, rep.checks


def test_roundtrip_reports():
    rep = roundtrip_check(c2_z2())
    assert rep.ok and set(rep.checks) == {"star_exact", "identical_tables", "equivalent"}
    rep = roundtrip_check_module(star(c2_z2()))
    assert rep.ok
    phi = IntMatrix.from_rows(rep.witness)
    assert abs(phi.det()) == 1
    split = roundtrip_check_module(star(c2_z2(False)))
    assert IntMatrix.from_rows(split.witness) == IntMatrix.identity(2)
    assert rep.to_json()["ok"] is True


# -- middle group -------------------------------------------------------------------


def test_middle_group_examples():
    E = middle_group(c2_z2())
    orders = sorted(E.group.element_order(g) for g in range(E.group.order))
    assert orders == [1, 2, 4, 4]
    E0 = middle_group(c2_z2(False))
    assert sorted(E0.group.element_order(g) for g in range(4)) == [1, 2, 2, 2]
    assert E.project == (0, 1, 0, 1)


def test_kernel_is_central_iff_action_trivial():
    G = builtin("C2")
    for A, central in ((trivial_module(G, [3]), True), (sign_module(G, 3, {0}), False)):
        E = middle_group(GroupExtensionData.split(G, A))
        mul = E.group.mul
        is_central = all(mul[a][x] == mul[x][a] for a in E.inject for x in range(E.group.order))
        assert is_central == central


def test_corrupted_cocycle_is_rejected_by_associativity():
    G = builtin("C3")
    A = trivial_module(G, [3])
    bad = Cocycle2(G, A, {(1, 1): (1,)}, check=False)
    with pytest.raises(NotAssociative):
        middle_group(GroupExtensionData(G, A, bad))


def test_middle_group_cap():
    G = builtin("C4")
    with pytest.raises(CapExceeded):
        middle_group(GroupExtensionData.split(G, trivial_module(G, [64])), cap=100)


def test_middle_group_of_klein_four_vanisher_is_quaternion():
    G = builtin("C2xC2")
    A = trivial_module(G, [2])
    f = Cocycle2(G, A, {(1, 1): (1,), (1, 3): (1,), (2, 1): (1,), (2, 2): (1,), (3, 2): (1,),
                        (3, 3): (1,)})
    E = middle_group(GroupExtensionData(G, A, f))
    orders = sorted(E.group.element_order(g) for g in range(8))
    assert orders.count(4) == 6


# -- equivalence ----------------------------------------------------------------------


def test_equivalence_examples():
    eps = c2_z2()
    same = equivalent(eps, eps)
    assert same and all(not any(v) for v in same.witness.values())
    assert not equivalent(eps, c2_z2(False))


@given(st.sampled_from(["C2", "C3", "C4", "C2xC2"]), st.data())
def test_shifted_extensions_are_equivalent_with_isomorphic_modules(name, data):
    G = builtin(name)
    A = trivial_module(G, [data.draw(st.sampled_from([2, 3, 4]))])
    reps = h2(G, A).representatives
    eps = GroupExtensionData(G, A, reps[data.draw(st.integers(0, len(reps) - 1))])
    c = {g: (data.draw(st.integers(0, 5)),) for g in range(1, G.order)}
    other = shifted(eps, c)
    eq = equivalent(eps, other)
    assert eq
    phi = splitting_isomorphism(eps, other, eq.witness)
    assert phi.is_isomorphism()


def test_different_kernels_are_rejected():
    G = builtin("C2")
    e1 = GroupExtensionData.split(G, trivial_module(G, [2]))
    e2 = GroupExtensionData.split(G, trivial_module(G, [4]))
    with pytest.raises(ExtensionError):
        equivalent(e1, e2)


# -- p-parts ------------------------------------------------------------------------


def test_p_quotient_examples():
    G = builtin("C2")
    A = trivial_module(G, [6])
    for f in h2(G, A).representatives:
        eps = GroupExtensionData(G, A, f)
        e2 = p_quotient(eps, 2)
        assert e2.kernel.invariants() == AI((2,))
        M, M2 = splitting_module(eps), splitting_module(e2)
        for i in range(-3, 4):
            assert tate(G, M, i) == tate(G, M2, i)
    eps = c2_z2()
    same = p_quotient(eps, 2)
    assert same.cocycle.table == eps.cocycle.table
    with pytest.raises(ExtensionError):
        p_quotient(eps, 3)
