import random

import pytest
from hypothesis import given, strategies as st

from helpers import quotient_by_orbit, random_module, sign_module, z_trivial
from tatecoh.exactla import AbelianInvariants, IntMatrix
from tatecoh.gmodules import (ELEMENT_CAP, GModule, ModuleError, ModuleMap, augmentation_ideal,
                              direct_sum, elements, fixed_points, group_ring, group_ring_mod,
                              map_cokernel, map_kernel, order, p_primary, simplify,
                              trivial_module, zero_module)
from tatecoh.groups import builtin, cyclic

GROUPS = ["C1", "C2", "C3", "C4", "C2xC2", "D8", "Q8"]


def test_trivial_module_examples():
    C2, C4 = builtin("C2"), builtin("C4")
    X = trivial_module(C2, [2])
    assert X.invariants() == AbelianInvariants((2,))
    assert all(X.act(g, [1]) == [1] for g in range(2))
    assert trivial_module(C2, []).order() == 1
    Y = trivial_module(C4, AbelianInvariants((2, 4)))
    assert Y.order() == 8 and Y.exponent() == 4


def test_group_ring_examples():
    C2 = builtin("C2")
    assert group_ring(C2).action[1] == IntMatrix.from_rows([[0, 1], [1, 0]])
    assert group_ring_mod(C2, 2).order() == 4
    for name in ["C2", "C3", "C4", "C2xC2"]:
        G = builtin(name)
        X, incl = fixed_points(group_ring_mod(G, G.order))
        assert X == AbelianInvariants((G.order,))
        gen = list(incl.matrix.col(0))
        assert len(set(x % G.order for x in gen)) == 1, "spanned by a multiple of the norm element"


def test_augmentation_ideal_examples():
    I2 = augmentation_ideal(builtin("C2"))
    assert I2.ambient_rank == 1 and I2.action[1] == IntMatrix.from_rows([[-1]])
    assert augmentation_ideal(cyclic(1)).ambient_rank == 0
    I3 = augmentation_ideal(builtin("C3"))
    s = I3.action[1]
    assert I3.ambient_rank == 2
    # columns: s·e_s = e_{s^2} - e_s and s·e_{s^2} = e_1 - e_s = -e_s
    assert list(s.col(0)) == [-1, 1] and list(s.col(1)) == [-1, 0]
    assert s @ s @ s == IntMatrix.identity(2)


def test_direct_sum_examples():
    C2 = builtin("C2")
    X = trivial_module(C2, [2])
    S = direct_sum(X, zero_module(C2))
    assert S.invariants() == X.invariants()
    assert direct_sum(X, augmentation_ideal(C2)).ambient_rank == 2
    Y = trivial_module(C2, [4])
    assert direct_sum(X, Y).order() == X.order() * Y.order() == 8


def test_fixed_points_examples():
    C2 = builtin("C2")
    X = trivial_module(C2, [2, 4])
    assert fixed_points(X)[0] == X.invariants()
    inv, incl = fixed_points(group_ring(C2))
    assert inv == AbelianInvariants((), 1)
    assert [abs(x) for x in incl.matrix.col(0)] == [1, 1]
    assert fixed_points(augmentation_ideal(C2))[0].is_trivial


def test_p_primary_examples():
    C2 = builtin("C2")
    assert p_primary(trivial_module(C2, [6]), 2).invariants() == AbelianInvariants((2,))
    assert p_primary(trivial_module(C2, [8]), 2).invariants() == AbelianInvariants((8,))
    S = p_primary(sign_module(C2, 6, {0}), 3)
    assert S.invariants() == AbelianInvariants((3,))
    assert S.canonical(S.act(1, S.lift([1]))) == (2,)


def test_kernel_and_cokernel_examples():
    C2 = builtin("C2")
    X = trivial_module(C2, [2, 2])
    K, _ = map_kernel(ModuleMap(X, X, IntMatrix.identity(2)))
    assert K.order() == 1
    R = group_ring_mod(C2, 2)
    Z2 = trivial_module(C2, [2])
    aug = ModuleMap(R, Z2, IntMatrix.from_rows([[1, 1]]))
    K, incl = map_kernel(aug)
    assert K.order() == 2
    g = incl.matrix.apply(K.lift([1]))
    assert [x % 2 for x in g] == [1, 1]
    N = trivial_module(C2, [4])
    Q, _ = map_cokernel(ModuleMap(X, N, IntMatrix.zeros(1, 2)))
    assert Q.invariants() == N.invariants()


def test_orders_and_elements():
    C2 = builtin("C2")
    assert order(trivial_module(C2, [2, 4])) == 8
    assert order(augmentation_ideal(C2)) == float("inf")
    assert order(zero_module(C2)) == 1
    assert len(list(elements(trivial_module(C2, [2, 4])))) == 8
    big = trivial_module(C2, [ELEMENT_CAP * 2])
    with pytest.raises(ModuleError):
        list(elements(big))


def test_validation_rejects_bad_modules():
    C2 = builtin("C2")
    with pytest.raises(ModuleError, match="multiplicative"):
        GModule(C2, 1, [], [[[1]], [[2]]])
    with pytest.raises(ModuleError, match="identity"):
        GModule(C2, 1, [], [[[-1]], [[-1]]])
    with pytest.raises(ModuleError, match="relation"):
        # Z/2 ⊕ Z with the swap: the relation (2, 0) is sent outside the relation span
        GModule(C2, 2, [[2, 0]], [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    with pytest.raises(ModuleError):
        ModuleMap(trivial_module(C2, [2]), trivial_module(C2, [3]), [[1]])
    with pytest.raises(ModuleError):
        ModuleMap(z_trivial(C2), group_ring(C2), [[1], [0]])


@pytest.mark.parametrize("name", GROUPS)
def test_random_modules_validate_and_simplify(name):
    G = builtin(name)
    rng = random.Random(name)
    for _ in range(6):
        M = random_module(G, rng)
        M.validate()
        S, to, back = simplify(M)
        assert S.invariants() == M.invariants()
        assert to.compose(back).is_isomorphism() and back.compose(to).is_isomorphism()


@pytest.mark.parametrize("name", ["C2", "C4", "C2xC2", "D8"])
def test_fixed_points_are_fixed(name):
    G = builtin(name)
    rng = random.Random(7)
    for _ in range(5):
        M = random_module(G, rng)
        _, incl = fixed_points(M)
        for j in range(incl.matrix.cols):
            v = list(incl.matrix.col(j))
            assert all(M.equal(M.act(g, v), v) for g in range(G.order))


@given(st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), min_size=1, max_size=3),
       st.sampled_from(["C1", "C2", "C3"]))
def test_p_primary_parts_reconstruct(diag, name):
    G = builtin(name)
    M = trivial_module(G, diag)
    n = M.order()
    parts = []
    for p in (2, 3):
        P = p_primary(M, p)
        pp = 1
        while n % (pp * p) == 0:
            pp *= p
        assert P.order() == pp
        parts.extend(P.invariants().factors)
    assert AbelianInvariants.from_diagonal(parts) == M.invariants()


@given(st.sampled_from(["C2", "C3", "C4", "C2xC2"]), st.randoms(use_true_random=False))
def test_kernel_image_orders_multiply(name, rnd):
    G = builtin(name)
    M = random_module(G, rnd)
    if not M.is_finite or M.order() > 512:
        M = trivial_module(G, [2, 4])
    v = [rnd.randint(-2, 2) for _ in range(M.ambient_rank)]
    F = group_ring_mod(G, max(1, M.exponent()))
    cols = [M.act(h, v) for h in range(G.order)]
    f = ModuleMap(F, M, IntMatrix.from_rows([[c[i] for c in cols] for i in range(M.ambient_rank)],
                                            G.order))
    K, incl = map_kernel(f)
    Q, proj = map_cokernel(f)
    assert f.compose(incl).is_zero() and proj.compose(f).is_zero()
    image = F.order() // K.order()
    assert image * Q.order() == M.order()
    assert quotient_by_orbit(M, v).order() == Q.order()
