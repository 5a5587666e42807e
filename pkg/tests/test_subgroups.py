import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ringstab import ring
from ringstab.matgroup import MatrixSpace, transvections
from ringstab.ring import all_ideals, ideal_generated, whole_ideal, zero_ideal
from ringstab.subgroups import (CapExceeded, EnumerationUnsupported, KeySet, center_of_gl, closure,
                                commutator_subgroup, congruence_pair, conjugacy_orbits, default_cap, elementary_group,
                                enumerate_gl, general_linear_group, ideal_transvection_level, invariant_subgroup_probe,
                                is_normal_in, iterated_commutator, normal_closure, relative_elementary_lemma1,
                                relative_elementary_normal_closure)


@pytest.fixture(scope="module")
def sp4():
    return MatrixSpace(ring.zmod(4), 3)


@pytest.fixture(scope="module")
def sp2():
    return MatrixSpace(ring.zmod(2), 3)


@given(st.lists(st.integers(0, 999), max_size=60), st.lists(st.integers(0, 999), max_size=60))
def test_keyset_dense_and_sorted_agree(first, second):
    dense = KeySet(1000, np.array(first, dtype=np.int64))
    sparse = KeySet(2 ** 40, np.array(first, dtype=np.int64))
    assert not sparse.dense and dense.dense
    new_d = dense.insert(np.array(second, dtype=np.int64))
    new_s = sparse.insert(np.array(second, dtype=np.int64))
    assert new_d.tolist() == new_s.tolist() == sorted(set(second) - set(first))
    assert dense.to_array().tolist() == sparse.to_array().tolist() == sorted(set(first) | set(second))
    probe = np.arange(0, 1000, 7)
    assert np.array_equal(dense.contains(probe), sparse.contains(probe))


def test_elementary_group_orders(sp2, sp4):
    assert len(elementary_group(sp2)) == oracles.sl3_count(2) == 168
    assert len(elementary_group(sp4)) == oracles.sl3_count(4) == 43008


def test_elementary_group_z6():
    E = elementary_group(ring.zmod(6), 3)
    # SL(3, Z/6) = SL(3, Z/2) x SL(3, Z/3)
    assert len(E) == oracles.sl3_count(2) * oracles.sl3_count(3) == 943488
    assert E.complete and len(E.basis) < len(E.generators)


def test_closure_contains_products_and_inverses(sp4):
    rng = np.random.default_rng(5)
    gens = transvections(sp4)[rng.choice(18, 3, replace=False)]
    H = closure(sp4, gens)
    elems = H.elements()
    for _ in range(20):
        a, b = elems[rng.integers(len(elems))], elems[rng.integers(len(elems))]
        assert sp4.mul(a, b) in H
        assert sp4.inverse(a) in H
    assert sp4.identity in H


def test_closure_cap(sp4):
    H = closure(sp4, transvections(sp4), cap=1000)
    assert not H.complete and len(H) > 1000
    with pytest.raises(CapExceeded):
        closure(sp4, transvections(sp4), cap=1000, strict=True)


def test_default_cap_env(monkeypatch):
    monkeypatch.setenv("RINGSTAB_CAP", "12345")
    assert default_cap() == 12345
    monkeypatch.delenv("RINGSTAB_CAP")
    assert default_cap() == 2 ** 22


def test_closure_extends_base(sp4):
    A = closure(sp4, [sp4.transvection(0, 1, 1)])
    B = closure(sp4, [sp4.transvection(1, 2, 1)], base=A)
    C = closure(sp4, [sp4.transvection(0, 1, 1), sp4.transvection(1, 2, 1)])
    assert B.same_set(C) and A.issubset(B)


def test_relative_elementary_orders(sp4):
    I = ideal_generated(sp4.ring, [2])
    assert len(relative_elementary_lemma1(sp4, 3, I)) == oracles.sl3_congruence_count(4, 2) == 256
    assert len(relative_elementary_lemma1(sp4, 3, zero_ideal(sp4.ring))) == 1


@pytest.mark.parametrize("R", [ring.zmod(4), ring.zmod(6), ring.trunc_poly(ring.zmod(2), 2)], ids=lambda R: R.name)
def test_two_constructions_of_relative_group_agree(R):
    sp = MatrixSpace(R, 3)
    for I in all_ideals(R):
        A = relative_elementary_normal_closure(sp, 3, I)
        B = relative_elementary_lemma1(sp, 3, I)
        assert A.same_set(B)


def test_gl_and_center(sp4):
    data = enumerate_gl(sp4)
    assert len(data) == 86016
    assert np.array_equal(data.keys, np.sort(data.keys))
    assert np.all(sp4.mul_batch(data.mats[:100], data.invs[:100]) == sp4.identity)
    Z = center_of_gl(sp4)
    assert sorted(MatrixSpace.encoding(m) for m in Z.elements()) == sorted(
        MatrixSpace.encoding(sp4.diag([u] * 3)) for u in oracles.scalar_units(4))
    G = general_linear_group(sp4)
    assert len(G) == 86016 and closure(sp4, G.basis).same_set(G)


def test_enumeration_cap():
    with pytest.raises(EnumerationUnsupported):
        enumerate_gl(MatrixSpace(ring.zmod(6), 3))
    with pytest.raises(EnumerationUnsupported):
        enumerate_gl(MatrixSpace(ring.zmod(2), 3), cap=100)


def test_congruence_subgroups(sp4):
    R = sp4.ring
    I = ideal_generated(R, [2])
    cp = congruence_pair(sp4, 3, I)
    assert len(cp.C_I) == oracles.congruence_kernel_order(4, 2, 3) == 512
    assert cp.C_nI.same_set(cp.C_I)                 # the center of GL(3, F_2) is trivial
    c0 = congruence_pair(sp4, 3, zero_ideal(R))
    assert len(c0.C_I) == 1 and len(c0.C_nI) == 2
    cR = congruence_pair(sp4, 3, whole_ideal(R))
    assert len(cR.C_I) == len(cR.C_nI) == 86016


def test_commutator_subgroups(sp2, sp4):
    E = elementary_group(sp2)
    assert commutator_subgroup(E, E).same_set(E)      # SL(3, F_2) is perfect
    E4 = elementary_group(sp4)
    I = ideal_generated(sp4.ring, [2])
    cp = congruence_pair(sp4, 3, I)
    assert commutator_subgroup(cp.C_nI, E4).same_set(relative_elementary_lemma1(sp4, 3, I))
    assert iterated_commutator(E4, E4, 2).same_set(E4)


def test_normality(sp4):
    data = enumerate_gl(sp4)
    I = ideal_generated(sp4.ring, [2])
    ok, wit = is_normal_in(relative_elementary_lemma1(sp4, 3, I), data)
    assert ok and not wit
    H = closure(sp4, [sp4.transvection(0, 1, 1)])
    ok, wit = is_normal_in(H, data)
    assert not ok
    g, h = wit[0]
    assert sp4.conj(h, g) not in H


def test_normal_closure_watch(sp4):
    tk = set(int(k) for k in sp4.keys(transvections(sp4)))
    E = elementary_group(sp4)
    N = normal_closure(sp4, [sp4.diag([3, 3, 1])], E.basis,
                       watch=lambda keys: np.array([int(k) in tk for k in keys]))
    assert "hit" in N.meta and N.meta["hit"] in tk
    N = normal_closure(sp4, [sp4.diag([3, 3, 3])], E.basis)
    assert len(N) == 2 and "hit" not in N.meta


def test_conjugacy_orbits_partition(sp2):
    data = enumerate_gl(sp2)
    rep = conjugacy_orbits(sp2, data, elementary_group(sp2).basis)
    # E(3, F_2) = GL(3, F_2) has six conjugacy classes
    assert len(np.unique(rep)) == 6
    assert np.all(rep[rep] == rep)


def test_probe_and_transvection_level(sp2, sp4):
    p = invariant_subgroup_probe(sp2)
    assert p.passed and not p.counterexamples and p.verdict() == "partially normal (probe)"
    p4 = invariant_subgroup_probe(sp4, max_orbits=10, seed=1)
    assert p4.mode == "sampled" and p4.probed == 10 and not p4.counterexamples
    E = elementary_group(sp4)
    assert ideal_transvection_level(E).is_whole
    I = ideal_generated(sp4.ring, [2])
    assert ideal_transvection_level(relative_elementary_lemma1(sp4, 3, I)).members == I.members
    assert ideal_transvection_level(center_of_gl(sp4)).is_zero
