import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ringstab import ring
from ringstab.matgroup import (GroupElement, MatrixSpace, NotInvertible, Transvection, transvection_keys,
                               transvections)
from ringstab.subgroups import enumerate_gl


@pytest.fixture(scope="module")
def sp4():
    return MatrixSpace(ring.zmod(4), 3)


def random_word(sp, rng, length=12):
    g = sp.eye()
    for _ in range(length):
        i, j = rng.choice(sp.n, 2, replace=False)
        g = sp.mul(g, sp.transvection(int(i), int(j), int(rng.integers(sp.ring.order))))
    return g


def test_canonical_encoding():
    sp = MatrixSpace(ring.zmod(2), 2)
    assert sp.key(sp.identity) == 9
    assert MatrixSpace.encoding(sp.identity) == "1,0,0,1"
    assert sp.equal(sp.parse_encoding("1,1,0,1"), sp.transvection(0, 1, 1))
    sp3 = MatrixSpace(ring.zmod(3), 2)
    assert sp3.key(sp3.from_rows([[2, 0], [1, 2]])) == 2 * 27 + 0 * 9 + 1 * 3 + 2


@given(st.integers(0, 2 ** 31))
def test_keys_agree_with_scalar_key(seed):
    sp = MatrixSpace(ring.zmod(6), 3)
    M = np.random.default_rng(seed).integers(0, 6, size=(10, 3, 3)).astype(sp.dtype)
    assert sp.keys(M).tolist() == [sp.key(m) for m in M]
    assert np.array_equal(sp.decode(sp.keys(M)), M)


def test_key_overflow_is_reported():
    sp = MatrixSpace(ring.zmod(16), 4)
    assert not sp.keys_fit
    with pytest.raises(OverflowError):
        sp.keys(sp.identity[None])


def test_construction_errors(sp4):
    with pytest.raises(ValueError):
        sp4.transvection(1, 1, 2)
    with pytest.raises(ValueError):
        sp4.from_rows([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        sp4.from_rows([[4, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        sp4.mul(sp4.identity, np.eye(2, dtype=sp4.dtype))


@given(st.integers(0, 2 ** 31))
def test_inverse_matches_adjugate(seed):
    sp = MatrixSpace(ring.zmod(4), 3)
    M = np.random.default_rng(seed).integers(0, 4, size=(3, 3))
    unit = oracles.unit_mask(4)[oracles.det3(M, 4)]
    g = sp.try_invert(M.astype(sp.dtype))
    assert (g is not None) == bool(unit)
    if unit:
        assert np.array_equal(g.inv, oracles.adjugate_inverse3(M, 4))


@given(st.integers(0, 2 ** 31))
def test_power_walk_and_kernel_agree(seed):
    sp = MatrixSpace(ring.matrix_ring(2, ring.zmod(2)), 2)
    M = np.random.default_rng(seed).integers(0, 16, size=(2, 2)).astype(sp.dtype)
    a = sp.try_invert(M)
    b = sp._walk_invert(M)
    assert (a is None) == (b is None)
    if a is not None:
        assert np.array_equal(a.inv, b.inv)
        assert sp.is_identity(sp.mul(M, a.inv)) and sp.is_identity(sp.mul(a.inv, M))


def test_not_invertible(sp4):
    with pytest.raises(NotInvertible):
        sp4.element(sp4.diag([2, 1, 1]))


def test_conjugate_and_commutator_conventions(sp4):
    rng = np.random.default_rng(0)
    a, b = random_word(sp4, rng), random_word(sp4, rng)
    ai, bi = sp4.inverse(a), sp4.inverse(b)
    assert sp4.equal(sp4.conj(a, b), sp4.mul(b, a, bi))
    assert sp4.equal(sp4.comm(a, b), sp4.mul(a, b, ai, bi))
    assert sp4.equal(sp4.comm(GroupElement(a, ai), b), sp4.comm(a, b))
    c = random_word(sp4, rng)
    assert sp4.equal(sp4.comm_many(a, b, c), sp4.comm(sp4.comm(a, b), c))


def test_transvections(sp4):
    tv = transvections(sp4)
    assert len(tv) == 3 * 2 * 3
    assert len(transvections(sp4, [0, 2])) == 6
    assert len(np.unique(transvection_keys(sp4))) == len(tv)
    assert sp4.transvection_of(sp4.transvection(2, 0, 3)) == (2, 0, 3)
    assert sp4.transvection_of(sp4.identity) is None
    assert sp4.transvection_of(sp4.diag([3, 1, 1])) is None
    t = Transvection(0, 1, 2)
    assert sp4.equal(t.element(sp4).inv, sp4.transvection(0, 1, 2))
    with pytest.raises(ValueError):
        Transvection(1, 1, 1)


def test_reduce_mod_ideal(sp4):
    from ringstab.ring import ideal_generated, quotient_ring
    Q, hom = quotient_ring(sp4.ring, ideal_generated(sp4.ring, [2]))
    m = sp4.from_rows([[3, 2, 1], [0, 1, 2], [2, 3, 3]])
    assert sp4.reduce(m, hom).tolist() == (m % 2).tolist()


def test_gl_counts_match_oracle():
    for m in (2, 4):
        sp = MatrixSpace(ring.zmod(m), 3)
        assert len(enumerate_gl(sp)) == oracles.gl3_count(m)
    assert oracles.gl3_count(4) == oracles.gl_order(2, 2, 3) == 86016
    assert oracles.gl3_count(2) == 168
