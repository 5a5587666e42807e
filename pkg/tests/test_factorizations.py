import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ringstab import ring
from ringstab.factorizations import (DIAGONAL, Factor, FactorWord, PreconditionError, diag2_factor,
                                     diag2_relative_factor, embed_2x2, hall_identity_check, lemma6_factor, mat_factor,
                                     transvection_comm_closed_form, tv_factor)
from ringstab.matgroup import MatrixSpace, Transvection, transvections


def int_product(word, m):
    out = np.eye(word.space.n, dtype=np.int64)
    for f in word.factors:
        out = out @ f.mat.astype(np.int64) % m
    return out


@pytest.mark.parametrize("m", [4, 6])
def test_closed_form_matches_integer_oracle(m):
    sp = MatrixSpace(ring.zmod(m), 3)
    for i, k, l, j in itertools.product(range(3), repeat=4):
        if i == k or l == j or (l, j) == (k, i):
            continue
        for x, y in itertools.product(range(m), repeat=2):
            A = oracles.elementary(3, i, k, x, m)
            B = oracles.elementary(3, l, j, y, m)
            got = transvection_comm_closed_form(sp, Transvection(i, k, x), Transvection(l, j, y))
            assert np.array_equal(got, oracles.commutator3(A, B, m))


def test_closed_form_cases():
    sp = MatrixSpace(ring.zmod(5), 3)
    assert sp.equal(transvection_comm_closed_form(sp, Transvection(0, 1, 2), Transvection(1, 2, 3)),
                    sp.transvection(0, 2, 1))
    assert sp.equal(transvection_comm_closed_form(sp, Transvection(0, 1, 2), Transvection(2, 0, 3)),
                    sp.transvection(2, 1, 4))
    assert sp.is_identity(transvection_comm_closed_form(sp, Transvection(0, 1, 2), Transvection(0, 2, 3)))
    with pytest.raises(ValueError):
        transvection_comm_closed_form(sp, Transvection(0, 1, 1), Transvection(1, 0, 1))


@given(st.sampled_from([2, 3, 4, 6]), st.integers(0, 2 ** 31))
def test_hall_witt_identity(m, seed):
    sp = MatrixSpace(ring.zmod(m), 3)
    rng = np.random.default_rng(seed)
    tv = transvections(sp)
    mats = [sp.mul(*[tv[rng.integers(len(tv))] for _ in range(4)]) for _ in range(3)]
    ok, prod = hall_identity_check(sp, *mats)
    assert ok and sp.is_identity(prod)


def test_lemma6_frozen_example():
    sp = MatrixSpace(ring.zmod(4), 3)
    a, b = sp.unit(0, 1, 2), sp.unit(1, 2, 3)
    w = lemma6_factor(sp, a, b)
    assert w.verify()
    assert w.labels() == ["1+b(1-γ)", "[1-b,1+a]", "1+(1-γ)a", "1+ba"]
    assert w.target.tolist() == [[1, 0, 2], [0, 1, 0], [0, 0, 1]]
    assert w.certificates["gamma"].tolist() == [[1, 0, 2], [0, 1, 0], [0, 0, 1]]
    assert np.array_equal(int_product(w, 4), w.target)


def square_zero(sp, rng):
    while True:
        N = sp.zeros()
        for i in range(sp.n):
            for j in range(i + 1, sp.n):
                N[i, j] = rng.integers(sp.ring.order)
        if not sp.mul(N, N).any():
            break
    P = sp.eye()
    for _ in range(10):
        i, j = rng.choice(sp.n, 2, replace=False)
        P = sp.mul(P, sp.transvection(int(i), int(j), int(rng.integers(sp.ring.order))))
    return sp.mul(P, N, sp.inverse(P))


@given(st.sampled_from([("zmod", 4), ("zmod", 6), ("dual", 2), ("m2", 2)]), st.integers(3, 4), st.integers(0, 2 ** 31))
def test_lemma6_random_square_zero_pairs(kind, n, seed):
    base = ring.zmod(kind[1]) if kind[0] == "zmod" else (
        ring.trunc_poly(ring.zmod(2), 2) if kind[0] == "dual" else ring.matrix_ring(2, ring.zmod(2)))
    sp = MatrixSpace(base, n)
    rng = np.random.default_rng(seed)
    a, b = square_zero(sp, rng), square_zero(sp, rng)
    try:
        w = lemma6_factor(sp, a, b)
    except PreconditionError:
        assert sp.try_invert(sp.one_plus(sp.mul(a, b))) is None
        return
    assert w.verify()


def test_lemma6_preconditions():
    sp = MatrixSpace(ring.zmod(4), 3)
    with pytest.raises(PreconditionError):
        lemma6_factor(sp, sp.eye(), sp.zeros())


def test_diag2_frozen_examples():
    w = diag2_factor(ring.zmod(4), 3)
    assert w.verify() and w.target.tolist() == [[3, 0], [0, 3]]
    assert w.labels() == ["t12(3)", "t21(1)", "t12(3)", "t12(3)", "t21(1)", "t12(3)"]
    assert np.array_equal(int_product(w, 4), w.target)
    w = diag2_relative_factor(ring.zmod(5), 2)
    assert w.verify() and w.target.tolist() == [[2, 0], [0, 3]]
    assert [t.r for t in w.transvections()] == [1, 1, 2, 4, 4]
    assert np.array_equal(int_product(w, 5), w.target)


@given(st.sampled_from([3, 4, 5, 7, 8, 9, 12]), st.integers(0, 100))
def test_diag2_words_for_every_unit(m, pick):
    R = ring.zmod(m)
    us = sorted(u for u in range(m) if R.is_unit(u))
    x = us[pick % len(us)]
    for w in (diag2_factor(R, x), diag2_relative_factor(R, x)):
        assert w.verify()
    # parameters of the non-conjugator factors lie in (x - 1)R
    w = diag2_relative_factor(R, x)
    ideal = {(x - 1) * t % m for t in range(m)}
    params = [t.r for t in w.transvections()]
    assert all(p in ideal for idx, p in enumerate(params) if idx not in (1, 3))


def test_diag2_needs_unit():
    with pytest.raises(Exception):
        diag2_factor(ring.zmod(4), 2)


def test_embed_2x2():
    R = ring.zmod(5)
    w = embed_2x2(diag2_factor(R, 2), 2, 0, 4)
    assert w.verify()
    assert w.target.tolist() == [[3, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1]]
    with pytest.raises(ValueError):
        embed_2x2(diag2_factor(R, 2), 1, 1, 3)


def test_verify_detects_tampering():
    sp = MatrixSpace(ring.zmod(4), 3)
    good = FactorWord(sp, sp.transvection(0, 1, 2), [tv_factor(sp, 0, 1, 1), tv_factor(sp, 0, 1, 1)])
    assert good.verify()
    wrong = FactorWord(sp, sp.transvection(0, 1, 3), good.factors)
    assert not wrong.verify()
    forged = Factor("transvection", "t12(1)", sp.transvection(0, 1, 2), Transvection(0, 1, 1))
    assert not FactorWord(sp, sp.transvection(0, 1, 2), [forged]).verify()
    bad_diag = Factor(DIAGONAL, "d", sp.diag([2, 1, 1]))
    assert not FactorWord(sp, sp.diag([2, 1, 1]), [bad_diag]).verify()
    assert FactorWord(sp, sp.diag([2, 1, 1]), [mat_factor(sp.diag([2, 1, 1]), "m")]).verify()
