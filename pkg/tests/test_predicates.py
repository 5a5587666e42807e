import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import builtin_rings
from ringstab import ring
from ringstab.predicates import (NoWitness, generated_subring, is_nearly_local, is_unimodular,
                                 is_von_neumann_regular, left_combination, left_span, nearly_local_idempotent,
                                 nearly_local_partner, power_idempotent, rank1_witness_via_idempotent,
                                 regular_idempotent, stable_rank_at_most, stable_rank_witness)


@pytest.mark.parametrize("m", range(2, 13))
def test_zmod_predicates_match_oracle(m):
    R = ring.zmod(m)
    assert is_von_neumann_regular(R) == oracles.is_von_neumann_regular_zmod(m)
    assert is_nearly_local(R) == oracles.is_nearly_local_zmod(m)


def test_predicate_table(z4, z6, m2f2):
    assert not is_von_neumann_regular(z4)
    assert is_von_neumann_regular(m2f2)
    assert is_nearly_local(z4)
    assert is_nearly_local(z6)


@pytest.mark.parametrize("R", builtin_rings(), ids=lambda R: R.name)
def test_finite_rings_have_stable_rank_one(R):
    holds, witness = stable_rank_at_most(R, 1)
    assert holds and witness is None


def test_stable_rank_general_m(z4, dual2):
    assert stable_rank_at_most(z4, 2) == (True, None)
    assert stable_rank_at_most(dual2, 2) == (True, None)
    with pytest.raises(ValueError):
        stable_rank_at_most(z4, 0)
    assert stable_rank_witness(z4, [2, 1]) == (0,)


@given(st.integers(2, 12), st.lists(st.integers(0, 11), min_size=1, max_size=3))
def test_left_combination(m, vec):
    R = ring.zmod(m)
    vec = [v % m for v in vec]
    t = left_combination(R, vec)
    assert (t is not None) == is_unimodular(R, vec)
    if t is not None:
        assert sum(a * b for a, b in zip(t, vec)) % m == 1
    assert set(left_span(R, vec).tolist()) == {sum(a * b for a, b in zip(c, vec)) % m
                                              for c in itertools.product(range(m), repeat=len(vec))}


def test_power_idempotent_frozen(z4):
    assert power_idempotent(z4, 2) == (2, 1, 0)
    assert power_idempotent(z4, 3) == (1, 3, 1)
    assert power_idempotent(z4, 0) == (1, 1, 0)


@pytest.mark.parametrize("R", builtin_rings(), ids=lambda R: R.name)
def test_power_idempotent_certificates(R):
    for a in range(R.order):
        m, ap, e = power_idempotent(R, a)
        am = R.power(a, m)
        assert R.mul(R.mul(am, a), ap) == am
        assert ap in set(generated_subring(R, a).tolist())
        assert R.mul(e, e) == e and R.mul(e, am) == am


def test_rank1_witness_frozen():
    P = ring.product(ring.zmod(2), ring.zmod(2))
    assert P.labels[1] == "(0,1)" and P.labels[2] == "(1,0)"
    s = rank1_witness_via_idempotent(P, 1, 2)
    assert s == 1 and P.label(s) == "(0,1)"
    assert P.is_unit(P.add(2, P.mul(s, 1)))
    with pytest.raises(NoWitness):
        rank1_witness_via_idempotent(P, 0, 2)
    with pytest.raises(ValueError):
        rank1_witness_via_idempotent(ring.zmod(4), 1, 2)


def test_regular_and_nearly_local_idempotents(z4, z6, m2f2):
    assert [regular_idempotent(z6, a) for a in range(6)] == [(0, 0), (1, 1), (2, 4), (1, 3), (1, 4), (5, 1)]
    with pytest.raises(NoWitness):
        regular_idempotent(z4, 2)
    for R in (z4, z6, m2f2):
        for a in range(R.order):
            ap = nearly_local_partner(R, a)
            e = nearly_local_idempotent(R, a, ap)
            assert R.mul(e, e) == e
    assert [nearly_local_partner(z6, a) for a in range(6)] == [1, 5, 1, 1, 5, 1]
