import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import builtin_rings
from ringstab import ring
from ringstab.ring import (RingAxiomError, RingCapError, RingError, all_ideals, annihilator, build_ring, center,
                           check_axioms, ideal_generated, ideal_product, ideal_sum, jacobson_radical, quotient_ring,
                           units, whole_ideal, zero_ideal)


def divisors(m):
    return [d for d in range(1, m + 1) if m % d == 0]


def test_zmod_tables_are_modular_arithmetic():
    R = ring.zmod(7)
    for a, b in itertools.product(range(7), repeat=2):
        assert R.add(a, b) == (a + b) % 7
        assert R.mul(a, b) == (a * b) % 7
    assert R.zero == 0 and R.one == 1 and R.name == "Z/7"


def test_small_codes_are_uint8_and_large_are_int32():
    assert ring.zmod(256).dtype == np.uint8
    assert ring.zmod(257, cap=1000).dtype == np.int32


def test_ring_size_cap():
    with pytest.raises(RingCapError):
        ring.zmod(300)
    with pytest.raises(RingCapError):
        ring.matrix_ring(2, ring.zmod(5))
    assert ring.matrix_ring(2, ring.zmod(4)).order == 256


@pytest.mark.parametrize("R", builtin_rings(), ids=lambda R: R.name)
def test_builtin_rings_satisfy_axioms(R):
    check_axioms(R, exhaustive=True)
    for a, inv in units(R).items():
        assert R.mul(a, inv) == R.one and R.mul(inv, a) == R.one


def test_family_orders_and_commutativity(dual2, m2f2, ut2):
    assert dual2.order == 4 and dual2.is_commutative
    x = dual2.labels.index("x")
    assert dual2.mul(x, x) == dual2.zero
    assert m2f2.order == 16 and not m2f2.is_commutative
    assert len(units(m2f2)) == 6                      # |GL(2, F_2)|
    assert ut2.order == 8 and not ut2.is_commutative
    assert len(units(ut2)) == 2
    P = ring.product(ring.zmod(2), ring.zmod(3))
    assert P.order == 6 and len(units(P)) == 2 and P.name == "Z/2 x Z/3"


def test_product_is_componentwise():
    A, B = ring.zmod(4), ring.zmod(3)
    P = ring.product(A, B)
    for a1, b1, a2, b2 in itertools.product(range(4), range(3), range(4), range(3)):
        x, y = a1 * 3 + b1, a2 * 3 + b2
        assert P.add(x, y) == ((a1 + a2) % 4) * 3 + (b1 + b2) % 3
        assert P.mul(x, y) == ((a1 * a2) % 4) * 3 + (b1 * b2) % 3


def test_explicit_rejects_bad_tables():
    with pytest.raises(RingError):
        ring.explicit([[0, 1], [1, 0]], [[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    with pytest.raises(RingError):
        ring.explicit([[0, 1], [1, 2]], [[0, 0], [0, 1]])
    # x*y = 1 for all nonzero: no multiplicative identity
    with pytest.raises(RingAxiomError):
        ring.explicit([[0, 1], [1, 0]], [[0, 0], [0, 0]])


def test_non_distributive_table_is_rejected():
    add = (np.arange(3)[:, None] + np.arange(3)[None, :]) % 3
    mul = (np.arange(3)[:, None] * np.arange(3)[None, :]) % 3
    mul[2, 2] = 2
    with pytest.raises(RingAxiomError) as exc:
        ring.explicit(add, mul)
    assert exc.value.witness


def test_build_ring_descriptors():
    assert build_ring({"family": "zmod", "m": 4}).name == "Z/4"
    R = build_ring({"family": "product", "factors": [{"family": "zmod", "m": 2},
                                                      {"family": "trunc_poly", "base": {"family": "zmod", "m": 2},
                                                       "k": 2}]})
    assert R.order == 8
    assert build_ring(R.descriptor).order == 8
    with pytest.raises(RingError):
        build_ring({"family": "octonions"})
    with pytest.raises(RingError):
        build_ring({"family": "product", "factors": []})


def test_ideals_of_z4_and_z6(z4, z6):
    assert [I.sorted() for I in all_ideals(z4)] == [[0], [0, 2], [0, 1, 2, 3]]
    assert [I.label() for I in all_ideals(z4)] == ["0", "(2)", "R"]
    assert [I.sorted() for I in all_ideals(z6)] == [[0], [0, 3], [0, 2, 4], list(range(6))]


@given(st.integers(2, 40))
def test_zmod_ideal_count_is_divisor_count(m):
    assert len(all_ideals(ring.zmod(m))) == len(divisors(m))


def test_matrix_ring_over_field_is_simple(m2f2):
    assert len(all_ideals(m2f2)) == 2
    assert jacobson_radical(m2f2).is_zero


def test_jacobson_radicals(z4, z6, dual2, ut2):
    assert jacobson_radical(z4).sorted() == [0, 2]
    assert jacobson_radical(z6).is_zero
    assert [dual2.label(a) for a in jacobson_radical(dual2).sorted()] == ["0", "x"]
    J = jacobson_radical(ut2)
    assert [ut2.label(a) for a in J.sorted()] == ["[0,0;0,0]", "[0,1;0,0]"]


def test_annihilator_and_center(z4, m2f2):
    I = ideal_generated(z4, [2])
    assert annihilator(z4, I).sorted() == [0, 2]
    assert annihilator(z4, whole_ideal(z4)).is_zero
    assert len(center(m2f2)) == 2


@given(st.integers(2, 24), st.integers(0, 23), st.integers(0, 23))
def test_ideal_product_and_sum(m, a, b):
    R = ring.zmod(m)
    I, J = ideal_generated(R, [a % m]), ideal_generated(R, [b % m])
    IJ = ideal_product(I, J)
    assert IJ.members <= I.members & J.members
    S = ideal_sum(I, J)
    assert I.members <= S.members and J.members <= S.members
    assert IJ.is_ideal() and S.is_ideal()


def test_quotient_ring(z4):
    I = ideal_generated(z4, [2])
    Q, hom = quotient_ring(z4, I)
    assert Q.order == 2 and hom.check() and hom.is_surjective()
    assert hom.kernel().members == I.members
    with pytest.raises(RingError):
        quotient_ring(z4, whole_ideal(z4))
    Q0, h0 = quotient_ring(z4, zero_ideal(z4))
    assert Q0.order == 4 and h0.check()


def test_inverse_of_nonunit_raises(z4):
    with pytest.raises(RingError):
        z4.inv(2)
    assert z4.inv(3) == 3
