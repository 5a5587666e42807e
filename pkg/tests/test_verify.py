import numpy as np
import pytest

from ringstab import ring
from ringstab.verify import (FAIL, PASS, UNVERIFIED, Instance, classify_ring, combine, normality_probe,
                             partial_normality, stable_element_check, verify_commutator_ring,
                             weakly_commutator_length)


@pytest.fixture(scope="module")
def inst4():
    return Instance(ring.zmod(4), 3)


def test_combine():
    assert combine([]) == PASS
    assert combine([PASS, UNVERIFIED]) == UNVERIFIED
    assert combine([UNVERIFIED, FAIL, PASS]) == FAIL


def test_commutator_ring_z4(inst4):
    rows = verify_commutator_ring(inst4)
    assert [r["ideal"] for r in rows] == ["0", "(2)", "R"]
    assert all(r["status"] == PASS for r in rows)
    assert rows[1]["sizes"] == {"E(n,I)": 256, "C_I": 512, "C(n,I)": 512, "[C(n,I),E]": 256}
    assert weakly_commutator_length(inst4) == (1, PASS)


def test_probes_z4(inst4):
    rep, probe = partial_normality(inst4)
    assert rep["status"] == PASS and rep["elements"] == 86016
    assert all(len(N) <= 2 for N in probe.transvection_free)
    norm = normality_probe(inst4)
    assert norm["status"] == PASS and set(norm["levels"]) <= {"0", "(2)", "R"}


def test_stable_element_check(inst4):
    data = inst4.gl
    rng = np.random.default_rng(0)
    for idx in rng.choice(len(data), 5, replace=False):
        assert stable_element_check(inst4, data.mats[idx])


def test_unsupported_enumeration_is_unverified():
    inst = Instance(ring.zmod(6), 3)
    assert not inst.gl_supported()
    assert all(r["status"] == UNVERIFIED for r in verify_commutator_ring(inst))
    assert weakly_commutator_length(inst) == (None, UNVERIFIED)
    assert partial_normality(inst)[0]["status"] == UNVERIFIED


@pytest.mark.parametrize("m", [2, 4])
def test_classify_small_rings(m):
    rep = classify_ring(ring.zmod(m), 3)
    assert rep["verdict"] == "stable (probe)"
    assert rep["stable"] and rep["commutator_ring"] and rep["partially_normal"]
    assert all(v == PASS for v in rep["implications"].values())
    assert rep["weakly_commutator_length"]["k"] == 1


def test_classify_dual_numbers_and_product():
    rep = classify_ring(ring.trunc_poly(ring.zmod(2), 2), 3)
    assert rep["verdict"] == "stable (probe)"
    assert rep["quotients"]["(x)"]["is_radical"]
    rep = classify_ring(ring.product(ring.zmod(2), ring.zmod(2)), 3)
    assert rep["verdict"] == "stable (probe)"


def test_classify_beyond_cap_is_unverified():
    rep = classify_ring(ring.matrix_ring(2, ring.zmod(2)), 3)
    assert rep["verdict"] == "unverified" and rep["stable"] is None
    assert rep["predicates"]["von_neumann_regular"]
