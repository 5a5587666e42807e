import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ringstab import kernels, ring

RINGS = [ring.zmod(2), ring.zmod(6), ring.matrix_ring(2, ring.zmod(2)), ring.zmod(300, cap=300)]


def random_stack(R, N, n, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, R.order, size=(N, n, n)).astype(R.dtype)


def identity(R, n):
    I = np.full((n, n), R.zero, dtype=R.dtype)
    np.fill_diagonal(I, R.one)
    return I


@pytest.mark.parametrize("R", RINGS, ids=lambda R: R.name)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_numba_and_numpy_agree(R, n):
    N = 200 if R.order < 256 else 8          # long power sequences over Z/300
    A = random_stack(R, N, n, 1)
    B = random_stack(R, N, n, 2)
    G = random_stack(R, 7, n, 3)
    add, mul = R.add_table, R.mul_table
    assert np.array_equal(kernels.matmul_pairs(A, B, add, mul, accel=True),
                          kernels.matmul_pairs(A, B, add, mul, accel=False))
    assert np.array_equal(kernels.matmul_outer(A, G, add, mul, accel=True),
                          kernels.matmul_outer(A, G, add, mul, accel=False))
    assert np.array_equal(kernels.encode(A, R.order, accel=True), kernels.encode(A, R.order, accel=False))
    ok1, inv1 = kernels.invert(A, add, mul, identity(R, n), accel=True)
    ok2, inv2 = kernels.invert(A, add, mul, identity(R, n), accel=False)
    assert np.array_equal(ok1, ok2) and np.array_equal(inv1, inv2)


def test_matmul_matches_integer_arithmetic():
    R = ring.zmod(6)
    A = random_stack(R, 50, 3, 4)
    B = random_stack(R, 50, 3, 5)
    expect = np.einsum("tik,tkj->tij", A.astype(np.int64), B.astype(np.int64)) % 6
    for accel in (True, False):
        assert np.array_equal(kernels.matmul_pairs(A, B, R.add_table, R.mul_table, accel=accel), expect)


def test_outer_order_is_row_then_generator():
    R = ring.zmod(5)
    A = random_stack(R, 3, 2, 6)
    G = random_stack(R, 4, 2, 7)
    out = kernels.matmul_outer(A, G, R.add_table, R.mul_table)
    assert np.array_equal(out[1 * 4 + 2], (A[1].astype(int) @ G[2].astype(int)) % 5)


@given(st.integers(2, 9), st.integers(1, 4), st.integers(0, 2 ** 31))
def test_encode_decode_roundtrip(order, n, seed):
    R = ring.zmod(order)
    A = random_stack(R, 20, n, seed)
    keys = kernels.encode(A, order)
    assert np.array_equal(kernels.decode(keys, order, n, R.dtype), A)
    assert np.all(np.diff(np.sort(keys)) >= 0)


def test_invert_flags_non_units():
    R = ring.zmod(4)
    I = identity(R, 2)
    M = np.array([[[2, 0], [0, 1]], [[1, 1], [0, 1]], [[0, 0], [0, 0]]], dtype=R.dtype)
    for accel in (True, False):
        ok, inv = kernels.invert(M, R.add_table, R.mul_table, I, accel=accel)
        assert ok.tolist() == [False, True, False]
        assert inv[1].tolist() == [[1, 3], [0, 1]]
        assert not inv[0].any()


def test_empty_batches():
    R = ring.zmod(3)
    E = np.empty((0, 2, 2), dtype=R.dtype)
    assert kernels.matmul_pairs(E, E, R.add_table, R.mul_table).shape == (0, 2, 2)
    assert kernels.encode(E, 3).shape == (0,)
    assert kernels.invert(E, R.add_table, R.mul_table, identity(R, 2))[0].shape == (0,)


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, RINGSTAB_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from ringstab._accel import use_numba; print(use_numba())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_numpy_path_end_to_end():
    code = ("from ringstab import ring; from ringstab.subgroups import elementary_group; "
            "from ringstab.matgroup import MatrixSpace; "
            "sp = MatrixSpace(ring.zmod(4), 3); g = sp.element(sp.from_rows([[1,2,1],[0,3,1],[2,1,0]])); "
            "print(len(elementary_group(ring.zmod(4), 3)), g.inv.ravel().tolist())")
    env = dict(os.environ, RINGSTAB_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split(None, 1)[0] == "43008"
    assert out.stdout.split(None, 1)[1].strip() == "[3, 1, 3, 2, 2, 3, 2, 3, 3]"
