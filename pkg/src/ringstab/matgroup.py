"""Matrices over a finite ring, invertibility, transvections and commutators.

A matrix is an ``(n, n)`` numpy array of element codes; the ring and the
dimension live on a :class:`MatrixSpace`. Indices are 0-based throughout.

Canonical encoding: the row-major sequence of element codes. As an integer
key it is read as base-``order`` digits with the ``(0, 0)`` entry most
significant; as text it is the decimal codes joined by commas.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._accel import use_numba
from .ring import RingError

MAX_KEY_BITS = 62


class NotInvertible(RingError):
    pass


class MatrixSpace:
    """``M_n(R)`` plus a scratch cache for enumerations that depend on ``(R, n)``."""

    def __init__(self, ring, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.ring = ring
        self.n = n
        self.dtype = ring.dtype
        self.key_space = ring.order ** (n * n)
        self.keys_fit = self.key_space < 2 ** MAX_KEY_BITS
        self.cache = {}
        I = np.full((n, n), ring.zero, dtype=self.dtype)
        np.fill_diagonal(I, ring.one)
        I.setflags(write=False)
        self.identity = I

    def __repr__(self):
        return f"MatrixSpace({self.ring.name}, n={self.n})"

    # construction ---------------------------------------------------------

    def zeros(self):
        return np.full((self.n, self.n), self.ring.zero, dtype=self.dtype)

    def eye(self):
        return self.identity.copy()

    def unit(self, i, j, r=None):
        """``r * e_ij`` (``r`` defaults to 1)."""
        m = self.zeros()
        m[i, j] = self.ring.one if r is None else r
        return m

    def transvection(self, i, j, r):
        if i == j:
            raise ValueError("transvection needs i != j")
        m = self.eye()
        m[i, j] = r
        return m

    def diag(self, values):
        m = self.zeros()
        np.fill_diagonal(m, values)
        return m

    def from_rows(self, rows):
        m = np.asarray(rows, dtype=np.int64)
        if m.shape != (self.n, self.n):
            raise ValueError(f"expected {self.n}x{self.n}, got {m.shape}")
        if m.min() < 0 or m.max() >= self.ring.order:
            raise ValueError("entry is not an element code")
        return m.astype(self.dtype)

    # arithmetic -----------------------------------------------------------

    def _check(self, *mats):
        for m in mats:
            if m.shape != (self.n, self.n):
                raise ValueError(f"dimension mismatch: {m.shape} in {self}")

    def mul(self, *mats):
        self._check(*mats)
        R = self.ring
        acc = mats[0][None]
        for m in mats[1:]:
            acc = kernels.matmul_pairs(acc, m[None].astype(self.dtype, copy=False), R.add_table, R.mul_table)
        return acc[0].copy()

    def mul_batch(self, A, B):
        return kernels.matmul_pairs(A, B, self.ring.add_table, self.ring.mul_table)

    def mul_outer(self, A, G):
        return kernels.matmul_outer(A, G, self.ring.add_table, self.ring.mul_table)

    def add(self, a, b):
        self._check(a, b)
        return self.ring.add_table[a, b]

    def neg(self, a):
        return self.ring.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def lscale(self, r, a):
        """``r * a`` (scalar on the left)."""
        return self.ring.mul_table[r, a]

    def rscale(self, a, r):
        return self.ring.mul_table[a, r]

    def one_plus(self, a):
        return self.add(self.identity, a)

    def power(self, a, p):
        acc = self.eye()
        for _ in range(p):
            acc = self.mul(acc, a)
        return acc

    def equal(self, a, b):
        return bool(np.array_equal(a, b))

    def is_identity(self, a):
        return bool(np.array_equal(a, self.identity))

    # encodings ------------------------------------------------------------

    def key(self, a):
        k = 0
        o = self.ring.order
        for c in np.asarray(a).ravel():
            k = k * o + int(c)
        return k

    def keys(self, stack):
        if not self.keys_fit:
            raise OverflowError(f"{self}: canonical keys exceed {MAX_KEY_BITS} bits")
        return kernels.encode(np.ascontiguousarray(stack, dtype=self.dtype), self.ring.order)

    def decode(self, keys):
        return kernels.decode(keys, self.ring.order, self.n, self.dtype)

    @staticmethod
    def encoding(a):
        """Text form of the canonical encoding: decimal codes, row-major, comma-separated."""
        return ",".join(str(int(c)) for c in np.asarray(a).ravel())

    def parse_encoding(self, text):
        codes = [int(t) for t in text.split(",")]
        return self.from_rows(np.array(codes).reshape(self.n, self.n))

    def pretty(self, a):
        R = self.ring
        return "[" + "; ".join(" ".join(R.label(c) for c in row) for row in a) + "]"

    # invertibility --------------------------------------------------------

    def try_invert(self, m):
        """Return a GroupElement if ``m`` is a unit of ``M_n(R)``, else ``None``.

        Walks the power sequence ``m, m^2, ...``: ``m`` is a unit iff the
        sequence reaches the identity, in which case ``m^(p-1)`` is the inverse.
        A repeat without reaching the identity proves ``m`` is not a unit.
        """
        self._check(m)
        m = np.asarray(m, dtype=self.dtype)
        if use_numba():
            ok, inv = self.invert_batch(m[None])
            return GroupElement(m.copy(), inv[0]) if ok[0] else None
        return self._walk_invert(m)

    def _walk_invert(self, m):
        seen = set()
        prev = self.eye()
        cur = m.copy()
        while True:
            if self.is_identity(cur):
                return GroupElement(m.copy(), prev)
            k = self.key(cur)
            if k in seen:
                return None
            seen.add(k)
            prev = cur
            cur = self.mul(cur, m)

    def element(self, m):
        g = self.try_invert(m)
        if g is None:
            raise NotInvertible(f"matrix {self.encoding(m)} is not invertible")
        return g

    def inverse(self, m):
        return self.element(m).inv

    def invert_batch(self, stack):
        R = self.ring
        return kernels.invert(np.ascontiguousarray(stack, dtype=self.dtype), R.add_table, R.mul_table, self.identity)

    # group operations -----------------------------------------------------

    def _pair(self, a):
        if isinstance(a, GroupElement):
            return a.mat, a.inv
        return a, self.inverse(a)

    def conj(self, a, b):
        """``a^b = b a b^-1``."""
        a_m, _ = self._pair(a)
        b_m, b_i = self._pair(b)
        return self.mul(b_m, a_m, b_i)

    def comm(self, a, b):
        """``[a, b] = a b a^-1 b^-1``."""
        a_m, a_i = self._pair(a)
        b_m, b_i = self._pair(b)
        return self.mul(a_m, b_m, a_i, b_i)

    def comm_many(self, *elems):
        """Left-normed ``[a1, ..., al] = [[a1, ..., a(l-1)], al]``."""
        acc = elems[0]
        for e in elems[1:]:
            c = self.comm(acc, e)
            acc = self.element(c)
        return acc.mat if isinstance(acc, GroupElement) else acc

    def transvection_of(self, m):
        """``(i, j, r)`` if ``m = t_ij(r)`` with ``r != 0``, else ``None``."""
        d = np.argwhere(m != self.identity)
        if len(d) != 1:
            return None
        i, j = (int(v) for v in d[0])
        if i == j:
            return None
        return i, j, int(m[i, j])

    def reduce(self, m, hom):
        """Entrywise image under a ring homomorphism."""
        return hom.map[m]


@dataclass(eq=False)
class GroupElement:
    """An invertible matrix with a certified two-sided inverse."""
    mat: np.ndarray
    inv: np.ndarray

    def inverse(self):
        return GroupElement(self.inv, self.mat)


@dataclass(frozen=True)
class Transvection:
    i: int
    j: int
    r: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("transvection needs i != j")

    def matrix(self, space):
        return space.transvection(self.i, self.j, self.r)

    def element(self, space):
        return GroupElement(space.transvection(self.i, self.j, self.r),
                            space.transvection(self.i, self.j, int(space.ring.neg(self.r))))


def transvection_mat(space, t):
    return t.matrix(space)


def transvections(space, values=None):
    """All ``t_ij(r)`` with ``r`` in ``values`` (default: nonzero elements), as a stack."""
    R = space.ring
    vals = [r for r in (range(R.order) if values is None else values) if r != R.zero]
    mats = [space.transvection(i, j, r) for i in range(space.n) for j in range(space.n) if i != j for r in vals]
    if not mats:
        return np.empty((0, space.n, space.n), dtype=space.dtype)
    return np.stack(mats)


def transvection_keys(space):
    if "tv_keys" not in space.cache:
        space.cache["tv_keys"] = np.sort(space.keys(transvections(space)))
    return space.cache["tv_keys"]
