"""Explicit factorizations of matrices into labelled factors.

A :class:`FactorWord` records an ordered list of factors together with the
matrix their product is supposed to equal. ``verify`` recomputes the product
exactly, so every word returned here is a checkable certificate.
"""
from dataclasses import dataclass, field

import numpy as np

from .matgroup import GroupElement, MatrixSpace, NotInvertible, Transvection
from .ring import RingError

TRANSVECTION = "transvection"
DIAGONAL = "diagonal"
MATRIX = "matrix"


class PreconditionError(RingError):
    pass


@dataclass(eq=False)
class Factor:
    kind: str
    label: str
    mat: np.ndarray
    transvection: Transvection | None = None

    def is_well_formed(self, space):
        if self.kind == TRANSVECTION:
            t = self.transvection
            return t is not None and space.equal(self.mat, t.matrix(space))
        if self.kind == DIAGONAL:
            off = self.mat.copy()
            np.fill_diagonal(off, space.ring.zero)
            return not off.any() and all(space.ring.is_unit(int(c)) for c in np.diag(self.mat))
        return self.kind == MATRIX


def tv_factor(space, i, j, r, label=None):
    t = Transvection(i, j, int(r))
    return Factor(TRANSVECTION, label or f"t{i + 1}{j + 1}({space.ring.label(int(r))})", t.matrix(space), t)


def diag_factor(space, values, label):
    return Factor(DIAGONAL, label, space.diag(values))


def mat_factor(mat, label):
    return Factor(MATRIX, label, np.asarray(mat))


@dataclass(eq=False)
class FactorWord:
    space: MatrixSpace
    target: np.ndarray
    factors: list
    certificates: dict = field(default_factory=dict)

    def product(self):
        if not self.factors:
            return self.space.eye()
        return self.space.mul(*[f.mat for f in self.factors])

    def verify(self):
        """Exact product equality plus well-formedness of every tagged factor."""
        if not all(f.is_well_formed(self.space) for f in self.factors):
            return False
        return self.space.equal(self.product(), self.target)

    def labels(self):
        return [f.label for f in self.factors]

    def transvections(self):
        return [f.transvection for f in self.factors if f.kind == TRANSVECTION]

    def __len__(self):
        return len(self.factors)


# --------------------------------------------------------------------------
# commutator formulas


def transvection_comm_closed_form(space, a, b):
    """Predicted ``[t_ik(x), t_lj(y)]`` for a non-opposite pair.

    Equals ``t_ij(xy)`` when ``k = l`` and ``i != j``, ``t_lk(-yx)`` when
    ``i = j`` and ``l != k``, and the identity otherwise.
    """
    i, k, x = a.i, a.j, a.r
    l, j, y = b.i, b.j, b.r
    if (l, j) == (k, i):
        raise ValueError("opposite transvections have no closed-form commutator")
    R = space.ring
    m = space.eye()
    if k == l and i != j:
        m[i, j] = R.add(m[i, j], R.mul(x, y))
    if i == j and l != k:
        m[l, k] = R.add(m[l, k], R.neg(R.mul(y, x)))
    return m


def hall_identity_check(space, a, b, c):
    """Evaluate ``[a^-1, b, c]^a [c^-1, a, b]^c [b^-1, c, a]^b``.

    Returns ``(holds, product)``; the product is the identity in any group.
    """
    a, b, c = (x if isinstance(x, GroupElement) else space.element(x) for x in (a, b, c))

    def term(x, y, z):
        inner = space.comm_many(x.inverse(), y, z)
        return space.conj(inner, x)

    prod = space.mul(term(a, b, c), term(c, a, b), term(b, c, a))
    return space.is_identity(prod), prod


# --------------------------------------------------------------------------
# nilpotent factorization


def lemma6_factor(space, a, b):
    """Write ``1 + ab`` as four factors for square-zero ``a`` and ``b``.

    ``1+ab = (1+b(1-γ)) [1-b, 1+a] (1+(1-γ)a) (1+ba)`` with ``γ = (1+ab)^-1``.
    """
    zero = space.zeros()
    if not space.equal(space.mul(a, a), zero) or not space.equal(space.mul(b, b), zero):
        raise PreconditionError("a and b must square to zero")
    ab = space.mul(a, b)
    ba = space.mul(b, a)
    g = space.try_invert(space.one_plus(ab))
    if g is None:
        raise PreconditionError("1+ab is not invertible")
    gamma = g.inv
    target = g.mat
    if not (space.is_identity(space.mul(gamma, target)) and space.is_identity(space.mul(target, gamma))):
        raise PreconditionError("inverse of 1+ab failed its certificate")
    one_minus_gamma = space.sub(space.identity, gamma)
    f1 = space.one_plus(space.mul(b, one_minus_gamma))
    f2 = space.comm(GroupElement(space.sub(space.identity, b), space.one_plus(b)),
                    GroupElement(space.one_plus(a), space.sub(space.identity, a)))
    f3 = space.one_plus(space.mul(one_minus_gamma, a))
    f4 = space.one_plus(ba)
    factors = [mat_factor(f1, "1+b(1-γ)"), mat_factor(f2, "[1-b,1+a]"),
               mat_factor(f3, "1+(1-γ)a"), mat_factor(f4, "1+ba")]
    return FactorWord(space, target, factors, {"gamma": gamma})


# --------------------------------------------------------------------------
# 2x2 diagonal words


def _require_unit(R, x):
    if not R.is_unit(x):
        raise NotInvertible(f"{R.label(x)} is not a unit")
    return R.inv(x)


def diag2_factor(ring, x):
    """``diag(x, x^-1)`` as six 2x2 transvections."""
    xi = _require_unit(ring, x)
    sp = MatrixSpace(ring, 2)
    one = ring.one
    neg = ring.neg
    factors = [tv_factor(sp, 0, 1, x), tv_factor(sp, 1, 0, neg(xi)), tv_factor(sp, 0, 1, x),
               tv_factor(sp, 0, 1, neg(one)), tv_factor(sp, 1, 0, one), tv_factor(sp, 0, 1, neg(one))]
    return FactorWord(sp, sp.diag([x, xi]), factors)


def diag2_relative_factor(ring, x):
    """``diag(x, x^-1)`` as a word whose transvection parameters lie in ``(x-1)R``-style ideals.

    ``diag(x, x^-1) = t12(x-1) . t21(1) t12(x^-1 - 1) t21(-1) . t21(1-x)``,
    valid over a commutative ring. When ``x = 1 + c`` each factor is a
    transvection with parameter in ``cR`` or a conjugate of one by ``t21(1)``.
    """
    xi = _require_unit(ring, x)
    sp = MatrixSpace(ring, 2)
    R = ring
    one = R.one
    factors = [tv_factor(sp, 0, 1, R.sub(x, one)),
               tv_factor(sp, 1, 0, one),
               tv_factor(sp, 0, 1, R.sub(xi, one)),
               tv_factor(sp, 1, 0, R.neg(one)),
               tv_factor(sp, 1, 0, R.sub(one, x))]
    return FactorWord(sp, sp.diag([x, xi]), factors)


def embed_2x2(word, i, j, n):
    """Place a 2x2 word on rows and columns ``(i, j)`` of the ``n x n`` identity."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError("embedding needs distinct indices in range")
    sp = MatrixSpace(word.space.ring, n)
    idx = (i, j)

    def lift(m):
        out = sp.eye()
        for p in range(2):
            for q in range(2):
                out[idx[p], idx[q]] = m[p, q]
        return out

    factors = []
    for f in word.factors:
        if f.kind == TRANSVECTION:
            t = f.transvection
            factors.append(tv_factor(sp, idx[t.i], idx[t.j], t.r))
        else:
            factors.append(Factor(f.kind, f.label, lift(f.mat)))
    return FactorWord(sp, lift(word.target), factors, dict(word.certificates))
