"""Stability of individual elements of GL(n, R).

Notation used below, for a fixed ``g`` and a fixed pair ``i != j``:

* ``u`` is column ``i`` of ``g`` and ``w`` is row ``j`` of ``g^-1``, so
  ``g e_ij g^-1`` is the outer product ``u w``.
* A witness row is ``x`` (placed in row ``i``) together with indices
  ``k, l`` and a coefficient ``r`` such that ``x_l = 0`` and ``x_k = r w_k``.
  Its pairing with ``u`` is ``alpha = sum_s x_s u_s``.
* ``r`` is admissible when ``1 + alpha`` and ``1 + alpha - x_k u_k`` are
  units (with a central ``c``, when ``1 + alpha c^2`` and
  ``1 + (alpha - x_k u_k) c^2`` are). ``R(g)`` is the additive subgroup
  generated by admissible coefficients.
"""
import itertools
from dataclasses import dataclass

import numpy as np

from .factorizations import (DIAGONAL, Factor, FactorWord, PreconditionError, diag2_relative_factor,
                             embed_2x2, lemma6_factor, tv_factor)
from .matgroup import GroupElement
from .predicates import left_combination
from .ring import RingError, center, jacobson_radical


@dataclass(frozen=True)
class StabilityWitnessRow:
    i: int
    j: int
    k: int
    l: int
    x: tuple
    r: int


def _elem(space, g):
    return g if isinstance(g, GroupElement) else space.element(g)


def _additive_closure(R, elems):
    S = np.array([R.zero])
    for a in sorted(set(int(e) for e in elems)):
        if np.isin(a, S):
            continue
        mult = [R.zero]
        x = R.zero
        while True:
            x = int(R.add(x, a))
            if x == R.zero:
                break
            mult.append(x)
        S = np.unique(R.add_table[S[:, None], np.array(mult)[None, :]])
    return S


def admissible_table(space, g, i, j, c=None):
    """All admissible ``(k, l, r)`` with one witness row each.

    Returns a dict ``(k, l, r) -> x`` holding the first witness found in
    lexicographic order of the free coordinates.
    """
    R = space.ring
    g = _elem(space, g)
    n = space.n
    u = g.mat[:, i].astype(np.int64)
    w = g.inv[j, :].astype(np.int64)
    c2 = R.one if c is None else int(R.mul(c, c))
    add, mul, unit = R.add_table, R.mul_table, R.unit_mask
    one = R.one
    found = {}
    for k in range(n):
        for l in range(n):
            free = [s for s in range(n) if s != k and s != l]
            grid = np.array(list(itertools.product(range(R.order), repeat=len(free))), dtype=np.int64).reshape(-1, len(free))
            # partial sums over the free coordinates
            part = np.full(len(grid), R.zero, dtype=np.int64)
            for col, s in enumerate(free):
                part = add[part, mul[grid[:, col], u[s]]]
            for r in range(R.order):
                xk = int(mul[r, w[k]])
                if k == l and xk != R.zero:
                    continue
                term = R.zero if k == l else int(mul[xk, u[k]])
                alpha = add[part, term]
                ok = unit[add[one, mul[alpha, c2]]]
                rest = add[alpha, R.neg(term)]
                ok &= unit[add[one, mul[rest, c2]]]
                hit = np.flatnonzero(ok)
                if len(hit):
                    x = np.zeros(n, dtype=np.int64)
                    x[free] = grid[hit[0]]
                    x[k] = xk
                    x[l] = R.zero
                    found[(k, l, r)] = tuple(int(v) for v in x)
    return found


def witness_rows(space, g, i, j, c=None):
    """One :class:`StabilityWitnessRow` per admissible ``(k, l, r)``."""
    return [StabilityWitnessRow(i, j, k, l, x, r) for (k, l, r), x in sorted(admissible_table(space, g, i, j, c).items())]


def r_of_g(space, g, i, j):
    """``R(g)`` for the pair ``(i, j)``, as a sorted array of codes."""
    if i == j:
        raise ValueError("R(g) needs i != j")
    found = admissible_table(space, g, i, j)
    return _additive_closure(space.ring, {r for (_, _, r) in found})


def r_of_g_matrix_route(space, g, i, j):
    """Same set via explicit matrices ``1 + V0 U`` and ``1 + (V0 - x_k e_ik) U``.

    Slow; an independent cross-check of :func:`r_of_g`.
    """
    R = space.ring
    g = _elem(space, g)
    n = space.n
    U = space.zeros()
    U[:, i] = g.mat[:, i]
    adm = set()
    for k in range(n):
        for l in range(n):
            for r in range(R.order):
                xk = int(R.mul(r, g.inv[j, k]))
                for x in itertools.product(range(R.order), repeat=n):
                    if x[l] != R.zero or x[k] != xk:
                        continue
                    V0 = space.zeros()
                    V0[i, :] = x
                    Vs = V0.copy()
                    Vs[i, k] = R.sub(Vs[i, k], xk)
                    if space.try_invert(space.one_plus(space.mul(V0, U))) is None:
                        continue
                    if space.try_invert(space.one_plus(space.mul(Vs, U))) is None:
                        continue
                    adm.add(r)
                    break
    return _additive_closure(R, adm)


def is_rij_stable(space, g, i, j):
    return len(r_of_g(space, g, i, j)) == space.ring.order


def is_r_stable(space, g):
    """``(R, i, j)``-stable for every ordered pair ``i != j``."""
    n = space.n
    return all(is_rij_stable(space, g, i, j) for i in range(n) for j in range(n) if i != j)


# --------------------------------------------------------------------------
# main decomposition


def _expand_elementary(space, m, label):
    """Write ``m = 1 + X`` with ``X`` supported on one row or one column (off the diagonal) as transvections."""
    R = space.ring
    X = space.sub(m, space.identity)
    nz = np.argwhere(X != R.zero)
    if len(nz) == 0:
        return []
    rows = set(int(p) for p in nz[:, 0])
    cols = set(int(q) for q in nz[:, 1])
    if any(p == q for p, q in nz):
        raise RingError(f"{label}: diagonal entry in elementary factor")
    if len(rows) == 1:
        p = rows.pop()
        return [tv_factor(space, p, q, X[p, q]) for q in sorted(cols)]
    if len(cols) == 1:
        q = cols.pop()
        return [tv_factor(space, p, q, X[p, q]) for p in sorted(rows)]
    raise RingError(f"{label}: factor is neither row- nor column-type")


def row_decomposition(space, u, y, p, c):
    """Transvections ``T`` and diagonal ``d`` with ``1 + u c^2 y = T d``.

    ``u`` is a column vector, ``y`` a row vector with ``y_p = 0`` placed in the
    row where ``u`` has its pivot; the outer product is ``u_s c^2 y_t``.
    Returns ``(factors, d, alpha)``.
    """
    R = space.ring
    n = space.n
    if y[p] != R.zero:
        raise PreconditionError("pivot coordinate of the row must vanish")
    a = space.zeros()
    b = space.zeros()
    for s in range(n):
        if s != p:
            a[s, p] = R.mul(u[s], c)
            b[p, s] = R.mul(y[s], c)
    alpha = R.sum(R.mul(y[s], u[s]) for s in range(n))
    c2 = R.mul(c, c)
    dval = R.add(R.one, R.mul(alpha, c2))
    if not R.is_unit(dval):
        raise PreconditionError("1 + alpha c^2 is not a unit")
    d = space.eye()
    d[p, p] = dval
    w6 = lemma6_factor(space, a, b)
    gamma = w6.certificates["gamma"]
    omg = space.sub(space.identity, gamma)
    ident = space.identity
    f_left = space.one_plus(space.mul(b, omg))
    f_mid = [space.sub(ident, b), space.one_plus(a), space.one_plus(b), space.sub(ident, a)]
    f_right = space.one_plus(space.mul(omg, a))
    tail = space.zeros()
    for s in range(n):
        tail[p, s] = R.mul(R.mul(dval, R.mul(u[p], c)), b[p, s])
    f_tail = space.one_plus(tail)
    factors = _expand_elementary(space, f_left, "1+b(1-γ)")
    for m, lab in zip(f_mid, ("1-b", "1+a", "1+b", "1-a")):
        factors += _expand_elementary(space, m, lab)
    factors += _expand_elementary(space, f_right, "1+(1-γ)a")
    factors += _expand_elementary(space, f_tail, "1+d u c b")
    return factors, d, alpha


def _inverse_word(space, factors):
    R = space.ring
    return [tv_factor(space, f.transvection.i, f.transvection.j, R.neg(f.transvection.r)) for f in reversed(factors)]


def _conj_diag(space, factors, D):
    """``D t D^-1`` for each transvection ``t``; stays a transvection."""
    R = space.ring
    out = []
    for f in factors:
        t = f.transvection
        s = R.mul(R.mul(D[t.i, t.i], t.r), R.inv(D[t.j, t.j]))
        out.append(tv_factor(space, t.i, t.j, s))
    return out


def _check_witness(space, g, wit, c):
    R = space.ring
    i, j, k, l, x, r = wit.i, wit.j, wit.k, wit.l, wit.x, wit.r
    if i == j:
        raise PreconditionError("i == j")
    if x[l] != R.zero:
        raise PreconditionError("x_l must be zero")
    if x[k] != R.mul(r, g.inv[j, k]):
        raise PreconditionError("x_k must equal r (g^-1)_jk")
    u = g.mat[:, i]
    alpha = R.sum(R.mul(x[s], u[s]) for s in range(space.n))
    c2 = R.mul(c, c)
    rest = R.sub(alpha, R.mul(x[k], u[k]))
    if not R.is_unit(R.add(R.one, R.mul(alpha, c2))):
        raise PreconditionError("1 + V0 c^2 U is not invertible")
    if not R.is_unit(R.add(R.one, R.mul(rest, c2))):
        raise PreconditionError("1 + (V0 - x_k e_ik) c^2 U is not invertible")


def lemma7_decompose(space, g, wit, c=None):
    """Factor ``g t_ij(r c^2) g^-1`` as ``T(g) d_l d_k^-1``.

    ``T(g)`` is a list of transvections with parameters in ``cR``; ``d_l``
    and ``d_k`` are diagonal units equal to ``1`` off positions ``l`` and ``k``.
    """
    R = space.ring
    g = _elem(space, g)
    c = R.one if c is None else c
    if c not in center(R):
        raise PreconditionError(f"{R.label(c)} is not central")
    _check_witness(space, g, wit, c)
    i, j, k, l, r = wit.i, wit.j, wit.k, wit.l, wit.r
    x = np.array(wit.x, dtype=np.int64)
    u = g.mat[:, i].astype(np.int64)
    c2 = R.mul(c, c)
    y = np.array([R.sub(x[q], R.mul(r, g.inv[j, q])) for q in range(space.n)], dtype=np.int64)
    Tl, dl, alpha = row_decomposition(space, u, x, l, c)
    Tk, dk, alpha_k = row_decomposition(space, u, y, k, c)
    if alpha_k != alpha:
        raise RingError("the two rows pair differently with the column")
    dk_inv = space.eye()
    dk_inv[k, k] = R.inv(dk[k, k])
    D = space.mul(dl, dk_inv)
    T = Tl + _conj_diag(space, _inverse_word(space, Tk), D)
    factors = T + [Factor(DIAGONAL, "d_l", dl), Factor(DIAGONAL, "d_k^-1", dk_inv)]
    target = space.conj(space.transvection(i, j, R.mul(r, c2)), g)
    cR = {int(R.mul(c, t)) for t in range(R.order)}
    in_cR = all(f.transvection.r in cR for f in T)
    word = FactorWord(space, target, factors,
                      {"alpha": int(alpha), "d_l": dl, "d_k": dk, "T_l": Tl, "T_k": Tk, "in_cR": in_cR})
    return word


def lemma7_transvection_part(word):
    return [f for f in word.factors if f.kind != DIAGONAL]


def lemma7_pair_check(space, g, h, wit, wit2, I, c=None):
    """Check ``[h, t]^{g'} = T(g) D T(g')^-1`` for ``g' = g h^-1`` and ``t = t_ij(r c^2)``.

    ``D = d_l d_k^-1 d'_k d'_l^-1``. Over a commutative ring ``D`` is
    ``diag(y, y^-1)`` on positions ``(l, k)`` and is certified to lie in
    ``E(n, c^2 I)`` by an explicit transvection word.
    """
    R = space.ring
    c = R.one if c is None else c
    g = _elem(space, g)
    h = _elem(space, h)
    gp = GroupElement(space.mul(g.mat, h.inv), space.mul(h.mat, g.inv))
    for s in range(space.n):
        if R.sub(wit.x[s], wit2.x[s]) not in I:
            raise PreconditionError("x and x' must agree modulo I")
    w1 = lemma7_decompose(space, g, wit, c)
    w2 = lemma7_decompose(space, gp, wit2, c)
    c2 = R.mul(c, c)
    t = GroupElement(space.transvection(wit.i, wit.j, R.mul(wit.r, c2)),
                     space.transvection(wit.i, wit.j, R.neg(R.mul(wit.r, c2))))
    lhs = space.conj(space.comm(h, t), gp)
    T1 = [f.mat for f in lemma7_transvection_part(w1)]
    T2 = [f.mat for f in _inverse_word(space, lemma7_transvection_part(w2))]
    dl, dk = w1.certificates["d_l"], w1.certificates["d_k"]
    dlp, dkp = w2.certificates["d_l"], w2.certificates["d_k"]
    D = space.mul(dl, space.inverse(dk), dkp, space.inverse(dlp))
    rhs = space.mul(*(T1 + [D] + T2))
    out = {"product_equal": space.equal(lhs, rhs), "diag_certified": None}
    k, l = wit.k, wit.l
    if k == l:
        out["diag_certified"] = space.is_identity(D)
    elif R.is_commutative:
        yv = int(D[l, l])
        c2I = {int(R.mul(c2, a)) for a in I.members}
        word = embed_2x2(diag2_relative_factor(R, yv), l, k, space.n)
        params = [f.transvection.r for f in word.factors]
        out["diag_certified"] = (space.equal(word.target, D) and word.verify()
                                 and all(p in c2I for i_, p in enumerate(params) if i_ not in (1, 3)))
    return out


# --------------------------------------------------------------------------
# radical entries


def theorem2_construct(space, g, i, j):
    """Correct ``g`` with ``g_ij`` in the radical so that row i and column j are clean.

    Returns ``(e, e1, e2, g1)`` with ``g1 = e1 e g e2``; afterwards
    ``(g1)_il = 0`` for ``l != j`` and ``(g1)_sj = 0`` for ``s != i``.
    Index collisions (``t_ii``) are skipped.
    """
    R = space.ring
    g = _elem(space, g)
    n = space.n
    G, Gi = g.mat, g.inv
    if int(G[i, j]) not in set(jacobson_radical(R).members):
        raise PreconditionError(f"g_ij = {R.label(G[i, j])} is not in the radical")
    denom = R.add(R.add(R.one, G[i, j]), R.neg(R.mul(Gi[j, i], G[i, j])))
    if not R.is_unit(denom):
        raise PreconditionError("denominator is not a unit")
    alpha = R.neg(R.inv(denom))
    ident = space.identity
    e = space.mul(ident, *[space.transvection(i, m, Gi[j, m]) for m in range(n) if m != i])
    e1 = space.mul(ident, *[space.transvection(m, i, R.mul(G[m, j], alpha)) for m in range(n) if m != i])
    coef = R.mul(alpha, R.sub(R.one, Gi[j, i]))
    e2 = space.mul(ident, *[space.transvection(j, q, R.mul(coef, G[i, q])) for q in range(n) if q != j])
    g1 = space.mul(e1, e, G, e2)
    bad = [(i, q) for q in range(n) if q != j and g1[i, q] != R.zero]
    bad += [(s, j) for s in range(n) if s != i and g1[s, j] != R.zero]
    if bad:
        raise RingError(f"zero pattern violated at {bad}")
    return tuple(space.element(m) for m in (e, e1, e2, g1))


def stable_rank_reduce(space, g):
    """Clear the ``(1, n)`` entry (0-based ``(0, n-1)``) by transvections.

    Finds ``k`` making ``(g_pn + k_p g_1n)_{p>1}`` unimodular with
    coefficients ``t``, puts ``s_p = -g_1n t_p`` and returns
    ``(e1, e2, g1, k, s)`` with ``g1 = e2 e1 g e1^-1``.
    """
    R = space.ring
    g = _elem(space, g)
    n = space.n
    G = g.mat
    last = n - 1
    top = int(G[0, last])
    col = [int(G[p, last]) for p in range(1, n)]
    for kvec in itertools.product(range(R.order), repeat=n - 1):
        v = [int(R.add(col[p], R.mul(kvec[p], top))) for p in range(n - 1)]
        t = left_combination(R, v)
        if t is None:
            continue
        s = [int(R.neg(R.mul(top, tp))) for tp in t]
        e1 = space.mul(space.identity, *[space.transvection(p + 1, 0, kvec[p]) for p in range(n - 1)])
        e2 = space.mul(space.identity, *[space.transvection(0, p + 1, s[p]) for p in range(n - 1)])
        E1 = space.element(e1)
        g1 = space.mul(e2, e1, G, E1.inv)
        if g1[0, last] != R.zero:
            raise RingError("reduction left a nonzero corner")
        return E1, space.element(e2), space.element(g1), tuple(kvec), tuple(s)
    raise RingError("no reducing vector: stable-rank condition fails for this column")


def matching_witness(space, g, wit, I, c=None):
    """A witness for ``g`` with the same ``(i, j, k, l, r)`` whose row agrees with ``wit.x`` modulo ``I``."""
    R = space.ring
    g = _elem(space, g)
    c = R.one if c is None else c
    n = space.n
    free = [s for s in range(n) if s not in (wit.k, wit.l)]
    choices = [sorted({int(R.add(wit.x[s], a)) for a in I.members}) for s in free]
    xk = int(R.mul(wit.r, g.inv[wit.j, wit.k]))
    if wit.k == wit.l and xk != R.zero:
        return None
    for vals in itertools.product(*choices):
        x = [R.zero] * n
        for s, v in zip(free, vals):
            x[s] = v
        x[wit.k] = xk
        cand = StabilityWitnessRow(wit.i, wit.j, wit.k, wit.l, tuple(int(v) for v in x), wit.r)
        try:
            _check_witness(space, g, cand, c)
        except PreconditionError:
            continue
        return cand
    return None
