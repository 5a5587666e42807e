"""Ring-level predicates: unimodularity, stable rank, regularity and relatives.

All searches are exhaustive over the (finite) ring and return the first
witness in ascending code order, so results are deterministic.
"""
import itertools

import numpy as np

from .ring import RingError


class NoWitness(RingError):
    pass


def _left_multiples(R, r):
    return np.unique(R.mul_table[:, r])


def left_span(R, vec):
    """Sorted codes of the left ideal ``R r_1 + ... + R r_n``."""
    S = np.array([R.zero])
    for r in vec:
        S = np.unique(R.add_table[S[:, None], _left_multiples(R, int(r))[None, :]])
    return S


def is_unimodular(R, vec):
    """True iff ``t_1 r_1 + ... + t_n r_n = 1`` for some ``t``."""
    return bool(np.isin(R.one, left_span(R, vec)))


def left_combination(R, vec):
    """Coefficients ``t`` with ``sum t_p r_p = 1``, or ``None``."""
    reach = {R.zero: ()}
    for r in vec:
        r = int(r)
        nxt = {}
        for t in range(R.order):
            tr = int(R.mul_table[t, r])
            for a, coeffs in reach.items():
                s = int(R.add_table[a, tr])
                if s not in nxt:
                    nxt[s] = coeffs + (t,)
        reach = nxt
    return reach.get(R.one)


def _shortened(R, vec, s):
    r1 = vec[0]
    return [int(R.add_table[rp, R.mul_table[sp, r1]]) for rp, sp in zip(vec[1:], s)]


def stable_rank_witness(R, vec):
    """``s`` making ``(r_2 + s_2 r_1, ..., r_n + s_n r_1)`` unimodular, or ``None``."""
    for s in itertools.product(range(R.order), repeat=len(vec) - 1):
        if is_unimodular(R, _shortened(R, vec, s)):
            return s
    return None


def stable_rank_at_most(R, m):
    """Exhaustive check of the stable-rank-``m`` condition.

    Returns ``(holds, witness)``; the witness is a unimodular vector of
    length ``m + 1`` admitting no reduction.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        linv = R.left_invertible_mask
        muls = [_left_multiples(R, r) for r in range(R.order)]
        for r1 in range(R.order):
            for r2 in range(R.order):
                span = R.add_table[muls[r1][:, None], muls[r2][None, :]]
                if not (span == R.one).any():
                    continue
                cand = R.add_table[r2, R.mul_table[:, r1]]
                if not linv[cand].any():
                    return False, (r1, r2)
        return True, None
    for vec in itertools.product(range(R.order), repeat=m + 1):
        if is_unimodular(R, vec) and stable_rank_witness(R, vec) is None:
            return False, vec
    return True, None


def rank1_witness_via_idempotent(R, r, e):
    """For unimodular ``(r, e)`` with ``e`` idempotent, ``s`` with ``e + s r`` a unit.

    Uses ``1 = αr + βe`` and ``s = (1 - e) α``.
    """
    if R.mul(e, e) != e:
        raise ValueError(f"{R.label(e)} is not idempotent")
    for alpha in range(R.order):
        ar = R.mul(alpha, r)
        for beta in range(R.order):
            if R.add(ar, R.mul(beta, e)) == R.one:
                s = int(R.mul(R.sub(R.one, e), alpha))
                u = R.add(e, R.mul(s, r))
                if not R.is_unit(u):
                    raise RingError(f"e + sr = {R.label(u)} is not a unit")
                return s
    raise NoWitness(f"({R.label(r)}, {R.label(e)}) is not unimodular")


def regular_inverse(R, a):
    """Least ``a'`` with ``a a' a = a``, or ``None``."""
    hits = np.flatnonzero(R.mul_table[R.mul_table[a, :], a] == a)
    return int(hits[0]) if len(hits) else None


def is_von_neumann_regular(R):
    return all(regular_inverse(R, a) is not None for a in range(R.order))


def regular_idempotent(R, a):
    """``(a', e)`` with ``a a' a = a`` and ``e = a a'``; checks ``e^2 = e``, ``ea = a``."""
    ap = regular_inverse(R, a)
    if ap is None:
        raise NoWitness(f"{R.label(a)} is not regular")
    e = int(R.mul(a, ap))
    if R.mul(e, e) != e or R.mul(e, a) != a:
        raise RingError("regular idempotent failed its check")
    return ap, e


def _nearly_local_rel(R, a, ap):
    one = R.one
    left = R.add(one, R.mul(ap, a))
    right = R.add(R.sub(one, ap), R.mul(a, ap))
    return R.mul(left, right)


def nearly_local_partner(R, a):
    """Least ``a'`` with ``(1 + a'a)(1 - a' + aa') = 0``, or ``None``."""
    for ap in range(R.order):
        if _nearly_local_rel(R, a, ap) == R.zero:
            return ap
    return None


def is_nearly_local(R):
    return all(nearly_local_partner(R, a) is not None for a in range(R.order))


def nearly_local_idempotent(R, a, ap):
    """``e = (1 - a' + aa') a``; checks ``e^2 = e`` and ``1 - e = (1 - a)(1 + a'a)``."""
    if _nearly_local_rel(R, a, ap) != R.zero:
        raise RingError("defining relation fails for this pair")
    one = R.one
    e = int(R.mul(R.add(R.sub(one, ap), R.mul(a, ap)), a))
    if R.mul(e, e) != e:
        raise RingError("e is not idempotent")
    if R.sub(one, e) != R.mul(R.sub(one, a), R.add(one, R.mul(ap, a))):
        raise RingError("1 - e does not factor")
    return e


def generated_subring(R, a):
    """Sorted codes of the subring generated by ``1`` and ``a``."""
    powers = [R.one]
    seen = {R.one}
    p = R.one
    while True:
        p = R.mul(p, a)
        if p in seen:
            break
        seen.add(p)
        powers.append(p)
    S = np.array([R.zero])
    for p in powers:
        mult = [R.zero]
        x = R.zero
        while True:
            x = R.add(x, p)
            if x == R.zero:
                break
            mult.append(x)
        S = np.unique(R.add_table[S[:, None], np.array(mult)[None, :]])
    return S


def power_idempotent(R, a):
    """``(m, a', e)`` with ``a^m = a^(m+1) a'``, ``a'`` in the subring generated by ``a``.

    ``m`` is minimal; the identity is tried first as ``a'``, then ascending codes.
    ``e = a^m a'^m`` is checked to satisfy ``e^2 = e`` and ``e a^m = a^m``.
    """
    cands = generated_subring(R, a)
    cands = [R.one] + [int(c) for c in cands if c != R.one]
    m = 1
    while m <= R.order + 1:
        am = R.power(a, m)
        am1 = R.mul(am, a)
        for ap in cands:
            if R.mul(am1, ap) == am:
                e = int(R.mul(am, R.power(ap, m)))
                if R.mul(e, e) != e or R.mul(e, am) != am:
                    raise RingError("power idempotent failed its check")
                return m, int(ap), e
        m += 1
    raise RingError("power sequence did not stabilise")  # unreachable for finite rings
