"""Finite associative rings with identity, stored as dense operation tables.

Elements are the integer codes ``0 .. order-1``. Parametric families
(``zmod``, ``trunc_poly``, ``matrix``, ``upper_triangular``, ``product``)
only generate the tables; every algorithm downstream reads the tables.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian

import numpy as np

DEFAULT_RING_CAP = 256
EXHAUSTIVE_AXIOM_LIMIT = 64
AXIOM_SAMPLES = 100_000


class RingError(ValueError):
    pass


class RingAxiomError(RingError):
    """Tables violate a ring axiom; ``witness`` holds the offending elements."""

    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"{axiom} fails at {self.witness}")


class RingCapError(RingError):
    pass


def _code_dtype(order):
    return np.uint8 if order <= 256 else np.int32


class FiniteRing:
    """A finite ring given by its addition and multiplication tables.

    Construction validates the ring axioms (exhaustively up to order 64,
    on 10^5 seeded random triples above that) and locates ``zero`` and ``one``.
    Instances are immutable; derived data is cached on first use.
    """

    def __init__(self, add_table, mul_table, family_tag="explicit_table", descriptor=None,
                 labels=None, name=None, validate=True):
        add_table = np.asarray(add_table)
        mul_table = np.asarray(mul_table)
        if add_table.ndim != 2 or add_table.shape[0] != add_table.shape[1]:
            raise RingError(f"addition table must be square, got shape {add_table.shape}")
        if mul_table.shape != add_table.shape:
            raise RingError(f"multiplication table shape {mul_table.shape} != addition table shape {add_table.shape}")
        order = add_table.shape[0]
        if order < 2:
            raise RingError("ring must have at least two elements")
        for tab, what in ((add_table, "addition"), (mul_table, "multiplication")):
            if tab.min() < 0 or tab.max() >= order:
                bad = np.argwhere((tab < 0) | (tab >= order))[0]
                raise RingError(f"{what} table entry at {tuple(int(b) for b in bad)} is not an element code")
        self.order = order
        self.dtype = _code_dtype(order)
        self.add_table = add_table.astype(self.dtype)
        self.mul_table = mul_table.astype(self.dtype)
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)
        self.family_tag = family_tag
        self.descriptor = descriptor if descriptor is not None else {"family": "explicit"}
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(order))
        self.name = name or family_tag
        self.zero = self._find_identity(self.add_table, "additive")
        self.one = self._find_identity(self.mul_table, "multiplicative")
        if self.zero == self.one:
            raise RingAxiomError("zero != one", (self.zero,))
        if validate:
            check_axioms(self)
        neg = np.argmax(self.add_table == self.zero, axis=1)
        self.neg_table = neg.astype(self.dtype)
        self.neg_table.setflags(write=False)

    def _find_identity(self, table, what):
        idx = np.arange(self.order)
        hits = np.flatnonzero(np.all(table == idx[None, :], axis=1) & np.all(table.T == idx[None, :], axis=1))
        if hits.size == 0:
            raise RingAxiomError(f"{what} identity exists", ())
        return int(hits[0])

    def __repr__(self):
        return f"FiniteRing({self.name}, order={self.order})"

    # scalar / vectorised arithmetic -------------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = int(self.add_table[acc, x])
        return acc

    def multiple(self, k, a):
        """``a + a + ... + a`` (``k`` times, ``k >= 0``)."""
        acc = self.zero
        for _ in range(k):
            acc = int(self.add_table[acc, a])
        return acc

    def power(self, a, m):
        acc = self.one
        for _ in range(m):
            acc = int(self.mul_table[acc, a])
        return acc

    def label(self, a):
        return self.labels[int(a)]

    @property
    def elements(self):
        return range(self.order)

    # derived data ---------------------------------------------------------

    @cached_property
    def is_commutative(self):
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    @cached_property
    def unit_inverse(self):
        """Map unit -> two-sided inverse, by exhaustive search."""
        both = (self.mul_table == self.one) & (self.mul_table.T == self.one)
        has = both.any(axis=1)
        inv = np.argmax(both, axis=1)
        return {int(a): int(inv[a]) for a in np.flatnonzero(has)}

    @cached_property
    def unit_mask(self):
        mask = np.zeros(self.order, dtype=bool)
        mask[list(self.unit_inverse)] = True
        mask.setflags(write=False)
        return mask

    def is_unit(self, a):
        return bool(self.unit_mask[a])

    def inv(self, a):
        try:
            return self.unit_inverse[int(a)]
        except KeyError:
            raise RingError(f"{self.label(a)} is not a unit") from None

    @cached_property
    def left_invertible_mask(self):
        return (self.mul_table == self.one).any(axis=0)

    @cached_property
    def right_invertible_mask(self):
        return (self.mul_table == self.one).any(axis=1)


def check_axioms(R, exhaustive=None, samples=AXIOM_SAMPLES, seed=0):
    """Raise RingAxiomError with a witness triple if any ring axiom fails."""
    A, M, n = R.add_table, R.mul_table, R.order
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_AXIOM_LIMIT
    if exhaustive:
        a, b, c = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
    x = np.arange(n)
    checks = [
        ("addition commutative", A[x[:, None], x[None, :]] != A[x[None, :], x[:, None]], None),
        ("additive inverses exist", ~(A == R.zero).any(axis=1), None),
        ("addition associative", A[A[a, b], c] != A[a, A[b, c]], (a, b, c)),
        ("multiplication associative", M[M[a, b], c] != M[a, M[b, c]], (a, b, c)),
        ("left distributivity", M[a, A[b, c]] != A[M[a, b], M[a, c]], (a, b, c)),
        ("right distributivity", M[A[a, b], c] != A[M[a, c], M[b, c]], (a, b, c)),
    ]
    for axiom, bad, triple in checks:
        if bad.any():
            if triple is None:
                witness = tuple(np.argwhere(bad)[0])
            else:
                k = int(np.flatnonzero(bad)[0])
                witness = (triple[0][k], triple[1][k], triple[2][k])
            raise RingAxiomError(axiom, witness)


# --------------------------------------------------------------------------
# families


def _tables_from_vectors(vecs, weights, add_fn, mul_fn):
    """Build tables for rings whose elements are coordinate vectors over a base.

    ``vecs[c]`` is the coordinate vector of code ``c``; ``add_fn``/``mul_fn`` map
    two ``(order, order, d)`` stacks to a ``(order, order, d)`` stack, and
    ``weights`` turns a vector back into its code.
    """
    order = vecs.shape[0]
    X = vecs[:, None, :].repeat(order, axis=1)
    Y = vecs[None, :, :].repeat(order, axis=0)
    return add_fn(X, Y) @ weights, mul_fn(X, Y) @ weights


def _msd_weights(radix, d):
    return radix ** np.arange(d - 1, -1, -1, dtype=np.int64)


def _vectors(radix, d):
    return np.array(list(_cartesian(range(radix), repeat=d)), dtype=np.int64).reshape(-1, d)


def _check_cap(order, cap):
    cap = DEFAULT_RING_CAP if cap is None else cap
    if order > cap:
        raise RingCapError(f"ring of order {order} exceeds cap {cap}")


def zmod(m, cap=None):
    if m < 2:
        raise RingError("zmod requires m >= 2")
    _check_cap(m, cap)
    x = np.arange(m)
    return FiniteRing((x[:, None] + x[None, :]) % m, (x[:, None] * x[None, :]) % m,
                      family_tag="zmod", descriptor={"family": "zmod", "m": m}, name=f"Z/{m}")


def trunc_poly(base, k, cap=None):
    """``base[x]/(x^k)`` with ``x`` central; coefficient of ``x^0`` is the least significant digit."""
    if k < 1:
        raise RingError("trunc_poly requires k >= 1")
    b = base.order
    _check_cap(b ** k, cap)
    weights = b ** np.arange(k, dtype=np.int64)          # x^0 least significant
    vecs = (np.arange(b ** k)[:, None] // weights[None, :]) % b
    A, M = base.add_table.astype(np.int64), base.mul_table.astype(np.int64)

    def pmul(X, Y):
        out = np.full(X.shape, base.zero, dtype=np.int64)
        for p in range(k):
            for q in range(k - p):
                out[..., p + q] = A[out[..., p + q], M[X[..., p], Y[..., q]]]
        return out

    add, mul = _tables_from_vectors(vecs, weights, lambda X, Y: A[X, Y], pmul)
    labels = [_poly_label(base, v) for v in vecs]
    return FiniteRing(add, mul, family_tag="trunc_poly",
                      descriptor={"family": "trunc_poly", "base": base.descriptor, "k": k},
                      labels=labels, name=f"{base.name}[x]/(x^{k})")


def _poly_label(base, coeffs):
    terms = []
    for p, c in enumerate(coeffs):
        if c == base.zero:
            continue
        mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
        cl = base.label(c)
        if not mono:
            terms.append(cl)
        elif c == base.one:
            terms.append(mono)
        else:
            terms.append(f"{cl}{mono}")
    return "+".join(terms) if terms else base.label(base.zero)


def _matmul_stack(A, M, X, Y, k, zero):
    out = np.full(X.shape, zero, dtype=np.int64)
    for i in range(k):
        for j in range(k):
            acc = np.full(X.shape[:-1], zero, dtype=np.int64)
            for t in range(k):
                acc = A[acc, M[X[..., i * k + t], Y[..., t * k + j]]]
            out[..., i * k + j] = acc
    return out


def matrix_ring(k, base, cap=None):
    """Full ``k x k`` matrix ring over ``base``; entries row-major, first most significant."""
    if k < 1:
        raise RingError("matrix ring requires k >= 1")
    b = base.order
    _check_cap(b ** (k * k), cap)
    vecs = _vectors(b, k * k)
    A, M = base.add_table.astype(np.int64), base.mul_table.astype(np.int64)
    add, mul = _tables_from_vectors(vecs, _msd_weights(b, k * k), lambda X, Y: A[X, Y],
                                    lambda X, Y: _matmul_stack(A, M, X, Y, k, base.zero))
    labels = ["[" + ";".join(",".join(base.label(v[i * k + j]) for j in range(k)) for i in range(k)) + "]"
              for v in vecs]
    return FiniteRing(add, mul, family_tag="matrix",
                      descriptor={"family": "matrix", "k": k, "base": base.descriptor},
                      labels=labels, name=f"M{k}({base.name})")


def upper_triangular(k, base, cap=None):
    """Upper-triangular ``k x k`` matrices; the ``i <= j`` entries row-major, first most significant."""
    if k < 1:
        raise RingError("upper_triangular requires k >= 1")
    pos = [(i, j) for i in range(k) for j in range(i, k)]
    b = base.order
    _check_cap(b ** len(pos), cap)
    vecs = _vectors(b, len(pos))
    A, M = base.add_table.astype(np.int64), base.mul_table.astype(np.int64)
    full_idx = [i * k + j for i, j in pos]

    def embed(X):
        full = np.full(X.shape[:-1] + (k * k,), base.zero, dtype=np.int64)
        full[..., full_idx] = X
        return full

    add, mul = _tables_from_vectors(
        vecs, _msd_weights(b, len(pos)), lambda X, Y: A[X, Y],
        lambda X, Y: _matmul_stack(A, M, embed(X), embed(Y), k, base.zero)[..., full_idx])
    labels = []
    for v in vecs:
        full = embed(v[None, :])[0]
        labels.append("[" + ";".join(",".join(base.label(full[i * k + j]) for j in range(k)) for i in range(k)) + "]")
    return FiniteRing(add, mul, family_tag="upper_triangular",
                      descriptor={"family": "upper_triangular", "k": k, "base": base.descriptor},
                      labels=labels, name=f"UT{k}({base.name})")


def product(*rings, cap=None):
    """Direct product; codes are mixed-radix tuples, first factor most significant."""
    if not rings:
        raise RingError("product needs at least one factor")
    order = int(np.prod([R.order for R in rings]))
    _check_cap(order, cap)
    sizes = [R.order for R in rings]
    vecs = np.array(list(_cartesian(*[range(s) for s in sizes])), dtype=np.int64)
    weights = np.array([int(np.prod(sizes[i + 1:])) for i in range(len(sizes))], dtype=np.int64)
    add = np.zeros((order, order), dtype=np.int64)
    mul = np.zeros((order, order), dtype=np.int64)
    for f, R in enumerate(rings):
        col = vecs[:, f]
        add += R.add_table.astype(np.int64)[col[:, None], col[None, :]] * weights[f]
        mul += R.mul_table.astype(np.int64)[col[:, None], col[None, :]] * weights[f]
    labels = ["(" + ",".join(R.label(v[f]) for f, R in enumerate(rings)) + ")" for v in vecs]
    return FiniteRing(add, mul, family_tag="product",
                      descriptor={"family": "product", "factors": [R.descriptor for R in rings]},
                      labels=labels, name=" x ".join(R.name for R in rings))


def explicit(add_table, mul_table, name=None, cap=None):
    add_table = np.asarray(add_table)
    _check_cap(add_table.shape[0] if add_table.ndim else 0, cap)
    return FiniteRing(add_table, mul_table, family_tag="explicit_table",
                      descriptor={"family": "explicit", "add": np.asarray(add_table).tolist(),
                                  "mul": np.asarray(mul_table).tolist()},
                      name=name or "explicit")


def build_ring(desc, cap=None):
    """Build a ring from a family descriptor dict.

    >>> build_ring({"family": "zmod", "m": 4}).order
    4

    Nested ``base``/``factors`` entries may be descriptors or FiniteRing objects.
    """
    if isinstance(desc, FiniteRing):
        return desc
    fam = desc.get("family")

    def sub(d):
        return build_ring(d, cap=cap)

    if fam == "zmod":
        return zmod(int(desc["m"]), cap=cap)
    if fam == "trunc_poly":
        return trunc_poly(sub(desc["base"]), int(desc["k"]), cap=cap)
    if fam == "matrix":
        return matrix_ring(int(desc["k"]), sub(desc["base"]), cap=cap)
    if fam == "upper_triangular":
        return upper_triangular(int(desc["k"]), sub(desc["base"]), cap=cap)
    if fam == "product":
        factors = desc.get("factors") or []
        if not factors:
            raise RingError("product list must be nonempty")
        return product(*[sub(f) for f in factors], cap=cap)
    if fam in ("explicit", "explicit_table"):
        return explicit(desc["add"], desc["mul"], name=desc.get("name"), cap=cap)
    raise RingError(f"unknown ring family {fam!r}")


# --------------------------------------------------------------------------
# element sets and ideals


def units(R):
    """Units of ``R`` as a dict ``unit -> inverse``."""
    return dict(R.unit_inverse)


def center(R):
    M = R.mul_table
    return frozenset(int(c) for c in np.flatnonzero(np.all(M == M.T, axis=1)))


@dataclass(frozen=True)
class Ideal:
    """A two-sided ideal as an explicit member set plus a generating list."""
    ring: FiniteRing = field(repr=False, compare=False)
    members: frozenset
    generators: tuple = ()

    def __contains__(self, a):
        return int(a) in self.members

    def __len__(self):
        return len(self.members)

    def __le__(self, other):
        return self.members <= other.members

    @property
    def mask(self):
        m = np.zeros(self.ring.order, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def is_zero(self):
        return len(self.members) == 1

    @property
    def is_whole(self):
        return len(self.members) == self.ring.order

    def sorted(self):
        return sorted(self.members)

    def label(self):
        R = self.ring
        if self.is_zero:
            return "0"
        if self.is_whole:
            return "R"
        return "(" + ",".join(R.label(g) for g in self.generators) + ")"

    def is_ideal(self):
        R, m = self.ring, self.mask
        mem = np.array(self.sorted())
        return bool(m[R.zero]
                    and m[R.add_table[mem[:, None], mem[None, :]]].all()
                    and m[R.neg_table[mem]].all()
                    and m[R.mul_table[:, mem]].all()
                    and m[R.mul_table[mem, :]].all())


def _close_ideal(R, mask):
    A, M = R.add_table, R.mul_table
    mask = mask.copy()
    mask[R.zero] = True
    while True:
        mem = np.flatnonzero(mask)
        new = mask.copy()
        new[M[:, mem].ravel()] = True
        new[M[mem, :].ravel()] = True
        mem = np.flatnonzero(new)
        new[A[mem[:, None], mem[None, :]].ravel()] = True
        if np.array_equal(new, mask):
            return mask
        mask = new


def _generating_list(R, members):
    gens = []
    cur = np.zeros(R.order, dtype=bool)
    cur[R.zero] = True
    for a in sorted(members):
        if not cur[a]:
            gens.append(a)
            m = np.zeros(R.order, dtype=bool)
            m[gens] = True
            cur = _close_ideal(R, m)
    return tuple(gens)


def ideal_generated(R, gens):
    """Least two-sided ideal containing ``gens`` (fixed point under +, r*, *r)."""
    m = np.zeros(R.order, dtype=bool)
    gens = [int(g) for g in gens]
    if any(g < 0 or g >= R.order for g in gens):
        raise RingError("generator is not an element of the ring")
    m[gens] = True
    m = _close_ideal(R, m)
    return Ideal(R, frozenset(int(a) for a in np.flatnonzero(m)), tuple(g for g in gens if g != R.zero))


def ideal_from_members(R, members):
    members = frozenset(int(a) for a in members)
    return Ideal(R, members, _generating_list(R, members))


def zero_ideal(R):
    return Ideal(R, frozenset([R.zero]), ())


def whole_ideal(R):
    return Ideal(R, frozenset(range(R.order)), (R.one,))


def ideal_sum(I, J):
    return ideal_generated(I.ring, list(I.generators) + list(J.generators))


def ideal_product(I, J):
    """``IJ``: the ideal generated by all products ``ab``, ``a in I``, ``b in J``."""
    R = I.ring
    a = np.array(I.sorted())
    b = np.array(J.sorted())
    prods = np.unique(R.mul_table[a[:, None], b[None, :]])
    return ideal_from_members(R, np.flatnonzero(_close_ideal(R, np.isin(np.arange(R.order), prods))))


def all_ideals(R):
    """Every two-sided ideal, as sums of principal ideals; sorted by (size, members)."""
    principal = {}
    for a in range(R.order):
        I = ideal_generated(R, [a])
        principal.setdefault(I.members, I)
    found = {I.members for I in principal.values()}
    frontier = list(found)
    while frontier:
        nxt = []
        for S in frontier:
            for P in principal:
                if P <= S:
                    continue
                m = np.zeros(R.order, dtype=bool)
                m[list(S | P)] = True
                T = frozenset(int(x) for x in np.flatnonzero(_close_ideal(R, m)))
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return [ideal_from_members(R, S) for S in sorted(found, key=lambda s: (len(s), sorted(s)))]


def jacobson_radical(R):
    """``{r : 1 - s r is a unit for every s}`` using two-sided units."""
    sr = R.mul_table.T                     # sr[r, s] = s * r
    one_minus = R.add_table[R.one, R.neg_table[sr]]
    members = np.flatnonzero(R.unit_mask[one_minus].all(axis=1))
    return ideal_from_members(R, members)


def annihilator(R, I):
    """``{r : r a = a r = 0 for all a in I}``."""
    mem = np.array(I.sorted())
    ok = np.all(R.mul_table[:, mem] == R.zero, axis=1) & np.all(R.mul_table[mem, :] == R.zero, axis=0)
    return ideal_from_members(R, np.flatnonzero(ok))


@dataclass(frozen=True)
class RingHom:
    source: FiniteRing = field(repr=False)
    target: FiniteRing = field(repr=False)
    map: np.ndarray = field(repr=False)

    def __call__(self, a):
        return self.map[a]

    def kernel(self):
        return ideal_from_members(self.source, np.flatnonzero(self.map == self.target.zero))

    def is_surjective(self):
        return len(np.unique(self.map)) == self.target.order

    def check(self):
        """Exhaustively verify ``h(a+b) = h(a)+h(b)``, ``h(ab) = h(a)h(b)``, ``h(1) = 1``."""
        S, T, h = self.source, self.target, self.map
        if h[S.one] != T.one:
            return False
        return bool(np.array_equal(h[S.add_table], T.add_table[h[:, None], h[None, :]])
                    and np.array_equal(h[S.mul_table], T.mul_table[h[:, None], h[None, :]]))


def quotient_ring(R, I, allow_trivial=False):
    """``R/I`` with cosets labelled by their minimum code, plus the projection."""
    if I.is_whole and not allow_trivial:
        raise RingError("quotient by the whole ring is trivial; pass allow_trivial=True")
    mem = np.array(I.sorted())
    cosets = R.add_table[:, mem]           # row a = a + I
    rep = cosets.min(axis=1)
    reps = np.unique(rep)
    code = np.searchsorted(reps, rep)
    if reps.size == 1:
        raise RingError("trivial quotient ring has no table representation")
    add = code[R.add_table[reps[:, None], reps[None, :]]]
    mul = code[R.mul_table[reps[:, None], reps[None, :]]]
    Q = FiniteRing(add, mul, family_tag="quotient",
                   descriptor={"family": "quotient", "of": R.descriptor, "ideal": I.sorted()},
                   labels=[R.label(r) + "+I" for r in reps] if not I.is_zero else R.labels,
                   name=f"{R.name}/{I.label()}", validate=False)
    hom = RingHom(R, Q, code.astype(Q.dtype))
    return Q, hom
