"""Explicit subgroups of GL(n, R) as sets of canonical keys.

Every subgroup is held as a sorted ``int64`` array of canonical matrix keys
(see :mod:`ringstab.matgroup`). Closures are built incrementally: adding a
generator that already lies in the current group is a no-op, so the
generators that survive form a small working basis. Elements are reached by
right multiplication by generators only; in a finite group the monoid
generated by a set is already a group, so inverses are never needed.
"""
import os
from dataclasses import dataclass, field

import numpy as np

from .matgroup import GroupElement, MatrixSpace, transvection_keys, transvections
from .ring import all_ideals, quotient_ring

DEFAULT_CAP = 2 ** 22
BITMAP_LIMIT = 2 ** 27
CHUNK = 1 << 15


class CapExceeded(RuntimeError):
    pass


def default_cap():
    env = os.environ.get("RINGSTAB_CAP", "").strip()
    return int(env) if env else DEFAULT_CAP


class KeySet:
    """Insert-if-absent set of canonical keys.

    A dense bitmap when the key space is small enough, else a sorted array.
    """

    def __init__(self, key_space, keys=None):
        self.dense = key_space <= BITMAP_LIMIT
        if self.dense:
            self.bits = np.zeros(key_space, dtype=bool)
        else:
            self.sorted = np.empty(0, dtype=np.int64)
        self.count = 0
        if keys is not None:
            self.insert(keys)

    def contains(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        if self.dense:
            return self.bits[keys]
        pos = np.searchsorted(self.sorted, keys)
        pos[pos == len(self.sorted)] = 0
        return self.sorted[pos] == keys if len(self.sorted) else np.zeros(len(keys), dtype=bool)

    def insert(self, keys):
        """Add ``keys``; return the ones that were new, deduplicated and sorted."""
        keys = np.unique(np.asarray(keys, dtype=np.int64))
        new = keys[~self.contains(keys)]
        if self.dense:
            self.bits[new] = True
        else:
            self.sorted = np.union1d(self.sorted, new)
        self.count += len(new)
        return new

    def to_array(self):
        if self.dense:
            return np.flatnonzero(self.bits).astype(np.int64)
        return self.sorted.copy()


@dataclass(eq=False)
class SubgroupClosure:
    """A subgroup of ``GL(n, R)``.

    ``keys`` is sorted. ``generators`` are the matrices the subgroup was
    asked to contain; ``basis`` is the subset that actually enlarged it.
    ``complete`` is False when a cap stopped the enumeration.
    """
    space: MatrixSpace
    keys: np.ndarray
    generators: np.ndarray
    basis: np.ndarray
    complete: bool = True
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.keys)

    def contains_keys(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        if len(self.keys) == 0:
            return np.zeros(keys.shape, dtype=bool)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        return self.keys[pos] == keys

    def __contains__(self, mat):
        return bool(self.contains_keys([self.space.key(mat)])[0])

    def contains_all(self, mats):
        return bool(self.contains_keys(self.space.keys(mats)).all())

    def elements(self):
        return self.space.decode(self.keys)

    def issubset(self, other):
        return bool(other.contains_keys(self.keys).all())

    def same_set(self, other):
        return len(self) == len(other) and bool(np.array_equal(self.keys, other.keys))

    def summary(self):
        return {"size": int(len(self)), "generators": int(len(self.generators)),
                "basis": int(len(self.basis)), "complete": bool(self.complete)}

    def export_lines(self):
        """One canonical encoding per line, sorted by key."""
        return [MatrixSpace.encoding(m) for m in self.elements()]


def _stack(space, mats):
    if isinstance(mats, np.ndarray):
        return mats.reshape(-1, space.n, space.n).astype(space.dtype, copy=False)
    arr = [m.mat if isinstance(m, GroupElement) else np.asarray(m) for m in mats]
    if not arr:
        return np.empty((0, space.n, space.n), dtype=space.dtype)
    return np.stack(arr).astype(space.dtype, copy=False)


class _Builder:
    """Mutable state of an incremental closure."""

    def __init__(self, space, cap, base=None):
        self.space = space
        self.cap = cap
        if base is None:
            self.seen = KeySet(space.key_space, space.keys(space.identity[None]))
            self.basis = np.empty((0, space.n, space.n), dtype=space.dtype)
            self.generators = []
        else:
            self.seen = KeySet(space.key_space, base.keys)
            self.basis = base.basis.copy()
            self.generators = list(base.generators)
        self.base_keys = None if base is None else base.keys
        self.complete = True
        self.watch = None
        self.hit = None

    def members(self):
        if self.base_keys is not None and self.seen.count == len(self.base_keys):
            return self.base_keys
        return self.seen.to_array()

    def _bfs(self, frontier):
        sp = self.space
        while len(frontier):
            for s in range(0, len(frontier), CHUNK):
                prods = sp.mul_outer(frontier[s:s + CHUNK], self.basis)
                new = self.seen.insert(sp.keys(prods))
                if self.watch is not None and len(new):
                    hits = new[self.watch(new)]
                    if len(hits):
                        self.hit = int(hits[0])
                        return False
                if self.seen.count > self.cap:
                    self.complete = False
                    return False
                if len(new):
                    self.pending.append(new)
            if not self.pending:
                return True
            frontier = sp.decode(np.concatenate(self.pending))
            self.pending = []
        return True

    def add(self, g):
        """Extend by one generator; return False if the BFS stopped early."""
        sp = self.space
        self.generators.append(g)
        key = sp.key(g)
        if self.seen.contains([key])[0]:
            return True
        old = self.members()
        self.basis = np.concatenate([self.basis, g[None]])
        self.pending = []
        # old elements are closed under the old basis; only g is new for them
        new = []
        for s in range(0, len(old), CHUNK):
            prods = sp.mul_batch(sp.decode(old[s:s + CHUNK]), np.broadcast_to(g, (min(CHUNK, len(old) - s),) + g.shape).copy())
            fresh = self.seen.insert(sp.keys(prods))
            if self.watch is not None and len(fresh):
                hits = fresh[self.watch(fresh)]
                if len(hits):
                    self.hit = int(hits[0])
                    return False
            if self.seen.count > self.cap:
                self.complete = False
                return False
            new.append(fresh)
        self.base_keys = None
        frontier = sp.decode(np.concatenate(new)) if new else np.empty((0, sp.n, sp.n), dtype=sp.dtype)
        return self._bfs(frontier)

    def result(self, label=""):
        gens = np.stack(self.generators) if self.generators else np.empty((0, self.space.n, self.space.n), dtype=self.space.dtype)
        return SubgroupClosure(self.space, self.members(), gens, self.basis, self.complete, label)


def closure(space, gens, cap=None, base=None, label="", strict=False):
    """Subgroup generated by ``gens`` (optionally together with ``base``)."""
    cap = default_cap() if cap is None else cap
    b = _Builder(space, cap, base)
    for g in _stack(space, gens):
        if not b.add(g):
            break
    out = b.result(label)
    if strict and not out.complete:
        raise CapExceeded(f"closure {label or ''} exceeded cap {cap}")
    return out


def normal_closure(space, gens, conj_gens, cap=None, label="", base=None, watch=None):
    """Smallest subgroup containing ``gens`` and invariant under conjugation by ``conj_gens``.

    Only conjugates of basis elements need checking: if ``c b c^-1`` lies in
    the group for every basis element ``b`` then ``c H c^-1 = H`` (finite group).
    ``watch`` is an optional predicate on new keys; the first hit stops the
    enumeration and is stored in ``meta["hit"]``.
    """
    cap = default_cap() if cap is None else cap
    b = _Builder(space, cap, base)
    b.watch = watch
    C = _stack(space, conj_gens)
    ok, Cinv = space.invert_batch(C)
    if not ok.all():
        raise ValueError("conjugating set contains a non-invertible matrix")
    queue = list(_stack(space, gens))
    checked = 0 if base is None else len(b.basis)
    stopped = False
    while queue and not stopped:
        for g in queue:
            if not b.add(g):
                stopped = True
                break
        queue = []
        if stopped:
            break
        fresh = b.basis[checked:]
        checked = len(b.basis)
        if len(fresh) and len(C):
            # c b c^-1 for every (b, c)
            left = space.mul_outer(C, fresh)
            conj = space.mul_batch(left, np.repeat(Cinv, len(fresh), axis=0))
            keys = space.keys(conj)
            inside = b.seen.contains(keys)
            _, first = np.unique(keys[~inside], return_index=True)
            queue = list(conj[~inside][np.sort(first)])
    out = b.result(label)
    if b.hit is not None:
        out.meta["hit"] = b.hit
    return out


# --------------------------------------------------------------------------
# standard subgroups


def _space(R, n):
    return R if isinstance(R, MatrixSpace) else MatrixSpace(R, n)


def elementary_group(R, n=None, cap=None):
    """E(n, R): the subgroup generated by all transvections."""
    sp = _space(R, n)
    key = ("E", cap)
    if key not in sp.cache:
        sp.cache[key] = closure(sp, transvections(sp), cap, label="E")
    return sp.cache[key]


def _ideal_transvections(sp, I):
    return transvections(sp, sorted(I.members))


def relative_elementary_normal_closure(R, n, I, cap=None):
    """E(n, I) as the normal closure of the I-transvections in E(n, R)."""
    sp = _space(R, n)
    E = elementary_group(sp, cap=cap)
    return normal_closure(sp, _ideal_transvections(sp, I), E.basis, cap, label=f"E(n,{I.label()})")


def relative_elementary_lemma1(R, n, I, cap=None):
    """E(n, I) as the subgroup generated by ``t_ji(r) t_ij(a) t_ji(-r)``, a in I, r in R."""
    sp = _space(R, n)
    ring = sp.ring
    gens = []
    for i in range(sp.n):
        for j in range(sp.n):
            if i == j:
                continue
            for r in range(ring.order):
                c = sp.transvection(j, i, r)
                ci = sp.transvection(j, i, ring.neg(r))
                for a in sorted(I.members):
                    if a != ring.zero:
                        gens.append(sp.mul(c, sp.transvection(i, j, a), ci))
    return closure(sp, gens, cap, label=f"E(n,{I.label()})*")


# --------------------------------------------------------------------------
# full enumeration


@dataclass(eq=False)
class GLData:
    """All invertible matrices of a space, with inverses, sorted by key."""
    space: MatrixSpace
    keys: np.ndarray
    mats: np.ndarray
    invs: np.ndarray

    def __len__(self):
        return len(self.keys)

    def index(self, keys):
        return np.searchsorted(self.keys, keys)


class EnumerationUnsupported(RuntimeError):
    pass


def enumerate_gl(space, cap=None):
    """Filter all ``|R|^(n^2)`` matrices through the invertibility kernel."""
    cap = default_cap() if cap is None else cap
    if "GL" in space.cache:
        return space.cache["GL"]
    if space.key_space > cap:
        raise EnumerationUnsupported(f"{space}: {space.key_space} matrices exceed enumeration cap {cap}")
    keys, mats, invs = [], [], []
    step = 1 << 16
    for s in range(0, space.key_space, step):
        k = np.arange(s, min(s + step, space.key_space), dtype=np.int64)
        M = space.decode(k)
        ok, inv = space.invert_batch(M)
        keys.append(k[ok])
        mats.append(M[ok])
        invs.append(inv[ok])
    data = GLData(space, np.concatenate(keys), np.concatenate(mats), np.concatenate(invs))
    space.cache["GL"] = data
    return data


def generating_set(space, keys, seed=0, cap=None):
    """Greedy generating set of the group whose elements are ``keys``.

    Elements are tried in a seeded random order; one is kept only if it is
    not already in the closure of those kept so far.
    """
    cap = default_cap() if cap is None else cap
    order = np.random.default_rng(seed).permutation(len(keys))
    b = _Builder(space, cap)
    target = len(keys)
    for idx in order:
        if b.seen.count >= target:
            break
        k = keys[idx]
        if b.seen.contains([k])[0]:
            continue
        b.add(space.decode([k])[0])
    return b.result()


def general_linear_group(R, n=None, cap=None, seed=0):
    """GL(n, R) by exhaustive enumeration, with a greedy generating set."""
    sp = _space(R, n)
    if "GLgroup" not in sp.cache:
        data = enumerate_gl(sp, cap)
        gen = generating_set(sp, data.keys, seed, cap)
        sp.cache["GLgroup"] = SubgroupClosure(sp, data.keys, gen.basis, gen.basis, True, "GL")
    return sp.cache["GLgroup"]


def _commutes_with(space, mats, gens):
    ok = np.ones(len(mats), dtype=bool)
    for g in gens:
        G = np.broadcast_to(g, mats.shape).copy()
        ok &= np.all(space.mul_batch(mats, G) == space.mul_batch(G, mats), axis=(1, 2))
    return ok


def center_of_gl(R, n=None, cap=None):
    """Center of GL(n, R): elements commuting with a generating set."""
    sp = _space(R, n)
    if "center" not in sp.cache:
        data = enumerate_gl(sp, cap)
        G = general_linear_group(sp, cap=cap)
        mask = _commutes_with(sp, data.mats, G.basis)
        keys = data.keys[mask]
        gen = closure(sp, data.mats[mask], cap)
        sp.cache["center"] = SubgroupClosure(sp, keys, gen.generators, gen.basis, True, "center")
    return sp.cache["center"]


@dataclass(eq=False)
class CongruencePair:
    ideal: object
    C_I: SubgroupClosure
    C_nI: SubgroupClosure


def _reduced_keys(sp, quotient_space, hom, mats):
    return quotient_space.keys(hom.map[mats])


def congruence_pair(R, n, I, cap=None, seed=0):
    """``C_I`` (kernel of reduction mod I) and ``C(n, I)`` (preimage of the center)."""
    sp = _space(R, n)
    ck = ("congruence", I.members)
    if ck in sp.cache:
        return sp.cache[ck]
    data = enumerate_gl(sp, cap)
    if I.is_whole:
        mask_k = np.ones(len(data), dtype=bool)
        mask_c = mask_k
    else:
        Q, hom = quotient_ring(sp.ring, I)
        qs = MatrixSpace(Q, sp.n)
        red = _reduced_keys(sp, qs, hom, data.mats)
        mask_k = red == qs.key(qs.identity)
        Z = center_of_gl(qs, cap=cap)
        mask_c = Z.contains_keys(red)

    def build(mask, label):
        keys = data.keys[mask]
        gen = generating_set(sp, keys, seed, cap)
        return SubgroupClosure(sp, keys, gen.basis, gen.basis, True, label)

    pair = CongruencePair(I, build(mask_k, f"C_{I.label()}"), build(mask_c, f"C(n,{I.label()})"))
    sp.cache[ck] = pair
    return pair


# --------------------------------------------------------------------------
# commutators and normality


def commutator_subgroup(A, B, cap=None, label=""):
    """``[A, B]``: normal closure in ``<A, B>`` of the commutators of their bases."""
    sp = A.space
    gens = []
    for a in A.basis:
        ga = sp.element(a)
        for b in B.basis:
            c = sp.comm(ga, sp.element(b))
            if not sp.is_identity(c):
                gens.append(c)
    conj = np.concatenate([A.basis, B.basis])
    return normal_closure(sp, gens, conj, cap, label=label or f"[{A.label},{B.label}]")


def iterated_commutator(A, B, times, cap=None):
    """``[A, B, ..., B]`` with ``B`` repeated ``times`` times (left-normed)."""
    out = A
    for _ in range(times):
        out = commutator_subgroup(out, B, cap)
    return out


def is_normal_in(H, G_data, witness_limit=1):
    """Check ``g h g^-1 in H`` for every basis element h of H and every g in ``G_data``.

    Returns ``(ok, witnesses)`` where witnesses are ``(g, h)`` pairs.
    """
    sp = H.space
    wit = []
    for h in H.basis:
        for s in range(0, len(G_data), CHUNK):
            G = G_data.mats[s:s + CHUNK]
            Gi = G_data.invs[s:s + CHUNK]
            Hb = np.broadcast_to(h, G.shape).copy()
            conj = sp.mul_batch(sp.mul_batch(G, Hb), Gi)
            inside = H.contains_keys(sp.keys(conj))
            if not inside.all():
                for t in np.flatnonzero(~inside)[:witness_limit - len(wit)]:
                    wit.append((G[t].copy(), h.copy()))
                if len(wit) >= witness_limit:
                    return False, wit
    return not wit, wit


# --------------------------------------------------------------------------
# invariant subgroups


def conjugacy_orbits(space, data, conj_gens):
    """Orbit representative index of every element of ``data`` under conjugation by ``conj_gens``."""
    C = _stack(space, conj_gens)
    ok, Cinv = space.invert_batch(C)
    rep = np.full(len(data), -1, dtype=np.int64)
    for start in range(len(data)):
        if rep[start] >= 0:
            continue
        rep[start] = start
        frontier = np.array([start])
        while len(frontier):
            M = data.mats[frontier]
            conj = space.mul_batch(space.mul_outer(C, M), np.repeat(Cinv, len(M), axis=0))
            idx = np.unique(data.index(space.keys(conj)))
            idx = idx[rep[idx] < 0]
            rep[idx] = start
            frontier = idx
    return rep


def _transvection_watch(space):
    tk = transvection_keys(space)

    def watch(keys):
        pos = np.minimum(np.searchsorted(tk, keys), len(tk) - 1)
        return tk[pos] == keys
    return watch


def _commutator_ladder(space, g, tv, tv_inv, depth):
    """Iterated commutators ``[..[g, t1], t2..]``; all lie in the invariant closure of g."""
    tk = transvection_keys(space)
    level = g[None]
    for _ in range(depth):
        gi = space.invert_batch(level)[1]
        m = len(tv)
        L = np.repeat(level, m, axis=0)
        Li = np.repeat(gi, m, axis=0)
        T = np.tile(tv, (len(level), 1, 1))
        Ti = np.tile(tv_inv, (len(level), 1, 1))
        c = space.mul_batch(space.mul_batch(space.mul_batch(L, T), Li), Ti)
        keys = space.keys(c)
        pos = np.minimum(np.searchsorted(tk, keys), len(tk) - 1)
        hit = np.flatnonzero(tk[pos] == keys)
        if len(hit):
            return int(keys[hit[0]])
        ident = space.key(space.identity)
        _, first = np.unique(keys, return_index=True)
        first = np.sort(first)
        first = first[keys[first] != ident]
        level = c[first][:4096]
        if not len(level):
            return None
    return None


@dataclass(eq=False)
class ProbeResult:
    ring_name: str
    n: int
    probed: int
    orbits: int
    counterexamples: list
    transvection_free: list
    complete: bool
    mode: str

    @property
    def passed(self):
        return not self.counterexamples and self.complete

    def verdict(self):
        if self.counterexamples:
            return "not partially normal"
        return "partially normal (probe)" if self.complete else "unverified"


def invariant_subgroup_probe(R, n=None, cap=None, depth=3, max_orbits=None, seed=0):
    """Search for an E(n,R)-invariant, transvection-free, noncentral subgroup.

    Each element's invariant closure is explored with an early exit at the
    first non-identity transvection. Conjugate elements have the same closure,
    so only one representative per E(n,R)-conjugacy orbit is explored.
    """
    sp = _space(R, n)
    data = enumerate_gl(sp, cap)
    E = elementary_group(sp, cap=cap)
    Z = center_of_gl(sp, cap=cap)
    rep = conjugacy_orbits(sp, data, E.basis)
    reps = np.unique(rep)
    mode = "exhaustive"
    if max_orbits is not None and len(reps) > max_orbits:
        reps = np.sort(np.random.default_rng(seed).choice(reps, max_orbits, replace=False))
        mode = "sampled"
    tv = transvections(sp)
    tv_inv = np.stack([sp.transvection(*sp.transvection_of(t)[:2], sp.ring.neg(sp.transvection_of(t)[2])) for t in tv])
    watch = _transvection_watch(sp)
    counter, free = [], []
    complete = True
    for idx in reps:
        g = data.mats[idx]
        if _commutator_ladder(sp, g, tv, tv_inv, depth) is not None:
            continue
        N = normal_closure(sp, [g], E.basis, cap, label="N", watch=watch)
        if "hit" in N.meta:
            continue
        if not N.complete:
            complete = False
            continue
        free.append(N)
        if not N.issubset(Z):
            counter.append(g.copy())
    return ProbeResult(sp.ring.name, sp.n, int(len(reps)), int(len(np.unique(rep))), counter, free, complete, mode)


def ideal_transvection_level(G, ideals=None):
    """Largest ideal I with every ``t_ij(I)`` inside the E-invariant subgroup G."""
    sp = G.space
    R = sp.ring
    ideals = all_ideals(R) if ideals is None else ideals
    best = None
    for I in ideals:
        inside = I.is_zero or G.contains_all(_ideal_transvections(sp, I))
        if inside and (best is None or len(I) > len(best)):
            best = I
    return best
