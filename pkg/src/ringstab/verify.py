"""Ring-level verification: commutator and normal rings, invariant-subgroup checks, classification.

Every function returns plain dicts and lists (JSON-ready, deterministic
ordering). Statuses are ``"pass"``, ``"fail"`` or ``"unverified"``; the last
one means a cap or an unsupported enumeration stopped the check.
"""
import itertools

import numpy as np

from .matgroup import GroupElement, MatrixSpace, transvection_keys
from .predicates import is_nearly_local, is_von_neumann_regular, stable_rank_at_most
from .ring import all_ideals, annihilator, ideal_generated, jacobson_radical, quotient_ring
from .subgroups import (EnumerationUnsupported, center_of_gl, commutator_subgroup,
                        congruence_pair, conjugacy_orbits, elementary_group, enumerate_gl, ideal_transvection_level,
                        invariant_subgroup_probe, is_normal_in, normal_closure, relative_elementary_lemma1)

PASS, FAIL, UNVERIFIED = "pass", "fail", "unverified"
WEAK_LENGTH_MAX = 4


def combine(statuses):
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if UNVERIFIED in statuses:
        return UNVERIFIED
    return PASS


def _status(ok):
    return PASS if ok else FAIL


def _first_difference(A, B):
    """A key in exactly one of the two subgroups, as an encoded matrix."""
    diff = np.setxor1d(A.keys, B.keys)
    if not len(diff):
        return None
    return MatrixSpace.encoding(A.space.decode(diff[:1])[0])


class Instance:
    """Shared enumerations for one ``(R, n)`` pair."""

    def __init__(self, ring, n=3, cap=None):
        self.ring = ring
        self.n = n
        self.cap = cap
        self.space = MatrixSpace(ring, n)
        self.ideals = all_ideals(ring)
        self._gl_error = None

    @property
    def gl(self):
        return enumerate_gl(self.space, self.cap)

    def gl_supported(self):
        try:
            enumerate_gl(self.space, self.cap)
            return True
        except EnumerationUnsupported as exc:
            self._gl_error = str(exc)
            return False

    def E(self):
        return elementary_group(self.space, cap=self.cap)

    def EI(self, I):
        key = ("EI", I.members)
        if key not in self.space.cache:
            self.space.cache[key] = relative_elementary_lemma1(self.space, self.n, I, self.cap)
        return self.space.cache[key]

    def congruence(self, I):
        return congruence_pair(self.space, self.n, I, self.cap)

    def in_congruence(self, mats, J):
        """Membership of each matrix in ``C(n, J)``: reduction mod J is central."""
        mats = np.asarray(mats).reshape(-1, self.n, self.n)
        if J.is_whole:
            return np.ones(len(mats), dtype=bool)
        key = ("Cmember", J.members)
        if key not in self.space.cache:
            Q, hom = quotient_ring(self.ring, J)
            qs = MatrixSpace(Q, self.n)
            self.space.cache[key] = (qs, hom, center_of_gl(qs, cap=self.cap))
        qs, hom, Z = self.space.cache[key]
        return Z.contains_keys(qs.keys(hom.map[mats]))


# --------------------------------------------------------------------------
# commutator rings


def verify_commutator_ring(inst):
    """Per ideal: ``[C(n,I), E(n,R)] = E(n,I)``, ``E(n,I) ⊆ C_I ⊆ C(n,I)`` and normality of ``E(n,I)``."""
    out = []
    if not inst.gl_supported():
        for I in inst.ideals:
            out.append({"ideal": I.label(), "status": UNVERIFIED, "reason": inst._gl_error})
        return out
    E = inst.E()
    for I in inst.ideals:
        row = {"ideal": I.label()}
        EI = inst.EI(I)
        cp = inst.congruence(I)
        comm = commutator_subgroup(cp.C_nI, E, inst.cap)
        if not (E.complete and EI.complete and comm.complete):
            row.update(status=UNVERIFIED, reason="closure cap")
            out.append(row)
            continue
        equal = comm.same_set(EI)
        chain = EI.issubset(cp.C_I) and cp.C_I.issubset(cp.C_nI)
        normal, wit = is_normal_in(EI, inst.gl)
        row.update(sizes={"E(n,I)": len(EI), "C_I": len(cp.C_I), "C(n,I)": len(cp.C_nI), "[C(n,I),E]": len(comm)},
                   commutator_equal=equal, chain=chain, normal=normal,
                   status=_status(equal and chain and normal))
        if not equal:
            row["witness"] = _first_difference(comm, EI)
        if not normal:
            g, h = wit[0]
            row["witness"] = {"g": MatrixSpace.encoding(g), "h": MatrixSpace.encoding(h)}
        out.append(row)
    return out


def weakly_commutator_length(inst, kmax=WEAK_LENGTH_MAX):
    """Least ``k <= kmax`` with ``[C(n,I), E, ..., E] = E(n,I)`` (k copies of E) for all ideals.

    Returns ``(k, status)``; ``k`` is None when not found or unverified.
    """
    if not inst.gl_supported():
        return None, UNVERIFIED
    E = inst.E()
    current = {I.members: inst.congruence(I).C_nI for I in inst.ideals}
    for k in range(1, kmax + 1):
        ok = True
        for I in inst.ideals:
            current[I.members] = commutator_subgroup(current[I.members], E, inst.cap)
            if not current[I.members].complete:
                return None, UNVERIFIED
            ok &= current[I.members].same_set(inst.EI(I))
        if ok:
            return k, PASS
    return None, FAIL


# --------------------------------------------------------------------------
# invariant subgroups


def partial_normality(inst, max_orbits=None, seed=0):
    if not inst.gl_supported():
        return {"status": UNVERIFIED, "reason": inst._gl_error}, None
    p = invariant_subgroup_probe(inst.space, cap=inst.cap, max_orbits=max_orbits, seed=seed)
    status = FAIL if p.counterexamples else (PASS if p.complete and p.mode == "exhaustive" else UNVERIFIED)
    rep = {"status": status, "label": p.verdict(), "orbits": p.orbits, "probed": p.probed,
           "elements": int(len(inst.gl)), "mode": p.mode,
           "transvection_free_closures": sorted(len(N) for N in p.transvection_free)}
    if p.counterexamples:
        rep["witness"] = MatrixSpace.encoding(p.counterexamples[0])
    return rep, p


def normality_probe(inst, max_orbits=None, seed=0):
    """For each orbit-generated invariant subgroup G: ``E(n,I0) ⊆ G ⊆ C(n,I0)``.

    ``I0`` is the largest ideal whose transvections lie in G. Only subgroups
    generated by a single E(n,R)-orbit are examined, so a pass is a probe,
    not a proof.
    """
    if not inst.gl_supported():
        return {"status": UNVERIFIED, "reason": inst._gl_error}
    sp = inst.space
    data = inst.gl
    E = inst.E()
    reps = np.unique(conjugacy_orbits(sp, data, E.basis))
    mode = "exhaustive"
    if max_orbits is not None and len(reps) > max_orbits:
        reps = np.sort(np.random.default_rng(seed).choice(reps, max_orbits, replace=False))
        mode = "sampled"
    levels = {}
    failures = []
    complete = True
    for idx in reps:
        G = normal_closure(sp, [data.mats[idx]], E.basis, inst.cap)
        if not G.complete:
            complete = False
            continue
        I0 = ideal_transvection_level(G, inst.ideals)
        lower = inst.EI(I0).issubset(G)
        upper = bool(inst.in_congruence(G.elements(), I0).all())
        levels[I0.label()] = levels.get(I0.label(), 0) + 1
        if not (lower and upper):
            failures.append(MatrixSpace.encoding(data.mats[idx]))
    status = FAIL if failures else (PASS if complete and mode == "exhaustive" else UNVERIFIED)
    rep = {"status": status, "label": "normal (probe)" if status == PASS else status, "orbits_probed": int(len(reps)),
           "mode": mode, "levels": dict(sorted(levels.items()))}
    if failures:
        rep["witness"] = failures[0]
    return rep


def _ann_of(R, xs, cache):
    key = tuple(sorted(set(int(x) for x in xs)))
    if key not in cache:
        cache[key] = annihilator(R, ideal_generated(R, list(key)))
    return cache[key]


def lemma_suite_invariant_subgroups(inst, probe):
    """Assert the conclusions about transvection-free invariant subgroups on every element found.

    Checks that entries are zero divisors (two-sided and one-sided), that
    commutators vanish, the row and column relations, one-sided inverses, and
    the two-factor decomposition (factorizations searched in GL).
    """
    sp = inst.space
    R = inst.ring
    n = inst.n
    if probe is None:
        return {"status": UNVERIFIED, "reason": "no probe data"}
    counts = {k: 0 for k in ("zero_divisor", "commutator_zero", "row_relation", "column_relation",
                             "one_sided_inverse", "two_factor")}
    failures = []
    ann = {}
    Z = center_of_gl(sp, cap=inst.cap)
    data = inst.gl
    mul, add = R.mul_table, R.add_table

    def member(g, J):
        return bool(inst.in_congruence(g[None], J)[0])

    def fail(kind, g, detail):
        failures.append({"check": kind, "g": MatrixSpace.encoding(g), "detail": detail})

    seen = set()
    elements = []
    for N in probe.transvection_free:
        for k in N.keys:
            if int(k) not in seen:
                seen.add(int(k))
                elements.append(sp.decode([k])[0])
    vectors = np.array(list(itertools.product(range(R.order), repeat=n)), dtype=np.int64)
    some_zero = (vectors == R.zero).any(axis=1)
    for g in elements:
        ge = sp.element(g)
        central = g in Z
        for i in range(n):
            for j in range(n):
                gij = int(g[i, j])
                for x in range(R.order):
                    if mul[gij, x] == R.zero or mul[x, gij] == R.zero:
                        counts["zero_divisor"] += 1
                        ok = member(g, _ann_of(R, [x], ann)) if i != j else x == R.zero
                        if not ok:
                            fail("zero_divisor", g, [i, j, x])
                    if i != j:
                        t = sp.transvection(i, j, x)
                        c = sp.comm(ge, GroupElement(t, sp.transvection(i, j, R.neg(x))))
                        if (c == R.zero).any():
                            counts["commutator_zero"] += 1
                            if not member(g, _ann_of(R, [x], ann)):
                                fail("commutator_zero", g, [i, j, x])
        # row relations sum_s g_is x_s = 0 and column relations sum_s x_s g_sj = 0
        for i in range(n):
            acc = np.full(len(vectors), R.zero, dtype=np.int64)
            for s in range(n):
                acc = add[acc, mul[g[i, s], vectors[:, s]]]
            for v in vectors[(acc == R.zero) & some_zero]:
                counts["row_relation"] += 1
                if not member(g, _ann_of(R, v, ann)):
                    fail("row_relation", g, [i] + v.tolist())
        for j in range(n):
            acc = np.full(len(vectors), R.zero, dtype=np.int64)
            for s in range(n):
                acc = add[acc, mul[vectors[:, s], g[s, j]]]
            for v in vectors[(acc == R.zero) & some_zero]:
                counts["column_relation"] += 1
                if not member(g, _ann_of(R, v, ann)):
                    fail("column_relation", g, [j] + v.tolist())
        if (R.left_invertible_mask[g] | R.right_invertible_mask[g]).any():
            counts["one_sided_inverse"] += 1
            if not central:
                fail("one_sided_inverse", g, [])
        # g = g1 g2 with column i of g1 and column j of g2 standard
        for i in range(n):
            ei = np.full(n, R.zero)
            ei[i] = R.one
            sel = np.flatnonzero((data.mats[:, :, i] == ei).all(axis=1))
            if not len(sel):
                continue
            g2 = sp.mul_batch(data.invs[sel], np.broadcast_to(g, (len(sel), n, n)).copy())
            for j in range(n):
                ej = np.full(n, R.zero)
                ej[j] = R.one
                if (g2[:, :, j] == ej).all(axis=1).any():
                    counts["two_factor"] += 1
                    if not central:
                        fail("two_factor", g, [i, j])
    return {"status": _status(not failures), "elements": len(elements), "checks": counts,
            "failures": failures[:5]}


def stable_element_check(inst, g, probe=None):
    """The two implications defining a stable element, on one matrix.

    For every pair of ideals: ``g in C_I`` implies ``[g, E(n,J)] ⊆ E(n,I) ∩ E(n,J)``
    (checked on generators; the target is normalised by E(n,R)). If the
    E(n,R)-invariant closure of g is transvection-free, g must be central.
    """
    sp = inst.space
    ge = sp.element(g)
    ok = True
    for I in inst.ideals:
        if not inst.congruence(I).C_I.contains_keys([sp.key(g)])[0]:
            continue
        EI = inst.EI(I)
        for J in inst.ideals:
            EJ = inst.EI(J)
            for b in EJ.basis:
                c = sp.comm(ge, sp.element(b))
                ok &= (c in EI) and (c in EJ)
    tk = transvection_keys(sp)

    def watch(keys):
        pos = np.minimum(np.searchsorted(tk, keys), len(tk) - 1)
        return tk[pos] == keys

    N = normal_closure(sp, [g], inst.E().basis, inst.cap, watch=watch)
    if "hit" not in N.meta and N.complete:
        ok &= g in center_of_gl(sp, cap=inst.cap)
    return bool(ok)


# --------------------------------------------------------------------------
# classification


def _implication(hyp, concl):
    if hyp is None:
        return UNVERIFIED
    if not hyp:
        return PASS
    if concl is None:
        return UNVERIFIED
    return _status(concl)


def _tri(status):
    return {PASS: True, FAIL: False}.get(status)


def classify_ring(ring, n=3, cap=None, depth=1, max_orbits=None, seed=0):
    """Aggregate predicates, commutator and normality checks, and implication checks.

    ``depth`` bounds the recursion into quotient rings (``R/J`` and ``R/I``).
    """
    inst = Instance(ring, n, cap)
    R = ring
    preds = {"commutative": bool(R.is_commutative), "von_neumann_regular": is_von_neumann_regular(R),
             "nearly_local": is_nearly_local(R), "stable_rank_1": stable_rank_at_most(R, 1)[0]}
    comm = verify_commutator_ring(inst)
    comm_status = combine(r["status"] for r in comm)
    k, k_status = weakly_commutator_length(inst) if comm_status != UNVERIFIED else (None, UNVERIFIED)
    pn, probe = partial_normality(inst, max_orbits, seed)
    norm = normality_probe(inst, max_orbits, seed)
    suite = lemma_suite_invariant_subgroups(inst, probe)
    commutator = _tri(comm_status)
    normal = _tri(norm["status"])
    partial = _tri(pn["status"])
    stable = None if commutator is None or normal is None else (commutator and normal)

    quotients = {}
    if depth > 0:
        J = jacobson_radical(R)
        for I in inst.ideals:
            if I.is_whole or I.is_zero:
                continue
            Q = quotient_ring(R, I)[0]
            sub = classify_ring(Q, n, cap, depth - 1, max_orbits, seed)
            quotients[I.label()] = {"ring": Q.name, "is_radical": I.members == J.members,
                                    "stable": sub["stable"], "partially_normal": sub["partially_normal"],
                                    "normal": sub["normal"]}
    else:
        J = None

    def quotient_by_radical(field):
        if J is None:
            return None
        if J.is_zero:
            return {"stable": stable, "partially_normal": partial, "normal": normal}[field]
        return quotients.get(J.label(), {}).get(field)

    all_quot_pn = None
    if depth > 0:
        vals = [q["partially_normal"] for q in quotients.values()] + [partial]
        all_quot_pn = None if None in vals else all(vals)
    weak = None if k_status == UNVERIFIED else (k is not None)
    implications = {
        "weakly_commutator_and_quotients_partially_normal_imply_stable":
            _implication(None if weak is None or all_quot_pn is None else (weak and all_quot_pn), stable),
        "radical_quotient_partially_normal_implies_partially_normal":
            _implication(quotient_by_radical("partially_normal"), partial),
        "radical_quotient_normal_implies_quotients_partially_normal":
            _implication(quotient_by_radical("normal"), all_quot_pn),
        "weakly_commutator_and_normal_imply_stable":
            _implication(None if weak is None or normal is None else (weak and normal), stable),
        "radical_quotient_stable_implies_stable":
            _implication(quotient_by_radical("stable"), stable),
    }
    if stable is None:
        verdict = "unverified"
    elif stable and partial:
        verdict = "stable (probe)"
    elif not commutator:
        verdict = "not commutator"
    else:
        verdict = "not normal (probe)"
    return {"ring": R.name, "descriptor": R.descriptor, "order": int(R.order), "n": n,
            "predicates": preds, "commutator": {"status": comm_status, "ideals": comm},
            "weakly_commutator_length": {"k": k, "status": k_status, "max": WEAK_LENGTH_MAX},
            "partial_normality": pn, "normality": norm, "lemma_suite": suite,
            "implications": implications, "quotients": quotients,
            "commutator_ring": commutator, "normal": normal, "partially_normal": partial, "stable": stable,
            "verdict": verdict}
