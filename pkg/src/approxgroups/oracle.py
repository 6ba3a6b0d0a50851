"""Brute-force recomputation of the construction, and a seeded lemma battery.

The oracle shares only the multiplication table with the main code path.  Sets
are frozensets, covering numbers and packing indices come from plain memoized
exhaustive recursion, and every minimization is a flat loop.  It is slow on
purpose and capped at |family| ≤ 4, |G| ≤ 24.
"""
from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .approx import ApproximateSubgroup, Family, family_validate
from .errors import CapExceeded, LemmaViolation
from .groups import FiniteGroup, GroupSubset, automorphisms, generated_subgroup, set_product
from .instance import Instance, build_group, group_spec_order
from .lemmas import EXTRA_CHECKS, LEMMAS, check_instance_lemmas
from .pipeline import PipelineResult, run_pipeline

ORACLE_FAMILY_CAP = 4
ORACLE_ORDER_CAP = 24
FIELDS = ("K", "N", "m", "k0", "n0", "m_prime", "n2", "h", "h_prime")


class OracleMismatch(LemmaViolation):
    def __init__(self, fields: list[str], details=None):
        super().__init__("oracle", f"pipeline disagrees with brute force on {', '.join(fields)}", details)


def family_digest(f: Family) -> str:
    payload = {"table": f.group.cayley_rows(), "family": [c.members() for c in f.carriers()]}
    return hashlib.sha256(json.dumps(payload, separators=(",", ":")).encode()).hexdigest()


class _Naive:
    def __init__(self, g: FiniteGroup):
        self.t = g.table
        self.e = g.identity
        self.elements = range(g.order)

    def prod(self, a, b):
        return frozenset(self.t[x][y] for x in a for y in b)

    def cover(self, x, y):
        shifts = [frozenset(self.t[z][v] for v in y) for z in self.elements]

        @lru_cache(maxsize=None)
        def best(uncovered):
            if not uncovered:
                return 0
            e = min(uncovered)
            return 1 + min(best(uncovered - s) for s in shifts if e in s)

        return best(frozenset(x))

    def pack(self, x, y):
        shifts = {c: frozenset(self.t[c][v] for v in y) for c in x}

        @lru_cache(maxsize=None)
        def best(centers):
            if not centers:
                return 0
            c = min(centers)
            rest = centers - {c}
            keep = frozenset(d for d in rest if not shifts[c] & shifts[d])
            return max(best(rest), 1 + best(keep))

        return best(frozenset(x))


def _recompute(f: Family) -> dict:
    g = f.group
    nv = _Naive(g)
    xs = [frozenset(c) for c in f.carriers()]
    k = max(nv.cover(nv.prod(a, a), a) for a in xs)
    big_n = max(max(nv.cover(a, b), nv.cover(b, a)) for a in xs for b in xs)
    sq = [nv.prod(a, a) for a in xs]
    n = len(sq)

    def ladder(x, z):
        p = x & z
        out = [p]
        while True:
            q = nv.prod(p, p)
            if q == p:
                return out
            out.append(q)
            p = q

    def at(lad, j):
        return lad[j] if j < len(lad) else lad[-1]

    evals = {}
    for mask in range(1, 2 ** n):
        idx = tuple(i for i in range(n) if mask >> i & 1)
        z = frozenset().union(*(sq[i] for i in idx))
        lads = [ladder(x, z) for x in sq]
        values = [max(nv.pack(x, at(l, j)) for x, l in zip(sq, lads)) for j in range(max(map(len, lads)))]
        low = min(values)
        evals[idx] = (values.index(low), low, z)

    m = min(v for _, v, _ in evals.values())
    k0 = min(kz for kz, v, _ in evals.values() if v == m)
    strong = {}
    for idx, (kz, v, z) in evals.items():
        if v != m or kz != k0:
            continue
        nz = frozenset()
        for x in sq:
            block = at(ladder(x, z), k0 + 1)
            if nv.pack(x, block) == m:
                nz |= x & block
        strong[idx] = nz

    n0 = min(len(idx) for idx in strong)
    i_prime = {idx: s for idx, s in strong.items() if len(idx) == n0}
    i_fam = {idx: s for idx, s in strong.items() if any(set(p) <= set(idx) for p in i_prime)}
    score = {idx: max(nv.pack(s, t) for t in i_prime.values()) for idx, s in i_fam.items()}
    m_prime = min(score.values())
    opt_sets = {i_fam[idx] for idx, v in score.items() if v == m_prime}
    h = frozenset().union(*opt_sets)
    reps = [idx for idx, s in strong.items() if s in opt_sets]
    n2 = min(len(idx) for idx in reps)
    h_prime = frozenset().union(*(strong[idx] for idx in reps if len(idx) == n2))
    return {
        "K": k,
        "N": big_n,
        "m": m,
        "k0": k0,
        "n0": n0,
        "m_prime": m_prime,
        "n2": n2,
        "h": sorted(h),
        "h_prime": sorted(h_prime),
    }


def pipeline_fields(res: PipelineResult) -> dict:
    return {
        "K": res.family.k_uniform,
        "N": res.family.n_uniform,
        "m": res.m,
        "k0": res.k0,
        "n0": res.n0,
        "m_prime": res.m_prime,
        "n2": res.n2,
        "h": res.h.members(),
        "h_prime": res.h_prime.members(),
    }


@dataclass
class OracleReport:
    digest: str
    recomputed: dict
    pipeline: dict
    matches: dict
    lemma_tallies: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.matches.values())

    def to_dict(self) -> dict:
        return {
            "digest": self.digest,
            "recomputed": self.recomputed,
            "pipeline": self.pipeline,
            "matches": self.matches,
            "lemma_tallies": self.lemma_tallies,
        }


def check_caps(f: Family) -> None:
    if len(f) > ORACLE_FAMILY_CAP:
        raise CapExceeded(f"oracle handles at most {ORACLE_FAMILY_CAP} members, got {len(f)}")
    if f.group.order > ORACLE_ORDER_CAP:
        raise CapExceeded(f"oracle handles groups of order at most {ORACLE_ORDER_CAP}, got {f.group.order}")


def oracle_core(f: Family, res: PipelineResult | None = None) -> OracleReport:
    """Recompute every pipeline scalar and set by brute force and compare field by field."""
    check_caps(f)
    if res is None:
        res = run_pipeline(f)
    mine = _recompute(f)
    theirs = pipeline_fields(res)
    matches = {k: mine[k] == theirs[k] for k in FIELDS}
    report = OracleReport(family_digest(f), mine, theirs, matches)
    if not report.ok:
        raise OracleMismatch([k for k, v in matches.items() if not v], {"report": report.to_dict()})
    return report


# ---------------------------------------------------------------- Main Theorem on subgroup families


def subgroup_crosscheck(f: Family) -> OracleReport:
    g = f.group
    for i, c in enumerate(f.carriers()):
        if set_product(c, c) != c:
            raise ValueError(f"member {i} is not a subgroup")
    autos = automorphisms(g) if g.order <= 16 else []
    res = run_pipeline(f, automorphisms=autos)
    tallies = {"main-theorem": 0}
    for cert in res.h_commensurability + res.h_prime_commensurability:
        if not cert.is_valid():
            raise LemmaViolation("main-theorem", "commensurability certificate fails")
        tallies["main-theorem"] += 1
    is_sub = generated_subgroup(res.h_prime)[0] == res.h_prime
    fields = pipeline_fields(res)
    fields["h_prime_is_subgroup"] = is_sub
    fields["stabilizing_automorphisms"] = sum(v.stabilizing for v in res.invariance)
    return OracleReport(family_digest(f), {}, fields, {"main-theorem": True}, tallies)


# ---------------------------------------------------------------- random instances and the battery

_PRODUCT_SPECS = [
    ("cyclic", 2, "cyclic", 2),
    ("cyclic", 2, "cyclic", 4),
    ("cyclic", 3, "cyclic", 3),
    ("cyclic", 2, "cyclic", 6),
    ("cyclic", 4, "cyclic", 4),
    ("cyclic", 2, "cyclic", 8),
    ("cyclic", 3, "cyclic", 6),
    ("cyclic", 2, "cyclic", 12),
    ("cyclic", 2, "dihedral", 3),
    ("cyclic", 2, "dihedral", 4),
    ("cyclic", 3, "dihedral", 3),
    ("cyclic", 4, "dihedral", 3),
]


def _group_specs(cap: int) -> list[dict]:
    specs = [{"kind": "cyclic", "n": n} for n in range(2, cap + 1)]
    specs += [{"kind": "dihedral", "n": n} for n in range(2, cap // 2 + 1)]
    for k1, n1, k2, n2 in _PRODUCT_SPECS:
        specs.append({"kind": "product", "factors": [{"kind": k1, "n": n1}, {"kind": k2, "n": n2}]})
    specs.append({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}] * 3})
    return [s for s in specs if group_spec_order(s) <= cap]


def _symmetrize(g: FiniteGroup, elems) -> int:
    bits = 1 << g.identity
    for x in elems:
        bits |= 1 << x | 1 << g.inv[x]
    return bits


def _conjugate(g: FiniteGroup, bits: int, h: int) -> int:
    out = 0
    hi = g.inv[h]
    for x in GroupSubset(g, bits):
        out |= 1 << g.table[g.table[h][x]][hi]
    return out


def random_instance(rng: random.Random, group_cap: int) -> Instance:
    spec = rng.choice(_group_specs(group_cap))
    g = build_group(spec)
    mode = rng.choice(("subgroup", "symmetric", "symmetric", "automorphic"))
    size = rng.randint(1, 4)
    elems = list(range(g.order))
    if mode == "subgroup":
        base = generated_subgroup(GroupSubset(g, _symmetrize(g, rng.sample(elems, rng.randint(1, 2)))))[0].bits
    else:
        base = _symmetrize(g, rng.sample(elems, rng.randint(1, max(1, g.order // 4))))
    members = [base]
    attempts = 0
    while len(members) < size and attempts < 20:
        attempts += 1
        choice = rng.random()
        if mode == "automorphic" and g.order <= 16:
            autos = automorphisms(g)
            phi = autos[rng.randrange(len(autos))]
            cand = 0
            for x in GroupSubset(g, base):
                cand |= 1 << phi.map[x]
        elif choice < 0.5 or mode == "subgroup":
            cand = _conjugate(g, base, rng.randrange(g.order))
        elif choice < 0.75:
            cand = base | _symmetrize(g, [rng.randrange(g.order)])
        else:
            cand = g.product_bits(base, base)
        if cand not in members:
            members.append(cand)
    family = [GroupSubset(g, b).members() for b in members]
    return Instance(group=spec, family=family)


@dataclass
class BatteryReport:
    seed: int
    trials: int
    group_cap: int
    tallies: dict
    violations: int
    digests: list

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "group_cap": self.group_cap,
            "violations": self.violations,
            "tallies": self.tallies,
            "instances": self.digests,
        }


def lemma_battery(seed: int, trials: int, group_cap: int = ORACLE_ORDER_CAP, inject_fault: bool = False) -> BatteryReport:
    """Seeded random instances, each pushed through the pipeline and every lemma check.

    ``inject_fault`` corrupts a doubling certificate on the first instance so
    the failure path (LemmaViolation carrying a reproducer) can be exercised.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    tallies: Counter[str] = Counter({k: 0 for k in LEMMAS + EXTRA_CHECKS})
    digests = []
    for trial in range(trials):
        inst = random_instance(rng, group_cap)
        group, carriers = inst.materialize()
        try:
            f = family_validate(carriers)
            if inject_fault and trial == 0:
                _corrupt_and_verify(f)
            res = run_pipeline(f, automorphisms=automorphisms(group) if group.order <= 16 else None)
            tallies.update(check_instance_lemmas(res))
        except LemmaViolation as err:
            err.details["reproducer"] = inst.to_dict()
            err.details["trial"] = trial
            raise
        digests.append(inst.digest())
    return BatteryReport(seed, trials, group_cap, dict(tallies), 0, digests)


def _corrupt_and_verify(f: Family) -> None:
    m = f.members[0]
    witness = m.doubling_witness - GroupSubset(m.carrier.group, 1 << m.doubling_witness.least())
    bad = ApproximateSubgroup(m.carrier, m.doubling_k - 1, witness)
    if not bad.is_valid():
        raise LemmaViolation("certificate", "doubling certificate failed re-validation (injected fault)")
