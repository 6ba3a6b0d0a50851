"""Construction of the invariant approximate subgroups H and H'.

Given a uniform family X of commensurable approximate subgroups, the
construction works with the squared family X² and formal finite unions Z of
its members.  For each Z it finds the least exponent k at which
``max_X [X : (X ∩ Z)^(2^k)]`` bottoms out, keeps the globally optimal ("strong")
unions, forms the sets N(Z), runs a second minimization over the family of
N(Z) sets, and takes unions to obtain H and H'.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .approx import (
    ApproximateSubgroup,
    CommensurabilityCertificate,
    Family,
    commensurability,
    family_square,
    minimal_doubling,
)
from .covering import packing_size
from .errors import EmptyInput, FamilyTooLargeForExhaustive, LemmaViolation
from .groups import Automorphism, GroupSubset, apply_automorphism

FAMILY_CAP = 12


@dataclass(frozen=True)
class UnionCandidate:
    index_set: tuple[int, ...]
    z: GroupSubset

    @property
    def n_of_z(self) -> int:
        return len(self.index_set)


@dataclass(frozen=True)
class StrongRecord:
    candidate: UnionCandidate
    k_z: int
    profile_value: int
    eta: tuple[int, ...]
    n_set: GroupSubset

    @property
    def index_set(self) -> tuple[int, ...]:
        return self.candidate.index_set

    @property
    def n_of_z(self) -> int:
        return self.candidate.n_of_z


@dataclass(frozen=True)
class InvarianceVerdict:
    automorphism: tuple[int, ...]
    stabilizing: bool
    h_invariant: bool | None
    h_prime_invariant: bool | None


@dataclass(frozen=True)
class PipelineResult:
    family: Family
    squared: Family
    m: int
    k0: int
    n0: int
    m_prime: int
    n2: int
    strong_records: tuple[StrongRecord, ...]
    i_family: tuple[StrongRecord, ...]
    i_prime: tuple[StrongRecord, ...]
    i_mprime: tuple[StrongRecord, ...]
    y_prime: tuple[StrongRecord, ...]
    h: GroupSubset
    h_prime: GroupSubset
    h_doubling: ApproximateSubgroup
    h_prime_doubling: ApproximateSubgroup
    h_commensurability: tuple[CommensurabilityCertificate, ...]
    h_prime_commensurability: tuple[CommensurabilityCertificate, ...]
    n_z: int
    n_z_chain: int
    n_y: int
    invariance: tuple[InvarianceVerdict, ...] = field(default=())


# ---------------------------------------------------------------- candidates


def enumerate_candidates(f2: Family, max_union: int | None = None, cap: int = FAMILY_CAP) -> list[UnionCandidate]:
    """Nonempty index subsets of the squared family, ordered by size then lexicographically."""
    n = len(f2)
    if max_union is None or max_union >= n:
        if n > cap:
            raise FamilyTooLargeForExhaustive(f"family of {n} members exceeds exhaustive cap {cap}")
        max_union = n
    if max_union < 1:
        raise ValueError("max_union must be >= 1")
    carriers = f2.carriers()
    out = []
    for size in range(1, max_union + 1):
        for idx in itertools.combinations(range(n), size):
            bits = 0
            for i in idx:
                bits |= carriers[i].bits
            out.append(UnionCandidate(idx, GroupSubset(f2.group, bits)))
    return out


def _power_ladder(x: GroupSubset, z: GroupSubset) -> list[int]:
    """Bit-masks of (x ∩ z)^(2^k) for k = 0, 1, … up to and including the fixpoint."""
    g = x.group
    cur = x.bits & z.bits
    ladder = [cur]
    while True:
        nxt = g.product_bits(cur, cur)
        if nxt == cur:
            return ladder
        ladder.append(nxt)
        cur = nxt


def _block(ladder: list[int], k: int) -> int:
    return ladder[min(k, len(ladder) - 1)]


def index_profile(z: GroupSubset, k: int, f2: Family) -> int:
    """max over X in the squared family of [X : (X ∩ z)^(2^k)]."""
    best = 0
    for x in f2.carriers():
        block = GroupSubset(x.group, _block(_power_ladder(x, z), k))
        best = max(best, packing_size(x, block))
    return best


def _profile_values(cand: UnionCandidate, f2: Family) -> tuple[list[list[int]], list[int]]:
    carriers = f2.carriers()
    ladders = [_power_ladder(x, cand.z) for x in carriers]
    top = max(len(l) for l in ladders)
    values = []
    for k in range(top):
        values.append(
            max(packing_size(x, GroupSubset(x.group, _block(l, k))) for x, l in zip(carriers, ladders))
        )
    return ladders, values


def k_of(cand: UnionCandidate, f2: Family) -> tuple[int, int]:
    """(k_Z, value): least k reaching the minimal profile value, and that value."""
    _, values = _profile_values(cand, f2)
    low = values[-1]
    return values.index(low), low


def _strong_record(cand: UnionCandidate, f2: Family, k_z: int, m: int, k0: int) -> StrongRecord:
    g = f2.group
    eta, n_bits = [], 0
    for i, x in enumerate(f2.carriers()):
        block = _block(_power_ladder(x, cand.z), k0 + 1)
        if packing_size(x, GroupSubset(g, block)) == m:
            eta.append(i)
            n_bits |= x.bits & block
    return StrongRecord(cand, k_z, m, tuple(eta), GroupSubset(g, n_bits))


def compute_core(f2: Family, cands: list[UnionCandidate]) -> tuple[int, int, list[StrongRecord]]:
    if not cands:
        raise EmptyInput("no union candidates")
    evals = [(c, *k_of(c, f2)) for c in cands]
    m = min(v for _, _, v in evals)
    k0 = min(k for _, k, v in evals if v == m)
    strong = [_strong_record(c, f2, k, m, k0) for c, k, v in evals if v == m and k == k0]
    return m, k0, strong


def build_families(strong: list[StrongRecord]) -> tuple[int, list[StrongRecord], list[StrongRecord]]:
    if not strong:
        raise EmptyInput("no strong records")
    n0 = min(r.n_of_z for r in strong)
    i_prime = [r for r in strong if r.n_of_z == n0]
    minimal = [set(r.index_set) for r in i_prime]
    i_family = [r for r in strong if any(s <= set(r.index_set) for s in minimal)]
    return n0, i_family, i_prime


def compute_dual(i_family: list[StrongRecord], i_prime: list[StrongRecord]) -> tuple[int, list[StrongRecord]]:
    if not i_family or not i_prime:
        raise EmptyInput("dual minimization needs nonempty families")
    scores = [max(packing_size(i.n_set, j.n_set) for j in i_prime) for i in i_family]
    m_prime = min(scores)
    return m_prime, [r for r, s in zip(i_family, scores) if s == m_prime]


def constant_n_z(n0: int, k0: int, k: int, big_n: int) -> int:
    s = 2 ** (k0 + 1)
    return n0 ** s * k ** (s + 4) * big_n ** s


def constant_n_z_chain(n0: int, k0: int, k: int, big_n: int) -> int:
    """Bound obtained by chaining the product lemma through the squared family's constants.

    Each of the n0^s products of s = 2^(k0+1) squared members is covered by
    (K^4 N)^(s-1)·K N = K^(4s-3) N^s translates of a squared member.
    """
    s = 2 ** (k0 + 1)
    return n0 ** s * k ** (4 * s - 3) * big_n ** s


def assemble(
    family: Family,
    squared: Family,
    m: int,
    k0: int,
    strong: list[StrongRecord],
    n0: int,
    i_family: list[StrongRecord],
    i_prime: list[StrongRecord],
    m_prime: int,
    i_mprime: list[StrongRecord],
) -> PipelineResult:
    g = family.group
    h = GroupSubset(g, 0)
    for r in i_mprime:
        h = h | r.n_set
    # a set may have several strong representations; n2 minimizes over all of them
    targets = {r.n_set.bits for r in i_mprime}
    reps = [r for r in strong if r.n_set.bits in targets]
    n2 = min(r.n_of_z for r in reps)
    y_prime = [r for r in reps if r.n_of_z == n2]
    h_prime = GroupSubset(g, 0)
    for r in y_prime:
        h_prime = h_prime | r.n_set

    for name, s in (("H", h), ("H'", h_prime)):
        if not s.has_identity() or not s.is_symmetric():
            raise LemmaViolation("main-theorem", f"{name} is not symmetric with identity", {name: s.members()})
    if not h_prime <= h:
        raise LemmaViolation("main-theorem", "H' is not contained in H")
    h_dbl = minimal_doubling(h)
    hp_dbl = minimal_doubling(h_prime)
    h_comm = tuple(commensurability(h_dbl, x) for x in family.members)
    hp_comm = tuple(commensurability(hp_dbl, x) for x in family.members)

    k, big_n = family.k_uniform, family.n_uniform
    n_z = constant_n_z(n0, k0, k, big_n)
    n_y = m_prime * n_z ** 3 * (k * big_n) ** 4
    return PipelineResult(
        family=family,
        squared=squared,
        m=m,
        k0=k0,
        n0=n0,
        m_prime=m_prime,
        n2=n2,
        strong_records=tuple(strong),
        i_family=tuple(i_family),
        i_prime=tuple(i_prime),
        i_mprime=tuple(i_mprime),
        y_prime=tuple(y_prime),
        h=h,
        h_prime=h_prime,
        h_doubling=h_dbl,
        h_prime_doubling=hp_dbl,
        h_commensurability=h_comm,
        h_prime_commensurability=hp_comm,
        n_z=n_z,
        n_z_chain=constant_n_z_chain(n0, k0, k, big_n),
        n_y=n_y,
    )


def stabilizes(phi: Automorphism, family: Family) -> bool:
    carriers = {c.bits for c in family.carriers()}
    return {apply_automorphism(phi, c).bits for c in family.carriers()} == carriers


def invariance_check(res: PipelineResult, f: Family, autos: list[Automorphism]) -> list[InvarianceVerdict]:
    report = []
    for phi in autos:
        if not stabilizes(phi, f):
            report.append(InvarianceVerdict(phi.map, False, None, None))
            continue
        report.append(
            InvarianceVerdict(
                phi.map,
                True,
                apply_automorphism(phi, res.h) == res.h,
                apply_automorphism(phi, res.h_prime) == res.h_prime,
            )
        )
    bad = [v for v in report if v.stabilizing and not (v.h_invariant and v.h_prime_invariant)]
    if bad:
        raise LemmaViolation(
            "main-theorem",
            f"{len(bad)} stabilizing automorphism(s) move H or H'",
            {"report": report},
        )
    return report


def run_pipeline(
    family: Family,
    max_union: int | None = None,
    cap: int = FAMILY_CAP,
    automorphisms: list[Automorphism] | None = None,
) -> PipelineResult:
    squared = family_square(family)
    cands = enumerate_candidates(squared, max_union, cap)
    m, k0, strong = compute_core(squared, cands)
    n0, i_family, i_prime = build_families(strong)
    m_prime, i_mprime = compute_dual(i_family, i_prime)
    res = assemble(family, squared, m, k0, strong, n0, i_family, i_prime, m_prime, i_mprime)
    if automorphisms is not None:
        res = replace(res, invariance=tuple(invariance_check(res, family, automorphisms)))
    return res
