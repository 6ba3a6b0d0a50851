"""Concrete checks of every quantitative lemma behind the construction.

Each ``check_*`` runs the literal inequality or containment on one instance,
returns how many individual assertions it made, and raises LemmaViolation on
the first failure.
"""
from __future__ import annotations

import itertools
from collections import Counter

from .approx import Family, product_commensurability_witness, xx_intersection_witness
from .covering import check_cover_bound, cover_size, covering_number, packing_index
from .errors import LemmaViolation
from .groups import GroupSubset, generated_subgroup, set_power, set_product
from .pipeline import PipelineResult, UnionCandidate, k_of

LEMMAS = (
    "lem-prodcom",
    "lem-cover",
    "lem-xx",
    "lem-key",
    "lem-N(Z)",
    "lem-intersec",
    "lem-NZ",
    "lem-I",
    "lem-chain",
)
EXTRA_CHECKS = ("remark-square", "downward-closure", "dual-downward-closure", "main-theorem")

_UNION_SAMPLE = 10


def _product_sequences(n: int, max_len: int = 4) -> list[tuple[int, ...]]:
    seqs: list[tuple[int, ...]] = []
    for length in range(1, min(max_len, 2) + 1):
        seqs.extend(itertools.product(range(n), repeat=length))
    for length in range(3, max_len + 1):
        # rotations of the ascending sequence keep the count linear in n
        base = [i % n for i in range(length)]
        seqs.extend(tuple((b + r) % n for b in base) for r in range(n))
    return seqs


def check_prodcom(f: Family, max_len: int = 4) -> int:
    count = 0
    for seq in _product_sequences(len(f), max_len):
        parts = [f.members[i] for i in seq]
        for x in f.members:
            w = product_commensurability_witness(parts, x, f)
            if w.optimal_product_cover > w.bound or w.optimal_member_cover > w.n_bound:
                raise LemmaViolation("lem-prodcom", "optimal cover exceeds the bound")
            count += 1
    return count


def check_cover(f: Family) -> int:
    count = 0
    for x in f.carriers():
        for y in f.carriers():
            check_cover_bound(packing_index(x, y), covering_number(x, y))
            count += 1
    return count


def check_xx(f: Family) -> int:
    count = 0
    for i, x in enumerate(f.members):
        for j, y in enumerate(f.members):
            xx_intersection_witness(x, y, f.pairwise[i][j])
            count += 1
    return count


def check_remark(res: PipelineResult) -> int:
    f, f2 = res.family, res.squared
    if f2.k_uniform > f.k_uniform ** 3 or f2.n_uniform > f.n_uniform * f.k_uniform:
        raise LemmaViolation("remark-square", "squared family constants exceed K^3 / NK")
    return 1


def check_downward_closure(res: PipelineResult) -> int:
    """Z ⊆ Z' (as index sets) with Z attaining m forces Z' to attain m with k_Z' ≤ k_Z."""
    f2 = res.squared
    g = f2.group
    n = len(f2)
    carriers = f2.carriers()
    evals: dict[tuple[int, ...], tuple[int, int]] = {}

    def ev(idx):
        if idx not in evals:
            bits = 0
            for i in idx:
                bits |= carriers[i].bits
            evals[idx] = k_of(UnionCandidate(idx, GroupSubset(g, bits)), f2)
        return evals[idx]

    count = 0
    subsets = [idx for size in range(1, n + 1) for idx in itertools.combinations(range(n), size)]
    for small in subsets:
        k_small, v_small = ev(small)
        if v_small != res.m:
            continue
        for big in subsets:
            if len(big) > len(small) and set(small) <= set(big):
                k_big, v_big = ev(big)
                if v_big != res.m or k_big > k_small:
                    raise LemmaViolation(
                        "downward-closure", f"{small} attains m but superset {big} gives ({k_big}, {v_big})"
                    )
                count += 1
    return count


def check_key(res: PipelineResult) -> int:
    count = 0
    for a in res.strong_records:
        for b in res.strong_records:
            if a is not b and set(a.index_set) <= set(b.index_set):
                if not b.n_set <= a.n_set:
                    raise LemmaViolation("lem-key", f"N({a.index_set}) does not contain N({b.index_set})")
                count += 1
    return count


def check_nz_cover(res: PipelineResult) -> int:
    f = res.family
    bound = (f.k_uniform * f.n_uniform) ** 2
    count = 0
    for r in res.strong_records:
        for x in res.squared.carriers():
            size = cover_size(x, r.n_set)
            if size > bound:
                raise LemmaViolation("lem-N(Z)", f"N({r.index_set}) needs {size} > {bound} translates")
            count += 1
    return count


def check_intersec(res: PipelineResult, max_tuple: int = 3) -> int:
    by_index = {r.index_set: r for r in res.strong_records}
    records = list(res.strong_records)
    count = 0
    for size in range(2, max_tuple + 1):
        for combo in itertools.combinations(records, size):
            union = tuple(sorted(set().union(*(r.index_set for r in combo))))
            target = by_index.get(union)
            if target is None:
                continue
            meet = combo[0].n_set
            for r in combo[1:]:
                meet = meet & r.n_set
            if not target.n_set <= meet:
                raise LemmaViolation("lem-intersec", f"N of union {union} escapes the intersection")
            count += 1
    return count


def check_nz_commensurability(res: PipelineResult) -> int:
    """(Z0)^(2^(k0+1)) is N_Z- and (Z0)^(2^(k0+2)) is N_Z²-commensurable with the squares."""
    count = 0
    for r in res.i_prime:
        z0 = r.candidate.z
        p1 = set_power(z0, 2 ** (res.k0 + 1))
        p2 = set_product(p1, p1)
        for x in res.squared.carriers():
            n1 = max(cover_size(p1, x), cover_size(x, p1))
            n2 = max(cover_size(p2, x), cover_size(x, p2))
            if n1 > res.n_z or n2 > res.n_z ** 2:
                raise LemmaViolation(
                    "lem-NZ", f"observed ({n1}, {n2}) against bounds ({res.n_z}, {res.n_z ** 2})"
                )
            count += 1
    return count


def check_i_family(res: PipelineResult) -> int:
    f = res.family
    kn = f.k_uniform * f.n_uniform
    k_bound = (res.n_z * kn) ** 2
    n_bound = res.n_z * kn ** 2
    sets = {r.n_set.bits: r.n_set for r in res.i_family}
    count = 0
    for s in sets.values():
        if not s.has_identity() or not s.is_symmetric():
            raise LemmaViolation("lem-I", "N(Z) is not symmetric with identity")
        k = cover_size(set_product(s, s), s)
        if k > k_bound:
            raise LemmaViolation("lem-I", f"doubling {k} exceeds {k_bound}")
        count += 1
    for a, b in itertools.combinations(sets.values(), 2):
        n = max(cover_size(a, b), cover_size(b, a))
        if n > n_bound:
            raise LemmaViolation("lem-I", f"commensurability {n} exceeds {n_bound}")
        count += 1
    return count


def check_dual_downward_closure(res: PipelineResult) -> int:
    mprime = {r.n_set.bits for r in res.i_mprime}
    members = {r.n_set.bits: r.n_set for r in res.i_family}
    count = 0
    for big in res.i_mprime:
        for bits, small in members.items():
            if small <= big.n_set:
                if bits not in mprime:
                    raise LemmaViolation("dual-downward-closure", "subset of an optimal member is not optimal")
                count += 1
    return count


def _longest_chain(subgroups: list[int]) -> int:
    distinct = sorted(set(subgroups), key=lambda b: b.bit_count())
    best = [1] * len(distinct)
    for i, b in enumerate(distinct):
        for j in range(i):
            a = distinct[j]
            if a != b and a & ~b == 0:
                best[i] = max(best[i], best[j] + 1)
    return max(best, default=0)


def check_chain(res: PipelineResult) -> int:
    g = res.family.group
    sets = sorted({r.n_set.bits for r in res.i_mprime})[:_UNION_SAMPLE]
    unions = []
    for size in range(1, len(sets) + 1):
        for combo in itertools.combinations(sets, size):
            bits = 0
            for b in combo:
                bits |= b
            unions.append(bits)
    gens = [generated_subgroup(GroupSubset(g, b))[0].bits for b in set(unions)]
    length = _longest_chain(gens)
    if length >= res.n_y + 1:
        raise LemmaViolation("lem-chain", f"chain of {length} generated subgroups with N_Y = {res.n_y}")
    return 1


def check_main_theorem(res: PipelineResult) -> int:
    count = 0
    for name, s, dbl, comm in (
        ("H", res.h, res.h_doubling, res.h_commensurability),
        ("H'", res.h_prime, res.h_prime_doubling, res.h_prime_commensurability),
    ):
        if not (s.has_identity() and s.is_symmetric() and dbl.is_valid()):
            raise LemmaViolation("main-theorem", f"{name} is not a certified approximate subgroup")
        if not all(c.is_valid() for c in comm):
            raise LemmaViolation("main-theorem", f"{name} commensurability certificate fails")
        count += 1
    if not res.h_prime <= res.h:
        raise LemmaViolation("main-theorem", "H' is not inside H")
    for v in res.invariance:
        if v.stabilizing and not (v.h_invariant and v.h_prime_invariant):
            raise LemmaViolation("main-theorem", f"automorphism {v.automorphism} moves H or H'")
        count += 1
    return count


def check_instance_lemmas(res: PipelineResult, max_product: int = 4) -> dict[str, int]:
    """Run every lemma check on one pipeline result; returns per-label tallies."""
    f = res.family
    tallies: Counter[str] = Counter()
    tallies["lem-prodcom"] += check_prodcom(f, max_product)
    tallies["lem-cover"] += check_cover(f)
    tallies["lem-xx"] += check_xx(f)
    tallies["remark-square"] += check_remark(res)
    tallies["downward-closure"] += check_downward_closure(res)
    tallies["lem-key"] += check_key(res)
    tallies["lem-N(Z)"] += check_nz_cover(res)
    tallies["lem-intersec"] += check_intersec(res)
    tallies["lem-NZ"] += check_nz_commensurability(res)
    tallies["lem-I"] += check_i_family(res)
    tallies["dual-downward-closure"] += check_dual_downward_closure(res)
    tallies["lem-chain"] += check_chain(res)
    tallies["main-theorem"] += check_main_theorem(res)
    return {k: tallies[k] for k in LEMMAS + EXTRA_CHECKS}
