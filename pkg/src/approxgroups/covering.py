"""Exact covering numbers and packing indices for left translates.

``covering_number(x, y)`` is the least |Z| with x ⊆ Z·y.  ``packing_index(x, y)``
is the largest |X0| with X0 ⊆ x and the translates {c·y : c ∈ X0} pairwise
disjoint.  Both are exact branch-and-bound searches with a node budget; the
returned witness is the lexicographically least optimal one.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import EmptyInput, GroupMismatch, LemmaViolation, SearchBudgetExceeded
from .groups import FiniteGroup, GroupSubset, iter_bits, set_product

DEFAULT_BUDGET = 5_000_000
_budget_override: int | None = None


def set_default_budget(nodes: int | None) -> None:
    global _budget_override
    _budget_override = nodes


def default_budget() -> int:
    if _budget_override is not None:
        return _budget_override
    env = os.environ.get("ASG_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


class _Counter:
    __slots__ = ("left",)

    def __init__(self, budget: int | None):
        self.left = default_budget() if budget is None else budget

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise SearchBudgetExceeded("search node budget exhausted")


@dataclass(frozen=True)
class CoverCertificate:
    covered: GroupSubset
    coverer: GroupSubset
    translates: GroupSubset

    @property
    def size(self) -> int:
        return len(self.translates)

    def is_valid(self) -> bool:
        return self.covered <= set_product(self.translates, self.coverer)


@dataclass(frozen=True)
class PackingCertificate:
    base: GroupSubset
    block: GroupSubset
    centers: GroupSubset

    @property
    def size(self) -> int:
        return len(self.centers)

    def is_valid(self) -> bool:
        if not self.centers <= self.base:
            return False
        g = self.block.group
        seen = 0
        for c in self.centers:
            t = g.translate_bits(c, self.block.bits)
            if t & seen:
                return False
            seen |= t
        return True


def _same_group(x: GroupSubset, y: GroupSubset) -> FiniteGroup:
    if x.group is not y.group:
        raise GroupMismatch("subsets live in different groups")
    if not x or not y:
        raise EmptyInput("covering and packing need nonempty sets")
    return x.group


# ---------------------------------------------------------------- covers


def _cover_candidates(g: FiniteGroup, x: int, y: int) -> tuple[list[int], list[int]]:
    """Useful translators z (those with z·y meeting x) and their coverage of x.

    z·y meets x iff z ∈ x·y⁻¹.  Translators with identical coverage are merged,
    keeping the least index.
    """
    zs = g.product_bits(x, g.inverse_bits(y))
    by_cov: dict[int, int] = {}
    for z in iter_bits(zs):
        cov = g.translate_bits(z, y) & x
        if cov not in by_cov:
            by_cov[cov] = z
    pairs = sorted((z, cov) for cov, z in by_cov.items())
    return [z for z, _ in pairs], [cov for _, cov in pairs]


def _min_cover_size(x: int, covs: list[int], counter: _Counter) -> int:
    # dominated candidates never help the size search
    order = sorted(range(len(covs)), key=lambda i: -covs[i].bit_count())
    kept: list[int] = []
    for i in order:
        c = covs[i]
        if not any(c & ~k == 0 for k in kept):
            kept.append(c)
    maxcov = max(c.bit_count() for c in kept)
    covering: dict[int, list[int]] = {}
    for e in iter_bits(x):
        covering[e] = [c for c in kept if c >> e & 1]

    # greedy upper bound
    unc, best = x, 0
    while unc:
        c = max(kept, key=lambda k: (k & unc).bit_count())
        unc &= ~c
        best += 1

    def solve(unc: int, depth: int) -> None:
        nonlocal best
        counter.tick()
        if not unc:
            best = min(best, depth)
            return
        need = -(-unc.bit_count() // maxcov)
        if depth + need >= best:
            return
        e = min(iter_bits(unc), key=lambda v: len(covering[v]))
        opts = sorted(covering[e], key=lambda c: -(c & unc).bit_count())
        for c in opts:
            solve(unc & ~c, depth + 1)
            if depth + need >= best:
                return

    solve(x, 0)
    return best


def _lex_least_cover(x: int, zs: list[int], covs: list[int], size: int, counter: _Counter) -> list[int]:
    n = len(zs)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | covs[i]
    last_cover: dict[int, int] = {}
    for i, c in enumerate(covs):
        for e in iter_bits(c):
            last_cover[e] = i
    maxcov = max(c.bit_count() for c in covs)

    def dfs(start: int, unc: int, left: int) -> list[int] | None:
        counter.tick()
        if not unc:
            return []
        if left == 0 or unc & ~suffix[start]:
            return None
        if unc.bit_count() > left * maxcov:
            return None
        low = (unc & -unc).bit_length() - 1
        stop = last_cover[low]
        for i in range(start, stop + 1):
            if not covs[i] & unc:
                continue
            rest = dfs(i + 1, unc & ~covs[i], left - 1)
            if rest is not None:
                return [zs[i]] + rest
        return None

    found = dfs(0, x, size)
    assert found is not None and len(found) == size
    return found


def covering_number(x: GroupSubset, y: GroupSubset, budget: int | None = None) -> CoverCertificate:
    """Minimum left-translate cover of x by y, with the lex-least optimal translator set."""
    g = _same_group(x, y)
    counter = _Counter(budget)
    zs, covs = _cover_candidates(g, x.bits, y.bits)
    size = _min_cover_size(x.bits, covs, counter)
    witness = _lex_least_cover(x.bits, zs, covs, size, counter)
    return CoverCertificate(x, y, g.subset(witness))


def cover_size(x: GroupSubset, y: GroupSubset, budget: int | None = None) -> int:
    g = _same_group(x, y)
    key = ("cover", x.bits, y.bits)
    hit = g.memo.get(key)
    if hit is None:
        _, covs = _cover_candidates(g, x.bits, y.bits)
        hit = g.memo[key] = _min_cover_size(x.bits, covs, _Counter(budget))
    return hit


# ---------------------------------------------------------------- packings


def _translate_classes(g: FiniteGroup, x: int, y: int) -> tuple[list[int], list[int]]:
    """Distinct translates c·y (c ∈ x), each represented by its least center."""
    seen: dict[int, int] = {}
    for c in iter_bits(x):
        t = g.translate_bits(c, y)
        if t not in seen:
            seen[t] = c
    pairs = sorted((c, t) for t, c in seen.items())
    return [c for c, _ in pairs], [t for _, t in pairs]


def _conflicts(blocks: list[int]) -> list[int]:
    n = len(blocks)
    adj = [0] * n
    for i in range(n):
        bi = blocks[i]
        for j in range(i + 1, n):
            if bi & blocks[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _clique_cover_bound(cand: int, adj: list[int]) -> int:
    """Greedy partition of ``cand`` into cliques; the count bounds any independent set."""
    cliques: list[int] = []
    for v in iter_bits(cand):
        for k, members in enumerate(cliques):
            if members & ~adj[v] == 0:
                cliques[k] = members | 1 << v
                break
        else:
            cliques.append(1 << v)
    return len(cliques)


def _max_independent_size(adj: list[int], counter: _Counter) -> int:
    n = len(adj)
    best = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best
        counter.tick()
        # isolated vertices are always taken
        free = 0
        for v in iter_bits(cand):
            if not adj[v] & cand:
                free |= 1 << v
        if free:
            size += free.bit_count()
            cand &= ~free
        if not cand:
            best = max(best, size)
            return
        if size + _clique_cover_bound(cand, adj) <= best:
            return
        v = max(iter_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
        expand(cand & ~adj[v] & ~(1 << v), size + 1)
        expand(cand & ~(1 << v), size)

    expand((1 << n) - 1, 0)
    return best


def _lex_least_independent(adj: list[int], size: int, counter: _Counter) -> list[int]:
    n = len(adj)

    def dfs(cand: int, need: int) -> list[int] | None:
        counter.tick()
        if need == 0:
            return []
        if cand.bit_count() < need or _clique_cover_bound(cand, adj) < need:
            return None
        for v in iter_bits(cand):
            later = cand & ~((1 << (v + 1)) - 1)
            rest = dfs(later & ~adj[v], need - 1)
            if rest is not None:
                return [v] + rest
        return None

    found = dfs((1 << n) - 1, size)
    assert found is not None
    return found


def packing_index(x: GroupSubset, y: GroupSubset, budget: int | None = None) -> PackingCertificate:
    """[x:y]: a maximum family of centers in x with pairwise disjoint translates of y."""
    g = _same_group(x, y)
    counter = _Counter(budget)
    reps, blocks = _translate_classes(g, x.bits, y.bits)
    adj = _conflicts(blocks)
    size = _max_independent_size(adj, counter)
    chosen = _lex_least_independent(adj, size, counter)
    return PackingCertificate(x, y, g.subset(reps[i] for i in chosen))


def packing_size(x: GroupSubset, y: GroupSubset, budget: int | None = None) -> int:
    g = _same_group(x, y)
    key = ("pack", x.bits, y.bits)
    hit = g.memo.get(key)
    if hit is None:
        _, blocks = _translate_classes(g, x.bits, y.bits)
        hit = g.memo[key] = _max_independent_size(_conflicts(blocks), _Counter(budget))
    return hit


def maximal_disjoint_family(x: GroupSubset, y: GroupSubset) -> PackingCertificate:
    """Greedy inclusion-maximal disjoint family, scanning centers in increasing order."""
    g = _same_group(x, y)
    taken, chosen = 0, []
    for c in x:
        t = g.translate_bits(c, y.bits)
        if not t & taken:
            taken |= t
            chosen.append(c)
    return PackingCertificate(x, y, g.subset(chosen))


def check_cover_bound(pack: PackingCertificate, cover: CoverCertificate) -> bool:
    """A disjoint family inside a set covered by |Z| translates has at most |Z| centers."""
    if pack.block != cover.coverer:
        raise ValueError("packing block and cover coverer differ")
    if not pack.block.is_symmetric():
        raise ValueError("the covering block must be symmetric")
    if not pack.base <= set_product(cover.translates, cover.coverer):
        raise ValueError("packing base is not covered by the cover")
    if pack.size > cover.size:
        raise LemmaViolation(
            "lem-cover",
            f"disjoint family of {pack.size} exceeds cover of size {cover.size}",
            {"packing": pack, "cover": cover},
        )
    return True
