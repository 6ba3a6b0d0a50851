"""Finite groups on dense indices and exact subset algebra.

Elements of a group of order ``n`` are the integers ``0..n-1``.  Subsets are
stored as Python ints used as bit-vectors, so union/intersection/containment
are single machine-level operations and products are a double loop over set
bits.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    CayleyError,
    GroupMismatch,
    MissingIdentity,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotSymmetric,
    OrderCapExceeded,
)

MAX_ORDER = 4096
AUTOMORPHISM_ORDER_CAP = 64
_PRODUCT_CACHE_LIMIT = 200_000


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class FiniteGroup:
    """A group given by its full multiplication table.

    Equality is identity-based: two separately built copies of Z_6 are
    different ambient groups as far as subsets are concerned.
    """

    def __init__(self, table: Sequence[Sequence[int]], identity: int, inv: Sequence[int], name: str = "G"):
        self.order = len(table)
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        self.inv = tuple(inv)
        self.name = name
        self.full_mask = (1 << self.order) - 1
        self._bit = tuple(1 << i for i in range(self.order))
        self._product_cache: dict[tuple[int, int], int] = {}
        # scratch space for pure-function memoization in other modules
        self.memo: dict = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def subset(self, members: Iterable[int]) -> "GroupSubset":
        members = list(members)
        for m in members:
            if not 0 <= m < self.order:
                raise ValueError(f"element index {m} out of range for order {self.order}")
        return GroupSubset(self, mask_of(members))

    def whole(self) -> "GroupSubset":
        return GroupSubset(self, self.full_mask)

    def trivial(self) -> "GroupSubset":
        return GroupSubset(self, 1 << self.identity)

    def empty(self) -> "GroupSubset":
        return GroupSubset(self, 0)

    def cayley_rows(self) -> list[list[int]]:
        return [list(row) for row in self.table]

    # bit-level kernels, used by everything above this module

    def product_bits(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        key = (a, b)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        full = self.full_mask
        bit = self._bit
        table = self.table
        b_elems = list(iter_bits(b))
        out = 0
        for x in iter_bits(a):
            row = table[x]
            for y in b_elems:
                out |= bit[row[y]]
            if out == full:
                break
        if len(self._product_cache) > _PRODUCT_CACHE_LIMIT:
            self._product_cache.clear()
        self._product_cache[key] = out
        return out

    def translate_bits(self, x: int, b: int) -> int:
        """Left translate x·B."""
        row = self.table[x]
        bit = self._bit
        out = 0
        for y in iter_bits(b):
            out |= bit[row[y]]
        return out

    def inverse_bits(self, a: int) -> int:
        inv = self.inv
        out = 0
        for x in iter_bits(a):
            out |= 1 << inv[x]
        return out

    def power_bits(self, a: int, k: int) -> int:
        if k < 1:
            raise ValueError("power exponent must be >= 1")
        result = None
        base = a
        while k:
            if k & 1:
                result = base if result is None else self.product_bits(result, base)
            k >>= 1
            if k:
                base = self.product_bits(base, base)
        return result


@dataclass(frozen=True, eq=False)
class GroupSubset:
    group: FiniteGroup
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.group.order:
            raise ValueError("subset has members outside the group")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupSubset):
            return NotImplemented
        return self.group is other.group and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"GroupSubset({self.members()})"

    def _check(self, other: "GroupSubset") -> None:
        if self.group is not other.group:
            raise GroupMismatch("subsets live in different groups")

    def __or__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits | other.bits)

    def __and__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits & other.bits)

    def __sub__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits & ~other.bits)

    def __le__(self, other: "GroupSubset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "GroupSubset") -> bool:
        return other <= self

    def __lt__(self, other: "GroupSubset") -> bool:
        return self <= other and self.bits != other.bits

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def least(self) -> int:
        return (self.bits & -self.bits).bit_length() - 1

    def has_identity(self) -> bool:
        return self.group.identity in self

    def is_symmetric(self) -> bool:
        return self.group.inverse_bits(self.bits) == self.bits


def union_all(group: FiniteGroup, subsets: Iterable[GroupSubset]) -> GroupSubset:
    bits = 0
    for s in subsets:
        if s.group is not group:
            raise GroupMismatch("subsets live in different groups")
        bits |= s.bits
    return GroupSubset(group, bits)


def set_product(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    a._check(b)
    return GroupSubset(a.group, a.group.product_bits(a.bits, b.bits))


def set_inverse(a: GroupSubset) -> GroupSubset:
    return GroupSubset(a.group, a.group.inverse_bits(a.bits))


def set_power(a: GroupSubset, k: int) -> GroupSubset:
    """k-fold product a·a·…·a, by repeated squaring."""
    return GroupSubset(a.group, a.group.power_bits(a.bits, k))


def translate(x: int, a: GroupSubset) -> GroupSubset:
    return GroupSubset(a.group, a.group.translate_bits(x, a.bits))


def require_approximate_shape(a: GroupSubset, what: str = "set") -> None:
    if not a.has_identity():
        raise MissingIdentity(f"{what} does not contain the identity")
    if not a.is_symmetric():
        raise NotSymmetric(f"{what} is not closed under inverses")


def generated_subgroup(a: GroupSubset) -> tuple[GroupSubset, int]:
    """Return (<a>, k) with k the least exponent such that a^k = a^(k+1)."""
    require_approximate_shape(a)
    g = a.group
    current, k = a.bits, 1
    while True:
        nxt = g.product_bits(current, a.bits)
        if nxt == current:
            return GroupSubset(g, current), k
        current, k = nxt, k + 1


# ---------------------------------------------------------------- constructors


def make_from_cayley(table: Sequence[Sequence[int]], name: str = "cayley", check_associative: bool = True) -> FiniteGroup:
    n = len(table)
    if n == 0:
        raise CayleyError("empty table")
    if n > MAX_ORDER:
        raise OrderCapExceeded(f"order {n} exceeds cap {MAX_ORDER}")
    for i, row in enumerate(table):
        if len(row) != n:
            raise CayleyError(f"row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise CayleyError(f"row {i} holds invalid entry {v!r}")
    identity = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity()
    if check_associative:
        for a, b in itertools.product(range(n), repeat=2):
            ab = table[a][b]
            row_ab = table[ab]
            row_a = table[a]
            row_b = table[b]
            for c in range(n):
                if row_ab[c] != row_a[row_b[c]]:
                    raise NotAssociative(a, b, c)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == identity and table[b][a] == identity:
                inv[a] = b
                break
        if inv[a] is None:
            raise NoInverse(a)
    return FiniteGroup(table, identity, inv, name)


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    if n > MAX_ORDER:
        raise OrderCapExceeded(f"order {n} exceeds cap {MAX_ORDER}")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    inv = [(-a) % n for a in range(n)]
    return FiniteGroup(table, 0, inv, f"Z{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n.

    Index i < n encodes r^i, index n + i encodes s·r^i.
    """
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")
    if 2 * n > MAX_ORDER:
        raise OrderCapExceeded(f"order {2 * n} exceeds cap {MAX_ORDER}")

    def mul(x: int, y: int) -> int:
        xs, xi = divmod(x, n)
        ys, yi = divmod(y, n)
        # r^a s = s r^-a
        rot = (yi - xi) % n if ys else (xi + yi) % n
        return ((xs ^ ys) * n) + rot

    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    inv = [(-i) % n for i in range(n)] + [n + i for i in range(n)]
    return FiniteGroup(table, 0, inv, f"D{n}")


def make_direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n = g.order * h.order
    if n > MAX_ORDER:
        raise OrderCapExceeded(f"order {n} exceeds cap {MAX_ORDER}")
    m = h.order
    table = [
        [g.table[a // m][b // m] * m + h.table[a % m][b % m] for b in range(n)]
        for a in range(n)
    ]
    inv = [g.inv[a // m] * m + h.inv[a % m] for a in range(n)]
    return FiniteGroup(table, g.identity * m + h.identity, inv, f"({g.name}x{h.name})")


# ---------------------------------------------------------------- automorphisms


@dataclass(frozen=True)
class Automorphism:
    group: FiniteGroup
    map: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if sorted(self.map) != list(range(g.order)):
            raise ValueError("automorphism map is not a permutation")
        if self.map[g.identity] != g.identity:
            raise ValueError("automorphism does not fix the identity")
        phi = self.map
        for a in range(g.order):
            row = g.table[a]
            pa = phi[a]
            prow = g.table[pa]
            for b in range(g.order):
                if phi[row[b]] != prow[phi[b]]:
                    raise ValueError(f"map is not a homomorphism at ({a}, {b})")

    def __call__(self, x: int) -> int:
        return self.map[x]


def apply_automorphism(phi: Automorphism, s: GroupSubset) -> GroupSubset:
    if phi.group is not s.group:
        raise GroupMismatch("automorphism and subset live in different groups")
    out = 0
    for x in s:
        out |= 1 << phi.map[x]
    return GroupSubset(s.group, out)


def _closure(g: FiniteGroup, gens: list[int]) -> int:
    seen = 1 << g.identity
    frontier = [g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for s in gens:
                p = g.table[h][s]
                if not seen >> p & 1:
                    seen |= 1 << p
                    nxt.append(p)
        frontier = nxt
    return seen


def generating_set(g: FiniteGroup) -> list[int]:
    """Greedy generating set: repeatedly add the least element not yet generated."""
    gens: list[int] = []
    span = 1 << g.identity
    while span != g.full_mask:
        missing = g.full_mask & ~span
        x = (missing & -missing).bit_length() - 1
        gens.append(x)
        span = _closure(g, gens)
    return gens


def _extend(g: FiniteGroup, gens: list[int], images: list[int]) -> list[int] | None:
    """Extend generator images to a map on <gens>; None if not well defined or not injective."""
    phi = [-1] * g.order
    phi[g.identity] = g.identity
    used = 1 << g.identity
    frontier = [g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for s, t in zip(gens, images):
                p = g.table[h][s]
                q = g.table[phi[h]][t]
                if phi[p] == -1:
                    if used >> q & 1:
                        return None
                    phi[p] = q
                    used |= 1 << q
                    nxt.append(p)
                elif phi[p] != q:
                    return None
        frontier = nxt
    return phi


def automorphisms(g: FiniteGroup, cap: int = AUTOMORPHISM_ORDER_CAP) -> list[Automorphism]:
    """All automorphisms of g, sorted lexicographically by their permutation."""
    if g.order > cap:
        raise OrderCapExceeded(f"automorphism enumeration capped at order {cap}, got {g.order}")
    gens = generating_set(g)
    orders = [g.element_order(x) for x in range(g.order)]
    found: list[tuple[int, ...]] = []

    def search(j: int, images: list[int]) -> None:
        if j == len(gens):
            phi = _extend(g, gens, images)
            if phi is not None and -1 not in phi:
                found.append(tuple(phi))
            return
        for t in range(g.order):
            if orders[t] != orders[gens[j]]:
                continue
            images.append(t)
            if _extend(g, gens[: j + 1], images) is not None:
                search(j + 1, images)
            images.pop()

    search(0, [])
    # _extend only checks relations reachable by the BFS; re-verify fully
    return [Automorphism(g, m) for m in sorted(set(found))]
