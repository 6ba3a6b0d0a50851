"""Approximate subgroups, commensurability and uniform families."""
from __future__ import annotations

from dataclasses import dataclass, field

from .covering import covering_number, maximal_disjoint_family
from .errors import ApproxGroupError, EmptyInput, GroupMismatch, LemmaViolation
from .groups import GroupSubset, require_approximate_shape, set_product


@dataclass(frozen=True)
class ApproximateSubgroup:
    carrier: GroupSubset
    doubling_k: int
    doubling_witness: GroupSubset

    def is_valid(self) -> bool:
        a = self.carrier
        return (
            a.has_identity()
            and a.is_symmetric()
            and len(self.doubling_witness) == self.doubling_k
            and set_product(a, a) <= set_product(self.doubling_witness, a)
        )


@dataclass(frozen=True)
class CommensurabilityCertificate:
    left: ApproximateSubgroup
    right: ApproximateSubgroup
    z0: GroupSubset
    z1: GroupSubset

    @property
    def n(self) -> int:
        return max(len(self.z0), len(self.z1))

    def is_valid(self) -> bool:
        x, y = self.left.carrier, self.right.carrier
        return x <= set_product(self.z0, y) and y <= set_product(self.z1, x)


@dataclass(frozen=True)
class Family:
    members: tuple[ApproximateSubgroup, ...]
    k_uniform: int
    n_uniform: int
    pairwise: tuple[tuple[CommensurabilityCertificate, ...], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def group(self):
        return self.members[0].carrier.group

    def carriers(self) -> list[GroupSubset]:
        return [m.carrier for m in self.members]


def minimal_doubling(a: GroupSubset) -> ApproximateSubgroup:
    """Exact least K with a·a ⊆ X·a, |X| = K."""
    require_approximate_shape(a)
    cert = covering_number(set_product(a, a), a)
    return ApproximateSubgroup(a, cert.size, cert.translates)


def commensurability(x: ApproximateSubgroup, y: ApproximateSubgroup) -> CommensurabilityCertificate:
    if x.carrier.group is not y.carrier.group:
        raise GroupMismatch("approximate subgroups live in different groups")
    z0 = covering_number(x.carrier, y.carrier).translates
    z1 = covering_number(y.carrier, x.carrier).translates
    return CommensurabilityCertificate(x, y, z0, z1)


def family_validate(sets: list[GroupSubset]) -> Family:
    """Check every set is an approximate subgroup and compute exact uniform constants."""
    if not sets:
        raise EmptyInput("family must have at least one member")
    g = sets[0].group
    members = []
    for i, s in enumerate(sets):
        if s.group is not g:
            raise GroupMismatch(f"member {i} lives in a different group")
        try:
            members.append(minimal_doubling(s))
        except ApproxGroupError as err:
            err.member = i
            err.args = (f"member {i}: {err}",)
            raise
    return _assemble_family(members)


def _assemble_family(members: list[ApproximateSubgroup]) -> Family:
    n = len(members)
    rows: list[list[CommensurabilityCertificate | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            cert = commensurability(members[i], members[j])
            rows[i][j] = cert
            rows[j][i] = CommensurabilityCertificate(members[j], members[i], cert.z1, cert.z0)
    k = max(m.doubling_k for m in members)
    big_n = max(c.n for row in rows for c in row)
    return Family(tuple(members), k, big_n, tuple(tuple(r) for r in rows))


def family_square(f: Family) -> Family:
    """The family of squares X·X, with the bounds K(X²) ≤ K³ and N(X²) ≤ N·K asserted."""
    squares = family_validate([set_product(c, c) for c in f.carriers()])
    if squares.k_uniform > f.k_uniform ** 3:
        raise LemmaViolation(
            "remark-square", f"K of squared family {squares.k_uniform} > K^3 = {f.k_uniform ** 3}"
        )
    if squares.n_uniform > f.n_uniform * f.k_uniform:
        raise LemmaViolation(
            "remark-square", f"N of squared family {squares.n_uniform} > N*K = {f.n_uniform * f.k_uniform}"
        )
    return squares


# ---------------------------------------------------------------- lemma witnesses


@dataclass(frozen=True)
class ProductWitness:
    """Proof-built translate sets relating T = X_0 ··· X_{n-1} with a family member X.

    ``product_cover`` satisfies T ⊆ product_cover·X, ``member_cover`` satisfies
    X ⊆ member_cover·T; ``optimal_*`` are the exact covering numbers for
    comparison with the proof's sets.
    """

    product: GroupSubset
    product_cover: GroupSubset
    member_cover: GroupSubset
    bound: int
    n_bound: int
    optimal_product_cover: int
    optimal_member_cover: int


def _index_of(f: Family, m: ApproximateSubgroup) -> int:
    for i, other in enumerate(f.members):
        if other is m or other.carrier == m.carrier:
            return i
    raise ValueError("set is not a member of the family")


def product_commensurability_witness(parts: list[ApproximateSubgroup], x: ApproximateSubgroup, f: Family) -> ProductWitness:
    if not parts:
        raise EmptyInput("product needs at least one factor")
    idx = [_index_of(f, p) for p in parts]
    ix = _index_of(f, x)
    g = f.group
    k, big_n = f.k_uniform, f.n_uniform
    n = len(parts)

    product = parts[0].carrier
    for p in parts[1:]:
        product = set_product(product, p.carrier)

    # X_i ⊆ N_i X_{i+1} and X_{i+1}X_{i+1} ⊆ K_i X_{i+1}, so X_i X_{i+1} ⊆ N_i K_i X_{i+1}
    w = g.trivial()
    for i in range(n - 1):
        n_i = f.pairwise[idx[i]][idx[i + 1]].z0
        k_i = f.members[idx[i + 1]].doubling_witness
        w = set_product(set_product(w, n_i), k_i)
    w = set_product(w, f.pairwise[idx[-1]][ix].z0)
    # X ⊆ Z X_0 ⊆ Z T since every factor contains the identity
    z = f.pairwise[ix][idx[0]].z0

    bound = (big_n * k) ** (n - 1) * big_n
    if not product <= set_product(w, x.carrier):
        raise LemmaViolation("lem-prodcom", "product is not covered by the constructed translates")
    if len(w) > bound:
        raise LemmaViolation("lem-prodcom", f"constructed cover has {len(w)} > {bound} translates")
    if not x.carrier <= set_product(z, product) or len(z) > big_n:
        raise LemmaViolation("lem-prodcom", "member is not covered by N translates of the product")
    return ProductWitness(
        product,
        w,
        z,
        bound,
        big_n,
        covering_number(product, x.carrier).size,
        covering_number(x.carrier, product).size,
    )


def xx_intersection_witness(
    x: ApproximateSubgroup, y: ApproximateSubgroup, cert: CommensurabilityCertificate
) -> GroupSubset:
    """E = X1·X0 with XX ⊆ E·(XX ∩ YY) and |E| ≤ K·N, as built in the proof."""
    if not (cert.left.carrier == x.carrier and cert.right.carrier == y.carrier):
        raise ValueError("certificate does not relate x and y")
    big_n = cert.n
    x0 = maximal_disjoint_family(x.carrier, y.carrier).centers
    if len(x0) > len(cert.z0):
        raise LemmaViolation("lem-cover", f"disjoint family {len(x0)} exceeds cover {len(cert.z0)}")
    e = set_product(x.doubling_witness, x0)
    xx = set_product(x.carrier, x.carrier)
    yy = set_product(y.carrier, y.carrier)
    if len(e) > x.doubling_k * big_n:
        raise LemmaViolation("lem-xx", f"|E| = {len(e)} exceeds K*N = {x.doubling_k * big_n}")
    if not xx <= set_product(e, xx & yy):
        raise LemmaViolation("lem-xx", "XX is not covered by E(XX ∩ YY)", {"E": e.members()})
    return e
