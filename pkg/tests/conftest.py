import pathlib

import pytest

from approxgroups.groups import make_cyclic, make_dihedral

INSTANCES = pathlib.Path(__file__).resolve().parent.parent / "instances"


def interval(g, lo, hi):
    return g.subset({i % g.order for i in range(lo, hi + 1)})


@pytest.fixture
def z12():
    return make_cyclic(12)


@pytest.fixture
def d4():
    return make_dihedral(4)


@pytest.fixture
def d4_reflection_family(d4):
    # {1,s}, {1,sr}, {1,sr^2}, {1,sr^3}, {1,r^2}
    return [d4.subset([0, 4]), d4.subset([0, 5]), d4.subset([0, 6]), d4.subset([0, 7]), d4.subset([0, 2])]


@pytest.fixture
def instances_dir():
    return INSTANCES


def perm_group_table(generators):
    """Cayley table of the permutation group generated by ``generators`` (identity first)."""
    n = len(generators[0])
    ident = tuple(range(n))
    elems, frontier = [ident], [ident]
    seen = {ident}
    while frontier:
        nxt = []
        for p in frontier:
            for s in generators:
                q = tuple(s[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    index = {p: i for i, p in enumerate(elems)}
    # (a·b)(i) = a(b(i))
    return [[index[tuple(a[b[i]] for i in range(n))] for b in elems] for a in elems]


def cycles(n, *cycs):
    perm = list(range(n))
    for c in cycs:
        for i, x in enumerate(c):
            perm[x] = c[(i + 1) % len(c)]
    return tuple(perm)


EXTRA_GROUP_GENERATORS = {
    "Q8": [cycles(8, (0, 1, 2, 3), (4, 5, 6, 7)), cycles(8, (0, 4, 2, 6), (1, 7, 3, 5))],
    "Dic3": [cycles(12, (0, 1, 2, 3, 4, 5), (6, 7, 8, 9, 10, 11)), cycles(12, (0, 6, 3, 9), (1, 11, 4, 8), (2, 10, 5, 7))],
    "A4": [cycles(4, (0, 1, 2)), cycles(4, (0, 1), (2, 3))],
    "S4": [cycles(4, (0, 1, 2, 3)), cycles(4, (0, 1))],
}
