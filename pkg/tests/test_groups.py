import itertools

import numpy as np
import pytest

from dwcalc.groups import (
    GroupAxiomError, build_group, centralizer_order, cyclic, direct_product, from_table, symmetric,
)


def brute_conjugacy_classes(G):
    m = G.order
    classes = []
    for x in range(m):
        orbit = frozenset(G.m(G.m(g, x), int(G.inv[g])) for g in range(m))
        if orbit not in classes:
            classes.append(orbit)
    return classes


def brute_centralizer(G, S):
    return sum(1 for g in range(G.order) if all(G.m(g, s) == G.m(s, g) for s in S))


def test_trivial_group():
    G = build_group({"cyclic": 1})
    assert G.order == 1 and G.is_abelian()


def test_s3_has_three_classes():
    G = build_group({"symmetric": 3})
    assert G.order == 6
    assert len(brute_conjugacy_classes(G)) == 3
    assert len(G.conjugacy_classes()) == 3


def test_klein_four():
    G = build_group({"product": [{"cyclic": 2}, {"cyclic": 2}]})
    assert G.order == 4 and G.exponent() == 2


@pytest.mark.parametrize("spec,order,classes", [
    ("Z2", 2, 2), ("Z/3", 3, 3), ("Z4", 4, 4), ("Z2xZ2", 4, 4), ("S3", 6, 3), ("S4", 24, 5), ("Z2xS3", 12, 6),
])
def test_build_group_shorthand(spec, order, classes):
    G = build_group(spec)
    assert G.order == order
    assert len(G.conjugacy_classes()) == len(brute_conjugacy_classes(G)) == classes


def test_deterministic_names():
    assert symmetric(3).names == symmetric(3).names == ("123", "132", "213", "231", "312", "321")
    assert build_group("Z2xZ2").names == build_group({"product": ["Z2", "Z2"]}).names


def test_centralizer_examples():
    S3 = symmetric(3)
    three_cycle = S3.index_of("231")
    assert centralizer_order(S3, [three_cycle]) == 3
    assert centralizer_order(S3, []) == 6
    gens = [S3.index_of("213"), three_cycle]
    assert centralizer_order(S3, gens) == 1


@pytest.mark.parametrize("spec", ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "S4"])
def test_centralizer_matches_brute_force_and_divides_order(spec):
    G = build_group(spec)
    subsets = itertools.chain.from_iterable(itertools.combinations(range(G.order), k) for k in range(3))
    for S in subsets:
        c = centralizer_order(G, S)
        assert c == brute_centralizer(G, S) == len(G.centralizer(S))
        assert G.order % c == 0


@pytest.mark.parametrize("spec", ["Z4", "Z2xZ2", "S3", "S4"])
def test_element_orders_divide_group_order(spec):
    G = build_group(spec)
    for g in range(G.order):
        assert G.order % G.element_order(g) == 0


def test_non_associative_table_names_the_triple():
    # a Latin square with identity 0 that is not associative
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupAxiomError, match="associativity fails at triple"):
        from_table(table)


def test_bad_identity_and_inverse():
    with pytest.raises(GroupAxiomError, match="identity"):
        from_table([[1, 0], [0, 1]])
    with pytest.raises(GroupAxiomError):
        from_table([[0, 1], [1, 1]])


def test_order_limits():
    with pytest.raises(GroupAxiomError):
        build_group({"cyclic": 65})
    with pytest.raises(GroupAxiomError):
        symmetric(5)
    with pytest.raises(GroupAxiomError):
        direct_product(build_group("S4"), build_group("S3"))
    with pytest.raises(GroupAxiomError):
        build_group("Q8")


def test_conjugation_table():
    G = symmetric(3)
    ct = G.conj_table
    for g in range(6):
        for x in range(6):
            assert ct[g, x] == G.m(G.m(g, x), int(G.inv[g]))


def test_tables_are_read_only():
    G = cyclic(3)
    with pytest.raises(ValueError):
        G.mul[0, 0] = 1
    assert np.array_equal(G.inv, [0, 2, 1])
