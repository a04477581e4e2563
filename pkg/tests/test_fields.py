import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dwcalc.cocycles import BudgetExceeded
from dwcalc.fields import (
    GaugeField, Presentation, PresentationError, complex_presentation, count_homs, disjoint_presentation,
    enumerate_homs, evaluate_word, field_class_mod2, flat_fields_on_complex, free_reduce, orbit_decomposition,
    tietze_reduce, times_circle,
)
from dwcalc.groups import build_group
from dwcalc.topology.builtins import BUILTIN_PRESENTATIONS, builtin_complex
from dwcalc.topology.complex import ComplexError, disjoint_union
from dwcalc.topology.homology import all_h1_classes, cohomologous, homology_mod2


def brute_homs(P, G):
    return sum(1 for imgs in itertools.product(range(G.order), repeat=P.n_generators)
               if all(evaluate_word(G, r, imgs) == 0 for r in P.relators))


def brute_flat_colorings(K, G):
    """Every edge coloring with g01 g12 = g02 on each triangle, no gauge fixing."""
    tris = [(fs[2], fs[0], fs[1]) for fs in K.faces[1]] if K.dimension >= 2 else []
    return sum(1 for c in itertools.product(range(G.order), repeat=K.count(1))
               if all(G.m(c[a], c[b]) == c[e] for a, b, e in tris))


def builtin_presentation(name):
    n, rels = BUILTIN_PRESENTATIONS[name]
    return Presentation.parse(n, rels)


def test_torus_s3():
    G = build_group("S3")
    P = builtin_presentation("torus")
    homs = enumerate_homs(P, G)
    commuting = sum(1 for a in range(6) for b in range(6) if G.m(a, b) == G.m(b, a))
    assert len(homs) == commuting == 18
    orbits = orbit_decomposition(homs, G)
    assert len(orbits) == 8
    assert sum(o.size for o in orbits) == 18


def test_genus_two_z2():
    assert count_homs(builtin_presentation("sigma2"), build_group("Z2")) == 16


@pytest.mark.parametrize("name", ["torus", "klein", "rp2", "sigma2", "n3", "klein_word2", "torus3", "circle"])
@pytest.mark.parametrize("spec", ["Z2", "Z3", "S3"])
def test_hom_counts_agree_across_presentations(name, spec):
    G = build_group(spec)
    K = builtin_complex(name)
    standard = builtin_presentation(name)
    expected = brute_homs(standard, G)
    assert count_homs(standard, G) == expected
    assert count_homs(tietze_reduce(complex_presentation(K))[0], G) == expected
    assert len(flat_fields_on_complex(K, G)) == expected


@pytest.mark.parametrize("name", ["circle", "sphere2", "torus", "klein", "rp2"])
@pytest.mark.parametrize("spec", ["Z2", "S3"])
def test_gauge_fixing_matches_all_colorings(name, spec):
    G = build_group(spec)
    K = builtin_complex(name)
    fixed = flat_fields_on_complex(K, G)
    assert brute_flat_colorings(K, G) == len(fixed) * G.order ** (K.count(0) - 1)


@pytest.mark.parametrize("name", ["torus", "klein", "sigma2", "torus3"])
@pytest.mark.parametrize("spec", ["Z2", "Z3", "Z2xZ2", "S3"])
def test_groupoid_cardinality(name, spec):
    G = build_group(spec)
    homs = enumerate_homs(builtin_presentation(name), G)
    orbits = orbit_decomposition(homs, G)
    assert sum(Fraction(1, o.stabilizer) for o in orbits) == Fraction(len(homs), G.order)
    for o in orbits:
        assert o.size * o.stabilizer == G.order


@pytest.mark.parametrize("name", ["torus", "klein", "rp2", "sigma2", "n3", "torus3", "torus_grid3"])
def test_mod2_fields_biject_with_h1(name):
    G = build_group("Z2")
    K = builtin_complex(name)
    classes = [field_class_mod2(f, K, G) for f in flat_fields_on_complex(K, G)]
    assert len(classes) == 2 ** homology_mod2(K).beta1
    assert all(c.is_cocycle for c in classes)
    for a, b in itertools.combinations(classes, 2):
        assert not cohomologous(a, b)
    for h in all_h1_classes(K):
        assert sum(cohomologous(h, c) for c in classes) == 1


def test_disconnected_complex_needs_components():
    U = disjoint_union(builtin_complex("torus"), builtin_complex("torus"))
    with pytest.raises(ComplexError, match="components"):
        flat_fields_on_complex(U, build_group("Z2"))
    P = complex_presentation(U)
    assert P.n_components == 2
    homs = enumerate_homs(P, build_group("Z2"))
    orbits = orbit_decomposition(homs, build_group("Z2"), P.components)
    assert len(orbits) == 16 and all(o.stabilizer == 4 for o in orbits)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_homs(builtin_presentation("sigma3"), build_group("S4"), budget=1000)


def test_incomplete_field_list_is_detected():
    G = build_group("S3")
    homs = enumerate_homs(builtin_presentation("torus"), G)
    with pytest.raises(ValueError, match="incomplete"):
        orbit_decomposition(homs[:-1], G)


def test_presentation_parsing():
    P = Presentation.parse(2, ["abAB"])
    assert P.relators == ((1, 2, -1, -2),)
    assert str(P) == "<a, b | abAB>"
    with pytest.raises(PresentationError):
        Presentation.parse(1, ["ab"])
    with pytest.raises(PresentationError):
        Presentation.parse(1, ["a?"])


def test_times_circle_and_disjoint():
    G = build_group("S3")
    C = Presentation.parse(1, [])
    assert count_homs(times_circle(C), G) == 18
    D = disjoint_presentation(C, C)
    assert D.n_components == 2 and count_homs(D, G) == 36


def test_free_reduce():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert free_reduce(()) == ()


@settings(max_examples=50, deadline=None)
@given(rels=st.lists(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=5), max_size=3),
       spec=st.sampled_from(["Z2", "Z3", "S3"]))
def test_tietze_reduction_preserves_hom_count_up_to_eliminated_generators(rels, spec):
    G = build_group(spec)
    P = Presentation(3, tuple(tuple(r) for r in rels))
    Q, _ = tietze_reduce(P)
    assert Q.n_generators <= 3
    assert brute_homs(Q, G) == brute_homs(P, G)


def test_gauge_field_ordering():
    assert GaugeField((0, 1)) < GaugeField((1, 0))
    assert len(GaugeField((0, 1, 2))) == 3


def test_field_class_requires_z2():
    K = builtin_complex("torus")
    with pytest.raises(ValueError):
        field_class_mod2(GaugeField((0,) * K.count(1), "coloring"), K, build_group("Z3"))
    with pytest.raises(ValueError):
        field_class_mod2(GaugeField((0,), "hom"), K, build_group("Z2"))


def test_flat_fields_are_flat():
    G = build_group("S3")
    K = builtin_complex("torus_grid3")
    tris = [(fs[2], fs[0], fs[1]) for fs in K.faces[1]]
    fields = flat_fields_on_complex(K, G)
    assert len(fields) == 18
    for f in fields:
        v = f.values
        assert all(G.m(v[a], v[b]) == v[c] for a, b, c in tris)
    assert np.all(np.diff([list(f.values) for f in fields], axis=0).any(axis=1))
