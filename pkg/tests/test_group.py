import json

import numpy as np
import pytest

from drinfeld.group import (
    GroupError,
    build_group,
    double_coset,
    double_cosets,
    parse_group_spec,
    subgroup_intersection,
    table_group,
)

from conftest import CORE_SPECS, el


@pytest.mark.parametrize(
    "spec, order, classes",
    [
        ("dihedral:3", 6, 3),
        ("dicyclic:2", 8, 5),
        ("cyclic:1", 1, 1),
        ("dihedral:4", 8, 5),
        ("dihedral:5", 10, 4),
        ("symmetric:4", 24, 5),
        ("perm:(1,2,3);(2,3,4)", 12, 4),
        ("product:cyclic:2,cyclic:2,cyclic:2", 8, 8),
        ("dicyclic:3", 12, 6),
    ],
)
def test_order_and_class_count(spec, order, classes):
    G = parse_group_spec(spec)
    assert G.order == order
    assert len(G.conjugacy_classes()) == classes
    assert sum(c.size for c in G.conjugacy_classes()) == order


def test_group_axioms_hold_for_core_groups():
    for spec in CORE_SPECS.values():
        G = build_group(spec)
        m, n = G.mult, G.order
        assert np.all(m[0] == np.arange(n)) and np.all(m[:, 0] == np.arange(n))
        for row in m:
            assert sorted(row) == list(range(n))
        # associativity on the full table
        lhs = m[m[:, :, None], np.arange(n)[None, None, :]]
        rhs = m[np.arange(n)[:, None, None], m[None, :, :]]
        assert np.array_equal(lhs, rhs)


def test_dihedral_presentation():
    G = build_group("dihedral:5")
    x, y = el(G, 1), el(G, 0, 1)
    assert G.element_orders[x] == 5 and G.element_orders[y] == 2
    assert G.mul(y, x, G.inv[y]) == G.inv[x]


def test_dicyclic_presentation():
    for n in (2, 3, 5):
        G = build_group(f"dicyclic:{n}")
        x, y = el(G, 1), el(G, 0, 1)
        assert G.element_orders[x] == 2 * n
        assert G.mul(y, y) == el(G, n)
        assert G.mul(y, x, G.inv[y]) == G.inv[x]


def test_transversal_conjugates_representative_onto_class():
    for spec in ("dihedral:4", "dicyclic:3", "symmetric:4"):
        G = build_group(spec)
        tau = G.transversal
        for c in G.conjugacy_classes():
            for s in c.members:
                assert G.conj(c.rep, int(tau[s])) == s


def test_centralizer_and_class_sizes():
    G = build_group("symmetric:4")
    for c in G.conjugacy_classes():
        C = G.centralizer(c.rep)
        assert C.order * c.size == G.order
        assert all(G.mul(h, c.rep) == G.mul(c.rep, h) for h in C.members)


def test_centralizers_of_dihedral_even():
    G = build_group("dihedral:6")
    y, x3 = el(G, 0, 1), el(G, 3)
    Cy = G.centralizer(y)
    assert set(Cy.members) == {0, y, x3, G.mul(y, x3)}
    assert not Cy.is_normal()
    assert G.centralizer(el(G, 1)).is_normal()


def test_double_cosets_partition_group():
    G = build_group("dihedral:6")
    A = G.centralizer(el(G, 0, 1))
    B = G.centralizer(el(G, 1, 1))
    reps = double_cosets(A, B)
    seen = set()
    for r in reps:
        dc = double_coset(A, r, B)
        assert not (seen & dc)
        seen |= dc
    assert seen == set(range(G.order))


def test_subgroup_intersection():
    G = build_group("dihedral:6")
    A = G.centralizer(el(G, 0, 1))
    B = G.centralizer(el(G, 1))
    assert set(subgroup_intersection(A, B).members) == {0, el(G, 3)}


def test_table_group_roundtrip(tmp_path):
    G = build_group("dicyclic:2")
    path = tmp_path / "q8.json"
    path.write_text(json.dumps({"order": 8, "mult": G.mult.tolist()}))
    H = parse_group_spec(f"table:{path}")
    assert len(H.conjugacy_classes()) == 5


@pytest.mark.parametrize(
    "spec",
    ["", "dihedral", "dihedral:0", "cyclic:-3", "bogus:4", "perm:(1,1)", "product:cyclic:2", "table:/nonexistent.json"],
)
def test_bad_specs_are_rejected(spec):
    with pytest.raises(GroupError):
        parse_group_spec(spec)


def test_table_group_rejects_non_group():
    with pytest.raises(GroupError):
        table_group([[0, 1], [1, 1]])
