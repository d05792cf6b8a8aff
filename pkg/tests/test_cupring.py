import random
from itertools import combinations

import pytest

from treebraid.cells import Cochain, coboundary, parse_cell
from treebraid.cupring import (
    CellClass,
    DuplicateClass,
    MixedDimensions,
    build_hat_complex,
    class_cells,
    class_leq,
    class_of,
    classes_of_dim,
    confluent,
    cup,
    express_in_dual_basis,
    lub,
    lub_by_scan,
    one_classes_of,
    phi_cocycle,
    push_to_normal_form,
    ring_table,
    try_critical_representative,
)
from treebraid.morse import MorseComplex
from treebraid.tree import path_tree, spider

from conftest import h_tree

A = "{e7, v4, v8, v9}"
B = "{e19, v12, v11, v10}"
B2 = "{e19, v11, v10, *}"
C = "{e16, v13, v1, *}"
P1 = "{e19, v10, *, v1}"
P3 = "{e25, v22, *, v1}"

LISTED = {
    1: "{e7, e19, v4, v10}",
    2: "{e7, e16, v4, v13}",
    3: "{e7, e25, v4, v22}",
    4: "{e16, e25, v13, v22}",
    5: "{e19, e25, v10, v22}",
    6: "{e19, e16, v13, v14}",
    7: "{e19, e16, v13, v17}",
    8: "{e19, e16, v13, v10}",
    9: "{e19, e16, v13, v20}",
    10: "{e19, e16, v13, *}",
}


def k(tree, text):
    return class_of(tree, parse_cell(text))


def test_class_of(tmin):
    c = "{v10, v14, e16, e19}"
    # v10 and v14 both sit in the component of the root once e16, e19 are removed
    assert k(tmin, c) == k(tmin, "{e16, e19, v10, v13}")
    assert k(tmin, c) != k(tmin, LISTED[6])
    assert k(tmin, c) == k(tmin, c)
    assert k(tmin, c).n == 4 and k(tmin, c).dim == 2


def test_critical_two_cells_have_distinct_classes(tmin4):
    crit = tmin4.critical_cells(2)
    assert len({class_of(tmin4.tree, c) for c in crit}) == 6


def test_class_is_invariant_under_moves(tmin4):
    t = tmin4.tree
    rng = random.Random(11)
    for c in rng.sample(tmin4.cells(1), 300):
        kc = class_of(t, c)
        cells = class_cells(t, kc)
        assert c in cells
        assert all(class_of(t, d) == kc for d in cells)


def test_push_examples(tmin):
    assert push_to_normal_form(tmin, parse_cell("{e19, v12, v13, v10}")) == parse_cell(B)
    crit0 = parse_cell("{*, v1, v2, v3}")
    assert push_to_normal_form(tmin, crit0) == crit0
    for text in (B, "{v5, v20, e25, v13}"):
        once = push_to_normal_form(tmin, parse_cell(text))
        assert push_to_normal_form(tmin, once) == once
        assert class_of(tmin, once) == k(tmin, text)


def test_push_is_not_confluent_without_a_critical_cell(tmin):
    c = parse_cell("{e20, v23, v26, *}")
    ends = {push_to_normal_form(tmin, c, random.Random(s)) for s in range(50)}
    assert ends == {parse_cell("{e20, *, v21, v22}"), parse_cell("{e20, *, v21, v25}")}
    assert try_critical_representative(tmin, class_of(tmin, c)) is None


def test_try_critical_representative(tmin):
    assert try_critical_representative(tmin, k(tmin, C)) == parse_cell(C)
    assert try_critical_representative(tmin, k(tmin, LISTED[6])) is None
    assert try_critical_representative(tmin, k(tmin, "{e1, v3, v4, v5}")) is None
    assert try_critical_representative(tmin, k(tmin, "{v10, v14, e16, e19}")) == parse_cell(LISTED[8])


def test_class_order(tmin4):
    t = tmin4.tree
    assert class_leq(t, k(t, B), k(t, LISTED[8]))
    assert class_leq(t, k(t, LISTED[8]), k(t, LISTED[8]))
    assert not class_leq(t, k(t, LISTED[8]), k(t, B))
    rng = random.Random(2)
    sample = rng.sample(classes_of_dim(tmin4, 1), 40) + rng.sample(classes_of_dim(tmin4, 2), 40)
    for a, b in combinations(sample, 2):
        if class_leq(t, a, b) and class_leq(t, b, a):
            assert a == b


def test_lub_examples(tmin):
    assert lub(tmin, [k(tmin, A), k(tmin, P1)]) == k(tmin, LISTED[1])
    assert lub(tmin, [k(tmin, B2), k(tmin, C)]) == k(tmin, LISTED[10])
    assert lub(tmin, [k(tmin, A), k(tmin, "{e7, v4, *, v1}")]) is None
    with pytest.raises(DuplicateClass):
        lub(tmin, [k(tmin, A), k(tmin, A)])
    with pytest.raises(MixedDimensions):
        lub(tmin, [k(tmin, A), k(tmin, LISTED[1])])


def test_one_classes_round_trip(tmin):
    assert one_classes_of(tmin, k(tmin, LISTED[8])) == {k(tmin, B), k(tmin, C)}
    assert one_classes_of(tmin, k(tmin, C)) == {k(tmin, C)}
    for text in LISTED.values():
        kk = k(tmin, text)
        assert lub(tmin, one_classes_of(tmin, kk)) == kk


def test_lub_solver_matches_scan_on_critical_pairs(tmin4):
    t = tmin4.tree
    crit = [class_of(t, c) for c in tmin4.critical_cells(1)]
    for a, b in combinations(crit, 2):
        assert lub(t, [a, b]) == lub_by_scan(tmin4, [a, b])


@pytest.mark.parametrize("tree,n", [(spider([2, 2, 2]), 3), (h_tree(3), 3), (spider([3, 3, 3, 3]), 4)])
def test_lub_solver_matches_scan_exhaustively(tree, n):
    space = MorseComplex(tree, n)
    ones = classes_of_dim(space, 1)
    for size in (2, 3):
        for group in combinations(ones, size):
            got = lub(tree, group)
            assert got == lub_by_scan(space, group)
            if got is not None:
                assert one_classes_of(tree, got) == set(group)


def test_distinct_classes_with_same_edges_have_no_bound(tmin4):
    t = tmin4.tree
    by_edge = {}
    for kk in classes_of_dim(tmin4, 1):
        by_edge.setdefault(kk.edges, []).append(kk)
    for group in by_edge.values():
        for a, b in combinations(group, 2):
            assert lub(t, [a, b]) is None


def test_phi_cocycles(tmin4):
    t = tmin4.tree
    phi8 = phi_cocycle(t, 4, k(t, LISTED[8]))
    assert not coboundary(t, phi8)
    crit = set(tmin4.critical_cells(2))
    assert len(phi8.support & crit) == 1
    assert not phi_cocycle(t, 4, k(t, LISTED[6])).support & crit


def test_dual_basis(tmin4):
    t = tmin4.tree
    crit1 = tmin4.critical_cells(1)
    for i, c in enumerate(crit1):
        v = express_in_dual_basis(tmin4, phi_cocycle(t, 4, class_of(t, c)))
        assert v.support() == [i]
    rng = random.Random(4)
    a = Cochain(0, rng.sample(tmin4.cells(0), 500))
    assert not express_in_dual_basis(tmin4, coboundary(t, a))


def test_cup_examples(tmin4):
    crit2 = tmin4.critical_cells(2)
    want = [crit2.index(parse_cell(LISTED[8]))]
    assert cup(tmin4, [parse_cell(B), parse_cell(C)]).support() == want
    assert cup(tmin4, [parse_cell(B2), parse_cell(C)]).support() == want
    assert not cup(tmin4, [parse_cell(C), parse_cell(C)])
    assert cup(tmin4, [parse_cell(C), parse_cell(B)]) == cup(tmin4, [parse_cell(B), parse_cell(C)])
    crit1 = tmin4.critical_cells(1)
    for x, y, z in [(0, 5, 9), (2, 3, 14), (1, 7, 20)]:
        assert not cup(tmin4, [crit1[x], crit1[y], crit1[z]])


def test_ring_table(tmin4):
    rt = ring_table(tmin4)
    assert rt.pairing_rank() == 6
    assert rt.radical_dimension() == 18
    assert len(rt.products) == 7
    assert len({p for p in rt.products.values()}) == 6
    assert all(rt.product(i, i) == () for i in range(24))
    assert all(rt.product(i, j) == rt.product(j, i) for i, j in rt.products)
    dot = rt.to_dot()
    assert dot.count(" -- ") == 7


def test_ring_table_on_path():
    rt = ring_table(MorseComplex(path_tree(8), 4))
    assert rt.basis1 == [] and rt.products == {}
    assert rt.pairing_rank() == 0


def test_hat_complex(tmin4):
    hat = build_hat_complex(tmin4)
    assert list(hat.cells[1].values()) == hat.vertices
    labels = list(hat.cells[2].values())
    assert len(labels) == len(set(labels))
    assert set(labels) == set(classes_of_dim(tmin4, 2))
    for face_set in hat.cells[2]:
        assert all(frozenset([v]) in hat.cells[1] for v in face_set)


def test_confluence_where_a_critical_cell_exists(tmin4):
    t = tmin4.tree
    rng = random.Random(9)
    tried = 0
    for i in (0, 1, 2):
        for c in rng.sample(tmin4.cells(i), 400):
            if try_critical_representative(t, class_of(t, c)) is None:
                continue
            tried += 1
            assert confluent(t, c, trials=100, seed=tried)
    assert tried > 50


def test_cell_class_text():
    kk = CellClass((16, 19), ((0, 1), (13, 1)))
    assert str(kk) == "[e16, e19 | *:1, v13:1]"
    assert kk.n == 4
