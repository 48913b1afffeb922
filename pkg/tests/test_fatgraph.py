import pytest

from torelli_lab.fatgraph import (
    CellKind,
    Disconnected,
    FixedPointInInvolution,
    LoopEdge,
    NotInvolution,
    NotSpine,
    automorphisms,
    build,
    canonical_form,
    codim2_degenerations,
    collapse_edge,
    collapse_edge_with_map,
    collapse_pair,
    expand_vertex,
    isomorphisms,
    link_of_codim2,
    relabel,
    seed_spine,
    vertex_splits,
    whitehead_move,
)


def test_theta_invariants(theta):
    assert theta.vertex_count == 2
    assert theta.edge_count == 3
    assert theta.boundary_count == 1
    assert theta.genus == 1
    assert theta.is_trivalent
    assert theta.is_spine


def test_build_rejects_fixed_point():
    with pytest.raises(FixedPointInInvolution):
        build([1, 0], [0, 1])


def test_build_rejects_non_involution():
    with pytest.raises(NotInvolution):
        build([1, 2, 0, 4, 5, 3], [1, 2, 0, 4, 5, 3])


def test_build_rejects_disconnected():
    with pytest.raises(Disconnected):
        build([1, 0, 3, 2], [1, 0, 3, 2])


def test_require_spine_on_planar_graph():
    # a path of two edges is planar
    tree = build([1, 0, 2, 3], [2, 3, 0, 1])
    with pytest.raises(NotSpine):
        tree.require_spine()


def test_seed_spine_shape():
    for g in (1, 2, 3):
        G = seed_spine(g)
        assert G.is_trivalent
        assert G.is_spine
        assert G.genus == g
        assert G.edge_count == 6 * g - 3
        assert G.vertex_count == 4 * g - 2


def test_theta_canonical_form(theta):
    form = canonical_form(theta)
    assert form.automorphisms == 6
    assert len(automorphisms(theta)) == 6
    assert len(form.key) == 32


def test_canonical_form_ignores_dart_names(genus2):
    perm = list(reversed(range(genus2.dart_count)))
    assert canonical_form(relabel(genus2, perm)).key == canonical_form(genus2).key
    assert next(isomorphisms(genus2, relabel(genus2, perm)), None) is not None


def test_whitehead_move_keeps_darts_and_genus(genus2):
    for e in range(genus2.edge_count):
        if genus2.is_loop(e):
            continue
        mr = whitehead_move(genus2, e)
        assert mr.graph.iota == genus2.iota
        assert mr.graph.is_trivalent
        assert mr.graph.genus == 2
        assert mr.graph.is_spine


def test_double_flip_is_isomorphic(genus2):
    for e in range(genus2.edge_count):
        if genus2.is_loop(e):
            continue
        twice = whitehead_move(whitehead_move(genus2, e).graph, e).graph
        assert canonical_form(twice).key == canonical_form(genus2).key


def test_theta_flip_gives_theta(theta):
    flipped = whitehead_move(theta, 0).graph
    assert canonical_form(flipped).key == canonical_form(theta).key


def test_collapse_theta_gives_figure_eight(theta):
    eight, dart_map = collapse_edge_with_map(theta, 0)
    assert eight.vertex_count == 1
    assert eight.edge_count == 2
    assert eight.valences == (4,)
    assert dart_map.count(-1) == 2
    assert canonical_form(eight).automorphisms == 4
    with pytest.raises(LoopEdge):
        whitehead_move(eight, 0)


def test_expand_inverts_collapse(theta):
    eight = collapse_edge(theta, 0)
    splits = vertex_splits(eight, 0)
    assert splits == [(0, 2), (1, 2)]
    for start, length in splits:
        H = expand_vertex(eight, 0, start, length)
        assert H.is_trivalent
        assert canonical_form(H).key == canonical_form(theta).key
        assert canonical_form(collapse_edge(H, H.edge_of[H.dart_count - 2])).key == canonical_form(eight).key


def test_five_valent_vertex_has_five_splits():
    star = build([1, 2, 3, 4, 0, 5, 6, 7, 8, 9], [5, 6, 7, 8, 9, 0, 1, 2, 3, 4])
    assert len(vertex_splits(star, 0)) == 5


def test_codim2_links_have_expected_lengths(genus2):
    kinds = set()
    for e, f in codim2_degenerations(genus2):
        G4, _ = collapse_pair(genus2, e, f)
        link = link_of_codim2(G4)
        kinds.add(link.kind)
        assert len(link) == (5 if link.kind is CellKind.PENTAGON else 4)
    assert kinds == {CellKind.PENTAGON, CellKind.SQUARE}
