import pytest

from torelli_lab.cocycle import (
    SimplicialChain,
    UnlabeledEdge,
    contraction_cocycle,
    cup_power_on_chain,
    cup_square_on_cell,
    degenerate,
    fan_chain,
    j_move,
    pentagon_star,
    square_star,
    verify_cells,
    verify_cocycle,
)
from torelli_lab.corpus import PENTAGON_CUP_SQUARE, basis_point, evaluate, linear_vector
from torelli_lab.errors import InputError
from torelli_lab.exterior import theta_graph, two_loop_graph
from torelli_lab.fatgraph import CellKind, codim2_degenerations
from torelli_lab.marking import standard_form, tautological_marking

E1, E2, E3, E4 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def test_pentagon_star_is_a_cocycle():
    cell = pentagon_star(E1, E2, E3, E4)
    assert cell.kind is CellKind.PENTAGON
    assert len(cell) == 5
    assert verify_cocycle(cell).ok


def test_square_star_is_a_cocycle():
    cell = square_star(E1, E2, E3, E4, (1, 1, 0, 0))
    assert cell.kind is CellKind.SQUARE
    assert len(cell) == 4
    assert verify_cocycle(cell).ok


def test_cup_square_does_not_depend_on_apex():
    for cell in (pentagon_star(E1, E2, E3, E4), square_star(E1, E2, E3, E4, (0, 1, 1, 0))):
        values = {cup_square_on_cell(cell, apex) for apex in range(len(cell))}
        assert len(values) == 1
        contractions = {contraction_cocycle(cell, theta_graph(), standard_form(2), apex)
                        for apex in range(len(cell))}
        assert len(contractions) == 1


def test_reversed_star_gives_the_printed_cup_square():
    env = basis_point()
    env["e"] = linear_vector("-(a+b+c+d)", env)
    printed = evaluate(PENTAGON_CUP_SQUARE, env)
    cell = pentagon_star(E1, E2, E3, E4).reversed()
    for apex in range(5):
        assert cup_square_on_cell(cell, apex) == printed
    assert contraction_cocycle(cell, two_loop_graph(), standard_form(2)) == 8


def test_reversed_twice_is_the_same_boundary():
    cell = pentagon_star(E1, E2, E3, E4)
    assert cell.reversed().reversed().edge_values == cell.edge_values


def test_fan_chain_matches_cup_square():
    cell = pentagon_star(E1, E2, E3, E4)
    for apex in range(5):
        assert cup_power_on_chain(fan_chain(cell, apex), 4) == cup_square_on_cell(cell, apex)


def test_chain_edges_need_values():
    chain = SimplicialChain(((1, (0, 1, 2)),), {})
    with pytest.raises(UnlabeledEdge):
        cup_power_on_chain(chain, 4)


def test_apex_out_of_range():
    with pytest.raises(InputError):
        cup_square_on_cell(pentagon_star(E1, E2, E3, E4), apex=5)


def test_contraction_needs_a_form():
    with pytest.raises(InputError):
        contraction_cocycle(pentagon_star(E1, E2, E3, E4), theta_graph())


def test_degenerations_of_genus2_spine_are_cocycles(genus2):
    m = tautological_marking(genus2)
    kinds = set()
    for e, f in codim2_degenerations(genus2):
        cell = degenerate(genus2, m, e, f)
        kinds.add(cell.kind)
        assert verify_cocycle(cell).ok
    assert kinds == {CellKind.PENTAGON, CellKind.SQUARE}


def test_j_move_is_a_triple_wedge(genus2):
    m = tautological_marking(genus2)
    e = next(e for e in range(genus2.edge_count) if not genus2.is_loop(e))
    assert j_move(genus2, m, e).dim == 4


def test_verify_cells_on_theta(theta):
    report = verify_cells(theta, tautological_marking(theta), radius=2, list_cells=True)
    assert report.ok
    assert report.visited >= 1
    # genus 1 has no codimension-2 cells: the sweep only exercises the move graph
    assert report.cells == 0
    assert report.cells == len(report.cell_ids)
    assert report.as_dict()["ok"] is True


def test_verify_cells_on_genus2(genus2):
    report = verify_cells(genus2, tautological_marking(genus2), radius=6)
    assert report.ok
    assert report.pentagons > 0
    assert report.squares > 0
    assert report.automorphisms_checked >= report.visited


@pytest.mark.slow
def test_verify_cells_on_theta_marked_radius_6(theta):
    report = verify_cells(theta, tautological_marking(theta), radius=6, dedupe="marked")
    assert report.ok
    assert report.visited > 1
    assert report.cells == 0


def test_verify_cells_rejects_unknown_dedupe(theta):
    with pytest.raises(InputError):
        verify_cells(theta, tautological_marking(theta), dedupe="everything")
