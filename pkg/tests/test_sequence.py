import pytest

from torelli_lab.cocycle import equivariance_check, j_path
from torelli_lab.errors import InputError
from torelli_lab.fatgraph import automorphisms, canonical_form
from torelli_lab.marking import InvalidRelabeling, induced_basis_change, tautological_marking
from torelli_lab.nilpotent.markings import tautological_pi_marking
from torelli_lab.sequence import MoveSequence


def _first_edge(G):
    return next(e for e in range(G.edge_count) if not G.is_loop(e))


def test_markings_follow_the_steps(genus2):
    m = tautological_marking(genus2)
    e = _first_edge(genus2)
    s = MoveSequence(genus2, m, (e,))
    assert len(s) == 1
    assert len(s.markings) == 2
    assert s.final_graph is s.moves[-1].graph
    assert all(mk.is_valid() for mk in s.markings)
    assert s.correspondence == tuple(range(genus2.edge_count))


def test_marking_must_live_on_start(theta, genus2):
    with pytest.raises(InputError):
        MoveSequence(genus2, tautological_marking(theta))


def test_then_concatenates(genus2):
    m = tautological_marking(genus2)
    e = _first_edge(genus2)
    first = MoveSequence(genus2, m, (e,))
    f = _first_edge(first.final_graph)
    second = MoveSequence(first.final_graph, first.final_marking, (f,))
    joined = first.then(second)
    assert joined.steps == (e, f)
    assert j_path(joined) == j_path(first) + j_path(second)


def test_double_flip_closes_up(genus2):
    m = tautological_marking(genus2)
    e = _first_edge(genus2)
    s = MoveSequence(genus2, m, (e,))
    back = s.reversed()
    assert back.start is s.final_graph
    assert canonical_form(back.final_graph).key == canonical_form(genus2).key
    assert s.then(back).is_torelli


def test_reversed_carries_pi_marking(genus2):
    m = tautological_marking(genus2)
    pi = tautological_pi_marking(genus2)
    s = MoveSequence(genus2, m, (_first_edge(genus2),), pi)
    assert len(s.pi_markings) == 2
    assert s.reversed().pi_marking == s.pi_markings[-1]
    with pytest.raises(InputError):
        MoveSequence(genus2, m).pi_markings


def test_automorphisms_act_equivariantly(genus2):
    m = tautological_marking(genus2)
    s = MoveSequence(genus2, m, (_first_edge(genus2),))
    for psi in automorphisms(genus2):
        try:
            M = induced_basis_change(m, m, psi)
        except InvalidRelabeling:
            continue
        assert equivariance_check(s, psi, M)


def test_equivariance_rejects_non_bijection(genus2):
    m = tautological_marking(genus2)
    s = MoveSequence(genus2, m, (_first_edge(genus2),))
    with pytest.raises(InvalidRelabeling):
        equivariance_check(s, (0,) * genus2.dart_count, ((1, 0, 0, 0),) * 4)
