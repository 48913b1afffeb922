import random

import pytest

from torelli_lab.corpus import PENTAGON_CUP_SQUARE, basis_point, evaluate, linear_vector
from torelli_lab.errors import ParseError
from torelli_lab.exterior import (
    DimensionMismatch,
    GradeMismatch,
    MultiWedge,
    NonIntegralContraction,
    PairingGraph,
    Wedge3,
    WrongGrade,
    c1_oracle,
    c2_oracle,
    contract_C1,
    contract_C2,
    contract_graph,
    decomposable,
    theta_graph,
    transform_vectors,
    two_loop_graph,
    wedge3,
)
from torelli_lab.marking import random_symplectic, standard_form

OMEGA = standard_form(2)
A1, B1, A2, B2 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def _random_triples(rng, count):
    for _ in range(count):
        yield (
            [tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(3)],
            [tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(3)],
        )


def test_wedge3_is_alternating():
    w = wedge3(A1, B1, A2)
    assert w.coefficient(0, 1, 2) == 1
    assert w.coefficient(1, 0, 2) == -1
    assert wedge3(B1, A1, A2) == -w
    assert wedge3(A1, A1, B2).is_zero()
    assert (w * 3 - w * 2) == w


def test_wedge3_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        wedge3(A1, B1, (1, 0, 0))
    with pytest.raises(DimensionMismatch):
        Wedge3.zero(4) + Wedge3.zero(6)


def test_multiwedge_antisymmetry():
    u = MultiWedge.from_wedge3(wedge3(A1, B1, A2))
    v = MultiWedge.from_wedge3(wedge3(A1, B1, B2))
    assert (u ^ v) == -(v ^ u)
    assert (u ^ u).is_zero()


def test_contraction_anchors():
    x = decomposable([A1, A2, B2], [B1, A2, B2])
    assert contract_C2(x, OMEGA) == 6
    assert contract_C1(x, OMEGA) == 4
    assert contract_graph(theta_graph(), x, OMEGA) == 6
    assert contract_graph(two_loop_graph(), x, OMEGA) == 4


def test_pentagon_cup_square_contractions():
    env = basis_point()
    env["e"] = linear_vector("-(a+b+c+d)", env)
    j2 = evaluate(PENTAGON_CUP_SQUARE, env)
    assert contract_graph(theta_graph(), j2, OMEGA) == 12
    assert contract_graph(two_loop_graph(), j2, OMEGA) == 8


def test_contractions_match_oracles():
    rng = random.Random(3)
    for a, b in _random_triples(rng, 100):
        x = decomposable(a, b)
        c2 = c2_oracle(a, b, OMEGA)
        c1 = c1_oracle(a, b, OMEGA)
        assert contract_C2(x, OMEGA) == c2
        assert contract_graph(theta_graph(), x, OMEGA) == c2
        assert contract_C1(x, OMEGA) == c1
        assert contract_graph(two_loop_graph(), x, OMEGA) == c1


def test_contractions_are_symplectic_invariants():
    rng = random.Random(11)
    for seed, (a, b) in enumerate(_random_triples(rng, 100)):
        M = random_symplectic(2, seed=seed)
        x = decomposable(a, b)
        y = decomposable(transform_vectors(M, a), transform_vectors(M, b))
        assert x.transform(M) == y
        assert contract_C2(y, OMEGA) == contract_C2(x, OMEGA)
        assert contract_C1(y, OMEGA) == contract_C1(x, OMEGA)
        for graph in (theta_graph(), two_loop_graph()):
            assert contract_graph(graph, y, OMEGA) == contract_graph(graph, x, OMEGA)


def test_contraction_grade_checks():
    w = MultiWedge.from_wedge3(wedge3(A1, B1, A2))
    with pytest.raises(WrongGrade):
        contract_C2(w, OMEGA)
    with pytest.raises(GradeMismatch):
        contract_graph(theta_graph(), w, OMEGA)


def test_pairing_graph_text():
    graph = PairingGraph.parse(theta_graph().to_text(), source="theta")
    assert graph.edges == theta_graph().edges
    with pytest.raises(ParseError):
        PairingGraph.parse("pgraph 2\nedge 0 0 1 0\n")


def _k4_graph():
    return PairingGraph(4, (
        ((0, 0), (1, 0)), ((0, 1), (2, 0)), ((0, 2), (3, 0)),
        ((1, 1), (2, 1)), ((1, 2), (3, 1)), ((2, 2), (3, 2)),
    ), name="k4")


def test_four_vertex_contraction_is_an_integer():
    factors = [wedge3(A1, B1, A2), wedge3(A1, B1, B2), wedge3(A1, A2, B2), wedge3(B1, A2, B2)]
    x = MultiWedge.from_wedge3(factors[0])
    for w in factors[1:]:
        x = x ^ MultiWedge.from_wedge3(w)
    assert type(contract_graph(_k4_graph(), x, OMEGA)) is int


def test_contraction_remainder_is_reported(monkeypatch):
    from torelli_lab import exterior

    calls = iter([1])
    monkeypatch.setattr(exterior, "_graph_value", lambda graph, factors, omega: next(calls, 0))
    x = decomposable([A1, A2, B2], [B1, A2, B2])
    with pytest.raises(NonIntegralContraction):
        contract_graph(theta_graph(), x, OMEGA)
