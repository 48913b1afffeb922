import pytest

from torelli_lab.errors import InputError
from torelli_lab.fatgraph import whitehead_move
from torelli_lab.marking import NonUnimodular, standard_form, tautological_marking
from torelli_lab.nilpotent.lie import LieElement, leading_lie_term
from torelli_lab.nilpotent.markings import (
    NotNkTrivial,
    apply_move_pi,
    arc_form,
    arc_to_cycle_matrix,
    boundary_word,
    lambda_k,
    lambda_k_markings,
    quotient_for,
    residual_nk,
    tautological_pi_marking,
)
from torelli_lab.nilpotent.surface import DegreeTooHigh, SurfaceQuotient, relator_from_form
from torelli_lab.nilpotent.words import FreeWord, commutator
from torelli_lab.sequence import MoveSequence


def _gen(i, rank):
    return FreeWord.generator(i, rank)


def test_relator_from_standard_form():
    assert str(relator_from_form(standard_form(1))) == "x1 x2 X1 X2"
    assert str(relator_from_form(standard_form(2))) == "x1 x2 X1 X2 x3 x4 X3 X4"


def test_quotient_ranks_match_labute(fresh_table_cache):
    q = SurfaceQuotient(2, 3)
    for row in q.rank_report():
        assert row["quotient_rank"] == row["expected"]


def test_quotient_rejects_degenerate_form(fresh_table_cache):
    with pytest.raises(NonUnimodular):
        SurfaceQuotient(1, 2, omega=((0, 2), (-2, 0)))
    with pytest.raises(InputError):
        SurfaceQuotient(0, 2)


def test_torus_group_is_abelian_in_low_degree(fresh_table_cache):
    q = SurfaceQuotient(1, 3)
    a, b = _gen(1, 2), _gen(2, 2)
    assert q.equal(a * b, b * a, 2)
    assert q.graded_class(commutator(a, b), 1).is_zero()


def test_genus2_commutator_survives(fresh_table_cache):
    q = SurfaceQuotient(2, 3)
    a, b = _gen(1, 4), _gen(2, 4)
    assert q.equal(a * b, b * a, 1)
    assert not q.equal(a * b, b * a, 2)
    assert not q.graded_class(commutator(a, b), 1).is_zero()
    assert not any(any(c) for c in q.coordinates(q.relator, 3))
    with pytest.raises(DegreeTooHigh):
        q.coordinates(a, 4)


def test_reduce_is_idempotent(fresh_table_cache):
    q = SurfaceQuotient(2, 3)
    x = LieElement.basis_element((1, 2), 4)
    once = q.reduce(x)
    assert q.reduce(once) == once
    assert q.in_ideal(x - once)


def test_tautological_pi_marking(theta, genus2):
    for G in (theta, genus2):
        pm = tautological_pi_marking(G)
        assert pm.rank == 2 * G.genus
        assert pm.is_valid()
        assert len(pm.defect_vertices()) <= 1
        abelian = pm.abelianize().transform(arc_to_cycle_matrix(G))
        assert abelian.values == tautological_marking(G).values
        word = boundary_word(G, pm)
        assert word.is_conjugate(pm.relator) or word.is_conjugate(pm.relator.inverse())


def test_theta_relator_is_a_commutator(theta):
    pm = tautological_pi_marking(theta)
    assert pm.relator.exponent_sums() == (0, 0)
    assert len(pm.relator) == 4
    assert abs(arc_form(theta)[0][1]) == 1


def test_theta_boundary_word_leads_with_the_form(theta):
    word = boundary_word(theta, tautological_pi_marking(theta))
    assert word.exponent_sums() == (0, 0)
    omega = LieElement.basis_element((1, 2), 2)
    assert leading_lie_term(word, 1) in (omega, -omega)


def test_moves_preserve_pi_marking(genus2):
    pm = tautological_pi_marking(genus2)
    for e in range(genus2.edge_count):
        if genus2.is_loop(e):
            continue
        moved = apply_move_pi(pm, whitehead_move(genus2, e))
        assert moved.is_valid()
        assert moved.relator == pm.relator


def test_residual_nk_marking(genus2, fresh_table_cache):
    pm = tautological_pi_marking(genus2)
    q = quotient_for(pm, 3)
    nk = residual_nk(pm, 2, q)
    assert nk.is_valid()
    assert nk.homology().values == pm.abelianize().values
    with pytest.raises(DegreeTooHigh):
        residual_nk(pm, 4, q)
    with pytest.raises(InputError):
        residual_nk(pm, 0, q)


def test_point_push_lambda_1(genus2, fresh_table_cache):
    pm = tautological_pi_marking(genus2)
    q = quotient_for(pm, 3)
    pushed = pm.conjugated(_gen(1, pm.rank))
    lam = lambda_k_markings(pm, pushed, 1, q)
    assert not lam.is_zero()
    assert all(total.is_zero() for total in lam.vertex_sums())
    assert lam.as_dict()["degree"] == 2


def test_point_push_is_not_n2_trivial(genus2, fresh_table_cache):
    pm = tautological_pi_marking(genus2)
    q = quotient_for(pm, 3)
    pushed = pm.conjugated(_gen(1, pm.rank))
    with pytest.raises(NotNkTrivial):
        lambda_k_markings(pm, pushed, 2, q)


def test_lambda_k_needs_pi_marking(genus2):
    s = MoveSequence(genus2, tautological_marking(genus2))
    with pytest.raises(InputError):
        lambda_k(s, 1)


def test_empty_sequence_has_zero_lambda(genus2, fresh_table_cache):
    pm = tautological_pi_marking(genus2)
    s = MoveSequence(genus2, tautological_marking(genus2), (), pm)
    assert lambda_k(s, 1, quotient_for(pm, 3)).is_zero()
