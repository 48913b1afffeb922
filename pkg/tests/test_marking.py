import pytest

from torelli_lab.fatgraph import whitehead_move
from torelli_lab.lattice import determinant, identity, mat_mul, transpose
from torelli_lab.marking import (
    InvalidMarking,
    InvalidModulus,
    LevelNMarking,
    apply_move,
    cycle_basis,
    induced_basis_change,
    intersection_form,
    is_symplectic,
    random_symplectic,
    reduce_mod,
    sp_generators,
    sp_order,
    standard_form,
    symplectic_basis,
    tautological_marking,
)


def test_theta_tautological_marking(theta):
    m = tautological_marking(theta)
    assert m.dim == 2
    assert m.form == ((0, 1), (-1, 0))
    assert m.is_valid()
    # dart d and its reverse carry opposite classes
    for d in range(theta.dart_count):
        assert tuple(-x for x in m.values[d]) == m.values[theta.iota[d]]


def test_cycle_basis_matches_genus(genus2):
    basis = cycle_basis(genus2)
    assert len(basis) == 4
    omega = intersection_form(genus2, basis)
    assert abs(determinant(omega)) == 1
    assert transpose(omega) == tuple(tuple(-x for x in row) for row in omega)


def test_moves_preserve_marking(genus2):
    m = tautological_marking(genus2)
    for e in range(genus2.edge_count):
        if genus2.is_loop(e):
            continue
        moved = apply_move(m, whitehead_move(genus2, e))
        assert moved.is_valid()
        assert moved.form == m.form


def test_broken_vertex_condition_is_reported(theta):
    m = tautological_marking(theta)
    values = list(m.values)
    values[1] = tuple(x + 1 for x in values[1])
    broken = type(m)(graph=theta, values=tuple(values), dim=2, form=m.form)
    assert not broken.is_valid()
    with pytest.raises(InvalidMarking):
        broken.validate()


def test_reduce_mod(theta):
    m = reduce_mod(tautological_marking(theta), 3)
    assert isinstance(m, LevelNMarking)
    assert m.modulus == 3
    assert all(0 <= x < 3 for v in m.values for x in v)
    assert m.is_valid()
    with pytest.raises(InvalidModulus):
        reduce_mod(tautological_marking(theta), 1)


def test_sp_order_small_cases():
    assert sp_order(1, 2) == 6
    assert sp_order(1, 3) == 24
    assert sp_order(2, 2) == 720


def test_symplectic_basis_reaches_standard_form(genus2):
    omega = intersection_form(genus2)
    P = symplectic_basis(omega)
    assert mat_mul(mat_mul(transpose(P), omega), P) == standard_form(2)


def test_sp_generators_preserve_form(genus2):
    omega = intersection_form(genus2)
    for M in sp_generators(omega):
        assert is_symplectic(M, omega)


def test_random_symplectic_is_symplectic():
    for seed in range(5):
        M = random_symplectic(2, seed=seed)
        assert is_symplectic(M, standard_form(2))
    assert random_symplectic(2, seed=1, steps=0) == identity(4)


def test_induced_basis_change_recovers_matrix(genus2):
    m = tautological_marking(genus2)
    M = random_symplectic(2, seed=7, omega=m.form)
    moved = m.transform(M)
    assert induced_basis_change(m, moved, tuple(range(genus2.dart_count))) == M
