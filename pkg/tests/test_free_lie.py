import random

import pytest

from torelli_lab.errors import InputError
from torelli_lab.nilpotent.lie import (
    LieElement,
    NotInGammaK,
    NotLieElement,
    free_lie_rank,
    leading_lie_term,
    lie_coordinates,
    lyndon_basis,
    lyndon_bracket,
    surface_rank,
)
from torelli_lab.nilpotent.magnus import free_nilpotent_equal, in_gamma, magnus
from torelli_lab.nilpotent.words import FreeWord, commutator

x1 = FreeWord.generator(1, 2)
x2 = FreeWord.generator(2, 2)


def test_word_text():
    w = FreeWord.parse("x1 X2 x1", 2)
    assert w.letters == (1, -2, 1)
    assert str(w) == "x1 X2 x1"
    assert str(FreeWord.identity(2)) == "1"
    assert FreeWord.parse("1", 2).is_identity()


@pytest.mark.parametrize("text", ["y1", "x", "x3", "xa"])
def test_bad_words(text):
    with pytest.raises(InputError):
        FreeWord.parse(text, 2)


def test_free_reduction():
    assert FreeWord((1, -1, 2), 2).letters == (2,)
    assert (x1 * x1.inverse()).is_identity()
    assert (x1 * x2) ** -1 == x2.inverse() * x1.inverse()
    assert (x1 ** 3).letters == (1, 1, 1)


def test_commutator_and_conjugacy():
    c = commutator(x1, x2)
    assert str(c) == "x1 x2 X1 X2"
    assert c.exponent_sums() == (0, 0)
    assert (x1 * x2).is_conjugate(x2 * x1)
    assert not x1.is_conjugate(x2)
    assert FreeWord.parse("x2 x1 X2", 2).cyclically_reduced() == x1
    assert c.conjugate(x2).is_conjugate(c)


def test_magnus_expansion():
    assert magnus(x1, 2).terms == {(): 1, (1,): 1}
    inverse = magnus(x1.inverse(), 3)
    assert [inverse.coefficient((1,) * n) for n in range(4)] == [1, -1, 1, -1]
    assert magnus(x1 * x1.inverse(), 4).is_one()
    series = magnus(commutator(x1, x2), 2)
    assert series.component(2) == {(1, 2): 1, (2, 1): -1}
    assert series.lowest_degree() == 2
    with pytest.raises(InputError):
        magnus(x1, 0)


def _random_word(rng, rank, max_length):
    letters = [rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(rng.randint(0, max_length))]
    return FreeWord(tuple(letters), rank)


def test_magnus_is_multiplicative():
    rng = random.Random(7)
    for _ in range(1000):
        u = _random_word(rng, 3, 6)
        v = _random_word(rng, 3, 6)
        assert magnus(u * v, 4) == magnus(u, 4) * magnus(v, 4)


def test_lower_central_series():
    c = commutator(x1, x2)
    assert in_gamma(c, 1)
    assert not in_gamma(c, 2)
    assert not in_gamma(x1, 1)
    assert in_gamma(commutator(c, x1), 2)
    assert free_nilpotent_equal(x1 * x2, x2 * x1, 1)
    assert not free_nilpotent_equal(x1 * x2, x2 * x1, 2)


def test_witt_and_surface_ranks():
    assert [free_lie_rank(2, n) for n in range(1, 6)] == [2, 1, 2, 3, 6]
    assert free_lie_rank(4, 2) == 6
    assert free_lie_rank(4, 3) == 20
    assert surface_rank(1, 2) == 0
    assert surface_rank(2, 2) == 5
    assert surface_rank(2, 3) == 16
    for g in (1, 2, 3):
        assert surface_rank(g, 1) == 2 * g


def test_lyndon_basis():
    assert lyndon_basis(2, 3) == ((1, 1, 2), (1, 2, 2))
    for r in (2, 3, 4):
        for n in range(1, 5):
            assert len(lyndon_basis(r, n)) == free_lie_rank(r, n)
    assert lyndon_bracket((1, 1, 2)) == "[x1,[x1,x2]]"


def test_lie_elements():
    a, b = LieElement.generator(1, 2), LieElement.generator(2, 2)
    ab = a.bracket(b)
    assert ab == LieElement.basis_element((1, 2), 2)
    assert b.bracket(a) == -ab
    assert (ab - ab).is_zero()
    assert ab.as_dict() == {"[x1,x2]": 1}
    with pytest.raises(NotLieElement):
        lie_coordinates({(2, 1): 1}, 2, 2)
    with pytest.raises(InputError):
        LieElement(2, 2, (1, 0))


def test_leading_lie_term():
    assert leading_lie_term(commutator(x1, x2), 1) == LieElement.basis_element((1, 2), 2)
    assert leading_lie_term(commutator(commutator(x1, x2), x1), 1).is_zero()
    with pytest.raises(NotInGammaK):
        leading_lie_term(x1, 1)
