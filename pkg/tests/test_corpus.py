import pytest

from torelli_lab.corpus import (
    CORPUS,
    PENTAGON_CUP_SQUARE,
    PENTAGON_CUP_SQUARE_ELIMINATED,
    PENTAGON_CUP_SQUARE_ELIMINATED_READING,
    PENTAGON_DERIVED,
    FormulaError,
    Identity,
    IdentityFailure,
    basis_point,
    evaluate,
    linear_vector,
    random_points,
    verify_identity_corpus,
)
from torelli_lab.exterior import MultiWedge, wedge3


def test_corpus_holds():
    report = verify_identity_corpus(points=100, seed=5)
    assert report.ok
    assert len(report.rows) == len(CORPUS) == 9
    assert all(row.points == 101 for row in report.rows)
    assert report.as_dict()["ok"] is True


def test_corpus_claims():
    claims = [identity.claim for identity in CORPUS]
    assert claims[:4] == ["2*a^b^c"] * 3 + ["6*a^b^c"]
    assert claims[4:6] == ["0", "0"]
    assert claims[7] == "printed form + 2*abc^bcd"


def test_literal_eliminated_form_is_off_by_two_abc_bcd():
    literal = Identity("literal", PENTAGON_CUP_SQUARE, PENTAGON_CUP_SQUARE_ELIMINATED, "printed j^2",
                       PENTAGON_DERIVED)
    report = verify_identity_corpus(points=3, strict=False, identities=(literal,))
    assert not report.ok
    assert report.rows[0].status == "failed"
    with pytest.raises(IdentityFailure):
        verify_identity_corpus(points=3, identities=(literal,))

    env = basis_point()
    env["e"] = linear_vector("-(a+b+c+d)", env)
    difference = evaluate(PENTAGON_CUP_SQUARE, env) - evaluate(PENTAGON_CUP_SQUARE_ELIMINATED, env)
    assert difference == evaluate("2{abc^bcd}", env)
    assert evaluate(PENTAGON_CUP_SQUARE_ELIMINATED_READING, env) == evaluate(PENTAGON_CUP_SQUARE, env)


def test_cba_term_vanishes():
    env = basis_point()
    assert evaluate("cba^abc", env).is_zero()


def test_evaluate_products():
    env = basis_point()
    a, b, c, d = (env[k] for k in "abcd")
    assert evaluate("abc", env) == wedge3(a, b, c)
    assert evaluate("-(a+d)^b^c", env) == -(wedge3(a, b, c) + wedge3(d, b, c))
    six = evaluate("abc^bcd", env)
    assert isinstance(six, MultiWedge)
    assert six.grade == 2


def test_linear_vector():
    env = basis_point()
    assert linear_vector("-(a+b+c+d)", env) == (-1, -1, -1, -1)
    assert linear_vector("2a-c", env) == (2, 0, -1, 0)


@pytest.mark.parametrize("formula", ["ab", "a^^b", "abc +", "(ab)^c^d"])
def test_malformed_formulas(formula):
    with pytest.raises(FormulaError):
        evaluate(formula, basis_point())


def test_random_points_are_seeded():
    assert random_points(3, seed=1) == random_points(3, seed=1)
    assert random_points(3, seed=1) != random_points(3, seed=2)
