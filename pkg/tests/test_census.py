from fractions import Fraction

import pytest

from torelli_lab.census import (
    IncompleteCensus,
    OpaqueKind,
    OrbitDatabase,
    RelationKind,
    SeedInvalid,
    enumerate_levelN,
    enumerate_unmarked,
    expected_euler,
    extract_presentation,
    fiber_sizes,
    fibers_divide_group_order,
    orbifold_euler,
    sp_closure_check,
    torelli_word_search,
)
from torelli_lab.cocycle import j_path
from torelli_lab.errors import InputError, ParseError
from torelli_lab.fatgraph import canonical_form, seed_spine, whitehead_move
from torelli_lab.marking import tautological_marking
from torelli_lab.nilpotent.markings import lambda_k, quotient_for


@pytest.fixture(scope="module")
def torus():
    return enumerate_unmarked(1)


def test_torus_census(torus):
    assert torus.counts() == {0: 1, 1: 1}
    (theta,) = torus.by_codim(0)
    (eight,) = torus.by_codim(1)
    assert theta.aut_count == 6
    assert eight.aut_count == 4
    assert theta.faces == {eight.key: 3}
    assert eight.cofaces == {theta.key: 2}
    assert theta.key == canonical_form(seed_spine(1)).key


def test_torus_euler_characteristic(torus):
    assert orbifold_euler(torus) == Fraction(-1, 12)
    assert expected_euler(1) == Fraction(-1, 12)
    assert expected_euler(2) == Fraction(1, 120)


@pytest.mark.parametrize("N, counts, aut, chi", [
    (2, {0: 2, 1: 3}, 2, Fraction(-1, 2)),
    (3, {0: 4, 1: 6}, 1, Fraction(-2)),
])
def test_torus_level_censuses(N, counts, aut, chi):
    db = enumerate_levelN(1, N)
    assert db.modulus == N
    assert db.form is not None
    assert db.counts() == counts
    assert {r.aut_count for r in db} == {aut}
    assert orbifold_euler(db) == chi == expected_euler(1, N)
    assert sp_closure_check(db).ok
    assert fibers_divide_group_order(db)
    assert sorted(fiber_sizes(db).values()) == sorted(counts.values())


def test_incidence_is_symmetric(torus):
    for record in torus:
        for key in record.faces:
            assert record.key in torus.get(key).cofaces
        for key in record.cofaces:
            assert record.key in torus.get(key).faces


def test_text_round_trip(torus):
    again = OrbitDatabase.from_text(torus.to_text())
    assert again.counts() == torus.counts()
    for record in torus:
        other = again.get(record.key)
        assert other.faces == record.faces
        assert other.cofaces == record.cofaces
        assert other.representative == record.representative


def test_checkpoint_marker_is_skipped(torus, tmp_path):
    path = tmp_path / "torus.census"
    torus.save(str(path), note="checkpoint records=2")
    assert path.read_text().endswith("# checkpoint records=2\n")
    assert OrbitDatabase.load(str(path)).counts() == torus.counts()


def test_text_database_rejects_garbage():
    with pytest.raises(ParseError):
        OrbitDatabase.from_text("not a census\n")
    with pytest.raises(ParseError):
        OrbitDatabase.from_text("census g=1 type=unmarked max_codim=1\nkey x 1 :\n")


def test_reinsert_is_idempotent(torus):
    record = next(iter(torus))
    assert not torus.insert(record)


def test_bad_seeds(theta):
    with pytest.raises(SeedInvalid):
        enumerate_unmarked(0)
    with pytest.raises(SeedInvalid):
        enumerate_unmarked(2, seed=theta)


def test_euler_needs_full_census():
    with pytest.raises(IncompleteCensus):
        orbifold_euler(OrbitDatabase(1))
    with pytest.raises(IncompleteCensus):
        orbifold_euler(enumerate_unmarked(2, max_codim=1))


def test_torus_presentation(torus):
    report = extract_presentation(torus)
    counts = report.counts()
    assert counts["generators"] == 1
    assert counts[RelationKind.INVOLUTIVITY.value] == 1
    assert counts[RelationKind.PENTAGON.value] == 0
    assert {o.kind for o in report.opaque} == {OpaqueKind.JOHNSON, OpaqueKind.SYMPLECTIC}


def test_presentation_fills_opaque_slots(torus):
    report = extract_presentation(torus, extra=[("johnson", 0, "move 0\n")])
    assert report.opaque[0].filled
    with pytest.raises(InputError):
        extract_presentation(torus, extra=[("johnson", 9, "move 0\n")])


@pytest.mark.slow
def test_genus2_presentation():
    db = enumerate_unmarked(2, max_codim=2)
    report = extract_presentation(db)
    counts = report.counts()
    assert counts[RelationKind.INVOLUTIVITY.value] == counts["generators"] == len(db.by_codim(1))
    assert counts[RelationKind.PENTAGON.value] + counts[RelationKind.COMMUTATIVITY.value] == len(db.by_codim(2))
    assert counts[RelationKind.PENTAGON.value] > 0
    assert sum(o.kind is OpaqueKind.SEPARATING_TWIST for o in report.opaque) == 1
    for relation in report.relations:
        if relation.kind is RelationKind.PENTAGON:
            assert len(relation.generators) == 5
        elif relation.kind is RelationKind.COMMUTATIVITY:
            assert len(relation.loci) == 2


@pytest.mark.slow
def test_genus2_euler_characteristic():
    assert orbifold_euler(enumerate_unmarked(2, max_codim=5)) == Fraction(1, 120)


def test_torelli_word_search(theta):
    words = torelli_word_search(None, 2, start=(theta, tautological_marking(theta)))
    assert len(words[0]) == 0
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    for word in words:
        assert word.sequence.is_torelli
        assert len(word) <= 2


@pytest.mark.slow
def test_census_does_not_depend_on_the_seed(genus2):
    e = next(e for e in range(genus2.edge_count) if not genus2.is_loop(e))
    moved = whitehead_move(genus2, e).graph
    first = enumerate_unmarked(2, max_codim=2)
    second = enumerate_unmarked(2, max_codim=2, seed=moved)
    assert second.counts() == first.counts()
    assert {r.key for r in second} == {r.key for r in first}


def test_genus2_torelli_words(genus2, fresh_table_cache):
    words = torelli_word_search(None, 4, start=(genus2, tautological_marking(genus2)), with_pi=True)
    assert len(words) > 1
    q = quotient_for(words[0].sequence.pi_marking, 3)
    for word in words:
        s = word.sequence
        assert s.is_torelli
        assert all(c % 6 == 0 for _, c in j_path(s).terms)
        for k in (1, 2):
            lam = lambda_k(s, k, q)
            assert all(total.is_zero() for total in lam.vertex_sums())


def test_torelli_word_search_arguments(torus):
    with pytest.raises(InputError):
        torelli_word_search(torus, -1)
    with pytest.raises(InputError):
        torelli_word_search(None, 1)
    words = torelli_word_search(torus, 0)
    assert len(words) == 1
