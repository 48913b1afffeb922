import pytest

from torelli_lab.census import enumerate_levelN, enumerate_unmarked, orbifold_euler
from torelli_lab.census.jobs import run_census_job
from torelli_lab.errors import InputError
from torelli_lab.models import CensusCell, CensusRun


def test_connection(census_db):
    assert census_db.check_database_connection()
    assert census_db.get_database_url().startswith("sqlite")


def test_save_and_load_census(census_db):
    db = enumerate_unmarked(1)
    run_id = census_db.save_census(db)
    again = census_db.load_census(run_id)
    assert again.complete
    assert again.counts() == db.counts()
    for record in db:
        other = again.get(record.key)
        assert other.aut_count == record.aut_count
        assert other.faces == record.faces
        assert other.cofaces == record.cofaces
        assert other.representative == record.representative
    assert orbifold_euler(again) == orbifold_euler(db)


def test_level_census_keeps_form_and_labels(census_db):
    db = enumerate_levelN(1, 2)
    again = census_db.load_census(census_db.save_census(db))
    assert again.modulus == 2
    assert again.form == db.form
    assert [r.labels for r in again] == [r.labels for r in db]


def test_rows_written(census_db):
    run_id = census_db.save_census(enumerate_unmarked(1))
    with census_db.get_db_session() as session:
        run = session.get(CensusRun, run_id)
        assert run.g == 1
        assert run.marking_type == "unmarked"
        assert session.query(CensusCell).filter_by(run_id=run_id).count() == 2


def test_missing_run(census_db):
    with pytest.raises(InputError):
        census_db.load_census(12345)


def test_census_job_inline(census_db, tmp_path):
    output = tmp_path / "torus.census"
    result = run_census_job(None, 1, output=str(output), store=True)
    assert result["status"] == "completed"
    assert result["counts"] == {"0": 1, "1": 1}
    assert result["run_id"] is not None
    assert output.read_text().startswith("census g=1")


def test_census_job_reports_failure():
    result = run_census_job(None, 0, store=False)
    assert result["status"] == "failed"
    assert result["error"]


def test_submit_runs_inline_without_broker(census_db):
    from torelli_lab.tasks import census_task, submit_census

    assert census_task is None
    result = submit_census(1, modulus=2, store=False)
    assert result["status"] == "completed"
    assert result["counts"] == {"0": 2, "1": 3}


def test_celery_switch_is_honoured(monkeypatch):
    from torelli_lab import celery_app

    monkeypatch.setenv("CELERY_ENABLED", "off")
    monkeypatch.setattr(celery_app, "_broker_answers", lambda: True)
    celery_app.is_celery_available.cache_clear()
    try:
        assert celery_app.is_celery_available() is False
    finally:
        celery_app.is_celery_available.cache_clear()
