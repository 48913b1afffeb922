"""Celery tasks for census enumeration."""

from typing import Any, Dict, Optional

from torelli_lab.celery_app import celery_app
from torelli_lab.census.jobs import run_census_job


@celery_app.task(bind=True, name='census.enumerate')
def census_task(
    self,
    g: int,
    modulus: Optional[int] = None,
    max_codim: Optional[int] = None,
    jobs: int = 1,
    output: Optional[str] = None,
    store: bool = True,
) -> Dict[str, Any]:
    """Celery wrapper around run_census_job; use .delay() or .apply_async()."""
    return run_census_job(self, g, modulus=modulus, max_codim=max_codim,
                          jobs=jobs, output=output, store=store)


@celery_app.task(name='census.get_job_status')
def get_census_job_status(task_id: str) -> Dict[str, Any]:
    """Status of a queued census job by task ID."""
    from celery.result import AsyncResult

    result = AsyncResult(task_id, app=celery_app)

    status = {
        'task_id': task_id,
        'state': result.state,
        'ready': result.ready(),
        'successful': result.successful() if result.ready() else None,
        'result': None,
        'error': None
    }

    if result.ready():
        if result.successful():
            status['result'] = result.result
        else:
            status['error'] = str(result.result)
    elif result.state == 'PROGRESS':
        status['result'] = result.info

    return status
