"""
Background census jobs.

Usage:
    from torelli_lab.tasks import submit_census

    ticket = submit_census(g=2, max_codim=5)
    if ticket.get('task_id'):
        ...  # poll get_census_job_status
"""

from typing import Any, Dict, Optional

from torelli_lab.celery_app import is_celery_available
from torelli_lab.census.jobs import run_census_job
from torelli_lab.log import log

if is_celery_available():
    from .census import census_task, get_census_job_status
else:
    census_task = None
    get_census_job_status = None


def submit_census(g: int, modulus: Optional[int] = None, max_codim: Optional[int] = None,
                  jobs: int = 1, output: Optional[str] = None, store: bool = True) -> Dict[str, Any]:
    """Queue a census on the worker pool, or run it here when no broker is reachable."""
    if census_task is not None:
        async_result = census_task.delay(g, modulus, max_codim, jobs, output, store)
        log(f"Queued census job {async_result.id} (g={g}, modulus={modulus})")
        return {'status': 'queued', 'task_id': async_result.id}
    return run_census_job(None, g, modulus=modulus, max_codim=max_codim,
                          jobs=jobs, output=output, store=store)


__all__ = ['census_task', 'get_census_job_status', 'submit_census', 'is_celery_available']
