"""
Census jobs: one enumeration, optionally written to a file and stored in
the database.  Shared by the Celery task and the inline fallback.
"""

from typing import Any, Dict, Optional

from ..errors import TorelliLabError
from ..log import log
from .enumerate import enumerate_levelN, enumerate_unmarked
from .records import OrbitDatabase


def run_census_job(
    task_self: Any,
    g: int,
    modulus: Optional[int] = None,
    max_codim: Optional[int] = None,
    jobs: int = 1,
    output: Optional[str] = None,
    store: bool = True,
) -> Dict[str, Any]:
    """
    Enumerate and persist one census.

    Returns:
        Dict with status, record counts per codimension, run_id, output path
        and any error message
    """
    result = {
        'status': 'started',
        'g': g,
        'modulus': modulus,
        'records': 0,
        'counts': {},
        'run_id': None,
        'output': output,
        'error': None,
    }

    def update_task_state(state: str, meta: Dict[str, Any]):
        if task_self is not None and hasattr(task_self, 'update_state'):
            task_self.update_state(state=state, meta=meta)

    def checkpoint(db: OrbitDatabase, note: str):
        if output:
            db.save(output, note)
        update_task_state('PROGRESS', {**result, 'status': note, 'records': len(db)})

    try:
        update_task_state('PROGRESS', {**result, 'status': 'enumerating'})
        if modulus:
            db = enumerate_levelN(g, modulus, max_codim, jobs=jobs, checkpoint=checkpoint)
        else:
            db = enumerate_unmarked(g, 2 if max_codim is None else max_codim, jobs=jobs, checkpoint=checkpoint)

        if output:
            db.save(output)
        if store:
            from ..database import init_database, save_census
            init_database()
            result['run_id'] = save_census(db)

        result['records'] = len(db)
        result['counts'] = {str(c): n for c, n in db.counts().items()}
        result['status'] = 'completed'
        log(f"✅ Census job complete: g={g} modulus={modulus} {result['counts']}")
        return result

    except TorelliLabError as e:
        result['status'] = 'failed'
        result['error'] = f"{type(e).__name__}: {e}"
        log(f"❌ Census job failed: {e}")
        return result
