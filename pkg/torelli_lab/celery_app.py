"""
Celery application for long census runs.

Optional: without celery installed, with CELERY_ENABLED=false, or without a
reachable broker, `torelli_lab.tasks.submit_census` runs the job inline.

Worker:
    CELERY_BROKER_URL=redis://localhost:6379/0 \
        celery -A torelli_lab.celery_app worker --loglevel=info
"""

import os
from functools import lru_cache

try:
    from celery import Celery
    CELERY_AVAILABLE = True
except ImportError:
    CELERY_AVAILABLE = False
    Celery = None

CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', CELERY_BROKER_URL)


def _broker_answers() -> bool:
    try:
        import redis
        return bool(redis.from_url(CELERY_BROKER_URL, socket_connect_timeout=1).ping())
    except Exception:
        return False


@lru_cache(maxsize=1)
def is_celery_available() -> bool:
    """Celery importable, not switched off, and the broker answers a ping. Checked once."""
    if not CELERY_AVAILABLE:
        return False
    if os.environ.get('CELERY_ENABLED', '').lower() in ('false', '0', 'no', 'off'):
        return False
    return _broker_answers()


celery_app = None

if CELERY_AVAILABLE:
    celery_app = Celery(
        'torelli_lab',
        broker=CELERY_BROKER_URL,
        backend=CELERY_RESULT_BACKEND,
        include=['torelli_lab.tasks.census'],
    )
    celery_app.conf.update(
        task_serializer='json',
        accept_content=['json'],
        result_serializer='json',
        task_acks_late=True,
        task_reject_on_worker_lost=True,
        # genus-3 collapses run for hours
        task_time_limit=12 * 3600,
        worker_prefetch_multiplier=1,
        result_expires=7 * 86400,
    )
