#!/usr/bin/env python3

import logging
import os
import traceback
from dataclasses import dataclass
from typing import Optional

from celery import Celery

from krullkit import checks

log = logging.getLogger(__name__)


@dataclass
class CheckTaskResult:
    error: Optional[str]
    name: str
    seed: int
    result: Optional[checks.CheckResult]


redis_url = f'redis://{os.environ.get("REDIS", "localhost")}'
app = Celery('worker', backend=redis_url, broker=redis_url)
app.conf.task_serializer = 'pickle'
app.conf.result_serializer = 'pickle'
app.conf.accept_content = ['application/json', 'application/x-python-serialize']


@app.task
def run_check(name: str, seed: int, count: int) -> CheckTaskResult:
    try:
        log.debug('Running %s (seed %d, %d instances)', name, seed, count)
        return CheckTaskResult(None, name, seed, checks.run_check(name, seed=seed, count=count))
    except BaseException as e:
        tb = ''.join(traceback.format_exception(e))
        log.exception('Error in run_check.')
        return CheckTaskResult(tb, name, seed, None)
