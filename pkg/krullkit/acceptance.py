#!/usr/bin/env python3

"""Runs the cross-checks at full size, locally or on Celery workers."""

import json
import logging
import os
import sys
import time
from datetime import timedelta

import hydra
from omegaconf import DictConfig, OmegaConf
from tqdm import tqdm

from krullkit import checks, worker
from krullkit.util import save_json, time_limit

log = logging.getLogger(__name__)


DISTRIBUTED = os.environ.get('DISTRIBUTED', False)


def submit_task(name: str, seed: int, count: int, timeout: int = 0):
    if DISTRIBUTED:
        return worker.run_check.apply_async((name, seed, count))
    if not timeout:
        return worker.run_check.run(name, seed, count)
    try:
        with time_limit(timeout):
            return worker.run_check.run(name, seed, count)
    except TimeoutError:
        return worker.CheckTaskResult(f'Timed out after {timeout}s', name, seed, None)


def get_task_result(task) -> worker.CheckTaskResult:
    if DISTRIBUTED:
        return task.get()
    else:
        return task


def chunks(count: int, chunk_size: int) -> list[int]:
    'Splits count instances into chunks of at most chunk_size.'
    if count <= chunk_size:
        return [count]
    full, rest = divmod(count, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_acceptance(cfg: DictConfig) -> dict:
    log.info('Running in %s', 'distributed mode.' if DISTRIBUTED else 'single-process mode.')
    names = list(cfg.checks) if cfg.get('checks') else list(checks.CHECKS)

    tasks = []
    for name in names:
        count = cfg.counts.get(name)
        if count is None:
            count = checks.CHECKS[name][1]
        for k, size in enumerate(chunks(count, cfg.chunk_size)):
            # One seed per chunk so chunks draw different instances.
            tasks.append((name, cfg.seed + k, size))

    log.info('Submitting %d tasks for %d checks.', len(tasks), len(names))
    submitted = [(name, submit_task(name, seed, size, cfg.timeout)) for name, seed, size in tasks]

    results = {}
    with open('log.jsonl', 'w') as log_file:
        for name, task in tqdm(submitted, desc='checks'):
            task_result = get_task_result(task)

            if task_result.error:
                log.error('Error in check %s (seed %d)!', name, task_result.seed)
                log.error(task_result.error)
                result = checks.CheckResult(name, 0, 1, [task_result.error.splitlines()[-1]])
            else:
                result = task_result.result

            log_file.write(json.dumps({'seed': task_result.seed, **result.to_json()}))
            log_file.write('\n')
            log_file.flush()

            results[name] = results[name].merge(result) if name in results else result
            if cfg.fail_fast and not result.ok:
                log.warning('Stopping after failed check %s.', name)
                break

    summary = {name: r.to_json() for name, r in results.items()}
    save_json(summary, 'summary.json')
    for name, r in results.items():
        level = logging.INFO if r.ok else logging.WARNING
        log.log(level, '%-20s %d/%d', name, r.passed, r.total)
    return summary


def failed_checks(summary: dict) -> list[str]:
    return [name for name, r in summary.items() if not r['ok']]


@hydra.main(version_base="1.2", config_path="config", config_name="acceptance")
def main(cfg: DictConfig):
    log.info('Running from: %s', os.getcwd())
    log.debug('Configuration:\n%s', OmegaConf.to_yaml(cfg))
    begin = time.perf_counter()
    summary = run_acceptance(cfg)
    failed = failed_checks(summary)
    log.info('Finished in %s; %d/%d checks passed.', timedelta(seconds=time.perf_counter() - begin),
             len(summary) - len(failed), len(summary))
    if failed:
        log.error('Failed checks: %s', ', '.join(failed))
        sys.exit(1)


if __name__ == '__main__':
    main()
