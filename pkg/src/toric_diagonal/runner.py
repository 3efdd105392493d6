"""Suite execution.

This module provides :func:`run_suite`, which runs the checks of one
suite (or of every suite) under a per-suite time budget and a worker
pool of ``config.jobs`` threads, and assembles a
:class:`~toric_diagonal.models.VerificationReport` ordered by
``claim_id``.

Usage::

    from toric_diagonal.config import load_config
    from toric_diagonal.runner import run_suite

    report = run_suite("algebra", load_config())
    print(report.counts())
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from toric_diagonal.config import VerificationConfig
from toric_diagonal.models import SUITES, CaseResult, Status, VerificationReport
from toric_diagonal.progress import ProgressReporter
from toric_diagonal.suites import Check, CheckContext, checks_for

logger = logging.getLogger(__name__)

#: Witness of a check that was never started.
BUDGET_EXHAUSTED = {"reason": "time budget exhausted"}


def run_check(check: Check, config: VerificationConfig) -> CaseResult:
    """Run one check and convert its outcome into a :class:`CaseResult`.

    ``ValueError`` and ``RuntimeError`` (which includes
    :class:`~toric_diagonal.toric.GrowthCapExceeded`) raised by the
    check are reported as a failure carrying the error message.
    """
    ctx = CheckContext.for_claim(config, check.claim_id)
    started = time.perf_counter()
    try:
        outcome = check.run(ctx)
    except (ValueError, RuntimeError) as exc:
        logger.warning("Check %s raised %s: %s", check.claim_id, type(exc).__name__, exc)
        return CaseResult(
            claim_id=check.claim_id,
            anchor=check.anchor,
            parameters={"samples": ctx.samples},
            status=Status.FAIL,
            witness={"error": f"{type(exc).__name__}: {exc}"},
            elapsed=time.perf_counter() - started,
        )
    if outcome.skipped:
        status = Status.SKIPPED
    else:
        status = Status.PASS if outcome.ok else Status.FAIL
    return CaseResult(
        claim_id=check.claim_id,
        anchor=check.anchor,
        parameters=outcome.parameters,
        status=status,
        witness=outcome.witness,
        elapsed=time.perf_counter() - started,
    )


def _run_one_suite(
    suite: str, config: VerificationConfig, progress: ProgressReporter
) -> List[CaseResult]:
    checks = checks_for(suite, config)
    deadline = time.monotonic() + config.time_budget
    progress.start(len(checks), suite)
    logger.debug("Running suite %s: %d checks, budget %.1fs", suite, len(checks),
                 config.time_budget)

    def task(check: Check) -> CaseResult:
        if time.monotonic() > deadline:
            logger.warning("Suite %s: skipping %s, time budget exhausted",
                           suite, check.claim_id)
            result = CaseResult(check.claim_id, check.anchor, {},
                                Status.SKIPPED, dict(BUDGET_EXHAUSTED))
        else:
            result = run_check(check, config)
        progress.advance(f"{check.claim_id}: {result.status.value}")
        return result

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = list(pool.map(task, checks))
    logger.debug("Suite %s finished: %s", suite,
                 ", ".join(f"{r.claim_id}={r.status.value}" for r in results))
    return results


def run_suite(
    suite: str,
    config: VerificationConfig,
    progress: Optional[ProgressReporter] = None,
) -> VerificationReport:
    """Run *suite* (or ``"all"``) and return its report.

    Args:
        suite: One of :data:`~toric_diagonal.models.SUITES` or ``"all"``.
        config: Verification settings.
        progress: Optional reporter receiving one step per check.

    Returns:
        A :class:`VerificationReport` whose cases are sorted by
        ``claim_id``.

    Raises:
        ValueError: On an unknown suite name.
    """
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(
            f"Unknown suite {suite!r}; expected 'all' or one of {', '.join(SUITES)}"
        )
    progress = progress or ProgressReporter()

    started = time.perf_counter()
    cases: List[CaseResult] = []
    try:
        for name in names:
            cases.extend(_run_one_suite(name, config, progress))
    finally:
        progress.close()

    return VerificationReport(
        suite=suite,
        seed=config.seed,
        parameters=config.to_dict(),
        cases=sorted(cases, key=lambda c: c.claim_id),
        elapsed=time.perf_counter() - started,
    )
