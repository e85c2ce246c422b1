"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a criterion block, record its outcome and fail if it exceeds ``limit`` seconds."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"criterion {number}: FAIL  {title} ({elapsed:.1f}s; {type(exc).__name__}: {exc})"
        LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= limit:
        line = f"criterion {number}: FAIL  {title} ({elapsed:.1f}s exceeds {limit:g}s)"
        LINES.append(line)
        print(line)
        raise AssertionError(line)
    line = f"criterion {number}: PASS  {title} ({elapsed:.1f}s)"
    LINES.append(line)
    print(line)
