"""Acceptance gate: runs the ten criteria once and reports one line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the report, or use
``tropbun suite run`` for the same checks from the command line.
"""

import pytest

from tropbun.suite import CRITERIA, run_suite


@pytest.fixture(scope="module")
def results():
    out = {}
    for result in run_suite():
        print(result.line(), flush=True)
        out[result.number] = result
    return out


def test_every_criterion_reported(results):
    assert sorted(results) == sorted(CRITERIA) == list(range(1, 11))


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(results, number):
    result = results[number]
    print(result.line())
    assert result.ok, result.detail
    assert result.passed, f"took {result.seconds:.1f}s, budget {result.budget}s"
