"""The ten acceptance criteria, one test each, at their stated tolerances."""

import json

import pytest

from orthoposet.verify import CHECKS, run_check


@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1), ids=[f"c{k:02d}" for k in range(1, len(CHECKS) + 1)])
def test_criterion(number, acceptance_log):
    result = run_check(number)
    acceptance_log[number] = result.line()
    print(result.line())
    assert result.passed, json.dumps(result.detail, default=str, indent=1)[:4000]
