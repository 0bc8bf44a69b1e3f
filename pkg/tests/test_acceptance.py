"""Acceptance gate: each criterion runs at its stated tolerance and
time budget, printing one pass/fail line (run pytest with -s or check
the captured output on failure)."""

import pytest

from cknlab.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize(
    "index,description",
    [(idx, desc) for idx, desc, *_ in CRITERIA],
    ids=[f"criterion_{idx:02d}" for idx, *_ in CRITERIA],
)
def test_acceptance_criterion(index, description):
    result = run_criterion(index)
    status = "PASS" if result.passed else "FAIL"
    print(
        f"criterion {result.index:2d} {status} ({result.seconds:7.3f}s) "
        f"{result.description}: {result.detail}"
    )
    assert result.passed, f"criterion {index} ({description}): {result.detail}"
