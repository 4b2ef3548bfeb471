"""Acceptance gate: every criterion at its stated tolerance, one line each."""

import pytest

from purex import validation


@pytest.mark.parametrize(
    "criterion", validation.ALL_CRITERIA, ids=lambda c: c.__name__
)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
