"""Full acceptance run: every criterion at its stated tolerance and budget.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.
"""

import pytest

from svgeom.selftest import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA,
                         ids=[c.__name__.removeprefix("criterion_")
                              for c in CRITERIA])
def test_acceptance(criterion):
    result = criterion(full=True)
    print(result.line())
    assert result.passed, result.line()
    assert result.seconds < result.limit, result.line()
