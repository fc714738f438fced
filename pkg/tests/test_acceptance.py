"""The twelve acceptance criteria, one test each, at their stated tolerances.

Each test prints a PASS/FAIL line; the lines are repeated in the terminal
summary of every pytest run and by ``cdvcalc verify-paper``.
"""

import pytest

from cdvcalc.corpus import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_lines):
    _, check = CRITERIA[number]
    result = check(seed=0)
    print(result.line())
    acceptance_lines.append(result.line())
    failures = [d for d in result.details if not d.startswith("ok: ")]
    assert result.passed, "\n".join(failures)
