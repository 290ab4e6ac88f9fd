"""End-to-end acceptance criteria at their stated tolerances and time limits.

Each criterion prints one ``[PASS]``/``[FAIL]`` line; the lines are also
collected into an "acceptance criteria" section of the pytest summary.
"""

import pytest

from wavehdc.experiments.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CRITERIA])
def test_acceptance_criterion(number, acceptance_lines, capsys):
    result = run_criterion(number, seed=42)
    line = result.line()
    acceptance_lines.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, line
    assert result.within_time, f"runtime {result.runtime:.1f}s exceeds {result.limit:g}s"
