"""The ten acceptance criteria at full size, one test each.

Each test prints a PASS/FAIL line; the lines are repeated in the terminal
summary so they show up without ``-s``.
"""

import pytest

from btsteinberg import acceptance


@pytest.mark.parametrize("number", [k for k, _ in acceptance.CHECKS])
def test_criterion(number, acceptance_log):
    r = acceptance.run_check(number, seed=acceptance.DEFAULT_SEED)
    flag = "PASS" if r["pass"] else "FAIL"
    line = f"criterion {int(number):2d} {flag}  {r['name']}  ({r['seconds']:.1f}s)"
    acceptance_log[int(number)] = line
    print(line)
    assert r["pass"], f"expected {r['expected']!r}, got {r['got']!r}"
