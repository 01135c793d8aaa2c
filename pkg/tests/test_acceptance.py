"""Acceptance gate: every packaged verification check must pass.

Each check re-derives a target value through an independent route (closed
form, dual quadrature, or frozen reference number) and compares at its own
stated tolerance.  One line is printed per check; run with ``-v -s`` to see
them all, or ``isomean verify`` for the same table outside pytest.
"""
import pytest

from isomean.verify import GROUPS, report, run_checks


@pytest.mark.parametrize("group", GROUPS)
def test_verification_group(group):
    results = run_checks(only=group)
    assert results, f"group {group} produced no checks"
    for c in results:
        print(c.line())
    failures = [c for c in results if not c.passed]
    assert not failures, "failing checks:\n" + "\n".join(c.line() for c in failures)


def test_full_report_summary():
    results = run_checks()
    rep = report(results)
    assert rep["total"] == len(results) >= 49
    assert rep["passed"] is True
    assert rep["failures"] == 0
