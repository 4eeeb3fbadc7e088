"""One test per acceptance criterion; each prints its own PASS/FAIL line.

Budgets (generous bounds; the whole registry runs in a few seconds):
  narrow corpus < 30 s, hop corpus < 60 s, two-hop corpus < 60 s,
  wide corpus < 120 s.  Every comparison is exact.
"""

import time

import pytest

from stripcast.acceptance import CRITERIA

BUDGETS = {
    "narrow-optimality": 30.0,
    "hop-optimality": 60.0,
    "two-hop": 60.0,
    "wide": 120.0,
}


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, fn):
    start = time.monotonic()
    ok, detail = fn()
    elapsed = time.monotonic() - start
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail} ({elapsed:.1f}s)")
    assert ok, f"{name}: {detail}"
    budget = BUDGETS.get(name)
    if budget is not None:
        assert elapsed < budget, f"{name} took {elapsed:.1f}s (budget {budget}s)"
