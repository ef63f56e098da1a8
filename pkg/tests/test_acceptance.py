"""Acceptance gate: runs each cross-verification suite at its stated size and
prints one pass/fail line per criterion."""

import pytest

from cluster_friezes.verify import run_suite

ALL_TYPES = ("A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2")
SMALL_TYPES = ("A2", "A3", "B2", "G2")

CRITERIA = [
    # (number, suite, kwargs, time limit in seconds or None)
    (1, "remark-not-in", {}, 1.0),
    (2, "closure-counts", {"types": ALL_TYPES}, 30.0),
    (3, "periodicity", {"types": ALL_TYPES, "trials": 200}, 60.0),
    (4, "realization", {"types": SMALL_TYPES, "trials": 100}, None),
    (5, "pairing", {"types": SMALL_TYPES, "trials": 50}, None),
    (6, "decomposition", {"types": ALL_TYPES, "trials": 100}, None),
    (7, "d-duality", {"types": SMALL_TYPES}, None),
    (8, "fpoly-separation", {"types": ALL_TYPES}, None),
    (9, "shift-laws", {"types": SMALL_TYPES, "trials": 1000}, None),
    (10, "admissibility", {"types": ("A2", "B2")}, None),
]


@pytest.mark.parametrize(
    "number,suite,kwargs,limit", CRITERIA, ids=[f"criterion-{c[0]:02d}" for c in CRITERIA]
)
def test_acceptance_criterion(number, suite, kwargs, limit):
    result = run_suite(suite, rng_seed=0, **kwargs)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} criterion {number} [{suite}] in {result.elapsed:.2f}s: "
          f"{result.details}")
    assert result.passed, f"criterion {number} failed: {result.details}"
    if limit is not None:
        assert result.elapsed < limit, (
            f"criterion {number} exceeded its {limit}s budget "
            f"({result.elapsed:.2f}s)"
        )
