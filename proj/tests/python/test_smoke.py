"""Smoke tests for the _monomod extension module."""

import math
import sys

import _monomod as mm


def test_sequence():
    vals = mm.sequence("rat:1/3", 2, 4)
    assert len(vals) == 4
    assert abs(vals[0] - 1 / 3) < 1e-15
    assert vals[2] == 0.0


def test_correlate_windowed_matches_naive():
    kw = dict(alpha="sqrt:2/1", d=2, N=150, ell=2, support="-0.5,0.5")
    w = mm.correlate(algorithm="windowed", **kw)
    n = mm.correlate(algorithm="naive", **kw)
    assert abs(w["value"] - n["value"]) <= 1e-12
    assert w["tuple_count"] == n["tuple_count"]
    assert w["expectation"] == 1.0


def test_gaps_and_sandwich():
    p = mm.gap_cdf("rand:5", 3, 500, 1.0)
    assert 0.0 <= p <= 1.0
    lo, up = mm.taylor_sandwich(1.0, 3)
    assert lo <= 1 - math.exp(-1) <= up


def test_exponents():
    rep = mm.exponents("11", 4, 1)
    assert rep["L"] == "7/3"
    assert rep["threshold"] is False
    assert rep["d_ell_for_n"] == "281474976710656"


def test_count():
    rep = mm.count("1,1,1,-1", 3, 6)
    assert rep["total"] > 0
    pts = mm.enumerate_points("1,1,1,-1", 3, 6)
    assert [3, 4, 5, 6] in pts
    assert rep["total"] == len(pts)


def test_two_var_count():
    count, ok = mm.two_var_count(1, 1, 2, 10)
    assert count == 41 and ok


def test_expectation_mc_deterministic():
    a = mm.expectation_mc(3, 2, 120, 8, 42)
    b = mm.expectation_mc(3, 2, 120, 8, 42, workers=4)
    assert a == b


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
