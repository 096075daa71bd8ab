from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trunkkit.bounds import (
    CertifiedDatum,
    DataError,
    audit_combined,
    audit_winding,
    audit_wrapping,
    load_certified,
    parse_certified,
    shipped_data,
)
from trunkkit.morse import parse_morse
from trunkkit.pattern import satellite, twist_tangle, whitehead_tangle


@pytest.fixture
def data():
    return shipped_data()


@pytest.fixture
def sats(trefoil):
    return {
        "cable2": satellite(trefoil, twist_tangle(2), 0),
        "cable3": satellite(trefoil, twist_tangle(3), 0),
        "whitehead": satellite(trefoil, whitehead_tangle(), 0),
    }


def test_shipped_data(data):
    assert set(data) == {"trefoil-2-cable", "trefoil-3-cable", "trefoil-whitehead", "unknot-core"}
    wh = data["trefoil-whitehead"]
    assert (wh.trJ, wh.n, wh.m, wh.mu) == (4, 0, 2, {1: 2, 3: 2})
    assert all(d.provenance for d in data.values())


def test_audit_winding(sats, data):
    r = audit_winding(sats["cable2"], data["trefoil-2-cable"])
    assert (r.bound, r.trunk, r.verdict) == (8, 8, "consistent")
    r = audit_winding(sats["whitehead"], data["trefoil-whitehead"])
    assert (r.bound, r.verdict) == (0, "consistent")


def test_audit_wrapping(sats, data, trefoil):
    r = audit_wrapping(sats["whitehead"], data["trefoil-whitehead"])
    assert (r.bound, r.strict, r.trunk, r.consistent) == (4, True, 8, True)
    r = audit_wrapping(sats["cable3"], data["trefoil-3-cable"])
    assert (r.bound, r.trunk, r.consistent) == (6, 12, True)
    core = CertifiedDatum("core", trJ=4, n=1, m=1)
    r = audit_wrapping(trefoil, core)
    assert (r.bound, r.consistent) == (2, True)


def test_strict_bound_is_strict(trefoil):
    # trunk 4 against m * trJ / 2 = 4 must fail a strict inequality
    d = CertifiedDatum("tight", trJ=4, n=2, m=2)
    r = audit_wrapping(trefoil, d)
    assert r.verdict == "CONTRADICTION"
    assert r.margin == 0
    assert audit_combined(trefoil, d, 0 + 2).verdict == "CONTRADICTION"  # bound 8 > 4


def test_audit_combined(sats, data):
    r = audit_combined(sats["whitehead"], data["trefoil-whitehead"], 2)
    assert (r.bound, r.trunk, r.consistent, r.margin) == (8, 8, True, 0)
    assert dict(r.extra)["implication-chain"] == "holds"
    r = audit_combined(sats["cable2"], data["trefoil-2-cable"], 2)
    assert r.bound == 8 == audit_winding(sats["cable2"], data["trefoil-2-cable"]).bound
    d = CertifiedDatum("deg", trJ=4, n=0, m=2)
    r = audit_combined(sats["whitehead"], d, 0)
    assert r.bound == Fraction(2 * 4, 2) == audit_wrapping(sats["whitehead"], d).bound
    assert not r.strict
    with pytest.raises(DataError):
        audit_combined(sats["whitehead"], d, 3)


def test_unknot_warning(unknot, data):
    r = audit_winding(unknot, data["unknot-core"])
    assert r.consistent and r.warnings


def test_reports_serialize(sats, data):
    r = audit_combined(sats["whitehead"], data["trefoil-whitehead"], Fraction(3, 2))
    kv = r.to_kv()
    assert kv == r.to_kv()
    assert "bound=7\n" in kv and "verdict=consistent" in kv
    assert "tightness is not verified" in r.to_table()
    assert "bound 7" in r.to_table()


@pytest.mark.parametrize(
    "text",
    [
        "trJ=4\n",
        "name=x\ntrJ=4\nn=1\n",
        "name=x\ntrJ=four\nn=1\nm=1\n",
        "name=x\ntrJ=4\nn=3\nm=2\n",
        "name=x\ntrJ=4\nn=1\nm=3\nmu.1=2\n",
        "name=x\ntrJ=4\nn=1\nm=3\nmu.1=3\nmu.3=1\nmu.5=2\n",
        "name=x\ntrJ=4\nn=1\nm=3\ncolour=red\n",
        "name=x\ntrJ=4\nn=1\nm=3\njunk\n",
    ],
)
def test_bad_data(text):
    with pytest.raises(DataError):
        parse_certified(text)


def test_data_round_trip(tmp_path, data):
    text = "".join(d.to_kv() for d in data.values())
    path = tmp_path / "copy.dat"
    path.write_text(text, encoding="utf-8")
    assert load_certified(path) == data


@given(
    st.integers(1, 20),
    st.integers(0, 6),
    st.integers(0, 6),
    st.fractions(min_value=0, max_value=1),
)
def test_bound_ordering(trJ, n, extra, frac):
    m = max(n + extra, 1)
    d = CertifiedDatum("d", trJ=trJ, n=n, m=m)
    mu = n + (m - n) * frac
    sat = parse_morse("cup 0\ncap 0\n")
    w = audit_winding(sat, d).bound
    c = audit_combined(sat, d, mu)
    assert w <= c.bound <= m * trJ
    assert dict(c.extra)["implication-chain"] == "holds"
    # the top of the range is m * trJ; the wrapping bound is met at mu = 0
    assert audit_combined(sat, d, m).bound == m * trJ
    if n == 0:
        assert audit_combined(sat, d, 0).bound == audit_wrapping(sat, d).bound
