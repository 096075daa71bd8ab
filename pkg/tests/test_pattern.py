from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import shipped
from oracles import component_count
from trunkkit.morse import (
    ComponentCountError,
    EventKind,
    MorseSyntaxError,
    MorseValidationError,
    level_profile,
    parse_diagram,
    random_presentation,
    trunk,
    width,
)
from trunkkit.pattern import (
    CylinderTangle,
    cable,
    parse_tangle,
    presentation_wrapping,
    satellite,
    serialize_tangle,
    trivial_tangle,
    twist_tangle,
    whitehead_tangle,
    winding_number,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# --- tangles -----------------------------------------------------------------


@pytest.mark.parametrize(
    "t, n",
    [
        (trivial_tangle(2, (1, 1)), 2),
        (whitehead_tangle(), 0),
        (trivial_tangle(3, (1, 1, -1)), 1),
    ],
)
def test_winding(t, n):
    assert winding_number(t) == n


@pytest.mark.parametrize(
    "t, m", [(trivial_tangle(2), 2), (whitehead_tangle(), 2), (trivial_tangle(1), 1)]
)
def test_presentation_wrapping(t, m):
    assert presentation_wrapping(t) == m


def test_shipped_tangles():
    assert parse_tangle(shipped("whitehead.tangle")) == whitehead_tangle()
    assert parse_tangle(shipped("cable2.tangle")) == twist_tangle(2)
    assert parse_tangle(shipped("cable3.tangle")) == twist_tangle(3)


def test_tangle_round_trip():
    for t in (whitehead_tangle(), twist_tangle(3), trivial_tangle(2, (1, -1))):
        assert parse_tangle(serialize_tangle(t)) == t


def test_whitehead_shape():
    t = whitehead_tangle()
    assert t.internal_max_width() == 4
    assert t.endpoints == ((("bottom", 0), ("bottom", 1)), (("top", 0), ("top", 1)))


@pytest.mark.parametrize(
    "text",
    [
        "through 2 signs ++\ncup 1\nx+ 0\nx+ 2\ncap 1\n",  # turning arcs need opposite signs
        "through 2 signs +\n",
        "through 1 signs +\ncup 0\ncap 0\n",  # closed component
        "through 1 signs +\ncup 0\n",
    ],
)
def test_bad_tangles(text):
    with pytest.raises(MorseValidationError):
        parse_tangle(text)


@pytest.mark.parametrize("text", ["x+ 0\n", "through two signs ++\n", "through 2 signs +*\n"])
def test_tangle_syntax(text):
    with pytest.raises(MorseSyntaxError):
        parse_tangle(text)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from((1, -1)), min_size=1, max_size=12))
def test_winding_at_most_wrapping(signs):
    t = trivial_tangle(len(signs), tuple(signs))
    assert 0 <= winding_number(t) <= presentation_wrapping(t)


# --- cabling -----------------------------------------------------------------


def _bundle_exchange_ok(events, n: int) -> bool:
    """Replay a crossing block on labelled strands; bundles must swap intact."""
    labels = list(range(2 * n))
    for ev in events:
        i = ev.position
        labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return labels == list(range(n, 2 * n)) + list(range(n))


def test_cable_identity(unknot, trefoil):
    assert cable(unknot, 1).steps == unknot.steps
    assert cable(trefoil, 1).steps == trefoil.steps


def test_cable_unknot(unknot):
    c = cable(unknot, 3)
    assert level_profile(c) == [6]
    assert c.component_count() == 3


def test_cable_trefoil(trefoil):
    c = cable(trefoil, 2)
    assert level_profile(c) == [4, 8, 4]
    crossings = [e for e in c.events if e.kind.is_crossing]
    assert len(crossings) == 12
    assert all(e.kind is EventKind.CROSS_POS for e in crossings)
    # blackboard parallel of a knot: one component per strand
    assert c.component_count() == component_count(c.events) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_crossing_block_oracle(n):
    block = cable(parse_diagram("cup 0\ncup 2\nx- 1\ncap 1\ncap 0\n"), n)
    events = [e for e in block.events if e.kind.is_crossing]
    shifted = [type(e)(e.kind, e.position - n) for e in events]
    assert len(events) == n * n
    assert all(e.kind is EventKind.CROSS_NEG for e in events)
    assert _bundle_exchange_ok(shifted, n)


def test_cable_overflow(trefoil):
    with pytest.raises(MorseValidationError):
        cable(trefoil, 2**19)
    with pytest.raises(MorseValidationError):
        cable(trefoil, 0)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 4))
def test_cable_scales_invariants(seed, n):
    p = random_presentation(random.Random(seed), n_critical=6)
    c = cable(p, n)
    assert width(c) == n * width(p)
    assert trunk(c) == n * trunk(p)
    assert list(level_profile(c)) == [n * w for w in level_profile(p)]


# --- satellites --------------------------------------------------------------


def test_satellite_two_cable(trefoil):
    s = satellite(trefoil, twist_tangle(2), 0)
    assert level_profile(s) == [4, 8, 4]
    assert trunk(s) == 8
    assert component_count(s.events) == 1


def test_satellite_whitehead(trefoil):
    t = whitehead_tangle()
    s = satellite(trefoil, t, 0)
    # window at level 0 (w=2): (2 - 1) * 2 + 4 = 6
    assert level_profile(s) == [4, 6, 4, 8, 4]
    assert trunk(s) == 8 == 2 * trunk(trefoil)
    assert component_count(s.events) == 1


def test_satellite_three_cable(trefoil):
    s = satellite(trefoil, twist_tangle(3), 1)
    assert trunk(s) == 12


def test_satellite_unknot_core(unknot):
    s = satellite(unknot, trivial_tangle(1), 0)
    assert s == unknot
    assert trunk(s) == 2


def test_satellite_link_rejected(trefoil):
    with pytest.raises(ComponentCountError) as info:
        satellite(trefoil, trivial_tangle(2), 0)
    assert info.value.count == 2
    assert "bottom 0<->top 0" in str(info.value)


@pytest.mark.parametrize("level", [-1, 3, 7])
def test_satellite_level_range(trefoil, level):
    with pytest.raises(MorseValidationError):
        satellite(trefoil, whitehead_tangle(), level)


def _window(t: CylinderTangle) -> list:
    out, w = [], t.n_through
    for step in t.steps:
        w += sum(e.delta() for e in step)
        if any(e.kind.is_critical for e in step):
            out.append(w)
    return out


PATTERNS = [trivial_tangle(1), twist_tangle(2), twist_tangle(3), twist_tangle(2, -1), whitehead_tangle()]


@settings(max_examples=80, deadline=None)
@given(seeds, st.sampled_from(PATTERNS), st.data())
def test_satellite_profile_formula(seed, t, data):
    c = random_presentation(random.Random(seed), n_critical=6)
    prof = list(level_profile(c))
    level = data.draw(st.integers(0, len(prof) - 1))
    n = t.n_through
    s = satellite(c, t, level)
    window = [(prof[level] - 1) * n + w for w in _window(t)]
    scaled = [n * w for w in prof]
    assert list(level_profile(s)) == scaled[: level + 1] + window + scaled[level + 1 :]
    assert trunk(s) >= n * trunk(c)
    assert s.component_count() == component_count(s.events) == 1


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_core_satellite_keeps_profile(seed):
    c = random_presentation(random.Random(seed), n_critical=6)
    assert level_profile(satellite(c, trivial_tangle(1), 0)) == level_profile(c)
