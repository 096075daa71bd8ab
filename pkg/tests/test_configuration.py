from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import shipped
from trunkkit.arrangement import ArrangementSyntaxError, canonical_form, parse_arrangement, validate
from trunkkit.arrangement.configuration import (
    ConfigCircle,
    ConfigPiece,
    ConfigurationError,
    PieceConfiguration,
    absorb,
    parity_check,
    parse_configuration,
    random_configuration,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def essential_counts(conf: PieceConfiguration) -> list:
    """(relevant, essential count) per piece, read straight off the tree."""
    out = []
    stack = [conf.root]
    while stack:
        p = stack.pop()
        out.append((p.relevant, sum(c.essential for c in p.circles) + p.outer_essential))
        stack.extend(k for c in p.circles for k in c.children)
    return out


def reflag(conf: PieceConfiguration, rng: random.Random) -> PieceConfiguration:
    def piece(p: ConfigPiece, root: bool) -> ConfigPiece:
        circles = tuple(
            ConfigCircle(tuple(piece(k, False) for k in c.children), rng.random() < 0.5) for c in p.circles
        )
        return ConfigPiece(circles, rng.random() < 0.6, not root and rng.random() < 0.5)

    return PieceConfiguration(piece(conf.root, True))


# --- grammar -----------------------------------------------------------------


def test_parse_flags():
    conf = parse_configuration(shipped("pseudo_essential.conf"))
    root = conf.root
    assert root.relevant
    assert [c.essential for c in root.circles] == [True, False, False]
    assert all(c.children[0].relevant and c.children[0].outer_essential for c in root.circles)
    assert parse_configuration(str(conf)) == conf


def test_plain_grammar_rejects_flags():
    with pytest.raises(ArrangementSyntaxError):
        parse_arrangement("*{ [ () ] }")


# --- parity ------------------------------------------------------------------


def test_parity_examples():
    assert parity_check(parse_configuration("*{ [ () ]! }")) == []
    bad = parity_check(parse_configuration("*{ [ () ]! [ () ]! }"))
    assert len(bad) == 1 and "root" in bad[0] and "2 essential" in bad[0]
    assert parity_check(parse_configuration("{ [ () ]! [ () ]! }")) == []
    bad = parity_check(parse_configuration("*{ [ *()! *( [()] ) ]! }"))
    assert len(bad) == 1 and "0.1" in bad[0]


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_parity_matches_direct_count(seed):
    rng = random.Random(seed)
    conf = reflag(random_configuration(rng, rng.randint(2, 10)), rng)
    even = sum(1 for rel, k in essential_counts(conf) if rel and k % 2 == 0)
    assert len(parity_check(conf)) == even


# --- absorb ------------------------------------------------------------------


def test_absorb_identity():
    for text, plain in [
        ("*{ [ *()! ]! }", "{ [ () ] }"),
        ("*{ [ *()! *( [*()!]! [*()!]! )! ]! }", "{ [ () ( [()] [()] ) ] }"),
    ]:
        result = absorb(parse_configuration(text))
        assert canonical_form(result.arrangement) == canonical_form(parse_arrangement(plain))
        assert result.excluded == ()


def test_absorb_pseudo_essential():
    result = absorb(parse_configuration(shipped("pseudo_essential.conf")))
    assert canonical_form(result.arrangement) == canonical_form(parse_arrangement("{ [()] [()] [()] }"))
    root = [c for c in result.correspondence if c[0] == ()]
    assert root == [((), (), 1, 3)]
    assert validate(result.arrangement, 1) == []


def test_absorb_parity_gate():
    with pytest.raises(ConfigurationError, match="parity"):
        absorb(parse_configuration("*{ [ *()! ]! [ *()! ]! }"))


def test_absorb_needs_relevant_piece():
    with pytest.raises(ConfigurationError):
        absorb(parse_configuration("{ [ () ] }"))


def test_absorb_essential_disk_must_hold_relevant_piece():
    with pytest.raises(ConfigurationError, match="root"):
        absorb(parse_configuration("*{ [ *()! ] [ () ]! }"))


def test_absorb_excludes_single_path_piece():
    # the middle annulus has one essential side and one inessential side leading on
    conf = parse_configuration("*{ [ *( [ *()! ] )! ]! }")
    result = absorb(conf)
    assert result.excluded == ((0, 0),)
    assert validate(result.arrangement, 1) == []


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_absorb_random(seed):
    rng = random.Random(seed)
    conf = random_configuration(rng, rng.randint(2, 12))
    assert parity_check(conf) == []
    result = absorb(conf)
    assert validate(result.arrangement, 1) == []
    for _, _, essential, boundaries in result.correspondence:
        if boundaries == 1:
            assert essential == 1


def test_random_configuration_size():
    with pytest.raises(ValueError):
        random_configuration(random.Random(0), 1)
