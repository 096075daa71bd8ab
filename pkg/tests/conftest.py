from __future__ import annotations

from importlib import resources

import pytest

from trunkkit.morse import parse_morse

TREFOIL = "cup 0\ncup 2\nx+ 1\nx+ 1\nx+ 1\ncap 1\ncap 0\n"
UNKNOT = "cup 0\ncap 0\n"


def shipped(name: str) -> str:
    return resources.files("trunkkit").joinpath("data", name).read_text(encoding="utf-8")


@pytest.fixture
def trefoil():
    return parse_morse(TREFOIL)


@pytest.fixture
def unknot():
    return parse_morse(UNKNOT)
