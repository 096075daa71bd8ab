"""Knots in Morse position as bottom-to-top words of cup, cap and crossing events.

A word is read from the bottom up.  Strands crossing a regular level are
indexed ``0..w-1`` from left to right.  ``cup i`` opens two adjacent strands
at ``i``, ``cap i`` closes strands ``i`` and ``i+1``, and ``x+ i`` / ``x- i``
exchange strands ``i`` and ``i+1`` (for ``x+`` the left strand passes over).

Several events may share one height when written on the same line separated
by ``;``.  Cabling produces such lines: ``n`` nested cups that stand in for a
single critical point of the companion.  Only lines holding a cup or cap are
critical; crossings never delimit a level.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "EventKind",
    "MorseEvent",
    "MorseDiagram",
    "MorsePresentation",
    "LevelProfile",
    "MorseSyntaxError",
    "MorseValidationError",
    "ComponentCountError",
    "parse_morse",
    "parse_diagram",
    "serialize",
    "level_profile",
    "width",
    "trunk",
    "connected_sum",
    "normalize",
    "insert_canceling_pair",
    "flip_signs",
    "random_presentation",
    "trace_strands",
]


class EventKind(enum.Enum):
    CUP = "cup"
    CAP = "cap"
    CROSS_POS = "x+"
    CROSS_NEG = "x-"

    @property
    def is_critical(self) -> bool:
        return self in (EventKind.CUP, EventKind.CAP)

    @property
    def is_crossing(self) -> bool:
        return self in (EventKind.CROSS_POS, EventKind.CROSS_NEG)


_KINDS = {k.value: k for k in EventKind}


class MorseSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MorseValidationError(ValueError):
    pass


class ComponentCountError(MorseValidationError):
    def __init__(self, count: int, detail: str = ""):
        msg = f"component count {count} (a knot needs exactly 1)"
        if detail:
            msg += f"; {detail}"
        super().__init__(msg)
        self.count = count


@dataclass(frozen=True)
class MorseEvent:
    kind: EventKind
    position: int

    def __post_init__(self):
        if self.position < 0:
            raise MorseValidationError(f"negative strand index in {self}")

    def __str__(self) -> str:
        return f"{self.kind.value} {self.position}"

    def delta(self) -> int:
        if self.kind is EventKind.CUP:
            return 2
        if self.kind is EventKind.CAP:
            return -2
        return 0

    def check(self, w: int) -> None:
        """Raise if the event cannot act on ``w`` strands."""
        i = self.position
        if self.kind is EventKind.CUP:
            ok = i <= w
        else:
            ok = i <= w - 2
        if not ok:
            raise MorseValidationError(f"'{self}' is out of range for {w} strands")

    def flipped(self) -> "MorseEvent":
        if self.kind is EventKind.CROSS_POS:
            return MorseEvent(EventKind.CROSS_NEG, self.position)
        if self.kind is EventKind.CROSS_NEG:
            return MorseEvent(EventKind.CROSS_POS, self.position)
        return self


def cup(i: int) -> MorseEvent:
    return MorseEvent(EventKind.CUP, i)


def cap(i: int) -> MorseEvent:
    return MorseEvent(EventKind.CAP, i)


def cross(i: int, sign: int = 1) -> MorseEvent:
    return MorseEvent(EventKind.CROSS_POS if sign > 0 else EventKind.CROSS_NEG, i)


Step = tuple  # tuple[MorseEvent, ...] sharing one height


def _as_steps(events: Iterable) -> tuple:
    steps = []
    for item in events:
        if isinstance(item, MorseEvent):
            steps.append((item,))
        else:
            step = tuple(item)
            if not step or not all(isinstance(e, MorseEvent) for e in step):
                raise MorseValidationError("a level must hold at least one event")
            steps.append(step)
    return tuple(steps)


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def trace_strands(steps: Sequence[Sequence[MorseEvent]], n_start: int = 0):
    """Follow arc connectivity through a word.

    Returns ``(uf, bottom, top, arcs)`` where ``bottom`` and ``top`` are the
    union-find labels of the strands at the two ends and ``arcs`` lists every
    label created.  Two strands lie on the same arc iff their labels share a
    root.
    """
    uf = _UnionFind()
    bottom = [uf.make() for _ in range(n_start)]
    strands = list(bottom)
    arcs = list(bottom)
    for step in steps:
        for ev in step:
            ev.check(len(strands))
            i = ev.position
            if ev.kind is EventKind.CUP:
                label = uf.make()
                arcs.append(label)
                strands[i:i] = [label, label]
            elif ev.kind is EventKind.CAP:
                uf.union(strands[i], strands[i + 1])
                del strands[i : i + 2]
            else:
                strands[i], strands[i + 1] = strands[i + 1], strands[i]
    return uf, bottom, strands, arcs


@dataclass(frozen=True)
class LevelProfile:
    widths: tuple

    def __iter__(self):
        return iter(self.widths)

    def __len__(self):
        return len(self.widths)

    def __getitem__(self, i):
        return self.widths[i]

    def __eq__(self, other):
        if isinstance(other, LevelProfile):
            return self.widths == other.widths
        if isinstance(other, (list, tuple)):
            return list(self.widths) == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.widths)

    def __str__(self):
        return "[" + ",".join(str(w) for w in self.widths) + "]"

    @property
    def width(self) -> int:
        return sum(self.widths)

    @property
    def trunk(self) -> int:
        return max(self.widths) if self.widths else 0


@dataclass(frozen=True)
class MorseDiagram:
    """A closed Morse diagram; may have several components (e.g. a cable)."""

    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", _as_steps(self.steps))
        w = 0
        for step in self.steps:
            for ev in step:
                ev.check(w)
                w += ev.delta()
        if w != 0:
            raise MorseValidationError(f"diagram ends with {w} open strands")

    @property
    def events(self) -> tuple:
        return tuple(ev for step in self.steps for ev in step)

    def __len__(self) -> int:
        return sum(len(step) for step in self.steps)

    def component_count(self) -> int:
        uf, _, _, arcs = trace_strands(self.steps)
        return len({uf.find(a) for a in arcs})

    def profile(self) -> LevelProfile:
        return level_profile(self)

    def max_strands(self) -> int:
        w = best = 0
        for step in self.steps:
            for ev in step:
                w += ev.delta()
                best = max(best, w)
        return best

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class MorsePresentation(MorseDiagram):
    """A knot in Morse position: a nonempty diagram with one component."""

    def __post_init__(self):
        super().__post_init__()
        if not self.steps:
            raise MorseValidationError("empty presentation (a knot is nonempty)")
        count = self.component_count()
        if count != 1:
            raise ComponentCountError(count)

    @classmethod
    def from_diagram(cls, diagram: MorseDiagram) -> "MorsePresentation":
        return cls(diagram.steps)


_LINE_RE = re.compile(r"\s*(\S+)(?:\s+(\S+))?\s*$")


def _parse_steps(text: str, first_line: int = 1) -> list:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=first_line):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        step = []
        col = 0
        for chunk in line.split(";"):
            if not chunk.strip():
                raise MorseSyntaxError("empty event", lineno, col + 1)
            start = col + len(chunk) - len(chunk.lstrip()) + 1
            col += len(chunk) + 1
            m = _LINE_RE.match(chunk)
            word, arg = m.group(1), m.group(2)
            kind = _KINDS.get(word)
            if kind is None:
                raise MorseSyntaxError(
                    f"unknown event {word!r} (expected cup, cap, x+ or x-)", lineno, start
                )
            if arg is None:
                raise MorseSyntaxError(f"missing strand index after {word!r}", lineno, start)
            if not arg.isdigit():
                argcol = start + chunk.strip().index(arg, len(word))
                raise MorseSyntaxError(f"bad strand index {arg!r}", lineno, argcol)
            step.append(MorseEvent(kind, int(arg)))
        steps.append(tuple(step))
    return steps


def parse_diagram(text: str) -> MorseDiagram:
    """Parse a word that may describe a link."""
    return MorseDiagram(_parse_steps(text))


def parse_morse(text: str) -> MorsePresentation:
    """Parse the ``.morse`` word format into a validated knot presentation.

    >>> parse_morse("cup 0\\ncap 0").events
    (MorseEvent(kind=<EventKind.CUP: 'cup'>, position=0), MorseEvent(kind=<EventKind.CAP: 'cap'>, position=0))
    """
    return MorsePresentation(_parse_steps(text))


def serialize(diagram: MorseDiagram) -> str:
    lines = ["; ".join(str(ev) for ev in step) for step in diagram.steps]
    return "\n".join(lines) + "\n"


def level_profile(p: Union[MorseDiagram, Iterable]) -> LevelProfile:
    """Strand counts at the regular levels between consecutive critical heights.

    Accepts any closed diagram, or a raw event sequence (so that a link word,
    e.g. a trefoil with its crossings deleted, can still be profiled).
    """
    steps = p.steps if isinstance(p, MorseDiagram) else _as_steps(p)
    widths = []
    w = 0
    for step in steps:
        critical = False
        for ev in step:
            ev.check(w)
            w += ev.delta()
            critical = critical or ev.kind.is_critical
        if critical:
            widths.append(w)
    # the count after the final critical height is 0, not a regular level
    if widths:
        widths.pop()
    return LevelProfile(tuple(widths))


def width(p) -> int:
    return level_profile(p).width


def trunk(p) -> int:
    return level_profile(p).trunk


def normalize(p: MorseDiagram) -> MorseDiagram:
    """Bring a diagram into splicing form: opens with ``cup 0``, closes with ``cap 0`` on two strands.

    For a valid word the first event is forced to be ``cup 0`` and the last a
    cap on the final pair, so nothing moves; anything else is malformed.
    """
    if not p.steps:
        raise MorseValidationError("cannot normalize an empty diagram")
    first, last = p.steps[0], p.steps[-1]
    if len(first) != 1 or first[0] != cup(0):
        raise MorseValidationError(f"cannot normalize: first level is {first}, not a single cup 0")
    if len(last) != 1 or last[0] != cap(0):
        raise MorseValidationError(f"cannot normalize: last level is {last}, not a single cap 0")
    return p


def connected_sum(p1: MorsePresentation, p2: MorsePresentation) -> MorsePresentation:
    """Stack ``p1`` on top of ``p2``, cancelling p2's last cap against p1's first cup."""
    p1 = normalize(p1)
    p2 = normalize(p2)
    return MorsePresentation(p2.steps[:-1] + p1.steps[1:])


def insert_canceling_pair(p: MorseDiagram, level: int, position: int) -> MorseDiagram:
    """Insert a zigzag ``cup i`` / ``cap i+1`` on strand ``i`` just after critical height ``level``.

    The cap joins the new arc to the old strand, so no component is added
    (a bare ``cup i`` / ``cap i`` would split off an unknot).
    """
    count = -1
    for k, step in enumerate(p.steps):
        if any(ev.kind.is_critical for ev in step):
            count += 1
            if count == level:
                w = sum(ev.delta() for st in p.steps[: k + 1] for ev in st)
                if not 0 <= position < w:
                    raise MorseValidationError(f"no strand {position} at level {level} ({w} strands)")
                new = p.steps[: k + 1] + ((cup(position),), (cap(position + 1),)) + p.steps[k + 1 :]
                return type(p)(new)
    raise MorseValidationError(f"no regular level {level}")


def flip_signs(p: MorseDiagram) -> MorseDiagram:
    return type(p)(tuple(tuple(ev.flipped() for ev in step) for step in p.steps))


def random_presentation(rng: random.Random, n_critical: int = 8, crossing_rate: float = 0.5) -> MorsePresentation:
    """Random knot word with roughly ``n_critical`` cups and caps.

    The strand count stays positive between the first cup and the last cap.
    Extra components are fused by inserting a crossing between adjacent
    strands of different components, which splices the two loops into one.
    """
    events: list = [cup(0)]
    w = 2
    budget = max(n_critical, 2) - 1
    while budget > 0 or w > 0:
        moves = []
        if budget > 0:
            moves.append("cup")
        if w > 2 or (w == 2 and budget <= 1):
            moves.append("cap")
        if w >= 2 and rng.random() < crossing_rate:
            moves.append("x")
        kind = rng.choice(moves)
        if kind == "cup":
            events.append(cup(rng.randint(0, w)))
            w += 2
            budget -= 1
        elif kind == "cap":
            events.append(cap(rng.randint(0, w - 2)))
            w -= 2
            budget -= 1
        else:
            events.append(cross(rng.randint(0, w - 2), rng.choice((1, -1))))
        if w == 0:
            break

    while True:
        uf, _, _, arcs = trace_strands([(e,) for e in events])
        if len({uf.find(a) for a in arcs}) == 1:
            return MorsePresentation(events)
        events = _fuse_once(events, uf, rng)


def _fuse_once(events: list, uf: _UnionFind, rng: random.Random) -> list:
    # replay, recording every level where neighbours belong to different components
    labels: list[int] = []
    made = 0
    spots = []
    for k, ev in enumerate(events):
        i = ev.position
        if ev.kind is EventKind.CUP:
            labels[i:i] = [made, made]
            made += 1
        elif ev.kind is EventKind.CAP:
            del labels[i : i + 2]
        else:
            labels[i], labels[i + 1] = labels[i + 1], labels[i]
        for j in range(len(labels) - 1):
            if uf.find(labels[j]) != uf.find(labels[j + 1]):
                spots.append((k, j))
    k, j = rng.choice(spots)
    return events[: k + 1] + [cross(j, rng.choice((1, -1)))] + events[k + 1 :]
