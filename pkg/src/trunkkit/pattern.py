"""Satellite patterns as tangles in a cylinder, cabling, and satellite construction.

A pattern in the solid torus is cut open along a meridian disk, giving a
tangle whose ``n`` through-strands meet the bottom and top disks at the same
positions.  The tangle is stored as a Morse word acting on those ``n``
strands.  Gluing the top back to the bottom along a companion gives the
satellite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .morse import (
    ComponentCountError,
    EventKind,
    MorseDiagram,
    MorseEvent,
    MorsePresentation,
    MorseSyntaxError,
    MorseValidationError,
    _as_steps,
    _parse_steps,
    cap,
    cross,
    cup,
    trace_strands,
)

__all__ = [
    "CylinderTangle",
    "parse_tangle",
    "serialize_tangle",
    "winding_number",
    "presentation_wrapping",
    "cable",
    "satellite",
    "trivial_tangle",
    "twist_tangle",
    "whitehead_tangle",
    "MAX_STRANDS",
]

MAX_STRANDS = 2**20


@dataclass(frozen=True)
class CylinderTangle:
    n_through: int
    signs: tuple
    steps: tuple = ()
    endpoints: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.n_through < 1:
            raise MorseValidationError("a pattern must have at least one through-strand")
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != self.n_through or any(s not in (1, -1) for s in signs):
            raise MorseValidationError(
                f"need {self.n_through} orientation signs (+/-), got {self.signs!r}"
            )
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "steps", _as_steps(self.steps))

        uf, bottom, top, arcs = trace_strands(self.steps, self.n_through)
        if len(top) != self.n_through:
            raise MorseValidationError(
                f"tangle ends with {len(top)} strands, expected {self.n_through}"
            )
        groups: dict = {}
        for j, lab in enumerate(bottom):
            groups.setdefault(uf.find(lab), []).append(("bottom", j))
        for j, lab in enumerate(top):
            groups.setdefault(uf.find(lab), []).append(("top", j))
        if any(uf.find(a) not in groups for a in arcs):
            raise MorseValidationError("tangle contains a closed component")
        pairs = tuple(sorted(tuple(g) for g in groups.values()))
        object.__setattr__(self, "endpoints", pairs)
        self._check_orientation()

    def _check_orientation(self) -> None:
        # top endpoint j is glued to bottom endpoint j, so it carries the same sign
        for (end1, i), (end2, j) in self.endpoints:
            s1, s2 = self.signs[i], self.signs[j]
            agree = end1 != end2
            if (s1 == s2) != agree:
                raise MorseValidationError(
                    f"orientation signs disagree along the arc {end1} {i} - {end2} {j}"
                )

    @property
    def events(self) -> tuple:
        return tuple(ev for step in self.steps for ev in step)

    def internal_max_width(self) -> int:
        w = best = self.n_through
        for step in self.steps:
            for ev in step:
                w += ev.delta()
                best = max(best, w)
        return best

    def permutation(self) -> str:
        return ", ".join(f"{a[0]} {a[1]}<->{b[0]} {b[1]}" for a, b in self.endpoints)


def winding_number(t: CylinderTangle) -> int:
    return abs(sum(t.signs))


def presentation_wrapping(t: CylinderTangle) -> int:
    """Through-strand count: an upper bound for the wrapping number, not the true minimum."""
    return t.n_through


def parse_tangle(text: str) -> CylinderTangle:
    lines = text.splitlines()
    for k, raw in enumerate(lines):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "through" or parts[2] != "signs":
            raise MorseSyntaxError("expected header 'through <n> signs <+/-...>'", k + 1, 1)
        if not parts[1].isdigit():
            raise MorseSyntaxError(f"bad strand count {parts[1]!r}", k + 1, raw.index(parts[1]) + 1)
        bad = [c for c in parts[3] if c not in "+-"]
        if bad:
            raise MorseSyntaxError(f"bad sign {bad[0]!r}", k + 1, raw.index(parts[3]) + 1)
        signs = tuple(1 if c == "+" else -1 for c in parts[3])
        steps = _parse_steps("\n".join(lines[k + 1 :]), first_line=k + 2)
        return CylinderTangle(int(parts[1]), signs, steps)
    raise MorseSyntaxError("missing 'through' header", 1, 1)


def serialize_tangle(t: CylinderTangle) -> str:
    signs = "".join("+" if s > 0 else "-" for s in t.signs)
    body = ["; ".join(str(ev) for ev in step) for step in t.steps]
    return "\n".join([f"through {t.n_through} signs {signs}", *body]) + "\n"


def trivial_tangle(n: int, signs=None) -> CylinderTangle:
    return CylinderTangle(n, signs if signs is not None else (1,) * n)


def twist_tangle(n: int, sign: int = 1) -> CylinderTangle:
    """``n`` parallel strands with one cyclic shift, so the closure is connected."""
    return CylinderTangle(n, (1,) * n, [(cross(i, sign),) for i in range(n - 1)])


def whitehead_tangle() -> CylinderTangle:
    """Clasp pattern: winding 0 through two strands, internal width 4."""
    return CylinderTangle(2, (1, -1), [(cup(1),), (cross(0, 1),), (cross(2, 1),), (cap(1),)])


def _cable_event(ev: MorseEvent, n: int) -> list:
    base = n * ev.position
    if ev.kind is EventKind.CUP:
        return [cup(base + k) for k in range(n)]
    if ev.kind is EventKind.CAP:
        return [cap(base + k) for k in reversed(range(n))]
    # exchange two bundles of n; each crossing has a left-bundle strand on the left
    sign = 1 if ev.kind is EventKind.CROSS_POS else -1
    block = []
    for j in range(n):
        for p in range(n + j - 1, j - 1, -1):
            block.append(cross(base + p, sign))
    return block


def _cable_steps(p: MorseDiagram, n: int) -> list:
    if n < 1:
        raise MorseValidationError("cable multiplicity must be positive")
    if n * p.max_strands() > MAX_STRANDS:
        raise MorseValidationError(
            f"cable would need {n * p.max_strands()} strands (limit {MAX_STRANDS})"
        )
    steps = []
    for step in p.steps:
        for ev in step:
            expanded = _cable_event(ev, n)
            if ev.kind.is_critical:
                # nested cups/caps stand in for one critical point
                steps.append(tuple(expanded))
            else:
                steps.extend((e,) for e in expanded)
    return steps


def cable(p: MorseDiagram, n: int) -> MorseDiagram:
    """Blackboard-framed ``n``-fold parallel of ``p`` (generally a link)."""
    return MorseDiagram(_cable_steps(p, n))


def satellite(
    companion: MorsePresentation, t: CylinderTangle, level: int, strand: int = 0
) -> MorsePresentation:
    """Cable ``companion`` by ``t.n_through`` and splice ``t`` into one bundle at ``level``."""
    n = t.n_through
    steps = _cable_steps(companion, n)
    critical = [k for k, step in enumerate(steps) if any(e.kind.is_critical for e in step)]
    if not 0 <= level < len(critical) - 1:
        raise MorseValidationError(
            f"level {level} out of range: companion has {len(critical) - 1} regular levels"
        )
    at = critical[level] + 1
    w = sum(e.delta() for step in steps[:at] for e in step) // n
    if not 0 <= strand < w:
        raise MorseValidationError(f"strand {strand} out of range at level {level}")
    base = strand * n
    spliced = [tuple(MorseEvent(e.kind, e.position + base) for e in step) for step in t.steps]
    try:
        return MorsePresentation(steps[:at] + spliced + steps[at:])
    except ComponentCountError as exc:
        raise ComponentCountError(
            exc.count, f"pattern closure incompatible with splice (tangle endpoints: {t.permutation()})"
        ) from None
