"""The two building moves, their reversals, deconstruction and random builds."""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional

from .tree import (
    Arrangement,
    Circle,
    Piece,
    Threshold,
    _threshold,
    format_path,
    lambda_count,
    piece_count,
    two_disks,
)

__all__ = [
    "Move",
    "MoveError",
    "InternalInvariantError",
    "MoveTrace",
    "apply_move",
    "expected_delta",
    "deconstruct",
    "replay",
    "random_build",
    "extremal_arrangement",
    "extremal_sequence",
    "ADD_DISK",
    "INFLATE",
    "REMOVE_DISK",
    "DEFLATE",
]

ADD_DISK = "add-disk"
INFLATE = "inflate"
REMOVE_DISK = "remove-disk"  # reverse of ADD_DISK
DEFLATE = "deflate"  # reverse of INFLATE

_INVERSE = {ADD_DISK: REMOVE_DISK, REMOVE_DISK: ADD_DISK, INFLATE: DEFLATE, DEFLATE: INFLATE}


class MoveError(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class Move:
    """One move.

    ``path`` addresses a circle for ``add-disk`` and a piece otherwise.
    ``index`` pins where a disk or the kept root circle goes, so a reversed
    move can be undone exactly rather than up to sibling order.
    """

    kind: str
    path: tuple
    s: Optional[int] = None
    index: Optional[int] = None

    def __str__(self) -> str:
        out = f"{self.kind} {format_path(self.path)}"
        if self.s is not None:
            out += f" s={self.s}"
        if self.index is not None:
            out += f" at={self.index}"
        return out

    @property
    def is_reversal(self) -> bool:
        return self.kind in (REMOVE_DISK, DEFLATE)

    def inverse(self, before: Optional[Arrangement] = None) -> "Move":
        """The move undoing this one; ``add-disk`` without an index needs the prior state."""
        if self.kind == ADD_DISK:
            at = self.index
            if at is None:
                if before is None:
                    raise MoveError("inverting an unindexed add-disk needs the prior arrangement")
                at = len(before.circle_at(self.path).children)
            return Move(REMOVE_DISK, self.path + (at,))
        if self.kind == REMOVE_DISK:
            return Move(ADD_DISK, self.path[:-1], index=self.path[-1])
        return Move(_INVERSE[self.kind], self.path, self.s, self.index)


def expected_delta(m: Move, a) -> tuple:
    """``(dx, dy)`` from the counting table: x counts pieces with at most ``a`` boundaries."""
    a = _threshold(a).a
    if m.kind in (ADD_DISK, REMOVE_DISK):
        dx, dy = 1, 1
    else:
        s = m.s
        dy = s - 1
        dx = s - 1 if s <= a else s - 2
    return (-dx, -dy) if m.is_reversal else (dx, dy)


def _replace_piece(root: Piece, path: tuple, fn) -> Piece:
    if not path:
        return fn(root)
    ci, pi = path[0], path[1]
    c = root.circles[ci]
    kids = list(c.children)
    kids[pi] = _replace_piece(kids[pi], path[2:], fn)
    circles = list(root.circles)
    circles[ci] = Circle(tuple(kids))
    return Piece(tuple(circles))


def _check_path(A: Arrangement, path: tuple, circle: bool) -> None:
    if len(path) % 2 != (1 if circle else 0):
        what = "circle" if circle else "piece"
        raise MoveError(f"{format_path(path)} is not a {what} path")
    try:
        if circle:
            A.circle_at(path)
        else:
            A.piece_at(path)
    except (IndexError, TypeError):
        raise MoveError(f"no such target: {format_path(path)}") from None


def _is_disk(piece: Piece, is_root: bool) -> bool:
    return len(piece.circles) == (1 if is_root else 0)


def _single_disk(c: Circle) -> bool:
    return len(c.children) == 1 and not c.children[0].circles


def apply_move(A: Arrangement, m: Move, a=1) -> Arrangement:
    th = _threshold(a)
    if m.kind == ADD_DISK:
        _check_path(A, m.path, circle=True)
        ppath, ci = m.path[:-1], m.path[-1]

        def add(p: Piece) -> Piece:
            kids = list(p.circles[ci].children)
            at = len(kids) if m.index is None else m.index
            if not 0 <= at <= len(kids):
                raise MoveError(f"disk index {at} out of range")
            kids.insert(at, Piece())
            circles = list(p.circles)
            circles[ci] = Circle(tuple(kids))
            return Piece(tuple(circles))

        return Arrangement(_replace_piece(A.root, ppath, add))

    if m.kind == REMOVE_DISK:
        _check_path(A, m.path, circle=False)
        if not m.path:
            raise MoveError("the root piece cannot be removed")
        target = A.piece_at(m.path)
        if target.circles:
            raise MoveError(f"{format_path(m.path)} is not a disk")
        ppath, ci, pi = m.path[:-2], m.path[-2], m.path[-1]
        if len(A.circle_at(ppath + (ci,)).children) < 2:
            raise MoveError("removing the disk would leave its circle empty")

        def remove(p: Piece) -> Piece:
            kids = list(p.circles[ci].children)
            del kids[pi]
            circles = list(p.circles)
            circles[ci] = Circle(tuple(kids))
            return Piece(tuple(circles))

        return Arrangement(_replace_piece(A.root, ppath, remove))

    if m.kind == INFLATE:
        _check_path(A, m.path, circle=False)
        s = m.s
        if s is None or s < 1:
            raise MoveError(f"inflate needs s >= 1, got {s}")
        if s == th.a + 1 or not th.allows(s):
            raise MoveError(f"inflate with s={s} is forbidden for a={th.a}")
        is_root = not m.path
        if not _is_disk(A.piece_at(m.path), is_root):
            raise MoveError(f"{format_path(m.path)} is not a disk")
        if s == 1:
            return A
        fresh = [Circle((Piece(),)) for _ in range(s - 1)]

        def inflate(p: Piece) -> Piece:
            if not is_root:
                return Piece(tuple(fresh))
            at = 0 if m.index is None else m.index
            if not 0 <= at <= len(fresh):
                raise MoveError(f"kept circle index {at} out of range")
            circles = fresh[:at] + [p.circles[0]] + fresh[at:]
            return Piece(tuple(circles))

        return Arrangement(_replace_piece(A.root, m.path, inflate))

    if m.kind == DEFLATE:
        _check_path(A, m.path, circle=False)
        piece = A.piece_at(m.path)
        is_root = not m.path
        s = len(piece.circles) + (0 if is_root else 1)
        if m.s is not None and m.s != s:
            raise MoveError(f"piece has {s} boundaries, move says {m.s}")
        if s == 1:
            return A
        keep = None
        if is_root:
            keep = 0 if m.index is None else m.index
            if not 0 <= keep < len(piece.circles):
                raise MoveError(f"kept circle index {keep} out of range")
        others = [c for k, c in enumerate(piece.circles) if k != keep]
        if not all(_single_disk(c) for c in others):
            raise MoveError("every inner circle must hold exactly one disk to deflate")
        if is_root:
            return Arrangement(Piece((piece.circles[keep],)))
        return Arrangement(_replace_piece(A.root, m.path, lambda p: Piece()))

    raise MoveError(f"unknown move kind {m.kind!r}")


@dataclass
class MoveTrace:
    """A start arrangement and a list of moves, with ``(x_t, y_t)`` after each step."""

    start: Arrangement
    steps: list = field(default_factory=list)
    a: int = 1
    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)

    def __post_init__(self):
        if not self.xs:
            self.xs = [lambda_count(self.start, self.a)]
            self.ys = [piece_count(self.start)]

    def push(self, m: Move, result: Arrangement) -> None:
        self.steps.append(m)
        self.xs.append(lambda_count(result, self.a))
        self.ys.append(piece_count(result))

    def __len__(self) -> int:
        return len(self.steps)

    def deltas(self) -> list:
        return [
            (self.xs[t + 1] - self.xs[t], self.ys[t + 1] - self.ys[t]) for t in range(len(self.steps))
        ]

    def final(self) -> Arrangement:
        A = self.start
        for m in self.steps:
            A = apply_move(A, m, self.a)
        return A

    def inverse(self) -> "MoveTrace":
        """Trace that undoes this one, starting from its final arrangement."""
        states = [self.start]
        for m in self.steps:
            states.append(apply_move(states[-1], m, self.a))
        back = MoveTrace(states[-1], a=self.a)
        A = back.start
        for m, before in zip(reversed(self.steps), reversed(states[:-1])):
            inv = m.inverse(before)
            A = apply_move(A, inv, self.a)
            back.push(inv, A)
        return back

    def __str__(self) -> str:
        lines = [f"start {self.start}  x={self.xs[0]} y={self.ys[0]}"]
        for t, m in enumerate(self.steps, start=1):
            lines.append(f"{t:>4} {m}  x={self.xs[t]} y={self.ys[t]}")
        return "\n".join(lines)


def _find_crowded_circle(A: Arrangement) -> Optional[tuple]:
    for cpath, c in A.circles():
        disks = [k for k, p in enumerate(c.children) if not p.circles]
        if len(disks) >= 2:
            return cpath + (disks[-1],)
    return None


def _find_innermost(A: Arrangement) -> Optional[Move]:
    for path, piece, s in A.pieces():
        if path and s > 1 and all(_single_disk(c) for c in piece.circles):
            return Move(DEFLATE, path, s)
    circles = A.root.circles
    if len(circles) > 1:
        for keep in range(len(circles)):
            if all(_single_disk(c) for k, c in enumerate(circles) if k != keep):
                return Move(DEFLATE, (), len(circles), keep)
    return None


def deconstruct(A: Arrangement, a=1) -> MoveTrace:
    """Reduce ``A`` to two disks by reversed moves.

    Alternates two procedures until neither applies: drop surplus disks so no
    circle holds two, then collapse a piece whose circles each hold a single
    disk.  The returned trace starts at ``A``; its :meth:`MoveTrace.inverse`
    rebuilds ``A`` from two disks.
    """
    th = _threshold(a)
    trace = MoveTrace(A, a=th.a)
    bound = 2 * piece_count(A) + 2
    while True:
        if len(trace) > bound:
            raise InternalInvariantError(f"deconstruction exceeded {bound} steps")
        target = _find_crowded_circle(A)
        m = Move(REMOVE_DISK, target) if target is not None else _find_innermost(A)
        if m is None:
            break
        A = apply_move(A, m, th)
        trace.push(m, A)
    if A != two_disks():
        raise InternalInvariantError(f"deconstruction stopped at {A}")
    return trace


def replay(trace: MoveTrace) -> Arrangement:
    """Rebuild the start of a deconstruction trace from two disks."""
    return trace.inverse().final()


def random_build(rng: random.Random, max_pieces: int, a=1, n_moves: Optional[int] = None) -> MoveTrace:
    """Random forward build from two disks; stops at ``n_moves`` or when the budget is spent."""
    th = _threshold(a)
    A = two_disks()
    trace = MoveTrace(A, a=th.a)
    sizes = [s for s in range(2, max_pieces) if th.allows(s)]
    n = 2
    limit = n_moves if n_moves is not None else max_pieces
    while len(trace) < limit and n < max_pieces:
        if rng.random() < 0.5:
            circles = [p for p, _ in A.circles()]
            m = Move(ADD_DISK, rng.choice(circles))
        else:
            room = [s for s in sizes if n + s - 1 <= max_pieces]
            if not room:
                continue
            disks = [p for p, piece, s in A.pieces() if s == 1]
            s = rng.choice(room)
            path = rng.choice(disks)
            m = Move(INFLATE, path, s, None if path else rng.randint(0, s - 1))
        A = apply_move(A, m, th)
        trace.push(m, A)
        n = trace.ys[-1]
    return trace


def extremal_arrangement(a, t: int) -> MoveTrace:
    """``t`` inflations of a disk into an ``(a+2)``-boundary piece, starting from two disks."""
    th = _threshold(a)
    A = two_disks()
    trace = MoveTrace(A, a=th.a)
    for _ in range(t):
        path = next(p for p, _, s in A.pieces() if p and s == 1)
        m = Move(INFLATE, path, th.a + 2)
        A = apply_move(A, m, th)
        trace.push(m, A)
    return trace


def extremal_sequence(a, t_max: int) -> list:
    """Ratios ``x_t / y_t`` along the extremal build, checked against ``(2 + t a) / (2 + t (a + 1))``."""
    th = _threshold(a)
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    trace = extremal_arrangement(th, t_max)
    values = []
    for t in range(t_max + 1):
        ratio = Fraction(trace.xs[t], trace.ys[t])
        closed = Fraction(2 + t * th.a, 2 + t * (th.a + 1))
        if ratio != closed:
            raise InternalInvariantError(f"extremal build gives {ratio} at t={t}, expected {closed}")
        values.append(ratio)
    return values
