"""Arrangements of planar pieces on a sphere, stored as rooted nesting trees.

A piece lists its circles; every circle lists the pieces lying directly
inside the disk it bounds (on the side away from its own piece).  The root
piece lists all of its boundary circles.  A non-root piece lists only its
inner circles, because its outer circle is implied by the edge to its
parent, so a non-root piece with ``k`` circles has ``k + 1`` boundaries.

Text form::

    { [ () ( [()] [()] ) ] }

``{...}`` is the root piece, ``(...)`` a non-root piece, ``[...]`` a circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

__all__ = [
    "Piece",
    "Circle",
    "Arrangement",
    "Threshold",
    "Violation",
    "ArrangementSyntaxError",
    "parse_arrangement",
    "two_disks",
    "validate",
    "is_valid",
    "lambda_count",
    "piece_count",
    "boundary_counts",
    "canonical_form",
    "reroot",
    "check_lambda_bound",
    "LambdaReport",
    "format_path",
    "parse_path",
]


@dataclass(frozen=True)
class Piece:
    circles: tuple = ()

    def is_leaf(self) -> bool:
        return not self.circles


@dataclass(frozen=True)
class Circle:
    children: tuple = ()


@dataclass(frozen=True)
class Arrangement:
    root: Piece

    def __str__(self) -> str:
        return "{" + " ".join(_fmt_circle(c) for c in self.root.circles) + "}"

    def pieces(self) -> Iterator[tuple]:
        """Yield ``(path, piece, boundary_count)`` in depth-first order."""
        stack = [((), self.root, True)]
        while stack:
            path, piece, is_root = stack.pop()
            yield path, piece, len(piece.circles) + (0 if is_root else 1)
            for ci in reversed(range(len(piece.circles))):
                kids = piece.circles[ci].children
                for pi in reversed(range(len(kids))):
                    stack.append((path + (ci, pi), kids[pi], False))

    def circles(self) -> Iterator[tuple]:
        """Yield ``(path, circle)``; a circle path is its piece path plus the circle index."""
        for path, piece, _ in self.pieces():
            for ci, c in enumerate(piece.circles):
                yield path + (ci,), c

    def piece_at(self, path) -> Piece:
        node = self.root
        for k in range(0, len(path), 2):
            node = node.circles[path[k]].children[path[k + 1]]
        return node

    def circle_at(self, path) -> Circle:
        return self.piece_at(path[:-1]).circles[path[-1]]


def _fmt_piece(p: Piece) -> str:
    return "(" + " ".join(_fmt_circle(c) for c in p.circles) + ")"


def _fmt_circle(c: Circle) -> str:
    return "[" + " ".join(_fmt_piece(p) for p in c.children) + "]"


def format_path(path) -> str:
    return "root" if not path else ".".join(str(i) for i in path)


def parse_path(text: str) -> tuple:
    text = text.strip()
    if text in ("", "root"):
        return ()
    return tuple(int(part) for part in text.split("."))


def two_disks() -> Arrangement:
    return Arrangement(Piece((Circle((Piece(),)),)))


@dataclass(frozen=True)
class Threshold:
    """Condition (1) with parameter ``a``: boundary counts ``<= a`` or ``>= a + 2``."""

    a: int = 1

    def __post_init__(self):
        if self.a < 1 or self.a % 2 == 0:
            raise ValueError(f"threshold must be an odd positive integer, got {self.a}")

    def allows(self, s: int) -> bool:
        return s <= self.a or s >= self.a + 2

    def bound(self) -> Fraction:
        return Fraction(self.a, self.a + 1)


def _threshold(a) -> Threshold:
    return a if isinstance(a, Threshold) else Threshold(a)


class ArrangementSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"position {pos}: {message}")
        self.pos = pos


class _Parser:
    """Recursive descent over the bracket grammar; optionally with ``*``/``!`` flags."""

    def __init__(self, text: str, flags: bool):
        self.text = text
        self.pos = 0
        self.flags = flags

    def error(self, message: str):
        raise ArrangementSyntaxError(message, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def flag(self, ch: str) -> bool:
        if self.peek() == ch:
            if not self.flags:
                self.error(f"flag {ch!r} is only allowed in configurations")
            self.pos += 1
            return True
        return False

    def root(self):
        relevant = self.flag("*")
        self.expect("{")
        circles = self.circles("}")
        self.expect("}")
        if self.peek():
            self.error("trailing input after root piece")
        return relevant, circles

    def circles(self, close: str) -> list:
        out = []
        while self.peek() == "[":
            self.pos += 1
            kids = []
            while self.peek() in ("(", "*"):
                kids.append(self.piece())
            self.expect("]")
            out.append((kids, self.flag("!")))
        if self.peek() != close:
            self.error(f"expected '[' or {close!r}")
        return out

    def piece(self):
        relevant = self.flag("*")
        self.expect("(")
        circles = self.circles(")")
        self.expect(")")
        return relevant, circles, self.flag("!")


def _build_piece(circles) -> Piece:
    return Piece(tuple(Circle(tuple(_build_piece(p[1]) for p in kids)) for kids, _ in circles))


def parse_arrangement(text: str) -> Arrangement:
    """Parse the bracket grammar.  Only structure is checked here; see :func:`validate`."""
    _, circles = _Parser(text, flags=False).root()
    return Arrangement(_build_piece(circles))


def boundary_counts(A: Arrangement) -> list:
    return [s for _, _, s in A.pieces()]


def piece_count(A: Arrangement) -> int:
    return sum(1 for _ in A.pieces())


def lambda_count(A: Arrangement, a=1) -> int:
    a = _threshold(a).a
    return sum(1 for s in boundary_counts(A) if s <= a)


@dataclass(frozen=True)
class Violation:
    condition: str
    path: tuple
    message: str

    def __str__(self) -> str:
        return f"condition {self.condition} at {format_path(self.path)}: {self.message}"


def _has_circles_below(c: Circle) -> bool:
    return any(p.circles for p in c.children)


def validate(A: Arrangement, a=1) -> list:
    """Return the list of violations; an empty list means ``A`` is an arrangement for ``a``."""
    th = _threshold(a)
    out = []
    for path, piece, s in A.pieces():
        if not th.allows(s):
            cond = "(1)" if th.a == 1 else "(1)'"
            out.append(Violation(cond, path, f"piece has {s} boundaries"))
        for ci, c in enumerate(piece.circles):
            cpath = path + (ci,)
            if not c.children:
                out.append(Violation("(2)(i)", cpath, "circle bounds a disk with no piece inside"))
            # checked on its own even though (2)(i) implies it in this model
            if not _has_circles_below(c) and not any(p.is_leaf() for p in c.children):
                out.append(Violation("(2)(ii)", cpath, "innermost disk holds no disk piece"))
    if not A.root.circles:
        out.append(Violation("(1)", (), "root piece has no boundary"))
    return out


def is_valid(A: Arrangement, a=1) -> bool:
    return not validate(A, a)


@dataclass(frozen=True)
class LambdaReport:
    x: int
    y: int
    a: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.x, self.y)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.a, self.a + 1)

    @property
    def passed(self) -> bool:
        return self.ratio > self.bound

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return f"x={self.x} y={self.y} ratio={self.ratio} bound={self.bound} {verdict}"


def check_lambda_bound(A: Arrangement, a=1) -> LambdaReport:
    th = _threshold(a)
    return LambdaReport(lambda_count(A, th), piece_count(A), th.a)


# --- sphere-level canonical form -------------------------------------------------


def _to_graph(A: Arrangement):
    """Bipartite tree: piece nodes and region nodes, one edge per circle.

    Returns ``(is_piece, adj, node_of)`` where ``node_of`` maps piece paths to nodes.
    """
    is_piece: list = []
    adj: list = []
    node_of: dict = {}

    def new(piece: bool) -> int:
        is_piece.append(piece)
        adj.append([])
        return len(adj) - 1

    node_of[()] = new(True)
    stack = [(A.root, ())]
    while stack:
        piece, path = stack.pop()
        node = node_of[path]
        for ci, c in enumerate(piece.circles):
            region = new(False)
            adj[node].append(region)
            adj[region].append(node)
            for pi, child in enumerate(c.children):
                cnode = new(True)
                adj[region].append(cnode)
                adj[cnode].append(region)
                node_of[path + (ci, pi)] = cnode
                stack.append((child, path + (ci, pi)))
    return is_piece, adj, node_of


def _centers(adj) -> list:
    n = len(adj)
    if n <= 2:
        return list(range(n))
    degree = [len(x) for x in adj]
    leaves = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for v in leaves:
            for u in adj[v]:
                degree[u] -= 1
                if degree[u] == 1:
                    nxt.append(u)
        leaves = nxt
    return leaves


def _encode(adj, is_piece, root: int) -> str:
    # iterative post-order so that deep nestings do not hit the recursion limit
    codes: dict = {}
    order = []
    stack = [(root, -1)]
    while stack:
        v, parent = stack.pop()
        order.append((v, parent))
        for u in adj[v]:
            if u != parent:
                stack.append((u, v))
    for v, parent in reversed(order):
        parts = sorted(codes[u] for u in adj[v] if u != parent)
        if is_piece[v]:
            opn, cls = ("{", "}") if v == root else ("(", ")")
        else:
            opn, cls = "[", "]"
        codes[v] = opn + "".join(parts) + cls
    return codes[root]


def _graph_to_arrangement(adj, is_piece, root: int) -> Arrangement:
    def piece(v: int, parent: int) -> Piece:
        return Piece(tuple(circle(r, v) for r in adj[v] if r != parent))

    def circle(r: int, parent: int) -> Circle:
        return Circle(tuple(piece(p, r) for p in adj[r] if p != parent))

    return Arrangement(piece(root, -1))


def canonical_form(A: Arrangement) -> str:
    """Encoding shared by exactly the arrangements that are isomorphic on the sphere.

    Children are sorted at every level, which removes sibling order; the root
    is then chosen among the pieces nearest the tree centre, taking the
    smallest encoding, which removes the choice of root piece.
    """
    is_piece, adj, _ = _to_graph(A)
    candidates = set()
    for v in _centers(adj):
        if is_piece[v]:
            candidates.add(v)
        else:
            candidates.update(adj[v])
    return min(_encode(adj, is_piece, v) for v in candidates)


def reroot(A: Arrangement, piece_path) -> Arrangement:
    """The same sphere arrangement with the piece at ``piece_path`` as root."""
    is_piece, adj, node_of = _to_graph(A)
    return _graph_to_arrangement(adj, is_piece, node_of[tuple(piece_path)])
