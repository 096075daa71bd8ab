"""Flagged piece configurations: parity gate and absorption into an arrangement.

A configuration has the same tree shape as an arrangement, but circles may
be marked essential with a trailing ``!`` and pieces marked relevant with a
leading ``*``.  A non-root piece's outer circle is marked by a ``!`` after
its closing parenthesis::

    *{ [ *()! ]! [ *()! ] [ *()! ] }
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .moves import InternalInvariantError
from .tree import (
    Arrangement,
    _graph_to_arrangement,
    _Parser,
    format_path,
    validate,
)

__all__ = [
    "ConfigPiece",
    "ConfigCircle",
    "PieceConfiguration",
    "ConfigurationError",
    "parse_configuration",
    "parity_check",
    "absorb",
    "AbsorbResult",
    "random_configuration",
]


@dataclass(frozen=True)
class ConfigCircle:
    children: tuple = ()
    essential: bool = False


@dataclass(frozen=True)
class ConfigPiece:
    circles: tuple = ()
    relevant: bool = False
    outer_essential: bool = False


@dataclass(frozen=True)
class PieceConfiguration:
    root: ConfigPiece

    def __str__(self) -> str:
        return _fmt_piece(self.root, True)


def _fmt_piece(p: ConfigPiece, is_root: bool = False) -> str:
    body = " ".join(_fmt_circle(c) for c in p.circles)
    star = "*" if p.relevant else ""
    if is_root:
        return f"{star}{{{body}}}"
    return f"{star}({body})" + ("!" if p.outer_essential else "")


def _fmt_circle(c: ConfigCircle) -> str:
    return "[" + " ".join(_fmt_piece(p) for p in c.children) + "]" + ("!" if c.essential else "")


class ConfigurationError(ValueError):
    pass


def _build(circles) -> tuple:
    return tuple(
        ConfigCircle(tuple(ConfigPiece(_build(sub), rel, outer) for rel, sub, outer in kids), ess)
        for kids, ess in circles
    )


def parse_configuration(text: str) -> PieceConfiguration:
    relevant, circles = _Parser(text, flags=True).root()
    return PieceConfiguration(ConfigPiece(_build(circles), relevant))


class _Graph:
    """Unrooted view: piece and region nodes joined by one edge per circle."""

    def __init__(self, conf: PieceConfiguration):
        self.is_piece: list = []
        self.relevant: list = []
        self.path: list = []
        self.adj: list = []  # node -> list of edge ids
        self.edges: list = []  # (piece, region, essential)
        root = self._node(True, conf.root.relevant, ())
        stack = [(conf.root, root, ())]
        while stack:
            piece, node, path = stack.pop()
            for ci, c in enumerate(piece.circles):
                region = self._node(False, False, path + (ci,))
                self._edge(node, region, c.essential)
                for pi, child in enumerate(c.children):
                    cnode = self._node(True, child.relevant, path + (ci, pi))
                    self._edge(cnode, region, child.outer_essential)
                    stack.append((child, cnode, path + (ci, pi)))

    def _node(self, piece: bool, relevant: bool, path: tuple) -> int:
        self.is_piece.append(piece)
        self.relevant.append(relevant)
        self.path.append(path)
        self.adj.append([])
        return len(self.adj) - 1

    def _edge(self, piece: int, region: int, essential: bool) -> None:
        self.edges.append((piece, region, essential))
        e = len(self.edges) - 1
        self.adj[piece].append(e)
        self.adj[region].append(e)

    def other(self, e: int, v: int) -> int:
        p, r, _ = self.edges[e]
        return r if v == p else p

    def far_side(self, e: int) -> list:
        """Nodes on the region side of edge ``e`` (the disk away from its piece)."""
        p, r, _ = self.edges[e]
        seen = {r}
        stack = [r]
        while stack:
            v = stack.pop()
            for f in self.adj[v]:
                if f == e:
                    continue
                u = self.other(f, v)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return sorted(seen)

    def pieces(self) -> list:
        return [v for v in range(len(self.adj)) if self.is_piece[v]]

    def essential_count(self, v: int) -> int:
        return sum(1 for e in self.adj[v] if self.edges[e][2])


def parity_check(conf: PieceConfiguration) -> list:
    """Relevant pieces whose essential-circle count is even; an empty list means ok."""
    g = _Graph(conf)
    out = []
    for v in g.pieces():
        if g.relevant[v] and g.essential_count(v) % 2 == 0:
            out.append(
                f"relevant piece at {format_path(g.path[v])} has "
                f"{g.essential_count(v)} essential circles (must be odd)"
            )
    return out


@dataclass(frozen=True)
class AbsorbResult:
    arrangement: Arrangement
    # (source path, output path, essential circles of source, boundaries of output)
    correspondence: tuple
    excluded: tuple

    def __str__(self) -> str:
        lines = [str(self.arrangement)]
        for q, p, ess, s in self.correspondence:
            lines.append(f"{format_path(q)} -> {format_path(p)}  essential={ess} boundaries={s}")
        for q in self.excluded:
            lines.append(f"{format_path(q)} excluded")
        return "\n".join(lines)


def absorb(conf: PieceConfiguration) -> AbsorbResult:
    """Collapse a configuration onto the arrangement formed by its relevant pieces.

    Relevant pieces with one essential circle and exactly one inessential
    circle leading to another relevant piece are set aside.  Each remaining
    piece swallows the disk behind every inessential circle that leads to no
    remaining piece; every other piece is dropped, merging the regions it
    separated.
    """
    problems = parity_check(conf)
    if problems:
        raise ConfigurationError("parity check failed: " + "; ".join(problems))
    g = _Graph(conf)
    relevant = {v for v in g.pieces() if g.relevant[v]}
    if not relevant:
        raise ConfigurationError("configuration has no relevant piece")

    sides = {e: set(g.far_side(e)) for e in range(len(g.edges))}
    for v in sorted(relevant):
        for e in g.adj[v]:
            if g.edges[e][2] and not (sides[e] & relevant):
                raise ConfigurationError(
                    f"essential circle of piece {format_path(g.path[v])} bounds a disk "
                    "with no relevant piece inside"
                )

    excluded = set()
    for v in relevant:
        if g.essential_count(v) != 1:
            continue
        leading = [e for e in g.adj[v] if not g.edges[e][2] and sides[e] & relevant]
        if len(leading) == 1:
            excluded.add(v)
    kept = relevant - excluded

    glued: set = set()
    surviving = {}
    for v in sorted(kept):
        surviving[v] = []
        for e in g.adj[v]:
            if g.edges[e][2] or sides[e] & kept:
                surviving[v].append(e)
            else:
                glued |= sides[e]

    # merge the regions around every dropped piece that is still visible
    parent = list(range(len(g.adj)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in g.pieces():
        if v in kept or v in glued:
            continue
        regions = [g.other(e, v) for e in g.adj[v]]
        regions = [r for r in regions if r not in glued]
        for r in regions[1:]:
            parent[find(r)] = find(regions[0])

    # rebuild a bipartite tree over kept pieces and merged regions
    order = sorted(kept)
    index = {}
    adj: list = []
    is_piece: list = []
    for v in order:
        index[("p", v)] = len(adj)
        adj.append([])
        is_piece.append(True)
    for v in order:
        for e in surviving[v]:
            key = ("r", find(g.edges[e][1]))
            if key not in index:
                index[key] = len(adj)
                adj.append([])
                is_piece.append(False)
            adj[index[("p", v)]].append(index[key])
            adj[index[key]].append(index[("p", v)])

    root = index[("p", order[0])]
    A = _graph_to_arrangement(adj, is_piece, root)
    out_path = _paths_by_node(adj, root)
    correspondence = tuple(
        (g.path[v], out_path[index[("p", v)]], g.essential_count(v), len(surviving[v])) for v in order
    )
    bad = validate(A, 1)
    if bad:
        raise InternalInvariantError("absorb produced an invalid arrangement: " + "; ".join(map(str, bad)))
    return AbsorbResult(A, correspondence, tuple(g.path[v] for v in sorted(excluded)))


def _paths_by_node(adj, root: int) -> dict:
    # mirrors the child order used by _graph_to_arrangement
    paths = {root: ()}
    stack = [(root, -1)]
    while stack:
        v, parent = stack.pop()
        regions = [r for r in adj[v] if r != parent]
        for ci, r in enumerate(regions):
            kids = [p for p in adj[r] if p != v]
            for pi, p in enumerate(kids):
                paths[p] = paths[v] + (ci, pi)
                stack.append((p, r))
    return paths


def random_configuration(rng: random.Random, n_pieces: int = 8, max_circles: int = 3) -> PieceConfiguration:
    """Random configuration satisfying the parity gate and the essential-disk condition."""
    if n_pieces < 2:
        # a lone relevant piece has no essential circle with a relevant piece beyond it
        raise ValueError("need at least two pieces")
    while True:
        # random bipartite tree: attach each new piece inside an existing or fresh circle
        circles_of: list = [[]]
        kids_of: dict = {}
        for v in range(1, n_pieces):
            owners = [u for u in range(v) if len(circles_of[u]) < max_circles]
            slots = [(u, c) for u in range(v) for c in range(len(circles_of[u]))]
            if owners and (not slots or rng.random() < 0.5):
                u = rng.choice(owners)
                circles_of[u].append(len(circles_of[u]))
                slot = (u, circles_of[u][-1])
            else:
                slot = rng.choice(slots)
            kids_of.setdefault(slot, []).append(v)
            circles_of.append([])
        for u in range(n_pieces):
            if len(circles_of[u]) < max_circles and rng.random() < 0.2:
                circles_of[u].append(len(circles_of[u]))  # an empty circle

        def build(u, flags):
            return ConfigPiece(
                tuple(
                    ConfigCircle(tuple(build(k, flags) for k in kids_of.get((u, c), [])), flags.get((u, c), False))
                    for c in circles_of[u]
                ),
                flags.get(("rel", u), False),
                flags.get(("out", u), False),
            )

        relevant = {u for u in range(n_pieces) if rng.random() < 0.7}
        conf = PieceConfiguration(build(0, {("rel", u): True for u in relevant}))
        g = _Graph(conf)
        # graph node ids differ from u; map through paths
        node_of_path = {g.path[v]: v for v in g.pieces()}
        path_of_u = {}
        stack = [(0, ())]
        while stack:
            u, path = stack.pop()
            path_of_u[u] = path
            for c in circles_of[u]:
                for pi, k in enumerate(kids_of.get((u, c), [])):
                    stack.append((k, path + (c, pi)))
        rel_nodes = {node_of_path[path_of_u[u]] for u in relevant}
        while True:
            candidates = {
                v: [e for e in g.adj[v] if set(g.far_side(e)) & (rel_nodes - {v})] for v in rel_nodes
            }
            dead = {v for v, es in candidates.items() if not es}
            if not dead:
                break
            rel_nodes -= dead
        if not rel_nodes:
            continue
        essential_edges = set()
        for v in g.pieces():
            if v in rel_nodes:
                es = candidates[v]
                k = rng.choice([c for c in (1, 3) if c <= len(es)])
                essential_edges.update(rng.sample(es, k))
            else:
                es = list(g.adj[v])
                k = rng.choice([c for c in (0, 2) if c <= len(es)])
                essential_edges.update(rng.sample(es, k))
        u_of_node = {node_of_path[p]: u for u, p in path_of_u.items()}
        flags: dict = {}
        for e in essential_edges:
            piece, region, _ = g.edges[e]
            u = u_of_node[piece]
            rpath = g.path[region]
            if rpath[:-1] == g.path[piece]:
                flags[(u, rpath[-1])] = True
            else:
                flags[("out", u)] = True
        for v in rel_nodes:
            flags[("rel", u_of_node[v])] = True
        return PieceConfiguration(build(0, flags))
