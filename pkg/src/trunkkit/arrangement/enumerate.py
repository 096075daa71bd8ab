"""Breadth-first enumeration of arrangements up to sphere isomorphism."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional

from .moves import ADD_DISK, INFLATE, Move, apply_move
from .tree import _threshold, canonical_form, parse_arrangement, two_disks

__all__ = ["enumerate_arrangements", "BudgetExceeded", "DEFAULT_MAX_SET", "expand"]

DEFAULT_MAX_SET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


def _max_set() -> int:
    raw = os.environ.get("TRUNKKIT_MAX_SET")
    return int(raw) if raw else DEFAULT_MAX_SET


def expand(code: str, n_max: int, a: int) -> list:
    """Canonical forms of everything one forward move away from ``code`` within ``n_max`` pieces."""
    A = parse_arrangement(code)
    pieces = list(A.pieces())
    n = len(pieces)
    out = set()
    if n < n_max:
        for cpath, _ in A.circles():
            out.add(canonical_form(apply_move(A, Move(ADD_DISK, cpath), a)))
    th = _threshold(a)
    sizes = [s for s in range(2, n_max - n + 2) if th.allows(s)]
    for path, _, s in pieces:
        if s != 1:
            continue
        for size in sizes:
            out.add(canonical_form(apply_move(A, Move(INFLATE, path, size), a)))
    return sorted(out)


def _expand_batch(args) -> list:
    codes, n_max, a = args
    return [c for code in codes for c in expand(code, n_max, a)]


def enumerate_arrangements(
    n_max: int, a=1, threads: int = 1, max_set: Optional[int] = None
) -> list:
    """All arrangements with at most ``n_max`` pieces that are valid for ``a``.

    Closure of the two-disk state under the two moves, deduplicated by
    canonical form.  Returned sorted by canonical string.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    a = _threshold(a).a
    cap = _max_set() if max_set is None else max_set
    start = canonical_form(two_disks())
    seen = {start}
    frontier = [start]
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        while frontier:
            nxt = []
            for code in _expand_all(frontier, n_max, a, pool, threads):
                if code not in seen:
                    seen.add(code)
                    nxt.append(code)
                    if len(seen) > cap:
                        raise BudgetExceeded(
                            f"more than {cap} arrangements; raise TRUNKKIT_MAX_SET or lower n_max"
                        )
            frontier = sorted(nxt)
    finally:
        if pool is not None:
            pool.shutdown()
    return sorted(seen)


def _expand_all(frontier: list, n_max: int, a: int, pool, threads: int) -> Iterable[str]:
    if pool is None or len(frontier) < 64:
        for code in frontier:
            yield from expand(code, n_max, a)
        return
    size = max(1, len(frontier) // (threads * 4))
    batches = [(frontier[k : k + size], n_max, a) for k in range(0, len(frontier), size)]
    for result in pool.map(_expand_batch, batches):
        yield from result
