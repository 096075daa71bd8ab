"""Level diagrams of Morse words as plain text or SVG."""

from __future__ import annotations

from .morse import EventKind, MorseDiagram, level_profile

__all__ = ["render", "render_ascii", "render_svg", "TRACK", "ROW"]

TRACK = 40  # svg units per strand track
ROW = 30  # svg units per event row
CELL = 4  # text columns per strand track


def render(p: MorseDiagram, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return render_ascii(p)
    if fmt == "svg":
        return render_svg(p)
    raise ValueError(f"unknown format {fmt!r} (ascii or svg)")


def _rows(p: MorseDiagram):
    """Bottom-to-top rows: ("event", ev, w_before) and ("level", w) after each critical step."""
    rows = []
    w = 0
    steps = p.steps
    last_critical = max(
        (k for k, step in enumerate(steps) if any(e.kind.is_critical for e in step)), default=-1
    )
    for k, step in enumerate(steps):
        for ev in step:
            rows.append(("event", ev, w))
            w += ev.delta()
        if k < last_critical and any(e.kind.is_critical for e in step):
            rows.append(("level", w))
    return rows


def render_ascii(p: MorseDiagram) -> str:
    rows = _rows(p)
    span = max([p.max_strands(), 1]) * CELL + 2
    lines = []
    for row in reversed(rows):
        if row[0] == "level":
            w = row[1]
            art = "".join("|".ljust(CELL) for _ in range(w))
            lines.append(f"{art.ljust(span)}w={w}")
            continue
        _, ev, w = row
        i = ev.position
        if ev.kind is EventKind.CUP:
            cells = list("".join("|".ljust(CELL) for _ in range(w + 2)).ljust(span))
            cells[CELL * i : CELL * (i + 1) + 1] = "\\" + "_" * (CELL - 1) + "/"
        elif ev.kind is EventKind.CAP:
            cells = list("".join("|".ljust(CELL) for _ in range(w)).ljust(span))
            cells[CELL * i : CELL * (i + 1) + 1] = "/" + "-" * (CELL - 1) + "\\"
        else:
            cells = list("".join("|".ljust(CELL) for _ in range(w)).ljust(span))
            cells[CELL * i] = " "
            cells[CELL * (i + 1)] = " "
            cells[CELL * i + CELL // 2] = "/" if ev.kind is EventKind.CROSS_POS else "\\"
        lines.append(("".join(cells)).ljust(span) + str(ev))
    prof = level_profile(p)
    lines.append(f"trunk={prof.trunk} width={prof.width}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_svg(p: MorseDiagram) -> str:
    events = [(ev, w) for kind, *rest in _rows(p) if kind == "event" for ev, w in [rest]]
    n = len(events)
    width_px = TRACK * max(p.max_strands(), 1) + 4 * TRACK
    height = ROW * (n + 2)

    def x(k: int) -> int:
        return TRACK // 2 + TRACK * k

    def y(t: int) -> int:
        # height of the state after t events
        return ROW + ROW * (n - t)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height}" '
        f'viewBox="0 0 {width_px} {height}">',
        '<g fill="none" stroke="black" stroke-width="2">',
    ]
    notes = []
    critical_seen = 0
    n_critical = sum(1 for step in p.steps if any(e.kind.is_critical for e in step))
    t = 0
    for step in p.steps:
        step_critical = False
        for ev in step:
            _, w = events[t]
            y0, y1 = y(t), y(t + 1)
            i = ev.position
            if ev.kind is EventKind.CUP:
                below = {j: (j if j < i else j + 2) for j in range(w)}
                mid = (x(i) + x(i + 1)) // 2
                out.append(f'<path d="M {x(i)} {y1} Q {mid} {y0} {x(i + 1)} {y1}"/>')
            elif ev.kind is EventKind.CAP:
                below = {j: (j if j < i else j - 2) for j in range(w) if j not in (i, i + 1)}
                mid = (x(i) + x(i + 1)) // 2
                out.append(f'<path d="M {x(i)} {y0} Q {mid} {y1} {x(i + 1)} {y0}"/>')
            else:
                below = {j: j for j in range(w) if j not in (i, i + 1)}
                over_from, under_from = (i, i + 1) if ev.kind is EventKind.CROSS_POS else (i + 1, i)
                over_to = i + 1 if over_from == i else i
                under_to = i if under_from == i + 1 else i + 1
                out.append(f'<line x1="{x(over_from)}" y1="{y0}" x2="{x(over_to)}" y2="{y1}"/>')
                # under strand drawn in two pieces around the over strand
                xa, xb = x(under_from), x(under_to)
                qa = (3 * xa + xb) // 4, (3 * y0 + y1) // 4
                qb = (xa + 3 * xb) // 4, (y0 + 3 * y1) // 4
                out.append(f'<line x1="{xa}" y1="{y0}" x2="{qa[0]}" y2="{qa[1]}"/>')
                out.append(f'<line x1="{qb[0]}" y1="{qb[1]}" x2="{xb}" y2="{y1}"/>')
            for j, k in below.items():
                out.append(f'<line x1="{x(j)}" y1="{y0}" x2="{x(k)}" y2="{y1}"/>')
            step_critical = step_critical or ev.kind.is_critical
            t += 1
        if step_critical:
            critical_seen += 1
            if critical_seen < n_critical:
                w_after = events[t][1] if t < n else 0
                notes.append((y(t), f"w={w_after}"))
    out.append("</g>")
    label_x = TRACK * max(p.max_strands(), 1) + TRACK
    out.append('<g font-family="monospace" font-size="12" fill="black">')
    for yy, text in notes:
        out.append(f'<text x="{label_x}" y="{yy + 4}">{text}</text>')
    prof = level_profile(p)
    out.append(f'<text x="{TRACK // 2}" y="{height - ROW // 3}">trunk={prof.trunk} width={prof.width}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
