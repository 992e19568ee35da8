"""Pattern serialization: delimited text, structured text, and SVG scatter.

The CSV form is the interchange format and is bit-stable: an `x,y,t` header,
one newline-terminated row per point in acceptance order, every float
printed with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import json
from typing import IO, Optional

from .engine import Pattern


class MalformedPattern(ValueError):
    """Raised for unreadable or empty pattern files."""


def format_csv(pattern: Pattern) -> str:
    rows = ["x,y,t"]
    rows.extend(f"{x:.17g},{y:.17g},{t:.17g}" for x, y, t in pattern.points)
    return "\n".join(rows) + "\n"


def format_json(pattern: Pattern) -> str:
    doc = {
        "radius": pattern.r,
        "k": pattern.k,
        "seed": pattern.seed,
        "points": [[x, y, t] for x, y, t in pattern.points],
        "generated_count": pattern.generated_count,
    }
    return json.dumps(doc, indent=2) + "\n"


def format_svg(pattern: Pattern) -> str:
    """Scatter plot of the pattern: one circle per point, unit viewport,
    y flipped so the origin sits bottom-left.  Dot radius r/2, so touching
    circles mean a pair exactly at the exclusion distance."""
    dot = 0.5 * pattern.r
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="512" height="512" '
        'viewBox="0 0 1 1">',
        '<rect x="0" y="0" width="1" height="1" fill="white"/>',
        '<g transform="translate(0,1) scale(1,-1)" fill="black" fill-opacity="0.85">',
    ]
    lines.extend(
        f'<circle cx="{x:.17g}" cy="{y:.17g}" r="{dot:.17g}"/>'
        for x, y, _ in pattern.points
    )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_FORMATTERS = {"csv": format_csv, "json": format_json, "svg": format_svg}


def format_pattern(pattern: Pattern, fmt: str) -> str:
    try:
        return _FORMATTERS[fmt](pattern)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}") from None


def write_pattern(pattern: Pattern, fh: IO[str], fmt: str = "csv") -> None:
    fh.write(format_pattern(pattern, fmt))


def read_pattern(path: str, r: Optional[float] = None) -> Pattern:
    """Load a pattern from a CSV or JSON file (sniffed from the content).

    CSV files carry no radius, so `r` must be supplied for them; a JSON
    radius wins over the argument."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if not stripped:
        raise MalformedPattern(f"{path}: empty pattern file")
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
            points = [(float(x), float(y), float(t)) for x, y, t in doc["points"]]
            return Pattern(
                points=points,
                r=float(doc["radius"]),
                k=doc.get("k"),
                seed=int(doc.get("seed", 0)),
                generated_count=int(doc.get("generated_count", 0)),
                method="file",
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedPattern(f"{path}: bad structured pattern ({exc})") from exc
    lines = stripped.splitlines()
    if lines[0].strip() != "x,y,t":
        raise MalformedPattern(f"{path}: expected x,y,t header, got {lines[0]!r}")
    if r is None:
        raise MalformedPattern(f"{path}: CSV patterns need an explicit radius")
    points = []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise MalformedPattern(f"{path}:{ln}: expected 3 fields")
        try:
            points.append((float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise MalformedPattern(f"{path}:{ln}: {exc}") from exc
    return Pattern(points=points, r=r, k=None, seed=0, generated_count=0, method="file")
