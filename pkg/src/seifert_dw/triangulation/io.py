"""Line-based text format for gluing tables.

::

    tets <T>
    <i> <g0> <g1> <g2> <g3>      (one line per tetrahedron, i = 0..T-1)

Each ``<gf>`` is ``b`` for a boundary face or ``<j>:<s>``, where ``s`` lists
the images of vertices 0..3 under the gluing of face ``f``. Lines starting
with ``#`` are comments.
"""

from __future__ import annotations

import os
import re
from typing import TextIO

from ..errors import ParseError
from .core import PseudoTriangulation

_HEADER = re.compile(r"tets\s+(\d+)")
_GLUING = re.compile(r"(\d+):([0-3]{4})")


def format_tri(tri: PseudoTriangulation) -> str:
    lines = [f"tets {tri.tet_count}"]
    for i, row in enumerate(tri.gluings):
        cells = []
        for g in row:
            if g is None:
                cells.append("b")
            else:
                u, perm = g
                cells.append(f"{u}:{''.join(map(str, perm))}")
        lines.append(f"{i} " + " ".join(cells))
    return "\n".join(lines) + "\n"


def parse_tri(text: str) -> PseudoTriangulation:
    """Parse the text format. Structural problems in the table itself
    (a gluing not matched by its inverse) surface as TriangulationError."""
    count = None
    rows: list[list] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if count is None:
            m = _HEADER.fullmatch(line)
            if not m:
                raise ParseError(f"expected 'tets <T>', got {raw!r}", lineno)
            count = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError(f"expected an index and four gluings, got {len(parts)} fields", lineno)
        if not parts[0].isdigit() or int(parts[0]) != len(rows):
            raise ParseError(f"expected tetrahedron index {len(rows)}, got {parts[0]!r}", lineno)
        if len(rows) >= count:
            raise ParseError(f"more gluing lines than the declared {count} tetrahedra", lineno)
        row = []
        for f, cell in enumerate(parts[1:]):
            if cell == "b":
                row.append(None)
                continue
            m = _GLUING.fullmatch(cell)
            if not m:
                raise ParseError(f"face {f}: cannot parse gluing {cell!r}", lineno)
            target, perm = int(m.group(1)), tuple(int(c) for c in m.group(2))
            if sorted(perm) != [0, 1, 2, 3]:
                raise ParseError(f"face {f}: {m.group(2)} is not a permutation of 0123", lineno)
            if target >= count:
                raise ParseError(f"face {f}: target tetrahedron {target} out of range", lineno)
            row.append((target, perm))
        rows.append(row)
    if count is None:
        raise ParseError("missing 'tets <T>' header")
    if len(rows) != count:
        raise ParseError(f"declared {count} tetrahedra but found {len(rows)} gluing lines")
    return PseudoTriangulation(rows)


def write_tri(tri: PseudoTriangulation, path: str | os.PathLike | TextIO):
    text = format_tri(tri)
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_tri(path: str | os.PathLike | TextIO) -> PseudoTriangulation:
    if hasattr(path, "read"):
        return parse_tri(path.read())
    with open(path, encoding="ascii") as fh:
        return parse_tri(fh.read())
