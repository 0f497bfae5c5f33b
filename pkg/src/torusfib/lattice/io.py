"""Polytope text format.

::

    # comment
    dim 4
    1 0 0 0
    0 1 0 0
    ...
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from ..errors import FormatError
from .polytope import LatticePolytope


def parse_polytope(text: str) -> LatticePolytope:
    dim = None
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim":
                raise FormatError(f"line {lineno}: expected 'dim <n>'")
            dim = int(parts[1])
            continue
        try:
            v = tuple(int(x) for x in line.split())
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer coordinate") from None
        if len(v) != dim:
            raise FormatError(f"line {lineno}: expected {dim} coordinates, got {len(v)}")
        pts.append(v)
    if dim is None:
        raise FormatError("missing 'dim' header")
    return LatticePolytope(pts)


def format_polytope(P: LatticePolytope | Iterable[Iterable[int]], dim: int | None = None) -> str:
    verts = P.vertices if isinstance(P, LatticePolytope) else [tuple(v) for v in P]
    if dim is None:
        dim = P.ambient_dim if isinstance(P, LatticePolytope) else len(verts[0])
    lines = [f"dim {dim}"]
    lines += [" ".join(str(int(x)) for x in v) for v in verts]
    return "\n".join(lines) + "\n"


def read_polytope(path: str | Path) -> LatticePolytope:
    return parse_polytope(Path(path).read_text())


def write_polytope(P: LatticePolytope, path: str | Path) -> None:
    Path(path).write_text(format_polytope(P))
