"""Mini-grammars for command-line arguments.

* ranges: ``"3"`` or ``"1..6"`` (inclusive)
* sites: ``"v:x,y"`` for a vertex, ``"f:x,y"`` for the face with
  lower-left corner ``(x, y)``
"""

import re
from typing import Tuple

from toric_diagonal.lattice import Face, Site, Vertex

_RANGE = re.compile(r"^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$")
_SITE = re.compile(r"^\s*([vf])\s*:\s*(-?\d+)\s*,\s*(-?\d+)\s*$", re.IGNORECASE)


def parse_range(text: str) -> Tuple[int, int]:
    """Parse ``"lo..hi"`` or a single integer.

    Raises:
        ValueError: On malformed text or ``lo > hi``.
    """
    m = _RANGE.match(text)
    if not m:
        raise ValueError(f"Invalid range {text!r}: expected 'N' or 'LO..HI'")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if lo > hi:
        raise ValueError(f"Invalid range {text!r}: {lo} > {hi}")
    return lo, hi


def parse_site(text: str) -> Site:
    """Parse ``"v:x,y"`` or ``"f:x,y"``.

    Raises:
        ValueError: On malformed text.
    """
    m = _SITE.match(text)
    if not m:
        raise ValueError(f"Invalid site {text!r}: expected 'v:X,Y' or 'f:X,Y'")
    corner = Vertex(int(m.group(2)), int(m.group(3)))
    return corner if m.group(1).lower() == "v" else Face(corner)
