"""
Point and box markup, e.g. ``<point>[[701, 374]]</point>`` and
``<box>[[x1, y1, x2, y2]]</box>``, over the normalized [0, 1000] grid.
"""
import re
from typing import Union

from geometry.coords import NormBox, NormCoord
from geometry.exceptions import OutOfBounds
from grounding.exceptions import MalformedMarkup

__all__ = ("find_markup", "parse_markup", "render_markup")

Geometry = Union[NormCoord, NormBox]

_NUMBER = r"\s*(-?\d+)\s*"
POINT_PATTERN = re.compile(rf"<point>\[\[{_NUMBER},{_NUMBER}\]\]</point>")
BOX_PATTERN = re.compile(rf"<box>\[\[{_NUMBER},{_NUMBER},{_NUMBER},{_NUMBER}\]\]</box>")


def render_markup(geometry: Geometry) -> str:
    if isinstance(geometry, NormCoord):
        return f"<point>[[{geometry.x}, {geometry.y}]]</point>"
    if isinstance(geometry, NormBox):
        return f"<box>[[{geometry.x1}, {geometry.y1}, {geometry.x2}, {geometry.y2}]]</box>"
    raise TypeError(f"Cannot render {type(geometry).__name__} as markup")


def find_markup(text: str):
    """First point or box markup in ``text`` as a regex match, or ``None``."""
    matches = [m for m in (POINT_PATTERN.search(text), BOX_PATTERN.search(text)) if m]
    return min(matches, key=lambda m: m.start()) if matches else None


def parse_markup(text: str) -> Geometry:
    match = find_markup(text)
    if match is None:
        raise MalformedMarkup(f"No point or box markup in {text!r}")
    values = [int(group) for group in match.groups()]
    try:
        if match.re is POINT_PATTERN:
            return NormCoord(*values)
        return NormBox(*values)
    except OutOfBounds as exc:
        raise MalformedMarkup(f"Markup {match.group(0)!r} is not a normalized geometry: {exc}") from exc
