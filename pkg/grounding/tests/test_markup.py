import pytest
from hypothesis import given
from hypothesis import strategies as st

from geometry.coords import NormBox, NormCoord
from geometry.exceptions import OutOfBounds
from grounding.exceptions import MalformedMarkup
from grounding.markup import parse_markup, render_markup

norm = st.integers(0, 1000)


def test_render_point():
    assert render_markup(NormCoord(500, 500)) == "<point>[[500, 500]]</point>"


def test_render_box():
    assert render_markup(NormBox(0, 0, 1000, 1000)) == "<box>[[0, 0, 1000, 1000]]</box>"


def test_parse_literal_point_with_trailing_text():
    assert parse_markup("<point>[[701, 374]]</point>") == NormCoord(701, 374)
    assert parse_markup("<point>[[293, 560]]</point>.") == NormCoord(293, 560)


@pytest.mark.parametrize(
    "text",
    ["<point>[[701, 374]]</poi", "<point>[[701]]</point>", "<box>[[1, 2, 3]]</box>", "", "701, 374"],
)
def test_parse_malformed(text):
    with pytest.raises(MalformedMarkup):
        parse_markup(text)


@pytest.mark.parametrize(
    "text",
    [
        "<point>[[1001, 5]]</point>",
        "<point>[[5, -1]]</point>",
        "<box>[[10, 10, 1200, 20]]</box>",
        "<box>[[50, 10, 40, 20]]</box>",
    ],
)
def test_parse_off_grid_is_malformed(text):
    with pytest.raises(MalformedMarkup) as excinfo:
        parse_markup(text)
    assert isinstance(excinfo.value.__cause__, OutOfBounds)


@given(norm, norm)
def test_point_round_trip(x, y):
    assert parse_markup(render_markup(NormCoord(x, y))) == NormCoord(x, y)


@given(st.lists(norm, min_size=2, max_size=2), st.lists(norm, min_size=2, max_size=2))
def test_box_round_trip(xs, ys):
    box = NormBox(min(xs), min(ys), max(xs), max(ys))
    assert parse_markup(render_markup(box)) == box
