from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from geometry.coords import BBox
from geometry.masks import PixelMask


@st.composite
def masks(draw, max_side: int = 24, non_empty: bool = True):
    width = draw(st.integers(1, max_side))
    height = draw(st.integers(1, max_side))
    bits = draw(arrays(bool, (height, width)))
    if non_empty and not bits.any():
        bits[draw(st.integers(0, height - 1)), draw(st.integers(0, width - 1))] = True
    return PixelMask(width, height, bits)


@st.composite
def boxes(draw, side: int = 40):
    x1, x2 = sorted(draw(st.lists(st.integers(0, side - 1), min_size=2, max_size=2)))
    y1, y2 = sorted(draw(st.lists(st.integers(0, side - 1), min_size=2, max_size=2)))
    return BBox(x1, y1, x2, y2)
