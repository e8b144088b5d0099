import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from owmf.grid import (
    PixelCoord,
    WindowSpec,
    as_image,
    deleted_window_coords,
    mirror_extend,
    mirror_index,
    window_coords,
    window_offsets,
)


def test_mirror_single_pixel():
    out = mirror_extend(np.array([[5.0]]), 1)
    assert out.shape == (3, 3)
    assert np.all(out == 5.0)


def test_mirror_row_whole_sample():
    out = mirror_extend(np.array([[1.0, 2.0, 3.0]]), 2)
    assert out[2].tolist() == [3, 2, 1, 2, 3, 2, 1]


def test_mirror_radius_zero_is_copy():
    img = np.arange(12.0).reshape(3, 4)
    out = mirror_extend(img, 0)
    assert np.array_equal(out, img)
    assert out is not img


def test_mirror_rejects_large_radius():
    with pytest.raises(ValueError, match="too large"):
        mirror_extend(np.zeros((4, 4)), 4)


@given(st.integers(-60, 60), st.integers(1, 12))
def test_mirror_index_lands_in_range_and_is_periodic(i, n):
    j = mirror_index(i, n)
    assert 0 <= j < n
    assert mirror_index(-i, n) == j
    if n > 1:
        assert mirror_index(i + 2 * (n - 1), n) == j


@settings(max_examples=50)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 8))
def test_mirror_extend_agrees_with_index_rule(h, w, radius):
    if (h > 1 and radius >= h) or (w > 1 and radius >= w):
        return
    img = np.arange(float(h * w)).reshape(h, w)
    ext = mirror_extend(img, radius)
    for r in range(-radius, h + radius):
        for c in range(-radius, w + radius):
            assert ext[r + radius, c + radius] == img[mirror_index(r, h), mirror_index(c, w)]


def test_window_coords_examples():
    assert window_coords(PixelCoord(0, 0), 0) == [(0, 0)]
    coords = window_coords(PixelCoord(5, 5), 1)
    assert len(coords) == 9
    assert coords[0] == (4, 4) and coords[-1] == (6, 6)
    assert coords[1] == (5, 4)  # row-major: column varies fastest
    assert len(window_coords(PixelCoord(0, 0), 6)) == 169


def test_deleted_window_sizes():
    assert len(deleted_window_coords(PixelCoord(3, 3), 1)) == 8
    assert len(deleted_window_coords(PixelCoord(3, 3), 2)) == 24
    assert (3, 3) not in deleted_window_coords((3, 3), 2)


def test_window_offsets_row_major():
    offs = window_offsets(1)
    assert offs[0] == (-1, -1) and offs[1] == (-1, 0) and offs[4] == (0, 0)


def test_window_spec_counts_and_validation():
    spec = WindowSpec()
    assert (spec.M, spec.m) == (169, 625)
    with pytest.raises(ValueError):
        WindowSpec(0, 12, 2)
    with pytest.raises(ValueError):
        WindowSpec(6, 2.5, 2)


def test_as_image_rejects_bad_input():
    with pytest.raises(ValueError):
        as_image(np.zeros(4))
    with pytest.raises(ValueError):
        as_image(np.array([[1.0, np.nan]]))
    assert as_image([[1, 2]]).dtype == np.float64
