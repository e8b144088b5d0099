"""Image representation, window geometry and mirror border extension.

Images are plain 2-D ``float64`` numpy arrays indexed ``[row, col]`` with the
origin at the top-left pixel. Coordinates handed around as tuples are
``(col, row)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class PixelCoord(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True)
class WindowSpec:
    """Search, patch and detection radii (all in pixels)."""

    search_radius: int = 6
    patch_radius: int = 12
    detection_radius: int = 2

    def __post_init__(self):
        for name in ("search_radius", "patch_radius", "detection_radius"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def M(self) -> int:
        """Number of pixels in a search window."""
        return (2 * self.search_radius + 1) ** 2

    @property
    def m(self) -> int:
        """Number of pixels in a patch window."""
        return (2 * self.patch_radius + 1) ** 2


def as_image(data, *, copy: bool = False) -> np.ndarray:
    """Validate ``data`` as a grayscale image and return it as float64."""
    img = np.array(data, dtype=np.float64) if copy else np.asarray(data, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D array, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains NaN or infinite values")
    return img


def mirror_extend(img: np.ndarray, radius: int) -> np.ndarray:
    """Extend ``img`` by ``radius`` pixels on every side by whole-sample reflection.

    Virtual index ``-k`` maps to ``k`` and ``n-1+k`` maps to ``n-1-k``; the
    border pixel itself is not duplicated. Corners reflect about the corner
    pixel, which is what applying the 1-D rule along both axes gives.
    """
    img = np.asarray(img, dtype=np.float64)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius == 0:
        return img.copy()
    # A length-1 axis is its own reflection; longer axes only support one fold.
    for n in img.shape:
        if n > 1 and radius >= n:
            height, width = img.shape
            raise ValueError(
                f"radius {radius} too large for a {width}x{height} image; "
                "whole-sample reflection needs radius < side length"
            )
    return np.pad(img, radius, mode="reflect")


def mirror_index(i: int, n: int) -> int:
    """Map a possibly out-of-range index onto ``[0, n)`` by whole-sample reflection."""
    if n == 1:
        return 0
    period = 2 * (n - 1)
    i = abs(i) % period
    return period - i if i > n - 1 else i


def window_coords(center: PixelCoord, radius: int) -> list[PixelCoord]:
    """All coordinates within Chebyshev distance ``radius`` of ``center``, row-major."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    col, row = center
    return [
        PixelCoord(col + dc, row + dr)
        for dr in range(-radius, radius + 1)
        for dc in range(-radius, radius + 1)
    ]


def deleted_window_coords(center: PixelCoord, d: int) -> list[PixelCoord]:
    """``window_coords`` of radius ``d`` with the center removed."""
    if d < 1:
        raise ValueError("d must be >= 1")
    center = PixelCoord(*center)
    return [c for c in window_coords(center, d) if c != center]


def window_offsets(radius: int) -> list[tuple[int, int]]:
    """Row-major ``(drow, dcol)`` offsets of a square window."""
    return [
        (dr, dc)
        for dr in range(-radius, radius + 1)
        for dc in range(-radius, radius + 1)
    ]
