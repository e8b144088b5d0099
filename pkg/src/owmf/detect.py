"""Rank-ordered absolute difference statistics for impulse detection."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import as_image, mirror_extend, window_offsets


@dataclass(frozen=True)
class DetectParams:
    d: int = 2
    K: int = 12
    sigma: float = 0.0

    def __post_init__(self):
        check_order_count(self.d, self.K)
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def check_order_count(d: int, K: int) -> None:
    """Validate ``2 <= K < (2d+1)^2 - 1``.

    ``K`` equal to the neighbourhood size is accepted with a warning, anything
    outside ``[2, card]`` is an error.
    """
    if d < 1:
        raise ValueError(f"detection radius must be >= 1, got {d}")
    card = (2 * d + 1) ** 2 - 1
    if K < 2 or K > card:
        raise ValueError(f"K must satisfy 2 <= K < {card} for d={d}, got K={K}")
    if K == card:
        warnings.warn(
            f"K={K} uses the whole deleted neighbourhood (strict bound is K < {card})",
            stacklevel=3,
        )


def _abs_differences(img: np.ndarray, d: int) -> np.ndarray:
    """Stack of |Y(x) - Y(x0)| over the deleted neighbourhood, scan order first axis."""
    height, width = img.shape
    padded = mirror_extend(img, d)
    diffs = []
    for dr, dc in window_offsets(d):
        if dr == 0 and dc == 0:
            continue
        shifted = padded[d + dr:d + dr + height, d + dc:d + dc + width]
        diffs.append(np.abs(shifted - img))
    return np.stack(diffs)


def _smallest_sum(diffs: np.ndarray, K: int) -> np.ndarray:
    # Partial selection, then sum the K selected values in ascending order so
    # the result is bit-identical to summing a fully sorted list.
    part = np.partition(diffs, K - 1, axis=0)[:K]
    part.sort(axis=0)
    total = np.zeros(diffs.shape[1:])
    for row in part:
        total += row
    return total


def road_map(img, d: int = 1, K: int = 4) -> np.ndarray:
    """Sum of the ``K`` smallest absolute differences to the deleted neighbourhood."""
    check_order_count(d, K)
    img = as_image(img)
    return _smallest_sum(_abs_differences(img, d), K)


def roadg_map(img, params: DetectParams) -> np.ndarray:
    """ROAD averaged over ``K`` with the Gaussian noise level subtracted, clipped at 0."""
    img = as_image(img)
    mean = _smallest_sum(_abs_differences(img, params.d), params.K) / params.K
    return np.maximum(mean - params.sigma, 0.0)


def j_map(roadg: np.ndarray, H: float) -> np.ndarray:
    """Impulse-confidence weights ``exp(-ROADG^2 / H^2)`` in ``(0, 1]``."""
    if not H > 0:
        raise ValueError(f"H must be > 0, got {H}")
    roadg = np.asarray(roadg, dtype=np.float64)
    return np.exp(-(roadg / H) ** 2)


def h1(p: float, sigma: float) -> float:
    """Default shape parameter of the J weights used inside patch distances."""
    _check_p(p)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    return 5.0 + 30.0 / (1.0 + 20.0 * p) + max(sigma - 10.0, 0.0) * (0.5 - p)


def h2(p: float) -> float:
    """Default shape parameter of the J weights applied to averaging candidates."""
    _check_p(p)
    return 27.0 - 20.0 * p


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
