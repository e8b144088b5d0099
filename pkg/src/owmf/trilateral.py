"""Trilateral filter baseline for mixed Gaussian and impulse noise."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .detect import check_order_count, road_map
from .grid import as_image, mirror_extend, window_offsets


@dataclass(frozen=True)
class TrifParams:
    """Trilateral filter settings.

    The four scales have no universally agreed values; ``default_for``
    gives the usual starting point (spatial 0.5, radiometric twice the noise
    level, impulsive 40, joint impulsivity 50 on a 3x3 ROAD with K=4).
    """

    sigma_S: float
    sigma_R: float
    sigma_I: float
    sigma_J: float
    search_radius: int = 2
    d: int = 1
    K: int = 4
    iterations: int = 1

    def __post_init__(self):
        for name in ("sigma_S", "sigma_R", "sigma_I", "sigma_J"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.search_radius < 1:
            raise ValueError("search_radius must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        check_order_count(self.d, self.K)

    @classmethod
    def default_for(cls, sigma: float, **overrides) -> "TrifParams":
        base = dict(sigma_S=0.5, sigma_R=max(2.0 * sigma, 1.0), sigma_I=40.0, sigma_J=50.0)
        base.update(overrides)
        return cls(**base)


def joint_impulsivity(road_x0, road_x, sigma_J: float):
    if not sigma_J > 0:
        raise ValueError("sigma_J must be > 0")
    total = np.asarray(road_x0, dtype=np.float64) + np.asarray(road_x, dtype=np.float64)
    return np.exp(-(total**2) / (2.0 * (2.0 * sigma_J) ** 2))


def _trif_pass(img: np.ndarray, params: TrifParams, trace: bool = False):
    height, width = img.shape
    h = params.search_radius
    road = road_map(img, params.d, params.K)
    P = mirror_extend(img, h)
    RP = mirror_extend(road, h)
    w_impulse_all = np.exp(-(RP**2) / (2.0 * params.sigma_I**2))
    num = np.zeros_like(img)
    den = np.zeros_like(img)
    ws = []
    ys = []
    for dr, dc in window_offsets(h):
        y = P[h + dr:h + dr + height, h + dc:h + dc + width]
        r = RP[h + dr:h + dr + height, h + dc:h + dc + width]
        w_spatial = np.exp(-(dr * dr + dc * dc) / (2.0 * params.sigma_S**2))
        w_radio = np.exp(-((y - img) ** 2) / (2.0 * params.sigma_R**2))
        w_impulse = w_impulse_all[h + dr:h + dr + height, h + dc:h + dc + width]
        ji = joint_impulsivity(road, r, params.sigma_J)
        w = w_spatial * w_radio**ji * w_impulse ** (1.0 - ji)
        num += w * y
        den += w
        if trace:
            ws.append(w)
            ys.append(y)
    out = num / den
    if trace:
        return out, np.stack(ws) / den, np.stack(ys)
    return out


def trif_denoise(img, params: TrifParams, *, trace: bool = False):
    """Normalised spatial x radiometric x impulsive weighted average over the search window.

    With ``trace=True`` the last pass also returns its normalised weights and
    candidate values, each shaped ``(M, H, W)``.
    """
    current = as_image(img)
    result = None
    for _ in range(params.iterations):
        result = _trif_pass(current, params, trace=trace)
        current = result[0] if trace else result
    return result


def sweep_grid(sigma: float) -> list[TrifParams]:
    """Small grid of settings around the default, searched for the best baseline score."""
    grid = []
    for s_s, r_mult, s_i, s_j, h in itertools.product(
        (0.5, 1.0, 2.0), (1.0, 2.0, 3.0), (40.0,), (50.0,), (1, 2)
    ):
        grid.append(
            TrifParams(
                sigma_S=s_s,
                sigma_R=max(r_mult * sigma, 1.0),
                sigma_I=s_i,
                sigma_J=s_j,
                search_radius=h,
            )
        )
    return grid
