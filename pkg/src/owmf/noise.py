"""Seeded synthesis of Gaussian, random-impulse and mixed noise.

Every draw comes from a Philox counter-based generator keyed by
``(seed, stream)``, and pixel ``i`` (row-major) always consumes the same
counter positions, so a given seed produces the same noise regardless of how
the work is scheduled. Gaussian variates use the Box-Muller transform on two
53-bit uniforms per pixel.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .grid import as_image

GAUSS_STREAM = 0
MASK_STREAM = 1
VALUE_STREAM = 2


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0
    p: float = 0.0
    impulse_lo: float = 0.0
    impulse_hi: float = 255.0
    seed: int = 0

    def __post_init__(self):
        _check_sigma(self.sigma)
        _check_impulse(self.p, self.impulse_lo, self.impulse_hi)
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


def _check_sigma(sigma):
    if not sigma >= 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")


def _check_impulse(p, lo, hi):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not lo <= hi:
        raise ValueError(f"impulse range is empty: [{lo}, {hi}]")


def _uniform(seed: int, stream: int, count: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=[int(seed) % 2**64, stream]))
    return gen.random(count)


def _standard_normal(seed: int, shape) -> np.ndarray:
    n = int(np.prod(shape))
    u = _uniform(seed, GAUSS_STREAM, 2 * n).reshape(n, 2)
    # 1 - u lies in (0, 1], keeping the log finite.
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    return (radius * np.cos(2.0 * np.pi * u[:, 1])).reshape(shape)


def add_gaussian(img, sigma: float, seed: int) -> np.ndarray:
    _check_sigma(sigma)
    img = as_image(img)
    if sigma == 0:
        return img.copy()
    return img + sigma * _standard_normal(seed, img.shape)


def add_impulse(img, p: float, c: float = 0.0, d: float = 255.0, seed: int = 0):
    """Replace each pixel with probability ``p`` by a Uniform[c, d] value.

    Returns ``(noisy, mask)`` where ``mask`` marks the replaced pixels.
    """
    _check_impulse(p, c, d)
    img = as_image(img)
    n = img.size
    mask = (_uniform(seed, MASK_STREAM, n) < p).reshape(img.shape)
    values = (c + (d - c) * _uniform(seed, VALUE_STREAM, n)).reshape(img.shape)
    return np.where(mask, values, img), mask


def add_mixed(img, spec: NoiseSpec):
    """Impulse pixels get a uniform value only; the rest get Gaussian noise."""
    gaussian = add_gaussian(img, spec.sigma, spec.seed)
    return add_impulse(gaussian, spec.p, spec.impulse_lo, spec.impulse_hi, spec.seed)


def expected_mixed_mse(img, spec: NoiseSpec) -> float:
    """Closed-form E[MSE] between ``add_mixed(img, spec)`` and ``img``.

    An impulse pixel contributes ``E(n - f)^2 = (f - mu)^2 + (d - c)^2 / 12``
    with ``mu = (c + d) / 2``; the others contribute ``sigma^2``.
    """
    img = as_image(img)
    mu = 0.5 * (spec.impulse_lo + spec.impulse_hi)
    width = spec.impulse_hi - spec.impulse_lo
    impulse = float(np.mean((img - mu) ** 2)) + width**2 / 12.0
    return spec.p * impulse + (1.0 - spec.p) * spec.sigma**2
