"""Mean squared error and peak signal-to-noise ratio on 8-bit scale."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PEAK = 255.0


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float  # math.inf for identical images

    def to_dict(self) -> dict:
        return {"mse": self.mse, "psnr_db": None if math.isinf(self.psnr_db) else self.psnr_db}


def mse(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr_from_mse(value: float) -> float:
    if value == 0:
        return math.inf
    return 10.0 * math.log10(PEAK**2 / value)


def psnr(a, b) -> float:
    """PSNR in dB; ``math.inf`` when the images are identical."""
    return psnr_from_mse(mse(a, b))


def quality(truth, estimate) -> QualityReport:
    value = mse(truth, estimate)
    return QualityReport(value, psnr_from_mse(value))
