import math

import numpy as np
import pytest

from owmf.metrics import QualityReport, mse, psnr, psnr_from_mse, quality


def test_mse_examples():
    a = np.zeros((4, 4))
    assert mse(a, a) == 0
    assert mse(a, a + 255) == 65025
    assert mse(a, a + 1) == 1


def test_psnr_examples():
    a = np.zeros((4, 4))
    assert math.isinf(psnr(a, a))
    assert psnr(a, a + 255) == 0.0
    assert round(psnr(a, a + 1), 4) == 48.1308


def test_psnr_symmetric(rng):
    a, b = rng.uniform(0, 255, (2, 8, 8))
    assert psnr(a, b) == psnr(b, a)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        mse(np.zeros((2, 2)), np.zeros((2, 3)))


def test_quality_report():
    q = quality(np.zeros((2, 2)), np.ones((2, 2)))
    assert q == QualityReport(1.0, psnr_from_mse(1.0))
    assert quality(np.zeros((2, 2)), np.zeros((2, 2))).to_dict()["psnr_db"] is None
