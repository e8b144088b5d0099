"""Denoising of grayscale images corrupted by mixed Gaussian and random-valued impulse noise."""

from .detect import DetectParams, h1, h2, j_map, road_map, roadg_map
from .grid import PixelCoord, WindowSpec, mirror_extend
from .metrics import QualityReport, mse, psnr, quality
from .noise import NoiseSpec, add_gaussian, add_impulse, add_mixed
from .trilateral import TrifParams, trif_denoise
from .weights import UNBOUNDED, OwmfParams, owf_denoise, owmf_denoise, solve_bandwidth

__all__ = [
    "DetectParams", "h1", "h2", "j_map", "road_map", "roadg_map",
    "PixelCoord", "WindowSpec", "mirror_extend",
    "QualityReport", "mse", "psnr", "quality",
    "NoiseSpec", "add_gaussian", "add_impulse", "add_mixed",
    "TrifParams", "trif_denoise",
    "UNBOUNDED", "OwmfParams", "owf_denoise", "owmf_denoise", "solve_bandwidth",
]

__version__ = "0.1.0"
