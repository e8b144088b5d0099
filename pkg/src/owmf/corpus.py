"""Locating the standard test images and the published reference scores."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .imagefile import read_image

CORPUS_ENV = "OWMF_CORPUS"
IMAGE_SUFFIXES = (".pgm", ".png", ".raw", ".f64", ".tif", ".tiff", ".bmp")

# Expected (width, height) of the standard images.
STANDARD_SIZES = {
    "lena": (512, 512),
    "barbara": (512, 512),
    "boat": (512, 512),
    "house": (256, 256),
    "baboon": (512, 512),
    "bridge": (512, 512),
    "pentagon": (512, 512),
}

# Published PSNR (dB) of the optimal weights mixed filter, keyed by
# (image, sigma, p). Used as reference columns in benchmark tables only.
PUBLISHED_OWMF = {
    ("lena", 15, 0.0): 33.75, ("barbara", 15, 0.0): 31.81, ("boat", 15, 0.0): 31.02, ("house", 15, 0.0): 33.82,
    ("lena", 20, 0.0): 32.42, ("barbara", 20, 0.0): 30.40, ("boat", 20, 0.0): 29.62, ("house", 20, 0.0): 32.71,
    ("lena", 25, 0.0): 31.40, ("barbara", 25, 0.0): 29.20, ("boat", 25, 0.0): 28.56, ("house", 25, 0.0): 31.61,
    ("baboon", 0, 0.2): 24.81, ("baboon", 0, 0.4): 22.12,
    ("bridge", 0, 0.2): 27.84, ("bridge", 0, 0.4): 24.91,
    ("lena", 0, 0.2): 35.50, ("lena", 0, 0.4): 32.19,
    ("pentagon", 0, 0.2): 30.91, ("pentagon", 0, 0.4): 28.34,
    ("lena", 10, 0.2): 33.18, ("lena", 10, 0.3): 32.05, ("lena", 10, 0.4): 30.90, ("lena", 10, 0.5): 29.52,
    ("bridge", 10, 0.2): 26.42, ("bridge", 10, 0.3): 25.19, ("bridge", 10, 0.4): 24.08, ("bridge", 10, 0.5): 23.08,
    ("boat", 10, 0.2): 29.57, ("boat", 10, 0.3): 28.22, ("boat", 10, 0.4): 27.05, ("boat", 10, 0.5): 25.92,
    ("barbara", 10, 0.2): 28.47, ("barbara", 10, 0.3): 26.46, ("barbara", 10, 0.4): 24.83, ("barbara", 10, 0.5): 23.62,
    ("lena", 20, 0.2): 30.87, ("lena", 20, 0.3): 30.09, ("lena", 20, 0.4): 29.19, ("lena", 20, 0.5): 28.14,
    ("bridge", 20, 0.2): 24.70, ("bridge", 20, 0.3): 23.97, ("bridge", 20, 0.4): 23.21, ("bridge", 20, 0.5): 22.45,
    ("boat", 20, 0.2): 27.79, ("boat", 20, 0.3): 26.93, ("boat", 20, 0.4): 25.97, ("boat", 20, 0.5): 25.08,
    ("barbara", 20, 0.2): 27.50, ("barbara", 20, 0.3): 25.95, ("barbara", 20, 0.4): 24.43, ("barbara", 20, 0.5): 23.33,
    ("lena", 30, 0.2): 29.12, ("lena", 30, 0.3): 28.49, ("lena", 30, 0.4): 27.76, ("lena", 30, 0.5): 26.75,
    ("bridge", 30, 0.2): 23.56, ("bridge", 30, 0.3): 23.02, ("bridge", 30, 0.4): 22.49, ("bridge", 30, 0.5): 21.86,
    ("boat", 30, 0.2): 26.41, ("boat", 30, 0.3): 25.79, ("boat", 30, 0.4): 25.08, ("boat", 30, 0.5): 24.26,
    ("barbara", 30, 0.2): 25.98, ("barbara", 30, 0.3): 24.81, ("barbara", 30, 0.4): 23.72, ("barbara", 30, 0.5): 22.81,
}

# Published trilateral filter scores for the mixed-noise cells.
PUBLISHED_TRIF = {
    ("lena", 10, 0.2): 31.48, ("lena", 10, 0.3): 29.87, ("lena", 10, 0.4): 28.57, ("lena", 10, 0.5): 27.31,
    ("bridge", 10, 0.2): 25.82, ("bridge", 10, 0.3): 24.92, ("bridge", 10, 0.4): 23.79, ("bridge", 10, 0.5): 22.28,
    ("boat", 10, 0.2): 28.61, ("boat", 10, 0.3): 27.54, ("boat", 10, 0.4): 26.22, ("boat", 10, 0.5): 24.74,
    ("barbara", 10, 0.2): 24.82, ("barbara", 10, 0.3): 24.00, ("barbara", 10, 0.4): 23.08, ("barbara", 10, 0.5): 22.33,
    ("lena", 20, 0.2): 28.85, ("lena", 20, 0.3): 28.02, ("lena", 20, 0.4): 27.10, ("lena", 20, 0.5): 25.68,
    ("bridge", 20, 0.2): 23.56, ("bridge", 20, 0.3): 23.01, ("bridge", 20, 0.4): 22.47, ("bridge", 20, 0.5): 21.72,
    ("boat", 20, 0.2): 26.18, ("boat", 20, 0.3): 25.46, ("boat", 20, 0.4): 24.75, ("boat", 20, 0.5): 23.79,
    ("barbara", 20, 0.2): 23.35, ("barbara", 20, 0.3): 22.95, ("barbara", 20, 0.4): 22.53, ("barbara", 20, 0.5): 21.84,
    ("lena", 30, 0.2): 27.26, ("lena", 30, 0.3): 26.57, ("lena", 30, 0.4): 25.58, ("lena", 30, 0.5): 23.99,
    ("bridge", 30, 0.2): 22.88, ("bridge", 30, 0.3): 22.42, ("bridge", 30, 0.4): 21.87, ("bridge", 30, 0.5): 20.98,
    ("boat", 30, 0.2): 25.11, ("boat", 30, 0.3): 24.55, ("boat", 30, 0.4): 23.80, ("boat", 30, 0.5): 22.62,
    ("barbara", 30, 0.2): 22.82, ("barbara", 30, 0.3): 22.46, ("barbara", 30, 0.4): 21.94, ("barbara", 30, 0.5): 21.10,
}


def corpus_dir(explicit=None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(CORPUS_ENV, "corpus"))


def find_image(image_id: str, directory=None) -> Path:
    root = corpus_dir(directory)
    for suffix in IMAGE_SUFFIXES:
        for name in (image_id, image_id.lower(), image_id.capitalize()):
            candidate = root / f"{name}{suffix}"
            if candidate.is_file():
                return candidate
    raise FileNotFoundError(f"no image '{image_id}' in corpus directory {root}")


def load_image(image_id: str, directory=None) -> np.ndarray:
    return read_image(find_image(image_id, directory))


def available(image_id: str, directory=None) -> bool:
    try:
        find_image(image_id, directory)
    except FileNotFoundError:
        return False
    return True
