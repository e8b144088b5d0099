"""Reading and writing grayscale images: PGM (P5/P2), PNG and a raw float64 format.

8-bit outputs are clamped to ``[0, 255]`` and rounded half away from zero.
The raw format is a 16-byte header (magic ``OWMFRAW1``, little-endian uint32
width and height) followed by little-endian float64 samples in row-major
order; it round-trips unclamped values exactly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import as_image

RAW_MAGIC = b"OWMFRAW1"
RAW_SUFFIXES = (".raw", ".f64")


class ImageFormatError(ValueError):
    pass


def quantize(img) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero."""
    clamped = np.clip(np.asarray(img, dtype=np.float64), 0.0, 255.0)
    return np.floor(clamped + 0.5).astype(np.uint8)


def _pgm_tokens(data: bytes, count: int):
    """Return the first ``count`` header tokens and the offset just past them."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    (magic, w, h, maxval), pos = _pgm_tokens(data, 4)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise ImageFormatError(f"bad PGM header in {path}") from exc
    if width < 1 or height < 1 or not 0 < maxval <= 255:
        raise ImageFormatError(f"unsupported PGM geometry/maxval in {path}")
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the raster.
        raster = data[pos + 1:pos + 1 + width * height]
        if len(raster) != width * height:
            raise ImageFormatError(f"truncated PGM raster in {path}")
        values = np.frombuffer(raster, dtype=np.uint8)
    elif magic == b"P2":
        values = np.array(data[pos:].split(), dtype=np.int64)
        if values.size < width * height:
            raise ImageFormatError(f"truncated PGM raster in {path}")
        values = values[:width * height]
    else:
        raise ImageFormatError(f"not a grayscale PGM file: {path}")
    return values.reshape(height, width).astype(np.float64)


def write_pgm(path, img, ascii: bool = False) -> None:
    q = quantize(img)
    height, width = q.shape
    if ascii:
        lines = [" ".join(str(v) for v in row) for row in q]
        Path(path).write_text(f"P2\n{width} {height}\n255\n" + "\n".join(lines) + "\n")
    else:
        Path(path).write_bytes(f"P5\n{width} {height}\n255\n".encode() + q.tobytes())


def read_raw(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:8] != RAW_MAGIC or len(data) < 16:
        raise ImageFormatError(f"not an OWMF raw float image: {path}")
    width, height = struct.unpack("<II", data[8:16])
    body = data[16:]
    if len(body) != 8 * width * height:
        raise ImageFormatError(f"raw image size mismatch in {path}")
    return np.frombuffer(body, dtype="<f8").reshape(height, width).astype(np.float64)


def write_raw(path, img) -> None:
    img = as_image(img)
    height, width = img.shape
    Path(path).write_bytes(RAW_MAGIC + struct.pack("<II", width, height) + img.astype("<f8").tobytes())


def _pil():
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise ImageFormatError("PNG support needs Pillow (pip install 'artifact[png]')") from exc
    return Image


def read_png(path) -> np.ndarray:
    Image = _pil()
    try:
        im = Image.open(path)
    except FileNotFoundError:
        raise
    except OSError as exc:
        raise ImageFormatError(f"cannot decode image {path}: {exc}") from exc
    with im:
        if im.mode not in ("L", "P", "I", "I;16", "1"):
            # Colour input is converted with the ITU-R 601 luma weights.
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
            return np.floor(rgb @ np.array([0.299, 0.587, 0.114]) + 0.5)
        return np.asarray(im.convert("L"), dtype=np.float64)


def write_png(path, img) -> None:
    Image = _pil()
    Image.fromarray(quantize(img), mode="L").save(path)


def read_image(path) -> np.ndarray:
    path = Path(path)
    suffix = path.suffix.lower()
    head = path.read_bytes()[:8]
    if head == RAW_MAGIC:
        return read_raw(path)
    if head[:2] in (b"P5", b"P2") or suffix == ".pgm":
        return read_pgm(path)
    if suffix in RAW_SUFFIXES:
        return read_raw(path)
    # Anything else (PNG, TIFF, BMP, ...) goes through Pillow.
    return read_png(path)


def write_image(path, img, raw: bool = False) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if raw or suffix in RAW_SUFFIXES:
        write_raw(path, img)
    elif suffix == ".png":
        write_png(path, img)
    else:
        write_pgm(path, img)
