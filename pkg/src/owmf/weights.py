"""Optimal-weights filtering: patch distances, kernels, bandwidth and the OWF/OWMF filters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .detect import DetectParams, h1, h2, j_map, roadg_map
from .grid import PixelCoord, WindowSpec, as_image, mirror_extend, mirror_index, window_offsets

SQRT2 = math.sqrt(2.0)

# Returned by solve_bandwidth when every brightness-variation estimate is 0;
# weights then degenerate to their uniform (or J-weighted) limit.
UNBOUNDED = math.inf

KERNELS = ("kappa0", "uniform", "gaussian")


@dataclass(frozen=True)
class OwmfParams:
    """Tuning of the mixed filter.

    ``H1``/``H2`` left as ``None`` are derived from the impulse probability
    hint and the noise level. ``j_normalizer`` divides the weighted patch
    norm by the J-weighted kernel mass; set it to ``False`` to divide by the
    plain kernel mass. ``sigma_floor`` is the smallest noise level used when
    estimating brightness variations and the bandwidth, so that pure impulse
    noise (``sigma == 0``) still gets smoothed; detection always uses the
    true ``sigma``.
    """

    window: WindowSpec = field(default_factory=WindowSpec)
    K: int = 12
    H1: Optional[float] = None
    H2: Optional[float] = None
    kernel: str = "kappa0"
    h_g: float = 12.0
    iterations: int = 1
    j_normalizer: bool = True
    sigma_floor: float = 3.0

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        if not 1 <= self.iterations <= 5:
            raise ValueError("iterations must lie in [1, 5]")
        for name in ("H1", "H2"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if self.sigma_floor < 0:
            raise ValueError("sigma_floor must be >= 0")
        if self.kernel == "gaussian" and not self.h_g > 0:
            raise ValueError("h_g must be > 0")
        DetectParams(self.window.detection_radius, self.K)

    def resolve(self, p_hint: float, sigma: float) -> tuple[float, float]:
        H1 = self.H1 if self.H1 is not None else h1(p_hint, sigma)
        H2 = self.H2 if self.H2 is not None else h2(p_hint)
        if not (H1 > 0 and H2 > 0):
            raise ValueError(
                f"derived H1={H1:.4g}, H2={H2:.4g} not positive for p={p_hint}, "
                f"sigma={sigma}; pass H1/H2 explicitly"
            )
        return H1, H2


# -- scalar building blocks ---------------------------------------------------

def triangular(t):
    return np.maximum(1.0 - np.abs(t), 0.0)


def rho_plain(dist: float, sigma: float) -> float:
    return max(dist - SQRT2 * sigma, 0.0)


def kappa0_weight(j: int, eta: int) -> float:
    """Weight of an offset at Chebyshev distance ``j`` from the patch center."""
    if not 0 <= j <= eta:
        raise ValueError(f"need 0 <= j <= eta, got j={j}, eta={eta}")
    return sum(1.0 / (2 * k + 1) ** 2 for k in range(max(1, j), eta + 1))


def kappa_gauss(offset, h_g: float) -> float:
    if not h_g > 0:
        raise ValueError("h_g must be > 0")
    a, b = offset
    return math.exp(-(a * a + b * b) / (2.0 * h_g))


def kernel_table(kind: str, eta: int, h_g: float = 12.0) -> np.ndarray:
    """Patch kernel as a ``(2*eta+1, 2*eta+1)`` array indexed by offset + eta."""
    offs = np.arange(-eta, eta + 1)
    if kind == "uniform":
        return np.ones((offs.size, offs.size))
    if kind == "gaussian":
        g = np.exp(-(offs.astype(float) ** 2) / (2.0 * h_g))
        return np.outer(g, g)
    if kind == "kappa0":
        cheb = np.maximum(np.abs(offs)[:, None], np.abs(offs)[None, :])
        values = np.array([kappa0_weight(j, eta) for j in range(eta + 1)])
        return values[cheb]
    raise ValueError(f"unknown kernel {kind!r}")


def _sample(img, col, row):
    height, width = img.shape
    return img[mirror_index(row, height), mirror_index(col, width)]


def patch_distance(img, x: PixelCoord, x0: PixelCoord, eta: int) -> float:
    """Root mean squared difference between the patches centred at ``x`` and ``x0``."""
    img = np.asarray(img, dtype=np.float64)
    m = (2 * eta + 1) ** 2
    total = 0.0
    for dr in range(-eta, eta + 1):
        for dc in range(-eta, eta + 1):
            diff = _sample(img, x[0] + dc, x[1] + dr) - _sample(img, x0[0] + dc, x0[1] + dr)
            total += diff * diff
    return math.sqrt(total / m)


def weighted_patch_distance(img, jmap, x: PixelCoord, x0: PixelCoord, params: OwmfParams) -> float:
    """Patch distance with per-pixel J weights and a patch kernel on the offsets."""
    img = np.asarray(img, dtype=np.float64)
    jmap = np.asarray(jmap, dtype=np.float64)
    eta = params.window.patch_radius
    kern = kernel_table(params.kernel, eta, params.h_g)
    num = 0.0
    mass = 0.0
    for dr in range(-eta, eta + 1):
        for dc in range(-eta, eta + 1):
            k = kern[dr + eta, dc + eta]
            jj = _sample(jmap, x[0] + dc, x[1] + dr) * _sample(jmap, x0[0] + dc, x0[1] + dr)
            diff = _sample(img, x[0] + dc, x[1] + dr) - _sample(img, x0[0] + dc, x0[1] + dr)
            num += k * jj * diff * diff
            mass += k * jj if params.j_normalizer else k
    return math.sqrt(num / mass) if mass > 0 else 0.0


def rho_weighted(img, jmap, x: PixelCoord, x0: PixelCoord, params: OwmfParams, sigma: float) -> float:
    return rho_plain(weighted_patch_distance(img, jmap, x, x0, params), sigma)


def solve_bandwidth(rhos, sigma: float) -> float:
    """Bandwidth ``a`` solving ``sum(rho * (a - rho)^+) = sigma^2``.

    Scans the sorted estimates, keeping the last ``a_k`` for which
    ``a_k >= rho_k``. Returns ``UNBOUNDED`` when every estimate is 0.
    """
    rhos = np.sort(np.asarray(rhos, dtype=np.float64).ravel())
    if rhos.size == 0:
        raise ValueError("rhos must be non-empty")
    var = float(sigma) ** 2
    s1 = 0.0
    s2 = 0.0
    a = UNBOUNDED
    for rho in rhos:
        s1 += rho
        s2 += rho * rho
        if s1 <= 0.0:
            continue
        a_k = (var + s2) / s1
        if a_k >= rho:
            a = a_k
        else:
            break
    return a


def solve_bandwidth_stack(sorted_rhos: np.ndarray, sigma: float) -> np.ndarray:
    """Vectorised ``solve_bandwidth`` over axis 0 of an already sorted stack."""
    var = float(sigma) ** 2
    s1 = np.cumsum(sorted_rhos, axis=0)
    s2 = np.cumsum(sorted_rhos * sorted_rhos, axis=0)
    positive = s1 > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(positive, (var + s2) / np.where(positive, s1, 1.0), UNBOUNDED)
    ok = a >= sorted_rhos
    # Length of the leading run of satisfied conditions.
    failed = ~ok
    first_fail = np.where(failed.any(axis=0), failed.argmax(axis=0), ok.shape[0])
    kstar = np.maximum(first_fail - 1, 0)
    best = np.take_along_axis(a, kstar[None], axis=0)[0]
    return np.where(first_fail == 0, UNBOUNDED, best)


# -- the filter engine -----------------------------------------------------------

def _box_weighted_sum(E: np.ndarray, eta: int, kind: str, h_g: float, rows: int, cols: int) -> np.ndarray:
    """``sum_{a,b} kernel(a, b) * E[r + eta + a, c + eta + b]`` for an output of ``rows x cols``."""
    if kind == "kappa0":
        # kappa0 is the sum over k = 1..eta of the box of radius k scaled by
        # 1/(2k+1)^2; grow the box one ring at a time.
        hk = E[:, eta:eta + cols].copy()
        vk = E[eta:eta + rows, :].copy()
        box = E[eta:eta + rows, eta:eta + cols].copy()
        acc = np.zeros((rows, cols))
        for k in range(1, eta + 1):
            hk += E[:, eta - k:eta - k + cols]
            hk += E[:, eta + k:eta + k + cols]
            box += hk[eta - k:eta - k + rows]
            box += hk[eta + k:eta + k + rows]
            box += vk[:, eta - k:eta - k + cols]
            box += vk[:, eta + k:eta + k + cols]
            vk += E[eta - k:eta - k + rows]
            vk += E[eta + k:eta + k + rows]
            acc += box * (1.0 / (2 * k + 1) ** 2)
        return acc
    offs = np.arange(-eta, eta + 1)
    if kind == "uniform":
        g = np.ones(offs.size)
    else:
        g = np.exp(-(offs.astype(float) ** 2) / (2.0 * h_g))
    horiz = np.zeros((E.shape[0], cols))
    for i, b in enumerate(offs):
        horiz += g[i] * E[:, eta + b:eta + b + cols]
    out = np.zeros((rows, cols))
    for i, a in enumerate(offs):
        out += g[i] * horiz[eta + a:eta + a + rows]
    return out


@dataclass
class FilterTrace:
    """Per-pixel diagnostics collected by the engine on request."""

    bandwidth: np.ndarray
    weights: np.ndarray  # (M, H, W) normalised weights, search offsets row-major
    candidates: np.ndarray  # (M, H, W) candidate intensities


def _optimal_weights_pass(
    img: np.ndarray,
    sigma: float,
    h: int,
    eta: int,
    kernel: str = "uniform",
    h_g: float = 12.0,
    j_dist: Optional[np.ndarray] = None,
    j_avg: Optional[np.ndarray] = None,
    j_normalizer: bool = False,
    tile_rows: int = 32,
    trace: bool = False,
):
    height, width = img.shape
    pad = h + eta
    P = mirror_extend(img, pad)
    JP = mirror_extend(j_dist, pad) if j_dist is not None else None
    AP = mirror_extend(j_avg, h) if j_avg is not None else None
    mass = float(kernel_table(kernel, eta, h_g).sum())
    offsets = window_offsets(h)
    out = np.empty_like(img)
    if trace:
        all_w = np.empty((len(offsets), height, width))
        all_y = np.empty((len(offsets), height, width))
        all_a = np.empty((height, width))
    rho = np.empty((len(offsets), tile_rows, width))

    for r0 in range(0, height, tile_rows):
        rows = min(tile_rows, height - r0)
        rho_t = rho[:, :rows]
        # Patch region around the tile's pixels, in padded coordinates.
        base_r = r0 + h
        base_c = h
        ref = P[base_r:base_r + rows + 2 * eta, base_c:base_c + width + 2 * eta]
        if JP is not None:
            jref = JP[base_r:base_r + rows + 2 * eta, base_c:base_c + width + 2 * eta]
        for i, (dr, dc) in enumerate(offsets):
            cand = P[base_r + dr:base_r + dr + rows + 2 * eta, base_c + dc:base_c + dc + width + 2 * eta]
            E = cand - ref
            E *= E
            if JP is not None:
                jj = JP[base_r + dr:base_r + dr + rows + 2 * eta, base_c + dc:base_c + dc + width + 2 * eta] * jref
                E *= jj
            num = _box_weighted_sum(E, eta, kernel, h_g, rows, width)
            if j_normalizer and JP is not None:
                denom = _box_weighted_sum(jj, eta, kernel, h_g, rows, width)
                with np.errstate(divide="ignore", invalid="ignore"):
                    d2 = np.where(denom > 0, num / np.where(denom > 0, denom, 1.0), 0.0)
            else:
                d2 = num / mass
            np.maximum(d2, 0.0, out=d2)
            np.sqrt(d2, out=d2)
            d2 -= SQRT2 * sigma
            np.maximum(d2, 0.0, out=rho_t[i])
        a = solve_bandwidth_stack(np.sort(rho_t, axis=0), sigma)
        unbounded = np.isinf(a)
        a_safe = np.where(unbounded, 1.0, a)
        num = np.zeros((rows, width))
        den = np.zeros((rows, width))
        ws = []
        for i, (dr, dc) in enumerate(offsets):
            w = np.where(unbounded, 1.0, triangular(rho_t[i] / a_safe))
            if AP is not None:
                w = w * AP[r0 + h + dr:r0 + h + dr + rows, h + dc:h + dc + width]
            y = P[r0 + pad + dr:r0 + pad + dr + rows, pad + dc:pad + dc + width]
            num += w * y
            den += w
            if trace:
                ws.append(w)
                all_y[i, r0:r0 + rows] = y
        out[r0:r0 + rows] = num / den
        if trace:
            all_w[:, r0:r0 + rows] = np.stack(ws) / den
            all_a[r0:r0 + rows] = a
    if trace:
        return out, FilterTrace(all_a, all_w, all_y)
    return out


def owf_denoise(img, sigma: float, window: WindowSpec = WindowSpec(), *, trace: bool = False):
    """Optimal Weights Filter for additive Gaussian noise of known ``sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    img = as_image(img)
    return _optimal_weights_pass(
        img, sigma, window.search_radius, window.patch_radius, kernel="uniform", trace=trace
    )


def owmf_denoise(img, sigma: float, p_hint: float = 0.0, params: OwmfParams = OwmfParams(), *, trace: bool = False):
    """Optimal Weights Mixed Filter for Gaussian noise mixed with random impulses.

    ``sigma`` is the Gaussian standard deviation, ``p_hint`` the impulse
    probability used to derive ``H1``/``H2`` when they are not given.
    Each extra iteration reruns detection and filtering on the previous output.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    img = as_image(img)
    H1, H2 = params.resolve(p_hint, sigma)
    detect = DetectParams(params.window.detection_radius, params.K, sigma)
    weight_sigma = max(sigma, params.sigma_floor)
    current = img
    result = None
    for _ in range(params.iterations):
        roadg = roadg_map(current, detect)
        result = _optimal_weights_pass(
            current,
            weight_sigma,
            params.window.search_radius,
            params.window.patch_radius,
            kernel=params.kernel,
            h_g=params.h_g,
            j_dist=j_map(roadg, H1),
            j_avg=j_map(roadg, H2),
            j_normalizer=params.j_normalizer,
            trace=trace,
        )
        current = result[0] if trace else result
    return result
