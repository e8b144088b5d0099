import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect_bandwidth, optimal_weights_brute
from owmf.detect import DetectParams, j_map, roadg_map
from owmf.grid import PixelCoord, WindowSpec
from owmf.weights import (
    UNBOUNDED,
    OwmfParams,
    _box_weighted_sum,
    _optimal_weights_pass,
    kappa0_weight,
    kappa_gauss,
    kernel_table,
    owf_denoise,
    owmf_denoise,
    patch_distance,
    rho_plain,
    rho_weighted,
    solve_bandwidth,
    solve_bandwidth_stack,
    weighted_patch_distance,
)


# -- scalar pieces ---------------------------------------------------------

def test_patch_distance_examples(rng):
    img = rng.uniform(0, 255, (9, 9))
    assert patch_distance(img, PixelCoord(4, 4), PixelCoord(4, 4), 1) == 0
    assert patch_distance(np.full((9, 9), 3.0), PixelCoord(1, 2), PixelCoord(6, 5), 2) == 0
    two = np.zeros((3, 6))
    two[:, 3:] = 1.0
    assert patch_distance(two, PixelCoord(4, 1), PixelCoord(1, 1), 1) == 1.0


def test_rho_plain_examples():
    assert rho_plain(math.sqrt(2) * 4, 4) == 0
    assert rho_plain(7.5, 0) == 7.5
    assert round(rho_plain(3, 1), 4) == 1.5858


def test_kappa0_examples():
    assert math.isclose(kappa0_weight(0, 1), 1 / 9)
    assert math.isclose(kappa0_weight(1, 1), 1 / 9)
    assert math.isclose(kappa0_weight(0, 2), 34 / 225)
    assert math.isclose(kappa0_weight(2, 2), 0.04)
    with pytest.raises(ValueError):
        kappa0_weight(3, 2)


def test_kappa0_total_mass_is_eta():
    for eta in (1, 2, 5, 12):
        assert math.isclose(kernel_table("kappa0", eta).sum(), eta, rel_tol=1e-12)


def test_kappa_gauss_examples():
    assert kappa_gauss((0, 0), 3.0) == 1.0
    assert math.isclose(kappa_gauss((1, 0), 0.5), math.exp(-1))


def test_weighted_distance_reductions(rng):
    img = rng.uniform(0, 255, (10, 10))
    params = OwmfParams(window=WindowSpec(2, 2, 1), K=4, kernel="uniform")
    ones = np.ones_like(img)
    x, x0 = PixelCoord(3, 4), PixelCoord(6, 5)
    assert math.isclose(weighted_patch_distance(img, ones, x, x0, params), patch_distance(img, x, x0, 2), rel_tol=1e-12)
    const = np.full((10, 10), 9.0)
    assert weighted_patch_distance(const, ones, x, x0, params) == 0


def test_weighted_distance_hand_case():
    img = np.zeros((3, 6))
    img[:, 3:] = 1.0
    jmap = np.ones_like(img)
    jmap[0, 0] = 0.0  # one pixel of the reference patch is an impulse
    x, x0 = PixelCoord(4, 1), PixelCoord(1, 1)
    plain = OwmfParams(window=WindowSpec(1, 1, 1), K=4, kernel="uniform", j_normalizer=False)
    assert math.isclose(weighted_patch_distance(img, jmap, x, x0, plain) ** 2, 8 / 9)
    # Dividing by the J-weighted mass instead removes the deflation.
    j_norm = OwmfParams(window=WindowSpec(1, 1, 1), K=4, kernel="uniform", j_normalizer=True)
    assert math.isclose(weighted_patch_distance(img, jmap, x, x0, j_norm), 1.0)


def test_rho_weighted_examples():
    img = np.zeros((3, 6))
    img[:, 3:] = 10.0
    ones = np.ones_like(img)
    params = OwmfParams(window=WindowSpec(1, 1, 1), K=4, kernel="uniform")
    assert round(rho_weighted(img, ones, PixelCoord(4, 1), PixelCoord(1, 1), params, 5.0), 4) == 2.9289
    assert rho_weighted(np.full((3, 6), 4.0), ones, PixelCoord(4, 1), PixelCoord(1, 1), params, 0.0) == 0


# -- bandwidth -------------------------------------------------------------

def test_bandwidth_examples():
    assert solve_bandwidth([0.0, 0.0, 0.0], 3.0) is UNBOUNDED
    assert solve_bandwidth([0.0, 1.0], 1.0) == 2.0
    assert solve_bandwidth([1.0, 3.0], 1.0) == 2.0


def _kstar_ok(rhos, sigma, a):
    rhos = np.sort(rhos)
    s1 = np.cumsum(rhos)
    s2 = np.cumsum(rhos**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ak = np.where(s1 > 0, (sigma**2 + s2) / s1, np.inf)
    ok = ak >= rhos
    k = (int(np.argmin(ok)) if not ok.all() else rhos.size) - 1
    return ak[k] == a and (k == rhos.size - 1 or ak[k + 1] < rhos[k + 1])


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.one_of(st.just(0.0), st.floats(1e-6, 100), st.sampled_from([1.0, 2.5])), min_size=1, max_size=60),
    st.floats(0.1, 50),
)
def test_bandwidth_properties(rhos, sigma):
    rhos = np.array(rhos)
    a = solve_bandwidth(rhos, sigma)
    if not rhos.any():
        assert a is UNBOUNDED
        return
    assert math.isfinite(a)
    residual = float(np.sum(rhos * np.maximum(a - rhos, 0.0))) - sigma**2
    assert abs(residual) <= 1e-9 * max(1.0, sigma**2)
    assert math.isclose(a, bisect_bandwidth(rhos, sigma), rel_tol=1e-9)
    assert _kstar_ok(rhos, sigma, a)
    assert solve_bandwidth(rhos[::-1], sigma) == a


def test_bandwidth_stack_matches_scalar(rng):
    stack = rng.exponential(5.0, (40, 11, 13))
    stack[rng.random(stack.shape) < 0.3] = 0.0
    stack[:, 0, 0] = 0.0
    sigma = 4.0
    fast = solve_bandwidth_stack(np.sort(stack, axis=0), sigma)
    for r in range(11):
        for c in range(13):
            assert fast[r, c] == solve_bandwidth(stack[:, r, c], sigma)
    assert math.isinf(fast[0, 0])


# -- the engine ------------------------------------------------------------

@pytest.mark.parametrize("kind", ["uniform", "kappa0", "gaussian"])
def test_box_weighted_sum_matches_direct(kind, rng):
    eta, rows, cols = 3, 5, 7
    E = rng.uniform(0, 1, (rows + 2 * eta, cols + 2 * eta))
    kern = kernel_table(kind, eta, 2.0)
    direct = np.zeros((rows, cols))
    for r in range(rows):
        for c in range(cols):
            direct[r, c] = np.sum(kern * E[r:r + 2 * eta + 1, c:c + 2 * eta + 1])
    assert np.allclose(_box_weighted_sum(E, eta, kind, 2.0, rows, cols), direct, rtol=1e-12, atol=0)


@pytest.mark.parametrize("kind", ["uniform", "kappa0", "gaussian"])
def test_engine_matches_per_pixel_oracle(kind, rng):
    img = rng.integers(0, 256, (9, 10)).astype(float)
    h, eta, sigma = 2, 2, 12.0
    jd = j_map(roadg_map(img, DetectParams(1, 4, sigma)), 30.0)
    ja = j_map(roadg_map(img, DetectParams(1, 4, sigma)), 20.0)
    fast = _optimal_weights_pass(img, sigma, h, eta, kind, 3.0, jd, ja, j_normalizer=True, tile_rows=4)
    slow = optimal_weights_brute(img, sigma, h, eta, kind, jd, ja, j_normalizer=True, h_g=3.0)
    assert np.allclose(fast, slow, rtol=0, atol=1e-9)


def test_engine_plain_normalizer_matches_oracle(rng):
    img = rng.integers(0, 256, (8, 8)).astype(float)
    jd = j_map(roadg_map(img, DetectParams(1, 4, 5.0)), 25.0)
    fast = _optimal_weights_pass(img, 5.0, 2, 1, "kappa0", 12.0, jd, jd, j_normalizer=False)
    slow = optimal_weights_brute(img, 5.0, 2, 1, "kappa0", jd, jd, j_normalizer=False)
    assert np.allclose(fast, slow, rtol=0, atol=1e-9)


def test_owf_matches_oracle(rng):
    img = rng.normal(100, 20, (9, 9))
    fast = owf_denoise(img, 10.0, WindowSpec(2, 2, 1))
    slow = optimal_weights_brute(img, 10.0, 2, 2, "uniform")
    assert np.allclose(fast, slow, rtol=0, atol=1e-9)


def test_engine_tiling_is_exact(rng):
    img = rng.uniform(0, 255, (21, 17))
    a = _optimal_weights_pass(img, 8.0, 2, 3, "kappa0", tile_rows=32)
    b = _optimal_weights_pass(img, 8.0, 2, 3, "kappa0", tile_rows=5)
    assert np.array_equal(a, b)


def test_filters_on_constant_image():
    img = np.full((20, 20), 77.0)
    assert np.array_equal(owf_denoise(img, 0.0, WindowSpec(3, 3, 2)), img)
    assert np.array_equal(owmf_denoise(img, 0.0, 0.2, OwmfParams(window=WindowSpec(3, 3, 2))), img)


def test_owf_trace_weights(rng):
    img = rng.uniform(0, 255, (16, 16))
    out, tr = owf_denoise(img, 15.0, WindowSpec(2, 3, 1), trace=True)
    assert tr.weights.shape == (25, 16, 16)
    assert np.all(tr.weights >= 0)
    assert np.allclose(tr.weights.sum(axis=0), 1.0, atol=1e-12)
    assert np.allclose((tr.weights * tr.candidates).sum(axis=0), out, atol=1e-9)


def test_owmf_denoises_mixed_noise(rng):
    clean = np.add.outer(np.arange(48.0), np.arange(48.0)) * 2.0
    noisy = clean + rng.normal(0, 10, clean.shape)
    hits = rng.random(clean.shape) < 0.2
    noisy[hits] = rng.uniform(0, 255, hits.sum())
    out = owmf_denoise(noisy, 10.0, 0.2, OwmfParams(window=WindowSpec(4, 4, 2)))
    assert np.mean((out - clean) ** 2) < 0.2 * np.mean((noisy - clean) ** 2)


def test_owmf_iterations_rerun_pipeline(rng):
    img = rng.uniform(0, 255, (20, 20))
    window = WindowSpec(2, 2, 2)
    once = owmf_denoise(img, 5.0, 0.3, OwmfParams(window=window))
    twice = owmf_denoise(img, 5.0, 0.3, OwmfParams(window=window, iterations=2))
    assert np.array_equal(twice, owmf_denoise(once, 5.0, 0.3, OwmfParams(window=window)))


def test_owmf_params_validation():
    with pytest.raises(ValueError):
        OwmfParams(kernel="box")
    with pytest.raises(ValueError):
        OwmfParams(iterations=0)
    with pytest.raises(ValueError):
        OwmfParams(H1=-1.0)
    with pytest.raises(ValueError):
        OwmfParams(K=30)
    with pytest.raises(ValueError):
        OwmfParams(sigma_floor=-1)


def test_owmf_resolve_defaults_and_overrides():
    assert OwmfParams().resolve(0.2, 20) == pytest.approx((14.0, 23.0))
    assert OwmfParams(H1=3.0, H2=4.0).resolve(0.5, 10) == (3.0, 4.0)
    with pytest.raises(ValueError):
        OwmfParams().resolve(1.0, 100)  # derived H1 turns negative


def test_negative_sigma_rejected():
    with pytest.raises(ValueError):
        owf_denoise(np.zeros((8, 8)), -1.0)
    with pytest.raises(ValueError):
        owmf_denoise(np.zeros((8, 8)), -1.0)
