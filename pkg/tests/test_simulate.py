"""Tests for the Monte-Carlo entropy estimator and the orbit-cloud oracle."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from alphacf import _mcref
from alphacf.errors import DegenerateOrbit, DomainError
from alphacf.exact import as_exact, to_mpf
from alphacf.dynamics import orbit, synchronize
from alphacf.natext import fiber_at, measure_bracket, omega_decomposition
from alphacf.simulate import (
    HAS_KERNEL,
    McConfig,
    _check_resamples,
    backend_name,
    cloud_csv,
    estimate_json,
    mc_entropy,
    merge_estimates,
    simulate_domain,
)

F = Fraction

H_GAUSS = math.pi**2 / (6 * math.log(2))
H_PLATEAU = math.pi**2 / (6 * math.log((1 + math.sqrt(5)) / 2))


def outside_fraction(points, approx, pad=1e-7):
    """Fraction of cloud points outside the outer rectangle stacks."""
    bounds = sorted({p.x1 for p in approx.rectangles} | {p.x2 for p in approx.rectangles})
    edges = np.array([float(b) for b in bounds])
    fibers = []
    for k in range(len(bounds) - 1):
        mid = (bounds[k] + bounds[k + 1]) / 2
        fib = fiber_at(approx, mid)
        fibers.append([(float(to_mpf(lo, 80)) - pad, float(to_mpf(hi, 80)) + pad) for lo, hi in fib.intervals])
    strip = np.clip(np.searchsorted(edges, points[:, 0], side="right") - 1, 0, len(fibers) - 1)
    bad = 0
    for k, pairs in enumerate(fibers):
        ys = points[strip == k, 1]
        ok = np.zeros(len(ys), dtype=bool)
        for lo, hi in pairs:
            ok |= (ys >= lo) & (ys <= hi)
        bad += int((~ok).sum())
    return bad / len(points)


# -- entropy estimates -----------------------------------------------------------


def test_gauss_entropy():
    est, se = mc_entropy(1, McConfig(2_000_000, 20_000))
    assert se <= 0.01
    assert abs(est - H_GAUSS) <= 3 * se


def test_plateau_entropy():
    est, se = mc_entropy(F(1, 2), McConfig(2_000_000, 20_000))
    assert se <= 0.01
    assert abs(est - H_PLATEAU) <= 3 * se


def test_entropy_matches_certified_bracket():
    mb = measure_bracket(F(2, 5), 1e-9)
    target = math.pi**2 / (6 * float(mb.lo))
    est, se = mc_entropy(F(2, 5), McConfig(2_000_000, 20_000))
    assert abs(est - target) <= 3 * se


def test_runs_are_reproducible():
    cfg = McConfig(300_000, 3_000, seed=11)
    assert mc_entropy(1, cfg) == mc_entropy(1, cfg)
    other = mc_entropy(1, McConfig(300_000, 3_000, seed=12))
    assert other != mc_entropy(1, cfg)


def test_doubling_iterations_shrinks_stderr():
    ses = [
        mc_entropy(1, McConfig(n, n // 100, seed=11))[1]
        for n in (400_000, 800_000, 1_600_000)
    ]
    for wide, narrow in zip(ses, ses[1:]):
        assert 0.8 / math.sqrt(2) <= narrow / wide <= 1.2 / math.sqrt(2)


def test_double_precision_path():
    est, se = mc_entropy(1, McConfig(400_000, 4_000, seed=11, precision=64))
    assert abs(est - H_GAUSS) <= 4 * se


def test_config_validation():
    with pytest.raises(DomainError):
        McConfig(100, 100)
    with pytest.raises(DomainError):
        McConfig(100, -1)
    with pytest.raises(DomainError):
        McConfig(100, 0, seed=2**64)
    with pytest.raises(DomainError):
        McConfig(100, 0, precision=128)
    with pytest.raises(DomainError):
        mc_entropy(F(3, 2), McConfig(1000))


def test_degenerate_orbit_guard():
    _check_resamples(100, 10_000, False)  # exactly 1% passes
    with pytest.raises(DegenerateOrbit):
        _check_resamples(101, 10_000, False)
    with pytest.raises(DegenerateOrbit):
        _check_resamples(0, 10_000, True)


def test_merge_estimates():
    est, se = merge_estimates([(2.0, 0.1, 1000), (3.0, 0.1, 1000)])
    assert est == pytest.approx(2.5)
    assert se == pytest.approx(0.1 / math.sqrt(2))
    with pytest.raises(DomainError):
        merge_estimates([])


@pytest.mark.skipif(not HAS_KERNEL, reason="compiled kernel not built")
def test_backends_agree():
    import alphacf._mckernel as kernel

    rng = np.random.Generator(np.random.Philox(7))
    x0 = rng.random(64) - 0.5
    pool = rng.random((64, 8)) - 0.5
    sk = kernel.entropy_walk(0.5, x0, pool, 2000, 100)
    sr = _mcref.entropy_walk(0.5, x0, pool, 2000, 100)
    assert np.max(np.abs(np.asarray(sk[0], float) - np.asarray(sr[0], float))) <= 1e-9
    assert (sk[1], sk[2], sk[3]) == (sr[1], sr[2], sr[3])
    ck = kernel.domain_walk(0.5, x0, pool, 400, 200)
    cr = _mcref.domain_walk(0.5, x0, pool, 400, 200)
    assert np.max(np.abs(ck - cr)) <= 1e-12
    assert backend_name() == "compiled"


# -- orbit clouds ----------------------------------------------------------------


def test_cloud_on_the_right_family():
    a = 0.8
    pts = simulate_domain(F(4, 5), 2000, 400)
    assert pts.shape == (2000 * 200, 2)
    t_a = 1 / a - 1
    low = (pts[:, 1] <= 0.5 + 1e-12) & (pts[:, 0] >= a - 1 - 1e-12) & (pts[:, 0] <= a + 1e-12)
    high = (pts[:, 1] >= 0.5 - 1e-12) & (pts[:, 0] >= t_a - 1e-9) & (pts[:, 0] <= a + 1e-12)
    assert (low | high).mean() >= 0.999


def test_cloud_fills_the_unit_square():
    pts = simulate_domain(1, 500, 800, seed=3)
    ix = np.clip((pts[:, 0] * 32).astype(int), 0, 31)
    iy = np.clip((pts[:, 1] * 32).astype(int), 0, 31)
    assert len(set(zip(ix.tolist(), iy.tolist()))) == 1024


def test_cloud_inside_outer_approximation():
    for alpha in (F(2, 5), F(1, 2)):
        approx = omega_decomposition(alpha, synchronize(as_exact(alpha)), 1e-8)
        pts = simulate_domain(alpha, 800, 400, seed=9)
        assert outside_fraction(pts, approx) <= 0.001


def test_cloud_respects_fiber_boundaries():
    # the strips are delimited by the two endpoint orbits, and the cloud
    # fills each rectangle stack right up to its top
    a = F(113, 292)
    approx = omega_decomposition(a, synchronize(as_exact(a)), 1e-9)
    assert approx.certified
    bounds = sorted({p.x1 for p in approx.rectangles} | {p.x2 for p in approx.rectangles})
    lower = {s.next for s in orbit(a, a - 1, 4)}
    upper = {s.next for s in orbit(a, a, 4)}
    assert len(lower | upper | {F(0)}) == 9
    assert set(bounds[1:-1]) == lower | upper  # interior strip edges

    pts = simulate_domain(a, 800, 400, seed=5)
    assert outside_fraction(pts, approx) <= 0.001
    edges = np.array([float(b) for b in bounds])
    strip = np.clip(np.searchsorted(edges, pts[:, 0], side="right") - 1, 0, len(bounds) - 2)
    for k in range(len(bounds) - 1):
        ys = pts[strip == k, 1]
        assert len(ys) > 100
        fib = fiber_at(approx, (bounds[k] + bounds[k + 1]) / 2)
        sup = float(to_mpf(fib.hull()[1], 80))
        assert 0 <= sup - ys.max() <= 5e-3


# -- file emission ----------------------------------------------------------------


def test_cloud_csv_round_trip():
    pts = simulate_domain(F(1, 2), 20, 10, seed=1)
    text = cloud_csv(pts)
    lines = text.strip().splitlines()
    assert lines[0] == "x,y"
    back = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    assert np.array_equal(back, pts)


def test_estimate_json_round_trip():
    cfg = McConfig(300_000, 3_000, seed=11)
    est, se = mc_entropy(F(1, 2), cfg)
    blob = json.loads(estimate_json(F(1, 2), cfg, est, se))
    assert blob == {
        "alpha": "1/2",
        "h_est": est,
        "stderr": se,
        "iterations": 300_000,
        "seed": 11,
    }
