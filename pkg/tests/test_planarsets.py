import numpy as np
import pytest

from specrange.planarsets import (ConvergenceReport, PointCloud, Polygon,
                                  contains, convex_hull, directed_hausdorff,
                                  hausdorff_cauchy_check, hausdorff_distance,
                                  kuratowski_limits, polygon_distance,
                                  polygon_hausdorff, read_cloud_csv,
                                  read_polygon_csv, star_violation,
                                  write_cloud_csv, write_polygon_csv)


def cloud(*pts, resolution=0.0):
    return PointCloud(np.asarray(pts, dtype=complex), resolution)


def random_cloud(rng, size=40, scale=1.0):
    return PointCloud(scale * (rng.standard_normal(size)
                               + 1j * rng.standard_normal(size)))


# ---------------------------------------------------------------------------
# PointCloud basics
# ---------------------------------------------------------------------------

def test_cloud_rejects_empty_and_nonfinite():
    with pytest.raises(ValueError):
        PointCloud(np.array([], dtype=complex))
    with pytest.raises(ValueError):
        PointCloud(np.array([np.nan + 0j]))
    with pytest.raises(ValueError):
        PointCloud(np.array([1.0 + 1j * np.inf]))
    with pytest.raises(ValueError):
        PointCloud(np.array([0j]), resolution=-1.0)


def test_cloud_points_immutable():
    c = cloud(0, 1)
    with pytest.raises(ValueError):
        c.points[0] = 5.0


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------

def test_hausdorff_singletons():
    assert hausdorff_distance(cloud(0), cloud(0)) == 0.0
    assert hausdorff_distance(cloud(0), cloud(1)) == 1.0
    assert hausdorff_distance(cloud(0, 1), cloud(0)) == 1.0


def test_hausdorff_metric_axioms():
    rng = np.random.default_rng(11)
    for _ in range(60):
        a, b, c = (random_cloud(rng) for _ in range(3))
        dab = hausdorff_distance(a, b)
        assert dab == hausdorff_distance(b, a)
        assert dab >= 0.0
        assert hausdorff_distance(a, a) == 0.0
        assert (hausdorff_distance(a, c)
                <= dab + hausdorff_distance(b, c) + 1e-12)


def test_hausdorff_zero_iff_equal_sets():
    a = cloud(0, 1, 1j)
    b = cloud(1j, 0, 1, 0)  # same set, different multiplicities/order
    assert hausdorff_distance(a, b) == 0.0
    assert hausdorff_distance(a, cloud(0, 1, 1j, 2)) > 0.0


def test_hausdorff_large_clouds_kdtree_path():
    rng = np.random.default_rng(1)
    a = random_cloud(rng, size=3000)
    b = PointCloud(a.points + 0.25)
    d_dense = max(np.abs(a.points[:, None] - b.points[None, :]).min(1).max(),
                  np.abs(b.points[:, None] - a.points[None, :]).min(1).max())
    assert hausdorff_distance(a, b) == pytest.approx(d_dense, abs=1e-12)


# ---------------------------------------------------------------------------
# Convex hull and containment
# ---------------------------------------------------------------------------

def test_hull_triangle():
    hull = convex_hull(cloud(0, 1, 1j, 0.25 + 0.25j))
    assert len(hull) == 3
    assert set(hull.vertices.tolist()) == {0, 1, 1j}
    assert hull.area() == pytest.approx(0.5)


def test_hull_collinear_gives_segment():
    hull = convex_hull(cloud(0, 1, 2))
    assert len(hull) == 2
    assert set(hull.vertices.tolist()) == {0, 2}


def test_hull_single_point():
    hull = convex_hull(cloud(3 + 4j, 3 + 4j))
    assert len(hull) == 1


def test_hull_unit_disk_sample():
    rng = np.random.default_rng(7)
    r = np.sqrt(rng.random(1000))
    phi = 2 * np.pi * rng.random(1000)
    pts = r * np.exp(1j * phi)
    hull = convex_hull(PointCloud(pts))
    # hull stays inside the closed disk, and its area cannot beat pi
    assert np.abs(hull.vertices).max() <= 1.0 + 1e-12
    assert hull.area() <= np.pi
    for z in pts:
        assert contains(hull, z, 1e-9)


def test_contains_triangle_and_segment():
    tri = convex_hull(cloud(0, 1, 1j))
    assert contains(tri, 0.2 + 0.2j, 0.0)
    assert not contains(tri, 1 + 1j, 0.0)
    seg = convex_hull(cloud(0, 2))
    assert contains(seg, 1.0, 1e-12)
    assert not contains(seg, 1.0 + 0.1j, 1e-3)


def test_polygon_distance_and_hausdorff():
    tri = Polygon(np.array([0, 2, 2j]))
    assert polygon_distance(tri, 0.5 + 0.5j) == 0.0
    assert polygon_distance(tri, -1.0) == pytest.approx(1.0)
    tri2 = Polygon(np.array([0, 2, 2j]) + 0.3)
    d = polygon_hausdorff(tri, tri2)
    assert d == pytest.approx(0.3, abs=1e-12)


def test_hull_distance_dominated_by_cloud_distance():
    # hulls cannot be farther apart than the clouds they span
    rng = np.random.default_rng(23)
    for _ in range(20):
        a = random_cloud(rng, 30)
        b = PointCloud(a.points + 0.05 * (rng.standard_normal(30)
                                          + 1j * rng.standard_normal(30)))
        d_clouds = hausdorff_distance(a, b)
        d_hulls = polygon_hausdorff(convex_hull(a), convex_hull(b))
        assert d_hulls <= d_clouds + 1e-12


# ---------------------------------------------------------------------------
# Star-shapedness probe
# ---------------------------------------------------------------------------

def test_star_interval_at_zero():
    eps = 0.01
    net = PointCloud(np.linspace(0, 1, 101).astype(complex), eps)
    assert star_violation(net, 0.0, 2 * eps) is None


def test_star_circle_without_interior_fails():
    eps = 0.02
    angles = np.arange(0, 2 * np.pi, eps)
    net = PointCloud(np.exp(1j * angles), eps)
    hit = star_violation(net, 0.0, 2 * eps)
    assert hit is not None
    point, t = hit
    # the offending segment point is strictly interior to the disk
    assert abs(point) < 1.0 - 2 * eps
    assert 0.0 <= t < 1.0


def test_star_disk_net_interior_center():
    eps = 0.04
    xs = np.arange(-1, 1 + eps, eps)
    gx, gy = np.meshgrid(xs, xs)
    pts = (gx + 1j * gy).ravel()
    net = PointCloud(pts[np.abs(pts) <= 1.0], eps)
    assert star_violation(net, 0.99 + 0j, 2 * eps) is None


def test_star_tolerance_below_resolution_rejected():
    net = PointCloud(np.linspace(0, 1, 11).astype(complex), resolution=0.1)
    with pytest.raises(ValueError):
        star_violation(net, 0.0, 0.05)


# ---------------------------------------------------------------------------
# Kuratowski limits
# ---------------------------------------------------------------------------

def test_kuratowski_shrinking_singletons():
    seq = [cloud(1.0 / n) for n in range(1, 101)]
    liminf, limsup = kuratowski_limits(seq, eps=0.05)
    assert liminf is not None and limsup is not None
    zero = cloud(0)
    assert hausdorff_distance(liminf, zero) <= 0.1
    assert hausdorff_distance(limsup, zero) <= 0.15


def test_kuratowski_oscillating_singletons():
    seq = [cloud((-1.0) ** n) for n in range(1, 41)]
    liminf, limsup = kuratowski_limits(seq, eps=0.05)
    assert liminf is None
    assert limsup is not None
    assert hausdorff_distance(limsup, cloud(-1, 1)) <= 0.1


def test_kuratowski_growing_intervals():
    eps = 0.1
    seq = [PointCloud(np.linspace(0, 1 - 1.0 / n, 60).astype(complex), eps)
           for n in range(1, 61)]
    liminf, limsup = kuratowski_limits(seq, eps=eps)
    target = PointCloud(np.linspace(0, 1, 50).astype(complex))
    assert hausdorff_distance(liminf, target) <= 2 * eps
    assert hausdorff_distance(limsup, target) <= 2 * eps
    # liminf is contained in limsup by construction
    assert directed_hausdorff(liminf, limsup) == 0.0


def test_kuratowski_containment_passes_to_liminf():
    seq_a = [cloud(1.0 / n) for n in range(1, 61)]
    seq_b = [cloud(1.0 / n, 2.0) for n in range(1, 61)]
    lim_a, _ = kuratowski_limits(seq_a, eps=0.05)
    lim_b, _ = kuratowski_limits(seq_b, eps=0.05)
    assert directed_hausdorff(lim_a, lim_b) <= 0.05 + 1e-12


def test_kuratowski_guards():
    with pytest.raises(ValueError):
        kuratowski_limits([], eps=0.1)
    with pytest.raises(ValueError):
        kuratowski_limits([cloud(0)], eps=0.0)
    with pytest.raises(ValueError):
        kuratowski_limits([cloud(0, 1e9)], eps=1e-6)


# ---------------------------------------------------------------------------
# Cauchy diagnostics
# ---------------------------------------------------------------------------

def test_cauchy_constant_sequence():
    seq = [cloud(0, 1)] * 5
    rep = hausdorff_cauchy_check(seq, tol=1e-9)
    assert isinstance(rep, ConvergenceReport)
    assert np.all(rep.distances == 0.0)
    assert rep.converged


def test_cauchy_harmonic_singletons():
    seq = [cloud(1.0 / n) for n in range(1, 51)]
    rep = hausdorff_cauchy_check(seq, tol=1e-3)
    expect = np.array([1.0 / n - 1.0 / (n + 1) for n in range(1, 50)])
    assert np.allclose(rep.distances, expect, atol=1e-15)
    assert rep.converged
    assert rep.kuratowski_gap is not None


def test_cauchy_not_converged():
    seq = [cloud((-1.0) ** n) for n in range(1, 21)]
    rep = hausdorff_cauchy_check(seq, tol=1e-3)
    assert not rep.converged


def test_cauchy_needs_two_clouds():
    with pytest.raises(ValueError):
        hausdorff_cauchy_check([cloud(0)], tol=1.0)


# ---------------------------------------------------------------------------
# CSV round trips
# ---------------------------------------------------------------------------

def test_cloud_csv_roundtrip(tmp_path):
    pts = np.array([1 / 3 + 1j / 7, -2.5, 1e-17 + 1j])
    path = tmp_path / "cloud.csv"
    write_cloud_csv(PointCloud(pts), path)
    back = read_cloud_csv(path)
    assert np.array_equal(back.points, pts)
    header = path.read_text().splitlines()[0]
    assert header == "re,im"


def test_polygon_csv_roundtrip(tmp_path):
    poly = convex_hull(cloud(0, 1, 1j, 1 + 1j))
    path = tmp_path / "hull.csv"
    write_polygon_csv(poly, path)
    back = read_polygon_csv(path)
    assert np.array_equal(back.vertices, poly.vertices)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0,0\n")
    with pytest.raises(ValueError):
        read_cloud_csv(path)
