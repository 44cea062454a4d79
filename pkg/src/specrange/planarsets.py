"""Geometry of compact planar sets represented as finite point clouds.

A non-empty compact subset of the complex plane is approximated by a finite
epsilon-net (:class:`PointCloud`).  Everything here is a pure function over
immutable values: Hausdorff distances, convex hulls, star-shapedness probes
and Kuratowski limit diagnostics for sequences of clouds.  Set-level
predicates always take an explicit tolerance that should be at least the net
resolution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

# Pairwise-distance matrices are used below this many entries; larger
# problems go through a KD-tree.
_DENSE_PAIR_LIMIT = 4_000_000

# Cap on the number of Kuratowski grid cells (guards absurd pitch choices).
_GRID_CELL_LIMIT = 4_000_000


@dataclass(frozen=True)
class PointCloud:
    """Finite multiset of complex numbers plus the intended net resolution.

    ``resolution`` means the cloud is intended as an eps-net of the
    underlying compact set; 0 is allowed for exact finite sets.
    """

    points: np.ndarray
    resolution: float = 0.0

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=complex)).ravel()
        if pts.size == 0:
            raise ValueError("point cloud must be non-empty")
        if not np.all(np.isfinite(pts.real) & np.isfinite(pts.imag)):
            raise ValueError("point cloud contains NaN or Inf coordinates")
        if not np.isfinite(self.resolution) or self.resolution < 0:
            raise ValueError("resolution must be a nonnegative finite real")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.size)

    def xy(self) -> np.ndarray:
        """Return an (n, 2) float array of (re, im) rows."""
        return np.column_stack([self.points.real, self.points.imag])

    def diameter(self) -> float:
        pts = self.points
        if pts.size == 1:
            return 0.0
        lo = complex(pts.real.min(), pts.imag.min())
        hi = complex(pts.real.max(), pts.imag.max())
        return abs(hi - lo)


@dataclass(frozen=True)
class Polygon:
    """Convex polygon given by counterclockwise vertices.

    Degenerate forms are allowed: a single vertex (point) and two vertices
    (segment).  For three or more vertices the boundary must be strictly
    convex: no reflex corners and no three consecutive collinear vertices.
    """

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.atleast_1d(np.asarray(self.vertices, dtype=complex)).ravel()
        if verts.size == 0:
            raise ValueError("polygon needs at least one vertex")
        if not np.all(np.isfinite(verts.real) & np.isfinite(verts.imag)):
            raise ValueError("polygon has non-finite vertices")
        if verts.size >= 3:
            scale = max(np.abs(verts - verts.mean()).max(), 1e-300)
            nxt = np.roll(verts, -1)
            prv = np.roll(verts, 1)
            u = verts - prv
            w = nxt - verts
            cross = u.real * w.imag - u.imag * w.real
            if np.any(cross <= -1e-9 * scale * scale):
                raise ValueError("polygon vertices are not in convex ccw position")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    def __len__(self) -> int:
        return int(self.vertices.size)

    def area(self) -> float:
        v = self.vertices
        if v.size < 3:
            return 0.0
        nxt = np.roll(v, -1)
        return 0.5 * float(np.sum(v.real * nxt.imag - nxt.real * v.imag))

    def as_cloud(self, resolution: float = 0.0) -> PointCloud:
        return PointCloud(self.vertices.copy(), resolution)


# ---------------------------------------------------------------------------
# CSV serialization: header `re,im`, one point per line, >= 15 significant
# digits.  Polygons use the same layout with vertices in ccw order.
# ---------------------------------------------------------------------------

def write_points_csv(points: np.ndarray, path) -> None:
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im"])
        for z in pts:
            writer.writerow([format(z.real, ".17g"), format(z.imag, ".17g")])


def read_points_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["re", "im"]:
        raise ValueError(f"{path}: expected header 're,im'")
    vals = [complex(float(r[0]), float(r[1])) for r in rows[1:] if r]
    if not vals:
        raise ValueError(f"{path}: no points")
    return np.asarray(vals, dtype=complex)


def write_cloud_csv(cloud: PointCloud, path) -> None:
    write_points_csv(cloud.points, path)


def read_cloud_csv(path, resolution: float = 0.0) -> PointCloud:
    return PointCloud(read_points_csv(path), resolution)


def write_polygon_csv(poly: Polygon, path) -> None:
    write_points_csv(poly.vertices, path)


def read_polygon_csv(path) -> Polygon:
    return Polygon(read_points_csv(path))


# ---------------------------------------------------------------------------
# Hausdorff metric
# ---------------------------------------------------------------------------

def _directed_max_min(a: np.ndarray, b: np.ndarray) -> float:
    """max over a of the distance to the set b."""
    if a.size * b.size <= _DENSE_PAIR_LIMIT:
        d = np.abs(a[:, None] - b[None, :])
        return float(d.min(axis=1).max())
    tree = cKDTree(np.column_stack([b.real, b.imag]))
    dist, _ = tree.query(np.column_stack([a.real, a.imag]), k=1)
    return float(dist.max())


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    """Hausdorff distance max(sup_a dist(.,b), sup_b dist(.,a)).

    Symmetric, nonnegative, and zero exactly when the two clouds coincide
    as sets.
    """
    return max(_directed_max_min(a.points, b.points),
               _directed_max_min(b.points, a.points))


def directed_hausdorff(a: PointCloud, b: PointCloud) -> float:
    """One-sided defect: how far points of ``a`` stick out of ``b``."""
    return _directed_max_min(a.points, b.points)


# ---------------------------------------------------------------------------
# Convex hulls (monotone chain) and polygon queries
# ---------------------------------------------------------------------------

def _cross(o: complex, p: complex, q: complex) -> float:
    return (p.real - o.real) * (q.imag - o.imag) - (q.real - o.real) * (p.imag - o.imag)


def convex_hull(a: PointCloud) -> Polygon:
    """Minimal convex polygon containing the cloud.

    Monotone chain over lexicographically sorted points.  Collinear input
    collapses to a 2-vertex segment, a single distinct point to a 1-vertex
    polygon.  The collinearity tolerance is 1e-12 times the cloud diameter.
    """
    pts = np.unique(a.points)
    pts = pts[np.lexsort((pts.imag, pts.real))]
    if pts.size == 1:
        return Polygon(pts)
    diam = abs(pts[-1] - pts[0])
    diam = max(diam, float(np.abs(pts - pts[0]).max()))
    tol = 1e-12 * max(diam, 1e-300)

    def chain(seq):
        out: List[complex] = []
        for p in seq:
            # drop the middle vertex when it sits within tol of the chord,
            # i.e. cross / |chord| <= tol (bounds the depth of the cut)
            while len(out) >= 2 and (
                    _cross(out[-2], out[-1], p)
                    <= tol * max(abs(p - out[-2]), 1e-300)):
                out.pop()
            out.append(complex(p))
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 2:
        # fully collinear: keep the two lexicographic extremes
        verts = [complex(pts[0]), complex(pts[-1])]
    return Polygon(np.asarray(verts, dtype=complex))


def polygon_distance(hull: Polygon, z: complex) -> float:
    """Euclidean distance from z to the filled polygon (0 inside)."""
    v = hull.vertices
    if v.size == 1:
        return abs(z - v[0])
    if v.size == 2:
        return _segment_distance(z, v[0], v[1])
    nxt = np.roll(v, -1)
    edge = nxt - v
    rel = z - v
    cross = edge.real * rel.imag - edge.imag * rel.real
    if np.all(cross >= 0.0):
        return 0.0
    return float(min(_segment_distance(z, p, q) for p, q in zip(v, nxt)))


def _segment_distance(z: complex, p: complex, q: complex) -> float:
    d = q - p
    denom = d.real * d.real + d.imag * d.imag
    if denom == 0.0:
        return abs(z - p)
    t = ((z.real - p.real) * d.real + (z.imag - p.imag) * d.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (p + t * d))


def contains(hull: Polygon, z: complex, tol: float) -> bool:
    """True iff z lies within distance tol of the filled hull (boundary in)."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return polygon_distance(hull, z) <= tol


def polygon_hausdorff(a: Polygon, b: Polygon) -> float:
    """Exact Hausdorff distance between two filled convex polygons.

    The supremum of the (convex) distance function over a convex polygon is
    attained at a vertex, so vertex-to-polygon distances suffice.
    """
    d_ab = max(polygon_distance(b, z) for z in a.vertices)
    d_ba = max(polygon_distance(a, z) for z in b.vertices)
    return max(d_ab, d_ba)


# ---------------------------------------------------------------------------
# Star-shapedness
# ---------------------------------------------------------------------------

def star_violation(a: PointCloud, center: complex, tol: float
                   ) -> Optional[Tuple[complex, float]]:
    """Probe whether the cloud is star-shaped with respect to ``center``.

    For every cloud point p (in deterministic order: sorted by angle around
    the center, then by radius) the segment [center, p] is sampled at step
    <= tol/2.  The first sampled segment point whose distance to the cloud
    exceeds tol is returned as ``(point, t)`` with t in [0, 1]; ``None``
    means no violation was found at this tolerance.
    """
    if tol < a.resolution:
        raise ValueError("tol must be at least the cloud resolution")
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = a.points
    rel = pts - center
    order = np.lexsort((np.abs(rel), np.angle(rel)))
    tree = cKDTree(a.xy())
    step = tol / 2.0
    for idx in order:
        p = pts[idx]
        length = abs(p - center)
        if length == 0.0:
            continue
        m = int(np.ceil(length / step)) + 1
        ts = np.linspace(0.0, 1.0, m)
        seg = center + ts * (p - center)
        dist, _ = tree.query(np.column_stack([seg.real, seg.imag]), k=1)
        bad = np.nonzero(dist > tol)[0]
        if bad.size:
            k = int(bad[0])
            return complex(seg[k]), float(ts[k])
    return None


# ---------------------------------------------------------------------------
# Kuratowski limits and Cauchy diagnostics for cloud sequences
# ---------------------------------------------------------------------------

def kuratowski_limits(seq: Sequence[PointCloud], eps: float,
                      tail_start: Optional[int] = None
                      ) -> Tuple[Optional[PointCloud], Optional[PointCloud]]:
    """Grid surrogates of the Kuratowski liminf/limsup of a cloud sequence.

    A square grid of pitch ``eps`` covers the union of the clouds; a grid
    point *meets* cloud A_n when its distance to A_n is at most eps.  The
    finite stand-ins for the tail quantifiers use the window n >= N0 with
    N0 = ceil(len/4) (1-based; override via ``tail_start``):

    * liminf: meets every cloud of the window ("all but finitely many"),
    * limsup: meets at least a quarter of the window ("infinitely many").

    liminf is a subset of limsup by construction.  Empty results are
    returned as ``None``.
    """
    if not seq:
        raise ValueError("need at least one cloud")
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = len(seq)
    n0 = int(np.ceil(n / 4)) if tail_start is None else int(tail_start)
    n0 = min(max(n0, 1), n)
    tail = seq[n0 - 1:]

    allpts = np.concatenate([c.points for c in seq])
    xmin, xmax = allpts.real.min(), allpts.real.max()
    ymin, ymax = allpts.imag.min(), allpts.imag.max()
    nx = int(np.floor((xmax - xmin) / eps)) + 3
    ny = int(np.floor((ymax - ymin) / eps)) + 3
    if nx * ny > _GRID_CELL_LIMIT:
        raise ValueError("union of clouds too large for grid pitch eps")
    xs = xmin - eps + eps * np.arange(nx)
    ys = ymin - eps + eps * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])

    hits = np.zeros((len(tail), grid.shape[0]), dtype=bool)
    for i, cloud in enumerate(tail):
        tree = cKDTree(cloud.xy())
        dist, _ = tree.query(grid, k=1)
        hits[i] = dist <= eps

    counts = hits.sum(axis=0)
    m = len(tail)
    need = int(np.ceil(m / 4))
    liminf_mask = counts == m
    limsup_mask = counts >= max(need, 1)

    gpts = grid[:, 0] + 1j * grid[:, 1]
    liminf = PointCloud(gpts[liminf_mask], eps) if liminf_mask.any() else None
    limsup = PointCloud(gpts[limsup_mask], eps) if limsup_mask.any() else None
    return liminf, limsup


@dataclass(frozen=True)
class ConvergenceReport:
    """Consecutive Hausdorff distances of a cloud sequence plus verdicts."""

    distances: np.ndarray            # Delta(A_k, A_{k+1}) for consecutive pairs
    tol: float
    converged: bool                  # tail of the distance sequence below tol
    liminf: Optional[PointCloud]     # grid liminf (cross-validation)
    limsup: Optional[PointCloud]
    kuratowski_gap: Optional[float]  # Hausdorff(liminf, limsup) when both exist

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)


def hausdorff_cauchy_check(seq: Sequence[PointCloud], tol: float) -> ConvergenceReport:
    """Report consecutive Hausdorff distances and whether the tail is below tol.

    The Kuratowski grid limits of the sequence are attached for
    cross-validation: when the sequence is Cauchy the liminf and limsup
    grids should agree to within the grid pitch.
    """
    if len(seq) < 2:
        raise ValueError("need at least two clouds")
    dists = np.array([hausdorff_distance(seq[k], seq[k + 1])
                      for k in range(len(seq) - 1)])
    window = max(1, len(dists) // 3)
    converged = bool(np.all(dists[-window:] <= tol))

    res = max((c.resolution for c in seq), default=0.0)
    # grid pitch: one cell must absorb the total drift of the tail window,
    # otherwise the liminf of a slowly converging sequence is empty
    n0 = int(np.ceil(len(seq) / 4))
    drift = float(dists[max(n0 - 1, 0):].sum())
    eps = max(tol, res, drift, 1e-9)
    try:
        liminf, limsup = kuratowski_limits(seq, eps)
    except ValueError:
        liminf, limsup = None, None
    gap = None
    if liminf is not None and limsup is not None:
        gap = hausdorff_distance(liminf, limsup)
    return ConvergenceReport(dists, tol, converged, liminf, limsup, gap)
