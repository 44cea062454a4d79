"""Plot emission: deterministic SVG scatter/hull files and report figures.

``emit_svg`` writes a minimal hand-rolled SVG whose bytes depend only on the
input geometry (fixed view box from the data bounds plus a 5% margin, dots,
stroked hull polygon, crosses for star centers), so identical inputs give
identical files.  The ``render_*`` helpers produce the matplotlib figures
written next to the CSV output of CLI runs.
"""

from __future__ import annotations

import io
import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .planarsets import PointCloud, Polygon  # noqa: E402

_CANVAS = 640.0  # nominal pixel width of the SVG canvas


def _atomic_write(path, data: bytes) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _save_figure(fig, path) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=150)
    plt.close(fig)
    _atomic_write(path, buf.getvalue())


def _fmt(x: float) -> str:
    if x == 0:
        x = 0.0  # avoid "-0"
    return format(float(x), ".8g")


def emit_svg(cloud: PointCloud, hull: Optional[Polygon],
             centers: Optional[Sequence[complex]], path) -> None:
    """Write the scatter/hull/centers picture as a deterministic SVG file."""
    pts = cloud.points
    geom = [pts]
    if hull is not None:
        geom.append(hull.vertices)
    if centers is not None and len(centers) > 0:
        geom.append(np.asarray(centers, dtype=complex))
    allz = np.concatenate(geom)

    xmin, xmax = float(allz.real.min()), float(allz.real.max())
    ymin, ymax = float(allz.imag.min()), float(allz.imag.max())
    span = max(xmax - xmin, ymax - ymin)
    pad = 0.05 * span if span > 0 else 1.0
    xmin, xmax = xmin - pad, xmax + pad
    ymin, ymax = ymin - pad, ymax + pad
    w, h = xmax - xmin, ymax - ymin
    px = w / _CANVAS  # one nominal pixel in data units

    def sx(x: float) -> str:
        return _fmt(x)

    def sy(y: float) -> str:
        # SVG y axis points down; flip about the view box
        return _fmt(ymin + ymax - y)

    lines = []
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(xmin)} {_fmt(ymin)} {_fmt(w)} {_fmt(h)}" '
        f'width="{int(_CANVAS)}" height="{int(round(_CANVAS * h / w))}">')
    if hull is not None:
        coords = " ".join(f"{sx(v.real)},{sy(v.imag)}" for v in hull.vertices)
        tag = "polygon" if len(hull) >= 3 else "polyline"
        lines.append(f'<{tag} points="{coords}" fill="none" '
                     f'stroke="#1f77b4" stroke-width="{_fmt(1.5 * px)}"/>')
    r = _fmt(1.5 * px)
    for z in pts:
        lines.append(f'<circle cx="{sx(z.real)}" cy="{sy(z.imag)}" r="{r}" '
                     f'fill="#333333"/>')
    if centers is not None:
        arm = 4.0 * px
        for z in np.atleast_1d(np.asarray(centers, dtype=complex)):
            x, y = z.real, z.imag
            for dx, dy in ((arm, 0.0), (0.0, arm)):
                lines.append(
                    f'<line x1="{sx(x - dx)}" y1="{sy(y - dy)}" '
                    f'x2="{sx(x + dx)}" y2="{sy(y + dy)}" '
                    f'stroke="#d62728" stroke-width="{_fmt(1.2 * px)}"/>')
    lines.append("</svg>")
    _atomic_write(path, ("\n".join(lines) + "\n").encode("ascii"))


def render_cloud_figure(cloud: PointCloud, hull: Optional[Polygon],
                        centers: Optional[Sequence[complex]], path,
                        title: str = "") -> None:
    """Matplotlib scatter of a value cloud with optional hull and centers."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.scatter(cloud.points.real, cloud.points.imag, s=4, c="#333333",
               alpha=0.6, linewidths=0, label="samples")
    if hull is not None and len(hull) >= 2:
        ring = np.concatenate([hull.vertices, hull.vertices[:1]])
        ax.plot(ring.real, ring.imag, color="#1f77b4", lw=1.2, label="outer hull")
    if centers is not None and len(centers) > 0:
        cs = np.atleast_1d(np.asarray(centers, dtype=complex))
        ax.plot(cs.real, cs.imag, "x", color="#d62728", ms=8, label="star centers")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save_figure(fig, path)


def render_convergence_figure(sizes: Sequence[int],
                              distances: Sequence[float],
                              tail_bounds: Sequence[Optional[float]],
                              final_cloud: PointCloud, path) -> None:
    """Two-panel report: distance decay per size and the final cloud."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.5))
    xs = list(sizes)[1:]
    ax1.semilogy(xs, distances, "o-", color="#333333", label="Hausdorff to prev")
    tb = [t for t in tail_bounds if t is not None]
    if len(tb) == len(xs):
        ax1.semilogy(xs, tb, "s--", color="#1f77b4", label="tail bound")
    ax1.set_xlabel("truncation size")
    ax1.set_ylabel("distance")
    ax1.legend(fontsize=8)
    ax2.scatter(final_cloud.points.real, final_cloud.points.imag, s=4,
                c="#333333", alpha=0.6, linewidths=0)
    ax2.set_xlabel("Re")
    ax2.set_ylabel("Im")
    ax2.set_aspect("equal", adjustable="datalim")
    ax2.set_title("final estimate")
    fig.tight_layout()
    _save_figure(fig, path)
