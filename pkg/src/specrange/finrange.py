"""Finite-dimensional engines for unitary-orbit trace optimization.

Everything here works on dense complex matrices: Haar sampling of the values
tr(C U^dag A U), exact support-function boundaries in the convex (collinear
hermitian) cases, permutation-pairing spectra, triangular spectra, and
Birkhoff-von Neumann certificates that express sampled trace values as convex
combinations of permutation pairings.

Functions are pure; Monte-Carlo loops derive all randomness from explicit
seeds so results are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.spatial import cKDTree

from .opmodel import trace_norm
from .planarsets import PointCloud, Polygon, convex_hull

_UNITARY_TOL = 1e-10


class HypothesisError(ValueError):
    """A convexity hypothesis needed by an exact method does not hold."""


def _as_square(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    return m


def _check_unitary(u: np.ndarray, tol: float = _UNITARY_TOL) -> None:
    defect = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if defect > tol:
        raise ValueError(f"matrix is not unitary (defect {defect:.2e} > {tol:.0e})")


# ---------------------------------------------------------------------------
# Haar sampling
# ---------------------------------------------------------------------------

def _haar_from_rng(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Batch of Haar unitaries via QR of complex Ginibre matrices.

    The diagonal phases of R are absorbed into Q so that R has nonnegative
    diagonal; without this fix the QR output is not Haar distributed.
    """
    z = (rng.standard_normal((count, n, n)) +
         1j * rng.standard_normal((count, n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.einsum("bii->bi", r)
    phases = np.where(np.abs(d) > 0, d / np.abs(np.where(np.abs(d) > 0, d, 1.0)), 1.0)
    return q * phases[:, None, :]


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """One Haar-distributed n x n unitary, deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return _haar_from_rng(rng, n, 1)[0]


def haar_unitaries(n: int, count: int, seed) -> np.ndarray:
    """Batch of ``count`` Haar unitaries, shape (count, n, n)."""
    if n < 1 or count < 1:
        raise ValueError("n and count must be >= 1")
    rng = np.random.default_rng(seed)
    return _haar_from_rng(rng, n, count)


# ---------------------------------------------------------------------------
# Orbit values
# ---------------------------------------------------------------------------

def wc_point(C, A, U) -> complex:
    """tr(C U^dag A U) for one unitary U."""
    C = _as_square(C, "C")
    A = _as_square(A, "A")
    U = _as_square(U, "U")
    if not (C.shape == A.shape == U.shape):
        raise ValueError("C, A, U must have equal sizes")
    _check_unitary(U)
    return complex(np.trace(C @ U.conj().T @ A @ U))


def _orbit_values(C: np.ndarray, A: np.ndarray, units: np.ndarray) -> np.ndarray:
    """tr(C U^dag A U) for a batch of unitaries, vectorized."""
    m = np.matmul(np.matmul(units.conj().transpose(0, 2, 1), A), units)
    return np.einsum("ij,bji->b", C, m)


def _permutation_values(C: np.ndarray, A: np.ndarray,
                        perms: np.ndarray) -> np.ndarray:
    """Values at permutation unitaries P e_i = e_{perm(i)}."""
    out = np.empty(len(perms), dtype=complex)
    for k, sigma in enumerate(perms):
        out[k] = np.einsum("ij,ji->", C, A[np.ix_(sigma, sigma)])
    return out


def _nn_spacing(points: np.ndarray) -> float:
    """Empirical cloud resolution: 95th percentile nearest-neighbour distance.

    The high quantile reflects the spacing in sparsely sampled regions
    (Monte-Carlo orbit clouds thin out near their boundary), which is the
    scale at which the cloud can honestly claim to be a net.
    """
    if points.size < 2:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    dist, _ = cKDTree(xy).query(xy, k=2)
    return float(np.quantile(dist[:, 1], 0.95))


def _fit_line(values: np.ndarray) -> Tuple[bool, complex, float]:
    """Least-squares line fit through points of the plane.

    Returns (collinear, anchor, angle): collinear is true when the largest
    orthogonal residual is at most 1e-9 times the spread.
    """
    mu = values.mean()
    rel = values - mu
    spread = np.abs(rel).max() if values.size else 0.0
    if spread == 0.0:
        return True, mu, 0.0
    xy = np.column_stack([rel.real, rel.imag])
    cov = xy.T @ xy
    w, v = np.linalg.eigh(cov)
    direction = v[:, -1]
    phi = math.atan2(direction[1], direction[0])
    resid = np.abs(np.imag(rel * np.exp(-1j * phi))).max()
    return resid <= 1e-9 * spread, mu, phi


# ---------------------------------------------------------------------------
# Support functions and outer boundary hulls
# ---------------------------------------------------------------------------

def support_value(C, A, theta: float) -> float:
    """max over unitaries of Re(e^{-i theta} tr(C U^dag A U)) for hermitian C.

    Classical trace maximization: with H = (e^{-i theta} A + e^{i theta}
    A^dag)/2 the maximum equals the sorted-decreasing eigenvalue pairing
    sum_k lambda_k(C) lambda_k(H).
    """
    C = _as_square(C, "C")
    A = _as_square(A, "A")
    herm_defect = np.abs(C - C.conj().T).max()
    if herm_defect > 1e-10 * max(1.0, np.abs(C).max()):
        raise ValueError("support_value requires hermitian C")
    h = (np.exp(-1j * theta) * A + np.exp(1j * theta) * A.conj().T) / 2.0
    lc = np.sort(np.linalg.eigvalsh((C + C.conj().T) / 2.0))[::-1]
    lh = np.sort(np.linalg.eigvalsh((h + h.conj().T) / 2.0))[::-1]
    return float(lc @ lh)


def _collinear_frame(M: np.ndarray) -> Optional[Tuple[np.ndarray, complex, float]]:
    """If M is normal with collinear eigenvalues, return (H, xi, phi) with
    M = xi I + e^{i phi} H and H hermitian; otherwise None."""
    from .opmodel import is_normal

    if not is_normal(M):
        return None
    eigs = np.linalg.eigvals(M)
    ok, xi, phi = _fit_line(eigs)
    if not ok:
        return None
    h = np.exp(-1j * phi) * (M - xi * np.eye(M.shape[0]))
    h = (h + h.conj().T) / 2.0
    return h, xi, phi


def boundary_hull(C, A, angles: int = 720) -> Polygon:
    """Outer polygon of the closed orbit-value set in the convex cases.

    Requires C normal with collinear eigenvalues, or A likewise (an affine
    rotation of a self-adjoint matrix).  The problem is rotated so the
    collinear factor is hermitian, the support function is evaluated on a
    uniform angle grid, and consecutive support lines are intersected; the
    convex hull of the intersection points is returned, mapped back by the
    rotation and shift.
    """
    if angles < 3:
        raise ValueError("need at least 3 angles")
    C = _as_square(C, "C")
    A = _as_square(A, "A")
    if C.shape != A.shape:
        raise ValueError("C and A must have equal sizes")

    frame = _collinear_frame(C)
    if frame is not None:
        h, xi, phi = frame
        base, other = h, A
        shift = xi * np.trace(A)
    else:
        frame = _collinear_frame(A)
        if frame is None:
            raise HypothesisError(
                "neither factor is normal with collinear eigenvalues; "
                "no exact boundary available, use sample_range")
        h, xi, phi = frame
        # tr(C U^dag (xi I + e^{i phi} H) U) = xi tr(C) + e^{i phi} tr(C U^dag H U)
        # and the orbit values of (C, H) and (H, C) coincide.
        base, other = h, C
        shift = xi * np.trace(C)
    rot = np.exp(1j * phi)

    thetas = 2.0 * np.pi * np.arange(angles) / angles
    supports = np.array([support_value(base, other, t) for t in thetas])

    nxt = np.roll(np.arange(angles), -1)
    det = np.sin(thetas[nxt] - thetas)
    det[det == 0.0] = np.sin(2.0 * np.pi / angles)
    x = (supports * np.sin(thetas[nxt]) - supports[nxt] * np.sin(thetas)) / det
    y = (supports[nxt] * np.cos(thetas) - supports * np.cos(thetas[nxt])) / det
    candidates = shift + rot * (x + 1j * y)
    return convex_hull(PointCloud(candidates))


# ---------------------------------------------------------------------------
# Range estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeEstimate:
    """Sampled inner cloud of orbit values plus optional certified outer hull.

    Invariants checked at construction: every inner point obeys the a-priori
    radius nu_1(C) ||A||, and lies inside the outer hull (when present) at
    tolerance 1e-8.
    """

    inner: PointCloud
    outer: Optional[Polygon]
    star_centers: np.ndarray
    bound_radius: float

    def __post_init__(self):
        centers = np.atleast_1d(np.asarray(self.star_centers, dtype=complex))
        centers.setflags(write=False)
        object.__setattr__(self, "star_centers", centers)
        worst = float(np.abs(self.inner.points).max())
        if worst > self.bound_radius + 1e-9:
            raise ValueError(
                f"inner point at modulus {worst} exceeds trace-norm bound "
                f"{self.bound_radius}")
        if self.outer is not None:
            scale = max(1.0, self.bound_radius)
            bad = _outside_polygon(self.outer, self.inner.points, 1e-8 * scale)
            if bad.size:
                raise ValueError(
                    f"{bad.size} inner points fall outside the outer hull")


def _outside_polygon(poly: Polygon, pts: np.ndarray, tol: float) -> np.ndarray:
    """Indices of points farther than tol outside the polygon (vectorized)."""
    v = poly.vertices
    if v.size == 1:
        return np.nonzero(np.abs(pts - v[0]) > tol)[0]
    if v.size == 2:
        d = v[1] - v[0]
        denom = (d.conj() * d).real
        t = np.clip(((pts - v[0]) * d.conj()).real / denom, 0.0, 1.0)
        return np.nonzero(np.abs(pts - (v[0] + t * d)) > tol)[0]
    nxt = np.roll(v, -1)
    edge = nxt - v
    elen = np.abs(edge)
    # signed distance to each edge line, positive on the interior side
    rel = pts[None, :] - v[:, None]
    cross = (edge.real[:, None] * rel.imag - edge.imag[:, None] * rel.real)
    signed = cross / elen[:, None]
    return np.nonzero(signed.min(axis=0) < -tol)[0]


def _collinear_extremal_perms(c_eigs: np.ndarray, t_eigs: np.ndarray,
                              angles: int) -> List[np.ndarray]:
    """Directionally extremal pairings for collinear c_eigs.

    Writing gamma_i = xi + e^{i phi} t_i with t_i real, the pairing that
    maximizes Re(e^{-i theta} sum gamma_i tau_{sigma(i)}) matches sorted t
    against sorted Re(e^{i(phi - theta)} tau); one assignment per grid angle.
    """
    ok, xi, phi = _fit_line(c_eigs)
    if not ok:
        return []
    t = np.real((c_eigs - xi) * np.exp(-1j * phi))
    order_t = np.argsort(-t, kind="stable")
    seen = set()
    perms: List[np.ndarray] = []
    for theta in 2.0 * np.pi * np.arange(angles) / angles:
        key = np.real(np.exp(1j * (phi - theta)) * t_eigs)
        order_k = np.argsort(-key, kind="stable")
        sigma = np.empty(len(t), dtype=np.intp)
        sigma[order_t] = order_k
        tup = tuple(sigma.tolist())
        if tup not in seen:
            seen.add(tup)
            perms.append(sigma)
    return perms


def _pairing_edge_values(gam: np.ndarray, tau: np.ndarray, count: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Orbit values along planar-rotation unitaries between pairings.

    For unitarily diagonalizable factors, a rotation by angle theta in the
    coordinate plane (k, l) applied after a permutation sigma attains
    exactly the linear interpolation between the pairing value of sigma and
    that of sigma composed with the transposition (k l).  Sampling these
    chords populates the outer parts of the value set that Haar samples
    rarely reach.
    """
    n = gam.size
    sig = np.vstack([rng.permutation(n) for _ in range(count)])
    rows = np.arange(count)
    k = rng.integers(0, n, count)
    m = (k + 1 + rng.integers(0, n - 1, count)) % n
    base = np.einsum("pi,i->p", tau[sig], gam)
    mix = rng.random(count)
    return base + mix * (gam[k] - gam[m]) * (tau[sig[rows, m]] - tau[sig[rows, k]])


def sample_range(C, A, count: int, seed, angles: int = 256) -> RangeEstimate:
    """Monte-Carlo estimate of the orbit-value set {tr(C U^dag A U)}.

    The inner cloud holds ``count`` Haar samples plus deterministic probes:
    the identity, permutation unitaries (all of them for n <= 6, otherwise
    720 sampled), the eigenbasis pairings when both matrices are normal, and
    the directionally extremal pairings when C has collinear eigenvalues.
    When an exact convex boundary is available it is attached as the outer
    polygon.  ``star_centers`` is seeded with tr(C) tr(A) / n.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    C = _as_square(C, "C")
    A = _as_square(A, "A")
    if C.shape != A.shape:
        raise ValueError("C and A must have equal sizes")
    n = C.shape[0]
    rng = np.random.default_rng(seed)

    units = _haar_from_rng(rng, n, count)
    chunks = [_orbit_values(C, A, units)]
    chunks.append(np.array([np.trace(C @ A)], dtype=complex))

    if n <= 6:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    else:
        perms = np.array([rng.permutation(n) for _ in range(720)], dtype=np.intp)
    chunks.append(_permutation_values(C, A, perms))

    from .opmodel import is_normal

    if is_normal(C) and is_normal(A) and n >= 2:
        gam = np.linalg.eigvals(C)
        tau = np.linalg.eigvals(A)
        for sigma in ([np.arange(n)] + [np.arange(n)[::-1]] +
                      _collinear_extremal_perms(gam, tau, angles)):
            chunks.append(np.array([np.dot(gam, tau[sigma])], dtype=complex))
        chunks.append(_pairing_edge_values(gam, tau, count, rng))

    vals = np.concatenate(chunks)
    try:
        outer = boundary_hull(C, A, angles=max(angles, 360))
    except HypothesisError:
        outer = None

    center = np.trace(C) * np.trace(A) / n
    bound = trace_norm(C) * float(np.linalg.norm(A, 2))
    inner = PointCloud(vals, _nn_spacing(vals))
    return RangeEstimate(inner, outer, np.array([center]), bound)


# ---------------------------------------------------------------------------
# Permutation-pairing spectra
# ---------------------------------------------------------------------------

_EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class SpectrumSet:
    """Permutation-pairing sums of two eigenvalue lists at one size."""

    points: PointCloud
    mode: str                 # "exhaustive" | "sampled"
    n: int
    count: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "exhaustive" and len(self.points) > math.factorial(self.n):
            raise ValueError("more points than permutations")


def _dedupe(vals: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    order = np.lexsort((vals.imag, vals.real))
    v = vals[order]
    keep = [v[0]]
    for z in v[1:]:
        if abs(z - keep[-1]) > tol:
            keep.append(z)
    return np.asarray(keep, dtype=complex)


def c_spectrum_matrix(c_eigs, t_eigs, mode: str = "exhaustive",
                      count: Optional[int] = None, seed=0) -> SpectrumSet:
    """All (or sampled) pairing sums sum_j gamma_j tau_{sigma(j)}.

    Exhaustive mode enumerates every permutation and is limited to n <= 8;
    sampled mode draws ``count`` Fisher-Yates permutations and always
    includes the identity and reversal pairings.  Values are deduplicated
    at 1e-12.
    """
    gam = np.atleast_1d(np.asarray(c_eigs, dtype=complex))
    tau = np.atleast_1d(np.asarray(t_eigs, dtype=complex))
    if gam.shape != tau.shape or gam.ndim != 1:
        raise ValueError("eigenvalue lists must be 1-d of equal length")
    n = gam.size
    if mode == "exhaustive":
        if n > _EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive mode limited to n <= {_EXHAUSTIVE_LIMIT}")
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
        used = None
    elif mode == "sampled":
        if not count or count < 1:
            raise ValueError("sampled mode needs a positive count")
        rng = np.random.default_rng(seed)
        perms = np.vstack([np.arange(n), np.arange(n)[::-1]] +
                          [rng.permutation(n) for _ in range(count)])
        used = count
    else:
        raise ValueError(f"unknown mode {mode!r}")
    vals = tau[perms] @ gam
    return SpectrumSet(PointCloud(_dedupe(vals)), mode, n, used)


# ---------------------------------------------------------------------------
# Triangular spectra
# ---------------------------------------------------------------------------

def triangular_spectrum(m, tol: float) -> Tuple[np.ndarray, float]:
    """Diagonal of a triangular matrix as its spectrum, with a cross-check.

    Returns (eigenvalues-with-multiplicity, matching distance), the latter
    being the maximum distance of an optimal matching between the diagonal
    and the dense eigensolver output.
    """
    m = _as_square(m, "m")
    n = m.shape[0]
    lower = np.abs(np.tril(m, -1)).max() if n > 1 else 0.0
    upper = np.abs(np.triu(m, 1)).max() if n > 1 else 0.0
    if min(lower, upper) > tol:
        raise ValueError("matrix is neither upper nor lower triangular")
    diag = np.diag(m).astype(complex)
    ev = np.linalg.eigvals(m)
    cost = np.abs(diag[:, None] - ev[None, :])
    rows, cols = linear_sum_assignment(cost)
    return diag, float(cost[rows, cols].max())


# ---------------------------------------------------------------------------
# Doubly stochastic matrices, Birkhoff certificates
# ---------------------------------------------------------------------------

def unistochastic(U) -> np.ndarray:
    """S with S_ij = |U_ji|^2; doubly stochastic for unitary U."""
    U = _as_square(U, "U")
    _check_unitary(U)
    s = (np.abs(U) ** 2).T
    if (np.abs(s.sum(axis=0) - 1.0).max() > 1e-10 or
            np.abs(s.sum(axis=1) - 1.0).max() > 1e-10):
        raise ValueError("row/column sums deviate from 1 beyond 1e-10")
    return s


def birkhoff_decompose(S, tol: float = 1e-12) -> List[Tuple[float, np.ndarray]]:
    """Greedy Birkhoff-von Neumann decomposition of a doubly stochastic matrix.

    Repeatedly extracts a perfect matching on the entries above ``tol`` and
    subtracts the minimal matched entry.  Returns (weight, perm) pairs where
    perm[i] is the column matched to row i; the weights are positive and sum
    to 1 up to tol, and the max-norm reconstruction residual is below tol.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("S must be a square real matrix")
    n = S.shape[0]
    if S.min() < -tol:
        raise ValueError("S has negative entries beyond tol")
    if (np.abs(S.sum(axis=0) - 1.0).max() > max(tol, 1e-8) or
            np.abs(S.sum(axis=1) - 1.0).max() > max(tol, 1e-8)):
        raise ValueError("S is not doubly stochastic within tolerance")

    resid = np.clip(S, 0.0, None).copy()
    terms: List[Tuple[float, np.ndarray]] = []
    rows = np.arange(n)
    for _ in range(n * n + n):
        if resid.max() <= tol:
            break
        match = maximum_bipartite_matching(csr_matrix(resid > tol),
                                           perm_type="column")
        if np.any(match < 0):
            raise RuntimeError(
                "no perfect matching on the support; matrix not doubly "
                "stochastic enough for the requested tolerance")
        sigma = np.asarray(match, dtype=np.intp)
        w = float(resid[rows, sigma].min())
        terms.append((w, sigma))
        resid[rows, sigma] -= w
        np.clip(resid, 0.0, None, out=resid)
    else:
        raise RuntimeError("decomposition did not terminate")
    if resid.max() > tol:
        raise RuntimeError("reconstruction residual above tolerance")
    return terms


@dataclass(frozen=True)
class BirkhoffCertificate:
    """Witness that one orbit value is a convex combination of pairings."""

    value: complex
    weights: np.ndarray
    perms: List[np.ndarray]
    points: np.ndarray          # pairing sums, one per permutation term
    residual: float             # |value - sum_k weight_k point_k|


def wc_birkhoff_certificate(c_eigs, t_eigs, U,
                            tol: float = 1e-12) -> BirkhoffCertificate:
    """Certify tr(C U^dag T U) as a convex combination of pairing sums.

    For diagonal C, T the value equals sum_{ij} gamma_i tau_j S_ij with S the
    unistochastic matrix of U; decomposing S over permutation matrices turns
    this into sum_k alpha_k sum_i gamma_i tau_{sigma_k(i)}, a constructive
    finite-scale inclusion of the orbit value in the convex hull of the
    pairing spectrum.
    """
    gam = np.atleast_1d(np.asarray(c_eigs, dtype=complex))
    tau = np.atleast_1d(np.asarray(t_eigs, dtype=complex))
    if gam.shape != tau.shape:
        raise ValueError("eigenvalue lists must have equal length")
    U = _as_square(U, "U")
    if U.shape[0] != gam.size:
        raise ValueError("U size does not match the eigenvalue lists")
    value = complex(np.trace(np.diag(gam) @ U.conj().T @ np.diag(tau) @ U))
    s = unistochastic(U)
    terms = birkhoff_decompose(s, tol)
    weights = np.array([w for w, _ in terms])
    perms = [sigma for _, sigma in terms]
    points = np.array([np.dot(gam, tau[sigma]) for sigma in perms])
    residual = abs(value - np.dot(weights, points))
    return BirkhoffCertificate(value, weights, perms, points, float(residual))
