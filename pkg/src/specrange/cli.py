"""Command-line entry point.

Usage::

    specrange <command> --config job.json [--seed N] [--out DIR]

Commands: range, spectrum, converge, dilate, essential, verify, plot.
Every run is deterministic given (config, seed); the seed is echoed into all
metadata.  Exit codes: 0 success/converged, 2 input error, 3 not converged,
4 hypothesis violated.
"""

from __future__ import annotations

import os

# Thread cap must land in the BLAS environment before numpy is imported.
_threads = os.environ.get("SPECRANGE_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse  # noqa: E402
import json  # noqa: E402
import sys  # noqa: E402
from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402

from . import dilation, finrange, limits, opmodel, planarsets, plots  # noqa: E402
from .finrange import HypothesisError  # noqa: E402
from .opmodel import SpecValidationError  # noqa: E402

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3
EXIT_HYPOTHESIS = 4

_DEFAULTS = {
    "hausdorff_tol": 1e-2,
    "algebra_tol": 1e-10,
    "star_tol_factor": 5.0,
    "count": 2000,
    "angles": 720,
    "samples_per_size": 2000,
    "prefix_len": 256,
}


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise SpecValidationError(f"config field '{key}' is required")
    return cfg[key]


def _operator(cfg: dict, key: str) -> opmodel.OperatorSpec:
    data = cfg.get(key)
    if data is None and key == "A":
        data = cfg.get("T")
    if data is None and key == "T":
        data = cfg.get("A")
    if data is None:
        raise SpecValidationError(f"config field '{key}' (operator spec) is required")
    try:
        return opmodel.operator_from_json(data)
    except SpecValidationError as exc:
        raise SpecValidationError(f"{key}: {exc}") from exc


def _write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_cloud(path, points) -> None:
    tmp = f"{path}.tmp"
    planarsets.write_points_csv(points, tmp)
    os.replace(tmp, path)


def _complex_pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.atleast_1d(values)]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def run_range(cfg: dict, out: Path, seed: int) -> int:
    c_spec = _operator(cfg, "C")
    a_spec = _operator(cfg, "A")
    if not c_spec.is_trace_class:
        raise SpecValidationError("C: must be a trace-class spec")
    n = int(_require(cfg, "n"))
    count = int(cfg.get("count", _DEFAULTS["count"]))
    angles = int(cfg.get("angles", _DEFAULTS["angles"]))

    cn = opmodel.truncate(c_spec, n)
    an = opmodel.truncate(a_spec, n)
    est = finrange.sample_range(cn, an, count, seed=[seed, n], angles=angles)

    _write_cloud(out / "cloud.csv", est.inner.points)
    if est.outer is not None:
        _write_cloud(out / "hull.csv", est.outer.vertices)
    _write_json(out / "metadata.json", {
        "command": "range",
        "n": n,
        "seed": seed,
        "count": count,
        "bound_radius": est.bound_radius,
        "star_centers": _complex_pairs(est.star_centers),
        "resolution": est.inner.resolution,
        "outer_hull": est.outer is not None,
    })
    plots.emit_svg(est.inner, est.outer, est.star_centers, out / "range.svg")
    plots.render_cloud_figure(est.inner, est.outer, est.star_centers,
                              out / "range.png", title=f"orbit values, n={n}")
    print(f"range: {len(est.inner)} points, bound radius "
          f"{est.bound_radius:.6g}, outer hull: {est.outer is not None}")
    return EXIT_OK


def run_spectrum(cfg: dict, out: Path, seed: int) -> int:
    c_spec = _operator(cfg, "C")
    t_spec = _operator(cfg, "T")
    for name, spec in (("C", c_spec), ("T", t_spec)):
        if spec.kind != "diagonal":
            raise SpecValidationError(f"{name}: spectrum command needs diagonal specs")
    n = int(_require(cfg, "n"))
    count = int(cfg.get("count", _DEFAULTS["count"]))
    gam = c_spec.diag_entries(n)
    tau = t_spec.diag_entries(n)
    if n <= 8:
        ss = finrange.c_spectrum_matrix(gam, tau, mode="exhaustive")
    else:
        ss = finrange.c_spectrum_matrix(gam, tau, mode="sampled",
                                        count=count, seed=[seed, n])
    _write_cloud(out / "spectrum.csv", ss.points.points)
    _write_json(out / "metadata.json", {
        "command": "spectrum", "n": n, "seed": seed,
        "mode": ss.mode, "count": ss.count, "points": len(ss.points),
    })
    plots.emit_svg(ss.points, None, None, out / "spectrum.svg")
    plots.render_cloud_figure(ss.points, None, None, out / "spectrum.png",
                              title=f"pairing spectrum, n={n} ({ss.mode})")
    print(f"spectrum: {len(ss.points)} distinct points ({ss.mode})")
    return EXIT_OK


def run_converge(cfg: dict, out: Path, seed: int) -> int:
    target = cfg.get("target", "range")
    if target not in ("range", "spectrum"):
        raise SpecValidationError("target: must be 'range' or 'spectrum'")
    c_spec = _operator(cfg, "C")
    t_spec = _operator(cfg, "T")
    sizes = tuple(int(s) for s in _require(cfg, "sizes"))
    samples = int(cfg.get("samples_per_size", _DEFAULTS["samples_per_size"]))
    tol = float(cfg.get("hausdorff_tol", _DEFAULTS["hausdorff_tol"]))
    mode = cfg.get("mode", "cutout")
    if mode not in ("cutout", "projected"):
        raise SpecValidationError("mode: must be 'cutout' or 'projected'")
    sched = limits.TruncationSchedule(sizes, samples, seed)

    outers = None
    if target == "range":
        if mode == "projected":
            # both-sides block compression inside a fixed ambient space is
            # only a faithful surrogate for compact operators
            if not t_spec.is_compact:
                raise HypothesisError(
                    "projected truncation mode requires a compact operator; "
                    "use mode 'cutout' for merely bounded specs")
            ambient = 2 * max(sizes)
            ests = []
            for n_ in sizes:
                cn = opmodel.truncate(opmodel.block_approx(c_spec, n_), ambient)
                tn = opmodel.truncate(opmodel.block_approx(t_spec, n_), ambient)
                ests.append(finrange.sample_range(cn, tn, samples,
                                                  seed=[seed, n_]))
        else:
            ests = limits.range_sequence(c_spec, t_spec, sched)
        clouds = [e.inner for e in ests]
        outers = [e.outer for e in ests]
    else:
        sets = limits.spectrum_sequence(c_spec, t_spec, sched)
        clouds = [s.points for s in sets]

    records, report = limits.sequence_report(clouds, c_spec, t_spec, sched,
                                             tol, outers)
    for rec, cloud in zip(records, clouds):
        fname = f"cloud_{rec['n']:04d}.csv"
        _write_cloud(out / fname, cloud.points)
        rec["cloud_file"] = fname

    _write_json(out / "report.json", {
        "command": "converge", "target": target, "mode": mode,
        "seed": seed, "tol": tol, "sizes": list(sizes),
        "converged": report.converged,
        "distances": [float(d) for d in report.distances],
        "kuratowski_gap": report.kuratowski_gap,
        "records": records,
    })
    plots.render_convergence_figure(
        sizes, [r.get("hausdorff_to_prev") for r in records[1:]],
        [r.get("tail_bound") for r in records[1:]], clouds[-1],
        out / "converge.png")
    plots.emit_svg(clouds[-1],
                   outers[-1] if outers else None, None, out / "final.svg")
    status = "converged" if report.converged else "not converged"
    print(f"converge[{target}]: {status} at tol {tol:g}; distances "
          + ", ".join(f"{d:.3g}" for d in report.distances))
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def run_dilate(cfg: dict, out: Path, seed: int) -> int:
    m = opmodel.matrix_from_json(_require(cfg, "matrix"))
    dil = dilation.dilate_contraction(m)
    n = dil.n
    unit_defect = float(np.linalg.norm(
        dil.v.conj().T @ dil.v - np.eye(2 * n), 2))
    cb_defect = float(np.abs(dil.u @ dil.u.conj().T +
                             dil.q @ dil.q.conj().T - np.eye(n)).max())
    _write_json(out / "dilation.json", {
        "command": "dilate", "seed": seed, "n": n,
        "v": opmodel.matrix_to_json(dil.v),
        "unitarity_defect": unit_defect,
        "corner_identity_defect": cb_defect,
        "corner_exact": bool(np.array_equal(dil.u, m)),
    })
    print(f"dilate: 2n={2*n}, unitarity defect {unit_defect:.2e}")
    return EXIT_OK


def run_essential(cfg: dict, out: Path, seed: int) -> int:
    t_spec = _operator(cfg, "T")
    prefix_len = int(cfg.get("prefix_len", _DEFAULTS["prefix_len"]))
    method = cfg.get("method", "cesaro")
    est = limits.essential_center(t_spec, prefix_len, method)
    _write_cloud(out / "essential.csv", est.center_candidates.points)
    _write_json(out / "essential.json", {
        "command": "essential", "seed": seed,
        "prefix_len": est.prefix_len, "method": est.method,
        "converged": est.converged, "notes": est.notes,
        "candidates": _complex_pairs(est.center_candidates.points),
    })
    plots.render_cloud_figure(est.center_candidates, None, None,
                              out / "essential.png",
                              title=f"essential-range candidates ({est.method})")
    print(f"essential: {len(est.center_candidates)} candidates, "
          f"converged={est.converged}")
    return EXIT_OK


def run_plot(cfg: dict, out: Path, seed: int) -> int:
    src = Path(_require(cfg, "source"))
    made = 0
    for stem in ("cloud", "spectrum", "essential"):
        csv_path = src / f"{stem}.csv"
        if not csv_path.exists():
            continue
        cloud = planarsets.read_cloud_csv(csv_path)
        hull = None
        if (src / "hull.csv").exists():
            hull = planarsets.read_polygon_csv(src / "hull.csv")
        centers = None
        meta_path = src / "metadata.json"
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())
            pairs = meta.get("star_centers")
            if pairs:
                centers = np.array([complex(p[0], p[1]) for p in pairs])
        plots.render_cloud_figure(cloud, hull, centers,
                                  out / f"{stem}_replot.png")
        made += 1
    if made == 0:
        raise SpecValidationError(f"source: no plottable CSV files in {src}")
    print(f"plot: rendered {made} figure(s) into {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Built-in verification suite
# ---------------------------------------------------------------------------

def _random_cloud(rng, size=30, scale=1.0):
    pts = scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return planarsets.PointCloud(pts)


def _check_metric_axioms(rng):
    for _ in range(40):
        a, b, c = (_random_cloud(rng) for _ in range(3))
        dab = planarsets.hausdorff_distance(a, b)
        dba = planarsets.hausdorff_distance(b, a)
        if abs(dab - dba) > 1e-12:
            return False, "symmetry violated"
        if planarsets.hausdorff_distance(a, a) != 0.0:
            return False, "self-distance nonzero"
        dac = planarsets.hausdorff_distance(a, c)
        dbc = planarsets.hausdorff_distance(b, c)
        if dac > dab + dbc + 1e-12:
            return False, "triangle inequality violated"
    return True, "symmetry, identity, triangle inequality on 40 random triples"


def _check_trace_norm(rng):
    for _ in range(20):
        s, c, t = (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
                   for _ in range(3))
        lhs = opmodel.trace_norm(s @ c @ t)
        rhs = (np.linalg.norm(s, 2) * opmodel.trace_norm(c) * np.linalg.norm(t, 2))
        if lhs > rhs * (1 + 1e-10):
            return False, "submultiplicative bound violated"
        if opmodel.trace_norm(c) + 1e-10 < np.linalg.norm(c, 2):
            return False, "trace norm below operator norm"
        if opmodel.trace_norm(c) + 1e-10 < abs(np.trace(c)):
            return False, "trace norm below |trace|"
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rank_one = np.outer(y, x.conj())
    if abs(opmodel.trace_norm(rank_one) -
           np.linalg.norm(x) * np.linalg.norm(y)) > 1e-10:
        return False, "rank-one trace norm mismatch"
    return True, "norm inequalities on 20 random triples + rank-one identity"


def _check_schmidt(rng):
    for _ in range(10):
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        tri = opmodel.schmidt(m)
        resid = np.abs(tri.reconstruct() - m).max()
        if resid > 1e-10 * opmodel.trace_norm(m):
            return False, f"reconstruction residual {resid:.2e}"
    return True, "reconstruction residual <= 1e-10 * nu1 on 10 random matrices"


def _check_truncation(rng):
    spec = opmodel.OperatorSpec.diagonal(
        lambda j: 1.0 / j, opmodel.Decay.null_sequence(lambda n: 1.0 / (n + 1)), 1.0)
    for k in (2, 5, 9):
        approx = opmodel.block_approx(spec, k)
        big = opmodel.truncate(approx, 4 * k)
        expect = np.zeros((4 * k, 4 * k), dtype=complex)
        expect[:k, :k] = opmodel.truncate(spec, k)
        if not np.array_equal(big, expect):
            return False, "block approximation mismatch"
        gap = np.linalg.norm(opmodel.truncate(spec, 8 * k) -
                             opmodel.truncate(approx, 8 * k), 2)
        if abs(gap - 1.0 / (k + 1)) > 1e-12:
            return False, f"compression defect {gap} != 1/(k+1)"
    return True, "block compression identities at k=2,5,9"


def _check_haar(rng):
    units = finrange.haar_unitaries(5, 50, rng.integers(2**32))
    defect = max(np.abs(u.conj().T @ u - np.eye(5)).max() for u in units)
    if defect > 1e-12:
        return False, f"unitarity defect {defect:.2e}"
    c = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    bound = opmodel.trace_norm(c) * np.linalg.norm(a, 2)
    for u in units:
        if abs(finrange.wc_point(c, a, u)) > bound + 1e-9:
            return False, "trace-norm radius bound violated"
    return True, "50 Haar samples unitary to 1e-12 and inside the radius bound"


def _check_conjugation(rng):
    n = 4
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    v = finrange.haar_unitary(n, int(rng.integers(2**32)))
    for _ in range(10):
        u = finrange.haar_unitary(n, int(rng.integers(2**32)))
        w1 = finrange.wc_point(c, a, u)
        w2 = finrange.wc_point(v @ c @ v.conj().T, v @ a @ v.conj().T,
                               v @ u @ v.conj().T)
        if abs(w1 - w2) > 1e-10 * max(1.0, abs(w1)):
            return False, "conjugation invariance violated"
    return True, "joint unitary conjugation leaves values fixed (10 samples)"


def _check_inclusion_small(rng):
    for n in (4, 5):
        gam = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / \
            (1.0 + np.arange(n)) ** 2
        tau = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / \
            (1.0 + np.arange(n))
        ss = finrange.c_spectrum_matrix(gam, tau, mode="exhaustive")
        c, t = np.diag(gam), np.diag(tau)
        import itertools as it
        sums = np.array([np.dot(gam, tau[list(s)])
                         for s in it.permutations(range(n))])
        attained = np.array(
            [finrange.wc_point(c, t, np.eye(n)[:, list(s)])
             for s in it.permutations(range(n))])
        if np.abs(np.sort_complex(sums) - np.sort_complex(attained)).max() > 1e-12:
            return False, "permutation unitaries do not attain pairing sums"
        if planarsets.directed_hausdorff(
                ss.points, planarsets.PointCloud(sums)) > 1e-12:
            return False, "spectrum points missing from pairing sums"
        for k in range(50):
            u = finrange.haar_unitary(n, int(rng.integers(2**32)))
            cert = finrange.wc_birkhoff_certificate(gam, tau, u)
            if cert.residual > 1e-9:
                return False, f"certificate residual {cert.residual:.2e}"
    return True, "pairing sums attained exactly; 100 convex certificates <= 1e-9"


def _check_dilation(rng):
    for _ in range(20):
        n = int(rng.integers(2, 9))
        u = 0.9 * finrange.haar_unitary(n, int(rng.integers(2**32)))
        dil = dilation.dilate_contraction(u)
        if np.linalg.norm(dil.v.conj().T @ dil.v - np.eye(2 * n), 2) > 1e-12:
            return False, "dilation not unitary to 1e-12"
        if not np.array_equal(dil.u, u):
            return False, "corner block not exact"
        defect = np.abs(dil.u @ dil.u.conj().T +
                        dil.q @ dil.q.conj().T - np.eye(n)).max()
        if defect > 1e-12:
            return False, "corner identity violated"
    big = 32
    u_big = finrange.haar_unitary(big, int(rng.integers(2**32)))
    c = np.zeros((big, big), dtype=complex)
    t = np.zeros((big, big), dtype=complex)
    c[:6, :6] = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    t[:6, :6] = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    for n in (4, 8):
        u_hat, v = dilation.approx_unitary(u_big, n)
        lhs = np.trace(c @ u_hat.conj().T @ t @ u_hat)
        rhs = np.trace(c[:2*n, :2*n] @ v.conj().T @ t[:2*n, :2*n] @ v)
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
            return False, "embedded trace identity violated"
    return True, "20 dilations pass block identities; trace identity at ambient 32"


def _check_triangular(rng):
    for _ in range(20):
        n = int(rng.integers(2, 11))
        m = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        if rng.random() < 0.5:
            m = m.T
        diag, dist = finrange.triangular_spectrum(m, 1e-12)
        if dist > 1e-8:
            return False, f"eigensolver matching distance {dist:.2e}"
        if not np.array_equal(diag, np.diag(m)):
            return False, "diagonal not returned verbatim"
    return True, "20 random triangular matrices match the dense eigensolver"


def _check_zero_padding(rng):
    vals = 0.5 ** np.arange(1, 7)
    a = opmodel.EigSeq(vals, float(vals[-1]), opmodel.TRACE_CLASS)
    padded = limits.interleave_zeros(vals[:3])
    a_pad = opmodel.EigSeq(padded, float(np.abs(vals[3:]).sum() + vals[-1]),
                           opmodel.TRACE_CLASS)
    b = opmodel.EigSeq((0.8 ** np.arange(1, 7)) *
                       np.exp(1j * np.arange(1, 7)), 0.8 ** 7,
                       opmodel.NULL_SEQUENCE)
    cloud = limits.permutation_sum_set(a, b, trunc=6)
    cloud_pad = limits.permutation_sum_set(a_pad, b, trunc=6)
    gap = planarsets.hausdorff_distance(cloud, cloud_pad)
    allowance = cloud.resolution + cloud_pad.resolution
    if gap > allowance:
        return False, f"padding moved the cloud by {gap:.3g} > {allowance:.3g}"
    return True, f"padded/unpadded clouds within tail allowance ({gap:.3g})"


def _check_projection_defect(rng):
    # rank-one compression defect: the basis projection drops a far basis
    # vector entirely, so the trace defect is exactly one for every size
    for n in (3, 6, 12):
        c = np.zeros((n + 1, n + 1))
        c[n, n] = 1.0
        pi = np.diag(np.concatenate([np.ones(n), np.zeros(1)]))
        val = abs(np.trace(c @ pi) - np.trace(c))
        if val != 1.0:
            return False, f"defect {val} != 1 at n={n}"
    return True, "uniform-convergence counterexample value is exactly 1"


def _check_truncated_range_gap(rng):
    # both-sides compression of the identity against a rank-one projector:
    # the truncated estimates fill [0, 1] while the full value set is {1}
    for n in (4, 8):
        m = n + 4
        c = np.zeros((m, m))
        c[0, 0] = 1.0
        proj = np.diag(np.concatenate([np.ones(n), np.zeros(m - n)]))
        hull = finrange.boundary_hull(c, proj, angles=360)
        seg = planarsets.PointCloud(hull.vertices)
        gap = planarsets.hausdorff_distance(
            seg, planarsets.PointCloud(np.array([1.0 + 0.0j])))
        if abs(gap - 1.0) > 1e-9:
            return False, f"gap {gap} != 1 at n={n}"
    return True, "truncated estimates fill [0,1]; distance to the true {1} is 1"


def _check_padded_sum_sets(rng):
    k = 8
    a = opmodel.EigSeq(0.5 ** np.arange(1, k + 1), 2.0 ** -k, opmodel.TRACE_CLASS)
    ones = opmodel.EigSeq(np.ones(k), 1.0, opmodel.NULL_SEQUENCE)
    ones_pad = opmodel.EigSeq(np.concatenate([[0.0], np.ones(k - 1)]), 1.0,
                              opmodel.NULL_SEQUENCE)
    cloud = limits.permutation_sum_set(a, ones, trunc=k)
    cloud_pad = limits.permutation_sum_set(a, ones_pad, trunc=k)
    one = planarsets.PointCloud(np.array([1.0 + 0.0j]))
    d1 = planarsets.hausdorff_distance(cloud, one)
    targets = planarsets.PointCloud(1.0 - 0.5 ** np.arange(1, k + 1))
    d2 = planarsets.hausdorff_distance(cloud_pad, targets)
    gap = planarsets.hausdorff_distance(cloud, cloud_pad)
    if d1 > 2.0 ** -k + 1e-15:
        return False, f"constant-weight set off {1} by {d1:.3g}"
    if d2 > 2.0 ** -k + 1e-15:
        return False, f"padded set misses the geometric ladder by {d2:.3g}"
    if gap < 0.25:
        return False, f"closure gap {gap:.3g} unexpectedly small"
    return True, (f"sets match {{1}} and the geometric ladder to 2^-{k}; "
                  f"padding gap {gap:.3g}")


_VERIFY_CHECKS = [
    ("metric_axioms", _check_metric_axioms),
    ("trace_norm_inequalities", _check_trace_norm),
    ("schmidt_reconstruction", _check_schmidt),
    ("truncation_block_identities", _check_truncation),
    ("haar_sampling", _check_haar),
    ("conjugation_invariance", _check_conjugation),
    ("inclusion_chain_small", _check_inclusion_small),
    ("dilation_identities", _check_dilation),
    ("triangular_spectra", _check_triangular),
    ("zero_padding_closure", _check_zero_padding),
    ("projection_defect_value", _check_projection_defect),
    ("truncated_range_gap", _check_truncated_range_gap),
    ("padded_sum_sets", _check_padded_sum_sets),
]


def run_verify(cfg: dict, out: Path, seed: int) -> int:
    rng = np.random.default_rng(seed)
    results = []
    for name, fn in _VERIFY_CHECKS:
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, not a crash
            ok, detail = False, f"exception: {exc}"
        results.append({"name": name, "passed": bool(ok), "detail": detail})
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    passed = all(r["passed"] for r in results)
    _write_json(out / "verify.json",
                {"command": "verify", "seed": seed, "passed": passed,
                 "checks": results})
    print(f"verify: {'all checks passed' if passed else 'FAILURES present'}")
    return EXIT_OK if passed else 1


# ---------------------------------------------------------------------------

_COMMANDS = {
    "range": run_range,
    "spectrum": run_spectrum,
    "converge": run_converge,
    "dilate": run_dilate,
    "essential": run_essential,
    "verify": run_verify,
    "plot": run_plot,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="specrange",
        description="compute and certify unitary-orbit value sets of "
                    "truncated operators")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="job JSON file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    args = parser.parse_args(argv)

    try:
        cfg = {}
        if args.config is not None:
            with open(args.config) as fh:
                cfg = json.load(fh)
            if not isinstance(cfg, dict):
                raise SpecValidationError("config: top level must be an object")
        elif args.command != "verify":
            raise SpecValidationError("--config is required for this command")

        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        out = Path(args.out or cfg.get("out", "specrange_out"))
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out, seed)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON in config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (SpecValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
