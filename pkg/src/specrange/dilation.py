"""Unitary dilation of contractions and strong-approximation surrogates.

A contraction U (operator norm at most 1) embeds as the top-left block of a
2n x 2n unitary V = [[U, Q], [R, S]] with Q = sqrt(I - U U^dag); the bottom
rows complete the top ones to an orthonormal basis.  ``approx_unitary``
builds the finite stand-in for the strong approximants of a unitary on an
ambient space: the dilation of a leading corner block, embedded back at the
ambient size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np

_COMPLETION_SKIP = 1e-8


@dataclass(frozen=True)
class DilationResult:
    """2n x 2n unitary whose top-left n x n block is the input contraction."""

    v: np.ndarray
    n: int

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex)
        defect = np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0]), 2)
        if defect > 1e-12:
            raise ValueError(f"dilation is not unitary (defect {defect:.2e})")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def u(self) -> np.ndarray:
        return self.v[:self.n, :self.n]

    @property
    def q(self) -> np.ndarray:
        return self.v[:self.n, self.n:]

    @property
    def r(self) -> np.ndarray:
        return self.v[self.n:, :self.n]

    @property
    def s(self) -> np.ndarray:
        return self.v[self.n:, self.n:]


def psd_sqrt(m) -> np.ndarray:
    """Unique PSD square root of a hermitian PSD matrix (spectral method).

    Eigenvalues in [-1e-12, 0) are clamped to zero; anything below -1e-8
    is rejected.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("psd_sqrt expects a square matrix")
    herm_defect = np.abs(m - m.conj().T).max() if m.size else 0.0
    if herm_defect > 1e-10 * max(1.0, np.abs(m).max()):
        raise ValueError("psd_sqrt expects a hermitian matrix")
    w, vec = np.linalg.eigh((m + m.conj().T) / 2.0)
    if w.size and w.min() < -1e-8:
        raise ValueError(f"matrix has eigenvalue {w.min():.3e} < -1e-8")
    w = np.clip(w, 0.0, None)
    root = (vec * np.sqrt(w)[None, :]) @ vec.conj().T
    return (root + root.conj().T) / 2.0


def dilate_contraction(u) -> DilationResult:
    """Embed a contraction as the corner of a 2n x 2n unitary.

    Norms in (1, 1 + 1e-10] are rescaled to 1 with a warning; larger norms
    are rejected.  Row completion is deterministic Gram-Schmidt against the
    standard basis vectors in index order, skipping near-dependent
    candidates, so repeated runs give identical output.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("dilate_contraction expects a square matrix")
    n = u.shape[0]
    nrm = float(np.linalg.norm(u, 2)) if u.size else 0.0
    if nrm > 1.0 + 1e-10:
        raise ValueError(f"operator norm {nrm} exceeds 1 + 1e-10")
    if nrm > 1.0:
        warnings.warn(f"contraction rescaled by 1/{nrm} to reach norm 1")
        u = u / nrm

    q = psd_sqrt(np.eye(n) - u @ u.conj().T)
    top = np.hstack([u, q])

    rows = [top[i] for i in range(n)]
    completed = []
    for k in range(2 * n):
        cand = np.zeros(2 * n, dtype=complex)
        cand[k] = 1.0
        vec = cand
        for _ in range(2):  # one re-orthogonalization sweep
            for r in rows:
                vec = vec - np.vdot(r, vec) * r
        norm = np.linalg.norm(vec)
        if norm <= _COMPLETION_SKIP:
            continue
        vec = vec / norm
        rows.append(vec)
        completed.append(vec)
        if len(completed) == n:
            break
    if len(completed) < n:
        raise RuntimeError("failed to complete the dilation rows")

    v = np.vstack([top, np.vstack(completed)])
    v[:n, :n] = u  # exact corner block
    return DilationResult(v, n)


def approx_unitary(u_big, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Finite strong-approximation step for a unitary on an ambient space.

    Dilates the leading n x n corner of the ambient unitary to a 2n x 2n
    unitary v and embeds it back at the ambient size with zeros elsewhere,
    so the result is supported on (and reproduced by) the leading 2n block.
    Returns ``(u_hat, v)``.
    """
    u_big = np.asarray(u_big, dtype=complex)
    if u_big.ndim != 2 or u_big.shape[0] != u_big.shape[1]:
        raise ValueError("ambient operator must be a square matrix")
    big = u_big.shape[0]
    if 2 * n > big:
        raise ValueError("need 2n <= ambient size")
    defect = np.abs(u_big.conj().T @ u_big - np.eye(big)).max()
    if defect > 1e-10:
        raise ValueError("ambient operator is not unitary to 1e-10")

    corner = u_big[:n, :n]
    nrm = float(np.linalg.norm(corner, 2))
    if nrm > 1.0:  # roundoff can push the corner slightly past 1
        corner = corner / nrm
    dil = dilate_contraction(corner)
    u_hat = np.zeros((big, big), dtype=complex)
    u_hat[:2 * n, :2 * n] = dil.v
    return u_hat, dil.v
