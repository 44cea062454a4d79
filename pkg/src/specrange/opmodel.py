"""Operator representations in a fixed canonical orthonormal basis.

A bounded operator is described by an :class:`OperatorSpec`: either a dense
finite matrix (implicitly embedded with zeros elsewhere), a diagonal entry
generator ``j -> tau_j``, or a general entrywise generator ``(i, j) ->
complex``.  Generators use 1-based indices.  Decay metadata carries
user-supplied closed-form tail bounds; they are never inferred from finitely
many entries.

All specs are immutable and generator rules must be pure functions, so every
operation here is safe for concurrent use.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

TRACE_CLASS = "trace_class"
NULL_SEQUENCE = "null_sequence"
BOUNDED = "bounded"

_NORMALITY_RTOL = 1e-10


class SpecValidationError(ValueError):
    """Raised when an operator description (JSON or constructor) is invalid."""


class EvaluationError(RuntimeError):
    """Raised when an entry generator fails; carries the offending index."""


@dataclass(frozen=True)
class Decay:
    """Summability metadata: class plus a closed-form tail bound.

    For ``trace_class`` the rule bounds sum_{j>n} |s_j|; for
    ``null_sequence`` it bounds sup_{j>n} |s_j|; ``bounded`` has no tail.
    """

    kind: str
    tail: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        if self.kind not in (TRACE_CLASS, NULL_SEQUENCE, BOUNDED):
            raise SpecValidationError(f"unknown decay kind {self.kind!r}")
        if self.kind != BOUNDED and self.tail is None:
            raise SpecValidationError(f"decay {self.kind!r} requires a tail rule")

    def tail_bound(self, n: int) -> float:
        if self.tail is None:
            raise SpecValidationError("bounded-only spec has no tail bound")
        val = float(self.tail(n))
        if val < 0 or not np.isfinite(val):
            raise SpecValidationError(f"tail bound at {n} is invalid: {val}")
        return val

    @staticmethod
    def trace_class(tail: Callable[[int], float]) -> "Decay":
        return Decay(TRACE_CLASS, tail)

    @staticmethod
    def null_sequence(tail: Callable[[int], float]) -> "Decay":
        return Decay(NULL_SEQUENCE, tail)

    @staticmethod
    def bounded() -> "Decay":
        return Decay(BOUNDED, None)


@dataclass(frozen=True)
class OperatorSpec:
    """A bounded operator in the canonical basis.

    kind is one of ``finite`` (dense block, zero elsewhere), ``diagonal``
    (generator j -> tau_j) or ``entrywise`` (generator (i, j) -> complex).
    """

    kind: str
    decay: Decay
    norm_bound: float
    matrix: Optional[np.ndarray] = None
    diag_rule: Optional[Callable[[int], complex]] = None
    entry_rule: Optional[Callable[[int, int], complex]] = None

    def __post_init__(self):
        if self.kind not in ("finite", "diagonal", "entrywise"):
            raise SpecValidationError(f"unknown operator kind {self.kind!r}")
        if self.kind == "finite":
            m = np.asarray(self.matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise SpecValidationError("finite matrix must be square")
            if not np.all(np.isfinite(m.real) & np.isfinite(m.imag)):
                raise SpecValidationError("finite matrix has non-finite entries")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        elif self.kind == "diagonal" and self.diag_rule is None:
            raise SpecValidationError("diagonal spec needs a diag_rule")
        elif self.kind == "entrywise" and self.entry_rule is None:
            raise SpecValidationError("entrywise spec needs an entry_rule")
        if not np.isfinite(self.norm_bound) or self.norm_bound < 0:
            raise SpecValidationError("norm_bound must be a nonnegative real")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def finite(matrix, norm_bound: Optional[float] = None) -> "OperatorSpec":
        m = np.asarray(matrix, dtype=complex)
        if norm_bound is None:
            norm_bound = float(np.linalg.norm(m, 2)) if m.size else 0.0
        return OperatorSpec("finite", Decay.trace_class(lambda n: 0.0),
                            norm_bound, matrix=m)

    @staticmethod
    def diagonal(rule: Callable[[int], complex], decay: Decay,
                 norm_bound: float) -> "OperatorSpec":
        return OperatorSpec("diagonal", decay, norm_bound, diag_rule=rule)

    @staticmethod
    def entrywise(rule: Callable[[int, int], complex], decay: Decay,
                  norm_bound: float) -> "OperatorSpec":
        return OperatorSpec("entrywise", decay, norm_bound, entry_rule=rule)

    # -- entry access (1-based indices) -------------------------------------

    def entry(self, i: int, j: int) -> complex:
        try:
            if self.kind == "finite":
                n = self.matrix.shape[0]
                if i <= n and j <= n:
                    return complex(self.matrix[i - 1, j - 1])
                return 0.0 + 0.0j
            if self.kind == "diagonal":
                return complex(self.diag_rule(i)) if i == j else 0.0 + 0.0j
            return complex(self.entry_rule(i, j))
        except Exception as exc:  # generator bugs surface with the index
            raise EvaluationError(f"entry generator failed at ({i}, {j}): {exc}") from exc

    def diag_entries(self, n: int) -> np.ndarray:
        return np.array([self.entry(j, j) for j in range(1, n + 1)], dtype=complex)

    @property
    def is_trace_class(self) -> bool:
        return self.kind == "finite" or self.decay.kind == TRACE_CLASS

    @property
    def is_compact(self) -> bool:
        return self.is_trace_class or self.decay.kind == NULL_SEQUENCE

    def tail_bound(self, n: int) -> float:
        if self.kind == "finite":
            size = self.matrix.shape[0]
            if n >= size:
                return 0.0
            sv = np.linalg.svd(np.asarray(self.matrix), compute_uv=False)
            if self.decay.kind == NULL_SEQUENCE:
                return float(sv[n]) if n < sv.size else 0.0
            return float(sv[n:].sum())
        return self.decay.tail_bound(n)


# ---------------------------------------------------------------------------
# Truncation, block approximation, embedding
# ---------------------------------------------------------------------------

def truncate(op: OperatorSpec, n: int) -> np.ndarray:
    """Dense n x n matrix of the leading block <e_i, A e_j>, 1 <= i,j <= n."""
    if n < 1:
        raise ValueError("truncation size must be >= 1")
    if op.kind == "finite":
        m = op.matrix
        out = np.zeros((n, n), dtype=complex)
        k = min(n, m.shape[0])
        out[:k, :k] = m[:k, :k]
        return out
    if op.kind == "diagonal":
        return np.diag(op.diag_entries(n))
    out = np.empty((n, n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out[i - 1, j - 1] = op.entry(i, j)
    return out


def block_approx(op: OperatorSpec, k: int) -> OperatorSpec:
    """Compress to the leading k x k block: entries vanish outside it."""
    if k < 1:
        raise ValueError("block size must be >= 1")
    if op.kind == "finite":
        m = np.array(op.matrix)
        m[k:, :] = 0.0
        m[:, k:] = 0.0
        return OperatorSpec.finite(m, op.norm_bound)
    if op.kind == "diagonal":
        rule = op.diag_rule
        return OperatorSpec.diagonal(
            lambda j, _r=rule, _k=k: _r(j) if j <= _k else 0.0,
            op.decay, op.norm_bound)
    rule2 = op.entry_rule
    return OperatorSpec.entrywise(
        lambda i, j, _r=rule2, _k=k: _r(i, j) if (i <= _k and j <= _k) else 0.0,
        op.decay, op.norm_bound)


def embed(m, dim: Optional[int] = None) -> OperatorSpec:
    """Embed a dense matrix as the leading block of an operator, 0 elsewhere.

    ``dim`` may be None (infinite ambient) or any integer >= the block size.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("embed expects a square matrix")
    if dim is not None and dim < m.shape[0]:
        raise ValueError("ambient dimension smaller than the block")
    return OperatorSpec.finite(m)


# ---------------------------------------------------------------------------
# Trace, trace norm, Schmidt decomposition
# ---------------------------------------------------------------------------

def trace(op: OperatorSpec, n: int) -> Tuple[complex, float]:
    """Partial trace sum_{j<=n} <e_j, A e_j> plus a tail error bound.

    Only defined for trace-class specs; the bound comes from the decay
    metadata (exact for finite blocks).
    """
    if not op.is_trace_class:
        raise ValueError("trace requires a trace-class spec")
    value = complex(op.diag_entries(n).sum())
    if op.kind == "finite":
        size = op.matrix.shape[0]
        rest = np.trace(op.matrix[n:, n:]) if n < size else 0.0
        bound = abs(complex(rest))
    else:
        bound = op.tail_bound(n)
    return value, bound


def trace_norm(m) -> float:
    """Sum of singular values (Schatten-1 norm) of a finite matrix."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False).sum())


@dataclass(frozen=True)
class SchmidtTriple:
    """m = sum_k s_k <right_k, .> left_k with orthonormal column frames."""

    singulars: np.ndarray   # nonincreasing, nonnegative
    left: np.ndarray        # columns u_k
    right: np.ndarray       # columns v_k

    def __post_init__(self):
        s = np.asarray(self.singulars, dtype=float)
        if np.any(np.diff(s) > 1e-12 * max(1.0, s[0] if s.size else 0.0)):
            raise ValueError("singular values must be nonincreasing")
        for frame in (self.left, self.right):
            g = frame.conj().T @ frame
            if np.abs(g - np.eye(g.shape[0])).max() > 1e-12:
                raise ValueError("frame is not orthonormal to 1e-12")

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singulars[None, :]) @ self.right.conj().T


def schmidt(m) -> SchmidtTriple:
    """Singular value decomposition packaged as a Schmidt triple."""
    m = np.asarray(m, dtype=complex)
    u, s, vh = np.linalg.svd(m)
    k = min(m.shape)
    return SchmidtTriple(s[:k], u[:, :k], vh[:k, :].conj().T)


# ---------------------------------------------------------------------------
# Modified eigenvalue sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigSeq:
    """Finite prefix of a modified eigenvalue sequence plus a tail bound.

    ``klass`` is ``trace_class`` (tail bounds sum_{j>N} |gamma_j|) or
    ``null_sequence`` (tail bounds sup_{j>N} |gamma_j|).
    """

    values: np.ndarray
    tail_bound: float
    klass: str

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if self.klass not in (TRACE_CLASS, NULL_SEQUENCE):
            raise ValueError(f"unknown sequence class {self.klass!r}")
        if self.tail_bound < 0 or not np.isfinite(self.tail_bound):
            raise ValueError("tail_bound must be a nonnegative real")
        if self.klass == TRACE_CLASS and not np.isfinite(np.abs(vals).sum()):
            raise ValueError("trace-class prefix must be absolutely summable")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return int(self.values.size)

    def sup_bound(self) -> float:
        """Upper bound for sup_j of the whole sequence's modulus."""
        head = float(np.abs(self.values).max()) if len(self) else 0.0
        return max(head, self.tail_bound)


def is_normal(m, rtol: float = _NORMALITY_RTOL) -> bool:
    m = np.asarray(m, dtype=complex)
    nrm = np.linalg.norm(m, 2)
    if nrm == 0.0:
        return True
    comm = m @ m.conj().T - m.conj().T @ m
    return np.linalg.norm(comm, 2) <= rtol * nrm * nrm


def _sorted_desc(vals: np.ndarray) -> np.ndarray:
    # decreasing modulus; ties broken by phase for determinism
    order = np.lexsort((np.angle(vals), -np.abs(vals)))
    return vals[order]


def modified_eig_seq(op: OperatorSpec, prefix_len: int) -> EigSeq:
    """Eigenvalues in decreasing modulus with zeros slotted per kernel size.

    Finite-rank specs keep their sequence unchanged (zeros trail naturally).
    For diagonal generators the kernel size is inferred from a probe window
    4x the prefix: no zeros means kernel {0}; zeros recurring into the last
    quarter of the window are treated as an infinite kernel and interleaved
    at the even positions of the output; otherwise the finitely many zeros
    are placed at the front.
    """
    if prefix_len < 1:
        raise ValueError("prefix_len must be >= 1")

    if op.kind == "finite":
        m = op.matrix
        if not is_normal(m):
            raise ValueError("modified_eig_seq requires a normal operator")
        eigs = _sorted_desc(np.linalg.eigvals(m))
        eigs = eigs[np.abs(eigs) > 0.0]
        out = np.zeros(prefix_len, dtype=complex)
        k = min(prefix_len, eigs.size)
        out[:k] = eigs[:k]
        return EigSeq(out, 0.0, TRACE_CLASS)

    if op.kind != "diagonal":
        raise ValueError("modified_eig_seq supports diagonal and finite specs only")
    if not op.is_compact:
        raise ValueError("modified_eig_seq requires a compact spec")

    window = max(4 * prefix_len, 64)
    probe = op.diag_entries(window)
    zero_pos = np.nonzero(np.abs(probe) == 0.0)[0]
    nonzero = _sorted_desc(probe[np.abs(probe) > 0.0])

    if op.tail_bound(window) == 0.0 and nonzero.size < window:
        # finite rank: eigenvalue sequence left unchanged
        out = np.zeros(prefix_len, dtype=complex)
        k = min(prefix_len, nonzero.size)
        out[:k] = nonzero[:k]
        kept = nonzero.size
    elif zero_pos.size == 0:
        out = nonzero[:prefix_len]
        if out.size < prefix_len:
            raise EvaluationError(f"probe window too short for prefix {prefix_len}")
        kept = prefix_len
    elif zero_pos[-1] >= 3 * window // 4:
        # zeros keep recurring: infinite kernel, zeros at even positions
        out = np.zeros(prefix_len, dtype=complex)
        odd = (prefix_len + 1) // 2
        if nonzero.size < odd:
            raise EvaluationError(f"probe window too short for prefix {prefix_len}")
        out[0::2] = nonzero[:odd]
        kept = odd
    else:
        k = int(zero_pos.size)
        out = np.zeros(prefix_len, dtype=complex)
        m_ = min(prefix_len - min(k, prefix_len), nonzero.size)
        out[min(k, prefix_len):min(k, prefix_len) + m_] = nonzero[:m_]
        kept = m_

    klass = TRACE_CLASS if op.is_trace_class else NULL_SEQUENCE
    return EigSeq(out, op.tail_bound(kept), klass)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecValidationError(f"matrix: expected nested [re, im] arrays ({exc})")
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise SpecValidationError("matrix: expected shape (n, n, 2) of [re, im] pairs")
    if arr.shape[0] != arr.shape[1]:
        raise SpecValidationError("matrix: must be square")
    return arr[..., 0] + 1j * arr[..., 1]


def _rule_from_json(rule: dict) -> Tuple[Callable[[int], complex], dict]:
    if not isinstance(rule, dict) or "type" not in rule:
        raise SpecValidationError("rule: missing 'type'")
    kind = rule["type"]
    if kind == "geometric":
        try:
            ratio = float(rule["ratio"])
        except KeyError:
            raise SpecValidationError("rule.ratio: required for geometric rule")
        if not 0 < ratio < 1:
            raise SpecValidationError("rule.ratio: must be in (0, 1)")
        return (lambda j: ratio ** j), {"ratio": ratio}
    if kind in ("power", "phase_power"):
        p = float(rule.get("p", 1.0))
        if kind == "power":
            a = complex(rule.get("a", 1.0))
            return (lambda j: a / j ** p), {"a": a, "p": p}
        try:
            q = float(rule["q"])
        except KeyError:
            raise SpecValidationError("rule.q: required for phase_power rule")
        if q == 0:
            raise SpecValidationError("rule.q: must be nonzero")
        return (lambda j: cmath.exp(1j * math.pi * j / q) / j ** p), {"q": q, "p": p}
    if kind == "explicit":
        vals = rule.get("values")
        if not isinstance(vals, list) or not vals:
            raise SpecValidationError("rule.values: non-empty list required")
        try:
            arr = np.asarray(vals, dtype=float)
            entries = arr[:, 0] + 1j * arr[:, 1]
        except (TypeError, ValueError, IndexError):
            raise SpecValidationError("rule.values: expected [re, im] pairs")
        return (lambda j: complex(entries[j - 1]) if j <= entries.size else 0.0), \
            {"values": entries}
    raise SpecValidationError(f"rule.type: unsupported rule {kind!r}")


def _tail_from_json(decay: dict, rule_params: dict, trace_class: bool
                    ) -> Callable[[int], float]:
    tail = decay.get("tail")
    if tail == "geometric":
        r = abs(rule_params.get("ratio", 0.0))
        if not 0 < r < 1:
            raise SpecValidationError("decay.tail: geometric tail needs a geometric rule")
        if trace_class:
            return lambda n: r ** (n + 1) / (1.0 - r)
        return lambda n: r ** (n + 1)
    if tail == "power":
        p = float(rule_params.get("p", 0.0))
        a = abs(complex(rule_params.get("a", 1.0)))
        if trace_class:
            if p <= 1:
                raise SpecValidationError("decay.tail: power tail needs p > 1")
            return lambda n: a * n ** (1.0 - p) / (p - 1.0)
        if p <= 0:
            raise SpecValidationError("decay.tail: power tail needs p > 0")
        return lambda n: a / (n + 1) ** p
    if tail == "zero":
        return lambda n: 0.0
    raise SpecValidationError(f"decay.tail: unsupported tail {tail!r}")


def operator_from_json(data: dict) -> OperatorSpec:
    """Build an OperatorSpec from its JSON description.

    Diagonal example::

        {"kind": "diagonal",
         "rule": {"type": "geometric", "ratio": 0.5},
         "decay": {"type": "trace_class", "tail": "geometric"},
         "norm_bound": 1.0}

    Finite example::

        {"kind": "finite", "matrix": [[[1,0],[0,0]],[[0,0],[2,0]]]}
    """
    if not isinstance(data, dict):
        raise SpecValidationError("operator: expected a JSON object")
    kind = data.get("kind")
    if kind == "finite":
        if "matrix" not in data:
            raise SpecValidationError("matrix: required for finite operator")
        m = matrix_from_json(data["matrix"])
        return OperatorSpec.finite(m, data.get("norm_bound"))
    if kind != "diagonal":
        raise SpecValidationError(f"kind: unsupported operator kind {kind!r}")

    if "rule" not in data:
        raise SpecValidationError("rule: required for diagonal operator")
    rule_fn, params = _rule_from_json(data["rule"])

    decay_data = data.get("decay")
    if not isinstance(decay_data, dict) or "type" not in decay_data:
        raise SpecValidationError("decay.type: required")
    dkind = decay_data["type"]
    if dkind == BOUNDED:
        decay = Decay.bounded()
    elif dkind in (TRACE_CLASS, NULL_SEQUENCE):
        if data["rule"]["type"] == "explicit" and decay_data.get("tail", "zero") == "zero":
            decay_data = dict(decay_data, tail="zero")
        tail = _tail_from_json(decay_data, params, trace_class=(dkind == TRACE_CLASS))
        decay = Decay(dkind, tail)
    else:
        raise SpecValidationError(f"decay.type: unsupported decay {dkind!r}")

    if "norm_bound" not in data:
        if data["rule"]["type"] == "explicit":
            norm_bound = float(np.abs(params["values"]).max())
        elif data["rule"]["type"] == "geometric":
            norm_bound = abs(params["ratio"])
        else:
            norm_bound = abs(complex(params.get("a", 1.0)))
    else:
        norm_bound = float(data["norm_bound"])
    return OperatorSpec.diagonal(rule_fn, decay, norm_bound)
