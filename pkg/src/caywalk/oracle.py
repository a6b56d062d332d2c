"""Matrix-exponential oracle for the continuous walk.

Evolves exp(tA) through one Hermitian eigendecomposition of iA and answers
fidelity, permutation, and scan queries directly from the matrix, sharing no
character theory with the criterion path. A Hermitian mode (exp(itA) for
symmetric A) covers undirected graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import (
    RECONSTRUCTION_TOL,
    SCAN_REFINE_TOL,
    SCAN_STEPS,
    SKEW_TOL,
    UNITARITY_TOL,
)
from .errors import InvalidParameterError, NumericalFailureError


@dataclass(eq=False)
class WalkOperator:
    """Eigendecomposition of a walk generator, ready to exponentiate.

    For a skew-symmetric A the stored data diagonalizes iA and evolve returns
    exp(tA); in hermitian mode A itself is diagonalized and evolve returns
    exp(itA).
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    hermitian: bool = False

    @property
    def order(self) -> int:
        return self.matrix.shape[0]


def build_operator(a: np.ndarray, skew_tol: float = SKEW_TOL) -> WalkOperator:
    """Diagonalize iA for skew-symmetric real A."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError("adjacency matrix must be square")
    if np.max(np.abs(a + a.T)) > skew_tol:
        raise InvalidParameterError("matrix is not skew-symmetric")
    herm = 1j * a
    eigenvalues, vectors = np.linalg.eigh(herm)
    recon = (vectors * eigenvalues) @ vectors.conj().T
    if np.max(np.abs(recon - herm)) > RECONSTRUCTION_TOL:
        raise NumericalFailureError("eigendecomposition failed to reconstruct iA")
    return WalkOperator(matrix=a, eigenvalues=eigenvalues, vectors=vectors,
                        hermitian=False)


def build_hermitian_operator(a: np.ndarray, sym_tol: float = SKEW_TOL) -> WalkOperator:
    """Diagonalize a real symmetric A for the undirected walk exp(itA)."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError("adjacency matrix must be square")
    if np.max(np.abs(a - a.T)) > sym_tol:
        raise InvalidParameterError("matrix is not symmetric")
    eigenvalues, vectors = np.linalg.eigh(a)
    recon = (vectors * eigenvalues) @ vectors.conj().T
    if np.max(np.abs(recon - a)) > RECONSTRUCTION_TOL:
        raise NumericalFailureError("eigendecomposition failed to reconstruct A")
    return WalkOperator(matrix=a, eigenvalues=eigenvalues, vectors=vectors,
                        hermitian=True)


def _phases(op: WalkOperator, t: float) -> np.ndarray:
    sign = 1j if op.hermitian else -1j
    return np.exp(sign * op.eigenvalues * t)


def evolve(op: WalkOperator, t: float, check: bool = True) -> np.ndarray:
    """Full transition matrix at time t."""
    u = (op.vectors * _phases(op, t)) @ op.vectors.conj().T
    if check:
        n = op.order
        defect = np.max(np.abs(u @ u.conj().T - np.eye(n)))
        if defect > UNITARITY_TOL * max(1.0, math.sqrt(n)):
            raise NumericalFailureError(f"evolution is not unitary (defect {defect:.2e})")
        if not op.hermitian and np.max(np.abs(u.imag)) > UNITARITY_TOL * max(1.0, math.sqrt(n)):
            raise NumericalFailureError("exp(tA) has an imaginary part")
    return u


def evolve_column(op: WalkOperator, t: float, a: int) -> np.ndarray:
    """Column a of the transition matrix (the state started at vertex a)."""
    weights = op.vectors.conj()[a, :]
    return op.vectors @ (_phases(op, t) * weights)


def fidelity(op: WalkOperator, t: float, a: int, b: int) -> tuple[float, complex]:
    """(|U(t)[b,a]|, U(t)[b,a]): transfer magnitude and its phase-bearing entry."""
    col = evolve_column(op, t, a)
    entry = complex(col[b])
    return abs(entry), entry


@dataclass(frozen=True)
class PermutationReport:
    """Outcome of testing whether U(t) is a signed-free permutation matrix."""

    ok: bool
    permutation: tuple[int, ...] | None
    max_deviation: float
    fixed_point_free: bool
    commutes_with_generator: bool
    order: int | None


def permutation_check(op: WalkOperator, t: float, tol: float = 1e-8) -> PermutationReport:
    """Test U(t) against 'permutation matrix with +1 entries'."""
    u = evolve(op, t)
    n = op.order
    perm = np.argmax(np.abs(u), axis=0)
    deviation = 0.0
    for a in range(n):
        col = u[:, a].copy()
        target = perm[a]
        deviation = max(deviation, abs(col[target] - 1.0))
        col[target] = 0.0
        deviation = max(deviation, float(np.max(np.abs(col))))
    if deviation > tol or len(set(int(p) for p in perm)) != n:
        return PermutationReport(ok=False, permutation=None, max_deviation=float(deviation),
                                 fixed_point_free=False, commutes_with_generator=False,
                                 order=None)
    perm_t = tuple(int(p) for p in perm)
    p_mat = np.zeros((n, n))
    p_mat[perm, np.arange(n)] = 1.0
    commutes = bool(np.max(np.abs(p_mat @ op.matrix - op.matrix @ p_mat)) < tol * max(1.0, n))
    fixed_free = all(perm_t[a] != a for a in range(n))
    order = _permutation_order(perm_t)
    return PermutationReport(ok=True, permutation=perm_t, max_deviation=float(deviation),
                             fixed_point_free=fixed_free, commutes_with_generator=commutes,
                             order=order)


def _permutation_order(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        order = math.lcm(order, length)
    return order


@dataclass(frozen=True)
class ScanHit:
    time: float
    target: int
    fidelity: float


def _best_offdiagonal(op: WalkOperator, t: float, a: int) -> tuple[int, float]:
    col = np.abs(evolve_column(op, t, a))
    col[a] = -1.0
    b = int(np.argmax(col))
    return b, float(col[b])


def scan_pst(op: WalkOperator, a: int, t_max: float | None = None,
             steps: int = SCAN_STEPS, threshold: float = 0.999) -> list[ScanHit]:
    """Grid scan of max off-diagonal fidelity from vertex a, maxima refined.

    Local maxima above the threshold are polished by golden-section search on
    the continuous fidelity curve; nearby duplicates collapse to the best one.
    """
    if t_max is None:
        t_max = 4 * math.pi
    grid = np.linspace(0.0, t_max, steps + 1)
    values = np.empty(steps + 1)
    targets = np.empty(steps + 1, dtype=np.int64)
    for i, t in enumerate(grid):
        b, f = _best_offdiagonal(op, float(t), a)
        values[i] = f
        targets[i] = b

    hits: list[ScanHit] = []
    for i in range(1, steps):
        if values[i] < threshold:
            continue
        if values[i] >= values[i - 1] and values[i] >= values[i + 1]:
            lo, hi = float(grid[i - 1]), float(grid[i + 1])
            t_ref = _golden_max(lambda t: _best_offdiagonal(op, t, a)[1], lo, hi)
            b, f = _best_offdiagonal(op, t_ref, a)
            hits.append(ScanHit(time=t_ref, target=b, fidelity=f))

    hits.sort(key=lambda h: h.time)
    merged: list[ScanHit] = []
    for h in hits:
        if merged and abs(merged[-1].time - h.time) < 1e-6:
            if h.fidelity > merged[-1].fidelity:
                merged[-1] = h
        else:
            merged.append(h)
    return merged


def _golden_max(fn, lo: float, hi: float, tol: float = SCAN_REFINE_TOL) -> float:
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - phi * (hi - lo)
    x2 = lo + phi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + phi * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - phi * (hi - lo)
            f1 = fn(x1)
    return 0.5 * (lo + hi)


def fidelity_series_csv(op: WalkOperator, a: int, t_max: float,
                        steps: int = SCAN_STEPS) -> str:
    lines = ["t,fidelity,target"]
    for t in np.linspace(0.0, t_max, steps + 1):
        b, f = _best_offdiagonal(op, float(t), a)
        lines.append(f"{float(t):.12g},{f:.12g},{b}")
    return "\n".join(lines) + "\n"
