"""
Dense numerical kernels with explicit rank tolerances.

All rank decisions count singular values strictly above a threshold. The
threshold is either absolute (``tol``), relative to the largest singular
value (``rtol``) or, by default, eps * max(rows, cols) * sigma_max.

Rank decisions on row blocks of a null-space basis use ``basis_rank``: the
rows of degree delta scale like |z|^delta, so a block is compared against its
own sigma_max and against the roundoff floor of the basis, never against a
fixed absolute threshold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .types import DegenerateBasisError, DimensionMismatchError, InputError, NumericalError

logger = logging.getLogger(__name__)

DEFAULT_BASIS_TOL = 1e-8

# Entries of a computed basis below NOISE_MARGIN * eps * dim * cond are roundoff.
NOISE_MARGIN = 1e3
_FLOOR_CAP = float(np.sqrt(np.finfo(float).eps))


@dataclass(frozen=True)
class NullspaceBasis:
    """
    Orthonormal basis Z of a numerical null space.

    Attributes:
        Z: Matrix with orthonormal columns, one per null vector
        tol_used: Absolute singular value threshold of the rank decision
        singular_values: Full singular spectrum of the source matrix
        degree_block_bounds: Row ranges of Z holding each total degree
    """
    Z: np.ndarray
    tol_used: float
    singular_values: np.ndarray
    degree_block_bounds: tuple[tuple[int, int], ...] = ()

    @property
    def nullity(self) -> int:
        return self.Z.shape[1]

    @property
    def rows(self) -> int:
        return self.Z.shape[0]

    @property
    def noise_floor(self) -> float:
        """
        Magnitude below which basis entries are roundoff.

        Scales with the condition number of the nonzero part of the source
        spectrum, capped at sqrt(eps).
        """
        s = self.singular_values
        rank = self.rows - self.nullity
        cond = 1.0
        if 0 < rank <= s.size and s[rank - 1] > 0:
            cond = float(s[0] / s[rank - 1])
        floor = NOISE_MARGIN * np.finfo(float).eps * max(self.rows, s.size, 1) * cond
        return float(min(floor, _FLOOR_CAP))

    def rows_through_degree(self, delta: int) -> int:
        """Number of leading rows with total degree <= delta."""
        if not self.degree_block_bounds:
            raise InputError("Basis carries no degree bookkeeping")
        return self.degree_block_bounds[delta][1]


@dataclass(frozen=True)
class EchelonBasis:
    """
    Column reduced echelon form H of a basis.

    H[pivot_rows[j]] is the j-th unit row; pivot rows are the linearly
    independent rows of the basis found scanning from the top.
    """
    H: np.ndarray
    pivot_rows: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)


def rank_threshold(
    s: np.ndarray,
    shape: tuple[int, int],
    tol: float | None = None,
    rtol: float | None = None,
) -> float:
    """Absolute threshold used to count singular values s."""
    sigma_max = float(s[0]) if s.size else 0.0
    if tol is not None:
        return float(tol)
    if rtol is not None:
        return float(rtol) * sigma_max
    return float(np.finfo(float).eps * max(shape) * sigma_max)


def numerical_rank(A: np.ndarray, tol: float | None = None, *, rtol: float | None = None) -> int:
    """Number of singular values of A above the rank threshold."""
    A = np.atleast_2d(np.asarray(A))
    if A.size == 0:
        raise InputError("numerical_rank needs a nonempty matrix")
    s = sla.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_threshold(s, A.shape, tol, rtol)))


def roundoff_floor(A: np.ndarray) -> float:
    """Roundoff level of a matrix with entries of the size of max |A|."""
    A = np.asarray(A)
    scale = float(np.max(np.abs(A), initial=0.0))
    return NOISE_MARGIN * np.finfo(float).eps * max(A.shape, default=1) * scale


def basis_rank(A: np.ndarray, rtol: float = DEFAULT_BASIS_TOL, floor: float | None = None) -> int:
    """
    Rank of a row block of a null-space basis.

    Singular values count when they exceed both rtol * sigma_max of the block
    and the absolute floor (default: the roundoff floor of A itself).
    """
    A = np.atleast_2d(np.asarray(A))
    if A.size == 0:
        return 0
    s = sla.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    if floor is None:
        floor = roundoff_floor(A)
    return int(np.sum(s > max(float(rtol) * float(s[0]), float(floor))))


def nullspace(
    A: np.ndarray,
    tol: float | None = None,
    *,
    rtol: float | None = None,
    degree_block_bounds: tuple[tuple[int, int], ...] = (),
) -> NullspaceBasis:
    """
    Right singular vectors of A whose singular values fall at or below the
    threshold (columns beyond the row count have singular value zero).
    """
    A = np.atleast_2d(np.asarray(A))
    if A.size == 0:
        raise InputError("nullspace needs a nonempty matrix")
    try:
        _, s, Vh = sla.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"SVD did not converge: {e}") from e
    threshold = rank_threshold(s, A.shape, tol, rtol)
    rank = int(np.sum(s > threshold)) if s.size and s[0] > 0 else 0
    Z = Vh[rank:].conj().T
    if s.size:
        logger.debug(
            f"SVD of {A.shape[0]}x{A.shape[1]}: sigma_max={s[0]:.3e}, "
            f"sigma_min={s[-1]:.3e}, threshold={threshold:.3e}, rank={rank}"
        )
    return NullspaceBasis(Z, threshold, s, degree_block_bounds)


def _basis_matrix(Z: NullspaceBasis | np.ndarray) -> np.ndarray:
    return Z.Z if isinstance(Z, NullspaceBasis) else np.asarray(Z)


def independent_rows(
    Z: NullspaceBasis | np.ndarray,
    pivot_tol: float = DEFAULT_BASIS_TOL,
    stop: int | None = None,
) -> tuple[int, ...]:
    """
    Indices of the linearly independent rows of Z, scanning top-down.

    Row r is independent when adding it raises the basis rank of the rows
    accepted so far, relative to pivot_tol. Rows at the roundoff floor are
    skipped. Scanning ends once rank(Z) rows are found or at row `stop`.
    """
    Zm = _basis_matrix(Z)
    floor = Z.noise_floor if isinstance(Z, NullspaceBasis) else roundoff_floor(Zm)
    target = Zm.shape[1]
    pivots: list[int] = []
    for r in range(Zm.shape[0] if stop is None else min(stop, Zm.shape[0])):
        if len(pivots) == target:
            break
        if np.max(np.abs(Zm[r]), initial=0.0) <= floor:
            continue
        trial = Zm[pivots + [r]]
        if basis_rank(trial, pivot_tol, floor) > len(pivots):
            pivots.append(r)
    return tuple(pivots)


def column_echelon(
    Z: NullspaceBasis | np.ndarray, pivot_tol: float = DEFAULT_BASIS_TOL
) -> EchelonBasis:
    """
    Column reduced echelon form H = Z (Z*)^+ with Z* the independent rows.

    Raises:
        DegenerateBasisError: Z has fewer independent rows than columns
    """
    Zm = _basis_matrix(Z)
    if Zm.size == 0:
        raise InputError("column_echelon needs a nonempty basis")
    pivots = independent_rows(Zm, pivot_tol)
    if len(pivots) < Zm.shape[1]:
        raise DegenerateBasisError(
            f"Basis has {Zm.shape[1]} columns but only {len(pivots)} independent rows"
        )
    H = Zm @ sla.pinv(Zm[list(pivots)])
    H[list(pivots)] = np.eye(len(pivots))
    return EchelonBasis(H, pivots)


def column_compress(
    W: np.ndarray, k: int, rtol: float | None = None, *, floor: float = 0.0
) -> tuple[np.ndarray, int]:
    """
    Rotate the columns of W so its top k rows live in the first m_R columns.

    m_R counts the singular values of W[:k] above both rtol * sigma_max
    (default eps * max(shape) * sigma_max) and the absolute floor.

    Returns:
        (W @ Q, m_R) with Q the right singular vectors of W[:k]
    """
    W = np.asarray(W)
    if not 0 < k <= W.shape[0]:
        raise InputError(f"Compression row count {k} outside 1..{W.shape[0]}")
    top = W[:k]
    _, s, Vh = sla.svd(top, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        m_R = 0
    else:
        threshold = max(rank_threshold(s, top.shape, rtol=rtol), floor)
        m_R = int(np.sum(s > threshold))
    Q = Vh.conj().T
    return W @ Q, m_R


def pinv_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution A^+ B."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(
            f"pinv_solve: {A.shape[0]} rows in A but {B.shape[0]} in B"
        )
    return sla.pinv(A) @ B


def eig(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition sorted by real part, then imaginary part.

    Raises:
        NumericalError: LAPACK did not converge
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"eig needs a square matrix, got shape {A.shape}")
    try:
        values, vectors = sla.eig(A)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Eigenvalue iteration failed on a {A.shape[0]}x{A.shape[0]} matrix: {e}") from e
    order = np.lexsort((values.imag, values.real))
    return values[order], vectors[:, order]
