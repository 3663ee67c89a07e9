"""
Multidimensional state-space realizations of a polynomial system.

Reading the equations as difference equations r(z)w = 0 on an n-index
grid, every trajectory w obeys

    x[k + e_i] = A_i x[k],    w[k] = c x[k]

with commuting A_1..A_n. The column echelon basis H of the affine null space
gives this realization directly: the state is w sampled at the pivot
monomials, A_i holds the rows of H for pivot * z_i and c is the top row.

Roots at infinity add a singular part; descriptor_split pairs the regular
A_i with the nilpotent-shift matrices E_i of the singular block.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .config import SolveConfig
from .linalg import (
    DEFAULT_BASIS_TOL,
    EchelonBasis,
    NullspaceBasis,
    column_echelon,
    independent_rows,
    pinv_solve,
)
from .macaulay import MacaulayMatrix, build_macaulay
from .poly import Monomial, PolySystem, enumerate_monomials, monomial_index
from .solver import GapReport, SingularPart, SolveResult, solve_detailed
from .types import (
    DegenerateBasisError,
    DimensionMismatchError,
    GridTooSmallError,
    InputError,
    RealizationError,
)

logger = logging.getLogger(__name__)

X0_POWER_SUM = "power-sum"
X0_USER = "user"
DEFAULT_NILPOTENCY_TOL = 1e-6


@dataclass(frozen=True)
class Realization:
    """
    Commuting shift matrices with output row and initial state.

    Attributes:
        A: One m x m matrix per variable
        c: Output row, w[k] = c @ x[k]
        state_monomials: Monomials whose samples form the state
        x0: Initial state x[0, ..., 0]
        x0_convention: "power-sum" for the default trajectory, "user" when given
    """
    A: tuple[np.ndarray, ...]
    c: np.ndarray
    state_monomials: tuple[Monomial, ...]
    x0: np.ndarray
    x0_convention: str = X0_POWER_SUM

    def __post_init__(self):
        m = len(self.c)
        for i, Ai in enumerate(self.A):
            if Ai.shape != (m, m):
                raise DimensionMismatchError(f"A_{i + 1} has shape {Ai.shape}, expected ({m}, {m})")
        if len(self.x0) != m:
            raise DimensionMismatchError(f"x0 has length {len(self.x0)}, expected {m}")

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def order(self) -> int:
        return len(self.c)

    def commutation_residual(self) -> float:
        """Largest ||A_i A_j - A_j A_i|| / (||A_i|| ||A_j||) over pairs (infinity norm)."""
        worst = 0.0
        for Ai, Aj in combinations(self.A, 2):
            scale = sla.norm(Ai, np.inf) * sla.norm(Aj, np.inf)
            diff = sla.norm(Ai @ Aj - Aj @ Ai, np.inf)
            worst = max(worst, diff / scale if scale > 0 else diff)
        return float(worst)

    def with_initial_state(self, x0: Sequence[complex]) -> Realization:
        x0 = np.asarray(x0)
        if x0.shape != (self.order,):
            raise DimensionMismatchError(f"x0 must have length {self.order}, got shape {x0.shape}")
        return Realization(self.A, self.c, self.state_monomials, x0, X0_USER)


@dataclass(frozen=True)
class DescriptorRealization:
    """
    Regular/singular block split of the shift matrices.

    A0 = blockdiag(I, E0) shifts in the homogenization index and each
    A[i] = blockdiag(R_i, E_i). When the singular block could not be
    extracted, available is False and only m_R, m_S are set.
    """
    m_R: int
    m_S: int
    A0: Optional[np.ndarray] = None
    A: tuple[np.ndarray, ...] = ()
    down_shift: Optional[int] = None
    available: bool = True

    @property
    def E0(self) -> Optional[np.ndarray]:
        if self.A0 is None:
            return None
        return self.A0[self.m_R :, self.m_R :]

    def nilpotency_residual(self) -> float:
        """max |E0^m_S|; zero for an empty singular block."""
        if self.m_S == 0 or self.A0 is None:
            return 0.0
        return float(np.max(np.abs(np.linalg.matrix_power(self.E0, self.m_S))))


@dataclass(frozen=True)
class TrajectoryGrid:
    """Samples w[k_1, ..., k_n] on a box 0 <= k_i < K_i."""
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim < 1 or any(k < 1 for k in self.values.shape):
            raise InputError(f"Trajectory extents must be >= 1, got {self.values.shape}")

    @property
    def extents(self) -> tuple[int, ...]:
        return self.values.shape

    def to_csv(self) -> str:
        """
        One CSV line per index prefix (k_1..k_{n-1}) with the samples along
        the last axis; one line in total for n = 1.
        """
        values = self.values
        if np.iscomplexobj(values) and np.max(np.abs(values.imag), initial=0.0) == 0.0:
            values = values.real
        lines = []
        for prefix in np.ndindex(*self.extents[:-1]):
            row = values[prefix]
            lines.append(",".join(_format_sample(v) for v in row))
        return "\n".join(lines) + "\n"


def _format_sample(value) -> str:
    if np.iscomplexobj(value):
        return f"{complex(value).real:.12g}{complex(value).imag:+.12g}j"
    return f"{float(value):.12g}"


@dataclass(frozen=True)
class RealizeResult:
    """Realization pipeline output and its consistency checks."""
    solve: SolveResult
    echelon: EchelonBasis
    degree: int
    realization: Realization
    descriptor: Optional[DescriptorRealization]
    commutation_residual: float
    cayley_hamilton_residual: float
    annihilation_residual: Optional[float]


def _matrix_monomial(A: Sequence[np.ndarray], exponents: Sequence[int]) -> np.ndarray:
    result = np.eye(A[0].shape[0], dtype=np.result_type(*A))
    for Ai, e in zip(A, exponents):
        if e:
            result = result @ np.linalg.matrix_power(Ai, e)
    return result


def default_initial_state(
    A: Sequence[np.ndarray], c: np.ndarray, d: int | None = None
) -> np.ndarray:
    """
    Initial state of the power-sum trajectory w[alpha] = trace(A^alpha).

    That trajectory is the sum of all root contributions, each counted with
    its multiplicity. x0 solves O_d x0 = w in the least-squares sense.

    Args:
        d: Observability degree (None: state dimension - 1)
    """
    m = len(c)
    n = len(A)
    d = m - 1 if d is None else d
    monomials = enumerate_monomials(n, d)
    target = np.array([np.trace(_matrix_monomial(A, mono.exponents)) for mono in monomials])
    O = _observability_rows(A, c, n, d)
    x0, *_ = sla.lstsq(O, target)
    if np.isrealobj(O) and np.max(np.abs(np.imag(target)), initial=0.0) == 0.0:
        x0 = np.real(x0)
    return x0


def _state_selections(
    pivots: Sequence[Monomial], n: int, d: int
) -> list[list[int]]:
    for mono in pivots:
        if mono.total_degree > d - 1:
            raise RealizationError(
                f"State monomial {mono.label()} has degree {mono.total_degree}; "
                f"shifts would leave the degree-{d} basis"
            )
    index = monomial_index(n, d)
    return [
        [index[mono * Monomial.variable(n, i)] for mono in pivots]
        for i in range(n)
    ]


def _check_rows(rows: int, n: int, d: int) -> None:
    expected = comb(n + d, n)
    if rows != expected:
        raise DimensionMismatchError(
            f"Basis has {rows} rows, expected {expected} for n={n}, d={d}"
        )


def canonical_realization(
    H: EchelonBasis, d: int, n: int, x0: Sequence[complex] | None = None
) -> Realization:
    """
    Realization whose state is w sampled at the pivot monomials.

    Since H is the identity on its pivot rows, A_i = (S_0 H)^+ S_i H reduces
    to the rows of H at pivot * z_i; c is the top row of H.

    Raises:
        RealizationError: A pivot monomial has degree d
    """
    _check_rows(H.H.shape[0], n, d)
    monomials = enumerate_monomials(n, d)
    pivots = tuple(monomials[r] for r in H.pivot_rows)
    A = tuple(H.H[rows] for rows in _state_selections(pivots, n, d))
    c = H.H[0]
    return _with_state(A, c, pivots, x0)


def realization_from_basis(
    Z: NullspaceBasis | EchelonBasis | np.ndarray,
    d: int,
    n: int,
    *,
    pivot_tol: float = DEFAULT_BASIS_TOL,
    x0: Sequence[complex] | None = None,
) -> Realization:
    """
    Realization A_i = (S_0 Z)^+ S_i Z from any basis of the affine null space.

    S_0 keeps the independent rows of Z, so the result is similar to the
    canonical realization: Z = H W gives A_i = W^-1 A_i^H W and c = c^H W.
    """
    if isinstance(Z, NullspaceBasis):
        Zm = Z.Z
    elif isinstance(Z, EchelonBasis):
        Zm = Z.H
    else:
        Zm = np.asarray(Z)
    _check_rows(Zm.shape[0], n, d)
    pivot_rows = independent_rows(Zm, pivot_tol)
    if len(pivot_rows) < Zm.shape[1]:
        raise DegenerateBasisError(
            f"Basis has {Zm.shape[1]} columns but only {len(pivot_rows)} independent rows"
        )
    monomials = enumerate_monomials(n, d)
    pivots = tuple(monomials[r] for r in pivot_rows)
    S0Z = Zm[list(pivot_rows)]
    A = tuple(pinv_solve(S0Z, Zm[rows]) for rows in _state_selections(pivots, n, d))
    return _with_state(A, Zm[0], pivots, x0)


def _with_state(
    A: tuple[np.ndarray, ...],
    c: np.ndarray,
    pivots: tuple[Monomial, ...],
    x0: Sequence[complex] | None,
) -> Realization:
    if x0 is not None:
        x0 = np.asarray(x0)
        if x0.shape != (len(c),):
            raise DimensionMismatchError(f"x0 must have length {len(c)}, got shape {x0.shape}")
        return Realization(A, c, pivots, x0, X0_USER)
    top = max(m.total_degree for m in pivots)
    return Realization(A, c, pivots, default_initial_state(A, c, top), X0_POWER_SUM)


def _observability_rows(A: Sequence[np.ndarray], c: np.ndarray, n: int, d: int) -> np.ndarray:
    monomials = enumerate_monomials(n, d)
    index = monomial_index(n, d)
    O = np.empty((len(monomials), len(c)), dtype=np.result_type(c, *A))
    O[0] = c
    for k, mono in enumerate(monomials[1:], start=1):
        i = next(ax for ax, e in enumerate(mono.exponents) if e > 0)
        parent = list(mono.exponents)
        parent[i] -= 1
        O[k] = O[index[Monomial(tuple(parent))]] @ A[i]
    return O


def observability_matrix(R: Realization, d: int) -> np.ndarray:
    """Rows c A_1^a_1 ... A_n^a_n for every monomial of degree <= d, in order."""
    if d < 0:
        raise InputError(f"Observability degree must be >= 0, got {d}")
    return _observability_rows(R.A, R.c, R.n, d)


def cayley_hamilton_residual(R: Realization, system: PolySystem) -> float:
    """max_i of max |f_i(A_1, ..., A_n)|, constants read as multiples of I."""
    if system.n != R.n:
        raise DimensionMismatchError(f"System has {system.n} variables, realization {R.n}")
    worst = 0.0
    for poly in system.polys:
        total = np.zeros((R.order, R.order), dtype=np.result_type(*R.A))
        for mono, coeff in poly.terms.items():
            total = total + coeff * _matrix_monomial(R.A, mono.exponents)
        worst = max(worst, float(np.max(np.abs(total))))
    return worst


def verify_observability_annihilation(M: MacaulayMatrix, R: Realization) -> float:
    """||M_d O_d|| / (||M_d|| ||O_d||) in the infinity norm."""
    if M.homogeneous or M.n != R.n:
        raise DimensionMismatchError("Macaulay matrix and realization do not share variables")
    O = observability_matrix(R, M.degree)
    num = sla.norm(M.data @ O, np.inf)
    den = sla.norm(M.data, np.inf) * sla.norm(O, np.inf)
    return float(num / den) if den > 0 else float(num)


def descriptor_split(
    gap: GapReport,
    regular: Realization,
    singular: SingularPart | None,
    *,
    strict: bool = False,
    nilpotency_tol: float = DEFAULT_NILPOTENCY_TOL,
) -> DescriptorRealization:
    """
    Combine the regular realization with the singular shift matrices.

    A split whose E0 leaves max|E0^m_S| above nilpotency_tol is returned with
    a warning.

    Raises:
        RealizationError: strict is set and the singular block is unavailable
            or E0 is not nilpotent
    """
    m_R, m_S = regular.order, gap.m_S
    if m_S == 0:
        return DescriptorRealization(m_R, 0, np.eye(m_R), regular.A)
    if singular is None or not singular.extracted:
        if strict:
            raise RealizationError(
                f"Descriptor split unavailable: m_R={m_R}, m_S={m_S}, singular block not extracted"
            )
        logger.warning(f"Descriptor split unavailable (m_R={m_R}, m_S={m_S})")
        return DescriptorRealization(m_R, m_S, available=False)

    E = singular.E
    A0 = sla.block_diag(np.eye(m_R), E[0])
    A = tuple(sla.block_diag(Ri, Ei) for Ri, Ei in zip(regular.A, E[1:]))
    split = DescriptorRealization(m_R, m_S, A0, A, singular.down_shift)
    residual = split.nilpotency_residual()
    if residual > nilpotency_tol:
        message = f"E0 is not nilpotent: max|E0^{m_S}| = {residual:.2e} > {nilpotency_tol:g}"
        if strict:
            raise RealizationError(message)
        logger.warning(message)
    else:
        logger.info(f"Descriptor split m_R={m_R}, m_S={m_S}, E0 nilpotency {residual:.2e}")
    return split


def simulate(
    R: Realization, extents: Sequence[int], x0: Sequence[complex] | None = None
) -> TrajectoryGrid:
    """
    Run x[k + e_i] = A_i x[k] over the box 0 <= k < extents.

    Each sample takes one matrix-vector product from its neighbour along the
    first axis with k_i > 0.
    """
    extents = tuple(int(k) for k in extents)
    if len(extents) != R.n:
        raise DimensionMismatchError(f"Need {R.n} extents, got {len(extents)}")
    if any(k < 1 for k in extents):
        raise InputError(f"Extents must be >= 1, got {extents}")
    start = R.x0 if x0 is None else np.asarray(x0)
    if start.shape != (R.order,):
        raise DimensionMismatchError(f"x0 must have length {R.order}, got shape {start.shape}")

    states = np.empty(extents + (R.order,), dtype=np.result_type(start, R.c, *R.A))
    for k in np.ndindex(*extents):
        if not any(k):
            states[k] = start
            continue
        i = next(ax for ax, v in enumerate(k) if v > 0)
        prev = list(k)
        prev[i] -= 1
        states[k] = R.A[i] @ states[tuple(prev)]
    return TrajectoryGrid(states @ R.c)


def verify_trajectory(system: PolySystem, grid: TrajectoryGrid) -> float:
    """
    Largest residual of the difference equations over the grid.

    Equation f_i is applied at every offset k with k_j + d_i < K_j, as
    sum_alpha coeff_alpha * w[k + alpha].

    Raises:
        GridTooSmallError: Some extent does not exceed an equation degree
    """
    values = grid.values
    if system.homogeneous or system.n != values.ndim:
        raise DimensionMismatchError(
            f"Grid has {values.ndim} axes, system has {system.affine_n} variables"
        )
    worst = 0.0
    for poly, di in zip(system.polys, system.degrees):
        if any(k <= di for k in grid.extents):
            raise GridTooSmallError(
                f"Grid extents {grid.extents} must exceed the equation degree {di}"
            )
        span = [k - di for k in grid.extents]
        acc = np.zeros(span, dtype=np.result_type(values, float))
        for mono, coeff in poly.terms.items():
            window = tuple(slice(a, a + s) for a, s in zip(mono.exponents, span))
            acc = acc + coeff * values[window]
        worst = max(worst, float(np.max(np.abs(acc))))
    return worst


def realize(
    system: PolySystem,
    config: SolveConfig | None = None,
    x0: Sequence[complex] | None = None,
) -> RealizeResult:
    """
    Solve, then build the canonical realization of the affine part and the
    descriptor split when roots at infinity exist.

    Raises:
        RealizationError: No affine roots, or a pivot leaves the basis
    """
    config = config or SolveConfig()
    result = solve_detailed(system, config)
    gap = result.gap
    if gap.m_R == 0:
        raise RealizationError("System has no affine roots to realize")

    H = column_echelon(result.Z_R, config.basis_tol)
    R = canonical_realization(H, gap.d_star, system.n, x0=x0)
    logger.info(
        f"Canonical realization of order {R.order} with states "
        f"{[m.label(system.variable_names) for m in R.state_monomials]}"
    )

    descriptor = None
    if gap.m_S > 0:
        descriptor = descriptor_split(gap, R, result.singular, nilpotency_tol=config.residual_tol)

    annihilation = None
    if gap.d_star >= max(system.degrees):
        annihilation = verify_observability_annihilation(build_macaulay(system, gap.d_star), R)

    return RealizeResult(
        solve=result,
        echelon=H,
        degree=gap.d_star,
        realization=R,
        descriptor=descriptor,
        commutation_residual=R.commutation_residual(),
        cayley_hamilton_residual=cayley_hamilton_residual(R, system),
        annihilation_residual=annihilation,
    )
