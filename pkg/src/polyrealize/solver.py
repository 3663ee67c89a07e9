"""
Root finding on the null space of the Macaulay matrix.

Core concepts:
- Shift selection: multiplying the monomials of degree <= d-1 by z_i maps
  rows of a Vandermonde basis onto other rows, so S_0 Z A_i = S_i Z and the
  eigenvalues of A_i are the i-th root coordinates
- Gap: the first degree block that adds no rank to the null-space basis;
  affine roots own the monomials below it, roots at infinity those above
- Column compression: rotates the basis so the affine part occupies its
  first m_R columns and the singular part the remaining m_S

Example:
    from polyrealize.parser import parse_system
    from polyrealize.solver import solve

    system = parse_system("vars: z1 z2\\n4*z1^2 - 16*z1 + z2^2 - 2*z2 + 13\\n2*z1 + z2 - 7")
    roots = solve(system)
    for root in roots:
        print(root.affine_coords, root.multiplicity)
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from .config import SolveConfig
from .linalg import (
    DEFAULT_BASIS_TOL,
    NullspaceBasis,
    basis_rank,
    column_compress,
    eig,
    independent_rows,
    nullspace,
    pinv_solve,
)
from .macaulay import MacaulayMatrix, build_macaulay, default_degree, extend_macaulay
from .poly import (
    Monomial,
    Point,
    PolySystem,
    dual_vector,
    enumerate_monomials,
    evaluate,
    homogeneous_monomials,
    homogenize,
    monomial_index,
)
from .types import (
    DegenerateShiftError,
    DegreeError,
    DimensionMismatchError,
    InputError,
    NoStabilizationError,
    NumericalError,
)

logger = logging.getLogger(__name__)

AFFINE_UP = "affine-up"
HOMOGENEOUS = "homogeneous"

# Relative cluster radius when none is configured
DEFAULT_CLUSTER_SCALE = 1e-4


@dataclass(frozen=True)
class ShiftSelection:
    """
    A row shift on a monomial-indexed basis.

    For kind "affine-up" (variable i), rows_to[r] is the row of
    monomial(rows_from[r]) * z_i. For kind "homogeneous" (i/j) the rows index
    the exact-degree-d grid in z0..zn and the image multiplies by z_i / z_j.
    """
    rows_from: tuple[int, ...]
    rows_to: tuple[int, ...]
    kind: str
    i: int
    j: Optional[int] = None

    def __post_init__(self):
        if len(self.rows_from) != len(self.rows_to):
            raise DimensionMismatchError(
                f"Shift selection maps {len(self.rows_from)} rows onto {len(self.rows_to)}"
            )

    @property
    def label(self) -> str:
        if self.kind == AFFINE_UP:
            return f"{AFFINE_UP}({self.i})"
        return f"{self.i}/{self.j}"

    def source(self, Z: np.ndarray) -> np.ndarray:
        return Z[list(self.rows_from)]

    def target(self, Z: np.ndarray) -> np.ndarray:
        return Z[list(self.rows_to)]


@dataclass(frozen=True)
class GapReport:
    """
    Rank profile of a null-space basis over the degree blocks.

    Attributes:
        degree: Macaulay degree d
        block_ranks: Rank added by the rows of each degree 0..d
        m_R: Number of affine roots, with multiplicity
        m_S: Remaining null-space dimension, owned by roots at infinity
        d_star: Degree of the first empty block (None when no gap)
        stabilized: A gap exists below d
        nullity: Null-space dimension
    """
    degree: int
    block_ranks: tuple[int, ...]
    m_R: int
    m_S: int
    d_star: Optional[int]
    stabilized: bool
    nullity: int

    @property
    def independent_degrees(self) -> tuple[int, ...]:
        """Degrees whose block contributes at least one independent monomial."""
        return tuple(delta for delta, r in enumerate(self.block_ranks) if r > 0)


@dataclass(frozen=True)
class Root:
    """
    One solution, as a canonical homogeneous point (z0 first).

    Affine roots have z0 = 1; roots at infinity have z0 = 0.
    """
    point: Point
    multiplicity: int = 1
    residual: float = 0.0
    at_infinity: bool = False
    flagged: bool = False

    @property
    def affine_coords(self) -> Optional[tuple[complex, ...]]:
        """Coordinates (z1..zn), or None for a root at infinity."""
        if self.at_infinity:
            return None
        return self.point.dehomogenize().coords


@dataclass(frozen=True)
class SolveDiagnostics:
    degree_used: int
    nullity: int
    gap: GapReport
    degrees_tried: tuple[int, ...]
    tolerances: dict[str, Optional[float]]
    seed: int
    bezout: Optional[int] = None
    down_shift: Optional[int] = None
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class RootSet:
    """Roots plus the diagnostics of the solve that produced them."""
    roots: tuple[Root, ...] = ()
    diagnostics: Optional[SolveDiagnostics] = None

    def __iter__(self) -> Iterator[Root]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def affine(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if not r.at_infinity)

    @property
    def at_infinity(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if r.at_infinity)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)


@dataclass(frozen=True)
class SingularPart:
    """
    Roots at infinity extracted from the singular columns Z_S.

    E holds the shift matrices E_0..E_n of the singular block with the
    down-shift variable's entry equal to the identity. An empty E and
    down_shift None mean extraction failed and only m_S is known.
    """
    m_S: int
    down_shift: Optional[int] = None
    E: tuple[np.ndarray, ...] = ()
    roots: tuple[Root, ...] = ()

    @property
    def extracted(self) -> bool:
        return self.down_shift is not None


@dataclass(frozen=True)
class SolveResult:
    """Everything a solve computed, for callers that build on it."""
    roots: RootSet
    macaulay: MacaulayMatrix
    basis: NullspaceBasis
    gap: GapReport
    Z_R: np.ndarray
    Z_S: np.ndarray
    singular: Optional[SingularPart] = None


# Shift selections

def make_affine_selection(n: int, d: int, i: int) -> ShiftSelection:
    """
    Up shift in z_i (1-based) from the degree <= d-1 rows into degree <= d.
    """
    if not 1 <= i <= n:
        raise InputError(f"Variable index {i} outside 1..{n}")
    if d < 1:
        raise DegreeError(f"Shift selection needs d >= 1, got {d}")
    index = monomial_index(n, d)
    lower = enumerate_monomials(n, d - 1)
    z = Monomial.variable(n, i - 1)
    return ShiftSelection(
        rows_from=tuple(range(len(lower))),
        rows_to=tuple(index[m * z] for m in lower),
        kind=AFFINE_UP,
        i=i,
    )


def make_homogeneous_selection(n: int, d: int, i: int, j: int) -> ShiftSelection:
    """
    Shift up in z_i and down in z_j on the exact-degree-d grid in z0..zn.

    Pairs every monomial with z_j-exponent >= 1 with the monomial whose
    z_i-exponent is one higher and z_j-exponent one lower. Row indices agree
    with the affine degree <= d basis through z0^(d-|alpha|) z^alpha <-> z^alpha.
    """
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise InputError(f"Homogeneous shift {i}/{j} needs distinct indices in 0..{n}")
    grid = homogeneous_monomials(n + 1, d)
    index = monomial_index(n + 1, d, True)
    rows_from, rows_to = [], []
    for r, m in enumerate(grid):
        if m.exponents[j] < 1:
            continue
        exps = list(m.exponents)
        exps[j] -= 1
        exps[i] += 1
        rows_from.append(r)
        rows_to.append(index[Monomial(tuple(exps))])
    return ShiftSelection(tuple(rows_from), tuple(rows_to), HOMOGENEOUS, i, j)


# Gap detection

def find_gap(Z: NullspaceBasis, tol: float = DEFAULT_BASIS_TOL) -> GapReport:
    """
    Locate the first degree block that adds no rank to the basis.

    The cumulative rank of the rows through each degree is computed relative
    to the largest singular value of those rows, above the basis noise
    floor; the gap is the first degree >= 1 with a zero increment once the
    rank is positive.
    """
    bounds = Z.degree_block_bounds
    if not bounds:
        raise InputError("find_gap needs a basis with degree bookkeeping")
    d = len(bounds) - 1
    floor = Z.noise_floor
    cumulative = []
    for _, stop in bounds:
        cumulative.append(basis_rank(Z.Z[:stop], tol, floor) if Z.nullity else 0)
    increments = [cumulative[0]] + [cumulative[k] - cumulative[k - 1] for k in range(1, d + 1)]

    gap = next(
        (delta for delta in range(1, d + 1) if increments[delta] == 0 and cumulative[delta - 1] > 0),
        None,
    )
    m_R = cumulative[gap] if gap is not None else 0
    return GapReport(
        degree=d,
        block_ranks=tuple(increments),
        m_R=m_R,
        m_S=Z.nullity - m_R,
        d_star=gap,
        stabilized=gap is not None and gap < d,
        nullity=Z.nullity,
    )


# Eigenvalue read-out helpers

def _linkage_groups(
    points: np.ndarray,
    tol: float,
    compatible: Callable[[int, int], bool] | None = None,
) -> list[list[int]]:
    """Single-linkage groups: union every pair at distance <= tol."""
    count = points.shape[0]
    parent = list(range(count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(count):
        for b in range(a + 1, count):
            if compatible is not None and not compatible(a, b):
                continue
            if np.linalg.norm(points[a] - points[b]) <= tol:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    groups: dict[int, list[int]] = {}
    for a in range(count):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values(), key=lambda g: g[0])


def _default_radius(values: np.ndarray) -> float:
    return DEFAULT_CLUSTER_SCALE * (1.0 + float(np.max(np.abs(values), initial=0.0)))


def _invariant_means(
    mixed: np.ndarray,
    mats: Sequence[np.ndarray],
    group_values: np.ndarray,
    radius: float,
) -> np.ndarray:
    """
    Mean eigenvalue of each matrix on the invariant subspace of `mixed`
    belonging to a group of nearby eigenvalues.
    """
    center = complex(np.mean(group_values))
    reach = radius + float(np.max(np.abs(group_values - center)))
    try:
        _, Q, sdim = sla.schur(
            mixed, output="complex", sort=lambda x: abs(x - center) <= reach
        )
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Schur decomposition failed: {e}") from e
    if sdim == 0:
        raise NumericalError(f"No eigenvalues found near {center}")
    Q1 = Q[:, :sdim]
    return np.array([np.trace(Q1.conj().T @ M @ Q1) / sdim for M in mats])


def _residual(system: PolySystem, coords: Sequence[complex]) -> float:
    return float(max(abs(evaluate(p, coords)) for p in system.polys))


def _shift_blocks(
    Z_R: np.ndarray,
    selections: Sequence[ShiftSelection],
    s0_rows: str,
    basis_tol: float,
) -> tuple[np.ndarray, list[np.ndarray]]:
    base = selections[0].rows_from
    for sel in selections:
        if sel.kind != AFFINE_UP or sel.rows_from != base:
            raise InputError("Affine solve needs affine-up selections of one degree")
        if max(sel.rows_to) >= Z_R.shape[0]:
            raise DimensionMismatchError(
                f"Selection {sel.label} reaches row {max(sel.rows_to)}, basis has {Z_R.shape[0]} rows"
            )
    if s0_rows == "pivots":
        positions = list(independent_rows(Z_R[list(base)], basis_tol))
    elif s0_rows == "all":
        positions = list(range(len(base)))
    else:
        raise InputError(f"Unknown s0_rows '{s0_rows}'")
    S0Z = Z_R[[base[p] for p in positions]]
    SiZ = [Z_R[[sel.rows_to[p] for p in positions]] for sel in selections]
    return S0Z, SiZ


def shift_matrices(
    Z_R: np.ndarray,
    selections: Sequence[ShiftSelection],
    *,
    s0_rows: str = "all",
    basis_tol: float = DEFAULT_BASIS_TOL,
) -> list[np.ndarray]:
    """
    The commuting matrices A_i = (S_0 Z_R)^+ S_i Z_R, one per selection.

    Raises:
        DegenerateShiftError: S_0 Z_R loses column rank
    """
    Z_R = np.asarray(Z_R)
    S0Z, SiZ = _shift_blocks(Z_R, selections, s0_rows, basis_tol)
    rank = basis_rank(S0Z, basis_tol)
    if rank < Z_R.shape[1]:
        raise DegenerateShiftError(
            f"S0 Z_R has rank {rank} < {Z_R.shape[1]}; undetected roots at "
            "infinity or a wrong affine root count"
        )
    P = sla.pinv(S0Z)
    return [P @ B for B in SiZ]


# Affine and projective roots

def solve_affine(
    Z_R: np.ndarray,
    selections: Sequence[ShiftSelection],
    system: PolySystem,
    *,
    seed: int = 42,
    s0_rows: str = "all",
    basis_tol: float = DEFAULT_BASIS_TOL,
    cluster_tol: float | None = None,
) -> RootSet:
    """
    Affine roots from a basis whose columns span the affine null space.

    A random unit combination A = sum(gamma_i A_i) of the shift matrices is
    diagonalized. Each isolated eigenvalue gives one root, read as the
    degree-1 rows of Z_R T divided by its degree-0 row. Eigenvalues closer
    than the cluster radius form a group; every member gets the group's mean
    coordinates from the traces of A_i on its invariant subspace. Roots are
    returned unclustered, one per eigenvalue.
    """
    Z_R = np.asarray(Z_R)
    if Z_R.shape[1] == 0:
        return RootSet()
    n = system.n
    if len(selections) != n:
        raise DimensionMismatchError(f"Need {n} selections, got {len(selections)}")

    mats = shift_matrices(Z_R, selections, s0_rows=s0_rows, basis_tol=basis_tol)
    rng = np.random.default_rng(seed)
    gamma = rng.standard_normal(n)
    gamma /= np.linalg.norm(gamma)
    mixed = sum(g * A for g, A in zip(gamma, mats))

    values, vectors = eig(mixed)
    radius = cluster_tol if cluster_tol is not None else _default_radius(values)
    V = Z_R @ vectors

    raw: list[Root] = []
    for group in _linkage_groups(values[:, None], radius):
        column = V[:, group[0]]
        if len(group) == 1 and abs(column[0]) > basis_tol * np.linalg.norm(column):
            coords = column[1 : n + 1] / column[0]
        else:
            coords = _invariant_means(mixed, mats, values[group], radius)
        point = Point((1.0, *coords), homogeneous=True)
        residual = _residual(system, coords)
        raw.extend(Root(point, 1, residual) for _ in group)
    logger.debug(f"solve_affine: {len(raw)} raw roots from a {Z_R.shape[0]}x{Z_R.shape[1]} basis")
    return RootSet(tuple(raw))


def _pure_power_row(n: int, d: int, j: int) -> int:
    exps = [0] * n
    exps[j - 1] = d
    return monomial_index(n, d)[Monomial(tuple(exps))]


def solve_infinity(
    Z_S: np.ndarray,
    d: int,
    n: int,
    *,
    system: PolySystem | None = None,
    basis_tol: float = DEFAULT_BASIS_TOL,
    seed: int = 42,
    cluster_tol: float | None = None,
    residual_tol: float | None = None,
) -> SingularPart:
    """
    Roots at infinity from the singular columns of a compressed basis.

    Down-shift variables z_j are tried in order of decreasing weight of the
    z_j^d row. For the first j whose rows with z_j-exponent >= 1 keep full
    column rank, E_i = (S_j Z_S)^+ S_i Z_S on the homogeneous i/j shifts.
    Roots are then z0 = 0, z_j = 1 and z_i the eigenvalues of E_i.

    A down-shift whose roots miss the homogenized system by more than
    residual_tol is rejected; with no down-shift left only m_S is returned.

    Args:
        system: Homogenized system for residuals (optional)
        residual_tol: Largest accepted residual (None accepts every root)
    """
    Z_S = np.asarray(Z_S)
    m_S = Z_S.shape[1]
    if m_S == 0:
        return SingularPart(0)
    relation_tol = np.sqrt(basis_tol)
    order = sorted(
        range(1, n + 1),
        key=lambda j: (-float(np.linalg.norm(Z_S[_pure_power_row(n, d, j)])), j),
    )
    for j in order:
        selections = {i: make_homogeneous_selection(n, d, i, j) for i in range(n + 1) if i != j}
        base = next(iter(selections.values())).source(Z_S)
        if basis_rank(base, basis_tol) < m_S:
            logger.debug(f"Down-shift z{j} loses rank on the singular block")
            continue
        P = sla.pinv(base)
        E = []
        worst = 0.0
        for i in range(n + 1):
            if i == j:
                E.append(np.eye(m_S))
                continue
            target = selections[i].target(Z_S)
            Ei = P @ target
            scale = max(float(np.max(np.abs(base))), float(np.max(np.abs(target), initial=0.0)))
            worst = max(worst, float(np.max(np.abs(base @ Ei - target), initial=0.0)) / scale)
            E.append(Ei)
        if worst > relation_tol:
            logger.debug(f"Down-shift z{j}: shift relation residual {worst:.2e}")
            continue

        others = [i for i in range(1, n + 1) if i != j]
        if others:
            gamma = np.random.default_rng(seed).standard_normal(len(others))
            gamma /= np.linalg.norm(gamma)
            mixed = sum(g * E[i] for g, i in zip(gamma, others))
        else:
            mixed = np.zeros((m_S, m_S))
        values, _ = eig(mixed)
        radius = cluster_tol if cluster_tol is not None else _default_radius(values)

        raw = []
        for group in _linkage_groups(values[:, None], radius):
            coords = _invariant_means(mixed, E, values[group], radius)
            coords[0] = 0.0
            coords[j] = 1.0
            point = Point(tuple(coords), homogeneous=True).canonical(basis_tol)
            residual = _residual(system, point.coords) if system is not None else 0.0
            raw.extend(Root(point, 1, residual, at_infinity=True) for _ in group)
        clustered = cluster_roots(RootSet(tuple(raw)), cluster_tol, system=system)
        worst_residual = max((r.residual for r in clustered.roots), default=0.0)
        if system is not None and residual_tol is not None and worst_residual > residual_tol:
            logger.warning(
                f"Down-shift z{j}: roots at infinity miss the homogenized system "
                f"(residual {worst_residual:.2e} > {residual_tol:g})"
            )
            continue
        logger.info(f"Extracted {m_S} root(s) at infinity with down-shift z{j}")
        return SingularPart(m_S, j, tuple(E), clustered.roots)

    logger.warning(f"Could not extract the {m_S} root(s) at infinity")
    return SingularPart(m_S)


def projective_shift_spectrum(Z: NullspaceBasis | np.ndarray, d: int, n: int, j: int) -> np.ndarray:
    """
    Eigenvalues of the 0/j shift (up in z0, down in z_j) on a full basis.

    Affine roots contribute 1/z_j; roots at infinity contribute zeros.
    """
    Zm = Z.Z if isinstance(Z, NullspaceBasis) else np.asarray(Z)
    sel = make_homogeneous_selection(n, d, 0, j)
    values, _ = eig(pinv_solve(sel.source(Zm), sel.target(Zm)))
    return values


def _root_sort_key(root: Root) -> tuple:
    return (
        root.at_infinity,
        tuple((round(c.real, 8), round(c.imag, 8)) for c in root.point.coords),
    )


def cluster_roots(
    raw: RootSet,
    cluster_tol: float | None = None,
    *,
    system: PolySystem | None = None,
) -> RootSet:
    """
    Merge nearby roots into one root per cluster.

    Single linkage at radius cluster_tol (pairs at distance <= cluster_tol
    merge); affine roots never merge with roots at infinity. Each cluster
    becomes its multiplicity-weighted centroid. Residuals are recomputed when
    a system is given (its homogenization for roots at infinity).

    Args:
        cluster_tol: Radius; None uses 1e-4 * (1 + max |coordinate|)
    """
    roots = raw.roots
    if not roots:
        return raw
    coords = np.array([r.point.coords for r in roots], dtype=complex)
    tol = cluster_tol if cluster_tol is not None else _default_radius(coords)
    groups = _linkage_groups(
        coords, tol, compatible=lambda a, b: roots[a].at_infinity == roots[b].at_infinity
    )

    hsys = None
    if system is not None:
        hsys = system if system.homogeneous else homogenize(system)

    merged = []
    for group in groups:
        weights = np.array([roots[k].multiplicity for k in group], dtype=float)
        centroid = (weights[:, None] * coords[group]).sum(axis=0) / weights.sum()
        at_infinity = roots[group[0]].at_infinity
        if not at_infinity:
            centroid[0] = 1.0
        point = Point(tuple(centroid), homogeneous=True)
        if system is None:
            residual = max(roots[k].residual for k in group)
        elif at_infinity:
            residual = _residual(hsys, point.coords)
        elif system.homogeneous:
            residual = _residual(system, point.coords)
        else:
            residual = _residual(system, point.dehomogenize().coords)
        merged.append(Root(point, int(weights.sum()), residual, at_infinity))
    return RootSet(tuple(sorted(merged, key=_root_sort_key)), raw.diagnostics)


def verify_dual_basis(
    system: PolySystem,
    root: Point | Sequence[complex],
    duals: Sequence[Sequence[tuple[Sequence[int], float]]],
    d: int,
) -> float:
    """
    Largest |M_d w| over claimed dual vectors w at a root.

    Each dual is a weighted sum of normalized derivatives, e.g.
    [((2, 0), 2.0), ((1, 1), 1.0)] for 2*d20 + d11. A homogeneous root is
    checked against the homogenized system.
    """
    point = root if isinstance(root, Point) else Point(tuple(root))
    if point.homogeneous and not system.homogeneous:
        system = homogenize(system)
    if point.n != system.n:
        raise DimensionMismatchError(
            f"Root has {point.n} coordinates, system has {system.n} variables"
        )
    M = build_macaulay(system, d)
    worst = 0.0
    for combination in duals:
        w = np.zeros(M.shape[1], dtype=complex)
        for alpha, weight in combination:
            w += weight * dual_vector(point, alpha, d)
        worst = max(worst, float(np.max(np.abs(M.data @ w))))
    return worst


# Pipeline

def degree_schedule(system: PolySystem, config: SolveConfig) -> range:
    """Degrees tried by solve: default (or max d_i) up to default + n + 2."""
    if config.degree is not None:
        start = config.degree
    elif system.is_square:
        start = default_degree(system)
    else:
        start = max(system.degrees)
    stop = config.max_degree if config.max_degree is not None else start + system.affine_n + 2
    if stop < start:
        raise InputError(f"max_degree {stop} is below the first degree {start}")
    return range(start, stop + 1)


def solve_detailed(system: PolySystem, config: SolveConfig | None = None) -> SolveResult:
    """
    Run the full solve and keep the intermediate bases.

    Raises:
        NoStabilizationError: No gap below d for any scheduled degree
    """
    config = config or SolveConfig()
    if system.homogeneous:
        raise InputError("solve expects an affine system")
    n = system.n

    M = None
    tried: list[int] = []
    for d in degree_schedule(system, config):
        M = build_macaulay(system, d) if M is None else extend_macaulay(M, system, d)
        basis = nullspace(M.data, rtol=config.tol, degree_block_bounds=M.degree_block_bounds)
        gap = find_gap(basis, config.basis_tol)
        tried.append(d)
        logger.info(
            f"d={d}: Macaulay {M.shape[0]}x{M.shape[1]}, nullity {basis.nullity}, "
            f"block ranks {list(gap.block_ranks)}"
        )
        if gap.stabilized:
            break
    else:
        raise NoStabilizationError(
            f"No degree gap up to d={tried[-1]}: the solution set may be "
            "positive-dimensional or max_degree is too low",
            degrees_tried=tried,
        )
    logger.info(f"Stabilized at d={d}: gap at degree {gap.d_star}, m_R={gap.m_R}, m_S={gap.m_S}")

    k = basis.rows_through_degree(gap.d_star)
    compressed, m_R = column_compress(basis.Z, k, config.basis_tol, floor=basis.noise_floor)
    logger.info(f"Column compression of the top {k} rows: rank {m_R}")
    Z_R = compressed[:k, :m_R]
    Z_S = compressed[:, m_R:]

    selections = [make_affine_selection(n, gap.d_star, i) for i in range(1, n + 1)]
    raw = solve_affine(
        Z_R, selections, system,
        seed=config.seed,
        s0_rows=config.s0_rows,
        basis_tol=config.basis_tol,
        cluster_tol=config.cluster_tol,
    )
    affine = cluster_roots(raw, config.cluster_tol, system=system)

    warnings: list[str] = []
    singular = None
    if Z_S.shape[1] > 0:
        singular = solve_infinity(
            Z_S, d, n,
            system=homogenize(system),
            basis_tol=config.basis_tol,
            seed=config.seed,
            cluster_tol=config.cluster_tol,
            residual_tol=config.residual_tol,
        )
        if not singular.extracted:
            warnings.append(
                f"Could not extract the {singular.m_S} root(s) at infinity; only their count is reported"
            )

    roots = list(affine.roots) + list(singular.roots if singular else ())
    roots = [replace(r, flagged=r.residual > config.residual_tol) for r in roots]
    for number, root in enumerate(roots, start=1):
        if root.flagged:
            warnings.append(f"Root {number} residual {root.residual:.3e} exceeds {config.residual_tol:g}")

    bezout = system.bezout_number
    if bezout is not None:
        counted = sum(r.multiplicity for r in roots)
        if singular is not None and not singular.extracted:
            counted += singular.m_S
        if counted != bezout:
            warnings.append(f"Root count {counted} differs from the Bezout number {bezout}")

    for message in warnings:
        logger.warning(message)

    diagnostics = SolveDiagnostics(
        degree_used=d,
        nullity=basis.nullity,
        gap=gap,
        degrees_tried=tuple(tried),
        tolerances={
            "rank_tol": basis.tol_used,
            "basis_tol": config.basis_tol,
            "basis_floor": basis.noise_floor,
            "residual_tol": config.residual_tol,
            "cluster_tol": config.cluster_tol,
        },
        seed=config.seed,
        bezout=bezout,
        down_shift=singular.down_shift if singular else None,
        warnings=tuple(warnings),
    )
    return SolveResult(
        roots=RootSet(tuple(roots), diagnostics),
        macaulay=M,
        basis=basis,
        gap=gap,
        Z_R=Z_R,
        Z_S=Z_S,
        singular=singular,
    )


def solve(system: PolySystem, config: SolveConfig | None = None) -> RootSet:
    """
    Solve a zero-dimensional polynomial system.

    Affine roots come back with z0 = 1, roots at infinity with z0 = 0; both as
    canonical homogeneous points with multiplicities.
    """
    return solve_detailed(system, config).roots
