"""
Macaulay matrix construction.

Row (i, alpha) of M_d holds the coefficients of z^alpha * f_i, for every
shift monomial of degree <= d - d_i; columns are the monomials of degree
<= d in degree negative lexicographic order. Every root x of the system
gives a Vandermonde vector v_d(x) in the null space of M_d.

For a homogenized system the shifts and columns have exact degree
(d - d_i and d). Dropping z0 maps that grid onto the affine one in the same
order, so both builds produce the same numbers.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from math import comb

import numpy as np

from .poly import (
    Monomial,
    Polynomial,
    PolySystem,
    enumerate_monomials,
    homogeneous_monomials,
    monomial_index,
)
from .types import DegreeError, DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MacaulayMatrix:
    """
    A Macaulay matrix with its row and column bookkeeping.

    Attributes:
        data: Dense real matrix (rows x columns), read-only
        degree: Total degree d
        row_labels: (equation index, shift monomial) per row
        col_monomials: Column monomials in ascending order
        homogeneous: True when built from a homogenized system
    """
    data: np.ndarray
    degree: int
    row_labels: tuple[tuple[int, Monomial], ...]
    col_monomials: tuple[Monomial, ...]
    homogeneous: bool = False

    def __post_init__(self):
        self.data.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def n(self) -> int:
        """Number of affine variables."""
        ambient = self.col_monomials[0].n
        return ambient - 1 if self.homogeneous else ambient

    @property
    def degree_block_bounds(self) -> tuple[tuple[int, int], ...]:
        """Half-open column ranges holding affine degree 0, 1, ..., d."""
        bounds = []
        start = 0
        for delta in range(self.degree + 1):
            stop = comb(self.n + delta, self.n)
            bounds.append((start, stop))
            start = stop
        return tuple(bounds)

    def column_labels(self, names: tuple[str, ...] | None = None) -> list[str]:
        return [m.label(names) for m in self.col_monomials]

    def to_csv(self, names: tuple[str, ...] | None = None) -> str:
        """
        Dump as CSV: a header of column monomial labels, then one row per shift
        labeled "f<i>*<shift>".
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row"] + self.column_labels(names))
        for (eq, shift), row in zip(self.row_labels, self.data):
            label = f"f{eq + 1}" if shift.total_degree == 0 else f"f{eq + 1}*{shift.label(names)}"
            writer.writerow([label] + [repr(float(v)) for v in row])
        return buf.getvalue()


def default_degree(system: PolySystem) -> int:
    """
    Degree sum(d_i) - n + 1 at which a square system's Macaulay matrix
    reaches its Bezout nullity when there are no roots at infinity.

    Raises:
        DegreeError: The system is not square; the caller must supply a degree
    """
    if not system.is_square:
        raise DegreeError(
            f"Default degree needs a square system, got {system.s} equations "
            f"in {system.affine_n} variables; supply a degree"
        )
    return sum(system.degrees) - system.affine_n + 1


def _shift_row(poly: Polynomial, shift: Monomial, index, width: int) -> np.ndarray:
    row = np.zeros(width)
    for mono, coeff in poly.terms.items():
        row[index[mono * shift]] = coeff
    return row


def _shifts(system: PolySystem, degree: int) -> tuple[Monomial, ...]:
    if system.homogeneous:
        return homogeneous_monomials(system.n, degree)
    return enumerate_monomials(system.n, degree)


def _check_degree(system: PolySystem, d: int) -> None:
    top = max(system.degrees)
    if d < top:
        raise DegreeError(f"Macaulay degree {d} is below the largest equation degree {top}")


def build_macaulay(system: PolySystem, d: int) -> MacaulayMatrix:
    """
    Build M_d with rows ordered by equation, then by shift monomial.

    Raises:
        DegreeError: d < max d_i
    """
    _check_degree(system, d)
    n = system.n
    if system.homogeneous:
        columns = homogeneous_monomials(n, d)
    else:
        columns = enumerate_monomials(n, d)
    index = monomial_index(n, d, system.homogeneous)

    rows = []
    labels = []
    for eq, (poly, di) in enumerate(zip(system.polys, system.degrees)):
        for shift in _shifts(system, d - di):
            rows.append(_shift_row(poly, shift, index, len(columns)))
            labels.append((eq, shift))

    data = np.vstack(rows)
    logger.debug(f"Built Macaulay matrix at d={d}: {data.shape[0]}x{data.shape[1]}")
    return MacaulayMatrix(data, d, tuple(labels), columns, system.homogeneous)


def extend_macaulay(M: MacaulayMatrix, system: PolySystem, d_new: int) -> MacaulayMatrix:
    """
    Grow M to degree d_new, reusing its rows.

    Old columns are a prefix of the new ones and each equation's old shifts
    are a prefix of its new shifts, so old rows are zero-padded and the new
    shift rows are appended after them per equation. The result equals
    build_macaulay(system, d_new) entry for entry.

    Raises:
        DegreeError: d_new <= M.degree
    """
    if d_new <= M.degree:
        raise DegreeError(f"Cannot extend a degree-{M.degree} matrix to degree {d_new}")
    if M.homogeneous != system.homogeneous or M.col_monomials[0].n != system.n:
        raise DimensionMismatchError("Macaulay matrix was built from a different system")
    if system.homogeneous:
        # exact-degree columns share nothing across degrees
        return build_macaulay(system, d_new)

    n = system.n
    columns = enumerate_monomials(n, d_new)
    index = monomial_index(n, d_new)
    width = len(columns)

    old = np.zeros((M.shape[0], width))
    old[:, : M.shape[1]] = M.data

    blocks = []
    labels = []
    start = 0
    for eq, (poly, di) in enumerate(zip(system.polys, system.degrees)):
        old_shifts = enumerate_monomials(n, M.degree - di)
        stop = start + len(old_shifts)
        blocks.append(old[start:stop])
        labels.extend((eq, s) for s in old_shifts)
        new_shifts = enumerate_monomials(n, d_new - di)[len(old_shifts):]
        if new_shifts:
            blocks.append(np.vstack([_shift_row(poly, s, index, width) for s in new_shifts]))
            labels.extend((eq, s) for s in new_shifts)
        start = stop

    data = np.vstack(blocks)
    logger.debug(f"Extended Macaulay matrix {M.degree} -> {d_new}: {data.shape[0]}x{data.shape[1]}")
    return MacaulayMatrix(data, d_new, tuple(labels), columns, False)
