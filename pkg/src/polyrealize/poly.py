"""
Multivariate polynomial values and the degree negative lexicographic order.

Core concepts:
- Monomial: an exponent vector z^alpha (affine: n entries, homogeneous: n+1
  entries with the homogenization variable z0 first)
- Polynomial: a sparse mapping Monomial -> real coefficient
- PolySystem: the equations f_1 = ... = f_s = 0, read as difference
  equations r(z)w = 0 where z_i shifts the i-th index of w
- Point: an affine or homogeneous coordinate vector

Example:
    from polyrealize.poly import Monomial, enumerate_monomials

    # 1 < z1 < z2 < z1^2 < z1*z2 < z2^2
    monomials = enumerate_monomials(2, 2)
    assert monomials[3] == Monomial((2, 0))
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from math import comb
from types import MappingProxyType

import numpy as np

from .types import DimensionMismatchError, EmptySystemError, InputError

logger = logging.getLogger(__name__)


class Ordering(IntEnum):
    """Result of a monomial comparison."""
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True, slots=True)
class Monomial:
    """
    A monomial z^alpha, stored as its exponent vector.

    Comparison operators follow the degree negative lexicographic order, so
    sorting a list of monomials gives the row/column order of the Macaulay
    matrix.

    Example:
        >>> Monomial((1, 2)).total_degree
        3
        >>> Monomial((2, 0)) < Monomial((1, 1))
        True
    """
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if not exps:
            raise InputError("A monomial needs at least one variable")
        if any(e < 0 for e in exps):
            raise InputError(f"Negative exponent in monomial: {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def n(self) -> int:
        """Ambient variable count."""
        return len(self.exponents)

    @property
    def total_degree(self) -> int:
        return sum(self.exponents)

    @classmethod
    def one(cls, n: int) -> Monomial:
        """The constant monomial 1 in n variables."""
        return cls((0,) * n)

    @classmethod
    def variable(cls, n: int, i: int) -> Monomial:
        """The monomial z_i (0-based position i) in n variables."""
        exps = [0] * n
        exps[i] = 1
        return cls(tuple(exps))

    def sort_key(self) -> tuple:
        """Key realizing the degree negative lexicographic order."""
        return (self.total_degree, tuple(-e for e in self.exponents))

    def __mul__(self, other: Monomial) -> Monomial:
        _check_same_n(self, other)
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __lt__(self, other: Monomial) -> bool:
        return monomial_cmp(self, other) is Ordering.LESS

    def __le__(self, other: Monomial) -> bool:
        return monomial_cmp(self, other) is not Ordering.GREATER

    def __gt__(self, other: Monomial) -> bool:
        return monomial_cmp(self, other) is Ordering.GREATER

    def __ge__(self, other: Monomial) -> bool:
        return monomial_cmp(self, other) is not Ordering.LESS

    def label(self, names: Sequence[str] | None = None) -> str:
        """
        Human-readable label, e.g. "1", "z1", "z1^2*z2".

        Args:
            names: Variable names; defaults to z1..zn
        """
        names = names or [f"z{i + 1}" for i in range(self.n)]
        factors = []
        for name, e in zip(names, self.exponents):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return "*".join(factors) if factors else "1"


def _check_same_n(a: Monomial, b: Monomial) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(
            f"Monomials live in different rings: {a.n} vs {b.n} variables"
        )


def monomial_cmp(a: Monomial, b: Monomial) -> Ordering:
    """
    Compare two monomials in the degree negative lexicographic order.

    Lower total degree comes first. For equal degrees, a < b when the
    left-most nonzero entry of b - a is negative.
    """
    _check_same_n(a, b)
    da, db = a.total_degree, b.total_degree
    if da != db:
        return Ordering.LESS if da < db else Ordering.GREATER
    for ea, eb in zip(a.exponents, b.exponents):
        if ea != eb:
            return Ordering.LESS if eb - ea < 0 else Ordering.GREATER
    return Ordering.EQUAL


def _exact_degree(n: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors of total degree `degree`, in ascending monomial order."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _exact_degree(n - 1, degree - first):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _monomials(n: int, d: int, exact: bool) -> tuple[Monomial, ...]:
    degrees = [d] if exact else range(d + 1)
    return tuple(Monomial(e) for deg in degrees for e in _exact_degree(n, deg))


def enumerate_monomials(n: int, d: int) -> tuple[Monomial, ...]:
    """
    All monomials of total degree <= d in n variables, sorted ascending.

    The result has C(n+d, n) entries.
    """
    if n < 1 or d < 0:
        raise InputError(f"enumerate_monomials needs n >= 1 and d >= 0, got n={n}, d={d}")
    return _monomials(n, d, False)


def homogeneous_monomials(n: int, d: int) -> tuple[Monomial, ...]:
    """
    Monomials of exact total degree d in n variables, sorted ascending.

    With z0 as the first of the n variables this grid is index-aligned with
    enumerate_monomials(n - 1, d) through z0^(d-|alpha|) z^alpha <-> z^alpha.
    """
    if n < 1 or d < 0:
        raise InputError(f"homogeneous_monomials needs n >= 1 and d >= 0, got n={n}, d={d}")
    return _monomials(n, d, True)


@lru_cache(maxsize=256)
def monomial_index(n: int, d: int, exact: bool = False) -> Mapping[Monomial, int]:
    """Position of each monomial in the (affine or exact-degree) basis."""
    monomials = _monomials(n, d, exact)
    return MappingProxyType({m: i for i, m in enumerate(monomials)})


def degree_block_bounds(n: int, d: int) -> tuple[tuple[int, int], ...]:
    """Half-open index ranges [start, stop) of each total degree 0..d."""
    bounds = []
    for delta in range(d + 1):
        bounds.append((comb(n + delta - 1, n) if delta else 0, comb(n + delta, n)))
    return tuple(bounds)


@dataclass(frozen=True)
class Polynomial:
    """
    A real-coefficient polynomial in n variables.

    Zero coefficients are never stored and terms are kept in ascending
    monomial order. The zero polynomial has no terms and total degree 0.

    Example:
        >>> p = Polynomial.from_terms(2, [((1, 0), 2.0), ((0, 1), 1.0), ((0, 0), -7.0)])
        >>> p.total_degree
        1
    """
    n: int
    terms: Mapping[Monomial, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"A polynomial needs n >= 1, got {self.n}")
        clean: dict[Monomial, float] = {}
        for mono, coeff in self.terms.items():
            if not isinstance(mono, Monomial):
                mono = Monomial(mono)
            if mono.n != self.n:
                raise DimensionMismatchError(
                    f"Term {mono.exponents} does not have {self.n} variables"
                )
            coeff = float(coeff)
            if coeff != 0.0:
                clean[mono] = clean.get(mono, 0.0) + coeff
        clean = {m: c for m, c in clean.items() if c != 0.0}
        ordered = dict(sorted(clean.items(), key=lambda item: item[0].sort_key()))
        object.__setattr__(self, "terms", MappingProxyType(ordered))

    @classmethod
    def from_terms(
        cls, n: int, terms: Iterable[tuple[Sequence[int] | Monomial, float]]
    ) -> Polynomial:
        """Build a polynomial, summing coefficients of repeated monomials."""
        acc: dict[Monomial, float] = {}
        for mono, coeff in terms:
            mono = mono if isinstance(mono, Monomial) else Monomial(tuple(mono))
            acc[mono] = acc.get(mono, 0.0) + float(coeff)
        return cls(n, acc)

    @property
    def total_degree(self) -> int:
        return max((m.total_degree for m in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_homogeneous(self) -> bool:
        return len({m.total_degree for m in self.terms}) <= 1

    def __call__(self, x: Point | Sequence[complex]) -> complex:
        return evaluate(self, x)


@dataclass(frozen=True)
class PolySystem:
    """
    A system of s polynomial equations in a common set of variables.

    Attributes:
        polys: The equations f_1..f_s
        variable_names: One identifier per variable (z0 first when homogeneous)
        homogeneous: True for a system produced by homogenize()
    """
    polys: tuple[Polynomial, ...]
    variable_names: tuple[str, ...]
    homogeneous: bool = False

    def __post_init__(self):
        polys = tuple(self.polys)
        names = tuple(self.variable_names)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "variable_names", names)
        if not polys:
            raise EmptySystemError("A polynomial system needs at least one equation")
        n = polys[0].n
        for i, p in enumerate(polys):
            if p.n != n:
                raise DimensionMismatchError(
                    f"Equation {i + 1} has {p.n} variables, expected {n}"
                )
            if p.is_zero:
                raise EmptySystemError(f"Equation {i + 1} is the zero polynomial")
        if len(names) != n:
            raise DimensionMismatchError(
                f"{len(names)} variable names given for {n} variables"
            )
        if self.homogeneous and not all(p.is_homogeneous for p in polys):
            raise InputError("A homogeneous system must consist of homogeneous polynomials")

    @property
    def n(self) -> int:
        """Ambient variable count (n+1 for a homogenized system)."""
        return self.polys[0].n

    @property
    def affine_n(self) -> int:
        """Number of affine variables z1..zn."""
        return self.n - 1 if self.homogeneous else self.n

    @property
    def s(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.total_degree for p in self.polys)

    @property
    def is_square(self) -> bool:
        return self.s == self.affine_n

    @property
    def bezout_number(self) -> int | None:
        """Product of the degrees for square systems, else None."""
        if not self.is_square:
            return None
        result = 1
        for d in self.degrees:
            result *= d
        return result


@dataclass(frozen=True)
class Point:
    """
    A point in affine space or a representative in projective space.

    Homogeneous points list z0 first; their canonical representative has its
    first nonzero coordinate equal to 1.
    """
    coords: tuple[complex, ...]
    homogeneous: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))
        if not self.coords:
            raise InputError("A point needs at least one coordinate")

    @property
    def n(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=complex)

    def canonical(self, tol: float = 1e-12) -> Point:
        """Scale a homogeneous point so its first nonzero coordinate is 1."""
        if not self.homogeneous:
            return self
        x = self.as_array()
        scale = np.max(np.abs(x))
        if scale == 0.0:
            raise InputError("The zero vector is not a projective point")
        lead = next(c for c in x if abs(c) > tol * scale)
        return Point(tuple(x / lead), homogeneous=True)

    def is_at_infinity(self, tol: float = 1e-8) -> bool:
        """True when z0 is numerically zero relative to the other coordinates."""
        if not self.homogeneous:
            return False
        x = self.as_array()
        return abs(x[0]) <= tol * max(1.0, float(np.max(np.abs(x[1:]), initial=0.0)))

    def dehomogenize(self) -> Point:
        """Affine point (z1/z0, ..., zn/z0) of a homogeneous point."""
        if not self.homogeneous:
            return self
        x = self.as_array()
        if x[0] == 0:
            raise InputError("A point at infinity has no affine representative")
        return Point(tuple(x[1:] / x[0]))

    def homogenize(self) -> Point:
        """Homogeneous point (1, z1, ..., zn) of an affine point."""
        if self.homogeneous:
            return self
        return Point((1.0,) + self.coords, homogeneous=True)


def _coords(x: Point | Sequence[complex]) -> np.ndarray:
    if isinstance(x, Point):
        return x.as_array()
    return np.asarray(x, dtype=complex).ravel()


def evaluate(p: Polynomial, x: Point | Sequence[complex]) -> complex:
    """Evaluate p at x, with 0^0 = 1."""
    values = _coords(x)
    if values.size != p.n:
        raise DimensionMismatchError(
            f"Point has {values.size} coordinates, polynomial has {p.n} variables"
        )
    total = 0j
    for mono, coeff in p.terms.items():
        total += coeff * np.prod(values ** np.asarray(mono.exponents))
    return complex(total)


def homogenize(system: PolySystem, name: str = "z0") -> PolySystem:
    """
    Lift every f_i to f_i^h in n+1 variables, z0 first.

    Every term of f_i^h has total degree d_i; setting z0 = 1 recovers f_i.
    """
    if system.homogeneous:
        raise InputError("System is already homogenized")
    while name in system.variable_names:
        name = name + "_"
    lifted = []
    for p in system.polys:
        d = p.total_degree
        lifted.append(Polynomial(
            p.n + 1,
            {Monomial((d - m.total_degree,) + m.exponents): c for m, c in p.terms.items()},
        ))
    return PolySystem(tuple(lifted), (name,) + system.variable_names, homogeneous=True)


def dehomogenize(system: PolySystem) -> PolySystem:
    """Substitute z0 = 1 in a homogenized system."""
    if not system.homogeneous:
        raise InputError("System is not homogenized")
    lowered = [
        Polynomial.from_terms(p.n - 1, [(m.exponents[1:], c) for m, c in p.terms.items()])
        for p in system.polys
    ]
    return PolySystem(tuple(lowered), system.variable_names[1:])


def _exponent_matrix(n: int, d: int, homogeneous: bool) -> np.ndarray:
    monomials = homogeneous_monomials(n, d) if homogeneous else enumerate_monomials(n, d)
    return np.array([m.exponents for m in monomials], dtype=int)


def vandermonde_vector(x: Point | Sequence[complex], d: int) -> np.ndarray:
    """
    All monomials of degree <= d evaluated at an affine point.

    A homogeneous Point gives the exact-degree-d homogeneous vector instead,
    which is index-aligned with the affine one.
    """
    return dual_vector(x, None, d)


def dual_vector(
    x: Point | Sequence[complex],
    deriv: Sequence[int] | None,
    d: int,
) -> np.ndarray:
    """
    Normalized partial derivative of the Vandermonde vector at x.

    Entry for monomial z^beta is prod_i C(beta_i, alpha_i) x_i^(beta_i - alpha_i),
    i.e. (1/alpha!) d^alpha z^beta, and 0 where some beta_i < alpha_i.

    Args:
        x: Affine point (or homogeneous Point, giving the exact-degree-d grid)
        deriv: Multi-index alpha; None or all zeros gives the Vandermonde vector
        d: Total degree of the vector
    """
    if d < 0:
        raise InputError(f"Degree must be >= 0, got {d}")
    homogeneous = isinstance(x, Point) and x.homogeneous
    values = _coords(x)
    n = values.size
    alpha = np.zeros(n, dtype=int) if deriv is None else np.asarray(deriv, dtype=int)
    if alpha.size != n:
        raise DimensionMismatchError(
            f"Multi-index has {alpha.size} entries, point has {n} coordinates"
        )
    if np.any(alpha < 0):
        raise InputError(f"Multi-index must be non-negative: {tuple(alpha)}")

    exps = _exponent_matrix(n, d, homogeneous)
    reduced = exps - alpha[None, :]
    alive = np.all(reduced >= 0, axis=1)
    out = np.zeros(exps.shape[0], dtype=complex)
    if not alive.any():
        return out
    weights = np.ones(int(alive.sum()))
    for i in range(n):
        weights *= np.array([comb(int(b), int(alpha[i])) for b in exps[alive, i]], dtype=float)
    out[alive] = weights * np.prod(values[None, :] ** reduced[alive], axis=1)
    return out


def vandermonde_basis(points: Iterable[Point | Sequence[complex]], d: int) -> np.ndarray:
    """Stack the Vandermonde vectors of several points as columns."""
    columns = [vandermonde_vector(p, d) for p in points]
    if not columns:
        raise InputError("vandermonde_basis needs at least one point")
    return np.column_stack(columns)
