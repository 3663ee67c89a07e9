"""
polyrealize - polynomial systems through Macaulay null spaces

Solves square or overdetermined systems of multivariate polynomial
equations with numerical linear algebra only: the null space of the
Macaulay matrix is shift-invariant, so its shifted blocks give an
eigenvalue problem whose eigenvectors carry the roots. Roots at infinity
come from the singular part of the same null space. The affine part also
reads as a commuting state-space model of the system's difference
equations.

## CLI Usage

    polyrealize solve system.txt
    polyrealize realize system.txt --json
    polyrealize simulate system.txt --extents 5 5
    polyrealize verify system.txt roots.json
    polyrealize macaulay system.txt -d 3

## Programmatic Usage

    from polyrealize import parse_system, solve, realize

    system = parse_system('''
    vars: z1 z2
    4*z1^2 - 16*z1 + z2^2 - 2*z2 + 13
    2*z1 + z2 - 7
    ''')
    for root in solve(system):
        print(root.affine_coords, root.multiplicity)

    result = realize(system)
    print(result.realization.A)
"""

__version__ = "0.1.0"

from .config import SolveConfig
from .macaulay import MacaulayMatrix, build_macaulay, default_degree, extend_macaulay
from .parser import format_system, parse_polynomial, parse_system
from .poly import (
    Monomial,
    Point,
    PolySystem,
    Polynomial,
    enumerate_monomials,
    evaluate,
    homogenize,
    vandermonde_vector,
)
from .realization import (
    DescriptorRealization,
    Realization,
    TrajectoryGrid,
    canonical_realization,
    descriptor_split,
    realize,
    simulate,
    verify_trajectory,
)
from .report import Report, build_report
from .solver import (
    GapReport,
    Root,
    RootSet,
    cluster_roots,
    find_gap,
    solve,
    solve_affine,
    solve_detailed,
    solve_infinity,
)
from .cli import main as cli_main
from .types import (
    InputError,
    NoStabilizationError,
    NumericalError,
    ParseError,
    PolyRealizeError,
    RealizationError,
    VerificationError,
)

__all__ = [
    # Polynomials
    "Monomial",
    "Polynomial",
    "PolySystem",
    "Point",
    "enumerate_monomials",
    "evaluate",
    "homogenize",
    "vandermonde_vector",
    "parse_system",
    "parse_polynomial",
    "format_system",
    # Macaulay matrix
    "MacaulayMatrix",
    "build_macaulay",
    "extend_macaulay",
    "default_degree",
    # Solving
    "SolveConfig",
    "GapReport",
    "Root",
    "RootSet",
    "find_gap",
    "solve",
    "solve_detailed",
    "solve_affine",
    "solve_infinity",
    "cluster_roots",
    # Realization
    "Realization",
    "DescriptorRealization",
    "TrajectoryGrid",
    "canonical_realization",
    "descriptor_split",
    "realize",
    "simulate",
    "verify_trajectory",
    # Reports
    "Report",
    "build_report",
    # CLI
    "cli_main",
    # Errors
    "PolyRealizeError",
    "InputError",
    "ParseError",
    "NoStabilizationError",
    "NumericalError",
    "RealizationError",
    "VerificationError",
]
