"""
Versioned JSON report schema and text rendering.

The JSON layout ("v1") is what `polyrealize solve --json` and
`polyrealize realize --json` print; `polyrealize verify` reads the "roots"
list back from the same layout. Text output is rendered from the same
models, with 12 significant digits.
"""

from __future__ import annotations

import logging
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .poly import PolySystem
from .realization import RealizeResult, TrajectoryGrid
from .solver import Root, RootSet

logger = logging.getLogger(__name__)

# Imaginary parts above this, relative to the real part, are reported when dropped
IMAG_DROP_TOL = 1000 * np.finfo(float).eps

REPORT_VERSION = "v1"


class ComplexValue(BaseModel):
    re: float
    im: float = 0.0


class SystemInfo(BaseModel):
    n: int = Field(ge=1)
    variables: list[str]
    degrees: list[int]
    bezout: Optional[int] = None


class SolveInfo(BaseModel):
    degree_used: int
    nullity: int
    m_R: int = Field(ge=0)
    m_S: int = Field(ge=0)
    d_star: Optional[int] = None
    block_ranks: list[int] = Field(default_factory=list)
    degrees_tried: list[int] = Field(default_factory=list)
    tolerances: dict[str, Optional[float]] = Field(default_factory=dict)
    seed: int = 42
    down_shift: Optional[int] = None
    warnings: list[str] = Field(default_factory=list)


class RootEntry(BaseModel):
    """
    One root. Homogeneous coordinates list z0 first.

    Example:
        RootEntry(coords=[ComplexValue(re=1), ComplexValue(re=3), ComplexValue(re=1)],
                  homogeneous=True, multiplicity=1, residual=0.0)
    """
    coords: list[ComplexValue]
    homogeneous: bool = True
    at_infinity: bool = False
    multiplicity: int = Field(ge=1, default=1)
    residual: float = Field(ge=0.0, default=0.0)
    realified: bool = False
    flagged: bool = False

    def as_complex(self) -> list[complex]:
        return [complex(c.re, c.im) for c in self.coords]


class DescriptorInfo(BaseModel):
    m_R: int
    m_S: int
    available: bool = True
    down_shift: Optional[int] = None
    E0_nilpotency_residual: Optional[float] = None
    E0: list[list[float]] = Field(default_factory=list)
    E: list[list[list[float]]] = Field(default_factory=list)


class RealizationInfo(BaseModel):
    state_monomials: list[str]
    A: list[list[list[float]]]
    c: list[float]
    x0: list[float]
    x0_convention: str
    degree: int
    commutation_residual: float
    cayley_hamilton_residual: float
    annihilation_residual: Optional[float] = None
    descriptor: Optional[DescriptorInfo] = None


class Report(BaseModel):
    version: Literal["v1"] = REPORT_VERSION
    system: SystemInfo
    solve: Optional[SolveInfo] = None
    roots: list[RootEntry] = Field(default_factory=list)
    realization: Optional[RealizationInfo] = None


class RootsFile(BaseModel):
    """Input of `verify`: any v1 report, of which only the roots are read."""
    model_config = ConfigDict(extra="ignore")

    version: Literal["v1"] = REPORT_VERSION
    roots: list[RootEntry]


class RootCheck(BaseModel):
    coords: list[ComplexValue]
    homogeneous: bool
    residuals: list[float]
    ok: bool


class VerificationReport(BaseModel):
    version: Literal["v1"] = REPORT_VERSION
    residual_tol: float
    roots: list[RootCheck]
    ok: bool


class SimulationReport(BaseModel):
    """Trajectory samples flattened row-major, last axis fastest."""
    version: Literal["v1"] = REPORT_VERSION
    extents: list[int]
    values: list[float]
    values_imag: Optional[list[float]] = None
    residual: Optional[float] = None

    @classmethod
    def from_grid(cls, grid: TrajectoryGrid, residual: float | None) -> SimulationReport:
        flat = np.asarray(grid.values).ravel()
        imag = None
        if np.iscomplexobj(flat) and np.max(np.abs(flat.imag), initial=0.0) > 0.0:
            imag = [float(v) for v in flat.imag]
        return cls(
            extents=list(grid.extents),
            values=[float(v) for v in np.real(flat)],
            values_imag=imag,
            residual=residual,
        )


def _real_part(values, name: str) -> np.ndarray:
    """Real part of values; a warning names any imaginary part above roundoff."""
    arr = np.asarray(values)
    if not np.iscomplexobj(arr) or arr.size == 0:
        return np.real(arr)
    imag = float(np.max(np.abs(arr.imag)))
    scale = max(1.0, float(np.max(np.abs(arr.real))))
    if imag > IMAG_DROP_TOL * scale:
        logger.warning(f"Reporting real part of {name}; dropped imaginary part up to {imag:.3e}")
    return np.real(arr)


def _real_list(values, name: str) -> list[float]:
    return [float(v) for v in _real_part(values, name).ravel()]


def _real_matrix(M: np.ndarray, name: str) -> list[list[float]]:
    return [[float(v) for v in row] for row in _real_part(M, name)]


def system_info(system: PolySystem) -> SystemInfo:
    return SystemInfo(
        n=system.affine_n,
        variables=list(system.variable_names),
        degrees=list(system.degrees),
        bezout=system.bezout_number,
    )


def root_entry(root: Root, residual_tol: float) -> RootEntry:
    coords = root.point.coords
    realified = any(c.imag != 0.0 and abs(c.imag) < residual_tol for c in coords)
    return RootEntry(
        coords=[ComplexValue(re=c.real, im=c.imag) for c in coords],
        homogeneous=root.point.homogeneous,
        at_infinity=root.at_infinity,
        multiplicity=root.multiplicity,
        residual=root.residual,
        realified=realified,
        flagged=root.flagged,
    )


def solve_info(roots: RootSet) -> Optional[SolveInfo]:
    diag = roots.diagnostics
    if diag is None:
        return None
    return SolveInfo(
        degree_used=diag.degree_used,
        nullity=diag.nullity,
        m_R=diag.gap.m_R,
        m_S=diag.gap.m_S,
        d_star=diag.gap.d_star,
        block_ranks=list(diag.gap.block_ranks),
        degrees_tried=list(diag.degrees_tried),
        tolerances=dict(diag.tolerances),
        seed=diag.seed,
        down_shift=diag.down_shift,
        warnings=list(diag.warnings),
    )


def realization_info(result: RealizeResult, system: PolySystem) -> RealizationInfo:
    R = result.realization
    descriptor = None
    if result.descriptor is not None:
        split = result.descriptor
        descriptor = DescriptorInfo(
            m_R=split.m_R,
            m_S=split.m_S,
            available=split.available,
            down_shift=split.down_shift,
            E0_nilpotency_residual=split.nilpotency_residual() if split.available else None,
            E0=_real_matrix(split.E0, "E0") if split.available else [],
            E=[
                _real_matrix(Ai[split.m_R:, split.m_R:], f"E{i}")
                for i, Ai in enumerate(split.A, start=1)
            ] if split.available else [],
        )
    return RealizationInfo(
        state_monomials=[m.label(system.variable_names) for m in R.state_monomials],
        A=[_real_matrix(Ai, f"A{i}") for i, Ai in enumerate(R.A, start=1)],
        c=_real_list(R.c, "c"),
        x0=_real_list(R.x0, "x0"),
        x0_convention=R.x0_convention,
        degree=result.degree,
        commutation_residual=result.commutation_residual,
        cayley_hamilton_residual=result.cayley_hamilton_residual,
        annihilation_residual=result.annihilation_residual,
        descriptor=descriptor,
    )


def build_report(
    system: PolySystem,
    roots: RootSet,
    residual_tol: float,
    realization: RealizeResult | None = None,
) -> Report:
    return Report(
        system=system_info(system),
        solve=solve_info(roots),
        roots=[root_entry(r, residual_tol) for r in roots],
        realization=realization_info(realization, system) if realization else None,
    )


# Text rendering

def format_number(value: float) -> str:
    """12 significant digits, without a negative zero."""
    text = f"{value:.12g}"
    return "0" if text in ("-0", "0") else text


def format_complex(z: complex, realify_tol: float) -> str:
    if abs(z.imag) < realify_tol:
        return format_number(z.real)
    if z.real == 0.0:
        return f"{format_number(z.imag)}j"
    sign = "-" if z.imag < 0 else "+"
    return f"{format_number(z.real)}{sign}{format_number(abs(z.imag))}j"


def _point_text(entry: RootEntry, realify_tol: float) -> str:
    coords = entry.as_complex()
    if entry.homogeneous and not entry.at_infinity:
        coords = coords[1:]
    scale = max((abs(c) for c in coords), default=0.0)
    cleaned = []
    for c in coords:
        re = 0.0 if abs(c.real) <= 1e-12 * max(1.0, scale) else c.real
        cleaned.append(complex(re, c.imag))
    return "(" + ", ".join(format_complex(c, realify_tol) for c in cleaned) + ")"


def _matrix_lines(name: str, M: list[list[float]]) -> list[str]:
    lines = [f"{name} ="]
    for row in M:
        lines.append("  [" + ", ".join(format_number(v) for v in row) + "]")
    return lines


def _vector_text(v: list[float]) -> str:
    return "[" + ", ".join(format_number(x) for x in v) + "]"


def render_text(report: Report, residual_tol: float) -> str:
    """Human-readable rendering of a solve or realize report."""
    lines = []
    sysinfo = report.system
    header = f"system: n={sysinfo.n}, degrees {sysinfo.degrees}"
    if sysinfo.bezout is not None:
        header += f", bezout {sysinfo.bezout}"
    lines.append(header)

    if report.solve is not None:
        s = report.solve
        gap = f"gap at degree {s.d_star}" if s.d_star is not None else "no gap"
        lines.append(
            f"solve: d={s.degree_used}, nullity {s.nullity}, m_R={s.m_R}, m_S={s.m_S}, {gap}"
        )

    affine_total = 0
    infinity_total = 0
    for number, entry in enumerate(report.roots, start=1):
        where = " at infinity" if entry.at_infinity else ""
        line = (
            f"root {number}: {_point_text(entry, residual_tol)}{where} "
            f"mult {entry.multiplicity} residual {entry.residual:.3g}"
        )
        if entry.realified:
            line += " [realified]"
        if entry.flagged:
            line += " [flagged]"
        lines.append(line)
        if entry.at_infinity:
            infinity_total += entry.multiplicity
        else:
            affine_total += entry.multiplicity

    if report.solve is not None and sysinfo.bezout is not None:
        if report.solve.m_S > 0 and infinity_total == 0:
            infinity_total = report.solve.m_S
        status = "" if affine_total + infinity_total == sysinfo.bezout else " (mismatch)"
        lines.append(f"bezout check: {sysinfo.bezout} = {affine_total}+{infinity_total}{status}")

    if report.realization is not None:
        lines.extend(_realization_lines(report.realization, sysinfo.variables))

    if report.solve is not None:
        lines.extend(f"warning: {w}" for w in report.solve.warnings)
    return "\n".join(lines) + "\n"


def _realization_lines(info: RealizationInfo, names: list[str]) -> list[str]:
    lines = [
        f"realization: order {len(info.c)} at degree {info.degree}, "
        f"states [{', '.join(info.state_monomials)}]"
    ]
    for name, Ai in zip(names, info.A):
        lines.extend(_matrix_lines(f"A[{name}]", Ai))
    lines.append(f"c = {_vector_text(info.c)}")
    lines.append(f"x0 = {_vector_text(info.x0)} ({info.x0_convention})")
    lines.append(f"commutation residual: {info.commutation_residual:.3g}")
    lines.append(f"cayley-hamilton residual: {info.cayley_hamilton_residual:.3g}")
    if info.annihilation_residual is not None:
        lines.append(f"observability annihilation: {info.annihilation_residual:.3g}")
    split = info.descriptor
    if split is not None:
        if not split.available:
            lines.append(f"descriptor: unavailable (m_R={split.m_R}, m_S={split.m_S})")
        else:
            lines.append(
                f"descriptor: m_R={split.m_R}, m_S={split.m_S}, down-shift z{split.down_shift}, "
                f"E0 nilpotency residual {split.E0_nilpotency_residual:.3g}"
            )
            lines.extend(_matrix_lines("E0", split.E0))
            for name, Ei in zip(names, split.E):
                lines.extend(_matrix_lines(f"E[{name}]", Ei))
    return lines


def render_verification(report: VerificationReport) -> str:
    lines = []
    for number, check in enumerate(report.roots, start=1):
        values = " ".join(
            f"f{k + 1}={r:.3g}" for k, r in enumerate(check.residuals)
        )
        status = "ok" if check.ok else "FAIL"
        lines.append(f"root {number}: {values} {status}")
    if report.ok:
        lines.append(f"all residuals <= {report.residual_tol:g}")
    else:
        lines.append(f"residuals exceed {report.residual_tol:g}")
    return "\n".join(lines) + "\n"
