"""
Pytest configuration.

Every worked system is kept as input-format text and parsed through
parse_system, so the fixtures also exercise the grammar.
"""
import sys
from pathlib import Path

import numpy as np
import pytest
import scipy.linalg as sla

# Add the src directory to the Python path for tests
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from polyrealize.parser import parse_system  # noqa: E402

# Two simple roots 1 and 2
UNIVARIATE = """\
vars: z
z^2 - 3*z + 2
"""

# Common roots -1 and 2 of a cubic and a quadratic
GCD_PAIR = """\
vars: z
z^3 + 2*z^2 - 5*z - 6
z^2 - z - 2
"""

# Roots (3, 1) and (2, 3)
CONIC_LINE = """\
# ellipse and a line
vars: z1 z2
4*z1^2 - 16*z1 + z2^2 - 2*z2 + 13
2*z1 + z2 - 7
"""

# One root (1, 2) of multiplicity 4
FOURFOLD = """\
vars: z1 z2
z2^2 - 4*z2 + 4
z1^2 - 2*z1*z2 + z2^2 + 2*z1 - 2*z2 + 1
"""

# Affine root (3, 9) and one root at infinity (0, 0, 1)
PARABOLA = """\
vars: z1 z2
z2 - z1^2
z1 - 3
"""

# Affine roots (2, 3), (-2, -3) and a double root at infinity (0, 1, -1)
HYPERBOLAS = """\
vars: z1 z2
z1^2 + z1*z2 - 10
z2^2 + z1*z2 - 15
"""

# Roots 1000 and 2000: degree blocks of the basis differ in scale by 1e3
LARGE_ROOTS = """\
vars: z
z^2 - 3000*z + 2000000
"""

WORKED_TEXTS = {
    "univariate": UNIVARIATE,
    "gcd_pair": GCD_PAIR,
    "conic_line": CONIC_LINE,
    "fourfold": FOURFOLD,
    "parabola": PARABOLA,
    "hyperbolas": HYPERBOLAS,
}


@pytest.fixture
def univariate():
    return parse_system(UNIVARIATE)


@pytest.fixture
def gcd_pair():
    return parse_system(GCD_PAIR)


@pytest.fixture
def conic_line():
    return parse_system(CONIC_LINE)


@pytest.fixture
def fourfold():
    return parse_system(FOURFOLD)


@pytest.fixture
def parabola():
    return parse_system(PARABOLA)


@pytest.fixture
def hyperbolas():
    return parse_system(HYPERBOLAS)


@pytest.fixture(params=sorted(WORKED_TEXTS))
def worked_system(request):
    """Each worked system in turn, as (name, PolySystem)."""
    return request.param, parse_system(WORKED_TEXTS[request.param])


@pytest.fixture
def system_file(tmp_path: Path):
    """Write a system text to a file and return its path as a string."""
    def write(text: str, name: str = "system.txt") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def span_gap(A, B) -> float:
    """Largest principal angle between the column spans of A and B."""
    return float(np.max(sla.subspace_angles(np.asarray(A), np.asarray(B)), initial=0.0))
