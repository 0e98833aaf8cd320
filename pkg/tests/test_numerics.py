import math

import numpy as np
import pytest

from qdl.errors import QuadratureNoConvergence
from qdl.optimize import golden_max
from qdl.quadrature import integrate


def test_integrate_polynomial_exact():
    # 16-node Gauss-Legendre is exact through degree 31
    assert integrate(lambda s: s**31 + 0j, 0.0, 1.0) == pytest.approx(1 / 32, rel=1e-15)


def test_integrate_complex_exponential():
    got = integrate(lambda s: np.exp(1j * s), 0.0, math.pi)
    assert abs(got - 2j) < 1e-13


def test_integrate_near_singular():
    # integral of 1/(1.001 - s) on [0, 1] = log(1001)
    got = integrate(lambda s: 1 / (1.001 - s) + 0j, 0.0, 1.0)
    assert got.real == pytest.approx(math.log(1001), rel=1e-10)


def test_integrate_reversed_and_empty():
    assert integrate(lambda s: s + 0j, 1.0, 0.0) == pytest.approx(-0.5)
    assert integrate(lambda s: s + 0j, 0.3, 0.3) == 0


def test_integrate_reports_gap():
    with pytest.raises(QuadratureNoConvergence) as info:
        integrate(lambda s: 1 / (1 + 1e-12 - s) + 0j, 0.0, 1.0, max_panels=3)
    assert info.value.gap > 0


def test_golden_quadratic():
    x, fx, _ = golden_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(0.0, abs=1e-13)


def test_golden_monotone_picks_endpoint():
    x, fx, _ = golden_max(lambda x: x, 0.0, 2.0)
    assert x == 2.0 and fx == 2.0
    x, _, _ = golden_max(lambda x: -x, -1.0, 2.0)
    assert x == -1.0
