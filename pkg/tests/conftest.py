"""Pytest configuration and shared fixtures for curvedalg tests."""

import pytest

from src.curvedalg.config import Settings
from src.curvedalg.generators import (
    curvature_example,
    dual_coalgebra,
    square_zero_algebra,
    truncated_polynomial_algebra,
)
from src.curvedalg.gring import RingDescriptor


@pytest.fixture(autouse=True)
def reset_settings():
    """Provide a clean settings registry for every test."""
    Settings.clear()
    yield
    Settings.clear()


@pytest.fixture
def fp7():
    """Provide the prime field F_7."""
    return RingDescriptor.parse("prime_field:7")


@pytest.fixture
def odd7():
    """Provide F_7[e]/(e^2) with e in degree 1."""
    return RingDescriptor.parse("odd_exterior:7")


@pytest.fixture
def even7():
    """Provide F_7[u]/(u^3) with u in degree 2."""
    return RingDescriptor.parse("even_truncated:7:3")


@pytest.fixture
def integers():
    """Provide the integers."""
    return RingDescriptor.parse("integers")


@pytest.fixture(params=["prime_field:7", "odd_exterior:7", "even_truncated:7:3", "integers"])
def any_ring(request):
    """Provide each shipped ring in turn."""
    return RingDescriptor.parse(request.param)


@pytest.fixture
def dual_numbers(fp7):
    """Provide k[x]/(x^2) with deg x = 1 over F_7."""
    return truncated_polynomial_algebra(fp7, 2, 1)


@pytest.fixture
def poly3(fp7):
    """Provide k[x]/(x^3) with deg x = 1 over F_7."""
    return truncated_polynomial_algebra(fp7, 3, 1)


@pytest.fixture
def square_zero(fp7):
    """Provide k + V with V of degrees 1 and 2 and V V = 0 over F_7."""
    return square_zero_algebra(fp7, [1, 2])


@pytest.fixture
def curved(even7):
    """Provide the curvature example with x^2 = u over F_7[u]/(u^3)."""
    return curvature_example(even7)


@pytest.fixture
def dual_coalg(dual_numbers):
    """Provide the dual coalgebra of k[x]/(x^2), with a single reduced generator."""
    return dual_coalgebra(dual_numbers)
