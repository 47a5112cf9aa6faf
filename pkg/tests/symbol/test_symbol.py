import numpy as np
import pytest

from tests.fixtures.symbols import jump_symbol, potential_symbol, quadratic_symbol
from tunnelkit.errors import NonFiniteResultError
from tunnelkit.models.function import (
    ConstantFunctionConfig,
    PolynomialFunctionConfig,
    SineFunctionConfig,
)
from tunnelkit.models.symbol import CustomSymbolConfig, JumpSymbolConfig
from tunnelkit.symbol.base import SumSymbol
from tunnelkit.symbol.convexity import check_convexity
from tunnelkit.symbol.factory import create_symbol


def test_quadratic_eval():
    assert quadratic_symbol().eval(0.3, 2.0) == pytest.approx(4.0)


def test_jump_eval():
    assert jump_symbol(intensity=1.0, jump_size=1.0).eval(0.0, 0.0) == 0.0
    value = jump_symbol(intensity=2.0, jump_size=0.5).eval(0.0, 1.0)
    assert value == pytest.approx(1.0 + 2.0 * (np.exp(0.5) - 1.0), rel=1e-12)
    assert value == pytest.approx(2.29744, abs=1e-5)


def test_jump_overflow_is_reported():
    with pytest.raises(NonFiniteResultError):
        jump_symbol(jump_size=1.0).eval(0.0, 1000.0)


def test_quadratic_derivatives():
    symbol = quadratic_symbol()
    assert symbol.grad_p(0.0, 3.0) == pytest.approx(6.0)
    assert np.all(symbol.cross_xp(np.linspace(-2, 2, 5), 1.5) == 0.0)


def test_jump_hess_pp():
    symbol = jump_symbol(intensity=1.0, jump_size=1.0)
    assert symbol.hess_pp(0.7, 0.0) == pytest.approx(2.0 + 1.0)


def test_finite_differences_match_analytic():
    symbol = create_symbol(
        JumpSymbolConfig(
            diffusion=SineFunctionConfig(amplitude=0.2, offset=1.0),
            potential=PolynomialFunctionConfig(coefficients=[0.0, 0.5, -0.3]),
            intensity=ConstantFunctionConfig(value=0.7),
            jump_size=0.8,
        )
    )
    x, p = np.meshgrid(np.linspace(-1.5, 1.5, 7), np.linspace(-2.0, 2.0, 9))
    pairs = [
        (symbol.grad_p, symbol.fd_grad_p),
        (symbol.grad_x, symbol.fd_grad_x),
        (symbol.hess_pp, symbol.fd_hess_pp),
        (symbol.cross_xp, symbol.fd_cross_xp),
        (symbol.hess_xx, symbol.fd_hess_xx),
    ]
    for analytic, numeric in pairs:
        exact = analytic(x, p)
        approx = numeric(x, p)
        scale = np.maximum(np.abs(exact), 1.0)
        assert np.max(np.abs(exact - approx) / scale) < 1e-6


def test_sum_of_parts_equals_whole():
    symbol = create_symbol(
        JumpSymbolConfig(
            potential=PolynomialFunctionConfig(coefficients=[0.1, 1.0]),
            intensity=ConstantFunctionConfig(value=2.0),
            jump_size=-0.5,
        )
    )
    parts = symbol.parts()
    assert len(parts) == 3
    total = SumSymbol(parts)
    x = np.linspace(-1.0, 1.0, 11)
    p = np.linspace(-2.0, 2.0, 11)
    assert np.allclose(total.eval(x, p), symbol.eval(x, p), rtol=1e-14, atol=1e-14)
    assert np.allclose(total.grad_p(x, p), symbol.grad_p(x, p), rtol=1e-14)
    assert np.allclose((parts[0] + parts[1]).eval(x, p) + parts[2].eval(x, p), symbol.eval(x, p))


def test_constant_force_potential():
    symbol = potential_symbol(PolynomialFunctionConfig(coefficients=[0.0, 1.0]))
    assert symbol.grad_x(3.0, 0.5) == pytest.approx(1.0)
    assert symbol.hess_xx(3.0, 0.5) == pytest.approx(0.0)


def test_convexity_quadratic():
    report = check_convexity(quadratic_symbol(), (-1.0, 1.0), (-3.0, 3.0), 11)
    assert report.certified
    assert report.min_hess == pytest.approx(2.0)


def test_convexity_degenerate_quartic():
    symbol = create_symbol(
        CustomSymbolConfig(
            hamiltonian=lambda x, p, t: p**4,
            hess_pp=lambda x, p, t: 12.0 * p**2 + 0.0 * x,
            time_dependent=False,
        )
    )
    report = check_convexity(symbol, (-1.0, 1.0), (-1.0, 1.0), 21)
    assert not report.certified
    assert report.p_min == pytest.approx(0.0)


def test_convexity_jump():
    symbol = jump_symbol(intensity=1.0, jump_size=1.0)
    report = check_convexity(symbol, (-1.0, 1.0), (-5.0, 5.0), 11)
    assert report.certified
    assert report.min_hess == pytest.approx(2.0 + np.exp(-5.0))
    assert report.p_min == pytest.approx(-5.0)


def test_convexity_rejects_degenerate_window():
    with pytest.raises(ValueError, match="non-degenerate"):
        check_convexity(quadratic_symbol(), (1.0, 1.0), (-1.0, 1.0), 5)


def test_custom_symbol_falls_back_to_finite_differences():
    symbol = create_symbol(
        CustomSymbolConfig(hamiltonian=lambda x, p, t: p**2 + np.sin(x), time_dependent=False)
    )
    assert symbol.grad_p(0.2, 1.5) == pytest.approx(3.0, rel=1e-7)
    assert symbol.grad_x(0.2, 1.5) == pytest.approx(np.cos(0.2), rel=1e-7)
