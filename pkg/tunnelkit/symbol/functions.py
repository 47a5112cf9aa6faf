"""Smooth scalar functions used as symbol coefficients, time profiles and initial data."""
from typing import List

import numpy as np
from numpy.polynomial import Polynomial

from tunnelkit.models.function import (
    BumpFunctionConfig,
    ConstantFunctionConfig,
    FunctionConfig,
    GaussianFunctionConfig,
    LogCoshFunctionConfig,
    PolynomialFunctionConfig,
    SineFunctionConfig,
    SumFunctionConfig,
)

LN2 = np.log(2.0)


class ScalarFunction:
    def __call__(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def second_derivative(self, x):
        raise NotImplementedError

    def third_derivative(self, x):
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def __add__(self, other: "ScalarFunction") -> "ScalarFunction":
        return SumFunction([self, other])


class ConstantFunction(ScalarFunction):
    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    second_derivative = derivative
    third_derivative = derivative

    def is_zero(self) -> bool:
        return self.value == 0.0


class PolynomialFunction(ScalarFunction):
    def __init__(self, coefficients: List[float]):
        self.polynomial = Polynomial(coefficients)
        self._d1 = self.polynomial.deriv(1)
        self._d2 = self.polynomial.deriv(2)
        self._d3 = self.polynomial.deriv(3)

    def __call__(self, x):
        return self.polynomial(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self._d1(np.asarray(x, dtype=float))

    def second_derivative(self, x):
        return self._d2(np.asarray(x, dtype=float))

    def third_derivative(self, x):
        return self._d3(np.asarray(x, dtype=float))

    def is_zero(self) -> bool:
        return not np.any(self.polynomial.coef)


class SineFunction(ScalarFunction):
    def __init__(self, amplitude: float, frequency: float, phase: float, offset: float):
        self.amplitude = amplitude
        self.frequency = frequency
        self.phase = phase
        self.offset = offset

    def _arg(self, x):
        return self.frequency * np.asarray(x, dtype=float) + self.phase

    def __call__(self, x):
        return self.offset + self.amplitude * np.sin(self._arg(x))

    def derivative(self, x):
        return self.amplitude * self.frequency * np.cos(self._arg(x))

    def second_derivative(self, x):
        return -self.amplitude * self.frequency**2 * np.sin(self._arg(x))

    def third_derivative(self, x):
        return -self.amplitude * self.frequency**3 * np.cos(self._arg(x))

    def is_zero(self) -> bool:
        return self.amplitude == 0.0 and self.offset == 0.0


class GaussianFunction(ScalarFunction):
    def __init__(self, amplitude: float, center: float, width: float):
        self.amplitude = amplitude
        self.center = center
        self.width = width

    def _parts(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return z, self.amplitude * np.exp(-0.5 * z**2)

    def __call__(self, x):
        return self._parts(x)[1]

    def derivative(self, x):
        z, g = self._parts(x)
        return -z * g / self.width

    def second_derivative(self, x):
        z, g = self._parts(x)
        return (z**2 - 1.0) * g / self.width**2

    def third_derivative(self, x):
        z, g = self._parts(x)
        return (3.0 * z - z**3) * g / self.width**3


class BumpFunction(ScalarFunction):
    def __init__(self, amplitude: float, center: float, half_width: float):
        self.amplitude = amplitude
        self.center = center
        self.half_width = half_width

    def _z(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.half_width
        return z, np.abs(z) < 1.0

    def __call__(self, x):
        z, inside = self._z(x)
        return np.where(inside, self.amplitude * (1.0 - z**2) ** 2, 0.0)

    def derivative(self, x):
        z, inside = self._z(x)
        return np.where(inside, -4.0 * self.amplitude * z * (1.0 - z**2) / self.half_width, 0.0)

    def second_derivative(self, x):
        z, inside = self._z(x)
        return np.where(
            inside, self.amplitude * (12.0 * z**2 - 4.0) / self.half_width**2, 0.0
        )

    def third_derivative(self, x):
        z, inside = self._z(x)
        return np.where(inside, 24.0 * self.amplitude * z / self.half_width**3, 0.0)


class LogCoshFunction(ScalarFunction):
    def __init__(self, slope: float, center: float, width: float):
        self.slope = slope
        self.center = center
        self.width = width

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.width

    def __call__(self, x):
        z = self._z(x)
        # ln cosh z without overflow
        return self.slope * self.width * (np.logaddexp(z, -z) - LN2)

    def derivative(self, x):
        return self.slope * np.tanh(self._z(x))

    def second_derivative(self, x):
        return self.slope / self.width / np.cosh(np.clip(self._z(x), -350.0, 350.0)) ** 2

    def third_derivative(self, x):
        z = np.clip(self._z(x), -350.0, 350.0)
        return -2.0 * self.slope / self.width**2 * np.tanh(z) / np.cosh(z) ** 2


class SumFunction(ScalarFunction):
    def __init__(self, terms: List[ScalarFunction]):
        self.terms = terms

    def __call__(self, x):
        return sum(term(x) for term in self.terms)

    def derivative(self, x):
        return sum(term.derivative(x) for term in self.terms)

    def second_derivative(self, x):
        return sum(term.second_derivative(x) for term in self.terms)

    def third_derivative(self, x):
        return sum(term.third_derivative(x) for term in self.terms)

    def is_zero(self) -> bool:
        return all(term.is_zero() for term in self.terms)


class FunctionFactory:
    def create_function(self, function_config: FunctionConfig) -> ScalarFunction:
        if isinstance(function_config, ConstantFunctionConfig):
            return ConstantFunction(function_config.value)
        elif isinstance(function_config, PolynomialFunctionConfig):
            return PolynomialFunction(function_config.coefficients)
        elif isinstance(function_config, SineFunctionConfig):
            return SineFunction(
                function_config.amplitude,
                function_config.frequency,
                function_config.phase,
                function_config.offset,
            )
        elif isinstance(function_config, GaussianFunctionConfig):
            return GaussianFunction(
                function_config.amplitude, function_config.center, function_config.width
            )
        elif isinstance(function_config, BumpFunctionConfig):
            return BumpFunction(
                function_config.amplitude,
                function_config.center,
                function_config.half_width,
            )
        elif isinstance(function_config, LogCoshFunctionConfig):
            return LogCoshFunction(
                function_config.slope, function_config.center, function_config.width
            )
        elif isinstance(function_config, SumFunctionConfig):
            return SumFunction([self.create_function(t) for t in function_config.terms])
        else:
            raise Exception("Invalid function config")


def create_function(function_config: FunctionConfig) -> ScalarFunction:
    return FunctionFactory().create_function(function_config)
