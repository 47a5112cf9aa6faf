"""Weak-form checks: the integral identity for R + sum e delta and the
square-root property of smoothed delta-shocks."""
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from tunnelkit.continuity.density import RegularDensity, integrate_across_kinks
from tunnelkit.continuity.rules import BaseCoefficientRule
from tunnelkit.continuity.shock import ShockStratum
from tunnelkit.errors import PreconditionError
from tunnelkit.models.model import BaseModel

ETA_MAX = 40.0
ETA_POINTS = 80001


class ProductBump:
    """zeta(x, t) = b((x - xc)/rx) b((t - tc)/rt) with b(z) = (1 - z^2)^4 on |z| < 1."""

    def __init__(self, x_center: float, x_radius: float, t_center: float, t_radius: float):
        self.x_center = x_center
        self.x_radius = x_radius
        self.t_center = t_center
        self.t_radius = t_radius

    @staticmethod
    def _b(z):
        return np.where(np.abs(z) < 1.0, (1.0 - z**2) ** 4, 0.0)

    @staticmethod
    def _db(z):
        return np.where(np.abs(z) < 1.0, -8.0 * z * (1.0 - z**2) ** 3, 0.0)

    def _z(self, x, t):
        return (
            (np.asarray(x, dtype=float) - self.x_center) / self.x_radius,
            (np.asarray(t, dtype=float) - self.t_center) / self.t_radius,
        )

    def __call__(self, x, t):
        zx, zt = self._z(x, t)
        return self._b(zx) * self._b(zt)

    def d_t(self, x, t):
        zx, zt = self._z(x, t)
        return self._b(zx) * self._db(zt) / self.t_radius

    def d_x(self, x, t):
        zx, zt = self._z(x, t)
        return self._db(zx) * self._b(zt) / self.x_radius


def regular_weak_term(density: RegularDensity, zeta: ProductBump) -> float:
    """int int R (zeta_t + u zeta_x - a zeta) dx dt, split at kinks."""
    per_slice = []
    for k, t in enumerate(density.tgrid):
        x = density.x

        def integrand(R, u, a, xs):
            return R * (zeta.d_t(xs, t) + u * zeta.d_x(xs, t) - a * zeta(xs, t))

        g = integrand(density.R[k], density.u[k], density.a[k], x)
        sides = density.sides[k]
        kink_x = np.array([s.x for s in sides])
        left = [integrand(s.R_left, s.u_left, s.a_left, s.x) for s in sides]
        right = [integrand(s.R_right, s.u_right, s.a_right, s.x) for s in sides]
        per_slice.append(integrate_across_kinks(x, g, kink_x, left, right))
    return float(trapezoid(per_slice, density.tgrid))


def stratum_weak_term(
    strata: Sequence[ShockStratum],
    zeta: ProductBump,
    rule: Optional[BaseCoefficientRule] = None,
) -> float:
    """sum over strata of int e (zeta_t + v zeta_x + f(v) zeta) dt along the path."""
    total = 0.0
    for stratum in strata:
        if len(stratum.times) < 2:
            continue
        t = np.asarray(stratum.times)
        x = np.asarray(stratum.x)
        v = np.asarray(stratum.velocity)
        e = np.asarray(stratum.e)
        f = np.array([rule.singular_rate(value) for value in v]) if rule else 0.0
        total += float(
            trapezoid(e * (zeta.d_t(x, t) + v * zeta.d_x(x, t) + f * zeta(x, t)), t)
        )
    return total


def weak_form_residual(
    density: RegularDensity,
    zeta: ProductBump,
    strata: Sequence[ShockStratum] = (),
    rule: Optional[BaseCoefficientRule] = None,
) -> float:
    """Residual of the integral identity; zeta must vanish at the first and last time."""
    return regular_weak_term(density, zeta) + stratum_weak_term(strata, zeta, rule)


def gaussian_kernel(eta):
    return np.exp(-np.asarray(eta, dtype=float) ** 2) / np.sqrt(np.pi)


class WeakAsymptoticReport(BaseModel):
    epsilons: List[float]
    residuals: List[float]
    slope: Optional[float] = None


def _loglog_slope(epsilons: np.ndarray, residuals: np.ndarray) -> Optional[float]:
    usable = residuals > 0
    if np.count_nonzero(usable) < 2:
        return None
    return float(np.polyfit(np.log(epsilons[usable]), np.log(residuals[usable]), 1)[0])


def weak_asymptotic_residual(
    R_profile: Callable,
    e: float,
    epsilons: Sequence[float],
    zeta: Callable = lambda x: np.ones_like(np.asarray(x, dtype=float)),
    position: float = 0.0,
    kernel: Callable = gaussian_kernel,
    eta_max: float = ETA_MAX,
    n_eta: int = ETA_POINTS,
) -> WeakAsymptoticReport:
    """eps-family of int (sqrt(R + (e/eps) w((x - phi)/eps)) - sqrt(R)) zeta dx.

    In the stretched variable eta = (x - phi)/eps the integral becomes
    eps * int (sqrt(R + e w(eta)/eps) - sqrt(R)) zeta d eta over |eta| <= eta_max.
    """
    if e < 0:
        raise PreconditionError("amplitude e must be non-negative")
    eta = np.linspace(-eta_max, eta_max, n_eta)
    weights = kernel(eta)
    residuals = []
    for eps in epsilons:
        x = position + eps * eta
        R = np.asarray(R_profile(x), dtype=float) + 0.0 * x
        radicand = R + e * weights / eps
        if np.any(R < 0) or np.any(radicand < 0):
            raise PreconditionError("negative radicand in the square-root functional")
        integrand = (np.sqrt(radicand) - np.sqrt(R)) * zeta(x)
        residuals.append(float(eps * trapezoid(integrand, eta)))
    eps_array = np.asarray(epsilons, dtype=float)
    return WeakAsymptoticReport(
        epsilons=list(map(float, epsilons)),
        residuals=residuals,
        slope=_loglog_slope(eps_array, np.abs(np.asarray(residuals))),
    )
