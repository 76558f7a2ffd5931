"""Pointwise evaluators for maps of the sphere and quadrature over it.

An evaluator answers, at any chart point zeta, with the image point on the
sphere, the energy density e(u) = |grad u|^2 / 2, and the signed Jacobian
density J(u).  For every map here |J| <= e pointwise, with equality exactly
at conformal points, and (1/4 pi) times the integral of J is the degree.

All maps in scope have closed-form pointwise data (fractional linear maps,
rotationally symmetric maps, and compositions with fractional linear maps),
so quadrature consumes evaluators directly and no interpolation enters the
bound checks.  Densities are written projectively, e.g.

    e(M)(zeta) = (1 + |zeta|^2)^2 / (|a zeta + b|^2 + |c zeta + d|^2)^2

for the map induced by (a, b; c, d), which stays finite through poles of
the chart; inputs with |zeta| > 1 are routed through 1/zeta so nothing
overflows near the north pole.
"""

from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .mobius import MobiusElement, SpherePoint, StereoPoint
from .radial import RadialProfile

__all__ = [
    "NonIntegerDegreeWarning",
    "MapEvaluator",
    "MobiusMap",
    "ConjugationMap",
    "ConstantMap",
    "PullbackMap",
    "RadialMap",
    "identity_map",
    "mobius_map",
    "pullback",
    "QuadratureGrid",
    "make_grid",
    "degree",
    "EnergyReport",
    "energy_report",
]


class NonIntegerDegreeWarning(UserWarning):
    """Jacobian quadrature landed further than 0.01 from an integer."""


def _abs2(z: np.ndarray) -> np.ndarray:
    return z.real * z.real + z.imag * z.imag


def _sphere_xyz(w: np.ndarray) -> np.ndarray:
    """Stack of unit vectors for chart points w (may contain inf)."""
    w = np.asarray(w, dtype=complex)
    rsq = _abs2(w)
    big = ~(rsq <= 1.0)  # catches inf/nan as well
    ws = np.where(big, 0.0, w)
    denom = 1.0 + _abs2(ws)
    x, y, z = 2.0 * ws.real / denom, 2.0 * ws.imag / denom, (_abs2(ws) - 1.0) / denom
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(np.isfinite(w), 1.0 / np.where(w == 0, 1.0, w), 0.0)
    v = np.where(big, v, 0.0)
    denv = 1.0 + _abs2(v)
    xb, yb, zb = 2.0 * v.real / denv, -2.0 * v.imag / denv, (1.0 - _abs2(v)) / denv
    return np.stack([np.where(big, xb, x), np.where(big, yb, y), np.where(big, zb, z)])


class MapEvaluator(ABC):
    """Abstract pointwise description of a map from the sphere to itself.

    The array methods accept complex chart coordinates (entries may be
    inf for the pole) and are what quadrature consumes; :meth:`evaluate`
    is the scalar counterpart on :class:`StereoPoint`.
    """

    @abstractmethod
    def position(self, z: np.ndarray) -> np.ndarray:
        """(3, N) array of image unit vectors."""

    @abstractmethod
    def density(self, z: np.ndarray) -> np.ndarray:
        """Energy density e(u) >= 0."""

    @abstractmethod
    def jacobian(self, z: np.ndarray) -> np.ndarray:
        """Signed Jacobian density, |J| <= e pointwise."""

    def evaluate(self, p: StereoPoint) -> tuple[SpherePoint, float, float]:
        z = np.array([complex(math.inf, 0.0) if p.at_infinity else p.zeta])
        xyz = self.position(z)
        return (SpherePoint(float(xyz[0, 0]), float(xyz[1, 0]), float(xyz[2, 0])),
                float(self.density(z)[0]), float(self.jacobian(z)[0]))


def _mobius_image(m: MobiusElement, z: np.ndarray) -> np.ndarray:
    """(a z + b)/(c z + d) routed through 1/z on |z| > 1; poles give inf."""
    z = np.asarray(z, dtype=complex)
    rsq = _abs2(z)
    big = ~(rsq <= 1.0)
    zs = np.where(big, 0.0, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(big & np.isfinite(z), 1.0 / np.where(z == 0, 1.0, z), 0.0)
        direct = (m.a * zs + m.b) / (m.c * zs + m.d)
        inverted = (m.a + m.b * v) / (m.c + m.d * v)
    out = np.where(big, inverted, direct)
    return np.where(np.isnan(out), complex(math.inf, 0.0), out)


def _mobius_vector_norm2(m: MobiusElement, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (|a z + b|^2 + |c z + d|^2, 1 + |z|^2), both scaled by
    1/|z|^2 on |z| > 1 so the ratio is overflow-free."""
    z = np.asarray(z, dtype=complex)
    rsq = _abs2(z)
    big = ~(rsq <= 1.0)
    zs = np.where(big, 0.0, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(big & np.isfinite(z), 1.0 / np.where(z == 0, 1.0, z), 0.0)
    num_direct = 1.0 + _abs2(zs)
    den_direct = _abs2(m.a * zs + m.b) + _abs2(m.c * zs + m.d)
    num_inv = _abs2(v) + 1.0
    den_inv = _abs2(m.a + m.b * v) + _abs2(m.c + m.d * v)
    return (np.where(big, den_inv, den_direct), np.where(big, num_inv, num_direct))


class MobiusMap(MapEvaluator):
    """The fractional linear map itself, viewed as a map of the sphere.

    Holomorphic, hence conformal: J = e everywhere and the degree is 1.
    """

    def __init__(self, m: MobiusElement):
        self.m = m

    def position(self, z):
        return _sphere_xyz(_mobius_image(self.m, z))

    def density(self, z):
        den, num = _mobius_vector_norm2(self.m, z)
        return (num / den) ** 2

    def jacobian(self, z):
        return self.density(z)


class ConjugationMap(MapEvaluator):
    """zeta -> conj(zeta): an isometry reversing orientation (degree -1)."""

    def position(self, z):
        return _sphere_xyz(np.conj(np.asarray(z, dtype=complex)))

    def density(self, z):
        return np.ones(np.asarray(z).shape)

    def jacobian(self, z):
        return -np.ones(np.asarray(z).shape)


class ConstantMap(MapEvaluator):
    def __init__(self, q: SpherePoint):
        self.q = q

    def position(self, z):
        n = np.asarray(z).shape[0]
        return np.tile(self.q.as_array()[:, None], (1, n))

    def density(self, z):
        return np.zeros(np.asarray(z).shape)

    def jacobian(self, z):
        return np.zeros(np.asarray(z).shape)


class PullbackMap(MapEvaluator):
    """Composition u o M for an arbitrary evaluator u and fractional linear
    M.  Densities follow from the chain rule: the conformal factor

        (1 + |zeta|^2)^2 / (|a zeta + b|^2 + |c zeta + d|^2)^2

    multiplies both e(u) and J(u) at the image point M zeta."""

    def __init__(self, u: MapEvaluator, m: MobiusElement):
        self.u = u
        self.m = m

    def _factor(self, z):
        den, num = _mobius_vector_norm2(self.m, z)
        return (num / den) ** 2

    def position(self, z):
        return self.u.position(_mobius_image(self.m, z))

    def density(self, z):
        return self._factor(z) * self.u.density(_mobius_image(self.m, z))

    def jacobian(self, z):
        return self._factor(z) * self.u.jacobian(_mobius_image(self.m, z))


class RadialMap(MapEvaluator):
    """Equivariant map determined by a radial profile.

    The chart radius fixes the polar angle r = pi - 2 arctan|zeta| from the
    north pole; the image is (sin f cos t, sin f sin t, cos f) with t the
    chart argument.  e = (f'^2 + (sin f / sin r)^2)/2 and
    J = f' sin f / sin r; near the poles the ratio sin f / sin r is replaced
    by its limit f'.
    """

    def __init__(self, profile: RadialProfile):
        self.profile = profile

    def _polar(self, z):
        z = np.asarray(z, dtype=complex)
        t = np.abs(z)
        r = _PI_MINUS_2ATAN(t)
        return r, np.angle(z)

    def _f_fp_ratio(self, r):
        f = self.profile.value(r)
        fp = self.profile.slope(r)
        s = np.sin(r)
        safe = s > 1e-7
        ratio = np.where(safe, np.sin(f) / np.where(safe, s, 1.0), fp)
        return f, fp, ratio

    def position(self, z):
        r, ang = self._polar(z)
        f, _, _ = self._f_fp_ratio(r)
        sf = np.sin(f)
        return np.stack([sf * np.cos(ang), sf * np.sin(ang), np.cos(f)])

    def density(self, z):
        r, _ = self._polar(z)
        _, fp, ratio = self._f_fp_ratio(r)
        return 0.5 * (fp * fp + ratio * ratio)

    def jacobian(self, z):
        r, _ = self._polar(z)
        _, fp, ratio = self._f_fp_ratio(r)
        return fp * ratio


def _PI_MINUS_2ATAN(t: np.ndarray) -> np.ndarray:
    # arctan(inf) = pi/2, so the pole lands exactly on r = 0
    return math.pi - 2.0 * np.arctan(t)


def identity_map() -> MobiusMap:
    return MobiusMap(MobiusElement.identity())


def mobius_map(m: MobiusElement) -> MobiusMap:
    return MobiusMap(m)


def pullback(u: MapEvaluator, m: MobiusElement) -> PullbackMap:
    return PullbackMap(u, m)


@dataclass(frozen=True)
class QuadratureGrid:
    """Product quadrature on the sphere in stereographic polar coordinates:
    Gauss-Legendre in the polar angle against sin(theta) d theta, uniform
    (trapezoidal on the circle) in the chart argument.  Weights sum to
    4 pi; node summation is pairwise, hence deterministic."""

    zs: np.ndarray
    weights: np.ndarray
    n_radial: int
    n_angular: int

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(self.weights * values))

    def integrate_map(self, fn) -> float:
        return self.integrate(fn(self.zs))

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def nodes(self):
        for z, w in zip(self.zs, self.weights):
            yield StereoPoint(z.real, z.imag), float(w)


def make_grid(n_radial: int, n_angular: int) -> QuadratureGrid:
    if n_radial < 4 or n_angular < 4:
        raise ValueError("grid needs n_radial >= 4 and n_angular >= 4")
    x, w = np.polynomial.legendre.leggauss(n_radial)
    theta = 0.5 * math.pi * (x + 1.0)
    w_theta = 0.5 * math.pi * w * np.sin(theta)
    r = np.tan(0.5 * theta)
    phi = 2.0 * math.pi * np.arange(n_angular) / n_angular
    zs = np.outer(r, np.exp(1j * phi)).ravel()
    weights = np.outer(w_theta * (2.0 * math.pi / n_angular),
                       np.ones(n_angular)).ravel()
    return QuadratureGrid(zs=zs, weights=weights,
                          n_radial=n_radial, n_angular=n_angular)


def degree(u: MapEvaluator, grid: QuadratureGrid) -> tuple[float, int]:
    """(1/4 pi) times the Jacobian integral, raw and rounded; warns when
    the raw value sits further than 0.01 from the nearest integer."""
    raw = grid.integrate(u.jacobian(grid.zs)) / (4.0 * math.pi)
    nearest = int(round(raw))
    if abs(raw - nearest) > 0.01:
        warnings.warn(f"degree quadrature {raw:.6f} is {abs(raw - nearest):.3g} "
                      "away from an integer; refine the grid",
                      NonIntegerDegreeWarning, stacklevel=2)
    return raw, nearest


@dataclass(frozen=True)
class EnergyReport:
    """Energy/degree summary for one map at one exponent."""

    alpha: float
    e_alpha: float
    e_dirichlet_plus_area: float
    degree: float
    degree_int: int
    floor_2_2a1_pi: float
    passes_floor: bool


def energy_report(u: MapEvaluator, alpha: float, grid: QuadratureGrid,
                  *, floor_tol: float = 1e-8) -> EnergyReport:
    """Report e_alpha, the Dirichlet-plus-area integral of (1 + e), the
    degree, and whether a degree-1 map clears the floor 2^(2 alpha + 1) pi.
    """
    from .energy import alpha_energy  # local import: energy builds on maps

    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    dens = u.density(grid.zs)
    e1 = grid.integrate(1.0 + dens)
    ea = alpha_energy(u, alpha, grid)
    raw, nearest = degree(u, grid)
    floor = 2.0 ** (2.0 * alpha + 1.0) * math.pi
    passes = (nearest != 1) or (ea >= floor - floor_tol)
    return EnergyReport(alpha=alpha, e_alpha=ea, e_dirichlet_plus_area=e1,
                        degree=raw, degree_int=nearest,
                        floor_2_2a1_pi=floor, passes_floor=passes)
