"""Stereographic charts, the Moebius group of the Riemann sphere, and the
conformal factor of dilations.

The unit sphere is identified with the extended complex plane by projecting
from the north pole: zeta = 0 is the south pole (0, 0, -1) and
zeta = infinity the north pole (0, 0, 1).  A unit-determinant complex 2x2
matrix (a, b; c, d) acts by the fractional linear map
zeta -> (a zeta + b)/(c zeta + d).  Its singular value decomposition
U diag(sqrt(lam), 1/sqrt(lam)) V*, with U, V special unitary, splits the
action into a rotation, the dilation zeta -> lam * zeta and another
rotation, so every energy computation that only sees rotation-invariant
quantities can be reduced to dilations.

The dilation conformal factor

    chi_lam(zeta) = (1 + lam^2 |zeta|^2)^2 / (lam^2 (1 + |zeta|^2)^2)

and the L2 norm of grad log chi_lam are provided together with the explicit
closed-form upper bound obtained by splitting the radial integral at
r = 1/lam and r = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import adaptive_gauss_legendre

__all__ = [
    "DegenerateMatrixError",
    "SpherePoint",
    "StereoPoint",
    "MobiusElement",
    "MobiusSVD",
    "stereo_to_sphere",
    "sphere_to_stereo",
    "mobius_apply",
    "mobius_svd",
    "chi",
    "chi_values",
    "grad_log_chi",
    "norm_grad_log_chi_L2",
    "grad_log_chi_l2_bound",
    "GRAD_LOG_CHI_L2_REGIME_CONSTANT",
]


class DegenerateMatrixError(ValueError):
    """Matrix is too far from unit determinant to act on the sphere."""


@dataclass(frozen=True)
class SpherePoint:
    """Point on the unit sphere in R^3."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        nrm = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"point is off the unit sphere: |p|^2 - 1 = {nrm - 1.0:.3e}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class StereoPoint:
    """Point of the extended complex plane; the pole of the chart is carried
    by the ``at_infinity`` flag rather than a large sentinel value."""

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    @classmethod
    def from_complex(cls, zeta: complex) -> "StereoPoint":
        zeta = complex(zeta)
        if cmath.isinf(zeta):
            return cls(at_infinity=True)
        return cls(zeta.real, zeta.imag)

    @classmethod
    def infinity(cls) -> "StereoPoint":
        return cls(at_infinity=True)

    @property
    def zeta(self) -> complex:
        if self.at_infinity:
            raise ValueError("point at infinity has no finite coordinate")
        return complex(self.re, self.im)

    @property
    def abs2(self) -> float:
        if self.at_infinity:
            return math.inf
        return self.re * self.re + self.im * self.im


@dataclass(frozen=True)
class MobiusElement:
    """Unit-determinant 2x2 complex matrix acting on the Riemann sphere.

    Construction checks ``a d - b c`` against 1 with a loose gate (1e-8);
    :meth:`normalized` rescales an arbitrary invertible matrix so the
    determinant is 1 to machine precision.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-8:
            raise DegenerateMatrixError(f"determinant {det} is not 1")

    @classmethod
    def normalized(cls, a: complex, b: complex, c: complex, d: complex) -> "MobiusElement":
        det = complex(a) * complex(d) - complex(b) * complex(c)
        if det == 0:
            raise DegenerateMatrixError("matrix is singular")
        s = cmath.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def identity(cls) -> "MobiusElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def dilation(cls, lam: float) -> "MobiusElement":
        if lam <= 0:
            raise ValueError("dilation factor must be positive")
        s = math.sqrt(lam)
        return cls(s, 0.0, 0.0, 1.0 / s)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def compose(self, other: "MobiusElement") -> "MobiusElement":
        return MobiusElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __matmul__ = compose

    def inverse(self) -> "MobiusElement":
        return MobiusElement(self.d, -self.b, -self.c, self.a)

    def conjugate_transpose(self) -> "MobiusElement":
        m = MobiusElement.__new__(MobiusElement)
        object.__setattr__(m, "a", self.a.conjugate())
        object.__setattr__(m, "b", self.c.conjugate())
        object.__setattr__(m, "c", self.b.conjugate())
        object.__setattr__(m, "d", self.d.conjugate())
        return m


@dataclass(frozen=True)
class MobiusSVD:
    """Decomposition M = U diag(sqrt(lam), 1/sqrt(lam)) V* with special
    unitary factors and lam >= 1 (the larger eigenvalue of M M*)."""

    U: MobiusElement
    V: MobiusElement
    lam: float

    def reconstruct(self) -> np.ndarray:
        D = np.diag([math.sqrt(self.lam), 1.0 / math.sqrt(self.lam)])
        return self.U.matrix() @ D @ self.V.matrix().conj().T


def stereo_to_sphere(p: StereoPoint) -> SpherePoint:
    """Map the chart coordinate to the sphere:
    x + iy = 2 zeta/(1+|zeta|^2), z = (|zeta|^2 - 1)/(|zeta|^2 + 1)."""
    if p.at_infinity:
        return SpherePoint(0.0, 0.0, 1.0)
    rsq = p.abs2
    if rsq <= 1.0:
        denom = 1.0 + rsq
        return SpherePoint(2.0 * p.re / denom, 2.0 * p.im / denom, (rsq - 1.0) / denom)
    # invert through 1/zeta for stability at large radius
    w = 1.0 / p.zeta
    wsq = w.real * w.real + w.imag * w.imag
    denom = 1.0 + wsq
    return SpherePoint(2.0 * w.real / denom, -2.0 * w.imag / denom, (1.0 - wsq) / denom)


def sphere_to_stereo(q: SpherePoint) -> StereoPoint:
    """Inverse chart: zeta = (x + iy)/(1 - z); the north pole maps to the
    point at infinity."""
    if q.z >= 1.0:
        return StereoPoint.infinity()
    denom = 1.0 - q.z
    return StereoPoint(q.x / denom, q.y / denom)


def mobius_apply(m: MobiusElement, p: StereoPoint) -> StereoPoint:
    """Fractional linear action zeta -> (a zeta + b)/(c zeta + d)."""
    if p.at_infinity:
        if m.c == 0:
            return StereoPoint.infinity()
        return StereoPoint.from_complex(m.a / m.c)
    z = p.zeta
    denom = m.c * z + m.d
    if denom == 0:
        return StereoPoint.infinity()
    return StereoPoint.from_complex((m.a * z + m.b) / denom)


def _su2_from_column(col: np.ndarray) -> MobiusElement:
    # [[p, -conj(q)], [q, conj(p)]] is special unitary for any unit column
    p, q = col[0], col[1]
    nrm = math.sqrt(abs(p) ** 2 + abs(q) ** 2)
    p, q = p / nrm, q / nrm
    m = MobiusElement.__new__(MobiusElement)
    object.__setattr__(m, "a", complex(p))
    object.__setattr__(m, "b", complex(-q.conjugate()))
    object.__setattr__(m, "c", complex(q))
    object.__setattr__(m, "d", complex(p.conjugate()))
    return m


def mobius_svd(m: MobiusElement) -> MobiusSVD:
    """Singular value decomposition with special unitary factors.

    ``lam`` is the larger eigenvalue of M M*.  When M M* = I (up to 1e-12)
    the decomposition is the degenerate one U = M, V = I, lam = 1.
    """
    det = m.det()
    if abs(det - 1.0) > 1e-8:
        raise DegenerateMatrixError(f"determinant {det} is not 1")
    A = m.matrix()
    H = A @ A.conj().T
    evals = np.linalg.eigvalsh(H)
    lam = float(max(evals[1], 1.0))
    if abs(lam - 1.0) <= 1e-12:
        return MobiusSVD(U=m, V=MobiusElement.identity(), lam=1.0)
    _, evecs = np.linalg.eigh(H)
    u1 = evecs[:, 1]  # eigenvector of the larger eigenvalue
    U = _su2_from_column(u1)
    v1 = (A.conj().T @ u1) / math.sqrt(lam)
    V = _su2_from_column(v1)
    return MobiusSVD(U=U, V=V, lam=lam)


def chi_values(lam: float, zs: np.ndarray) -> np.ndarray:
    """Vectorised conformal factor chi_lam at complex chart points.

    Stable for arbitrarily large radii (value tends to lam^2 at the pole).
    """
    rsq = np.abs(np.asarray(zs)) ** 2
    small = rsq <= 1.0
    rs = np.where(small, rsq, 1.0)
    inv = np.where(small, 1.0, np.where(np.isinf(rsq), 0.0, 1.0 / np.where(rsq == 0, 1.0, rsq)))
    direct = ((1.0 + lam * lam * rs) / (lam * (1.0 + rs))) ** 2
    inverted = ((inv + lam * lam) / (lam * (inv + 1.0))) ** 2
    return np.where(small, direct, inverted)


def chi(lam: float, p: StereoPoint) -> float:
    """Conformal factor of the dilation zeta -> lam zeta,
    chi_lam = (1 + lam^2 |zeta|^2)^2 / (lam^2 (1 + |zeta|^2)^2);
    equals lam^2 at the point at infinity."""
    if lam < 1.0:
        raise ValueError("chi expects lam >= 1")
    if p.at_infinity:
        return lam * lam
    return float(chi_values(lam, np.array([p.zeta]))[0])


def grad_log_chi(lam: float, r):
    """Radial derivative (d/dr) log chi_lam = 4 r (lam^2-1) /
    ((1+r^2)(1+lam^2 r^2)); vectorised over r >= 0."""
    r = np.asarray(r, dtype=float)
    val = 4.0 * r * (lam * lam - 1.0) / ((1.0 + r * r) * (1.0 + lam * lam * r * r))
    if val.ndim == 0:
        return float(val)
    return val


def norm_grad_log_chi_L2(lam: float, *, rel_tol: float = 1e-9) -> float:
    """L2 norm over the sphere of grad log chi_lam.

    The square is the radial integral
    8 pi * int_0^inf (d/dr log chi_lam)^2 r (1+r^2)^(-2) dr, computed after
    the compactifying substitution r = tan(theta/2) as
    2 pi * int_0^pi (d/dr log chi_lam)^2 sin(theta) dtheta by adaptive
    Gauss-Legendre panels.
    """
    if lam < 1.0:
        raise ValueError("norm_grad_log_chi_L2 expects lam >= 1")
    if lam == 1.0:
        return 0.0

    def integrand(theta: np.ndarray) -> np.ndarray:
        g = grad_log_chi(lam, np.tan(0.5 * theta))
        return g * g * np.sin(theta)

    val = adaptive_gauss_legendre(integrand, 0.0, math.pi, rel_tol=rel_tol)
    return math.sqrt(2.0 * math.pi * val)


def grad_log_chi_l2_bound(lam: float) -> float:
    """Closed-form upper bound for :func:`norm_grad_log_chi_L2`:
    4 sqrt(8 pi) ((lam+1)/lam) ((lam-1)/lam) (1/4 + 1/8 + log lam)^(1/2),
    obtained by splitting the radial integral at 1/lam and 1."""
    if lam < 1.0:
        raise ValueError("bound expects lam >= 1")
    return (4.0 * math.sqrt(8.0 * math.pi) * ((lam + 1.0) / lam)
            * ((lam - 1.0) / lam) * math.sqrt(0.25 + 0.125 + math.log(lam)))


# envelope constant for the two-regime growth of the bound:
# norm <= C log(lam) for lam <= e and C sqrt(log lam) for lam >= e,
# with C = 4 sqrt(8 pi) * 2 * sqrt(2)
GRAD_LOG_CHI_L2_REGIME_CONSTANT = 8.0 * math.sqrt(2.0) * math.sqrt(8.0 * math.pi)
