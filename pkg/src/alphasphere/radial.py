"""Rotationally symmetric maps of the sphere and their construction.

A profile f on [0, pi] with f(0) = 0 and f(pi) = n*pi determines the
equivariant map

    (r, theta) -> (sin f(r) cos theta, sin f(r) sin theta, cos f(r))

in polar-angle coordinates about the z-axis (r = 0 is the north pole).
Its energy with exponent ``alpha`` reduces to the one-dimensional integral

    I(f) = pi * int_0^pi (2 + f'^2 + sin^2 f / sin^2 r)^alpha sin r dr

and critical profiles solve

    f'' + cot(r) f' - sin f cos f / sin^2 r
        + (alpha - 1) f' (d/dr W) / (2 + W) = 0,   W = f'^2 + sin^2 f/sin^2 r.

The module provides the energy, a finite-difference residual for the above
equation, a direct minimiser over nodal values (damped Newton, conjugate
gradient or gradient descent, all with Armijo backtracking and analytic
discrete derivatives), a shooting integrator as an independent
construction, and the disc/annulus energy split of the threefold-winding
solutions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

__all__ = [
    "ShootFailedError",
    "SplitUnavailableError",
    "RadialProfile",
    "SolveResult",
    "radial_energy",
    "radial_energy_between",
    "radial_residual",
    "minimize_radial",
    "shoot_radial",
    "annulus_split",
    "save_profile",
    "load_profile",
]

_PI = math.pi


class ShootFailedError(RuntimeError):
    """The shooting integrator blew up before reaching the far endpoint."""

    def __init__(self, message: str, last_r: float):
        super().__init__(message)
        self.last_r = last_r


class SplitUnavailableError(RuntimeError):
    """The profile lacks the crossings needed for the disc/annulus split."""


@dataclass(frozen=True)
class RadialProfile:
    """Discretised profile on a uniform grid over [0, pi].

    ``n`` is the winding count: f(0) = 0 and f(pi) = n*pi exactly.  The
    grid has N = len(rs) - 1 cells with N >= 100.
    """

    n: int
    rs: np.ndarray
    fs: np.ndarray

    def __post_init__(self) -> None:
        rs = np.asarray(self.rs, dtype=float)
        fs = np.asarray(self.fs, dtype=float)
        object.__setattr__(self, "rs", rs)
        object.__setattr__(self, "fs", fs)
        if self.n < 1:
            raise ValueError("winding count n must be >= 1")
        if rs.shape != fs.shape or rs.ndim != 1:
            raise ValueError("rs and fs must be 1-d arrays of equal length")
        if len(rs) < 101:
            raise ValueError("profile needs at least 100 cells")
        h = rs[1] - rs[0]
        if abs(rs[0]) > 0 or abs(rs[-1] - _PI) > 1e-12 or np.max(np.abs(np.diff(rs) - h)) > 1e-12:
            raise ValueError("grid must be uniform on [0, pi]")
        if fs[0] != 0.0 or fs[-1] != self.n * _PI:
            raise ValueError("endpoint values must be exactly 0 and n*pi")

    @property
    def N(self) -> int:
        return len(self.rs) - 1

    @property
    def h(self) -> float:
        return _PI / self.N

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.rs, self.fs)

    @cached_property
    def _spline_d(self):
        return self._spline.derivative()

    def value(self, r):
        return self._spline(r)

    def slope(self, r):
        return self._spline_d(r)

    def with_values(self, fs: np.ndarray) -> "RadialProfile":
        return RadialProfile(self.n, self.rs, np.asarray(fs, dtype=float))

    def resampled(self, N: int) -> "RadialProfile":
        rs = np.linspace(0.0, _PI, N + 1)
        fs = self._spline(rs)
        fs[0], fs[-1] = 0.0, self.n * _PI
        return RadialProfile(self.n, rs, fs)

    @classmethod
    def linear(cls, n: int, N: int) -> "RadialProfile":
        rs = np.linspace(0.0, _PI, N + 1)
        fs = n * rs
        fs[-1] = n * _PI
        return cls(n, rs, fs)

    @classmethod
    def from_function(cls, n: int, N: int, fn) -> "RadialProfile":
        """Sample ``fn`` on the uniform grid; endpoint values are pinned to
        0 and n*pi regardless of fn."""
        rs = np.linspace(0.0, _PI, N + 1)
        fs = np.asarray(fn(rs), dtype=float)
        fs[0], fs[-1] = 0.0, n * _PI
        return cls(n, rs, fs)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a radial minimisation."""

    profile: RadialProfile
    alpha: float
    energy: float
    residual_sup: float
    grad_norm: float
    degree: float
    degree_int: int
    r1: float | None
    r2: float | None
    iterations: int
    converged: bool
    history: tuple | None = field(default=None, repr=False)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _unit_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on (0, 1), weights summing to 1."""
    if order not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[order]


def _density(alpha: float, f: np.ndarray, fp: np.ndarray, r: np.ndarray) -> np.ndarray:
    s = np.sin(r)
    return (2.0 + fp * fp + (np.sin(f) / s) ** 2) ** alpha * s


def radial_energy(profile: RadialProfile, alpha: float, *, order: int = 6) -> float:
    """Energy I(f) by composite per-cell Gauss-Legendre with cubic-spline
    reconstruction of f and f'."""
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    t, w = _unit_rule(order)
    h = profile.h
    xg = profile.rs[:-1, None] + h * t[None, :]
    f = profile.value(xg)
    fp = profile.slope(xg)
    return _PI * h * float(np.sum(w[None, :] * _density(alpha, f, fp, xg)))


def radial_energy_between(profile: RadialProfile, alpha: float,
                          a: float, b: float, *, order: int = 8) -> float:
    """Energy of the restriction to polar angles in [a, b], integrated on
    panels aligned with the profile grid so that adjacent windows add up
    to the total without seam error."""
    if not 0.0 <= a <= b <= _PI:
        raise ValueError("window must satisfy 0 <= a <= b <= pi")
    cuts = profile.rs[(profile.rs > a) & (profile.rs < b)]
    edges = np.concatenate(([a], cuts, [b]))
    t, w = _unit_rule(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    xg = lo + (hi - lo) * t[None, :]
    f = profile.value(xg)
    fp = profile.slope(xg)
    vals = w[None, :] * _density(alpha, f, fp, xg) * (hi - lo)
    return _PI * float(np.sum(vals))


def _profile_degree(profile: RadialProfile, *, order: int = 6) -> float:
    """Degree (1/2) int_0^pi sin(f) f' dr of the equivariant map."""
    t, w = _unit_rule(order)
    h = profile.h
    xg = profile.rs[:-1, None] + h * t[None, :]
    integrand = np.sin(profile.value(xg)) * profile.slope(xg)
    return 0.5 * h * float(np.sum(w[None, :] * integrand))


def radial_residual(profile: RadialProfile, alpha: float) -> np.ndarray:
    """Finite-difference evaluation of the critical-profile equation at the
    interior nodes r in [h, pi - h].

    Uses fourth-order central stencils for f' and f''; the stencil values
    beyond the endpoints come from the odd reflections f(-r) = -f(r) and
    f(pi + s) = 2 n pi - f(pi - s) that every regular profile satisfies.
    Lower-order differences are too blunt here: the cot(r) coefficient
    turns their O(h^2) slope error into an O(h) boundary artefact that
    swamps the residual of steep solutions.
    """
    fs, rs, h = profile.fs, profile.rs, profile.h
    top = 2.0 * profile.n * _PI
    ext = np.concatenate(([-fs[2], -fs[1]], fs, [top - fs[-2], top - fs[-3]]))
    f = fs[1:-1]
    r = rs[1:-1]
    i = np.arange(1, len(fs) - 1) + 2  # index of f_i inside ext
    fp = (-ext[i + 2] + 8.0 * ext[i + 1] - 8.0 * ext[i - 1] + ext[i - 2]) / (12.0 * h)
    fpp = (-ext[i + 2] + 16.0 * ext[i + 1] - 30.0 * ext[i]
           + 16.0 * ext[i - 1] - ext[i - 2]) / (12.0 * h * h)
    s, c = np.sin(r), np.cos(r)
    sf, cf = np.sin(f), np.cos(f)
    W = fp * fp + (sf / s) ** 2
    Wp = 2.0 * fp * fpp + 2.0 * sf * cf * fp / (s * s) - 2.0 * sf * sf * c / (s ** 3)
    return fpp + (c / s) * fp - sf * cf / (s * s) + (alpha - 1.0) * fp * Wp / (2.0 + W)


def _cubic_basis(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange cubics on nodes (-1, 0, 1, 2) and their derivatives,
    evaluated at points t in (0, 1); shape (4, len(t))."""
    b = np.stack([
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t * t - 1.0) * (t - 2.0) / 2.0,
        -(t * t + t) * (t - 2.0) / 2.0,
        (t ** 3 - t) / 6.0,
    ])
    bp = np.stack([
        -(3.0 * t * t - 6.0 * t + 2.0) / 6.0,
        (3.0 * t * t - 4.0 * t - 1.0) / 2.0,
        -(3.0 * t * t - 2.0 * t - 2.0) / 2.0,
        (3.0 * t * t - 1.0) / 6.0,
    ])
    return b, bp


class _DiscreteEnergy:
    """Cell-based discretisation of I(f): per-cell Gauss quadrature of a
    local cubic reconstruction through the four nodes around each cell
    (ghost values beyond the endpoints come from the odd reflections the
    regular profiles satisfy).  Value, gradient and Hessian are exact
    derivatives of one another, which makes the gradient stopping rule
    trustworthy; the Hessian is seven-banded, so Newton steps cost O(N).
    """

    def __init__(self, alpha: float, n: int, N: int, *, order: int = 4):
        self.alpha = alpha
        self.n = n
        self.N = N
        self.h = _PI / N
        t, w = _unit_rule(order)
        self.w = w
        self.B, self.Bp = _cubic_basis(t)  # (4, G)
        rs = np.linspace(0.0, _PI, N + 1)
        self.rs = rs
        self.xg = rs[:-1, None] + self.h * t[None, :]
        self.sin_xg = np.sin(self.xg)
        self.inv_sin2 = 1.0 / (self.sin_xg * self.sin_xg)
        self._offsets = np.arange(4) - 1  # stencil nodes per cell: i-1 .. i+2

    def _extended(self, fs: np.ndarray) -> np.ndarray:
        top = 2.0 * self.n * _PI
        return np.concatenate(([-fs[1]], fs, [top - fs[-2]]))

    def _windows(self, fs: np.ndarray) -> np.ndarray:
        fe = self._extended(fs)
        return np.lib.stride_tricks.sliding_window_view(fe, 4)  # (N, 4)

    def _fields(self, fs: np.ndarray):
        F = self._windows(fs)
        fc = F @ self.B          # (N, G)
        fp = (F @ self.Bp) / self.h
        sfc = np.sin(fc)
        W = fp * fp + sfc * sfc * self.inv_sin2
        return F, fc, fp, W

    def value_and_grad(self, fs: np.ndarray) -> tuple[float, np.ndarray]:
        alpha, h = self.alpha, self.h
        _, fc, fp, W = self._fields(fs)
        core = (2.0 + W) ** (alpha - 1.0)
        wgt = _PI * h * self.w[None, :] * self.sin_xg
        val = float(np.sum(wgt * core * (2.0 + W)))
        A = alpha * core * wgt  # (N, G)
        dW_dfc = np.sin(2.0 * fc) * self.inv_sin2
        # dval/d(node at stencil slot k) per cell: (N, 4)
        cell_grad = (A * 2.0 * fp) @ self.Bp.T / h + (A * dW_dfc) @ self.B.T
        grad_e = np.zeros(self.N + 3)
        for k in range(4):
            np.add.at(grad_e, np.arange(self.N) + k, cell_grad[:, k])
        grad = grad_e[1:-1].copy()
        grad[1] -= grad_e[0]      # ghost f(-h) = -f(h)
        grad[-2] -= grad_e[-1]    # ghost f(pi+h) = 2 n pi - f(pi-h)
        grad[0] = grad[-1] = 0.0
        return val, grad

    def hessian_interior(self, fs: np.ndarray):
        """Sparse Hessian over the interior unknowns fs[1:-1]; ghost nodes
        fold onto nodes 1 and N-1 with a sign flip, endpoint nodes drop."""
        from scipy.sparse import coo_matrix

        alpha, h, N = self.alpha, self.h, self.N
        _, fc, fp, W = self._fields(fs)
        core = (2.0 + W) ** (alpha - 1.0)
        wgt = _PI * h * self.w[None, :] * self.sin_xg
        p1 = alpha * core * wgt
        p2 = alpha * (alpha - 1.0) * (2.0 + W) ** (alpha - 2.0) * wgt
        dW_dfc = np.sin(2.0 * fc) * self.inv_sin2
        d2W_dfc = 2.0 * np.cos(2.0 * fc) * self.inv_sin2
        cells = np.arange(N)
        nodes = cells[:, None] + self._offsets[None, :]  # (N, 4) node ids
        sign = np.ones_like(nodes, dtype=float)
        mapped = nodes.copy()
        mapped[nodes == -1] = 1
        sign[nodes == -1] = -1.0
        mapped[nodes == N + 1] = N - 1
        sign[nodes == N + 1] = -1.0
        valid = (mapped >= 1) & (mapped <= N - 1)
        rows, cols, vals = [], [], []
        for k in range(4):
            dW_k = 2.0 * fp * self.Bp[k][None, :] / h + dW_dfc * self.B[k][None, :]
            for l in range(4):
                dW_l = 2.0 * fp * self.Bp[l][None, :] / h + dW_dfc * self.B[l][None, :]
                d2W = (2.0 * self.Bp[k][None, :] * self.Bp[l][None, :] / (h * h)
                       + d2W_dfc * self.B[k][None, :] * self.B[l][None, :])
                contrib = np.sum(p2 * dW_k * dW_l + p1 * d2W, axis=1)
                ok = valid[:, k] & valid[:, l]
                rows.append(mapped[ok, k] - 1)
                cols.append(mapped[ok, l] - 1)
                vals.append(contrib[ok] * sign[ok, k] * sign[ok, l])
        m = N - 1
        return coo_matrix((np.concatenate(vals),
                           (np.concatenate(rows), np.concatenate(cols))),
                          shape=(m, m)).tocsc()


def _newton_direction(disc: _DiscreteEnergy, fs: np.ndarray,
                      g: np.ndarray) -> np.ndarray:
    """Damped-Newton direction on the interior nodes from the banded
    Hessian; a Levenberg shift is added until the direction descends."""
    from scipy.sparse import identity
    from scipy.sparse.linalg import spsolve

    H = disc.hessian_interior(fs)
    base = float(np.max(np.abs(H.diagonal())))
    shift = 0.0
    eye = identity(H.shape[0], format="csc")
    for _ in range(40):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                d = spsolve(H + shift * eye, -g)
        except RuntimeError:
            d = None
        if d is not None and np.all(np.isfinite(d)) and float(np.dot(g, d)) < 0.0:
            return d
        shift = max(2.0 * shift, 1e-12 * base)
    return -g


def minimize_radial(alpha: float, n: int, N: int = 2000,
                    init: RadialProfile | None = None, *,
                    max_iters: int = 200_000,
                    tol_scale: float = 1e-8,
                    residual_tol: float = 1e-2,
                    gl_order: int = 4,
                    method: str = "newton",
                    track_history: bool = False) -> SolveResult:
    """Minimise I over profiles with fixed endpoints f(0) = 0, f(pi) = n*pi.

    Descends the interior nodal values with Armijo backtracking along
    damped-Newton directions by default (the discrete Hessian is banded,
    so a Newton step costs the same O(N) as a gradient); ``method`` can
    also select Polak-Ribiere conjugate gradient ("cg") or plain gradient
    descent ("gd").  The discrete gradient is analytic, and iteration
    stops when its sup-norm falls below ``tol_scale * h * max(1, I)``.
    ``converged`` additionally requires the independent finite-difference
    residual to come out below ``residual_tol``.  The construction needs
    alpha > 1: at alpha = 1 minimising sequences in the nontrivial classes
    concentrate and no minimiser exists.
    """
    if alpha <= 1.0:
        raise ValueError("minimize_radial requires alpha > 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if method not in ("newton", "cg", "gd"):
        raise ValueError("method must be one of 'newton', 'cg', 'gd'")
    if init is None:
        init = RadialProfile.linear(n, N)
    elif init.N != N or init.n != n:
        if init.n != n:
            raise ValueError("init profile has the wrong winding count")
        init = init.resampled(N)

    disc = _DiscreteEnergy(alpha, n, N, order=gl_order)
    fs = init.fs.copy()
    val, grad = disc.value_and_grad(fs)
    g = grad[1:-1]
    d = -g
    step = 1.0 / max(1.0, float(np.max(np.abs(g))))
    history = [val] if track_history else None
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        tol = tol_scale * disc.h * max(1.0, abs(val))
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= tol:
            converged = True
            break
        if method == "newton":
            d = _newton_direction(disc, fs, g)
            s0 = 1.0
        elif method == "cg":
            s0 = step * 2.5
        else:
            d = -g
            s0 = step * 2.5
        gd = float(np.dot(g, d))
        if gd >= 0.0:  # not a descent direction; restart on steepest descent
            d = -g
            gd = -float(np.dot(g, g))
        s = s0
        accepted = False
        for _ in range(60):
            trial = fs.copy()
            trial[1:-1] += s * d
            tval, tgrad = disc.value_and_grad(trial)
            if tval <= val + 1e-4 * s * gd:
                accepted = True
                break
            s *= 0.5
        if not accepted:
            break
        step = s
        g_new = tgrad[1:-1]
        if method == "cg":
            beta = max(0.0, float(np.dot(g_new, g_new - g) / np.dot(g, g)))
            d = -g_new + beta * d
        fs, val, g = trial, tval, g_new
        if track_history:
            history.append(val)

    final = init.with_values(fs)
    res = radial_residual(final, alpha)
    residual_sup = float(np.max(np.abs(res)))
    converged = converged and residual_sup <= residual_tol
    energy = radial_energy(final, alpha)
    deg = _profile_degree(final)
    r1 = r2 = None
    if n == 3:
        r1 = _first_crossing(final, _PI)
        r2 = _first_crossing(final, 2.0 * _PI, after=r1)
    return SolveResult(
        profile=final,
        alpha=alpha,
        energy=energy,
        residual_sup=residual_sup,
        grad_norm=float(np.max(np.abs(g))),
        degree=deg,
        degree_int=int(round(deg)),
        r1=r1,
        r2=r2,
        iterations=it,
        converged=converged,
        history=tuple(history) if track_history else None,
    )


def _first_crossing(profile: RadialProfile, level: float,
                    after: float | None = None) -> float | None:
    lo = after if after is not None else 0.0
    gs = profile.fs - level
    idx = np.nonzero((gs[:-1] < 0.0) & (gs[1:] >= 0.0) & (profile.rs[1:] > lo))[0]
    fn = lambda r: float(profile.value(r) - level)
    for i in idx:
        a, b = profile.rs[i], profile.rs[i + 1]
        if fn(a) == 0.0:
            return float(a)
        if fn(a) * fn(b) <= 0.0:
            return float(brentq(fn, a, b, xtol=1e-14))
    return None


def _series_coeff(alpha: float, a: float) -> float:
    """Cubic coefficient of the regular expansion f = a r + c r^3 + ...
    solving the critical-profile equation near r = 0."""
    beta = alpha - 1.0
    return (a * (1.0 - a * a) * (2.0 * (1.0 + a * a) - beta * a * a)
            / (24.0 * (1.0 + a * a + beta * a * a)))


def _shot(alpha: float, n: int, slope: float, eps: float,
          rtol: float, atol: float):
    beta = alpha - 1.0

    def rhs(r, y):
        f, p = y
        s, cs = math.sin(r), math.cos(r)
        sf, cf = math.sin(f), math.cos(f)
        q = sf / s
        W = p * p + q * q
        dW_rest = 2.0 * sf * cf * p / (s * s) - 2.0 * sf * sf * cs / (s ** 3)
        denom = 1.0 + 2.0 * beta * p * p / (2.0 + W)
        fpp = (-cs / s * p + sf * cf / (s * s) - beta * p * dW_rest / (2.0 + W)) / denom
        return (p, fpp)

    def blown(r, y):
        return (n + 3.0) * _PI - abs(y[0])

    blown.terminal = True
    c = _series_coeff(alpha, slope)
    y0 = (slope * eps + c * eps ** 3, slope + 3.0 * c * eps ** 2)
    sol = solve_ivp(rhs, (eps, _PI - eps), y0, method="DOP853",
                    rtol=rtol, atol=atol, events=blown, dense_output=True)
    return sol


def shoot_radial(alpha: float, n: int, slope0: float, *,
                 eps: float = 1e-6, num_nodes: int = 2001,
                 rtol: float = 1e-10, atol: float = 1e-12,
                 max_expand: int = 60) -> RadialProfile:
    """Construct a profile with f(pi) = n*pi by shooting from r = 0.

    ``slope0`` seeds a bracketing search over the initial slope; each shot
    starts at r = eps from the regular series f = a r + c r^3 with c fitted
    from the equation's leading balance.  Raises :class:`ShootFailedError`
    when shots blow up before the far endpoint and no bracket exists.
    """
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    if slope0 <= 0.0:
        raise ValueError("slope0 must be positive")
    target = n * _PI
    last_reached = 0.0

    def miss(a: float) -> float:
        nonlocal last_reached
        sol = _shot(alpha, n, a, eps, rtol, atol)
        last_reached = max(last_reached, float(sol.t[-1]))
        if sol.status != 0 or sol.t[-1] < _PI - eps:
            # blow-up: report a huge signed miss so bracketing can proceed
            return math.copysign(1e6, sol.y[0][-1] - target)
        f_end, p_end = sol.y[0][-1], sol.y[1][-1]
        return f_end + eps * p_end - target

    m0 = miss(slope0)
    lo_a = hi_a = slope0
    lo_m = hi_m = m0
    if m0 != 0.0:
        found = False
        for k in range(1, max_expand + 1):
            cand = slope0 * (1.3 ** k if m0 < 0.0 else 1.3 ** (-k))
            mc = miss(cand)
            if mc == 0.0 or mc * m0 < 0.0:
                lo_a, hi_a = min(slope0, cand), max(slope0, cand)
                lo_m, hi_m = (m0, mc) if lo_a == slope0 else (mc, m0)
                found = True
                break
        if not found:
            raise ShootFailedError(
                f"no slope bracket around {slope0:g}; furthest shot reached "
                f"r = {last_reached:.6f}", last_reached)
        if lo_m != 0.0 and hi_m != 0.0:
            slope0 = brentq(miss, lo_a, hi_a, xtol=1e-13, rtol=1e-15)
        else:
            slope0 = lo_a if lo_m == 0.0 else hi_a

    sol = _shot(alpha, n, slope0, eps, rtol, atol)
    if sol.status != 0 or sol.t[-1] < _PI - eps:
        raise ShootFailedError("matched shot failed to reach the endpoint",
                               float(sol.t[-1]))
    rs = np.linspace(0.0, _PI, num_nodes)
    fs = np.empty_like(rs)
    inner = (rs >= eps) & (rs <= _PI - eps)
    fs[inner] = sol.sol(rs[inner])[0]
    c = _series_coeff(alpha, slope0)
    small = rs < eps
    fs[small] = slope0 * rs[small] + c * rs[small] ** 3
    fs[rs > _PI - eps] = target
    fs[0], fs[-1] = 0.0, target
    return RadialProfile(n, rs, fs)


def annulus_split(result: SolveResult) -> tuple[float, float, float]:
    """Split the energy of a threefold-winding solution into the geodesic
    disc about the north pole where f climbs to pi, the annulus where it
    climbs to 2 pi, and the remaining cap."""
    if result.profile.n != 3:
        raise SplitUnavailableError("split is defined for winding count 3")
    if not result.converged:
        raise SplitUnavailableError("solve did not converge")
    if result.r1 is None or result.r2 is None:
        raise SplitUnavailableError("profile lacks the pi and 2 pi crossings")
    p, a = result.profile, result.alpha
    disc = radial_energy_between(p, a, 0.0, result.r1)
    annulus = radial_energy_between(p, a, result.r1, result.r2)
    cap = radial_energy_between(p, a, result.r2, _PI)
    return disc, annulus, cap


def save_profile(profile: RadialProfile, path) -> None:
    """Two-column text export (r, f(r))."""
    np.savetxt(path, np.column_stack([profile.rs, profile.fs]), fmt="%.17g")


def load_profile(path, n: int | None = None) -> RadialProfile:
    data = np.loadtxt(path)
    rs, fs = data[:, 0], data[:, 1]
    if n is None:
        n = int(round(fs[-1] / _PI))
    if abs(fs[-1] - n * _PI) > 1e-9 or abs(fs[0]) > 1e-9:
        raise ValueError("file endpoints are not compatible with f(0)=0, f(pi)=n*pi")
    fs[0], fs[-1] = 0.0, n * _PI
    return RadialProfile(n, rs, fs)
