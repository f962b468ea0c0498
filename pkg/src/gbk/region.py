"""The region W_c of an S-orthogonal pair and the functions living on it.

Given an S-orthogonal pair (P, Q) the S-map sends a plane S to
``(x1, x2) = (w(S, P), w(S, Q)) = (r cos theta, r sin theta)``.  ``W_c`` is the
set where ``r > c`` and the S-map avoids the radius ``{(a, 0): a <= 0}``.

On that region this module provides

* ``F = theta - arccos((c + delta) / r)``, whose level set ``F = t`` is the
  level set ``w(., P_t) = c + delta``;
* the cutoff profile ``phi`` and the family ``H(., t)`` built from the implicit
  root ``H~`` of ``Psi(S, t, u) = 0``;
* the diffeomorphism ``W_0 -> (-pi, pi) x R^(nm-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy import optimize
from scipy.interpolate import CubicHermiteSpline

from .errors import DomainError, InvalidInputError, NumericError, PreconditionError
from .grassmann import (
    GrassmannPoint,
    SOrthogonalPair,
    chart_coordinates,
    chart_point,
    polar_from_smap,
    s_map,
    w_function,
)


@dataclass(frozen=True, eq=False)
class RegionSpec:
    """S-orthogonal pair plus the parameters ``c``, ``delta`` and the closed
    interval ``theta_set`` of admissible angles."""

    pair: SOrthogonalPair
    c: float
    delta: float
    theta_set: tuple[float, float] = (-2.3, 2.3)

    def __post_init__(self):
        if not (0.0 <= self.c < 1.0):
            raise InvalidInputError(f"c = {self.c} must lie in [0, 1)")
        if not self.delta > 0.0:
            raise InvalidInputError(f"delta = {self.delta} must be positive")
        if self.c + 2.0 * self.delta > 1.0 + 1e-15:
            raise InvalidInputError(f"c + 2 delta = {self.c + 2 * self.delta} exceeds 1")
        lo, hi = (float(v) for v in self.theta_set)
        if not (-np.pi < lo <= hi < np.pi):
            raise InvalidInputError(f"theta_set [{lo}, {hi}] must be a closed interval in (-pi, pi)")
        object.__setattr__(self, "theta_set", (lo, hi))

    @classmethod
    def from_points(cls, p: GrassmannPoint, q: GrassmannPoint, c: float, delta: float,
                    theta_set=(-2.3, 2.3)) -> "RegionSpec":
        return cls(SOrthogonalPair.from_points(p, q), c, delta, tuple(theta_set))

    @property
    def level(self) -> float:
        """The common value ``c + delta`` of ``w(., P_t)`` on ``{F = t}``."""
        return self.c + self.delta

    @property
    def p(self) -> int:
        return min(self.pair.n, self.pair.m)

    def to_json(self) -> dict[str, Any]:
        return {
            "P": self.pair.P.to_json(),
            "Q": self.pair.Q.to_json(),
            "c": self.c,
            "delta": self.delta,
            "theta_set": list(self.theta_set),
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "RegionSpec":
        allowed = {"P", "Q", "c", "delta", "theta_set"}
        unknown = set(obj) - allowed
        if unknown:
            raise InvalidInputError(f"unknown region keys: {sorted(unknown)}")
        try:
            p = GrassmannPoint.from_json(obj["P"])
            q = GrassmannPoint.from_json(obj["Q"])
            c = float(obj["c"])
            delta = float(obj["delta"])
        except KeyError as exc:
            raise InvalidInputError(f"region record is missing {exc}") from exc
        theta_set = tuple(obj.get("theta_set", (-2.3, 2.3)))
        if len(theta_set) != 2:
            raise InvalidInputError("theta_set must have two entries")
        return cls.from_points(p, q, c, delta, theta_set)


@dataclass(frozen=True)
class RegionReport:
    inside: bool
    r: float
    theta: float
    on_deleted_radius: bool
    in_theta_set: bool


def in_region(s: GrassmannPoint, spec: RegionSpec) -> RegionReport:
    """Membership in ``W_c``; the deleted radius yields ``inside=False``."""
    x1, x2 = s_map(s, spec.pair)
    try:
        r, theta = polar_from_smap(x1, x2)
    except DomainError:
        return RegionReport(False, float(np.hypot(x1, x2)), float("nan"), True, False)
    lo, hi = spec.theta_set
    return RegionReport(r > spec.c, r, theta, False, lo <= theta <= hi)


def _polar(s: GrassmannPoint, spec: RegionSpec) -> tuple[float, float]:
    return polar_from_smap(*s_map(s, spec.pair))


def F_from_polar(r: float, theta: float, spec: RegionSpec) -> float:
    if r < spec.c + 2.0 * spec.delta - 1e-14:
        raise DomainError(f"r = {r:.6g} < c + 2 delta = {spec.c + 2 * spec.delta:.6g}")
    return float(theta - np.arccos(min(spec.level / r, 1.0)))


def F_value(s: GrassmannPoint, spec: RegionSpec) -> float:
    """``theta - arccos((c + delta) / r)``."""
    return F_from_polar(*_polar(s, spec), spec)


@dataclass(frozen=True)
class LevelCheck:
    t: float
    w_at_t: float
    residual: float


def check_level(s: GrassmannPoint, spec: RegionSpec) -> LevelCheck:
    """With ``t = F(S)``, compare ``w(S, P_t)`` against ``c + delta``."""
    t = F_value(s, spec)
    wt = w_function(s, spec.pair.point(t))
    return LevelCheck(t, wt, abs(wt - spec.level))


def transition_constants_for(level: float, p: int) -> tuple[float, float]:
    """``(p (level^(-2/p) - 1), sqrt(1 - level^2) / level)``."""
    if not (0.0 < level <= 1.0):
        raise InvalidInputError(f"level {level} must lie in (0, 1]")
    c2 = p * (level ** (-2.0 / p) - 1.0)
    c3 = np.sqrt(max(1.0 - level**2, 0.0)) / level
    return float(c2), float(c3)


def transition_constants(spec: RegionSpec) -> tuple[float, float]:
    return transition_constants_for(spec.level, spec.p)


@dataclass(frozen=True)
class LevelGradients:
    """Chart gradients at S of ``F`` and of ``-log w(., P_t)`` with ``t = F(S)``."""

    t: float
    grad_F: np.ndarray
    grad_neg_log_w: np.ndarray
    cosine: float
    ratio: float
    tan_angle: float


def level_gradients(s: GrassmannPoint, spec: RegionSpec, h: float = 1e-5) -> LevelGradients:
    """Central differences in the matrix chart centred at S (where the metric is
    the identity), so Euclidean cosines and norms are the Riemannian ones."""
    r, theta = _polar(s, spec)
    t = F_from_polar(r, theta, spec)
    pt = spec.pair.point(t)
    frame, comp = s.frame, s.complement
    n, m = s.n, s.m
    gF = np.zeros(n * m)
    gL = np.zeros(n * m)
    for k in range(n * m):
        dz = np.zeros(n * m)
        dz[k] = h
        vals_F = []
        vals_L = []
        for sign in (1.0, -1.0):
            sp = chart_point(frame, comp, (sign * dz).reshape(n, m))
            vals_F.append(F_value(sp, spec))
            vals_L.append(-np.log(w_function(sp, pt)))
        gF[k] = (vals_F[0] - vals_F[1]) / (2 * h)
        gL[k] = (vals_L[0] - vals_L[1]) / (2 * h)
    nF = np.linalg.norm(gF)
    nL = np.linalg.norm(gL)
    cosine = float(gF @ gL / (nF * nL))
    return LevelGradients(t, gF, gL, cosine, float(nL / nF), float(np.tan(theta - t)))


@dataclass(frozen=True)
class ThetaGradient:
    fd_norm2: float
    g_inv_11: float
    r: float


def theta_gradient(s: GrassmannPoint, spec: RegionSpec, h: float = 1e-6) -> ThetaGradient:
    """``|grad theta|^2`` at S two ways: finite differences of theta in the chart
    centred at ``P_theta(S)`` contracted with the inverse metric, and the entry
    ``g^{11,11} = (I + Z Z^T)_{11} (I + Z^T Z)_{11}``."""
    r, theta = _polar(s, spec)
    tangent, normal = spec.pair.adapted_frames(theta)
    Z = chart_coordinates(s, tangent, normal)
    n, m = Z.shape
    grad = np.zeros(n * m)
    for k in range(n * m):
        dz = np.zeros(n * m)
        dz[k] = h
        plus = chart_point(tangent, normal, Z + dz.reshape(n, m))
        minus = chart_point(tangent, normal, Z - dz.reshape(n, m))
        grad[k] = (_polar(plus, spec)[1] - _polar(minus, spec)[1]) / (2 * h)
    g_inv = np.kron(np.eye(n) + Z @ Z.T, np.eye(m) + Z.T @ Z)
    return ThetaGradient(float(grad @ g_inv @ grad), float(g_inv[0, 0]), r)


@dataclass(frozen=True)
class TargetCoordinates:
    phi1: float
    phi2: np.ndarray
    Z: np.ndarray

    @property
    def z11(self) -> float:
        return float(self.Z[0, 0])


def target_diffeo(s: GrassmannPoint, spec: RegionSpec, z11_tol: float = 1e-8) -> TargetCoordinates:
    """``S -> (theta, T(chi_theta(S)))`` with ``T(Z) = (det(I + Z Z^T)^(1/2) - 1) Z / |Z|``."""
    r, theta = _polar(s, spec)
    tangent, normal = spec.pair.adapted_frames(theta)
    Z = chart_coordinates(s, tangent, normal)
    if abs(Z[0, 0]) > z11_tol * max(1.0, np.abs(Z).max()):
        raise NumericError(f"Z_11 = {Z[0, 0]:.3e} does not vanish on the theta level set", Z=Z)
    nrm = np.linalg.norm(Z)
    if nrm == 0.0:
        phi2 = np.zeros(Z.size)
    else:
        scale = np.sqrt(np.linalg.det(np.eye(Z.shape[0]) + Z @ Z.T)) - 1.0
        phi2 = (scale / nrm) * Z.ravel()
    return TargetCoordinates(theta, phi2, Z)


# ---------------------------------------------------------------------------
# cutoff profile and the H family

@dataclass(frozen=True)
class HVariant:
    """Thresholds of one H family.

    ``plateau_end`` is where phi leaves 0, ``linear_start`` where phi becomes
    ``u - offset``; ``w_threshold`` is the value of ``w(., P_t)`` at ``H = 1``.
    """

    name: str
    c_min: float
    plateau_end: Any
    linear_start: Any
    offset: Any
    w_threshold: Any


GENERAL = HVariant(
    "general",
    1.0 / 3.0,
    plateau_end=lambda c: 11.0 / 12.0 - 0.75 * c,
    linear_start=lambda c: 0.75 - 0.25 * c,
    offset=lambda c: 5.0 / 6.0 - 0.5 * c,
    w_threshold=lambda c: 0.75 * c + 1.0 / 12.0,
)

# minimal, rank <= 2 case: same shape, thresholds shifted so that H <= 1 iff w >= 3c/4
RANK2 = HVariant(
    "rank2",
    0.0,
    plateau_end=lambda c: 1.0 - 0.75 * c,
    linear_start=lambda c: 1.0 - 0.25 * c,
    offset=lambda c: 1.0 - 0.5 * c,
    w_threshold=lambda c: 0.75 * c,
)

VARIANTS = {v.name: v for v in (GENERAL, RANK2)}


def bump(u, a: float, b: float):
    """``exp(-1 / (1 - s^2))`` with ``s`` the affine image of ``u`` in (-1, 1); zero outside."""
    u = np.asarray(u, dtype=float)
    s = (2.0 * u - a - b) / (b - a)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _cumulative_bump(grid: np.ndarray, a: float, b: float) -> np.ndarray:
    lo = grid[:-1, None]
    hi = grid[1:, None]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pieces = (half * bump(mid + half * _GL_X, a, b) * _GL_W).sum(axis=1)
    return np.concatenate([[0.0], np.cumsum(pieces)])


@dataclass(frozen=True, eq=False)
class PhiFunction:
    """Smooth nondecreasing profile: 0 up to ``a``, ``u - offset`` from ``b`` on.

    Sampled on ``samples + 1`` nodes of ``[a, b]`` with exact slopes and
    interpolated by cubic Hermite segments.
    """

    c: float
    beta: float
    variant: HVariant
    a: float
    b: float
    nodes: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    slopes: np.ndarray = field(repr=False)
    transition_integral: float
    _spline: CubicHermiteSpline = field(repr=False)

    @property
    def offset(self) -> float:
        """``lim (u - phi(u))`` as u grows."""
        return self.b - self.values[-1]

    def __call__(self, u):
        u_arr = np.asarray(u, dtype=float)
        if u_arr.ndim == 0:
            x = float(u_arr)
            if x <= self.a:
                return 0.0
            if x >= self.b:
                return float(self.values[-1] + (x - self.b))
            return float(self._spline(x))
        out = np.where(u_arr >= self.b, self.values[-1] + (u_arr - self.b), 0.0)
        mid = (u_arr > self.a) & (u_arr < self.b)
        out[mid] = self._spline(u_arr[mid])
        return out

    def derivative(self, u):
        u_arr = np.asarray(u, dtype=float)
        out = np.where(u_arr >= self.b, 1.0, 0.0)
        mid = (u_arr > self.a) & (u_arr < self.b)
        out = np.asarray(out, dtype=float)
        out[mid] = self._spline(u_arr[mid], 1)
        return out if out.ndim else float(out)

    def inverse(self, v: float) -> float:
        """Largest ``u`` with ``phi(u) <= v`` (``a`` for ``v = 0``)."""
        if v <= 0.0:
            return self.a
        top = self.values[-1]
        if v >= top:
            return float(self.b + (v - top))
        j = int(np.searchsorted(self.values, v, side="right")) - 1
        j = min(max(j, 0), len(self.nodes) - 2)
        lo, hi = self.nodes[j], self.nodes[j + 1]
        if self._spline(hi) <= v:
            return float(hi)
        return float(optimize.bisect(lambda x: float(self._spline(x)) - v, lo, hi,
                                     xtol=1e-15, maxiter=200))


def build_phi(c: float, variant: str | HVariant = "general", samples: int = 4096,
              beta_tol: float = 1e-10) -> PhiFunction:
    """Construct phi from the standard bump ``xi_1`` on ``(a, b)``.

    ``xi_2`` is the normalized running integral of ``xi_1``; the exponent ``beta``
    is found by bisection so that ``int_a^b xi_2^beta = b - offset``, and
    ``phi(u) = int_0^u xi_2^beta``.
    """
    var = VARIANTS[variant] if isinstance(variant, str) else variant
    if not (var.c_min < c < 1.0):
        raise InvalidInputError(f"c = {c} outside ({var.c_min:.6g}, 1) for the {var.name} variant")
    a, b = var.plateau_end(c), var.linear_start(c)
    target = b - var.offset(c)
    grid = np.linspace(a, b, 2 * samples + 1)  # nodes interleaved with midpoints
    cum = _cumulative_bump(grid, a, b)
    xi2 = np.clip(cum / cum[-1], 0.0, 1.0)
    h = (b - a) / samples

    def simpson_pieces(beta: float) -> np.ndarray:
        f = xi2**beta
        return h / 6.0 * (f[:-2:2] + 4.0 * f[1:-1:2] + f[2::2])

    def excess(log_beta: float) -> float:
        return float(simpson_pieces(np.exp(log_beta)).sum() - target)

    lo, hi = -30.0, 30.0
    if not (excess(lo) > 0.0 > excess(hi)):
        raise NumericError("exponent bracket does not enclose the target integral",
                           target=target, low=excess(lo), high=excess(hi))
    try:
        log_beta = optimize.bisect(excess, lo, hi, xtol=beta_tol, rtol=4 * np.finfo(float).eps,
                                   maxiter=200)
    except RuntimeError as exc:
        raise NumericError(f"exponent bisection did not converge: {exc}", target=target) from exc
    beta = float(np.exp(log_beta))
    pieces = simpson_pieces(beta)
    nodes = grid[::2]
    values = np.concatenate([[0.0], np.cumsum(pieces)])
    slopes = xi2[::2] ** beta
    spline = CubicHermiteSpline(nodes, values, slopes)
    for arr in (nodes, values, slopes):
        arr.setflags(write=False)
    return PhiFunction(c, beta, var, a, b, nodes, values, slopes, float(values[-1]), spline)


class HFamily:
    """``H~(S, t)`` and ``H(S, t)`` for a region and a profile.

    ``mu0`` rescales ``H = (exp(mu0 H~) - 1) / (exp(mu0 plateau_end) - 1)``.

    The sublevel property ``H <= 1 <=> w(S, P_t) >= threshold`` needs
    ``|theta - t| <= 3 pi / 2`` for all admissible angles: beyond that
    ``w(S, P_t) = r cos(theta - t)`` is positive again while the construction
    puts ``H~`` above the plateau.  ``strict=True`` therefore rejects regions
    whose ``theta_set`` is wider than ``3 pi / 2``.
    """

    def __init__(self, spec: RegionSpec, phi: PhiFunction, mu0: float = 1.0, strict: bool = True):
        if not mu0 > 0.0:
            raise InvalidInputError(f"mu0 = {mu0} must be positive")
        lo, hi = spec.theta_set
        if strict and hi - lo > 1.5 * np.pi:
            raise PreconditionError(
                f"theta_set width {hi - lo:.6g} exceeds 3 pi / 2; pass strict=False to allow it")
        if abs(phi.c - spec.c) > 1e-15:
            raise InvalidInputError(f"profile built for c = {phi.c}, region has c = {spec.c}")
        self.spec = spec
        self.phi = phi
        self.mu0 = float(mu0)

    @property
    def w_threshold(self) -> float:
        return self.phi.variant.w_threshold(self.spec.c)

    def psi(self, r: float, theta: float, t: float, u: float) -> float:
        ph = self.phi(u)
        shift = -ph if theta >= t else ph
        return r * np.cos(theta - t + shift) + u - ph - 1.0

    def bracket(self, theta: float, t: float) -> tuple[float, float]:
        d = abs(theta - t)
        m_s = 0.0 if d <= np.pi else self.phi.inverse(d - np.pi)
        return m_s, self.phi.inverse(d)

    def tilde_polar(self, r: float, theta: float, t: float) -> float:
        if r < self.spec.c - 1e-12:
            raise DomainError(f"r = {r:.6g} below c = {self.spec.c}")
        m_s, big_m = self.bracket(theta, t)
        lo_val = self.psi(r, theta, t, m_s)
        hi_val = self.psi(r, theta, t, big_m)
        if lo_val == 0.0:
            return m_s
        if not (lo_val < 0.0 < hi_val):
            raise NumericError("Psi does not change sign on [m_S, M_S]", r=r, theta=theta, t=t,
                               m_S=m_s, M_S=big_m, psi_low=lo_val, psi_high=hi_val)
        try:
            return float(optimize.bisect(lambda u: self.psi(r, theta, t, u), m_s, big_m,
                                         xtol=1e-12, maxiter=200))
        except RuntimeError as exc:
            raise NumericError(f"H~ bisection failed: {exc}", r=r, theta=theta, t=t) from exc

    def tilde(self, s: GrassmannPoint, t: float) -> float:
        return self.tilde_polar(*_polar(s, self.spec), t)

    def from_tilde(self, h_tilde: float) -> float:
        scale = np.expm1(self.mu0 * self.phi.a)
        return float(np.expm1(self.mu0 * h_tilde) / scale)

    def value(self, s: GrassmannPoint, t: float) -> float:
        return self.from_tilde(self.tilde(s, t))


def psi_value(s: GrassmannPoint, t: float, u: float, spec: RegionSpec, phi: PhiFunction) -> float:
    r, theta = _polar(s, spec)
    return HFamily(spec, phi).psi(r, theta, t, u)


def H_tilde(s: GrassmannPoint, t: float, spec: RegionSpec, phi: PhiFunction) -> float:
    return HFamily(spec, phi).tilde(s, t)


def H_value(s: GrassmannPoint, t: float, spec: RegionSpec, phi: PhiFunction, mu0: float = 1.0) -> float:
    return HFamily(spec, phi, mu0).value(s, t)


def sample_region(spec: RegionSpec, rng: np.random.Generator, count: int,
                  r_min: float | None = None, scale: float = 0.6,
                  max_tries: int = 100_000) -> list[GrassmannPoint]:
    """Random planes with ``r >= r_min`` (default ``c``) and ``theta`` in ``theta_set``,
    drawn as random chart perturbations of geodesic points ``P_s``."""
    r_min = spec.c if r_min is None else r_min
    lo, hi = spec.theta_set
    n, m = spec.pair.n, spec.pair.m
    out: list[GrassmannPoint] = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        s0 = rng.uniform(lo, hi)
        tangent, normal = spec.pair.adapted_frames(s0)
        Z = rng.standard_normal((n, m)) * scale * rng.uniform(0.0, 1.0)
        cand = chart_point(tangent, normal, Z)
        rep = in_region(cand, spec)
        if rep.on_deleted_radius or not rep.in_theta_set or rep.r < r_min:
            continue
        out.append(cand)
    if len(out) < count:
        raise NumericError(f"only {len(out)} of {count} region samples found", r_min=r_min)
    return out
