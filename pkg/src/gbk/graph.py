"""Graphs ``M = (x, f(x))`` in R^(n+m): induced geometry, Gauss map and checks.

Conventions: ``Df`` is the ``n x m`` matrix with entries ``d f^alpha / d x^i``,
second derivatives are stored as an ``(m, n, n)`` array, and the mean
curvature is the trace ``H^alpha = sum_i h_{alpha,ii}`` (no 1/n factor).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.stats import qmc

from .errors import InvalidInputError, NumericError, NumericWarning, PreconditionError
from .grassmann import GrassmannPoint
from .multivector import inner, wedge

Array = np.ndarray


def _sym_inv_sqrt(g: Array) -> Array:
    vals, vecs = np.linalg.eigh(g)
    return (vecs / np.sqrt(vals)) @ vecs.T


# ---------------------------------------------------------------------------
# finite-difference stencils (fourth order)

def fd_gradient(func: Callable[[Array], Array], x: Array, h: float) -> Array:
    """``(n, ...)`` array of first derivatives of ``func`` at ``x``."""
    x = np.asarray(x, dtype=float)
    rows = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        rows.append((-func(x + 2 * e) + 8 * func(x + e) - 8 * func(x - e) + func(x - 2 * e)) / (12 * h))
    return np.array(rows)


def fd_hessian(func: Callable[[Array], Array], x: Array, h: float) -> Array:
    """``(n, n, ...)`` array of second derivatives of ``func`` at ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.size
    f0 = np.asarray(func(x), dtype=float)
    out = np.zeros((n, n) + f0.shape)
    steps = [(-2, -1.0), (-1, 8.0), (1, -8.0), (2, 1.0)]  # d/dx = sum(w f(x - k h)) / 12h
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        out[i, i] = (-func(x + 2 * ei) + 16 * func(x + ei) - 30 * f0
                     + 16 * func(x - ei) - func(x - 2 * ei)) / (12 * h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            acc = np.zeros_like(f0)
            for ki, wi in steps:
                for kj, wj in steps:
                    acc = acc + wi * wj * func(x - ki * ei - kj * ej)
            out[i, j] = out[j, i] = acc / (144 * h * h)
    return out


# ---------------------------------------------------------------------------
# graph maps

@dataclass(frozen=True, eq=False)
class GraphMap:
    """A map ``f: R^n -> R^m`` with optional analytic derivatives.

    Without ``jac``/``hess`` the derivatives come from fourth-order central
    differences with steps ``h_first`` and ``h_second``.
    """

    n: int
    m: int
    func: Callable[[Array], Array]
    jac: Callable[[Array], Array] | None = None
    hess: Callable[[Array], Array] | None = None
    name: str = "graph"
    h_first: float = 1e-4
    h_second: float = 1e-3
    domain: Callable[[Array], bool] | None = field(default=None, repr=False)
    critical_points: tuple = ()

    @property
    def mode(self) -> str:
        return "analytic" if self.jac is not None and self.hess is not None else "finite-difference"

    def _point(self, x) -> Array:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.n:
            raise InvalidInputError(f"point has {x.size} coordinates, {self.name} expects {self.n}")
        return x

    def eval(self, x) -> Array:
        return np.asarray(self.func(self._point(x)), dtype=float).reshape(self.m)

    def jacobian(self, x) -> Array:
        x = self._point(x)
        if self.jac is not None:
            return np.asarray(self.jac(x), dtype=float).reshape(self.n, self.m)
        return fd_gradient(self.eval, x, self.h_first)

    def hessians(self, x) -> Array:
        x = self._point(x)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float).reshape(self.m, self.n, self.n)
        return np.moveaxis(fd_hessian(self.eval, x, self.h_second), 2, 0)

    def finite_difference(self, h_first: float | None = None, h_second: float | None = None) -> "GraphMap":
        """The same map with derivatives taken by finite differences."""
        return replace(self, jac=None, hess=None,
                       h_first=self.h_first if h_first is None else h_first,
                       h_second=self.h_second if h_second is None else h_second)

    def in_domain(self, x) -> bool:
        return True if self.domain is None else bool(self.domain(self._point(x)))

    @classmethod
    def from_table(cls, points: Array, values: Array, name: str = "table", **kwargs) -> "GraphMap":
        """Finite-difference graph interpolating samples on a rectilinear grid.

        ``points`` holds every grid node (any order); values are ``(N, m)``.
        Cubic interpolation is used so second differences remain meaningful.
        """
        points = np.asarray(points, dtype=float)
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if values.shape[0] != points.shape[0]:
            values = values.T
        if points.ndim != 2 or values.shape[0] != points.shape[0]:
            raise InvalidInputError("table needs one row of values per sample point")
        n, m = points.shape[1], values.shape[1]
        axes = [np.unique(points[:, i]) for i in range(n)]
        shape = tuple(len(a) for a in axes)
        if int(np.prod(shape)) != points.shape[0]:
            raise InvalidInputError("table samples do not form a full rectilinear grid")
        grid = np.full(shape + (m,), np.nan)
        idx = tuple(np.searchsorted(axes[i], points[:, i]) for i in range(n))
        grid[idx] = values
        method = "cubic" if min(shape) >= 4 else "linear"
        interp = RegularGridInterpolator(axes, grid, method=method)
        lo = np.array([a[0] for a in axes])
        hi = np.array([a[-1] for a in axes])

        def func(x):
            return interp(x[None, :])[0]

        def domain(x):
            return bool(np.all(x >= lo) and np.all(x <= hi))

        kwargs.setdefault("h_first", 1e-3)
        kwargs.setdefault("h_second", 1e-2)
        return cls(n, m, func, name=name, domain=domain, **kwargs)


# ---------------------------------------------------------------------------
# submanifold geometry from a parametrization

@dataclass(frozen=True)
class SubmanifoldGeometry:
    """First and second order data of a parametrized submanifold at a point.

    ``h[alpha, i, j]`` is taken in the orthonormal tangent frame.
    """

    g: Array
    g_inv: Array
    sqrt_det_g: float
    tangent_frame: Array
    normal_frame: Array
    h: Array
    H: Array
    B_norm2: float

    @property
    def H_norm(self) -> float:
        return float(np.linalg.norm(self.H))


def submanifold_geometry(d1: Array, d2: Array, normal_frame: Array | None = None) -> SubmanifoldGeometry:
    """Geometry of an immersion from its derivatives.

    ``d1`` is ``(k, N)`` (rows are coordinate tangent vectors) and ``d2`` is
    ``(k, k, N)``.  If no normal frame is supplied one is taken from the SVD.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    if not (np.all(np.isfinite(d1)) and np.all(np.isfinite(d2))):
        raise NumericError("non-finite derivatives", d1=d1, d2=d2)
    g = d1 @ d1.T
    g_inv = np.linalg.inv(g)
    root = _sym_inv_sqrt(g)
    tangent = root @ d1
    if normal_frame is None:
        _, _, vt = np.linalg.svd(d1, full_matrices=True)
        normal_frame = vt[d1.shape[0]:]
    normal = np.asarray(normal_frame, dtype=float)
    h_coord = np.einsum("ijN,aN->aij", d2, normal)
    h = np.einsum("ik,akl,lj->aij", root, h_coord, root)
    H = np.einsum("aii->a", h)
    return SubmanifoldGeometry(g, g_inv, float(np.sqrt(np.linalg.det(g))), tangent, normal, h, H,
                               float(np.sum(h * h)))


@dataclass(frozen=True)
class PointGeometry(SubmanifoldGeometry):
    x: Array = None
    Df: Array = None

    @property
    def delta_f(self) -> float:
        """``Delta_f = det(I + Df Df^T)^(1/2)``."""
        return self.sqrt_det_g


def _graph_derivatives(Df: Array, hess: Array) -> tuple[Array, Array]:
    n, m = Df.shape
    d1 = np.hstack([np.eye(n), Df])
    d2 = np.zeros((n, n, n + m))
    d2[:, :, n:] = np.moveaxis(hess, 0, 2)
    return d1, d2


def geometry_at(f: GraphMap, x) -> PointGeometry:
    """Induced metric, frames, second fundamental form and mean curvature at ``(x, f(x))``.

    The normal frame is ``(I + Df^T Df)^(-1/2) [-Df^T | I]``.
    """
    x = f._point(x)
    Df = f.jacobian(x)
    hess = f.hessians(x)
    if not (np.all(np.isfinite(Df)) and np.all(np.isfinite(hess))):
        raise NumericError(f"non-finite derivatives of {f.name} at {x}", x=x)
    n, m = Df.shape
    normal = _sym_inv_sqrt(np.eye(m) + Df.T @ Df) @ np.hstack([-Df.T, np.eye(m)])
    d1, d2 = _graph_derivatives(Df, hess)
    base = submanifold_geometry(d1, d2, normal)
    return PointGeometry(**base.__dict__, x=x, Df=Df)


def gauss_map(f: GraphMap, x) -> GrassmannPoint:
    """Tangent plane of the graph at ``(x, f(x))`` as a point of G(n, m)."""
    geom = geometry_at(f, x)
    return GrassmannPoint.from_basis(geom.tangent_frame, f.m)


def _reference_frame(n: int, m: int, reference) -> Array:
    if reference is None:
        return np.eye(n, n + m)
    frame = reference.frame if isinstance(reference, GrassmannPoint) else np.asarray(reference, dtype=float)
    if frame.shape != (n, n + m):
        raise InvalidInputError(f"reference frame must be {n}x{n + m}")
    return frame


def w_field(f: GraphMap, reference=None) -> Callable[[Array], float]:
    """``x -> w(gamma(x), P0)``; ``P0`` defaults to the coordinate n-plane."""
    e0 = _reference_frame(f.n, f.m, reference)

    def field_(x):
        Df = f.jacobian(x)
        t = np.hstack([np.eye(f.n), Df])
        return float(np.linalg.det(t @ e0.T) / np.sqrt(np.linalg.det(t @ t.T)))

    return field_


def graph_metric(f: GraphMap) -> Callable[[Array], Array]:
    def metric(x):
        Df = f.jacobian(x)
        return np.eye(f.n) + Df @ Df.T

    return metric


def coordinate_laplacian(metric: Callable[[Array], Array], u: Callable[[Array], float], x, h: float) -> float:
    """``(1/sqrt g) d_i (sqrt g g^{ij} d_j u)`` by nested central differences (second order)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    eye = np.eye(n) * (h / 2)

    def flux(y, i):
        g = metric(y)
        grad = np.array([(u(y + eye[j]) - u(y - eye[j])) / h for j in range(n)])
        return np.sqrt(np.linalg.det(g)) * (np.linalg.solve(g, grad))[i]

    total = sum((flux(x + eye[i], i) - flux(x - eye[i], i)) / h for i in range(n))
    return float(total / np.sqrt(np.linalg.det(metric(x))))


def laplace_beltrami(f: GraphMap, u: Callable[[Array], float], x, h: float = 1e-3,
                     check: bool = False, rtol: float = 1e-3) -> float:
    """Laplace-Beltrami operator of the induced metric applied to a scalar field.

    With ``check=True`` the value at step ``2h`` is also computed; a relative
    disagreement above ``rtol`` raises a :class:`NumericWarning` (usually a
    step so small that cancellation dominates).
    """
    x = f._point(x)
    value = coordinate_laplacian(graph_metric(f), u, x, h)
    if check:
        coarse = coordinate_laplacian(graph_metric(f), u, x, 2 * h)
        if abs(value - coarse) > rtol * max(1.0, abs(value)):
            warnings.warn(f"Laplacian at step {h} disagrees with step {2 * h}: "
                          f"{value:.6g} vs {coarse:.6g}", NumericWarning, stacklevel=2)
    return value


# ---------------------------------------------------------------------------
# identities for w = w(gamma, P0)

def _replaced_pairing(tangent: Array, e0_plucker, rows: dict[int, Array]) -> float:
    frame = tangent.copy()
    for j, vec in rows.items():
        frame[j] = vec
    return inner(wedge(frame), e0_plucker)


def _check_parallel(geom: PointGeometry, tol: float) -> None:
    if geom.H_norm > tol * (1.0 + np.sqrt(geom.B_norm2)):
        raise PreconditionError(f"|H| = {geom.H_norm:.3e}: the identity needs parallel mean curvature")


@dataclass(frozen=True)
class IdentityCheck:
    lhs: Array
    rhs: Array
    scale: float
    residual: float


def _relative(lhs, rhs, scale) -> float:
    diff = float(np.max(np.abs(np.atleast_1d(lhs) - np.atleast_1d(rhs))))
    return diff / scale if scale > 1e-12 else diff


def verify_dw(f: GraphMap, x, reference=None, h: float = 1e-4) -> IdentityCheck:
    """Directional derivatives ``e_i(w)`` against ``sum h_{a,ij} <e_{ja}, A>``.

    Residuals are relative to the sum of absolute terms on the right.
    """
    geom = geometry_at(f, x)
    n, m = f.n, f.m
    e0 = _reference_frame(n, m, reference)
    A = wedge(e0)
    wf = w_field(f, e0)
    dirs = _sym_inv_sqrt(geom.g)  # coordinate components of e_i
    lhs = np.zeros(n)
    rhs = np.zeros(n)
    scale = 0.0
    pair = np.array([[_replaced_pairing(geom.tangent_frame, A, {j: geom.normal_frame[a]})
                      for a in range(m)] for j in range(n)])
    for i in range(n):
        v = dirs[i] * h
        lhs[i] = (-wf(geom.x + 2 * v) + 8 * wf(geom.x + v) - 8 * wf(geom.x - v) + wf(geom.x - 2 * v)) / (12 * h)
        terms = geom.h[:, i, :].T * pair  # (j, a)
        rhs[i] = terms.sum()
        scale = max(scale, float(np.abs(terms).sum()))
    return IdentityCheck(lhs, rhs, scale, _relative(lhs, rhs, scale))


def delta_w_rhs(geom: PointGeometry, e0: Array) -> tuple[float, float]:
    """Right side ``-|B|^2 w + sum h_{a,ij} h_{b,ik} <e_{ja,kb}, A>`` and its absolute scale."""
    n, m = geom.h.shape[1], geom.h.shape[0]
    A = wedge(e0)
    w = inner(wedge(geom.tangent_frame), A)
    total = -geom.B_norm2 * w
    scale = abs(total)
    nu = geom.normal_frame
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            for j in range(n):
                for k in range(n):
                    if j == k:
                        continue
                    coeff = float(geom.h[a, :, j] @ geom.h[b, :, k])
                    if coeff == 0.0:
                        continue
                    term = coeff * _replaced_pairing(geom.tangent_frame, A, {j: nu[a], k: nu[b]})
                    total += term
                    scale += abs(term)
    return float(total), float(scale)


def verify_delta_w(f: GraphMap, x, reference=None, h: float = 1e-3, h_tol: float = 1e-6) -> IdentityCheck:
    """Finite-difference ``Delta w`` against the second-order identity for ``w``.

    Raises :class:`PreconditionError` unless ``|H|`` vanishes at ``x``.
    """
    geom = geometry_at(f, x)
    _check_parallel(geom, h_tol)
    e0 = _reference_frame(f.n, f.m, reference)
    lhs = laplace_beltrami(f, w_field(f, e0), geom.x, h)
    rhs, scale = delta_w_rhs(geom, e0)
    return IdentityCheck(np.array([lhs]), np.array([rhs]), scale, _relative(lhs, rhs, scale))


@dataclass(frozen=True)
class Convergence:
    steps: tuple[float, ...]
    errors: tuple[float, ...]
    orders: tuple[float, ...]

    @property
    def order(self) -> float:
        return min(self.orders)


def delta_w_convergence(f: GraphMap, x, reference=None, h0: float = 1e-2, levels: int = 3) -> Convergence:
    """Errors of the finite-difference ``Delta w`` under step halving and the observed orders."""
    geom = geometry_at(f, x)
    e0 = _reference_frame(f.n, f.m, reference)
    rhs, _ = delta_w_rhs(geom, e0)
    wf = w_field(f, e0)
    steps = tuple(h0 / 2**k for k in range(levels))
    errors = tuple(abs(laplace_beltrami(f, wf, geom.x, h) - rhs) for h in steps)
    orders = tuple(float(np.log2(errors[k] / errors[k + 1])) if errors[k + 1] > 0 else float("inf")
                   for k in range(levels - 1))
    return Convergence(steps, errors, orders)


def gauss_rank(geom: SubmanifoldGeometry, rel: float = 1e-6) -> int:
    """Numerical rank of the Gauss-map differential ``e_i -> (h_{a,ij})_{j,a}``."""
    k = geom.h.shape[1]
    mat = np.transpose(geom.h, (1, 2, 0)).reshape(k, -1)
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel * sv[0]))


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    ok: bool
    rank: int


def verify_rank_inequality(f: GraphMap, x, reference=None, h: float = 1e-3, h_tol: float = 1e-6) -> InequalityCheck:
    """``Delta log w <= -|B|^2`` for minimal graphs whose Gauss map has rank at most 2."""
    geom = geometry_at(f, x)
    _check_parallel(geom, h_tol)
    rank = gauss_rank(geom)
    if rank > 2:
        raise PreconditionError(f"Gauss map has rank {rank} > 2 at {geom.x}")
    wf = w_field(f, reference)
    if wf(geom.x) <= 0.0:
        raise PreconditionError("w <= 0 at the point")
    lhs = laplace_beltrami(f, lambda y: np.log(wf(y)), geom.x, h)
    rhs = -geom.B_norm2
    return InequalityCheck(lhs, rhs, bool(lhs <= rhs + 1e-3 * (1.0 + abs(rhs))), rank)


@dataclass(frozen=True)
class Subhar3Check:
    lhs: float
    B_norm2: float
    c1_estimate: float
    ok: bool


def verify_subhar3(f: GraphMap, x, delta: float, reference=None, h: float = 1e-3,
                   h_tol: float = 1e-6) -> Subhar3Check:
    """Sign of ``Delta log w - |grad log w|^2`` where ``w >= 1/3 + delta``.

    ``c1_estimate = -lhs / |B|^2`` must come out positive; the constant itself
    is not explicit, so only the sign is asserted.
    """
    geom = geometry_at(f, x)
    _check_parallel(geom, h_tol)
    wf = w_field(f, reference)
    w0 = wf(geom.x)
    if w0 < 1.0 / 3.0 + delta:
        raise PreconditionError(f"w = {w0:.6g} below 1/3 + delta = {1 / 3 + delta:.6g}")

    def logw(y):
        return np.log(wf(y))

    lap = laplace_beltrami(f, logw, geom.x, h)
    grad = fd_gradient(logw, geom.x, h)
    lhs = float(lap - grad @ geom.g_inv @ grad)
    b2 = geom.B_norm2
    if b2 > 1e-12:
        c1 = -lhs / b2
        ok = bool(lhs <= 0.0 and c1 > 0.0)
    else:
        c1 = float("nan")
        ok = bool(abs(lhs) <= 1e-6)
    return Subhar3Check(lhs, b2, c1, ok)


def dvp_constants(lambda_min: float, mu_max: float, n: int) -> tuple[float, float]:
    """``K1 = (4 mu / lambda)^n`` and ``K2 = 4 pi^-2 (mu / lambda)^(n+2)``."""
    if not (0.0 < lambda_min <= mu_max):
        raise InvalidInputError(f"need 0 < lambda <= mu, got {lambda_min}, {mu_max}")
    ratio = mu_max / lambda_min
    return float((4.0 * ratio) ** n), float(4.0 / np.pi**2 * ratio ** (n + 2))


# ---------------------------------------------------------------------------
# Bernstein-type hypotheses

def box_samples(n: int, count: int, lo=-2.0, hi=2.0, exclude_radius: float = 0.1,
                domain: Callable[[Array], bool] | None = None) -> Array:
    """Deterministic Halton points in the box ``[lo, hi]^n`` outside a ball around 0."""
    lo_v = np.broadcast_to(np.asarray(lo, dtype=float), (n,))
    hi_v = np.broadcast_to(np.asarray(hi, dtype=float), (n,))
    sampler = qmc.Halton(d=n, scramble=False)
    sampler.fast_forward(1)  # the first Halton point is the corner
    out: list[Array] = []
    for _ in range(200):
        pts = qmc.scale(sampler.random(max(count, 16)), lo_v, hi_v)
        for p in pts:
            if np.linalg.norm(p) <= exclude_radius:
                continue
            if domain is not None and not domain(p):
                continue
            out.append(p)
            if len(out) == count:
                return np.array(out)
    raise NumericError(f"could only place {len(out)} of {count} samples in the domain")


@dataclass(frozen=True)
class BernsteinSample:
    index: int
    x: Array
    delta_f: float
    slope: float
    required_beta1: float
    margin_beta0: float
    margin_beta1: float
    w_p: float
    w_q: float

    @property
    def ok(self) -> bool:
        return self.margin_beta0 >= 0.0 and self.margin_beta1 >= 0.0


@dataclass(frozen=True)
class BernsteinReport:
    beta0: float
    beta1: float
    alpha: int
    i: int
    samples: list[BernsteinSample]
    min_admissible_beta1: float
    beta1_required: float
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def violations(self) -> list[BernsteinSample]:
        return [s for s in self.samples if not s.ok]

    @property
    def min_margin(self) -> float:
        return min(min(s.margin_beta0, s.margin_beta1) for s in self.samples)

    @property
    def max_margin(self) -> float:
        return max(min(s.margin_beta0, s.margin_beta1) for s in self.samples)


def check_bernstein_hypotheses(f: GraphMap, points, beta0: float, beta1: float,
                               alpha: int = 1, i: int = 1) -> BernsteinReport:
    """Check ``Delta_f <= beta0`` and ``Delta_f <= beta1 (1 + (d f^alpha / d x^i)^2)^(1/2)``.

    ``alpha`` and ``i`` are 1-based.  Each sample also carries the S-map form
    ``(w(gamma, P), w(gamma, Q)) = (1, d_i f^alpha) / Delta_f``, and
    ``beta1^-2 <= w_p^2 + w_q^2`` is the slope condition.

    ``min_admissible_beta1`` is the smallest pointwise requirement
    ``Delta_f / (1 + slope^2)^(1/2)`` over the samples: no beta1 below it can
    hold anywhere sampled.  ``beta1_required`` is the largest, i.e. the least
    beta1 that holds at every sample.  The verdict is ``pass`` only if both
    conditions hold at all samples and ``beta1 < 3``.
    """
    if not (1 <= alpha <= f.m and 1 <= i <= f.n):
        raise InvalidInputError(f"alpha must lie in 1..{f.m} and i in 1..{f.n}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    samples = []
    for k, x in enumerate(pts):
        Df = f.jacobian(x)
        delta_f = float(np.sqrt(np.linalg.det(np.eye(f.n) + Df @ Df.T)))
        slope = float(Df[i - 1, alpha - 1])
        factor = np.sqrt(1.0 + slope**2)
        samples.append(BernsteinSample(k, x.copy(), delta_f, slope, float(delta_f / factor),
                                       float(beta0 - delta_f), float(beta1 * factor - delta_f),
                                       1.0 / delta_f, slope / delta_f))
    if not samples:
        raise InvalidInputError("no sample points supplied")
    req = [s.required_beta1 for s in samples]
    all_ok = all(s.ok for s in samples)
    if beta1 >= 3.0:
        verdict = "inapplicable"
    else:
        verdict = "pass" if all_ok else "fail"
    return BernsteinReport(beta0, beta1, alpha, i, samples, float(min(req)), float(max(req)), verdict)


# ---------------------------------------------------------------------------
# registry

_REGISTRY: dict[str, Callable[..., GraphMap]] = {}


def register_example(name: str, factory: Callable[..., GraphMap]) -> None:
    _REGISTRY[name] = factory


def example_names() -> list[str]:
    _load_cones()
    return sorted(_REGISTRY)


def _load_cones():
    from . import cones  # noqa: F401  (registers the cone examples)


_KEY_RE = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def get_example(key: str) -> GraphMap:
    """Build a registry graph from a key such as ``"affine"`` or ``"coassociative(1.5)"``."""
    _load_cones()
    match = _KEY_RE.match(key)
    if not match or match.group(1) not in _REGISTRY:
        raise InvalidInputError(f"unknown example {key!r}; known: {', '.join(sorted(_REGISTRY))}")
    args = []
    if match.group(2):
        try:
            args = [float(a) for a in match.group(2).split(",") if a.strip()]
        except ValueError as exc:
            raise InvalidInputError(f"bad arguments in {key!r}") from exc
    return _REGISTRY[match.group(1)](*args)


def affine_graph(A=None, b=None) -> GraphMap:
    """``f(x) = A^T x + b`` with ``A`` of shape ``(n, m)`` (so ``Df = A``)."""
    A = np.array([[0.5, 0.1], [0.0, -0.3], [0.2, 0.0]]) if A is None else np.asarray(A, dtype=float)
    b = np.zeros(A.shape[1]) if b is None else np.asarray(b, dtype=float)
    n, m = A.shape
    return GraphMap(n, m, lambda x: A.T @ x + b, lambda x: A, lambda x: np.zeros((m, n, n)),
                    name="affine")


def holomorphic_graph(coeffs: Sequence[complex]) -> GraphMap:
    """Graph of ``z -> sum_k c_k z^k`` over C = R^2, a minimal surface in R^4."""
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=complex))
    d1 = poly.deriv(1)
    d2 = poly.deriv(2)

    def func(x):
        v = poly(complex(x[0], x[1]))
        return np.array([v.real, v.imag])

    def jac(x):
        # d/dx = p'(z), d/dy = i p'(z)
        v = d1(complex(x[0], x[1]))
        return np.array([[v.real, v.imag], [-v.imag, v.real]])

    def hess(x):
        v = d2(complex(x[0], x[1]))
        # u_xx = Re v, u_xy = -Im v, u_yy = -Re v; same pattern for the imaginary part
        return np.array([[[v.real, -v.imag], [-v.imag, -v.real]],
                         [[v.imag, v.real], [v.real, -v.imag]]])

    return GraphMap(2, 2, func, jac, hess, name="holomorphic")


def clifford_cone_graph() -> GraphMap:
    """Local graph ``x4 = (x1^2 + x2^2 - x3^2)^(1/2), x5 = 0`` of the cone over the Clifford torus."""
    D = np.diag([1.0, 1.0, -1.0])

    def func(x):
        return np.array([np.sqrt(x @ D @ x), 0.0])

    def jac(x):
        rho = np.sqrt(x @ D @ x)
        return np.column_stack([D @ x / rho, np.zeros(3)])

    def hess(x):
        rho = np.sqrt(x @ D @ x)
        dx = D @ x
        return np.stack([D / rho - np.outer(dx, dx) / rho**3, np.zeros((3, 3))])

    return GraphMap(3, 2, func, jac, hess, name="clifford-cone",
                    domain=lambda x: x[0] ** 2 + x[1] ** 2 - x[2] ** 2 > 0.05,
                    critical_points=((1.0, 0.0, 0.0),))


register_example("affine", lambda *a: affine_graph())
register_example("holomorphic-sq", lambda scale=1.0: holomorphic_graph([0, 0, scale]))
register_example("holomorphic-poly", lambda *c: holomorphic_graph(list(c) or [0, 0, 1]))
register_example("clifford-cone", lambda: clifford_cone_graph())
