"""Cones over submanifolds of spheres, the Hopf map and the Lawson-Osserman cone.

A cone ``CM = {t x : x in M, t > 0}`` over ``M`` in ``S^(N-1)`` is
parametrized by ``(u, t) -> t phi(u)``.  Its tangent frame is ``E_1..E_k``
(from the ``u`` directions) followed by the radial ``tau = phi(u)``.

The Lawson-Osserman cone is the graph of ``(sqrt 5 / 2) eta(x) / |x|`` over
R^4, where ``eta`` is the Hopf map written in the coordinates
``z1 = x1 + i x2``, ``z2 = x3 + i x4``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import DegenerateInputError, DomainError, InvalidInputError, NumericError
from .grassmann import (
    GrassmannPoint,
    _orient_complement,
    chart_coordinates,
    is_s_orthogonal,
    jordan_angles,
    normal_complement,
    w_function,
)
from .graph import (
    GraphMap,
    SubmanifoldGeometry,
    coordinate_laplacian,
    fd_gradient,
    fd_hessian,
    gauss_rank,
    geometry_at,
    register_example,
    submanifold_geometry,
)

Array = np.ndarray
SQRT5 = np.sqrt(5.0)


# ---------------------------------------------------------------------------
# immersions into spheres

@dataclass(frozen=True, eq=False)
class SphereImmersion:
    """Immersion ``phi`` of a k-dimensional parameter domain into the unit sphere of R^N."""

    k: int
    ambient: int
    func: Callable[[Array], Array]
    jac: Callable[[Array], Array] | None = None
    hess: Callable[[Array], Array] | None = None
    name: str = "immersion"
    h_first: float = 1e-4
    h_second: float = 1e-3
    default_params: Callable[[np.random.Generator, int], Array] | None = field(default=None, repr=False)

    @property
    def codim(self) -> int:
        """Codimension ``m`` of M inside ``S^(N-1)``."""
        return self.ambient - 1 - self.k

    def eval(self, u) -> Array:
        return np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)

    def first(self, u) -> Array:
        """``(k, N)`` coordinate tangent vectors."""
        u = np.asarray(u, dtype=float)
        if self.jac is not None:
            return np.asarray(self.jac(u), dtype=float)
        return fd_gradient(self.eval, u, self.h_first)

    def second(self, u) -> Array:
        """``(k, k, N)`` second derivatives."""
        u = np.asarray(u, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(u), dtype=float)
        return fd_hessian(self.eval, u, self.h_second)

    def finite_difference(self) -> "SphereImmersion":
        return SphereImmersion(self.k, self.ambient, self.func, name=self.name,
                               h_first=self.h_first, h_second=self.h_second,
                               default_params=self.default_params)

    def sample_params(self, rng: np.random.Generator, count: int) -> Array:
        if self.default_params is not None:
            return self.default_params(rng, count)
        return rng.uniform(-1.0, 1.0, size=(count, self.k))

    def normal_frame(self, u) -> Array:
        """Orthonormal frame of the normal space of M in the sphere, oriented so that
        ``det([tangent; phi; normal]) > 0``, matching the cone frame ``(E, tau)``."""
        x = self.eval(u)
        d1 = self.first(u)
        basis = np.vstack([d1, x])
        sv = np.linalg.svd(basis, compute_uv=False)
        if sv[-1] < 1e-10 * sv[0]:
            raise DegenerateInputError(f"{self.name} is not immersed at {u}")
        q, r = np.linalg.qr(basis.T)
        q = q * np.sign(np.diag(r))
        return _orient_complement(q.T)

    def geometry(self, u) -> SubmanifoldGeometry:
        """Second fundamental form of M in the sphere (normal frame tangent to the sphere)."""
        return submanifold_geometry(self.first(u), self.second(u), self.normal_frame(u))


def _stereo(k: int):
    def func(u):
        s = u @ u
        return np.concatenate([2 * u, [s - 1.0]]) / (1.0 + s)

    def jac(u):
        s = u @ u
        d = 1.0 + s
        out = np.zeros((k, k + 1))
        out[:, :k] = 2 * np.eye(k) / d - 4 * np.outer(u, u) / d**2
        out[:, k] = 4 * u / d**2
        return out

    def hess(u):
        s = u @ u
        d = 1.0 + s
        eye = np.eye(k)
        out = np.zeros((k, k, k + 1))
        # components 2u_a / d
        for a in range(k):
            out[:, :, a] = (-4 * (eye[a][:, None] * u[None, :] + u[:, None] * eye[a][None, :]) / d**2
                            - 4 * u[a] * eye / d**2 + 16 * u[a] * np.outer(u, u) / d**3)
        out[:, :, k] = 4 * eye / d**2 - 16 * np.outer(u, u) / d**3
        return out

    return func, jac, hess


def equator(k: int, m: int = 1) -> SphereImmersion:
    """Totally geodesic ``S^k`` in ``S^(k+m)`` via inverse stereographic coordinates."""
    k, m = int(k), int(m)
    if k < 1 or m < 1:
        raise InvalidInputError("equator needs k >= 1 and m >= 1")
    f0, j0, h0 = _stereo(k)
    pad = m

    def func(u):
        return np.concatenate([f0(u), np.zeros(pad)])

    def jac(u):
        return np.hstack([j0(u), np.zeros((k, pad))])

    def hess(u):
        return np.concatenate([h0(u), np.zeros((k, k, pad))], axis=2)

    return SphereImmersion(k, k + m + 1, func, jac, hess, name=f"equator({k})")


def clifford_torus() -> SphereImmersion:
    """``(cos u1, sin u1, cos u2, sin u2) / sqrt 2`` in ``S^3``."""
    c = 1.0 / np.sqrt(2.0)

    def func(u):
        return c * np.array([np.cos(u[0]), np.sin(u[0]), np.cos(u[1]), np.sin(u[1])])

    def jac(u):
        return c * np.array([[-np.sin(u[0]), np.cos(u[0]), 0.0, 0.0],
                             [0.0, 0.0, -np.sin(u[1]), np.cos(u[1])]])

    def hess(u):
        out = np.zeros((2, 2, 4))
        out[0, 0] = c * np.array([-np.cos(u[0]), -np.sin(u[0]), 0.0, 0.0])
        out[1, 1] = c * np.array([0.0, 0.0, -np.cos(u[1]), -np.sin(u[1])])
        return out

    return SphereImmersion(2, 4, func, jac, hess, name="clifford-torus",
                           default_params=lambda rng, n: rng.uniform(-np.pi, np.pi, size=(n, 2)))


def get_immersion(key: str) -> SphereImmersion:
    """``"clifford-torus"``, ``"equator(k)"`` or ``"equator(k,m)"``."""
    key = key.strip()
    if key == "clifford-torus":
        return clifford_torus()
    if key.startswith("equator(") and key.endswith(")"):
        try:
            args = [int(a) for a in key[len("equator("):-1].split(",")]
        except ValueError as exc:
            raise InvalidInputError(f"bad immersion key {key!r}") from exc
        return equator(*args)
    raise InvalidInputError(f"unknown immersion {key!r}; known: clifford-torus, equator(k), equator(k,m)")


# ---------------------------------------------------------------------------
# cone geometry

@dataclass(frozen=True)
class ConePoint:
    u: Array
    t: float
    tangent_frame: Array  # E_1..E_k, tau
    normal_frame: Array
    h_cone: Array  # (m, k+1, k+1) in the frame above
    h_base: Array  # (m, k, k) of M in the sphere
    geometry: SubmanifoldGeometry

    @property
    def sec_residual(self) -> float:
        """``max |h^c_{a,ij} - h_{a,ij} / t|`` over the E-block."""
        k = self.h_base.shape[1]
        return float(np.max(np.abs(self.h_cone[:, :k, :k] - self.h_base / self.t), initial=0.0))

    @property
    def radial_residual(self) -> float:
        """``max |B^c(., tau)|``."""
        return float(np.max(np.abs(self.h_cone[:, :, -1]), initial=0.0))


def _cone_derivatives(imm: SphereImmersion, u: Array, t: float) -> tuple[Array, Array]:
    x = imm.eval(u)
    d1m = imm.first(u)
    d2m = imm.second(u)
    k, N = d1m.shape
    d1 = np.vstack([t * d1m, x])
    d2 = np.zeros((k + 1, k + 1, N))
    d2[:k, :k] = t * d2m
    d2[:k, k] = d1m
    d2[k, :k] = d1m
    return d1, d2


def cone_geometry(imm: SphereImmersion, u, t: float) -> ConePoint:
    """Frames and second fundamental form of the cone at ``t phi(u)``."""
    if not t > 0.0:
        raise DomainError(f"cone parameter t = {t} must be positive")
    u = np.asarray(u, dtype=float)
    nu = imm.normal_frame(u)
    d1, d2 = _cone_derivatives(imm, u, t)
    geom = submanifold_geometry(d1, d2, nu)
    base = imm.geometry(u)
    return ConePoint(u, float(t), geom.tangent_frame, nu, geom.h, base.h, geom)


def cone_laplacian_check(imm: SphereImmersion, f1: Callable[[Array], float], u, t: float,
                         h: float = 1e-3) -> tuple[float, float]:
    """``(Delta^c f, Delta f1 / t^2)`` for the cone-like extension ``f(t x) = f1(x)``.

    Both Laplacians are taken by finite differences in the parameters.
    """
    u = np.asarray(u, dtype=float)
    k = u.size

    def metric_m(v):
        d = imm.first(v)
        return d @ d.T

    def metric_c(y):
        g = np.zeros((k + 1, k + 1))
        g[:k, :k] = y[k] ** 2 * metric_m(y[:k])
        g[k, k] = 1.0
        return g

    cone_val = coordinate_laplacian(metric_c, lambda y: f1(imm.eval(y[:k])), np.append(u, t), h)
    base_val = coordinate_laplacian(metric_m, lambda v: f1(imm.eval(v)), u, h)
    return cone_val, base_val / t**2


def cone_gauss_map(imm: SphereImmersion, u, t: float = 1.0) -> GrassmannPoint:
    """Tangent plane of the cone, a point of G(k+1, m)."""
    cp = cone_geometry(imm, u, t)
    return GrassmannPoint(imm.k + 1, imm.codim, cp.tangent_frame)


def normal_gauss_map(imm: SphereImmersion, u) -> GrassmannPoint:
    """Normal m-plane of M in the sphere as a point of G(m, k+1)."""
    nu = imm.normal_frame(np.asarray(u, dtype=float))
    return GrassmannPoint(nu.shape[0], imm.k + 1, nu)


def cone_like_residual(imm: SphereImmersion, u, t: float = 1.0) -> float:
    """``|1 - w(eta(gamma(t x)), gamma^N(x))|``; zero when the two oriented planes agree."""
    return abs(1.0 - w_function(normal_complement(cone_gauss_map(imm, u, t)), normal_gauss_map(imm, u)))


def differential_rank(point_map: Callable[[Array], GrassmannPoint], u, h: float = 1e-5,
                      rel: float = 1e-6) -> int:
    """Numerical rank of the differential of a map into a Grassmannian, read off
    matrix-chart coordinates centred at the image of ``u``."""
    u = np.asarray(u, dtype=float)
    center = point_map(u)
    comp = center.complement

    def coords(v):
        return chart_coordinates(point_map(v), center.frame, comp).ravel()

    jac = fd_gradient(coords, u, h)
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size == 0 or sv[0] < 1e-12:
        return 0
    return int(np.sum(sv > rel * sv[0]))


def cone_rank(imm: SphereImmersion, u, t: float = 1.0) -> int:
    return gauss_rank(cone_geometry(imm, u, t).geometry)


# ---------------------------------------------------------------------------
# rigidity hypothesis

@dataclass(frozen=True)
class RigiditySample:
    index: int
    u: Array
    w_p: float
    w_q: float
    value: float
    above_threshold: bool
    excluded: bool

    @property
    def ok(self) -> bool:
        return self.above_threshold and not self.excluded


@dataclass(frozen=True)
class RigidityReport:
    threshold: float
    samples: list[RigiditySample]

    @property
    def violations(self) -> list[RigiditySample]:
        return [s for s in self.samples if not s.ok]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def min_value(self) -> float:
        return min(s.value for s in self.samples)


def check_rigidity_hypothesis(imm: SphereImmersion, p: GrassmannPoint, q: GrassmannPoint, params,
                              rank_le_2: bool = False, zero_tol: float = 1e-12) -> RigidityReport:
    """Evaluate ``w(N,P)^2 + w(N,Q)^2 > threshold`` and the exclusion
    ``w(N,Q) = 0, w(N,P) < 0`` on the normal planes ``N`` at the given parameters.

    The threshold is 0 with ``rank_le_2`` and 1/9 otherwise.
    """
    if (p.n, p.m) != (imm.codim, imm.k + 1) or (q.n, q.m) != (p.n, p.m):
        raise InvalidInputError(f"P and Q must lie in G({imm.codim}, {imm.k + 1})")
    if not is_s_orthogonal(p, q):
        raise InvalidInputError("P and Q are not S-orthogonal")
    threshold = 0.0 if rank_le_2 else 1.0 / 9.0
    samples = []
    for idx, u in enumerate(np.atleast_2d(np.asarray(params, dtype=float))):
        N = normal_gauss_map(imm, u)
        wp, wq = w_function(N, p), w_function(N, q)
        val = wp * wp + wq * wq
        samples.append(RigiditySample(idx, u.copy(), wp, wq, val, bool(val > threshold),
                                      bool(abs(wq) <= zero_tol and wp < 0.0)))
    return RigidityReport(threshold, samples)


# ---------------------------------------------------------------------------
# Hopf map and quaternions

def hopf_map(z1, z2) -> Array:
    """``(|z1|^2 - |z2|^2, Re 2 z1 conj(z2), Im 2 z1 conj(z2))``."""
    z1 = complex(z1)
    z2 = complex(z2)
    c = 2.0 * z1 * z2.conjugate()
    return np.array([abs(z1) ** 2 - abs(z2) ** 2, c.real, c.imag])


def hopf_real(x) -> Array:
    """Hopf map on R^4 with ``z1 = x1 + i x2`` and ``z2 = x3 + i x4``."""
    x = np.asarray(x, dtype=float)
    return np.array([x[0] ** 2 + x[1] ** 2 - x[2] ** 2 - x[3] ** 2,
                     2.0 * (x[0] * x[2] + x[1] * x[3]),
                     2.0 * (x[1] * x[2] - x[0] * x[3])])


def quat_mul(a, b) -> Array:
    """Hamilton product of 4-tuples ``(1, i, j, k)`` with ``ij = k``."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def quat_conj(a) -> Array:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def hopf_quaternion(z1, z2) -> Array:
    """``q i conj(q)`` for ``q = z1 - conj(z2) j``, read back as ``(i-part, k-part - i j-part)``."""
    z1 = complex(z1)
    z2 = complex(z2)
    # conj(z2) j = (c - d i) j = c j - d k for z2 = c + d i
    q = np.array([z1.real, z1.imag, -z2.real, z2.imag])
    r = quat_mul(quat_mul(q, [0.0, 1.0, 0.0, 0.0]), quat_conj(q))
    return np.array([r[1], r[3], -r[2]])


# ---------------------------------------------------------------------------
# coassociative profile and graphs of s~(r) eta(x)

def coassociative_profile(r: float, C: float) -> float:
    """Root ``s >= (sqrt 5 / 2) r`` of ``s (4 s^2 - 5 r^2)^2 = C``.

    On this branch the left side increases from 0, so the root is unique and
    continuous in ``C`` with ``s = (sqrt 5 / 2) r`` at ``C = 0``.
    """
    if not r > 0.0:
        raise DomainError(f"r = {r} must be positive")
    if C < 0.0:
        raise InvalidInputError(f"C = {C} must be nonnegative on the selected branch")
    s0 = SQRT5 / 2.0 * r
    if C == 0.0:
        return float(s0)

    def g(s):
        return s * (4.0 * s * s - 5.0 * r * r) ** 2 - C

    hi = s0 + max(r, C ** 0.2)
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NumericError("no bracket for the profile root", r=r, C=C)
    s = optimize.bisect(g, s0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=400)
    resid = abs(g(s))
    if resid > 1e-10 * (1.0 + C):
        raise NumericError("profile residual too large", r=r, C=C, s=s, residual=resid)
    return float(s)


def profile_derivatives(r: float, C: float) -> tuple[float, float, float]:
    """``(s, s', s'')`` along the selected branch (implicit differentiation)."""
    s = coassociative_profile(r, C)
    den = 4.0 * s * s - r * r
    s1 = 4.0 * r * s / den
    s2 = ((4.0 * s + 4.0 * r * s1) * den - 4.0 * r * s * (8.0 * s * s1 - 2.0 * r)) / den**2
    return s, s1, s2


_ETA_FORMS = (
    np.diag([1.0, 1.0, -1.0, -1.0]),
    np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float),
    np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float),
)


def _radial_hopf_graph(radial: Callable[[float], tuple[float, float, float]], name: str) -> GraphMap:
    """Graph of ``phi(|x|) eta(x)`` with ``radial(r) = (phi, phi', phi'')``."""
    forms = _ETA_FORMS

    def parts(x):
        r = float(np.linalg.norm(x))
        if r < 1e-14:
            raise DomainError(f"{name} is singular at the origin")
        return r, radial(r)

    def func(x):
        r, (p0, _, _) = parts(x)
        return p0 * np.array([x @ A @ x for A in forms])

    def jac(x):
        r, (p0, p1, _) = parts(x)
        grad_phi = p1 * x / r
        cols = [grad_phi * (x @ A @ x) + p0 * 2.0 * A @ x for A in forms]
        return np.column_stack(cols)

    def hess(x):
        r, (p0, p1, p2) = parts(x)
        xh = x / r
        grad_phi = p1 * xh
        hess_phi = p2 * np.outer(xh, xh) + p1 / r * (np.eye(4) - np.outer(xh, xh))
        out = []
        for A in forms:
            q = x @ A @ x
            gq = 2.0 * A @ x
            out.append(hess_phi * q + np.outer(grad_phi, gq) + np.outer(gq, grad_phi) + p0 * 2.0 * A)
        return np.array(out)

    return GraphMap(4, 3, func, jac, hess, name=name,
                    critical_points=((0.0, 0.0, 1.0, 0.0),))


def lo_graph() -> GraphMap:
    """Lawson-Osserman cone ``f = (sqrt 5 / 2) eta(x) / |x|`` with analytic derivatives.

    Components: ``f1 = (sqrt5/2)(x1^2 + x2^2 - x3^2 - x4^2)/|x|``,
    ``f2 = sqrt5 (x1 x3 + x2 x4)/|x|`` and ``f3 = sqrt5 (x2 x3 - x1 x4)/|x|``.
    """
    c = SQRT5 / 2.0
    return _radial_hopf_graph(lambda r: (c / r, -c / r**2, 2.0 * c / r**3), "lawson-osserman")


def coassociative_graph(C: float = 0.0) -> GraphMap:
    """Graph of ``s(r) r^-2 eta(x)`` for the profile with constant ``C``."""
    if C == 0.0:
        g = lo_graph()
        return GraphMap(g.n, g.m, g.func, g.jac, g.hess, name="coassociative(0)",
                        critical_points=g.critical_points)

    def radial(r):
        s, s1, s2 = profile_derivatives(r, C)
        return s / r**2, s1 / r**2 - 2.0 * s / r**3, s2 / r**2 - 4.0 * s1 / r**3 + 6.0 * s / r**4

    return _radial_hopf_graph(radial, f"coassociative({C:g})")


register_example("lawson-osserman", lambda: lo_graph())
register_example("coassociative", lambda C=0.0: coassociative_graph(C))


# ---------------------------------------------------------------------------
# frames of the coassociative family

@dataclass(frozen=True)
class LOFrames:
    x: Array
    frame: Array  # e0..e3 as rows in R^4
    pushforwards: Array  # zeta_* e_i as rows in R^3
    rho2: Array  # rho_i^2 = 1 / (1 + |zeta_* e_i|^2)
    w_matrix: Array
    angles: Array  # arccos rho_i, descending
    offdiag: float

    @property
    def w(self) -> float:
        return float(np.prod(np.sqrt(self.rho2)))


def lo_cone_frames(x, C: float = 0.0) -> LOFrames:
    """The frame ``e0 = x/r, e1, e2, e3 = i x / r`` of R^4, the pushforwards under
    ``zeta = s~(r) eta(x)`` and the W-matrix of the tangent plane of the graph
    relative to ``e0 ^ e1 ^ e2 ^ e3``.

    ``e1`` and ``e2`` involve ``1/r1`` and ``1/r2``, so points with ``z1 = 0`` or
    ``z2 = 0`` are rejected.
    """
    x = np.asarray(x, dtype=float).reshape(4)
    r = float(np.linalg.norm(x))
    if r < 1e-14:
        raise DomainError("x must be nonzero")
    r1 = float(np.hypot(x[0], x[1]))
    r2 = float(np.hypot(x[2], x[3]))
    if r1 < 1e-12 * r or r2 < 1e-12 * r:
        raise DomainError("frame is undefined where z1 = 0 or z2 = 0")
    d_r1 = np.array([x[0], x[1], 0.0, 0.0]) / r1
    d_r2 = np.array([0.0, 0.0, x[2], x[3]]) / r2
    d_t1 = np.array([-x[1], x[0], 0.0, 0.0])
    d_t2 = np.array([0.0, 0.0, -x[3], x[2]])
    e = np.array([
        x / r,
        (r2 / r) * d_r1 - (r1 / r) * d_r2,
        (r2 / (r1 * r)) * d_t1 - (r1 / (r2 * r)) * d_t2,
        (d_t1 + d_t2) / r,
    ])
    if C == 0.0:
        st, st1 = SQRT5 / (2.0 * r), -SQRT5 / (2.0 * r * r)
    else:
        s, s1, _ = profile_derivatives(r, C)
        st, st1 = s / r**2, s1 / r**2 - 2.0 * s / r**3
    eta = hopf_real(x)
    d_eta = np.array([2.0 * A @ x for A in _ETA_FORMS])  # (3, 4)
    push = np.array([st1 * (ei @ x / r) * eta + st * d_eta @ ei for ei in e])
    rho2 = 1.0 / (1.0 + np.sum(push**2, axis=1))
    tangent = GrassmannPoint.from_basis(np.hstack([e, push]), 3)
    coord = GrassmannPoint.from_basis(np.hstack([e, np.zeros((4, 3))]), 3)
    wmat = tangent.frame @ coord.frame.T
    gram = push @ push.T
    offdiag = float(np.max(np.abs(gram - np.diag(np.diag(gram)))))
    angles = np.sort(np.arccos(np.clip(np.sqrt(rho2), 0.0, 1.0)))[::-1]
    return LOFrames(x, e, push, rho2, wmat, angles, offdiag)


LO_ANGLES = np.array([np.arccos(np.sqrt(6.0) / 6.0), np.arccos(np.sqrt(6.0) / 6.0),
                      np.arccos(2.0 / 3.0), 0.0])


def lo_gauss_angles(x) -> Array:
    """Jordan angles between the LO-cone tangent plane and the coordinate 4-plane."""
    g = lo_graph()
    gamma = GrassmannPoint(4, 3, geometry_at(g, x).tangent_frame)
    return jordan_angles(gamma, GrassmannPoint.coordinate(4, 3)).angles
