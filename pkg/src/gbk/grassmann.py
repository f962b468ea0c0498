"""Points of the oriented Grassmannian G(n, m) and the geometry around them.

A point is an oriented n-plane in R^(n+m), stored as an orthonormal frame
(rows of an ``n x (n+m)`` array).  Orientation is the orientation of the
frame; two frames related by a matrix of positive determinant describe the
same point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping

import numpy as np

from .errors import DegenerateInputError, DomainError, InvalidInputError, PreconditionError
from .multivector import Multivector, wedge

ORTHO_TOL = 1e-10
RANK_TOL = 1e-10
ZERO_ANGLE_TOL = 1e-9


def _orient_complement(frame: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the row space of
    ``frame``, oriented so that ``det([frame; complement]) > 0``."""
    n, dim = frame.shape
    if n == dim:
        return np.zeros((0, dim))
    _, _, vt = np.linalg.svd(frame, full_matrices=True)
    comp = vt[n:].copy()
    if np.linalg.det(np.vstack([frame, comp])) < 0:
        comp[0] = -comp[0]
    return comp


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """Oriented n-plane in R^(n+m) with an orthonormal frame."""

    n: int
    m: int
    frame: np.ndarray = field(repr=False)

    def __post_init__(self):
        frame = np.array(self.frame, dtype=float)
        if frame.shape != (self.n, self.n + self.m):
            raise InvalidInputError(
                f"frame has shape {frame.shape}, expected ({self.n}, {self.n + self.m})")
        gram = frame @ frame.T
        if not np.allclose(gram, np.eye(self.n), atol=1e-8, rtol=0.0):
            raise InvalidInputError("frame is not orthonormal; use GrassmannPoint.from_basis")
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)

    @classmethod
    def from_basis(cls, vectors, m: int | None = None) -> "GrassmannPoint":
        """Orthonormalize ``n`` independent vectors, keeping span and orientation."""
        vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
        n, dim = vecs.shape
        if m is None:
            m = dim - n
        if n + m != dim or n < 1 or m < 0:
            raise InvalidInputError(f"{n} vectors of length {dim} do not fit G({n},{m})")
        if not np.all(np.isfinite(vecs)):
            raise InvalidInputError("basis contains non-finite entries")
        sv = np.linalg.svd(vecs, compute_uv=False)
        if sv[-1] <= RANK_TOL:
            raise DegenerateInputError(
                f"basis is rank deficient (smallest singular value {sv[-1]:.3e})")
        q, r = np.linalg.qr(vecs.T)
        signs = np.sign(np.diag(r))
        q = q * signs
        frame = q.T
        # one Newton-Schulz polish step keeps the Gram matrix at round-off level
        frame = 1.5 * frame - 0.5 * (frame @ frame.T) @ frame
        return cls(n, m, frame)

    @classmethod
    def coordinate(cls, n: int, m: int, indices=None) -> "GrassmannPoint":
        """Plane spanned by the standard basis vectors ``indices`` (default 0..n-1), in that order."""
        idx = list(range(n)) if indices is None else list(indices)
        if len(idx) != n:
            raise InvalidInputError(f"need {n} indices, got {len(idx)}")
        return cls(n, m, np.eye(n + m)[idx])

    @property
    def dim(self) -> int:
        return self.n + self.m

    @cached_property
    def plucker(self) -> Multivector:
        return wedge(self.frame)

    @cached_property
    def complement(self) -> np.ndarray:
        """Oriented orthonormal basis of the orthogonal complement (``m x (n+m)``)."""
        comp = _orient_complement(self.frame)
        comp.setflags(write=False)
        return comp

    @cached_property
    def projector(self) -> np.ndarray:
        return self.frame.T @ self.frame

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "m": self.m, "frame": self.frame.tolist()}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "GrassmannPoint":
        try:
            n = int(obj["n"])
            m = int(obj["m"])
            rows = obj["frame"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"frame record needs integer 'n', 'm' and 'frame': {exc}") from exc
        frame = np.asarray(rows, dtype=float)
        if frame.shape != (n, n + m):
            raise InvalidInputError(f"'frame' has shape {frame.shape}, expected ({n}, {n + m})")
        return cls.from_basis(frame, m)

    def __repr__(self) -> str:
        return f"GrassmannPoint(n={self.n}, m={self.m}, frame={np.round(self.frame, 6).tolist()})"


def _check_pair(p: GrassmannPoint, q: GrassmannPoint) -> None:
    if (p.n, p.m) != (q.n, q.m):
        raise InvalidInputError(f"points live in G({p.n},{p.m}) and G({q.n},{q.m})")


def w_matrix(p: GrassmannPoint, q: GrassmannPoint) -> np.ndarray:
    """Pairing matrix ``W_ij = <e_i, f_j>`` of the two frames."""
    _check_pair(p, q)
    return p.frame @ q.frame.T


def w_function(p: GrassmannPoint, q: GrassmannPoint) -> float:
    """Normalized Plücker pairing ``<psi(P), psi(Q)>``, computed as ``det W``."""
    return float(np.linalg.det(w_matrix(p, q)))


@dataclass(frozen=True)
class JordanData:
    """Jordan angles between two planes, in descending order.

    ``angles`` has length n (angles beyond ``min(n, m)`` are zero).  Row ``i`` of
    ``directions_p`` is a unit vector of P whose projection onto Q is
    ``cos(angles[i]) * directions_q[i]``.
    """

    angles: np.ndarray
    directions_p: np.ndarray
    directions_q: np.ndarray
    r: int

    @property
    def p(self) -> int:
        return min(self.directions_p.shape[0], self.directions_p.shape[1] - self.directions_p.shape[0])


def jordan_angles(p: GrassmannPoint, q: GrassmannPoint) -> JordanData:
    _check_pair(p, q)
    w = p.frame @ q.frame.T
    u, cos_vals, vt = np.linalg.svd(w)
    cos_vals = np.clip(cos_vals, 0.0, 1.0)
    # sines from the part of Q's frame orthogonal to P; accurate for small angles
    resid = q.frame - (q.frame @ p.frame.T) @ p.frame
    sin_vals = np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0)[::-1]
    ascending = np.where(sin_vals < np.sqrt(0.5), np.arcsin(sin_vals), np.arccos(cos_vals))
    angles = ascending[::-1].copy()
    dirs_p = (u.T @ p.frame)[::-1].copy()
    dirs_q = (vt @ q.frame)[::-1].copy()
    r = int(np.count_nonzero(angles > ZERO_ANGLE_TOL))
    return JordanData(angles, dirs_p, dirs_q, r)


def distance(p: GrassmannPoint, q: GrassmannPoint) -> float:
    return float(np.sqrt(np.sum(jordan_angles(p, q).angles ** 2)))


@dataclass(frozen=True)
class SOrthogonality:
    """Verdict plus the cross-checking criteria for S-orthogonality."""

    is_orthogonal: bool
    angles: np.ndarray
    w: float
    intersection_dim: int
    sum_dim: int

    def __bool__(self) -> bool:
        return self.is_orthogonal


def is_s_orthogonal(p: GrassmannPoint, q: GrassmannPoint, tol: float = 1e-8) -> SOrthogonality:
    """Exactly one Jordan angle equal to pi/2, all others zero (within ``tol``)."""
    jd = jordan_angles(p, q)
    near_right = np.abs(jd.angles - np.pi / 2) <= tol
    near_zero = jd.angles <= tol
    verdict = bool(np.count_nonzero(near_right) == 1 and np.all(near_right | near_zero))
    stacked = np.vstack([p.frame, q.frame])
    sv = np.linalg.svd(stacked, compute_uv=False)
    sum_dim = int(np.count_nonzero(sv > 1e-8))
    return SOrthogonality(verdict, jd.angles, w_function(p, q), 2 * p.n - sum_dim, sum_dim)


@dataclass(frozen=True, eq=False)
class SOrthogonalPair:
    """An S-orthogonal pair (P, Q) with the adapted basis that carries the
    closed geodesic ``P_t = span{cos t e1 + sin t e_{n+1}, e2, ..., en}``.

    ``e1`` and ``en1`` are unit vectors of P and Q orthogonal to P ∩ Q, oriented
    so that ``psi(P) = e1 ^ common`` and ``psi(Q) = en1 ^ common``.
    """

    P: GrassmannPoint
    Q: GrassmannPoint
    e1: np.ndarray = field(repr=False)
    en1: np.ndarray = field(repr=False)
    common: np.ndarray = field(repr=False)
    rest: np.ndarray = field(repr=False)

    @classmethod
    def from_points(cls, p: GrassmannPoint, q: GrassmannPoint, tol: float = 1e-8) -> "SOrthogonalPair":
        _check_pair(p, q)
        check = is_s_orthogonal(p, q, tol)
        if not check:
            raise PreconditionError(
                f"P and Q are not S-orthogonal (Jordan angles {np.round(check.angles, 10).tolist()})")
        u, _, vt = np.linalg.svd(p.frame @ q.frame.T)
        n = p.n
        common = u[:, : n - 1].T @ p.frame
        e1 = u[:, n - 1] @ p.frame
        en1 = vt[n - 1] @ q.frame
        if np.linalg.det(np.vstack([e1, common]) @ p.frame.T) < 0:
            e1 = -e1
        if np.linalg.det(np.vstack([en1, common]) @ q.frame.T) < 0:
            en1 = -en1
        rest = _orient_complement(np.vstack([e1, common, en1]))
        for arr in (e1, en1, common, rest):
            arr.setflags(write=False)
        return cls(p, q, e1, en1, common, rest)

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def m(self) -> int:
        return self.P.m

    def adapted_frames(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Tangent frame ``(f_1, e_2..e_n)`` of P_t and normal frame ``(f_{n+1}, rest)``."""
        c, s = np.cos(t), np.sin(t)
        f1 = c * self.e1 + s * self.en1
        fn1 = -s * self.e1 + c * self.en1
        return np.vstack([f1, self.common]), np.vstack([fn1, self.rest])

    def point(self, t: float) -> GrassmannPoint:
        tangent, _ = self.adapted_frames(t)
        return GrassmannPoint(self.n, self.m, tangent)

    def to_json(self) -> dict[str, Any]:
        return {"P": self.P.to_json(), "Q": self.Q.to_json()}


def geodesic_Pt(p: GrassmannPoint, q: GrassmannPoint, t: float) -> GrassmannPoint:
    """Point at parameter ``t`` on the closed geodesic through P (t=0) and Q (t=pi/2)."""
    return SOrthogonalPair.from_points(p, q).point(t)


def _as_pair(p, q=None) -> SOrthogonalPair:
    if isinstance(p, SOrthogonalPair):
        return p
    return SOrthogonalPair.from_points(p, q)


def s_map(s: GrassmannPoint, p, q=None) -> tuple[float, float]:
    """``(w(S, P_0), w(S, P_{pi/2}))``; ``p`` may be an :class:`SOrthogonalPair`."""
    pair = _as_pair(p, q)
    return w_function(s, pair.P), w_function(s, pair.Q)


DELETED_RADIUS_TOL = 1e-12


def polar_from_smap(x1: float, x2: float) -> tuple[float, float]:
    r = float(np.hypot(x1, x2))
    if abs(x2) <= DELETED_RADIUS_TOL and x1 <= DELETED_RADIUS_TOL:
        raise DomainError(f"S-map value ({x1:.3g}, {x2:.3g}) lies on the deleted radius")
    return min(r, 1.0), float(np.arctan2(x2, x1))


def polar(s: GrassmannPoint, p, q=None) -> tuple[float, float]:
    """Polar coordinates ``(r, theta)`` of the S-map, ``theta`` in (-pi, pi)."""
    return polar_from_smap(*s_map(s, p, q))


@dataclass(frozen=True, eq=False)
class MatrixChart:
    """Matrix coordinates of S around ``center``: S is spanned by the rows of
    ``center.frame + Z @ complement``."""

    center: GrassmannPoint
    Z: np.ndarray
    complement: np.ndarray = field(repr=False)

    def point(self) -> GrassmannPoint:
        return chart_point(self.center.frame, self.complement, self.Z)


def chart_point(center_frame: np.ndarray, complement: np.ndarray, Z: np.ndarray) -> GrassmannPoint:
    """Inverse of :func:`matrix_chart` for an explicit tangent/normal frame pair."""
    Z = np.asarray(Z, dtype=float)
    basis = center_frame + Z @ complement
    n, dim = center_frame.shape
    return GrassmannPoint.from_basis(basis, dim - n)


def chart_coordinates(s: GrassmannPoint, center_frame: np.ndarray, complement: np.ndarray) -> np.ndarray:
    a = s.frame @ center_frame.T
    b = s.frame @ complement.T
    wval = np.linalg.det(a)
    if wval <= 1e-10:
        raise DomainError(f"w(S, center) = {wval:.3e} <= 0: S is outside the matrix chart")
    return np.linalg.solve(a, b)


def matrix_chart(s: GrassmannPoint, center: GrassmannPoint, complement: np.ndarray | None = None) -> MatrixChart:
    """Matrix coordinate Z of S in the chart ``{w(., center) > 0}``."""
    _check_pair(s, center)
    comp = center.complement if complement is None else np.asarray(complement, dtype=float)
    return MatrixChart(center, chart_coordinates(s, center.frame, comp), comp)


def _padded_singular_values(Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, m = Z.shape
    sv = np.linalg.svd(Z, compute_uv=False) if Z.size else np.zeros(0)
    lam_n = np.zeros(n)
    lam_m = np.zeros(m)
    lam_n[: sv.size] = sv
    lam_m[: sv.size] = sv
    return lam_n, lam_m


def chart_metric_eigen(Z) -> np.ndarray:
    """Eigenvalues ``(1 + lam_i^2)(1 + lam_a^2)`` of the inverse chart metric, descending."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    lam_n, lam_m = _padded_singular_values(Z)
    vals = np.outer(1.0 + lam_n**2, 1.0 + lam_m**2).ravel()
    return np.sort(vals)[::-1]


def chart_metric(Z) -> np.ndarray:
    """Canonical metric at Z as an ``nm x nm`` matrix on row-major ``vec(dZ)``."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    n, m = Z.shape
    a = np.linalg.inv(np.eye(n) + Z @ Z.T)
    b = np.linalg.inv(np.eye(m) + Z.T @ Z)
    return np.kron(a, b)


def normal_complement(s: GrassmannPoint) -> GrassmannPoint:
    """The isometry G(n, m) -> G(m, n) taking a plane to its oriented orthogonal complement.

    Orientation makes ``psi(result) = *psi(s)``.
    """
    return GrassmannPoint(s.m, s.n, s.complement)


def grad_logw_lower_bound(s: GrassmannPoint, center: GrassmannPoint) -> tuple[float, float]:
    """``(sum lam_i^2, p (w^(-2/p) - 1))``: squared gradient of ``log w(., center)`` and
    its lower bound."""
    wval = w_function(s, center)
    if wval <= 1e-10:
        raise DomainError(f"w(S, center) = {wval:.3e}: S is outside the matrix chart")
    Z = matrix_chart(s, center).Z
    lam = np.linalg.svd(Z, compute_uv=False)
    p = min(s.n, s.m)
    lhs = float(np.sum(lam**2))
    rhs = float(p * (wval ** (-2.0 / p) - 1.0))
    return lhs, rhs


def random_point(n: int, m: int, rng: np.random.Generator) -> GrassmannPoint:
    """Haar-distributed random oriented n-plane."""
    return GrassmannPoint.from_basis(rng.standard_normal((n, n + m)), m)
