import json

import numpy as np
import pytest

from conftest import standard_pair
from gbk.errors import DegenerateInputError, DomainError, InvalidInputError, PreconditionError
from gbk.grassmann import (
    GrassmannPoint,
    SOrthogonalPair,
    chart_coordinates,
    chart_metric,
    chart_metric_eigen,
    chart_point,
    distance,
    geodesic_Pt,
    grad_logw_lower_bound,
    is_s_orthogonal,
    jordan_angles,
    matrix_chart,
    normal_complement,
    polar,
    random_point,
    s_map,
    w_function,
    w_matrix,
)
from gbk.multivector import hodge_star, inner
from oracles import critical_angles, leibniz_det


def test_from_basis_keeps_span_and_orientation(rng):
    vecs = rng.standard_normal((3, 5))
    p = GrassmannPoint.from_basis(vecs)
    change = vecs @ p.frame.T
    assert np.linalg.det(change) > 0
    assert np.allclose(p.frame @ p.frame.T, np.eye(3), atol=1e-14)
    assert np.allclose(p.projector @ vecs.T, vecs.T, atol=1e-12)


def test_from_basis_rejects_dependent_vectors():
    with pytest.raises(DegenerateInputError):
        GrassmannPoint.from_basis([[1, 0, 0], [2, 0, 0]])


def test_constructor_requires_orthonormal_frame():
    with pytest.raises(InvalidInputError):
        GrassmannPoint(2, 1, [[1, 0, 0], [1, 1, 0]])
    with pytest.raises(InvalidInputError):
        GrassmannPoint(2, 1, np.eye(3))


def test_json_roundtrip(rng):
    p = random_point(3, 2, rng)
    q = GrassmannPoint.from_json(json.loads(json.dumps(p.to_json())))
    assert w_function(p, q) == pytest.approx(1.0, abs=1e-14)


def test_w_three_ways(rng):
    for _ in range(10):
        p, q = random_point(3, 3, rng), random_point(3, 3, rng)
        w = w_function(p, q)
        assert w == pytest.approx(inner(p.plucker, q.plucker), abs=1e-13)
        assert w == pytest.approx(leibniz_det(w_matrix(p, q)), abs=1e-13)
        assert abs(w) == pytest.approx(np.prod(np.cos(jordan_angles(p, q).angles)), abs=1e-13)


def test_orientation_flip_negates_w(rng):
    p = random_point(2, 3, rng)
    flipped = GrassmannPoint(2, 3, p.frame[[1, 0]])
    assert w_function(p, flipped) == pytest.approx(-1.0)


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (2, 3)])
def test_jordan_angles_match_critical_angle_search(rng, n, m):
    for _ in range(5):
        p, q = random_point(n, m, rng), random_point(n, m, rng)
        assert np.allclose(jordan_angles(p, q).angles, critical_angles(p.frame, q.frame), atol=1e-7)


def test_jordan_directions_pair_up(rng):
    p, q = random_point(3, 4, rng), random_point(3, 4, rng)
    jd = jordan_angles(p, q)
    proj = jd.directions_p @ q.projector
    assert np.allclose(proj, np.cos(jd.angles)[:, None] * jd.directions_q, atol=1e-12)


def test_small_angles_are_resolved():
    eps = 1e-10
    p = GrassmannPoint.coordinate(1, 1)
    q = GrassmannPoint.from_basis([[np.cos(eps), np.sin(eps)]])
    assert jordan_angles(p, q).angles[0] == pytest.approx(eps, rel=1e-8)


def test_distance_is_a_metric(rng):
    pts = [random_point(2, 3, rng) for _ in range(3)]
    a, b, c = pts
    assert distance(a, a) == pytest.approx(0.0, abs=1e-7)
    assert distance(a, b) == pytest.approx(distance(b, a), rel=1e-12)
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12


def test_standard_pair_is_s_orthogonal():
    p, q = standard_pair(4, 3)
    verdict = is_s_orthogonal(p, q)
    assert verdict
    assert verdict.w == 0.0
    assert verdict.intersection_dim == 3
    assert verdict.sum_dim == 5
    assert not is_s_orthogonal(p, p)


def test_pair_requires_s_orthogonality(rng):
    with pytest.raises(PreconditionError):
        SOrthogonalPair.from_points(random_point(3, 2, rng), random_point(3, 2, rng))


def test_geodesic_endpoints_and_smap():
    p, q = standard_pair(3, 2)
    assert w_function(geodesic_Pt(p, q, 0.0), p) == pytest.approx(1.0)
    assert w_function(geodesic_Pt(p, q, np.pi / 2), q) == pytest.approx(1.0)
    for t in (-2.0, 0.3, 1.4, 3.0):
        x1, x2 = s_map(geodesic_Pt(p, q, t), p, q)
        assert (x1, x2) == pytest.approx((np.cos(t), np.sin(t)), abs=1e-14)


def test_smap_of_random_points_inside_disk(rng):
    p, q = standard_pair(3, 3)
    for _ in range(20):
        x1, x2 = s_map(random_point(3, 3, rng), p, q)
        assert x1 * x1 + x2 * x2 < 1.0


def test_polar_on_deleted_radius():
    p, q = standard_pair(2, 2)
    with pytest.raises(DomainError):
        polar(geodesic_Pt(p, q, np.pi), p, q)
    r, theta = polar(geodesic_Pt(p, q, 2.5), p, q)
    assert (r, theta) == pytest.approx((1.0, 2.5))


def test_chart_roundtrip(rng):
    center = random_point(3, 2, rng)
    Z = 0.4 * rng.standard_normal((3, 2))
    s = chart_point(center.frame, center.complement, Z)
    assert np.allclose(matrix_chart(s, center).Z, Z, atol=1e-12)
    # det(I + Z Z^T)^(-1/2) = w(S, center)
    assert w_function(s, center) == pytest.approx(np.linalg.det(np.eye(3) + Z @ Z.T) ** -0.5)


def test_chart_rejects_points_with_nonpositive_w():
    p, q = standard_pair(2, 2)
    with pytest.raises(DomainError):
        chart_coordinates(q, p.frame, p.complement)


def test_chart_metric_eigenvalues(rng):
    Z = rng.standard_normal((3, 2))
    inv = np.linalg.inv(chart_metric(Z))
    assert np.allclose(np.sort(np.linalg.eigvalsh(inv))[::-1], chart_metric_eigen(Z), rtol=1e-10)
    assert np.allclose(chart_metric(np.zeros((2, 2))), np.eye(4))


def test_chart_metric_matches_distance(rng):
    # the chart metric at Z integrated along a short straight segment approximates the distance
    center = random_point(2, 2, rng)
    Z = 0.3 * rng.standard_normal((2, 2))
    dZ = 1e-5 * rng.standard_normal((2, 2))
    a = chart_point(center.frame, center.complement, Z)
    b = chart_point(center.frame, center.complement, Z + dZ)
    length = np.sqrt(dZ.ravel() @ chart_metric(Z + dZ / 2) @ dZ.ravel())
    assert distance(a, b) == pytest.approx(length, rel=1e-6)


def test_normal_complement_matches_hodge_star(rng):
    p = random_point(3, 2, rng)
    eta = normal_complement(p)
    assert (eta.n, eta.m) == (2, 3)
    assert eta.plucker.allclose(hodge_star(p.plucker), atol=1e-12)


def test_grad_logw_lower_bound(rng):
    center = random_point(3, 3, rng)
    for _ in range(10):
        s = chart_point(center.frame, center.complement, 0.7 * rng.standard_normal((3, 3)))
        lhs, rhs = grad_logw_lower_bound(s, center)
        assert lhs >= rhs - 1e-12
