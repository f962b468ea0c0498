"""Property-based checks of the core identities."""

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gbk.grassmann import (
    GrassmannPoint,
    chart_point,
    distance,
    jordan_angles,
    matrix_chart,
    normal_complement,
    random_point,
    s_map,
    w_function,
)
from gbk.multivector import Multivector, hodge_star, inner, wedge
from gbk.region import build_phi
from conftest import standard_pair

dims = st.sampled_from([(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 3)])
seeds = st.integers(0, 2**32 - 1)
PHI = build_phi(0.4)


def two_points(shape, seed):
    rng = np.random.default_rng(seed)
    return random_point(*shape, rng), random_point(*shape, rng)


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_w_symmetric_and_bounded(shape, seed):
    p, q = two_points(shape, seed)
    w = w_function(p, q)
    assert abs(w - w_function(q, p)) < 1e-13
    assert abs(w) <= 1 + 1e-13
    assert abs(abs(w) - np.prod(np.cos(jordan_angles(p, q).angles))) < 1e-12


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_angles_in_range_and_distance(shape, seed):
    p, q = two_points(shape, seed)
    ang = jordan_angles(p, q).angles
    assert np.all(ang >= 0) and np.all(ang <= np.pi / 2 + 1e-12)
    assert np.all(np.diff(ang) <= 1e-15)
    assert abs(distance(p, q) - np.linalg.norm(ang)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_normal_complement_is_isometry(shape, seed):
    p, q = two_points(shape, seed)
    assert abs(w_function(normal_complement(p), normal_complement(q)) - w_function(p, q)) < 1e-12
    assert normal_complement(p).plucker.allclose(hodge_star(p.plucker), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), seeds)
def test_cauchy_binet(d, k, seed):
    k = min(k, d)
    rng = np.random.default_rng(seed)
    e, f = rng.standard_normal((2, k, d))
    assert abs(inner(wedge(e), wedge(f)) - np.linalg.det(e @ f.T)) < 1e-10 * (1 + abs(np.linalg.det(e @ f.T)))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 6), seeds)
def test_double_star(d, k, seed):
    k = min(k, d)
    coeffs = np.random.default_rng(seed).standard_normal(Multivector(d, k).data.size)
    a = Multivector(d, k, coeffs)
    assert hodge_star(hodge_star(a)).allclose((-1) ** (k * (d - k)) * a, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (3, 3)]), seeds)
def test_smap_in_closed_disk(shape, seed):
    p, q = standard_pair(*shape)
    s = random_point(*shape, np.random.default_rng(seed))
    x1, x2 = s_map(s, p, q)
    assert x1 * x1 + x2 * x2 <= 1 + 1e-13


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(0.0, 1.5))
def test_chart_roundtrip(seed, scale):
    rng = np.random.default_rng(seed)
    center = random_point(3, 2, rng)
    Z = scale * rng.standard_normal((3, 2))
    s = chart_point(center.frame, center.complement, Z)
    assert np.allclose(matrix_chart(s, center).Z, Z, atol=1e-10 * (1 + scale**3))


@settings(max_examples=80, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_phi_monotone_and_lipschitz(u, v):
    lo, hi = min(u, v), max(u, v)
    assert PHI(lo) <= PHI(hi) + 1e-15
    assert PHI(hi) - PHI(lo) <= hi - lo + 1e-12


@settings(max_examples=80, deadline=None)
@given(st.floats(1e-6, 3.0))
def test_phi_inverse_roundtrip(v):
    assert abs(PHI(PHI.inverse(v)) - v) < 1e-12


@settings(max_examples=30, deadline=None)
@given(arrays(float, (2, 4), elements=st.floats(-3, 3)))
def test_from_basis_preserves_orientation(vecs):
    sv = np.linalg.svd(vecs, compute_uv=False)
    if sv[-1] < 1e-3 * max(sv[0], 1e-300):
        return
    p = GrassmannPoint.from_basis(vecs)
    assert np.linalg.det(vecs @ p.frame.T) > 0
