import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mudist import fronts
from mudist.errors import InvalidInputError
from mudist.fronts import FrontShape

SIMPLEX_KINDS = [k for k in fronts.KINDS if k != "disconnected" and not k.startswith("2d-")]


def theta_strategy(mu, m):
    return arrays(np.float64, mu * (m - 1), elements=st.floats(0.0, 1.0))


@given(theta_strategy(7, 3))
def test_translate_lands_on_simplex(theta):
    B = fronts.translate(theta, 3)
    assert B.shape == (7, 3)
    assert np.all(B >= 0.0)
    np.testing.assert_allclose(B.sum(axis=1), 1.0, atol=1e-12)


@given(theta_strategy(4, 5))
def test_translate_simplex_m5(theta):
    B = fronts.translate(theta, 5)
    assert np.all(B >= 0.0)
    np.testing.assert_allclose(B.sum(axis=1), 1.0, atol=1e-12)


def test_translate_corners():
    # y = 0 puts all mass on the first coordinate, y = 1 removes it
    np.testing.assert_allclose(fronts.translate([0.0, 0.5], 3), [[1.0, 0.0, 0.0]])
    np.testing.assert_allclose(fronts.translate([1.0, 0.0], 3), [[0.0, 1.0, 0.0]])
    np.testing.assert_allclose(fronts.translate([1.0, 1.0], 3), [[0.0, 0.0, 1.0]])


def test_translate_hand_value():
    # b1 = 1 - 0.25**(1/2) = 0.5, b2 = 0.5 * (1 - 0.5) = 0.25, b3 = 0.25
    np.testing.assert_allclose(fronts.translate([0.25, 0.5], 3), [[0.5, 0.25, 0.25]], rtol=1e-12)


def test_translate_is_uniform_on_simplex():
    # each simplex coordinate of a uniform point is Beta(1, m-1), mean 1/m and variance (m-1)/(m^2 (m+1))
    rng = np.random.default_rng(3)
    m = 4
    B = fronts.translate(rng.random(200_000 * (m - 1)), m)
    np.testing.assert_allclose(B.mean(axis=0), 1 / m, atol=3e-3)
    np.testing.assert_allclose(B.var(axis=0), (m - 1) / (m * m * (m + 1)), rtol=3e-2)


def test_translate_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        fronts.translate([0.1, 0.2, 0.3], 3)
    with pytest.raises(InvalidInputError):
        fronts.translate([0.1, 1.2], 3)
    with pytest.raises(InvalidInputError):
        fronts.translate([0.1, 0.2], 3, mu=2)
    with pytest.raises(InvalidInputError):
        fronts.translate([np.nan, 0.2], 3)


def test_front_shape_validation():
    with pytest.raises(InvalidInputError):
        FrontShape("wavy")
    with pytest.raises(InvalidInputError):
        FrontShape("2d-zdt1", m=3)
    with pytest.raises(InvalidInputError):
        FrontShape("linear", m=1)
    f = FrontShape("c-concave")
    assert f.constrained and not FrontShape("concave").constrained
    np.testing.assert_array_equal(f.ideal, 0.0)
    np.testing.assert_array_equal(f.nadir, 1.0)


@pytest.mark.parametrize("kind", SIMPLEX_KINDS)
@given(theta=theta_strategy(6, 3))
def test_decoded_points_satisfy_front_relation(kind, theta):
    front = FrontShape(kind, 3)
    A = fronts.decode(front, theta, mu=6)
    assert A.shape == (6, 3)
    assert np.all(A >= -1e-12) and np.all(A <= 1 + 1e-12)
    # the square root in the convex relations turns 1e-16 rounding of 1 - a into ~1e-8
    tol = 1e-7 if kind == "i-concave" else 1e-9
    assert np.all(fronts.front_residual(front, A) < tol)


@pytest.mark.parametrize("kind", ["2d-dtlz1", "2d-dtlz2", "2d-zdt1"])
@given(theta=theta_strategy(5, 2))
def test_two_objective_fronts(kind, theta):
    front = FrontShape(kind, 2)
    A = fronts.decode(front, theta)
    assert np.all(A >= -1e-12) and np.all(A <= 1 + 1e-12)
    assert np.all(fronts.front_residual(front, A) < 1e-9)


def test_two_objective_front_endpoints():
    for kind in ("2d-dtlz1", "2d-dtlz2", "2d-zdt1"):
        front = FrontShape(kind, 2)
        A = fronts.decode(front, [0.0, 1.0])
        np.testing.assert_allclose(A, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)


def test_convex_front_extremes():
    front = FrontShape("convex")
    np.testing.assert_allclose(fronts.map_front(front, np.eye(3)), np.eye(3), atol=1e-15)
    i_concave = fronts.map_front(FrontShape("i-concave"), np.eye(3))
    np.testing.assert_allclose(i_concave, 1.0 - np.eye(3), atol=1e-15)


@given(theta=theta_strategy(8, 3))
def test_disconnected_points_on_patches(theta):
    front = FrontShape("disconnected")
    A = fronts.decode(front, theta)
    assert np.all(A >= -1e-12) and np.all(A <= 1 + 1e-12)
    assert np.all(fronts.front_residual(front, A) < 1e-9)


def test_disconnected_constants_are_record_highs():
    # every interval point has h no smaller than all h to its left; gap points fall below
    x = np.linspace(0.0, fronts.DISCONNECTED_INTERVALS[1][1], 200_001)
    h = fronts._h(x)
    record = h >= np.maximum.accumulate(h) - 1e-12
    (a0, a1), (b0, b1) = fronts.DISCONNECTED_INTERVALS
    inside = (x <= a1) | ((x >= b0) & (x <= b1))
    margin = (np.abs(x - a1) > 1e-5) & (np.abs(x - b0) > 1e-5)
    np.testing.assert_array_equal(record[margin], inside[margin])
    assert fronts._h(b1) == pytest.approx(fronts.DISCONNECTED_H_MAX, rel=1e-15)
    assert fronts._h(b0) == pytest.approx(fronts._h(a1), rel=1e-12)


def test_disconnected_normalization_range():
    front = FrontShape("disconnected")
    # theta = 0 is the first patch corner (f_i = 0), last objective at the raw maximum 2m
    np.testing.assert_allclose(fronts.decode(front, [0.0, 0.0]), [[0.0, 0.0, 1.0]], atol=1e-15)
    A = fronts.decode(front, [1.0, 1.0])
    np.testing.assert_allclose(A, [[1.0, 1.0, 0.0]], atol=1e-12)


def test_constraint_c2dtlz2():
    front = FrontShape("c-concave")
    c = np.sqrt(1 / 3)
    # the centre of the front and the three corners are feasible, a mid-edge point is not
    assert fronts.constraint_value(front, [[c, c, c]]) <= 0
    assert fronts.constraint_value(front, np.eye(3)) <= 0
    s = np.sqrt(0.5)
    assert fronts.constraint_value(front, [[s, s, 0.0]]) > 0
    v = fronts.constraint_values(front, [[c, c, c], [s, s, 0.0]])
    assert v[0] == pytest.approx(-0.16, abs=1e-12)
    # G is the worst member
    assert fronts.constraint_value(front, [[c, c, c], [s, s, 0.0]]) == v.max()
    assert fronts.constraint_value(FrontShape("concave"), [[s, s, 0.0]]) == 0.0


def test_decode_is_deterministic():
    theta = np.linspace(0.0, 1.0, 20)
    for kind in ("linear", "convex", "disconnected"):
        front = FrontShape(kind)
        assert fronts.decode(front, theta).tobytes() == fronts.decode(front, theta).tobytes()
