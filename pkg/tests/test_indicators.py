import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.distance import cdist

from mudist import indicators as I
from mudist import refsets
from mudist.errors import ConfigurationError, InvalidInputError
from mudist.fronts import FrontShape

Q3 = np.full(3, 1.2)


def sets(max_mu=8, m=3):
    return st.integers(1, max_mu).flatmap(
        lambda mu: arrays(np.float64, (mu, m), elements=st.floats(0.0, 1.0))
    )


def hv_inclusion_exclusion(A, q):
    # independent oracle: sum over non-empty subsets of signed intersection boxes
    total = 0.0
    for k in range(1, len(A) + 1):
        for sub in itertools.combinations(range(len(A)), k):
            corner = np.max(A[list(sub)], axis=0)
            total += (-1) ** (k + 1) * np.prod(np.maximum(q - corner, 0.0))
    return total


# --- hypervolume -------------------------------------------------------------

def test_hv_examples():
    assert I.hv([[0, 0, 0]], Q3) == pytest.approx(1.728, rel=1e-12)
    assert I.hv([[0, 0.5, 0.5], [0.5, 0, 0.5]], Q3) == pytest.approx(0.833, rel=1e-9)
    assert I.hv([Q3], Q3) == 0.0


def test_hv_members_outside_q_contribute_nothing():
    assert I.hv([[1.3, 0, 0]], Q3) == 0.0
    assert I.hv([[1.3, 0, 0], [0, 0, 0]], Q3) == pytest.approx(1.728, rel=1e-12)


@given(sets(7, 3))
def test_hv_matches_inclusion_exclusion(A):
    assert I.hv(A, Q3) == pytest.approx(hv_inclusion_exclusion(A, Q3), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("m", [2, 4, 5])
def test_hv_matches_inclusion_exclusion_other_m(m, rng):
    q = np.full(m, 1.2)
    for _ in range(20):
        A = rng.random((rng.integers(1, 8), m))
        assert I.hv(A, q) == pytest.approx(hv_inclusion_exclusion(A, q), rel=1e-9)


def test_hv_monotone_under_added_member(rng):
    for _ in range(200):
        A = rng.random((6, 3))
        extra = rng.random((1, 3))
        assert I.hv(np.vstack([A, extra]), Q3) >= I.hv(A, Q3) - 1e-12


def test_hv_duplicates_and_dominated_members_ignored(rng):
    A = rng.random((5, 3))
    base = I.hv(A, Q3)
    assert I.hv(np.vstack([A, A[:2]]), Q3) == pytest.approx(base, rel=1e-12)
    assert I.hv(np.vstack([A, A[:1] + 0.1]), Q3) == pytest.approx(base, rel=1e-12)


def test_hv_exact_at_m8(rng):
    q = np.full(8, 1.2)
    A = rng.random((6, 8))
    assert I.hv(A, q) == pytest.approx(hv_inclusion_exclusion(A, q), rel=1e-9)


def test_hv_m8_mu64_runs(rng):
    A = refsets.sld(8, 2).members[:36]
    B = np.vstack([A, rng.random((28, 8)) + 0.3])
    assert 0.0 < I.hv(B, np.full(8, 1.2)) < 1.2**8


# --- distance based ----------------------------------------------------------

def test_igd_examples():
    R = np.array([[0, 0, 1.0], [0, 1.0, 0]])
    assert I.igd(R, R) == 0.0
    assert I.igd([[0, 0, 0]], R) == pytest.approx(1.0, rel=1e-12)
    assert I.igd([[0, 0, 0.5]], R) == pytest.approx((0.5 + np.sqrt(1.25)) / 2, rel=1e-9)
    assert I.igd([[0, 0, 0.5]], R) == pytest.approx(0.80902, abs=5e-6)


def test_igd_plus_examples():
    R = np.array([[0.2, 0.3, 0.4], [0.5, 0.5, 0.5]])
    assert I.igd_plus([[0, 0, 0]], R) == 0.0
    assert I.igd_plus([[1, 0, 0]], [[0.5, 0.5, 0.5]]) == pytest.approx(0.5, rel=1e-12)
    assert I.igd_plus(R, R) == 0.0


def test_eps_plus_examples():
    R = np.array([[0.2, 0.3, 0.4], [0.5, 0.5, 0.5]])
    assert I.eps_plus(R, R) == 0.0
    assert I.eps_plus([[0.3, 0.3, 0.3]], [[0.2, 0.2, 0.2]]) == pytest.approx(0.1, rel=1e-9)
    assert I.eps_plus([[0, 0, 0]], [[0.5, 0.5, 0.5]]) == -0.5


@pytest.mark.parametrize("fn", [I.igd, I.igd_plus, I.eps_plus])
def test_empty_sets_rejected(fn):
    with pytest.raises(InvalidInputError):
        fn(np.empty((0, 3)), [[0, 0, 1.0]])
    with pytest.raises(InvalidInputError):
        fn([[0, 0, 1.0]], np.empty((0, 3)))
    with pytest.raises(InvalidInputError):
        fn([[0, 0, 1.0]], [[0, 1.0]])


def test_distance_indicators_against_cdist(rng):
    for _ in range(20):
        A, R = rng.random((7, 3)), rng.random((30, 3))
        assert I.igd(A, R) == pytest.approx(cdist(R, A).min(axis=1).mean(), rel=1e-12)
        plus = np.sqrt((np.maximum(A[None] - R[:, None], 0) ** 2).sum(axis=2)).min(axis=1).mean()
        assert I.igd_plus(A, R) == pytest.approx(plus, rel=1e-12)


# --- scalarizing -------------------------------------------------------------

def test_r2_examples():
    W = refsets.sld(3, 4).members
    z = np.zeros(3)
    assert I.r2([z], W, z) == 0.0
    assert I.r2([[0.5, 0.5, 0.5]], [[1, 0, 0]], z) == 0.5
    assert I.r2([[1, 0, 0], [0, 1, 0]], [[0.5, 0.5, 0]], z) == 0.5
    with pytest.raises(InvalidInputError):
        I.r2([[0.5, 0.5, 0.5]], np.empty((0, 3)), z)


def test_nr2_examples():
    W = refsets.sld(3, 4).members
    assert I.nr2([Q3], W, Q3) == 0.0
    assert I.nr2([[0, 0, 0]], [[1 / 3, 1 / 3, 1 / 3]], Q3) == pytest.approx(46.656, rel=1e-9)
    v = I.nr2([[0.5, 0.2, 0.1]], [[1.0, 0.0, 0.0]], Q3)
    assert np.isfinite(v)
    # the zero weights read as 1e-6, so the first component decides: 0.7**3
    assert v == pytest.approx(0.7**3, rel=1e-9)
    with pytest.raises(InvalidInputError):
        I.nr2([[0.5, 0.5, 0.5]], np.empty((0, 3)), Q3)


def test_nr2_rewards_closer_sets():
    W = refsets.sld(3, 6).members
    near = refsets.sld(3, 3).members
    assert I.nr2(near, W, Q3) > I.nr2(near + 0.1, W, Q3)
    assert I.nr2(np.vstack([near, [[0.9, 0.9, 0.9]]]), W, Q3) == pytest.approx(I.nr2(near, W, Q3), rel=1e-12)


# --- s-energy ----------------------------------------------------------------

def test_s_energy_examples():
    assert I.s_energy([[0, 0, 0], [1, 0, 0]], 2) == pytest.approx(2.0, rel=1e-12)
    assert I.s_energy([[0, 0, 0], [0, 0, 0]], 2) == I.SENTINEL
    assert I.SENTINEL == np.finfo(np.float64).max
    assert I.s_energy([[0, 0, 0], [0.5, 0, 0], [1, 0, 0]], 2) == pytest.approx(18.0, rel=1e-12)
    # default exponent m - 1
    assert I.s_energy([[0, 0, 0], [0.5, 0, 0]]) == pytest.approx(2 * 0.5**-2, rel=1e-12)


@given(sets(6, 3), st.randoms(use_true_random=False))
def test_s_energy_permutation_invariant(A, rnd):
    perm = list(range(len(A)))
    rnd.shuffle(perm)
    a, b = I.s_energy(A), I.s_energy(A[perm])
    assert a == pytest.approx(b, rel=1e-12)


# --- spread ------------------------------------------------------------------

def spread_oracle(A, R):
    D = cdist(A, A)
    np.fill_diagonal(D, np.inf)
    d = D.min(axis=1)
    ext = [R[np.argmax(R[:, i])] for i in range(R.shape[1])]
    d_ext = sum(cdist([e], A).min() for e in ext)
    avg = d.mean()
    return (d_ext + np.abs(d - avg).sum()) / (d_ext + avg * (len(A) - A.shape[1]))


def test_spread_examples():
    R = refsets.sld(3, 2).members
    A = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [0.5, 0.5, 0]])
    v = I.spread_delta(A, R)
    # hand value: d = (h, h, sqrt(1.5), h) with h = sqrt(0.5); no extreme term
    h = np.sqrt(0.5)
    d = np.array([h, h, np.sqrt(1.5), h])
    assert v == pytest.approx(np.abs(d - d.mean()).sum() / d.mean(), rel=1e-9)
    # closed form: 6(s - h)/(3h + s) with s/h = sqrt(3), i.e. 4 sqrt(3) - 6
    assert v == pytest.approx(4 * np.sqrt(3) - 6, rel=1e-12)
    assert v == pytest.approx(spread_oracle(A, R), rel=1e-12)


def test_spread_zero_for_uniform_set_covering_extremes():
    # equal nearest-neighbour distances and both extremes present
    A = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]])
    R = np.array([[1.0, 0.0], [0.0, 1.0], [0.3, 0.7]])
    assert I.spread_delta(A, R) == 0.0


def test_spread_scale_invariant(rng):
    for _ in range(20):
        A, R = rng.random((8, 3)), rng.random((40, 3))
        assert I.spread_delta(3.7 * A, 3.7 * R) == pytest.approx(I.spread_delta(A, R), rel=1e-12)
        assert I.spread_delta(A, R) == pytest.approx(spread_oracle(A, R), rel=1e-12)


def test_spread_degenerate_denominator():
    R = np.eye(3)
    # |A| == m, all extremes present: numerator and denominator vanish only when spacing is uniform
    assert I.spread_delta(np.eye(3), R) == 0.0
    A = np.eye(3)
    A2 = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0.9, 0.1]])
    R2 = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0.9, 0.1]])
    # |A| = m and every extreme covered: x / 0 gives the sentinel
    assert I.spread_delta(A2, R2) == I.SENTINEL
    assert I.spread_delta(A, R) == 0.0


# --- DCI ---------------------------------------------------------------------

def test_dci_examples():
    R = refsets.sld(3, 5).members
    assert I.dci_unary(R, R) == 1.0
    assert I.dci_unary(R, R, div=1) == 1.0
    with pytest.raises(InvalidInputError):
        I.dci_unary(R, R, div=0)
    # a single member far from every reference cell
    far = np.vstack([R, [[10.0, 10.0, 10.0]]])
    assert I.dci_unary([[10.0, 10.0, 10.0]], R) == 0.0
    assert 0.0 < I.dci_unary(far[:3], R) < 1.0


def test_dci_lattice_set_values():
    A = refsets.sld(3, 5).members
    assert len(A) == 21
    assert I.dci_unary(A, refsets.sld(3, 5).members, 19) == 1.0
    R28 = refsets.sld(3, 6).members
    assert I.dci_unary(A, R28, 19) < 1.0


def test_dci_hand_value():
    # one axis degenerate, div = 2: cells of R are (0,0),(1,0),(2,0); A sits in cell (0,0)
    R = np.array([[0.0, 5.0], [0.5, 5.0], [1.0, 5.0]])
    A = np.array([[0.0, 5.0]])
    # gd^2 = 0, 1, 4 against m + 1 = 3 -> CD = 1, 2/3, 0
    assert I.dci_unary(A, R, 2) == pytest.approx((1 + 2 / 3 + 0) / 3, rel=1e-12)


# --- permutation and dominance properties ------------------------------------

@given(sets(7, 3), st.randoms(use_true_random=False))
def test_order_invariance(A, rnd):
    R = refsets.sld(3, 4).members
    perm = list(range(len(A)))
    rnd.shuffle(perm)
    P = A[perm]
    for fn, arg in ((I.igd, R), (I.igd_plus, R), (I.eps_plus, R)):
        assert fn(A, arg) == pytest.approx(fn(P, arg), rel=1e-12, abs=1e-15)
    assert I.r2(A, R, np.zeros(3)) == I.r2(P, R, np.zeros(3))
    assert I.nr2(A, R, Q3) == pytest.approx(I.nr2(P, R, Q3), rel=1e-12)
    assert I.hv(A, Q3) == pytest.approx(I.hv(P, Q3), rel=1e-12, abs=1e-15)


def test_weak_pareto_compliance(rng):
    R = refsets.sld(3, 8).members
    for _ in range(1000):
        mu = rng.integers(1, 6)
        A2 = rng.random((mu, 3))
        A1 = A2 - rng.random((mu, 3)) * rng.random((mu, 1)) * (rng.random((mu, 3)) < 0.7)
        assert I.hv(A1, Q3) >= I.hv(A2, Q3) - 1e-12
        assert I.igd_plus(A1, R) <= I.igd_plus(A2, R) + 1e-12
        assert I.eps_plus(A1, R) <= I.eps_plus(A2, R) + 1e-12


# --- spec and dispatch -------------------------------------------------------

def test_orientations():
    for kind in I.KINDS:
        expected = "maximize" if kind in ("HV", "NR2", "PD", "DCI") else "minimize"
        assert I.IndicatorSpec(kind).orientation == expected


def test_evaluate_orientation_and_transparency():
    A = np.array([[0.0, 0.0, 0.0]])
    spec = I.IndicatorSpec("HV", q=Q3)
    raw, mini = I.evaluate(spec, A)
    assert raw == pytest.approx(1.728) and mini == -raw
    R = np.array([[0, 0, 1.0], [0, 1.0, 0]])
    raw, mini = I.evaluate(I.IndicatorSpec("IGD", R=R), A)
    assert raw == mini == 1.0
    a = I.evaluate(I.IndicatorSpec("IGD", R=R), np.array([[0.1, 0.2, 0.3]]))
    b = I.evaluate(I.IndicatorSpec("IGD", R=R), np.array([[0.1, 0.2, 0.3]]))
    assert np.array(a).tobytes() == np.array(b).tobytes()


def test_missing_parameter_named():
    with pytest.raises(ConfigurationError, match="q"):
        I.evaluate(I.IndicatorSpec("HV"), [[0, 0, 0]])
    with pytest.raises(ConfigurationError, match="W"):
        I.evaluate(I.IndicatorSpec("R2", z_star=np.zeros(3)), [[0, 0, 0]])
    with pytest.raises(ConfigurationError):
        I.IndicatorSpec("GD")


def test_default_specs_and_set_kernel_agree(rng):
    front = FrontShape("concave")
    A = np.ascontiguousarray(refsets.reference_set(front, refsets.sld(3, 3)))
    for kind in I.KINDS:
        spec = I.default_spec(kind, front)
        _, mini = I.evaluate(spec, A)
        assert I.set_kernel(spec, 3)(A) == pytest.approx(mini, rel=1e-12)
    spec = I.default_spec("HV", front)
    np.testing.assert_array_equal(spec.q, 1.2)
    assert I.default_spec("SE", front).s == 2.0
    assert I.default_spec("R2", front).W.shape == (1035, 3)


def test_set_objective_death_penalty():
    front = FrontShape("c-concave")
    f = I.set_objective(I.default_spec("IGD", front), front, 1)
    # theta = (0, 0) decodes to the corner (1, 0, 0): feasible
    assert f(np.array([0.0, 0.0])) < I.SENTINEL
    # a mid-edge point of the sphere is infeasible
    # b1 = 1 - sqrt(0.25) = 0.5 and b2 = 0.5 * (1 - 0) give (0.5, 0.5, 0) before projection
    theta_mid = np.array([0.25, 0.0])
    assert f(theta_mid) == I.SENTINEL
    g = I.set_objective(I.default_spec("IGD", FrontShape("concave")), FrontShape("concave"), 1)
    assert g(theta_mid) < I.SENTINEL
