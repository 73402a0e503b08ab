import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genopt.errors import DomainError, EvaluationError
from genopt.landscapes import (
    CANONICAL_WELLS,
    CoupledQuadratic,
    DynamicsSchedule,
    NoiseConfig,
    NoisyLandscape,
    Paraboloid,
    RUPTURE_WELLS,
    Landscape,
    Well,
    WellsLandscape,
    dynamic_eval,
    noisy_eval,
    reflect,
    wells_eval,
)


def gauss_mixture(wells, X):
    """Direct, loop-based evaluation used as the reference."""
    X = np.atleast_2d(X)
    out = np.zeros(len(X))
    for w in wells:
        r2 = ((X - np.array(w.center)) ** 2).sum(axis=1)
        out -= w.depth * np.exp(-r2 / (2 * w.width ** 2))
    return out


def grid_argmin(f, lo, hi, h, chunk=1000):
    xs = np.arange(lo[0], hi[0] + h / 2, h)
    ys = np.arange(lo[1], hi[1] + h / 2, h)
    best, arg = math.inf, None
    for i in range(0, len(xs), chunk):
        gx, gy = np.meshgrid(xs[i:i + chunk], ys, indexing="ij")
        v = f(np.column_stack([gx.ravel(), gy.ravel()]))
        k = int(np.argmin(v))
        if v[k] < best:
            best, arg = float(v[k]), (gx.ravel()[k], gy.ravel()[k])
    return best, np.array(arg)


class TestWells:
    def test_center_of_single_well(self):
        assert wells_eval([Well((3.0, 4.0), 4.0, 0.9)], (3.0, 4.0)) == -4.0

    def test_gaussian_tail(self):
        wells = [Well((1.0, 1.0), 2.0, 0.5), Well((2.0, 1.0), 3.0, 0.4)]
        x = (9.0, 9.0)
        assert all(np.hypot(9 - w.center[0], 9 - w.center[1]) >= 6 * w.width for w in wells)
        assert abs(wells_eval(wells, x)) < 1e-6 * 3.0

    def test_matches_reference(self, rng):
        X = rng.uniform(0, 10, size=(500, 2))
        np.testing.assert_allclose(WellsLandscape().evaluate(X)[:, 0], gauss_mixture(CANONICAL_WELLS, X),
                                   rtol=1e-12, atol=1e-15)

    def test_canonical_global_minimum_on_grid(self):
        f = lambda X: gauss_mixture(CANONICAL_WELLS, X)
        # 0.01 grid over the whole box, then a 1e-3 grid around the coarse argmin
        _, coarse = grid_argmin(f, (0, 0), (10, 10), 0.01)
        best, arg = grid_argmin(f, coarse - 0.05, coarse + 0.05, 1e-3)
        assert best == pytest.approx(-4.0, abs=1e-6)
        np.testing.assert_allclose(arg, (7.5, 7.5), atol=1e-3)

    @pytest.mark.parametrize("w", CANONICAL_WELLS)
    def test_each_well_bottom_equals_depth(self, w):
        assert wells_eval(CANONICAL_WELLS, w.center) == pytest.approx(-w.depth, abs=1e-6)

    def test_global_center(self):
        np.testing.assert_array_equal(WellsLandscape().global_center(0), (7.5, 7.5))

    def test_invalid_well(self):
        with pytest.raises(DomainError):
            Well((1.0, 1.0), 0.0, 1.0)
        with pytest.raises(DomainError):
            WellsLandscape([Well((11.0, 1.0), 1.0, 1.0)])

    def test_dimension_mismatch_is_evaluation_error(self):
        with pytest.raises(EvaluationError):
            WellsLandscape().evaluate(np.zeros((2, 3)))


class TestNoise:
    def test_zero_amplitude_is_identity(self, rng):
        base = WellsLandscape()
        X = rng.uniform(0, 10, size=(200, 2))
        noisy = NoisyLandscape(base, NoiseConfig(0.0, 0.5), seed=3)
        np.testing.assert_array_equal(noisy.evaluate(X), base.evaluate(X))
        assert not noisy.needs_reevaluation

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 2), st.floats(0.05, 5), st.integers(0, 2**32))
    def test_bounded_perturbation(self, A, lam, seed):
        base = WellsLandscape()
        X = np.random.default_rng(seed).uniform(0, 10, size=(100, 2))
        diff = NoisyLandscape(base, NoiseConfig(A, lam), seed).evaluate(X) - base.evaluate(X)
        assert np.all(np.abs(diff) <= A + 1e-12)

    def test_phase_formula(self):
        land = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3, 0.5), seed=9)
        x = np.array([3.3, 6.1])
        expected = wells_eval(CANONICAL_WELLS, x) + 0.3 * np.prod(np.sin(2 * np.pi * x / 0.5 + land.phases))
        assert land(x) == pytest.approx(expected, abs=1e-12)
        assert noisy_eval(WellsLandscape(), NoiseConfig(0.3, 0.5), x, seed=9) == land(x)

    def test_phases_fixed_per_seed(self):
        a = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3), seed=4)
        b = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3), seed=4)
        c = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3), seed=5)
        np.testing.assert_array_equal(a.phases, b.phases)
        assert not np.array_equal(a.phases, c.phases)

    def test_creates_extra_local_minima(self):
        land = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3, 0.5), seed=0)
        g = (np.arange(100) + 0.5) / 10
        gx, gy = np.meshgrid(g, g, indexing="ij")
        V = land.evaluate(np.column_stack([gx.ravel(), gy.ravel()]))[:, 0].reshape(100, 100)
        P = np.pad(V, 1, constant_values=np.inf)
        neigh = np.stack([P[1 + di:101 + di, 1 + dj:101 + dj]
                          for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)])
        assert int(np.sum(V < neigh.min(axis=0))) > 4

    def test_white_mode_reproducible_from_seed(self):
        land = NoisyLandscape(WellsLandscape(), NoiseConfig(0.3, mode="white"), seed=2)
        X = np.full((4, 2), 5.0)
        a, b = land.evaluate(X, t=3), land.evaluate(X, t=3)
        np.testing.assert_array_equal(a, b)
        assert len(np.unique(a)) > 1
        assert land.needs_reevaluation

    def test_bad_config(self):
        with pytest.raises(DomainError):
            NoiseConfig(-0.1)
        with pytest.raises(DomainError):
            NoiseConfig(0.1, 0.0)


class TestDynamics:
    def test_zero_drift_is_static(self, rng):
        X = rng.uniform(0, 10, size=(50, 2))
        static = WellsLandscape()
        drift = WellsLandscape(schedule=DynamicsSchedule("drift", velocity=(0.0, 0.0)))
        for t in (0, 7, 150):
            np.testing.assert_array_equal(drift.evaluate(X, t), static.evaluate(X))

    def test_drift_moves_and_reflects(self):
        land = WellsLandscape(schedule=DynamicsSchedule("drift", velocity=(0.02, 0.01)))
        c = land.wells_at(10)[0].center
        assert c == pytest.approx((7.7, 7.6))
        # x: 7.5 + 0.02*200 = 11.5 -> mirrored to 8.5
        assert land.wells_at(200)[0].center == pytest.approx((8.5, 9.5))

    @given(st.floats(-100, 100), st.floats(0, 3), st.floats(0.5, 10))
    def test_reflect_stays_in_box(self, x, lo, width):
        r = reflect(np.array([x]), np.array([lo]), np.array([lo + width]))[0]
        assert lo - 1e-9 <= r <= lo + width + 1e-9

    def test_rupture_crossing(self):
        sched = DynamicsSchedule("rupture", rate=0.02)
        wells = (Well((2.5, 5.0), 4.0, 1.2), Well((7.5, 5.0), 2.0, 1.2))
        assert sched.crossing_time(wells) == pytest.approx(50.0)
        a, b = WellsLandscape(wells, schedule=sched).wells_at(50)
        assert a.depth == pytest.approx(b.depth)

    def test_rupture_basin_switch(self):
        land = WellsLandscape(RUPTURE_WELLS, schedule=DynamicsSchedule("rupture", rate=0.02))
        np.testing.assert_array_equal(land.global_center(40), (2.5, 5.0))
        np.testing.assert_array_equal(land.global_center(60), (7.5, 5.0))

    def test_rupture_horizon_checked(self):
        land = WellsLandscape(RUPTURE_WELLS, schedule=DynamicsSchedule("rupture", rate=0.02))
        land.check_horizon(200)
        with pytest.raises(DomainError):
            land.check_horizon(201)

    def test_catastrophe_discontinuity(self):
        new = (Well((1.0, 9.0), 4.0, 1.5),)
        sched = DynamicsSchedule("catastrophe", event_time=60, depth_factor=0.5, new_wells=new)
        x = (1.0, 9.0)
        before = dynamic_eval(sched, CANONICAL_WELLS, x, 59)
        after = dynamic_eval(sched, CANONICAL_WELLS, x, 60)
        assert before == pytest.approx(gauss_mixture(CANONICAL_WELLS, [x])[0], abs=1e-14)
        halved = [Well(w.center, w.depth / 2, w.width) for w in CANONICAL_WELLS]
        assert after == pytest.approx(gauss_mixture(halved + list(new), [x])[0], abs=1e-14)
        assert after < before - 3.5

    def test_static_continuity_in_t(self, rng):
        X = rng.uniform(0, 10, size=(20, 2))
        for kind in ("drift", "rupture"):
            wells = RUPTURE_WELLS if kind == "rupture" else CANONICAL_WELLS
            land = WellsLandscape(wells, schedule=DynamicsSchedule(kind))
            jump = np.abs(land.evaluate(X, 31) - land.evaluate(X, 30)).max()
            assert jump < 0.1


class TestOthers:
    def test_paraboloid(self):
        land = Paraboloid((1.0, -2.0), (-5, -5), (5, 5))
        assert land((1.0, -2.0)) == 0.0
        assert land((2.0, 0.0)) == pytest.approx(5.0)

    def test_coupled_quadratic_minimum(self):
        land = CoupledQuadratic()
        assert land((2.0, 2.0)) == 0.0
        assert land((2.1, 2.0)) > 0

    def test_non_finite_output_raises(self):
        class Broken(Landscape):
            def _evaluate(self, X, t, rng):
                return np.full((len(X), 1), np.nan)

        with pytest.raises(EvaluationError):
            Broken((0.0,), (1.0,)).evaluate(np.zeros((1, 1)))
