import numpy as np
import pytest

from spinpair.analysis import (
    compare_solutions,
    lz_asymptotic,
    populations,
    transition_probability,
)
from spinpair.errors import (
    DegenerateGap,
    NonUnitaryInput,
    UnsupportedOrientation,
    ZeroRate,
)
from spinpair.fields import Constant, LinearRamp, TanhRamp
from spinpair.hamiltonian import THETA_PERPENDICULAR, SystemParams
from spinpair.linalg import expm_unitary
from spinpair.propagators import Frame, TimeGrid, reference_propagate

LZ_SURVIVAL = 0.20787957635076193  # exp(-pi/2)


def params(theta, profile, a_par=1.0, a_perp=0.5, zeta=0.1):
    return SystemParams(a_par, a_perp, zeta, theta, profile)


class TestTransitionProbability:
    def test_identity(self):
        eye = np.eye(4, dtype=complex)
        assert transition_probability(eye, 1, 1) == 1.0
        assert transition_probability(eye, 1, 2) == 0.0

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(9)
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u = expm_unitary(h + np.conj(h.T), 0.37)
        for source in range(4):
            total = sum(transition_probability(u, source, t) for t in range(4))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(NonUnitaryInput):
            transition_probability(np.diag([1.0, 1.0, 1.0, 0.5]), 0, 0)


class TestLzAsymptotic:
    def test_worked_value(self):
        p = params(0.0, LinearRamp(-4.0, 0.04), a_perp=0.05, zeta=0.0)
        assert lz_asymptotic(p, p.profile) == pytest.approx(LZ_SURVIVAL, abs=1e-15)

    def test_sudden_limit(self):
        p = params(0.0, LinearRamp(-4.0, 1e9), a_perp=0.05, zeta=0.0)
        assert lz_asymptotic(p, p.profile) == pytest.approx(1.0, abs=1e-6)

    def test_vanishing_gap_limit(self):
        p = params(0.0, LinearRamp(-4.0, 0.04), a_perp=1e-6, zeta=0.0)
        assert lz_asymptotic(p, p.profile) == pytest.approx(1.0, abs=1e-6)

    def test_errors(self):
        ramp = LinearRamp(-4.0, 0.04)
        with pytest.raises(UnsupportedOrientation):
            lz_asymptotic(params(THETA_PERPENDICULAR, ramp), ramp)
        with pytest.raises(ZeroRate):
            lz_asymptotic(params(0.0, LinearRamp(-4.0, 0.0)), LinearRamp(-4.0, 0.0))
        with pytest.raises(DegenerateGap):
            lz_asymptotic(params(0.0, ramp, a_perp=-1.0), ramp)

    def test_reference_converges_to_oracle_with_width(self):
        # fixed rate, growing half-width: the channel jump probability
        # approaches the asymptote, monotonically in error
        errors = []
        for w0 in (2.0, 4.0):
            p = params(0.0, LinearRamp(-w0, 0.04), a_perp=0.05, zeta=0.0)
            grid = TimeGrid(0.0, 2.0 * w0 / 0.04, 1000)
            phi0 = np.array([0, 0, 1, 0], dtype=complex)
            traj = reference_propagate(p, grid, phi0, Frame.ADIABATIC,
                                       tol_per_time=1e-8)
            jump = abs(traj.adiabatic_states[-1][1]) ** 2
            errors.append(abs(jump - LZ_SURVIVAL))
        assert errors[1] < errors[0]


class TestCompareSolutions:
    def test_constant_field_everything_exact(self):
        p = params(0.0, Constant(2.0))
        report = compare_solutions(p, TimeGrid(0.0, 10.0, 100), 1)
        assert np.max(report.infidelity_zeroth) <= 1e-9
        assert np.max(report.infidelity_first) <= 1e-9
        assert report.max_eta == 0.0
        assert not report.adiabatic_warning

    def test_slow_ramp_first_order_wins(self):
        p = params(0.0, TanhRamp(3.0, 2.0, 8.0), zeta=0.0)
        report = compare_solutions(p, TimeGrid(-16.0, 32.0, 600), 1)
        assert report.infidelity_first[-1] < report.infidelity_zeroth[-1]
        assert report.max_eta < 0.1

    def test_fast_ramp_sets_warning_without_error(self):
        p = params(0.0, TanhRamp(0.5, 2.0, 0.5), zeta=0.0)
        report = compare_solutions(p, TimeGrid(-1.0, 2.0, 200), 1)
        assert report.adiabatic_warning

    def test_rate_over_gap_finite_through_zero_crossing(self):
        # the field metric diverges where omega crosses zero; the internal
        # rate-over-gap diagnostic stays finite because the gap never closes
        p = params(0.0, LinearRamp(-2.0, 0.5), zeta=0.0)
        report = compare_solutions(p, TimeGrid(0.0, 8.0, 200), 1)
        assert np.isinf(report.max_eta)
        assert np.isfinite(report.max_rate_over_gap)
        assert report.max_rate_over_gap > 0.0

    def test_first_order_dominance_all_initial_states(self):
        # peak adiabaticity in the 1e-4 .. 1e-2 window
        p = params(THETA_PERPENDICULAR, TanhRamp(3.0, 2.0, 50.0))
        grid = TimeGrid(-100.0, 200.0, 800)
        for index in range(4):
            report = compare_solutions(p, grid, index)
            assert 1e-4 <= report.max_eta <= 1e-2
            assert report.infidelity_first[-1] <= report.infidelity_zeroth[-1] + 1e-12

    def test_populations_conserved(self):
        p = params(THETA_PERPENDICULAR, TanhRamp(3.0, 2.0, 4.0))
        traj = reference_propagate(p, TimeGrid(-8.0, 16.0, 300),
                                   np.array([0, 1, 0, 0], complex))
        pops = populations(traj.states)
        np.testing.assert_allclose(pops.sum(axis=1), 1.0, atol=1e-9)

    def test_invalid_index(self):
        p = params(0.0, Constant(2.0))
        with pytest.raises(ValueError):
            compare_solutions(p, TimeGrid(0.0, 1.0, 10), 4)
