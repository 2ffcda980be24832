import numpy as np
import pytest

from spinpair.errors import DivergentMetric, OutOfRange
from spinpair.fields import (
    Constant,
    Harmonic,
    LinearRamp,
    Tabulated,
    TanhRamp,
    adiabaticity,
    adiabaticity_profile,
    omega_eval,
)


def central_difference(profile, t, h=1e-6):
    wp, _ = profile.evaluate(t + h)
    wm, _ = profile.evaluate(t - h)
    return (wp - wm) / (2.0 * h)


def test_constant():
    w, wdot = omega_eval(Constant(2.0), 5.0)
    assert (w, wdot) == (2.0, 0.0)


def test_linear_ramp():
    w, wdot = omega_eval(LinearRamp(-4.0, 0.04), 100.0)
    assert w == pytest.approx(0.0, abs=1e-14)
    assert wdot == 0.04


def test_harmonic_at_zero():
    w, wdot = omega_eval(Harmonic(1.0, 0.1, 3.0, 0.0), 0.0)
    assert w == pytest.approx(1.1, abs=1e-15)
    assert wdot == pytest.approx(0.0, abs=1e-15)
    assert central_difference(Harmonic(1.0, 0.1, 3.0, 0.0), 0.0) == pytest.approx(
        0.0, abs=1e-6
    )


@pytest.mark.parametrize(
    "profile",
    [
        Constant(1.7),
        LinearRamp(-2.0, 0.3),
        TanhRamp(3.0, 2.0, 4.0),
        Harmonic(2.0, 0.5, 0.9, 0.2),
    ],
)
def test_rate_matches_finite_difference(profile):
    rng = np.random.default_rng(0)
    for t in rng.uniform(-20.0, 20.0, size=100):
        _, wdot = profile.evaluate(t)
        fd = central_difference(profile, t)
        assert wdot == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_tanh_no_overflow_far_out():
    profile = TanhRamp(1.0, 2.0, 0.001)
    w, wdot = profile.evaluate(1e6)
    assert w == pytest.approx(3.0)
    assert wdot == 0.0


def test_vector_evaluation_matches_scalar():
    profile = Harmonic(2.0, 0.5, 0.9, 0.2)
    ts = np.linspace(-3.0, 3.0, 11)
    w, wdot = profile.evaluate(ts)
    for k, t in enumerate(ts):
        ws, wds = profile.evaluate(float(t))
        assert w[k] == ws and wdot[k] == wds


class TestTabulated:
    def make(self):
        ts = np.linspace(0.0, 10.0, 21)
        return Tabulated(ts, np.sin(ts) + 2.0), ts

    def test_reproduces_samples_at_knots(self):
        profile, ts = self.make()
        w, _ = profile.evaluate(ts)
        np.testing.assert_allclose(w, np.sin(ts) + 2.0, rtol=0.0, atol=1e-13)

    def test_out_of_range(self):
        profile, _ = self.make()
        with pytest.raises(OutOfRange):
            profile.evaluate(-0.1)
        with pytest.raises(OutOfRange):
            profile.evaluate(10.5)

    def test_derivative_consistent(self):
        profile, _ = self.make()
        for t in np.linspace(0.31, 9.7, 40):
            _, wdot = profile.evaluate(t)
            assert wdot == pytest.approx(central_difference(profile, t), rel=1e-5, abs=1e-7)

    def test_validation(self):
        with pytest.raises(ValueError):
            Tabulated(np.array([0.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            Tabulated(np.array([0.0, 0.0, 1.0]), np.array([1.0, 2.0, 3.0]))

    def test_csv_comma_and_whitespace(self, tmp_path):
        comma = tmp_path / "comma.csv"
        comma.write_text("t,omega\n0.0,1.0\n1.0,2.0\n2.0,1.5\n")
        space = tmp_path / "space.csv"
        space.write_text("0.0 1.0\n1.0 2.0\n2.0 1.5\n")
        a = Tabulated.from_csv(comma)
        b = Tabulated.from_csv(space)
        np.testing.assert_array_equal(a.times, b.times)
        np.testing.assert_array_equal(a.omegas, b.omegas)

    def test_csv_bad_row(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("0.0,1.0\nnot,numeric\n")
        with pytest.raises(ValueError):
            Tabulated.from_csv(bad)


def test_profile_invariants():
    with pytest.raises(ValueError):
        TanhRamp(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        Harmonic(1.0, 0.5, -1.0)


class TestAdiabaticity:
    def test_direct_value(self):
        # omega = 2, omega_dot = 0.1 at t = 0
        profile = LinearRamp(2.0, 0.1)
        assert adiabaticity(profile, 0.0) == pytest.approx(0.025, abs=1e-15)

    def test_constant_field_is_zero(self):
        assert adiabaticity(Constant(3.0), 12.0) == 0.0

    def test_divergent_at_zero_crossing(self):
        with pytest.raises(DivergentMetric):
            adiabaticity(LinearRamp(-1.0, 0.5), 2.0)

    def test_profile_variant_masks_instead(self):
        eta = adiabaticity_profile(LinearRamp(-1.0, 0.5), np.array([0.0, 2.0, 4.0]))
        assert np.isinf(eta[1])
        assert np.isfinite(eta[0]) and np.isfinite(eta[2])
