"""Scalar driving profiles: the field frequency omega(t) and its analytic rate.

The field enters the dynamics only through omega(t), expressed in the same
frequency units as the hyperfine constants.  Every profile kind returns both
the value and its analytic time derivative, because the frame machinery needs
the rate exactly, not through finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DivergentMetric, OutOfRange

OMEGA_SINGULAR = 1e-12


class FieldProfile:
    """Base interface: ``evaluate(t) -> (omega, omega_dot)``."""

    def _values(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def evaluate(self, t):
        """Value and rate at time(s) ``t``; scalars in, scalars out."""
        arr = np.asarray(t, dtype=float)
        w, wdot = self._values(np.atleast_1d(arr).astype(float))
        if arr.ndim == 0:
            return float(w[0]), float(wdot[0])
        return w.reshape(arr.shape), wdot.reshape(arr.shape)


@dataclass(frozen=True)
class Constant(FieldProfile):
    """Fixed field, omega(t) = omega0."""

    omega0: float

    def _values(self, t):
        return np.full(t.shape, float(self.omega0)), np.zeros(t.shape)


@dataclass(frozen=True)
class LinearRamp(FieldProfile):
    """omega(t) = omega_start + rate * t."""

    omega_start: float
    rate: float

    def _values(self, t):
        return self.omega_start + self.rate * t, np.full(t.shape, float(self.rate))


@dataclass(frozen=True)
class TanhRamp(FieldProfile):
    """Smooth sweep omega(t) = omega_mid + amplitude * tanh(t / tau).

    The midpoint sits at t = 0; grids may start at negative times to cover
    the approach.
    """

    omega_mid: float
    amplitude: float
    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError("tanh ramp timescale tau must be positive")

    def _values(self, t):
        x = t / self.tau
        # sech(x) assembled from decaying exponentials so large |x| cannot overflow
        e = np.exp(-np.abs(x))
        sech = 2.0 * e / (1.0 + e * e)
        return (
            self.omega_mid + self.amplitude * np.tanh(x),
            (self.amplitude / self.tau) * sech * sech,
        )


@dataclass(frozen=True)
class Harmonic(FieldProfile):
    """omega(t) = omega0 + amplitude * cos(angular_frequency * t + phase)."""

    omega0: float
    amplitude: float
    angular_frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if self.angular_frequency < 0.0:
            raise ValueError("harmonic angular frequency must be non-negative")

    def _values(self, t):
        arg = self.angular_frequency * t + self.phase
        return (
            self.omega0 + self.amplitude * np.cos(arg),
            -self.amplitude * self.angular_frequency * np.sin(arg),
        )


@dataclass(frozen=True, eq=False)
class Tabulated(FieldProfile):
    """Sampled profile interpolated by a monotone (shape-preserving) cubic.

    The interpolant is C1, so the derivative used by the gauge term is
    continuous; it never overshoots the samples.  Queries outside the sample
    range raise :class:`OutOfRange`.
    """

    times: np.ndarray
    omegas: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        omegas = np.asarray(self.omegas, dtype=float)
        if times.ndim != 1 or omegas.ndim != 1 or times.size != omegas.size:
            raise ValueError("tabulated profile needs matching 1-d time/omega arrays")
        if times.size < 2:
            raise ValueError("tabulated profile needs at least two samples")
        if not np.all(np.diff(times) > 0.0):
            raise ValueError("tabulated sample times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omegas", omegas)
        interp = PchipInterpolator(times, omegas)
        object.__setattr__(self, "_interp", interp)
        object.__setattr__(self, "_deriv", interp.derivative())

    def _values(self, t):
        if np.any(t < self.times[0]) or np.any(t > self.times[-1]):
            raise OutOfRange(
                f"query outside tabulated range [{self.times[0]}, {self.times[-1]}]"
            )
        return self._interp(t), self._deriv(t)

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        """Load two columns (t, omega); header optional, comma or whitespace split."""
        times: list[float] = []
        omegas: list[float] = []
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if not times:
                    continue  # header row
                raise ValueError(f"{path}:{lineno}: non-numeric data row {line!r}")
            if len(values) < 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            times.append(values[0])
            omegas.append(values[1])
        return cls(np.asarray(times), np.asarray(omegas))


def omega_eval(profile: FieldProfile, t):
    """Field value and analytic rate at time(s) ``t``."""
    return profile.evaluate(t)


def adiabaticity(profile: FieldProfile, t) -> float:
    """Rate-of-change metric omega_dot / omega**2 (dimensionless).

    Diverges where omega vanishes; that is reported as an error rather than
    clamped, because the metric genuinely loses meaning there even though the
    dynamics stay perfectly regular.
    """
    w, wdot = profile.evaluate(t)
    if np.any(np.abs(np.asarray(w)) < OMEGA_SINGULAR):
        raise DivergentMetric("omega passes through zero; omega_dot/omega^2 diverges")
    return wdot / np.asarray(w) ** 2


def adiabaticity_profile(profile: FieldProfile, t: np.ndarray) -> np.ndarray:
    """Array variant for reports: +inf where the metric diverges, no error."""
    w, wdot = profile.evaluate(np.asarray(t, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    wdot = np.atleast_1d(np.asarray(wdot, dtype=float))
    out = np.full(w.shape, np.inf)
    ok = np.abs(w) >= OMEGA_SINGULAR
    out[ok] = wdot[ok] / w[ok] ** 2
    return out
