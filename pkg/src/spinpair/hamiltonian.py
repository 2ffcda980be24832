"""Instantaneous two-spin Hamiltonian with an axially symmetric hyperfine tensor.

Basis ordering throughout the package is the product basis
``|++>, |+->, |-+>, |-->`` where the first slot is the spin that defines the
frequency unit (e.g. the electron) and the second carries the relative factor
``zeta``.  In this basis the Hamiltonian splits, for a field along or across
the symmetry axis, into a central 2x2 block on ``{|+->, |-+>}`` and a corner
2x2 block on ``{|++>, |-->}``.

The Hamiltonian is linear in the drive: ``H(t) = omega(t) * P + K`` with a
constant field-coupling matrix ``P`` and a constant hyperfine matrix ``K``.
That split is what the batched propagators rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrientation
from .fields import FieldProfile
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, kron2

THETA_PARALLEL = 0.0
THETA_PERPENDICULAR = math.pi / 2


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the pair plus the driving profile.

    a_par / a_perp: hyperfine constants along and across the symmetry axis,
    in frequency units.  zeta: ratio of the second spin's gyromagnetic energy
    scale to the first's (small for an electron-nucleus pair, but any finite
    value is accepted).  theta: angle in radians between the field direction
    and the symmetry axis; the closed-form machinery covers 0 and pi/2, other
    values are usable only with the brute-force lab-frame propagator.
    """

    a_par: float
    a_perp: float
    zeta: float
    theta: float
    profile: FieldProfile

    def __post_init__(self):
        for name in ("a_par", "a_perp", "zeta", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not 0.0 <= self.theta <= THETA_PERPENDICULAR:
            raise ValueError("theta must lie in [0, pi/2]")
        if not isinstance(self.profile, FieldProfile):
            raise TypeError("profile must be a FieldProfile")

    @property
    def is_parallel(self) -> bool:
        return self.theta == THETA_PARALLEL

    @property
    def is_perpendicular(self) -> bool:
        return self.theta == THETA_PERPENDICULAR

    @property
    def is_special_orientation(self) -> bool:
        return self.is_parallel or self.is_perpendicular

    def require_special_orientation(self) -> None:
        if not self.is_special_orientation:
            raise UnsupportedOrientation(
                f"theta = {self.theta!r}: closed-form treatment exists only for "
                "the field along (0) or across (pi/2) the symmetry axis"
            )

    def delta_a(self) -> float:
        """Anisotropy seen by the frame angles: (a_par - a_perp) * sin(theta)**2."""
        return (self.a_par - self.a_perp) * math.sin(self.theta) ** 2

    def omega(self, t):
        """Shortcut for ``profile.evaluate(t)``."""
        return self.profile.evaluate(t)


def field_coupling_matrix(params: SystemParams) -> np.ndarray:
    """Constant matrix multiplying omega(t): Zeeman action on both spins."""
    p = np.zeros((4, 4), dtype=complex)
    up = 0.5 * (1.0 + params.zeta)
    um = 0.5 * (1.0 - params.zeta)
    p[0, 0] = up
    p[1, 1] = um
    p[2, 2] = -um
    p[3, 3] = -up
    return p


def static_matrix(params: SystemParams) -> np.ndarray:
    """Constant hyperfine matrix for the given orientation.

    For theta in {0, pi/2} the entries are written out directly so the
    block-sparsity zeros are exact; for general theta the matrix is assembled
    from Pauli tensor products with the axis in the x-z plane (the azimuthal
    angle is immaterial by axial symmetry).
    """
    a_par, a_perp = params.a_par, params.a_perp
    if params.is_parallel:
        k = np.zeros((4, 4), dtype=complex)
        k[0, 0] = a_par
        k[1, 1] = -a_par
        k[2, 2] = -a_par
        k[3, 3] = a_par
        k[1, 2] = k[2, 1] = 2.0 * a_perp
        return k
    if params.is_perpendicular:
        k = np.zeros((4, 4), dtype=complex)
        k[0, 0] = a_perp
        k[1, 1] = -a_perp
        k[2, 2] = -a_perp
        k[3, 3] = a_perp
        k[1, 2] = k[2, 1] = a_par + a_perp
        k[0, 3] = k[3, 0] = a_par - a_perp
        return k
    axis = math.sin(params.theta) * SIGMA_X + math.cos(params.theta) * SIGMA_Z
    k = a_perp * (
        kron2(SIGMA_X, SIGMA_X) + kron2(SIGMA_Y, SIGMA_Y) + kron2(SIGMA_Z, SIGMA_Z)
    )
    k += (a_par - a_perp) * kron2(axis, axis)
    return k


def build_hamiltonian(params: SystemParams, t) -> np.ndarray:
    """H(t) = omega(t) * P + K in the product basis; Hermitian by construction."""
    w, _ = params.profile.evaluate(t)
    return w * field_coupling_matrix(params) + static_matrix(params)


def hamiltonian_batch(params: SystemParams, times: np.ndarray) -> np.ndarray:
    """Stacked H(t_k) for an array of times, shape ``(len(times), 4, 4)``."""
    w, _ = params.profile.evaluate(np.asarray(times, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    return w[:, None, None] * field_coupling_matrix(params) + static_matrix(params)


def closed_eigenvalues(params: SystemParams, t) -> tuple[float, float, float, float]:
    """Closed-form spectrum (eps1, eps2, eps3, eps4) for theta in {0, pi/2}.

    Index order follows the sign convention of the block split: eps1/eps2
    carry the upper sign of the corner/central pair, eps4/eps3 the lower.
    For the field along the axis the corner pair is the exact linear form
    ``a_par +/- omega (1 + zeta) / 2`` (sign-carrying, so eps1 < eps4 when
    omega < 0); the other pairs are radical forms and always ordered.
    """
    params.require_special_orientation()
    w, _ = params.profile.evaluate(t)
    a_par, a_perp, zeta = params.a_par, params.a_perp, params.zeta
    if params.is_parallel:
        half = 0.5 * w * (1.0 + zeta)
        r23 = 0.5 * math.sqrt((4.0 * a_perp) ** 2 + (w * (1.0 - zeta)) ** 2)
        return (a_par + half, -a_par + r23, -a_par - r23, a_par - half)
    r14 = 0.5 * math.sqrt(4.0 * (a_par - a_perp) ** 2 + (w * (1.0 + zeta)) ** 2)
    r23 = 0.5 * math.sqrt(4.0 * (a_par + a_perp) ** 2 + (w * (1.0 - zeta)) ** 2)
    return (a_perp + r14, -a_perp + r23, -a_perp - r23, a_perp - r14)
