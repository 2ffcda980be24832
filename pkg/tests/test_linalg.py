import numpy as np
import pytest

from spinpair.errors import NonHermitianInput, NonNormalizedState, NonUnitaryInput
from spinpair.linalg import (
    IDENTITY_2,
    IDENTITY_4,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    assert_hermitian,
    assert_unitary,
    dagger,
    expm_unitary,
    fidelity,
    hermiticity_defect,
    kron2,
    unitarity_defect,
)


def kron_oracle(a, b):
    """Elementwise tensor product, independent of numpy.kron."""
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + k, 2 * j + l] = a[i, j] * b[k, l]
    return out


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m + dagger(m)


class TestKron2:
    def test_sigma_z_identity_is_diagonal(self):
        np.testing.assert_array_equal(
            kron2(SIGMA_Z, IDENTITY_2), np.diag([1.0, 1.0, -1.0, -1.0])
        )

    def test_identity_identity(self):
        np.testing.assert_array_equal(kron2(IDENTITY_2, IDENTITY_2), IDENTITY_4)

    def test_xx_is_antidiagonal_ones(self):
        expected = np.fliplr(np.eye(4)).astype(complex)
        np.testing.assert_array_equal(kron2(SIGMA_X, SIGMA_X), expected)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_elementwise_oracle(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        np.testing.assert_allclose(kron2(a, b), kron_oracle(a, b), atol=1e-15)

    def test_bilinear(self):
        rng = np.random.default_rng(3)
        a, a2, b = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                    for _ in range(3))
        np.testing.assert_allclose(
            kron2(a + a2, b), kron2(a, b) + kron2(a2, b), atol=1e-15
        )

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            kron2(np.eye(3), np.eye(2))


class TestExpmUnitary:
    def test_diagonal_case(self):
        a = 0.7
        u = expm_unitary(SIGMA_Z, a)
        np.testing.assert_allclose(
            u, np.diag([np.exp(-1j * a), np.exp(1j * a)]), atol=1e-15
        )

    def test_zero_scale_is_identity(self):
        rng = np.random.default_rng(0)
        h = random_hermitian(rng, 4)
        np.testing.assert_allclose(expm_unitary(h, 0.0), IDENTITY_4, atol=1e-15)

    def test_quarter_turn_x(self):
        # closed form against a plain series summation
        u = expm_unitary(SIGMA_X, np.pi / 2)
        np.testing.assert_allclose(u, -1j * SIGMA_X, atol=1e-15)
        series = np.zeros((2, 2), dtype=complex)
        term = np.eye(2, dtype=complex)
        for k in range(1, 40):
            series += term
            term = term @ (-1j * (np.pi / 2) * SIGMA_X) / k
        np.testing.assert_allclose(u, series, atol=1e-14)

    @pytest.mark.parametrize("n", [2, 4])
    def test_semigroup_property(self, n):
        rng = np.random.default_rng(42)
        for _ in range(50):
            h = random_hermitian(rng, n)
            s1, s2 = rng.normal(size=2)
            combined = expm_unitary(h, s1) @ expm_unitary(h, s2)
            direct = expm_unitary(h, s1 + s2)
            assert np.max(np.abs(combined - direct)) <= 1e-10

    @pytest.mark.parametrize("n", [2, 4])
    def test_output_unitary(self, n):
        rng = np.random.default_rng(7)
        for _ in range(50):
            u = expm_unitary(random_hermitian(rng, n), rng.normal())
            assert unitarity_defect(u) <= 1e-10

    def test_batched_matches_loop(self):
        rng = np.random.default_rng(11)
        hs = np.stack([random_hermitian(rng, 2) for _ in range(6)])
        batch = expm_unitary(hs, 0.3)
        for k in range(6):
            np.testing.assert_allclose(batch[k], expm_unitary(hs[k], 0.3), atol=1e-14)

    def test_vanishing_pauli_part(self):
        # pure c0 piece: removable singularity in sin(s|c|)/|c|
        h = 2.0 * IDENTITY_2
        np.testing.assert_allclose(
            expm_unitary(h, 0.5), np.exp(-1j) * IDENTITY_2, atol=1e-15
        )

    def test_rejects_non_hermitian(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NonHermitianInput):
            expm_unitary(bad, 1.0)

    def test_hermiticity_defect_reported(self):
        assert hermiticity_defect(SIGMA_Y) == 0.0


class TestTagChecks:
    def test_hermitian_tag(self):
        assert_hermitian(SIGMA_Y)
        almost = SIGMA_Y + 1e-11 * np.array([[0, 1], [0, 0]])
        with pytest.raises(NonHermitianInput):
            assert_hermitian(almost)  # defect above the 1e-12 tag tolerance

    def test_unitary_tag(self):
        assert_unitary(expm_unitary(SIGMA_X, 0.4))
        with pytest.raises(NonUnitaryInput):
            assert_unitary(np.diag([1.0, 1.0 + 1e-9]))


class TestFidelity:
    def test_self_overlap(self):
        psi = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
        assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-14)

    def test_orthogonal_basis_states(self):
        e1 = np.array([1, 0, 0, 0], dtype=complex)
        e2 = np.array([0, 1, 0, 0], dtype=complex)
        assert fidelity(e1, e2) == 0.0

    def test_equal_superposition(self):
        e2 = np.array([0, 1, 0, 0], dtype=complex)
        e3 = np.array([0, 0, 1, 0], dtype=complex)
        plus = (e2 + e3) / np.sqrt(2)
        assert fidelity(plus, e2) == pytest.approx(0.5, abs=1e-14)

    def test_rejects_unnormalized(self):
        with pytest.raises(NonNormalizedState):
            fidelity(np.array([1, 1, 0, 0], dtype=complex),
                     np.array([1, 0, 0, 0], dtype=complex))
