import numpy as np
import pytest

from symcompress.noise import (
    CompressedStorage,
    RotationNoise,
    average_fidelity,
    rotation_unitary,
    run_compressed,
    run_uncompressed,
    sampled_fidelities,
    simulate_uncompressed,
)
from symcompress.statevec import ValidationError
from symcompress.symmetric import QubitParams

# sphere average of |<psi|R|psi>|^14 at angle 0.1, from the exact expansion
# 1/2 int_{-1}^{1} (cos^2(phi/2) + sin^2(phi/2) t^2)^7 dt
UNCOMPRESSED_GLOBAL_N7_PHI01 = 0.9884126869134121

PLUS = QubitParams(2**-0.5, 2**-0.5)
ZERO = QubitParams(1, 0)
ONE = QubitParams(0, 1)


def random_noise(rng, angle=None):
    axis = rng.standard_normal(3)
    return RotationNoise(tuple(axis / np.linalg.norm(axis)), rng.uniform(0, np.pi) if angle is None else angle)


def random_params(rng):
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v /= np.linalg.norm(v)
    return QubitParams(complex(v[0]), complex(v[1]))


class TestRotation:
    def test_zero_angle(self):
        np.testing.assert_array_equal(rotation_unitary(RotationNoise((0, 0, 1), 0.0)), np.eye(2))

    def test_z_axis_closed_form(self):
        phi = 0.37
        expected = np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
        np.testing.assert_allclose(rotation_unitary(RotationNoise((0, 0, 1), phi)), expected, atol=1e-15)

    def test_matches_matrix_exponential(self):
        from scipy.linalg import expm

        rng = np.random.default_rng(0)
        paulis = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
        for _ in range(20):
            noise = random_noise(rng)
            gen = sum(n * p for n, p in zip(noise.axis, paulis))
            np.testing.assert_allclose(rotation_unitary(noise), expm(-0.5j * noise.angle * gen), atol=1e-13)

    def test_special_unitary(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            r = rotation_unitary(random_noise(rng))
            assert abs(np.linalg.det(r) - 1) < 1e-12
            assert np.max(np.abs(r.conj().T @ r - np.eye(2))) < 1e-12

    def test_axis_validated(self):
        with pytest.raises(ValidationError):
            RotationNoise((1, 1, 0), 0.1)


class TestUncompressed:
    def test_examples(self):
        np.testing.assert_allclose(run_uncompressed(5, PLUS, RotationNoise((0, 0, 1), 0.0)), (1, 1), atol=1e-15)
        phi = 0.3
        g, s = run_uncompressed(4, PLUS, RotationNoise((0, 0, 1), phi))
        assert s == pytest.approx(np.cos(phi / 2) ** 2, abs=1e-14)
        assert g == pytest.approx(np.cos(phi / 2) ** 8, abs=1e-14)
        assert run_uncompressed(6, ZERO, RotationNoise((0, 0, 1), 1.1))[0] == pytest.approx(1, abs=1e-15)

    def test_agrees_with_simulation(self):
        rng = np.random.default_rng(2)
        for N in range(1, 11):
            psi, noise = random_params(rng), random_noise(rng)
            np.testing.assert_allclose(run_uncompressed(N, psi, noise),
                                       simulate_uncompressed(N, psi, noise), atol=1e-12)


class TestCompressed:
    def test_zero_angle_round_trip(self):
        rng = np.random.default_rng(3)
        for N in (2, 3, 6, 9):
            g, s = run_compressed(N, random_params(rng), RotationNoise((1, 0, 0), 0.0))
            assert g == pytest.approx(1, abs=1e-12)
            assert s == pytest.approx(1, abs=1e-12)

    def test_all_qubits_identical_at_seven(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            psi, noise = random_params(rng), random_noise(rng)
            singles = [run_compressed(7, psi, noise, qubit=q)[1] for q in range(1, 8)]
            assert max(singles) - min(singles) <= 1e-10

    @pytest.mark.parametrize("N", [3, 4, 7, 10])
    @pytest.mark.parametrize("psi", [ZERO, ONE], ids=["zero", "one"])
    def test_basis_inputs_survive_z_noise(self, N, psi):
        g, s = run_compressed(N, psi, RotationNoise((0, 0, 1), 0.8))
        assert g == pytest.approx(1, abs=1e-10)
        assert s == pytest.approx(1, abs=1e-10)

    def test_needs_two_copies(self):
        with pytest.raises(ValueError):
            run_compressed(1, ZERO, RotationNoise((0, 0, 1), 0.1))

    @pytest.mark.parametrize("N", [2, 3, 5, 7, 8])
    def test_batched_storage_matches_pipeline(self, N):
        rng = np.random.default_rng(N)
        storage = CompressedStorage(N)
        params = [random_params(rng) for _ in range(6)]
        noises = [random_noise(rng) for _ in range(6)]
        psis = np.array([[p.alpha, p.beta] for p in params])
        rots = np.array([rotation_unitary(n) for n in noises])
        glob, single = storage.fidelities(psis, rots)
        for i in range(6):
            np.testing.assert_allclose((glob[i], single[i]), run_compressed(N, params[i], noises[i]), atol=1e-12)


class TestAverage:
    @pytest.mark.parametrize("scenario", ["uncompressed", "compressed"])
    @pytest.mark.parametrize("metric", ["global", "single_qubit"])
    @pytest.mark.parametrize("policy", ["averaged", "z", (0.6, 0.0, 0.8)])
    def test_zero_angle_is_one(self, scenario, metric, policy):
        rec = average_fidelity(5, 0.0, scenario, metric, policy, samples=50, rng_seed=1)
        assert rec.mean_fidelity == pytest.approx(1, abs=1e-12)

    def test_uncompressed_global_against_quadrature(self):
        from scipy.integrate import quad

        c, s = np.cos(0.05) ** 2, np.sin(0.05) ** 2
        oracle = quad(lambda t: (c + s * t * t) ** 7, -1, 1, epsabs=1e-13)[0] / 2
        assert oracle == pytest.approx(UNCOMPRESSED_GLOBAL_N7_PHI01, abs=1e-12)
        for policy in ("averaged", "x", "z"):
            rec = average_fidelity(7, 0.1, "uncompressed", "global", policy, samples=2000, rng_seed=11)
            assert abs(rec.mean_fidelity - UNCOMPRESSED_GLOBAL_N7_PHI01) < 3 * rec.stderr

    def test_compressed_beats_uncompressed_at_seven(self):
        c = average_fidelity(7, 0.1, "compressed", "global", samples=2000, rng_seed=2)
        u = average_fidelity(7, 0.1, "uncompressed", "global", samples=2000, rng_seed=2)
        assert c.mean_fidelity > u.mean_fidelity

    def test_deterministic(self):
        a = average_fidelity(6, 0.3, "compressed", "single_qubit", "averaged", 200, 42)
        b = average_fidelity(6, 0.3, "compressed", "single_qubit", "averaged", 200, 42)
        assert a == b
        c = average_fidelity(6, 0.3, "compressed", "single_qubit", "averaged", 200, 43)
        assert c != a

    def test_chunking_does_not_change_samples(self):
        a = sampled_fidelities(5, 0.4, "compressed", "global", "averaged", 100, 5, chunk=7)
        b = sampled_fidelities(5, 0.4, "compressed", "global", "averaged", 100, 5, chunk=100)
        np.testing.assert_array_equal(a, b)

    def test_sample_bounds(self):
        for scenario in ("uncompressed", "compressed"):
            for metric in ("global", "single_qubit"):
                vals = sampled_fidelities(6, 2.5, scenario, metric, "averaged", 300, 9)
                assert np.all(vals >= 0) and np.all(vals <= 1 + 1e-12)

    def test_uncompressed_single_axis_independent(self):
        recs = [average_fidelity(5, 0.4, "uncompressed", "single_qubit", ax, 2000, 13) for ax in "xyz"]
        for r1 in recs:
            for r2 in recs:
                assert abs(r1.mean_fidelity - r2.mean_fidelity) <= 3 * np.hypot(r1.stderr, r2.stderr)

    def test_continuity(self):
        for scenario in ("uncompressed", "compressed"):
            rec = average_fidelity(7, 1e-6, scenario, "global", samples=200, rng_seed=0)
            assert 1 - rec.mean_fidelity <= 1e-6

    def test_record_fields(self):
        rec = average_fidelity(3, 0.1, "compressed", "global", (0.0, 1.0, 0.0), 10, 7)
        assert rec.axis_policy == "fixed(0.0,1.0,0.0)"
        assert (rec.samples, rec.rng_seed, rec.N) == (10, 7, 3)
        assert 0 <= rec.mean_fidelity <= 1

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            average_fidelity(3, 0.1, "compressed", "global", samples=0)
        with pytest.raises(ValueError):
            average_fidelity(3, 0.1, "stored", "global")
        with pytest.raises(ValueError):
            average_fidelity(3, 0.1, "compressed", "local")
        with pytest.raises(ValueError):
            average_fidelity(3, 0.1, "compressed", "global", "w")
