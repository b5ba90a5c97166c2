import numpy as np
import pytest
from numpy.testing import assert_allclose

from quatdmd.dmd import ExactDMD, dmd_reconstruct, exact_dmd
from quatdmd.errors import (
    InsufficientDataError,
    LogSingularityError,
    RankError,
)


def trajectory(operator, x0, n_snapshots):
    cols = [np.asarray(x0, dtype=np.float64)]
    for _ in range(n_snapshots - 1):
        cols.append(operator @ cols[-1])
    return np.column_stack(cols)


class TestKnownSpectra:
    def test_decaying_diagonal(self):
        X = trajectory(np.diag([0.9, 0.5]), [1.0, 1.0], 10)
        model = exact_dmd(X)
        assert_allclose(sorted(model.eigenvalues_.real), [0.5, 0.9], atol=1e-8)
        assert np.max(np.abs(model.eigenvalues_.imag)) < 1e-8

    def test_rotation_pair(self):
        theta = 0.1
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        model = exact_dmd(trajectory(rot, [1.0, 0.0], 10))
        expected = sorted([np.exp(1j * theta), np.exp(-1j * theta)],
                          key=lambda z: z.imag)
        got = sorted(model.eigenvalues_, key=lambda z: z.imag)
        assert_allclose(got, expected, atol=1e-8)

    def test_omegas_are_scaled_logs(self):
        dt = 0.5
        model = exact_dmd(trajectory(np.diag([0.9, 0.5]), [1.0, 1.0], 10), dt=dt)
        assert_allclose(sorted(model.omegas_.real),
                        sorted([np.log(0.5) / dt, np.log(0.9) / dt]), atol=1e-8)

    def test_conjugate_closure(self, rng):
        a = rng.standard_normal((6, 6))
        a *= 0.9 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(6), 20)
        values = exact_dmd(X).eigenvalues_
        for v in values:
            assert np.min(np.abs(values - np.conj(v))) < 1e-8


class TestReconstruction:
    def test_time_zero_returns_first_snapshot(self, rng):
        a = rng.standard_normal((4, 4))
        a *= 0.8 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(4), 12)
        model = exact_dmd(X)
        assert_allclose(model.reconstruct([0.0])[:, 0], X[:, 0],
                        atol=1e-6 * np.linalg.norm(X[:, 0]))

    def test_training_window(self, rng):
        a = rng.standard_normal((5, 5))
        a *= 0.9 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(5), 15)
        model = exact_dmd(X)
        recon = model.reconstruct(np.arange(15, dtype=float))
        assert np.linalg.norm(recon - X) <= 1e-6 * np.linalg.norm(X)

    def test_respects_dt(self, rng):
        a = np.diag([0.9, 0.6])
        X = trajectory(a, [1.0, 2.0], 10)
        model = exact_dmd(X, dt=0.25)
        recon = model.reconstruct(np.arange(10) * 0.25)
        assert np.linalg.norm(recon - X) <= 1e-6 * np.linalg.norm(X)

    def test_output_is_real(self, rng):
        theta = 0.3
        rot = np.array([[np.cos(theta), -np.sin(theta)],
                        [np.sin(theta), np.cos(theta)]])
        model = exact_dmd(trajectory(rot, [1.0, 0.0], 12))
        recon = model.reconstruct(np.arange(12, dtype=float))
        assert recon.dtype == np.float64

    def test_module_level_alias(self, rng):
        X = trajectory(np.diag([0.9, 0.5]), [1.0, 1.0], 10)
        model = exact_dmd(X)
        assert_allclose(dmd_reconstruct(model, [0.0, 1.0]),
                        model.reconstruct([0.0, 1.0]))

    def test_predict_advances_one_step(self, rng):
        a = rng.standard_normal((4, 4))
        a *= 0.8 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(4), 12)
        model = exact_dmd(X)
        states = X[:, :3]
        assert_allclose(model.predict(states), a @ states, atol=1e-6)


class TestRankHandling:
    def test_default_rank_truncates_to_numerical_rank(self, rng):
        basis = rng.standard_normal((10, 3))
        coords = rng.standard_normal((3, 8))
        X = basis @ coords
        model = exact_dmd(X)
        assert model.numerical_rank_ == 3
        assert model.rank_ == 3

    def test_requested_rank_above_numerical_rank(self, rng):
        basis = rng.standard_normal((10, 3))
        coords = rng.standard_normal((3, 8))
        with pytest.raises(RankError):
            exact_dmd(basis @ coords, rank=5)

    def test_nonpositive_rank(self, rng):
        X = rng.standard_normal((4, 6))
        with pytest.raises(RankError):
            exact_dmd(X, rank=0)

    def test_explicit_truncation(self, rng):
        a = rng.standard_normal((6, 6))
        a *= 0.9 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(6), 20)
        model = exact_dmd(X, rank=2)
        assert model.rank_ == 2
        assert model.modes_.shape == (6, 2)
        assert model.singular_values_.shape == (2,)


class TestErrors:
    def test_single_snapshot_rejected(self):
        with pytest.raises(InsufficientDataError):
            exact_dmd(np.ones((4, 1)))

    def test_zero_eigenvalue_has_no_exponent(self):
        X = np.eye(2)
        Y = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(LogSingularityError):
            exact_dmd(X, Y)

    def test_paired_shapes_must_match(self):
        with pytest.raises(Exception):
            exact_dmd(np.ones((4, 3)), np.ones((4, 2)))


class TestEstimatorShape:
    def test_get_params(self):
        model = ExactDMD(rank=3, dt=0.5)
        assert model.get_params() == {"rank": 3, "dt": 0.5}

    def test_clone(self):
        from sklearn.base import clone
        model = ExactDMD(rank=2)
        twin = clone(model)
        assert twin.get_params() == model.get_params()

    def test_paired_api_matches_split(self, rng):
        a = rng.standard_normal((4, 4))
        a *= 0.8 / np.abs(np.linalg.eigvals(a)).max()
        X = trajectory(a, rng.standard_normal(4), 12)
        via_split = exact_dmd(X)
        via_pairs = exact_dmd(X[:, :-1], X[:, 1:])
        assert_allclose(via_pairs.eigenvalues_, via_split.eigenvalues_,
                        atol=1e-12)
        assert_allclose(via_pairs.amplitudes_, via_split.amplitudes_,
                        atol=1e-12)
