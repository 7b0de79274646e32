import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner_lab.errors import ConvergenceError, DimensionError, DomainError, ParameterError
from loewner_lab.hermitian import (
    DEFAULT_TOL,
    FunctionSpec,
    HermitianMatrix,
    Interval,
    Tolerances,
    apply_fn,
    eig,
    hermitize,
    loewner_geq,
    spectrum_in,
)
from loewner_lab import hermitian

from conftest import random_hermitian_np, random_psd_np

PAULI_Y = [[0, -1j], [1j, 0]]


class TestHermitize:
    def test_fixed_point(self):
        m = np.array([[1, 2 + 1j], [2 - 1j, 3]])
        np.testing.assert_array_equal(hermitize(m).entries, m)

    def test_symmetrizes_nilpotent(self):
        np.testing.assert_array_equal(hermitize([[0, 1], [0, 0]]).entries, [[0, 0.5], [0.5, 0]])

    def test_complex_entry(self):
        np.testing.assert_array_equal(hermitize([[2, 1j], [0, 2]]).entries, [[2, 0.5j], [-0.5j, 2]])

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            hermitize(np.zeros((2, 3)))

    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_exactly_hermitian(self, seed, n):
        rng = np.random.default_rng(seed)
        h = hermitize(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        assert np.array_equal(h.entries, h.entries.conj().T)

    def test_entries_read_only(self):
        h = HermitianMatrix.identity(2)
        with pytest.raises(ValueError):
            h.entries[0, 0] = 5

    def test_arithmetic_stays_exactly_hermitian(self):
        rng = np.random.default_rng(3)
        a, b = random_hermitian_np(rng, 4), random_hermitian_np(rng, 4)
        c = 0.3 * a - b + (-a)
        assert np.array_equal(c.entries, c.entries.conj().T)

    def test_complex_scale_rejected(self):
        with pytest.raises(ParameterError):
            HermitianMatrix.identity(2) * 1j

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            HermitianMatrix.identity(2) + HermitianMatrix.identity(3)


class TestEig:
    def test_diagonal(self, backend):
        d = eig(HermitianMatrix.diag([3, 1]), backend=backend)
        np.testing.assert_array_equal(d.eigenvalues, [1, 3])
        np.testing.assert_allclose(np.abs(d.vectors), [[0, 1], [1, 0]])

    def test_symmetric_2x2(self, backend):
        # char. polynomial (2 - x)^2 - 1
        np.testing.assert_allclose(eig(HermitianMatrix([[2, 1], [1, 2]]), backend=backend).eigenvalues, [1, 3], atol=1e-15)

    def test_pauli_y(self, backend):
        np.testing.assert_allclose(eig(HermitianMatrix(PAULI_Y), backend=backend).eigenvalues, [-1, 1], atol=1e-15)

    def test_zero_and_scalar(self, backend):
        assert eig(HermitianMatrix.zeros(3), backend=backend).eigenvalues.tolist() == [0, 0, 0]
        assert eig(HermitianMatrix.scalar(-2.5), backend=backend).eigenvalues.tolist() == [-2.5]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.sampled_from([1e-6, 1.0, 1e6]))
    def test_reconstruction_and_unitarity(self, seed, n, scale):
        h = random_hermitian_np(np.random.default_rng(seed), n, scale)
        for backend in hermitian.KERNELS:
            d = eig(h, backend=backend)
            assert np.linalg.norm(d.reconstruct() - h.entries) <= 1e-10 * h.frobenius()
            assert np.linalg.norm(d.vectors.conj().T @ d.vectors - np.eye(n)) <= 1e-10
            assert np.all(np.diff(d.eigenvalues) >= 0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 10))
    def test_matches_lapack_oracle(self, seed, n):
        h = random_hermitian_np(np.random.default_rng(seed), n)
        expected = np.linalg.eigvalsh(h.entries)
        np.testing.assert_allclose(eig(h).eigenvalues, expected, atol=1e-12 * max(1, h.frobenius()))

    def test_repeated_eigenvalues(self, backend):
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
        h = HermitianMatrix((q * [1, 1, 1, 2, 2]) @ q.conj().T)
        d = eig(h, backend=backend)
        np.testing.assert_allclose(d.eigenvalues, [1, 1, 1, 2, 2], atol=1e-13)
        assert np.linalg.norm(d.reconstruct() - h.entries) <= 1e-12

    def test_backends_agree(self):
        if len(hermitian.KERNELS) < 2:
            pytest.skip("compiled kernel not built")
        h = random_hermitian_np(np.random.default_rng(5), 9)
        a, b = eig(h, backend="python"), eig(h, backend="cython")
        np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, atol=1e-13)
        assert a.sweeps == b.sweeps

    def test_sweep_cap(self, monkeypatch):
        monkeypatch.setattr(hermitian, "MAX_SWEEPS", 0)
        with pytest.raises(ConvergenceError) as info:
            eig(HermitianMatrix([[1, 1], [1, 1]]), Tolerances(eig_offdiag=1e-13))
        assert info.value.residual > 0

    def test_unknown_backend(self):
        with pytest.raises(ParameterError):
            eig(HermitianMatrix.identity(2), backend="fortran")


class TestApplyFn:
    def test_square_diagonal(self):
        np.testing.assert_array_equal(apply_fn(HermitianMatrix.diag([2, 3]), FunctionSpec.square()).entries, np.diag([4, 9]))

    def test_sqrt_by_hand(self):
        # eigenpairs (1, (1,-1)/sqrt2), (3, (1,1)/sqrt2)
        s3 = math.sqrt(3)
        expected = [[(s3 + 1) / 2, (s3 - 1) / 2], [(s3 - 1) / 2, (s3 + 1) / 2]]
        np.testing.assert_allclose(apply_fn(HermitianMatrix([[2, 1], [1, 2]]), FunctionSpec.power(0.5)).entries, expected, atol=1e-14)

    def test_log_identity(self):
        np.testing.assert_array_equal(apply_fn(HermitianMatrix.identity(2), FunctionSpec.log()).entries, np.zeros((2, 2)))

    def test_power_one_is_identity(self):
        h = random_psd_np(np.random.default_rng(2), 5, 0.1, 2.0)
        out = apply_fn(h, FunctionSpec.power(1.0))
        assert np.linalg.norm(out.entries - h.entries) <= DEFAULT_TOL.equality_slack

    def test_log_of_singular_names_eigenvalue(self):
        with pytest.raises(DomainError) as info:
            apply_fn(HermitianMatrix.diag([0.0, 1.0]), FunctionSpec.log())
        assert info.value.eigenvalue == 0.0
        assert "0.0" in str(info.value)

    def test_sqrt_of_negative_rejected(self):
        with pytest.raises(DomainError):
            apply_fn(HermitianMatrix.diag([-0.1, 1.0]), FunctionSpec.power(0.5))

    def test_sqrt_tolerates_rounding_below_zero(self):
        out = apply_fn(HermitianMatrix.diag([-1e-12, 4.0]), FunctionSpec.power(0.5))
        np.testing.assert_array_equal(out.entries, np.diag([0.0, 2.0]))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_root_then_power_round_trip(self, p):
        rng = np.random.default_rng(p)
        for n in (1, 3, 6):
            h = random_psd_np(rng, n, 0.0, 3.0)
            back = apply_fn(apply_fn(h, FunctionSpec.power(1 / p)), FunctionSpec.power(p))
            assert np.linalg.norm(back.entries - h.entries) <= 1e-9 * h.frobenius()

    def test_log_exp_round_trip(self):
        rng = np.random.default_rng(8)
        for n in (1, 4, 7):
            h = random_psd_np(rng, n, 0.05, 5.0)
            log_h = apply_fn(h, FunctionSpec.log())
            d = eig(log_h)
            back = (d.vectors * np.exp(d.eigenvalues)) @ d.vectors.conj().T
            assert np.linalg.norm(back - h.entries) <= 1e-9 * h.frobenius()

    @pytest.mark.parametrize(
        "f",
        [FunctionSpec.power(0.5), FunctionSpec.power(1 / 3), FunctionSpec.log(), FunctionSpec.neg_t_log_t(),
         FunctionSpec.one_minus_t_power(0.5), FunctionSpec.square(), FunctionSpec.identity()],
        ids=str,
    )
    def test_diagonal_matches_scalar(self, f):
        values = [0.1, 0.35, 0.6, 0.95]
        out = apply_fn(HermitianMatrix.diag(values), f)
        expected = [f(np.array([v]))[0] for v in values]
        np.testing.assert_allclose(np.diag(out.entries).real, expected, rtol=0, atol=1e-12)
        assert np.count_nonzero(out.entries - np.diag(np.diag(out.entries))) == 0


class TestLoewner:
    def test_strict(self):
        r = loewner_geq(HermitianMatrix.diag([2, 2]), HermitianMatrix.diag([1, 1]))
        assert r.passed and r.min_gap_eigenvalue == 1.0

    def test_indefinite(self):
        r = loewner_geq(HermitianMatrix.diag([1, -0.1]), HermitianMatrix.zeros(2))
        assert not r.passed and r.min_gap_eigenvalue == pytest.approx(-0.1, abs=1e-15)

    def test_boundary(self):
        # gap [[1,1],[1,1]] has spectrum {0, 2}
        r = loewner_geq(HermitianMatrix([[2, 1], [1, 2]]), HermitianMatrix.identity(2))
        assert r.passed and abs(r.min_gap_eigenvalue) <= 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            loewner_geq(HermitianMatrix.identity(2), HermitianMatrix.identity(3))

    def test_slack_is_relative(self):
        big = 1e6 * HermitianMatrix.identity(2)
        assert loewner_geq(big, big + HermitianMatrix.diag([1e-3, 0])).passed
        assert not loewner_geq(HermitianMatrix.zeros(2), HermitianMatrix.diag([1e-6, 0])).passed

    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    def test_reflexive(self, seed, n):
        x = random_hermitian_np(np.random.default_rng(seed), n)
        r = loewner_geq(x, x)
        assert r.passed and abs(r.min_gap_eigenvalue) <= DEFAULT_TOL.equality_slack


class TestSpectrumIn:
    def test_open_interval(self):
        assert spectrum_in(HermitianMatrix.diag([0.2, 0.8]), Interval.open(0, 1))
        assert not spectrum_in(HermitianMatrix.diag([0.0, 0.5]), Interval.open(0, 1))

    def test_closed_interval(self):
        assert spectrum_in(HermitianMatrix([[2, 1], [1, 2]]), Interval.closed(1, 3))

    def test_closed_grace(self):
        assert spectrum_in(HermitianMatrix.diag([-1e-12, 1.0]), Interval.closed(0, 1))
        assert not spectrum_in(HermitianMatrix.diag([-1e-3, 1.0]), Interval.closed(0, 1))


class TestTypes:
    def test_interval_invariants(self):
        Interval.closed(2, 2)
        with pytest.raises(ParameterError):
            Interval(2, 2, True, False)
        with pytest.raises(ParameterError):
            Interval.closed(1, 0)

    def test_tolerance_defaults(self):
        assert Tolerances() == Tolerances(1e-13, 1e-8, 1e-9)
        with pytest.raises(ParameterError):
            Tolerances(psd_slack=0)

    def test_function_domains(self):
        assert FunctionSpec.log().domain == Interval(0, math.inf, True, True)
        assert FunctionSpec.neg_t_log_t().domain.open_lo
        dom = FunctionSpec.one_minus_t_power(0.5).domain
        assert dom.hi == 1.0 and not dom.open_hi and dom.lo == -math.inf

    def test_concavity_flags(self):
        assert FunctionSpec.power(0.5).is_operator_concave
        assert not FunctionSpec.power(2).is_operator_concave
        assert not FunctionSpec.square().is_operator_concave

    @pytest.mark.parametrize(
        "text,expected",
        [("power:0.5", FunctionSpec.power(0.5)), ("power:1/3", FunctionSpec.power(1 / 3)), ("log", FunctionSpec.log()),
         ("negtlogt", FunctionSpec.neg_t_log_t()), ("square", FunctionSpec.square())],
    )
    def test_parse(self, text, expected):
        assert FunctionSpec.parse(text) == expected

    def test_parse_errors(self):
        with pytest.raises(ParameterError):
            FunctionSpec.parse("power")
        with pytest.raises(ParameterError):
            FunctionSpec.parse("cosh")
