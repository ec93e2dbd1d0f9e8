import math

import numpy as np
import pytest

from weakmeas import (
    Observable,
    PolarAngle,
    QubitState,
    diag_states,
    inner_product,
    linear_pol_state,
    matrix_element,
    stokes_hv,
)

SQRT2 = math.sqrt(2.0)


def assert_same_ray(state, amp_h, amp_v, tol=1e-12):
    """States are physically identical up to a global phase."""
    got = state.vector()
    want = np.array([amp_h, amp_v], dtype=complex)
    want /= np.linalg.norm(want)
    overlap = abs(np.vdot(want, got))
    assert overlap == pytest.approx(1.0, abs=tol)


class TestPolarAngle:
    def test_reduced_mod_360(self):
        assert PolarAngle(450.0).degrees == 90.0
        assert PolarAngle(-90.0).degrees == 270.0
        assert PolarAngle(360.0).degrees == 0.0

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            PolarAngle(float("nan"))


class TestQubitState:
    def test_normalizes_input(self):
        s = QubitState(3.0, 4.0)
        assert abs(s.amp_h) ** 2 + abs(s.amp_v) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert s.amp_h == pytest.approx(0.6)

    def test_rejects_zero_vector(self):
        with pytest.raises(ValueError):
            QubitState(0.0, 0.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            QubitState(float("inf"), 1.0)

    def test_preserves_global_phase(self):
        phase = np.exp(1j * 0.7)
        s = QubitState(phase * 0.6, phase * 0.8)
        assert s.amp_h == pytest.approx(phase * 0.6, abs=1e-12)


class TestLinearPolState:
    def test_horizontal(self):
        s = linear_pol_state(0.0)
        assert s.amp_h == pytest.approx(1.0, abs=1e-12)
        assert s.amp_v == pytest.approx(0.0, abs=1e-12)

    def test_vertical(self):
        s = linear_pol_state(180.0)
        assert s.amp_h == pytest.approx(0.0, abs=1e-12)
        assert s.amp_v == pytest.approx(1.0, abs=1e-12)

    def test_antidiagonal_ray(self):
        # 270 deg is |A>; the literal parametrization carries a global -1
        assert_same_ray(linear_pol_state(270.0), 1 / SQRT2, -1 / SQRT2)

    def test_diagonal(self):
        assert_same_ray(linear_pol_state(90.0), 1 / SQRT2, 1 / SQRT2)

    def test_accepts_polar_angle(self):
        a = linear_pol_state(PolarAngle(60.0))
        b = linear_pol_state(60.0)
        assert a.amp_h == b.amp_h and a.amp_v == b.amp_v


class TestInnerProduct:
    def test_self_overlap_is_one(self):
        for deg in (0.0, 37.0, 122.5, 301.0):
            s = linear_pol_state(deg)
            assert inner_product(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_diagonals(self):
        d, a = diag_states()
        assert inner_product(a, d) == pytest.approx(0.0, abs=1e-12)

    def test_against_direct_arithmetic(self):
        # <A|psi(60)> = (cos30 - sin30)/sqrt2
        _, a = diag_states()
        psi = linear_pol_state(60.0)
        want = (math.cos(math.radians(30)) - math.sin(math.radians(30))) / SQRT2
        assert inner_product(a, psi) == pytest.approx(want, abs=1e-12)
        assert want == pytest.approx(0.2588, abs=5e-5)

    def test_conjugate_linear_in_bra(self):
        s = QubitState(0.6, 0.8j)
        t = QubitState(1.0, 1.0)
        assert inner_product(s, t) == pytest.approx(
            np.conj(inner_product(t, s)), abs=1e-12
        )


class TestObservable:
    def test_stokes_eigenvalues(self):
        evals = np.linalg.eigvalsh(stokes_hv().matrix)
        assert sorted(evals) == pytest.approx([-1.0, 1.0])

    def test_stokes_trace_zero(self):
        assert np.trace(stokes_hv().matrix) == pytest.approx(0.0)

    def test_stokes_is_involution(self):
        m = stokes_hv().matrix
        assert np.allclose(m @ m, np.eye(2), atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            Observable([[0.0, 1.0], [0.0, 0.0]])

    def test_spectral_radius(self):
        assert stokes_hv().spectral_radius() == pytest.approx(1.0)


class TestMatrixElement:
    def test_eigenstate_plus(self):
        h = linear_pol_state(0.0)
        assert matrix_element(h, stokes_hv(), h) == pytest.approx(1.0, abs=1e-12)

    def test_eigenstate_minus(self):
        v = linear_pol_state(180.0)
        assert matrix_element(v, stokes_hv(), v) == pytest.approx(-1.0, abs=1e-12)

    def test_against_direct_arithmetic(self):
        # <A|S|psi(60)> = (cos30 + sin30)/sqrt2
        _, a = diag_states()
        psi = linear_pol_state(60.0)
        want = (math.cos(math.radians(30)) + math.sin(math.radians(30))) / SQRT2
        assert matrix_element(a, stokes_hv(), psi) == pytest.approx(want, abs=1e-12)
        assert want == pytest.approx(0.9659, abs=5e-5)

    def test_hermitian_conjugation(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            re = rng.normal(size=4)
            im = rng.normal(size=4)
            x = QubitState(re[0] + 1j * im[0], re[1] + 1j * im[1])
            y = QubitState(re[2] + 1j * im[2], re[3] + 1j * im[3])
            lhs = matrix_element(x, stokes_hv(), y)
            rhs = np.conj(matrix_element(y, stokes_hv(), x))
            assert lhs == pytest.approx(rhs, abs=1e-12)
