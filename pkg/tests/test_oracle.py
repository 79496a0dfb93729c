import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotsub.algebras import SIGMA_X, Sl2Coords, sl3_form
from knotsub.exceptions import InvalidInputError
from knotsub.linalg import block_matrix, mat_exp
from knotsub.oracle import closed_form_sl2, closed_form_sl3, default_steps, detect_period_numeric

TIMES = np.linspace(-10, 10, 101)
E = math.e


def rel_err(A, B):
    return np.linalg.norm(A - B) / max(np.linalg.norm(B), 1.0)


class TestDetectPeriod:
    def test_sigma_x(self):
        T = detect_period_numeric(SIGMA_X, t_max=10, steps=10**4, eps=1e-8)
        assert abs(T - 2 * math.pi) <= 1e-6

    def test_nilpotent_sl2(self):
        assert detect_period_numeric(Sl2Coords(1, 0, 1).matrix(), t_max=100) is None

    def test_su3_diagonal(self):
        T = detect_period_numeric(np.diag([3j, 5j, -8j]), t_max=10)
        assert T == pytest.approx(2 * math.pi, abs=1e-6)

    @pytest.mark.parametrize("lam", [1.0, 2.0, 5.0, 1 / 3])
    def test_rotations(self, lam):
        X = lam * np.array([[0.0, -1.0], [1.0, 0.0]])
        T = detect_period_numeric(X, t_max=1.5 * 2 * math.pi / lam)
        assert T == pytest.approx(2 * math.pi / lam, rel=1e-6)

    def test_incommensurable_pair(self):
        X = block_matrix([1.0, math.sqrt(2)], 0)
        assert detect_period_numeric(X, t_max=1e3, eps=1e-8) is None

    def test_short_window(self):
        assert detect_period_numeric(SIGMA_X, t_max=6.0) is None

    def test_endpoint_period(self):
        T = detect_period_numeric(SIGMA_X, t_max=2 * math.pi, steps=1000)
        assert T == pytest.approx(2 * math.pi, abs=1e-6)

    def test_zero_matrix_never_leaves_identity(self):
        # every grid point is a zero of the distance; the first positive one is reported
        T = detect_period_numeric(np.zeros((2, 2)), t_max=1.0, steps=10)
        assert T is not None and 0 < T <= 0.2

    def test_default_steps(self):
        assert default_steps(np.zeros((2, 2)), 5.0) == 10_000
        assert default_steps(100 * SIGMA_X, 100.0) == math.ceil(20 * 100 * 100 * math.sqrt(2))

    @pytest.mark.parametrize("kwargs", [dict(t_max=0.0), dict(t_max=1.0, steps=5), dict(t_max=1.0, eps=0.0)])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            detect_period_numeric(SIGMA_X, **kwargs)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(1, 12), st.integers(1, 12), st.floats(0.2, 3.0))
    def test_detected_period_closes(self, k1, k2, mu):
        X = block_matrix([mu * k1, mu * k2], 0)
        g = math.gcd(k1, k2)
        T_true = 2 * math.pi / (mu * g)
        T = detect_period_numeric(X, t_max=1.2 * T_true)
        assert T == pytest.approx(T_true, rel=1e-6)
        assert np.linalg.norm(mat_exp(T * X) - np.eye(4)) <= 1e-8


class TestClosedFormSl2:
    def test_quarter_turn(self):
        got = closed_form_sl2(Sl2Coords(0, 0, 1), math.pi / 2)
        np.testing.assert_allclose(got, [[0, -1], [1, 0]], atol=1e-15)

    def test_parabolic(self):
        np.testing.assert_allclose(closed_form_sl2(Sl2Coords(1, 0, 1), 3.0), [[1, 0], [6, 1]])

    def test_hyperbolic(self):
        np.testing.assert_allclose(closed_form_sl2(Sl2Coords(0, 1, 0), 1.0), np.diag([E, 1 / E]), rtol=1e-15)

    @pytest.mark.parametrize("coords", [(0, 0, 1), (0.3, -0.4, 1.2), (0, 0.6, 1.0), (-1, 0.5, -2),
                                        (1, 0, 1), (0.6, 0.8, -1), (0, 1, 0), (0.4, 0.3, 0.2), (1, 1, -1)])
    def test_matches_exponential(self, coords):
        co = Sl2Coords(*coords)
        X = co.matrix()
        for t in TIMES:
            assert rel_err(closed_form_sl2(co, t), mat_exp(t * X)) <= 1e-9


class TestClosedFormSl3:
    def test_x3(self):
        np.testing.assert_array_equal(closed_form_sl3("X3", (), 2.0), [[1, 2, 2], [0, 1, 2], [0, 0, 1]])

    def test_x1(self):
        np.testing.assert_allclose(closed_form_sl3("X1", (1, 1), 1.0), np.diag([E, E, E**-2]))

    def test_x4_half_turn(self):
        np.testing.assert_allclose(closed_form_sl3("X4", (0, 1), math.pi), np.diag([-1, -1, 1]), atol=1e-15)

    @pytest.mark.parametrize("tag,params", [("X1", (1.0, 2.0)), ("X1", (-0.3, 0.1)), ("X2", (1.0,)),
                                            ("X2", (-0.2,)), ("X2", (0.0,)), ("X3", ()), ("X4", (0.0, 3.0)),
                                            ("X4", (1.0, 1.0)), ("X4", (-0.25, 0.5))])
    def test_matches_exponential(self, tag, params):
        X = sl3_form(tag, *params)
        for t in TIMES:
            assert rel_err(closed_form_sl3(tag, params, t), mat_exp(t * X)) <= 1e-9

    @pytest.mark.parametrize("args", [("X1", (1.0,)), ("X3", (1.0,)), ("X9", ())])
    def test_invalid(self, args):
        with pytest.raises(InvalidInputError):
            closed_form_sl3(*args, 1.0)


def test_closure_eps_scales_with_exponent():
    from knotsub.oracle import closure_eps

    assert closure_eps(np.zeros((2, 2)), 5.0) == 1e-8
    assert closure_eps(100 * SIGMA_X, 2.0) == pytest.approx(1e-8 * 200 * math.sqrt(2))
