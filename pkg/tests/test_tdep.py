"""Time-dependent objects: coefficients, splines, QobjEvo algebra."""

import numpy as np
import pytest

import oqsim as q
from oqsim.coefficient import SplineCoefficient, coefficient
from oqsim.exceptions import DimensionMismatchError, RangeError
from oqsim.qobjevo import liouvillian_evo

RNG = np.random.default_rng(11)


def rand_herm(n):
    a = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
    return q.Qobj((a + a.conj().T) / 2)


class TestCoefficients:
    def test_function_cos(self):
        c = coefficient(np.cos)
        assert q.coeff_eval(c, 0.0) == pytest.approx(1.0)

    def test_function_with_args(self):
        c = coefficient(lambda t, args: args["w"] * t)
        assert c(2.0, {"w": 3.0}) == pytest.approx(6.0)

    def test_constant(self):
        c = coefficient(2.5 - 1j)
        assert c(123.0) == 2.5 - 1j
        assert c.conj()(0.0) == 2.5 + 1j
        assert c.abs2()(0.0) == pytest.approx(abs(2.5 - 1j) ** 2)

    def test_spline_reproduces_knots(self):
        ts = np.linspace(0, 2 * np.pi, 101)
        vals = np.sin(ts)
        c = SplineCoefficient(ts, vals)
        for t, v in zip(ts[::10], vals[::10]):
            assert c(t) == pytest.approx(v, abs=1e-14)

    def test_spline_midpoint_error(self):
        ts = np.linspace(0, 2 * np.pi, 101)
        c = SplineCoefficient(ts, np.sin(ts))
        mids = 0.5 * (ts[:-1] + ts[1:])
        err = max(abs(c(t) - np.sin(t)) for t in mids)
        assert err <= 1e-6

    def test_spline_rejects_extrapolation(self):
        c = SplineCoefficient([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
        with pytest.raises(RangeError):
            c(2.5)
        with pytest.raises(RangeError):
            c(-0.1)

    def test_spline_c2_continuity(self):
        # One-sided 4-point stencils are exact for cubics, so they read off the
        # one-sided second derivatives without cancellation noise.
        ts = np.linspace(0, 3, 31)
        c = SplineCoefficient(ts, np.exp(ts) * np.cos(3 * ts))
        d = (ts[1] - ts[0]) / 8

        def dd(knot, sign):
            f = [c(knot + sign * k * d) for k in range(4)]
            return (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / d**2

        for knot in ts[1:-1]:
            left, right = dd(knot, -1), dd(knot, +1)
            scale = max(abs(left), abs(right), 1.0)
            assert abs(left - right) / scale < 1e-8

    def test_spline_validation(self):
        with pytest.raises(ValueError):
            SplineCoefficient([0.0], [1.0])
        with pytest.raises(ValueError):
            SplineCoefficient([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])


class TestQobjEvo:
    def test_constant_list(self):
        H0 = rand_herm(3)
        evo = q.QobjEvo([H0])
        assert evo.isconstant
        for t in (0.0, 1.3, -2.0):
            assert np.array_equal(evo(t).full(), H0.full())

    def test_two_term_pattern(self):
        H0, H1 = rand_herm(2), rand_herm(2)
        evo = q.QobjEvo([H0, (H1, np.cos)])
        expected = H0.full() + np.cos(np.pi) * H1.full()
        assert np.max(np.abs(evo(np.pi).full() - expected)) < 1e-14

    def test_spline_term(self):
        H1 = rand_herm(2)
        ts = np.linspace(0, 5, 64)
        evo = q.QobjEvo([(H1, (ts, np.sin(ts)))])
        assert np.max(np.abs(evo(ts[7]).full() - np.sin(ts[7]) * H1.full())) < 1e-12

    def test_three_term_eval_matches_oracle(self):
        ops = [rand_herm(3) for _ in range(3)]
        fns = [np.cos, np.sin, lambda t: np.exp(-t)]
        evo = q.QobjEvo(list(zip(ops, fns)))
        t = 0.73
        oracle = sum(f(t) * op.full() for op, f in zip(ops, fns))
        assert np.max(np.abs(evo(t).full() - oracle)) < 1e-13

    def test_dims_mismatch_rejected(self):
        with pytest.raises(DimensionMismatchError):
            q.QobjEvo([q.sigmaz(), rand_herm(3)])

    def test_add_pointwise(self):
        a = q.QobjEvo([(q.sigmax(), np.cos)])
        b = q.QobjEvo([q.sigmaz(), (q.sigmay(), np.sin)])
        t = 1.1
        expected = a(t).full() + b(t).full()
        assert np.max(np.abs((a + b)(t).full() - expected)) < 1e-13

    def test_matmul_pointwise(self):
        a = q.QobjEvo([(q.sigmax(), np.cos)])
        b = q.QobjEvo([(q.sigmay(), np.sin)])
        t = 0.61
        expected = a(t).full() @ b(t).full()
        assert np.max(np.abs((a @ b)(t).full() - expected)) < 1e-13

    def test_scalar_multiple(self):
        a = q.QobjEvo([(q.sigmax(), np.cos)])
        t = 0.3
        assert np.max(np.abs((2 * a)(t).full() - 2 * a(t).full())) < 1e-14

    def test_dag_involution(self):
        a = q.QobjEvo([(q.destroy(3), lambda t: np.exp(1j * t))])
        t = 0.9
        assert np.max(np.abs(a.dag().dag()(t).full() - a(t).full())) < 1e-14
        assert np.max(np.abs(a.dag()(t).full() - a(t).dag().full())) < 1e-14

    def test_matvec_matches_call(self):
        evo = q.QobjEvo([rand_herm(4), (rand_herm(4), np.sin)])
        y = RNG.normal(size=4) + 1j * RNG.normal(size=4)
        t = 2.2
        assert np.max(np.abs(evo.matvec(t, y) - evo(t).full() @ y)) < 1e-13


class TestLiouvillianEvo:
    def test_constant_reduces_to_plain(self):
        H = rand_herm(2)
        c = 0.4 * q.sigmam()
        evo = liouvillian_evo(H, [c])
        plain = q.liouvillian(H, [c])
        assert np.max(np.abs(evo(0.7).full() - plain.full())) < 1e-14

    def test_time_dependent_h_matches_oracle(self):
        H0, H1 = rand_herm(2), rand_herm(2)
        c = 0.3 * q.sigmam()
        evo = liouvillian_evo(q.QobjEvo([H0, (H1, np.cos)]), [c])
        for t in (0.0, 0.8, 2.0):
            oracle = q.liouvillian(q.Qobj(H0.full() + np.cos(t) * H1.full()), [c])
            assert np.max(np.abs(evo(t).full() - oracle.full())) < 1e-14

    def test_td_collapse_rate_is_abs2(self):
        # D[f(t) a] carries |f(t)|^2 on both sandwich and anticommutator terms.
        a = q.sigmam()
        f = lambda t: np.cos(t) * np.exp(1j * t)
        evo = liouvillian_evo(None, [q.QobjEvo([(a, f)])])
        for t in (0.2, 1.5):
            oracle = abs(f(t)) ** 2 * q.lindblad_dissipator(a).full()
            assert np.max(np.abs(evo(t).full() - oracle)) < 1e-14

    def test_pointwise_property_composite(self):
        H = q.QobjEvo([rand_herm(2), (rand_herm(2), np.sin)])
        cs = [q.QobjEvo([(q.sigmam(), np.cos)])]
        evo = liouvillian_evo(H, cs)
        t = 1.37
        oracle = q.liouvillian(H(t), [np.cos(t) * q.sigmam()])
        assert np.max(np.abs(evo(t).full() - oracle.full())) < 1e-13
