import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import integrate, special

from hltlab import constants as K
from hltlab.errors import DomainError

S = K.SOBOLEV_CONSTANT
L = K.CLR_CONSTANT


class TestHardyConstant:
    def test_half_power_three_dims(self):
        assert_allclose(K.hardy_constant(0.5, 3), 2 / math.pi, rtol=1e-14)

    def test_classical_weight(self):
        # (d - 2)^2 / 4 at d = 3
        assert_allclose(K.hardy_constant(1.0, 3), 0.25, rtol=1e-14)

    def test_pole_rejected(self):
        with pytest.raises(DomainError):
            K.hardy_constant(0.5, 1)

    @given(st.floats(0.05, 1.45))
    def test_matches_gamma_formula(self, s):
        direct = 2 ** (2 * s) * math.gamma((3 + 2 * s) / 4) ** 2 / math.gamma((3 - 2 * s) / 4) ** 2
        assert_allclose(K.hardy_constant(s, 3), direct, rtol=1e-12)


class TestSemiclassicalConstant:
    def test_three_dims_first_moment(self):
        assert_allclose(K.semiclassical_constant(1, 3), 1 / (15 * math.pi ** 2), rtol=1e-12)

    def test_counting_function(self):
        assert_allclose(K.semiclassical_constant(0, 3), 1 / (6 * math.pi ** 2), rtol=1e-12)

    def test_one_dim(self):
        assert_allclose(K.semiclassical_constant(1.5, 1), 3 / 16, rtol=1e-12)

    def test_phase_space_integral(self):
        # (2 pi)^-3 int (p^2 - 1)_-^gamma dp at gamma = 1/2
        val, _ = integrate.quad(lambda p: 4 * math.pi * p * p * (1 - p * p) ** 0.5, 0, 1)
        assert_allclose(K.semiclassical_constant(0.5, 3), val / (2 * math.pi) ** 3, rtol=1e-10)


class TestSimpleConstants:
    def test_clr(self):
        assert K.clr_constant() == 0.1156

    def test_resolvent(self):
        assert_allclose(K.resolvent_constant(0.5), 1 / math.pi, rtol=1e-15)

    def test_fractional_sobolev_reduces_to_classical(self):
        assert_allclose(K.fractional_sobolev_constant(3, 6), S, rtol=1e-12)

    @pytest.mark.parametrize("N", [1, 2, 3, 5])
    def test_fractional_sobolev_at_r2(self, N):
        assert_allclose(K.fractional_sobolev_constant(N, 2), 1.0, rtol=1e-14)

    def test_fractional_sobolev_one_dim(self):
        # N = 1, r = 4 evaluated with plain gamma functions
        a = 0.25
        direct = (2 ** -a * math.pi ** (-a / 2)
                  * (math.gamma(0.25) / math.gamma(0.75)) ** 0.5
                  * (math.gamma(1) / math.gamma(0.5)) ** a)
        assert_allclose(K.fractional_sobolev_constant(1, 4), direct, rtol=1e-13)

    @pytest.mark.parametrize("u, expected", [(0.0, 0.5), (1.0, 1.0)])
    def test_du_endpoints(self, u, expected):
        assert_allclose(K.du_max(u), expected, rtol=1e-15)

    @given(st.floats(0.0, 0.99))
    def test_du_is_maximum(self, u):
        x = np.logspace(-4, 4, 200_001)
        scan = np.max(x ** (1 - u) / (x * x + 1))
        assert scan <= K.du_max(u) * (1 + 1e-12)
        assert_allclose(scan, K.du_max(u), rtol=1e-7)

    def test_pauli_sobolev_remainder_collapses(self):
        assert_allclose(K.pauli_sobolev_remainder(0.5, 3), S ** 4, rtol=1e-13)

    def test_pauli_sobolev_remainder_golden(self):
        # S^8 * 3^3 / ((3/4) * 4^4 * (1/4)^3) computed by hand
        expected = S ** 8 * 27 / (0.75 * 256 * 0.25 ** 3)
        assert_allclose(K.pauli_sobolev_remainder(0.25, 2), expected, rtol=1e-13)

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1])
    def test_pauli_sobolev_remainder_domain(self, eps):
        with pytest.raises(DomainError):
            K.pauli_sobolev_remainder(eps, 3)

    def test_pauli_sobolev_remainder_diverges(self):
        vals = [K.pauli_sobolev_remainder(e, 3) for e in (0.1, 0.01, 0.001)]
        assert vals[0] < vals[1] < vals[2]


class TestEstimateOne:
    def test_sobolev_remainder_s1_closed_form(self):
        expected = 0.25 * 0.75 ** 3 * K.fractional_sobolev_constant(3, 6) ** 6
        assert_allclose(K.sobolev_remainder_s1(1, 2, 1), expected, rtol=1e-13)
        assert_allclose(K.sobolev_remainder_s1(1, 2, 1), 0.0006416238909177711, rtol=1e-12)

    def test_sobolev_remainder_s1_domain(self):
        with pytest.raises(DomainError):
            K.sobolev_remainder_s1(0.5, 2, 1)  # r < 3/(2u)

    def test_theta_is_upper_bound(self):
        rng = np.random.default_rng(0)
        s, r = 0.25, 4.0
        theta = K.theta_constant(s, r)
        beta = 10 ** rng.uniform(-4, 4, 100)
        delta = rng.uniform(0.01, 0.99, 100)
        assert np.all(theta <= K.theta_objective(s, r, beta, delta) * (1 + 1e-12))

    def test_omega_is_upper_bound(self):
        rng = np.random.default_rng(1)
        s, u, r, eps = 0.25, 0.2, 4.0, 0.5
        omega = K.omega_constant(s, u, r, eps)
        beta = 10 ** rng.uniform(-4, 4, 100)
        delta, gamma = rng.uniform(0.01, 0.99, (2, 100))
        assert np.all(omega <= K.omega_objective(s, u, r, eps, beta, delta, gamma) * (1 + 1e-12))

    def test_frozen_values(self):
        assert_allclose(K.theta_constant(0.25, 4), 0.7287320199310708, rtol=1e-9)
        assert_allclose(K.omega_constant(0.25, 0.2, 4, 0.5), 0.7242997824745616, rtol=1e-9)

    def test_halving_eps_never_decreases(self):
        eps = [0.5 / 2 ** k for k in range(5)]
        omegas = [K.omega_constant(0.25, 0.2, 4, e) for e in eps]
        ts = [K.sobolev_remainder_s1(0.75, 2, e) for e in eps]
        assert np.all(np.diff(omegas) >= 0)
        assert np.all(np.diff(ts) >= 0)

    def test_coupling_condition(self):
        with pytest.raises(DomainError):
            K.theta_constant(0.9, 2.0)  # 3 >= 2r(1-s)

    def test_bundle(self):
        q = K.ConstantQuery(s=0.25, u=0.0, r=4.0)
        out = K.estimate1_bound_constants(q)
        assert out.omega is None and out.t_s1 is None
        assert_allclose(out.theta, K.theta_constant(0.25, 4))
        out = K.estimate1_bound_constants(K.ConstantQuery(s=1, u=1, r=2, eps=1))
        assert_allclose(out.t_s1, K.sobolev_remainder_s1(1, 2, 1))


class TestEstimateTwo:
    def test_script_i_with_unit_rotor_constant(self):
        # resolvent constant 1/pi times S * 2 / 16
        assert_allclose(K.script_i(0.5, 2, n_r=1), S / (8 * math.pi), rtol=1e-13)

    def test_script_i_formula(self):
        s, r = 0.3, 2.5
        q = 2 * r - 3
        expected = (math.sin(math.pi * s) / math.pi * q * S ** (2 * s * (3 - r) / q)
                    / (r * (1 - s) * s) * 2 ** (-(6 * s + 2 * r - 3) / q))
        assert_allclose(K.script_i(s, r, n_r=1), expected, rtol=1e-13)

    def test_script_a_monotone_in_rotor_constant(self):
        vals = [K.script_a(0.25, 0.5, 2.5, n) for n in (0.5, 1.0, 2.0)]
        assert vals[0] < vals[1] < vals[2]

    def test_script_j_frozen(self):
        assert_allclose(K.script_j(0.25, 0.5, 2.5, 0.5, n_r=1), 1.478374187487057, rtol=1e-9)

    def test_script_j_diverges_for_small_eps(self):
        vals = [K.script_j(0.25, 0.5, 2.5, e, n_r=1) for e in (0.5, 0.25, 0.125, 0.0625)]
        assert np.all(np.diff(vals) >= 0)
        assert vals[-1] > 2 * vals[0]

    def test_script_j_is_upper_bound(self):
        j = K.script_j(0.25, 0.5, 2.5, 0.5, n_r=1)
        delta = np.random.default_rng(2).uniform(0.01, 0.99, 100)
        assert np.all(j <= K.script_j_objective(0.25, 0.5, 2.5, 0.5, delta, 1) * (1 + 1e-12))

    def test_bundle_records_rotor_constant(self):
        out = K.estimate2_bound_constants(K.ConstantQuery(s=0.25, u=0.5, r=2.5, n_r=1.0))
        assert out.n_r == 1.0 and out.i_const is None
        assert_allclose(out.j_const, K.script_j(0.25, 0.5, 2.5, 0.5, n_r=1))

    def test_domain(self):
        with pytest.raises(DomainError):
            K.estimate2_bound_constants(K.ConstantQuery(s=0.5, u=0.0, r=3.5))


class TestFieldEnergyConstants:
    def test_half_power_pair(self):
        U, V = K.plt_field_energy_constants(0.5, 0.3)
        assert_allclose(U, 1.5 * math.pi * L, rtol=1e-15)
        assert_allclose(V, math.pi * L / (2 * 3 ** 0.25), rtol=1e-15)

    def test_running_energy_integral_at_one(self):
        assert_allclose(K.running_energy_integral(1, 0), 0.4, rtol=1e-12)

    @pytest.mark.parametrize("s", [0.6, 0.75, 0.9, 0.3, 2.0])
    def test_running_energy_integral_beta(self, s):
        assert_allclose(K.running_energy_integral(s, 0), special.beta(s, 2.5), atol=1e-10)

    def test_general_power(self):
        s, g = 0.75, 0.4
        U, V = K.plt_field_energy_constants(s, g)
        assert_allclose(U, math.sqrt(2) * L * s * (1 - g) ** -s * special.beta(s, 2.5), rtol=1e-10)
        assert V > 0

    @pytest.mark.parametrize("s, g", [(0.4, 0.5), (1.1, 0.5), (0.75, 0.0), (0.75, 1.0)])
    def test_domain(self, s, g):
        with pytest.raises(DomainError):
            K.plt_field_energy_constants(s, g)


class TestLocalizationConstants:
    def test_printed_error_values(self):
        assert_allclose(K.localization_error(0.5, 1, 2, 0), math.pi / math.sqrt(2), rtol=1e-14)
        assert_allclose(K.localization_error(1, 1, 2, 1), math.pi ** 2 / 24, rtol=1e-14)

    @pytest.mark.parametrize("s, l, n", [(0.5, 2, 0), (1, 2, 1), (0.25, 1.5, 3)])
    def test_series_of_steps(self, s, l, n):
        series = sum(K.localization_step(s, 1.0, l, m) for m in range(n, n + 400))
        assert_allclose(K.localization_error_tail(s, 1.0, l, n), series, rtol=1e-12)
        # the closed form with l^-2sn is smaller than the series by l^2s
        assert_allclose(series / K.localization_error(s, 1.0, l, n), l ** (2 * s), rtol=1e-12)

    def test_partial_sum(self):
        assert_allclose(K.localization_error_partial(1, 1, 2, 1, 2),
                        sum(K.localization_step(1, 1, 2, m) for m in (1, 2, 3)), rtol=1e-15)

    def test_effective_hardy_weight(self):
        assert_allclose(K.effective_hardy_weight(0.5, 2), 2 / math.pi + 4 * math.pi / math.sqrt(2), rtol=1e-14)

    @given(st.floats(0.05, 1.0), st.floats(1.05, 4.0))
    def test_effective_weight_exceeds_hardy(self, s, l):
        assert K.effective_hardy_weight(s, l) > K.hardy_constant(s, 3)

    def test_domain(self):
        with pytest.raises(DomainError):
            K.localization_error(0.5, 1, 1.0, 0)
        with pytest.raises(DomainError):
            K.effective_hardy_weight(0.5, 0.9)


class TestPositivity:
    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.05, 1.0), st.floats(0.05, 0.95), st.floats(1.6, 8.0), st.floats(1.05, 3.0))
    def test_closed_forms_positive(self, s, eps, r, l):
        values = [
            K.hardy_constant(s, 3), K.semiclassical_constant(s, 3), K.resolvent_constant(s),
            K.fractional_sobolev_constant(3, 2 + r), K.du_max(eps), K.pauli_sobolev_remainder(eps, r),
            K.running_energy_integral(s, r), K.localization_error(s, 1.0, l, 2),
            K.effective_hardy_weight(s, l),
        ]
        assert all(np.isfinite(v) and v > 0 for v in values)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.05, 0.5), st.floats(4.0, 8.0))
    def test_theta_positive(self, s, r):
        assert K.theta_constant(s, r) > 0


class TestRegistry:
    def test_default_table_complete_and_positive(self):
        table = K.default_table()
        assert set(table.values) == set(K.REGISTRY)
        assert all(v > 0 and np.isfinite(v) for v in table.values.values())

    def test_evaluate_matches_direct_call(self):
        assert_allclose(K.evaluate("hardy", s=1, d=3), 0.25)
        assert_allclose(K.evaluate("t_s1", u=1, r=2, eps=1), K.sobolev_remainder_s1(1, 2, 1))

    def test_unknown_name_or_param(self):
        with pytest.raises(DomainError):
            K.evaluate("nope")
        with pytest.raises(DomainError):
            K.evaluate("hardy", q=1)

    def test_clr_single_source(self):
        U, _ = K.plt_field_energy_constants(0.5, 0.5)
        assert_allclose(U, 1.5 * math.pi * K.evaluate("clr"))
