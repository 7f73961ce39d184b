import cmath
import warnings

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ellw.errors import BranchError, BranchWarning, DomainError, PoleError
from ellw.params import ModularParams, TruncationConfig
from ellw.sampling import jacobi_sum, sample_triples, sample_x
from ellw.special_fn import tau_n_log
from ellw.structure_fn import (
    ClassicalLimitLabel,
    classical_limit_derivative,
    f_exchange,
    f_function,
    f_h_function,
    m_function,
    solve_surface,
    t_function,
    y_exchange,
)

# 30-digit references from the defining series and theta products
F2 = -3.8793511452698928 + 4.7111122518338835j  # f(1.1+0.2i), N=2, q=0.5
F3 = -0.6537849036049471 - 4.914418713498312j  # f(0.9-0.3i), N=3, q=0.4+0.1i
Y21 = 2.275758054034361 + 3.265908164116115j  # Y_{2,1}(0.8+0.1i), q=0.5, p=0.3
FX21 = 2.0092783642209073 + 0.9296226114431718j  # F(1, 0.8+0.1i), N=2, q=0.5, p=0.3

x_mod = st.floats(0.75, 1.3)
x_arg = st.floats(-2.9, 2.9)


def _x(mod, arg):
    return mod * cmath.exp(1j * arg)


class TestCritical:
    def test_t_is_one_at_critical_level(self, mp, rng):
        crit = mp.critical
        for x in sample_x(rng, 20, mp.q, mp.N):
            assert abs(t_function(x, crit) - 1) < 1e-12

    def test_t_inversion(self, mp, rng):
        m = mp.with_c(0.37 + 0.1j)
        for x in sample_x(rng, 10, mp.q, mp.N):
            assert abs(t_function(x, m) * t_function(1 / x, m) - 1) < 1e-12

    def test_t_composes_tau(self):
        m = ModularParams(3, 0.5, 0.3, c=-1.2)
        x = 0.9 + 0.2j
        lq, lx = cmath.log(m.q), cmath.log(x)
        tau = lambda s: tau_n_log(s, 3, m.q)  # noqa: E731
        ref = tau(0.5 * lq - lx) * tau((0.5 - m.c) * lq + lx) / (tau(0.5 * lq + lx) * tau((0.5 - m.c) * lq - lx))
        assert abs(t_function(x, m) - ref) < 1e-13

    def test_t_needs_c(self):
        with pytest.raises(DomainError):
            t_function(0.9, ModularParams(2, 0.5, 0.3))

    def test_m_is_identity_at_critical_level(self, mp, rng):
        crit = mp.critical
        for x in sample_x(rng, 10, mp.q, mp.N):
            assert np.max(np.abs(m_function(x, crit).entries - np.eye(mp.N**2))) < 1e-11

    def test_m_generic_smoke(self):
        M = m_function(0.9 + 0.2j, ModularParams(2, 0.5, 0.3, c=0.3))
        assert np.all(np.isfinite(M.entries))
        assert np.max(np.abs(M.entries - np.eye(4))) > 1e-3

    def test_dm_dc_small_step(self, mp, rng):
        """Central difference at step 1e-4 stays below 1e-6."""
        crit, N, h = mp.critical, mp.N, 1e-4
        for x in sample_x(rng, 20, mp.q, N):
            d = (m_function(x, crit.with_c(-N + h)).entries - m_function(x, crit.with_c(-N - h)).entries) / (2 * h)
            assert np.max(np.abs(d)) < 1e-6

    def test_dm_dc_error_is_second_order(self, mp):
        """Halving the step divides the finite-difference residual by ~4, so dM/dc itself is zero."""
        crit, N = mp.critical, mp.N
        x = 0.95 + 0.3j

        def fd(h):
            return np.max(np.abs(m_function(x, crit.with_c(-N + h)).entries - m_function(x, crit.with_c(-N - h)).entries)) / (2 * h)

        assert fd(2e-2) / fd(1e-2) == pytest.approx(4, rel=0.05)

    def test_f_frozen(self):
        assert abs(f_function(1.1 + 0.2j, ModularParams(2, 0.5, 0.3)) - F2) < 1e-13
        assert abs(f_function(0.9 - 0.3j, ModularParams(3, 0.4 + 0.1j, 0.3)) - F3) < 1e-13

    def test_f_is_dt_dc(self, mp, rng):
        crit, N, h = mp.critical, mp.N, 1e-4
        for x in sample_x(rng, 20, mp.q, N):
            d = (t_function(x, crit.with_c(-N + h)) - t_function(x, crit.with_c(-N - h))) / (2 * h)
            assert abs(d / f_function(x, crit) - 1) < 1e-5

    def test_f_independent_of_p(self):
        x = 0.8 + 0.4j
        assert f_function(x, ModularParams(3, 0.5, 0.3)) == f_function(x, ModularParams(3, 0.5, 0.01))

    @given(x_mod, x_arg)
    def test_f_odd(self, mod, arg):
        mp = ModularParams(3, 0.5, 0.3)
        x = _x(mod, arg)
        try:
            v = f_function(x, mp)
        except PoleError:
            assume(False)
        assume(abs(v) < 1e6)
        assert abs(f_function(1 / x, mp) + v) < 1e-12 * max(1.0, abs(v))

    def test_f_jacobi(self, mp, rng):
        for z, w, u in sample_triples(rng, 20, mp.q, mp.N):
            assert abs(jacobi_sum(lambda v: f_function(v, mp), z, w, u)) < 1e-10

    def test_f_vectorized(self, mp, rng):
        xs = sample_x(rng, 6, mp.q, mp.N)
        assert np.allclose(f_function(xs, mp), [f_function(x, mp) for x in xs], rtol=1e-14, atol=0)

    def test_f_pole_names_rung(self):
        with pytest.raises(PoleError, match="rung"):
            f_function(0.5, ModularParams(2, 0.5, 0.3))

    def test_ladder_cap(self):
        with pytest.raises(Exception, match="series_lmax"):
            f_function(0.9, ModularParams(2, 0.95, 0.3), TruncationConfig(series_lmax=2))


class TestExchange:
    def test_frozen(self):
        assert abs(y_exchange(2, 1, 0.8 + 0.1j, 0.5, 0.3) - Y21) < 1e-12
        assert abs(f_exchange(1, 0.8 + 0.1j, ModularParams(2, 0.5, 0.3)) - FX21) < 1e-12

    @pytest.mark.parametrize("N,M", [(2, 1), (3, 1), (2, -1), (3, 2)])
    def test_y_identities(self, N, M, rng):
        q, p = 0.5, 0.3
        for x in sample_x(rng, 10, q, N):
            y = y_exchange(N, M, x, q, p)
            assert abs(y_exchange(N, M, x * q**N, q, p) - y) < 1e-10
            prod = np.prod([y_exchange(N, M, x * q**j, q, p) for j in range(N)])
            assert abs(prod - 1) < 1e-10
            assert abs(y * y_exchange(N, M, 1 / x, q, p) - 1) < 1e-10

    @pytest.mark.parametrize("M", [1, 2, -1, -2])
    def test_f_over_f_is_y(self, M, rng):
        mp = ModularParams(2, 0.5, 0.3)
        for x in sample_x(rng, 10, mp.q, 2):
            ratio = f_exchange(M, 1 / x, mp) / f_exchange(M, x, mp)
            assert abs(ratio - y_exchange(2, -M, x, mp.q, mp.p)) < 1e-10

    @pytest.mark.parametrize("N,h", [(2, 1), (2, 2), (2, -1), (3, 1), (3, 2), (3, -1)])
    def test_y_trivial_on_classical_nomes(self, N, h, rng):
        q = 0.5
        p = ClassicalLimitLabel(h, 1).nome(N, q)
        for x in sample_x(rng, 10, q, N):
            assert abs(y_exchange(N, 1, x, q, p) - 1) < 1e-10

    def test_eval_example_from_cli_grid(self):
        assert abs(y_exchange(2, 1, 0.7, 0.5, 0.0625) - 1) < 1e-12

    def test_m_zero_rejected(self):
        with pytest.raises(DomainError):
            y_exchange(2, 0, 0.7, 0.5, 0.3)
        with pytest.raises(DomainError):
            f_exchange(0, 0.7, ModularParams(2, 0.5, 0.3))


class TestClassicalLimit:
    @pytest.mark.parametrize("N,M,h", [(2, 1, 1), (3, 1, 1), (3, 2, 1), (2, 1, 2), (3, 1, 2), (2, -1, 1), (3, -2, 1), (2, 1, -1)])
    def test_fh_is_beta_derivative_of_y(self, N, M, h, rng):
        for x in sample_x(rng, 5, 0.5, N):
            ref = classical_limit_derivative(x, N, M, h, 0.5)
            assert abs(ref / f_h_function(x, N, M, h, 0.5) - 1) < 1e-6

    @pytest.mark.parametrize("h", [1, 2])
    def test_fh_odd_and_jacobi(self, h, rng):
        N, M, q = 3, 1, 0.5
        for x in sample_x(rng, 10, q, N):
            assert abs(f_h_function(1 / x, N, M, h, q) + f_h_function(x, N, M, h, q)) < 1e-11
        for z, w, u in sample_triples(rng, 10, q, N):
            assert abs(jacobi_sum(lambda v: f_h_function(v, N, M, h, q), z, w, u)) < 1e-9

    @pytest.mark.parametrize("N,M", [(2, 1), (3, 1), (3, 2)])
    def test_fh_even_proportional_to_f(self, N, M, rng):
        q, h = 0.5, 2
        ratio = -N * N * M * (N * M + 1) * h / 2
        mp = ModularParams(N, q, 0.3)
        for x in sample_x(rng, 10, q, N):
            assert abs(f_h_function(x, N, M, h, q) / f_function(x, mp) - ratio) < 1e-9

    def test_label_validation(self):
        with pytest.raises(DomainError):
            ClassicalLimitLabel(0, 1)
        assert ClassicalLimitLabel(3, 1).parity == "odd"
        assert ClassicalLimitLabel(-2, 1).parity == "even"


class TestSurface:
    def test_example_point(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchWarning)
            sp = solve_surface(2, 1, 0.5, 0.0625)
        expected = -2 - 2 * cmath.log(-0.25) / cmath.log(0.5)
        assert abs(sp.c - expected) < 1e-14

    def test_warns_on_cut(self):
        with pytest.warns(BranchWarning):
            solve_surface(2, 1, 0.5, 0.0625)

    def test_flipping_m_flips_shift(self):
        a = solve_surface(3, 2, 0.4 + 0.1j, 0.2 + 0.05j)
        b = solve_surface(3, -2, 0.4 + 0.1j, 0.2 + 0.05j)
        assert abs((a.c + 3) + (b.c + 3)) < 1e-13

    def test_negative_real_q(self):
        with pytest.raises(BranchError):
            solve_surface(2, 1, -0.5, 0.3)

    @given(st.floats(0.1, 0.9), st.floats(-1, 1), st.floats(0.05, 0.8), st.floats(-3, 3), st.integers(1, 3))
    def test_relation_holds(self, qr, qphi, pr, pphi, M):
        q = qr * cmath.exp(1j * qphi)
        p = pr * cmath.exp(1j * pphi)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchWarning)
            sp = solve_surface(3, M, q, p)
        lhs = (-cmath.sqrt(p)) ** (3 * M)
        assert abs(lhs - cmath.exp((-sp.c - 3) * cmath.log(q))) < 1e-12
        assert sp.params().c == sp.c
