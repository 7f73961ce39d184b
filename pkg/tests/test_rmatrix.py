import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ellw.errors import EllwError, PoleError
from ellw.params import ModularParams, Tolerance
from ellw.rmatrix import (
    RTensor,
    antisymmetry_residual,
    build_r,
    build_r_hat,
    build_r_hat_star,
    build_r_tilde,
    crossing_residual,
    elementary_matrices,
    embed12,
    embed13,
    embed23,
    gauge_transform,
    permutation,
    quasi_periodicity_residual,
    r_tilde_xi,
    r_xi,
    spectral_xi,
    tau_prefactor_xi,
    unitarity_residual,
    verify_properties,
    weight_matrix,
    weight_w,
    ybe_residual,
    zn_symmetry_residual,
)
from ellw.special_fn import kappa_inv, tau_n
from oracles import r_tilde_loops, theta_direct

XI = 0.31 + 0.04j
XI2 = -0.47 + 0.02j


def test_elementary_matrices_n2():
    g, h, omega = elementary_matrices(2)
    assert omega == pytest.approx(-1)
    assert np.allclose(g, np.diag([1, -1]))
    assert np.allclose(h, [[0, 1], [1, 0]])


@pytest.mark.parametrize("N", [2, 3, 4])
def test_weight_matrices_commutation(N):
    g, h, omega = elementary_matrices(N)
    assert np.allclose(h @ g, omega * g @ h)
    assert np.allclose(np.linalg.matrix_power(h, N), np.eye(N))
    assert np.allclose(weight_matrix((1, 1), N).matrix, g @ h)


def test_weight_at_zero_is_one_over_n(mp):
    for a1 in range(mp.N):
        for a2 in range(mp.N):
            assert abs(weight_w((a1, a2), 0, mp.zeta, mp.tau, mp.N) - 1 / mp.N) < 1e-14


def test_weight_matches_theta_ratio():
    mp = ModularParams(2, 0.5, 0.3)
    ref = theta_direct(0.5, 0.5, XI + mp.zeta / 2, mp.tau) / theta_direct(0.5, 0.5, mp.zeta / 2, mp.tau) / 2
    assert abs(weight_w((0, 0), XI, mp.zeta, mp.tau, 2) - ref) < 1e-11


@pytest.mark.parametrize("N,q", [(2, 0.5), (3, 0.4 + 0.1j), (4, 0.5)])
def test_contraction_matches_index_loops(N, q):
    mp = ModularParams(N, q, 0.3)
    z = cmath.exp(1j * math.pi * XI)
    ref = r_tilde_loops(XI, N, mp.zeta, mp.tau, kappa_inv(z * z, mp))
    got = r_tilde_xi(XI, mp).entries
    assert np.max(np.abs(got - ref)) < 1e-13 * max(1.0, np.max(np.abs(ref)))


def test_trace_normalization(mp):
    """tr(I_a (x) I_a^-1) = N^2 [a = 0], so tr R~ isolates W_(0,0)."""
    R = r_tilde_xi(XI, mp).entries
    R_unit = r_tilde_loops(XI, mp.N, mp.zeta, mp.tau, 1.0)
    assert abs(np.trace(R) / np.trace(R_unit) - kappa_inv(cmath.exp(2j * math.pi * XI), mp)) < 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_charge_selection_rule(N):
    T = r_tilde_xi(XI, ModularParams(N, 0.5, 0.3)).tensor
    for a, b, c, d in np.ndindex(T.shape):
        if (a + b - c - d) % N:
            assert T[a, b, c, d] == 0


def test_zn_symmetry(mp):
    assert zn_symmetry_residual(r_tilde_xi(XI, mp)) < 1e-14


def test_gauge_round_trip(mp):
    rt = r_tilde_xi(XI, mp)
    back = gauge_transform(gauge_transform(rt, mp), mp, inverse=True)
    assert back.max_abs_diff(rt) < 1e-14


@pytest.mark.parametrize("N", [2, 3])
def test_index_origin_does_not_matter(N):
    mp = ModularParams(N, 0.5, 0.3)
    assert r_xi(XI, mp, origin=1).max_abs_diff(r_xi(XI, mp)) < 1e-14
    assert unitarity_residual(XI, mp, origin=1) < 1e-12
    assert antisymmetry_residual(XI, mp, origin=1) < 1e-12


def test_z_and_xi_forms_agree(mp):
    z = cmath.exp(1j * math.pi * XI)
    assert spectral_xi(z) == pytest.approx(XI)
    assert build_r(z, mp).max_abs_diff(r_xi(XI, mp)) < 1e-14
    assert build_r_tilde(z, mp).max_abs_diff(r_tilde_xi(XI, mp)) < 1e-14


def test_r_hat_is_scalar_multiple(mp):
    z = cmath.exp(1j * math.pi * XI)
    R, Rh = build_r(z, mp).entries, build_r_hat(z, mp).entries
    mask = np.abs(R) > 1e-8
    ratio = Rh[mask] / R[mask]
    expected = tau_n(cmath.sqrt(mp.q) / z, mp)
    assert np.max(np.abs(ratio - expected)) < 1e-12
    assert abs(tau_prefactor_xi(XI, mp) - expected) < 1e-12


def test_r_hat_star_uses_shifted_nome():
    mp = ModularParams(2, 0.5, 0.3, c=0.4)
    z = cmath.exp(1j * math.pi * XI)
    ref = build_r_hat(z, ModularParams(2, 0.5, mp.p_star))
    assert build_r_hat_star(z, mp).max_abs_diff(ref) < 1e-14


def test_embeddings_on_product_operators():
    rng = np.random.default_rng(1)
    A, B = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    R = RTensor(3, np.kron(A, B))
    I = np.eye(3)
    assert np.allclose(embed12(R), np.kron(np.kron(A, B), I))
    assert np.allclose(embed23(R), np.kron(I, np.kron(A, B)))
    assert np.allclose(embed13(R), np.kron(np.kron(A, I), B))
    P = permutation(3)
    assert np.allclose(P @ np.kron(A, B) @ P, np.kron(B, A))


def test_swap_and_partial_transpose_conventions():
    rng = np.random.default_rng(2)
    A, B = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
    R = RTensor(2, np.kron(A, B))
    assert np.allclose(R.swap().entries, np.kron(B, A))
    assert np.allclose(R.t2().entries, np.kron(A, B.T))


@pytest.mark.parametrize("N,q", [(2, 0.5), (3, 0.5), (3, 0.4 + 0.1j), (4, 0.5)])
def test_five_properties_at_fixed_points(N, q):
    mp = ModularParams(N, q, 0.3)
    assert ybe_residual(XI, XI2, mp) < 1e-12
    assert unitarity_residual(XI, mp) < 1e-12
    assert crossing_residual(XI, mp) < 1e-12
    assert antisymmetry_residual(XI, mp) < 1e-12
    assert quasi_periodicity_residual(XI, mp) < 1e-12


@given(st.floats(-0.95, 0.95), st.floats(-0.08, 0.08))
def test_unitarity_and_crossing_property(re, im):
    mp = ModularParams(3, 0.5, 0.3)
    xi = complex(re, im)
    try:
        u, c = unitarity_residual(xi, mp), crossing_residual(xi, mp)
    except PoleError:
        assume(False)

    # rounding in a product of two factors scales with their sizes
    def size(x):
        return max(1.0, float(np.max(np.abs(r_xi(x, mp).entries))))

    assert u < 1e-12 * size(xi) * size(-xi)
    assert c < 1e-12 * size(xi) * size(-mp.N * mp.zeta - xi)


def test_pole_raises():
    mp = ModularParams(2, 0.5, 0.3)
    with pytest.raises(EllwError):
        r_tilde_xi(-mp.zeta, mp)


def test_verify_properties_passes():
    rep = verify_properties(ModularParams(2, 0.5, 0.3), samples=20)
    assert rep.overall_pass
    assert [c.name for c in rep.checks] == ["yang_baxter", "unitarity", "crossing", "antisymmetry", "quasi_periodicity"]
    rep3 = verify_properties(ModularParams(3, 0.4 + 0.1j, 0.2), samples=10)
    assert rep3.overall_pass


def test_verify_properties_forced_failure():
    rep = verify_properties(ModularParams(2, 0.5, 0.3), tol=Tolerance(1e-16, 1e-16), samples=5)
    assert not rep.overall_pass
    assert all(c.max_residual > 0 for c in rep.checks)


def test_verify_properties_is_deterministic():
    a = verify_properties(ModularParams(2, 0.5, 0.3), samples=5).to_json()
    b = verify_properties(ModularParams(2, 0.5, 0.3), samples=5).to_json()
    assert a == b
