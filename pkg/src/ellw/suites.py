"""Verification suites behind ``ellw verify``.

Each suite returns a :class:`CheckReport`. Identity residuals are compared
with ``tol.abs``; relative deviations with ``tol.rel``. Derivatives in c and
beta use Richardson-extrapolated central differences so that the comparison
is limited by truncation, not by the step size; the raw second-order
behaviour is reported separately as a convergence-order check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ellw.errors import EllwError
from ellw.mode_algebra import (
    bracket,
    contour_modes,
    critical_k0_table,
    h_limit_pole_exponents,
    h_limit_table,
    higher_spin_k0_table,
    k0_radius,
    quantum_higher_spin_y,
    sector,
    sl2_sector_table,
)
from ellw.params import DEFAULT_TOL, DEFAULT_TRUNC, ModularParams, Tolerance, TruncationConfig
from ellw.report import Check, CheckReport
from ellw.rmatrix import r_tilde_xi, sample_xi, verify_properties, zn_symmetry_residual
from ellw.sampling import jacobi_sum, sample_triples, sample_x
from ellw.special_fn import ThetaChar, big_theta, q_number, tau_n_log, theta_char
from ellw.structure_fn import (
    ClassicalLimitLabel,
    f_exchange,
    f_function,
    f_h_function,
    m_function,
    solve_surface,
    t_function,
    y_exchange,
)

SUITES = ("special", "rmatrix", "structure", "classical", "modes")
FD_STEP = 1e-3
ORDER_TOL = 0.2


@dataclass(frozen=True)
class SuiteConfig:
    N: int = 2
    M: int = 1
    q: complex = 0.5
    p: complex = 0.3
    r_max: int = 5
    samples: int = 20
    seed: int = 42
    tol: Tolerance = DEFAULT_TOL
    trunc: TruncationConfig = DEFAULT_TRUNC

    def params(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "q": complex(self.q),
            "p": complex(self.p),
            "r_max": self.r_max,
            "samples": self.samples,
            "seed": self.seed,
            "tol_abs": self.tol.abs,
            "tol_rel": self.tol.rel,
            "theta_terms": self.trunc.theta_terms,
            "prod_terms": self.trunc.prod_terms,
            "series_lmax": self.trunc.series_lmax,
        }


def _collect(name, points, fn, tolerance) -> Check:
    """Evaluate ``fn`` over points; numeric failures count as skipped samples."""
    residuals, skipped = [], 0
    for pt in points:
        try:
            residuals.append(float(fn(pt)))
        except EllwError:
            skipped += 1
    return Check.from_residuals(name, residuals, tolerance, skipped)


def richardson(fn, step: float):
    """Fourth-order derivative estimate from central differences at step and step/2."""
    d1 = (fn(step) - fn(-step)) / (2 * step)
    d2 = (fn(step / 2) - fn(-step / 2)) / step
    return (4 * d2 - d1) / 3


def central(fn, step: float):
    return (fn(step) - fn(-step)) / (2 * step)


# -- special ------------------------------------------------------------------


def special_suite(cfg: SuiteConfig) -> CheckReport:
    rng = np.random.default_rng(cfg.seed)
    tc, tol = cfg.trunc, cfg.tol
    mp = ModularParams(cfg.N, cfg.q, cfg.p)
    tau = mp.tau
    n = max(cfg.samples, 50)
    xis = rng.uniform(-1, 1, n) + 1j * rng.uniform(-0.3, 0.3, n) * tau.imag
    half = ThetaChar(1 / 2, 1 / 2)
    ch = ThetaChar(1 / 2 + 1 / cfg.N, 1 / 2 + 1 / cfg.N)
    checks = [
        _collect("theta_odd", xis, lambda x: abs(theta_char(half, -x, tau, tc) + theta_char(half, x, tau, tc)), tol.abs),
        _collect(
            "theta_shift_1", xis,
            lambda x: abs(theta_char(ch, x + 1, tau, tc) - np.exp(2j * np.pi * float(ch.gamma1)) * theta_char(ch, x, tau, tc)),
            tol.abs,
        ),
        _collect(
            "theta_shift_tau", xis,
            lambda x: abs(theta_char(ch, x + tau, tau, tc) - np.exp(-1j * np.pi * tau - 2j * np.pi * (x + float(ch.gamma2))) * theta_char(ch, x, tau, tc)),
            tol.abs,
        ),
    ]
    nome = cfg.q ** (2 * cfg.N)
    zs = sample_x(rng, n, cfg.q, cfg.N)
    checks.append(_collect("big_theta_functional", zs, lambda z: abs(big_theta(nome * z, nome, tc) + big_theta(z, nome, tc) / z), tol.abs))
    logs = np.log(zs)
    lq = np.log(complex(cfg.q))
    checks.append(_collect("tau_inversion", logs, lambda s: abs(tau_n_log(s, cfg.N, cfg.q, tc) * tau_n_log(-s, cfg.N, cfg.q, tc) - 1), tol.abs))
    checks.append(_collect("tau_periodicity", logs, lambda s: abs(tau_n_log(s + cfg.N * lq, cfg.N, cfg.q, tc) - tau_n_log(s, cfg.N, cfg.q, tc)), tol.abs))
    checks.append(_collect("q_number_odd", range(1, 51), lambda r: abs(q_number(-r, cfg.q) + q_number(r, cfg.q)), tol.abs))
    checks.append(
        _collect("deterministic", xis[:5], lambda x: abs(theta_char(ch, x, tau, tc) - theta_char(ch, x, tau, tc)), tol.abs)
    )
    return CheckReport("special", cfg.params(), checks)


# -- rmatrix -------------------------------------------------------------------


def rmatrix_suite(cfg: SuiteConfig) -> CheckReport:
    mp = ModularParams(cfg.N, cfg.q, cfg.p)
    report = verify_properties(mp, cfg.trunc, cfg.tol, cfg.samples, cfg.seed)
    xis = sample_xi(np.random.default_rng(cfg.seed + 1), mp, cfg.samples)
    report.checks.append(_collect("zn_symmetry", xis, lambda x: zn_symmetry_residual(r_tilde_xi(x, mp, cfg.trunc)), cfg.tol.abs))
    report.params = cfg.params()
    return report


# -- structure -------------------------------------------------------------------


def structure_suite(cfg: SuiteConfig) -> CheckReport:
    rng = np.random.default_rng(cfg.seed)
    tc, tol, N = cfg.trunc, cfg.tol, cfg.N
    mp = ModularParams(N, cfg.q, cfg.p, -N)
    xs = sample_x(rng, cfg.samples, cfg.q, N)
    eye = np.eye(N * N)

    def T_at(x):
        return lambda dc: t_function(x, mp.with_c(-N + dc), tc)

    def M_at(x):
        return lambda dc: m_function(x, mp.with_c(-N + dc), tc).entries

    def order_ratio(x):
        f = f_function(x, mp, tc)
        e1 = abs(central(T_at(x), FD_STEP) - f)
        e2 = abs(central(T_at(x), FD_STEP / 2) - f)
        return abs(e1 / e2 - 4.0)

    checks = [
        _collect("T_critical", xs, lambda x: abs(t_function(x, mp, tc) - 1), tol.abs),
        _collect("M_critical", xs, lambda x: np.max(np.abs(m_function(x, mp, tc).entries - eye)), tol.abs),
        _collect("dM_dc_vanishes", xs, lambda x: np.max(np.abs(richardson(M_at(x), FD_STEP))), tol.abs),
        _collect("f_equals_dT_dc", xs, lambda x: abs(richardson(T_at(x), FD_STEP) / f_function(x, mp, tc) - 1), tol.rel),
        _collect("dT_dc_second_order", xs, order_ratio, ORDER_TOL),
        _collect("f_odd", xs, lambda x: abs(f_function(1 / x, mp, tc) + f_function(x, mp, tc)), tol.abs),
        _collect("f_jacobi", sample_triples(rng, cfg.samples, cfg.q, N), lambda t: abs(jacobi_sum(lambda v: f_function(v, mp, tc), *t)), tol.abs),
        _collect("f_p_independent", xs[:5], lambda x: abs(f_function(x, mp, tc) - f_function(x, ModularParams(N, cfg.q, cfg.p / 2), tc)), tol.abs),
    ]
    M, q, p = cfg.M, cfg.q, cfg.p

    def Y(x, m=M):
        return y_exchange(N, m, x, q, p, tc)

    checks += [
        _collect("Y_qN_periodic", xs, lambda x: abs(Y(x * q**N) - Y(x)), tol.abs),
        _collect("Y_product_one", xs, lambda x: abs(np.prod([Y(x * q**j) for j in range(N)]) - 1), tol.abs),
        _collect("Y_inversion", xs, lambda x: abs(Y(x) * Y(1 / x) - 1), tol.abs),
        _collect("F_Y_consistency", xs, lambda x: abs(f_exchange(M, 1 / x, mp, tc) / f_exchange(M, x, mp, tc) - Y(x, -M)), tol.abs),
    ]
    if N == 2:
        checks += [
            _collect("Y_sl2_q2_periodic", xs, lambda x: abs(Y(x * q**2) - Y(x)), tol.abs),
            _collect("Y_sl2_pair_one", xs, lambda x: abs(Y(x) * Y(x * q) - 1), tol.abs),
        ]

    def surface_residual(pq):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sp = solve_surface(N, M, *pq)
        lhs = (-np.sqrt(complex(sp.p))) ** (N * M)
        return abs(lhs - np.exp((-sp.c - N) * np.log(sp.q))) / max(1.0, abs(lhs))

    pts = [(complex(rng.uniform(0.2, 0.8), rng.uniform(-0.2, 0.2)), complex(rng.uniform(0.1, 0.6), rng.uniform(-0.2, 0.2))) for _ in range(cfg.samples)]
    checks.append(_collect("surface_relation", pts, surface_residual, tol.abs))
    return CheckReport("structure", cfg.params(), checks)


# -- classical limit -------------------------------------------------------------


def classical_suite(cfg: SuiteConfig) -> CheckReport:
    rng = np.random.default_rng(cfg.seed)
    tc, tol, N, M, q = cfg.trunc, cfg.tol, cfg.N, cfg.M, cfg.q
    xs = sample_x(rng, cfg.samples, q, N)
    checks = []
    for h in (1, 2, -1):
        p = ClassicalLimitLabel(h, M).nome(N, q)
        checks.append(_collect(f"Y_trivial_classical_nome_h{h}", xs, lambda x: abs(y_exchange(N, M, x, q, p, tc) - 1), tol.abs))
    for h in (1, 2):
        checks.append(_collect(f"fh_odd_h{h}", xs, lambda x: abs(f_h_function(1 / x, N, M, h, q, tc) + f_h_function(x, N, M, h, q, tc)), tol.abs))
        checks.append(
            _collect(
                f"fh_jacobi_h{h}", sample_triples(rng, cfg.samples, q, N),
                lambda t: abs(jacobi_sum(lambda v: f_h_function(v, N, M, h, q, tc), *t)), tol.abs,
            )
        )
        checks.append(
            _collect(
                f"fh_beta_limit_h{h}", xs,
                lambda x: abs(
                    richardson(lambda b: y_exchange(N, M, x, q, np.exp(N * h * np.log(q) / (1 - b)), tc), 1e-4)
                    / f_h_function(x, N, M, h, q, tc) - 1
                ),
                tol.rel,
            )
        )
    mp = ModularParams(N, q, cfg.p)
    h_even = 2
    ratio = -N * N * M * (N * M + 1) * h_even / 2
    checks.append(_collect("fh_even_ratio", xs, lambda x: abs(f_h_function(x, N, M, h_even, q, tc) / f_function(x, mp, tc) - ratio), tol.abs))
    return CheckReport("classical", cfg.params(), checks)


# -- modes -----------------------------------------------------------------------


def _table_oddness(table) -> float:
    return max(abs(table.coeffs[r] + table.coeffs[-r]) for r in table.coeffs)


def modes_suite(cfg: SuiteConfig) -> CheckReport:
    tc, tol, N, M, q, R = cfg.trunc, cfg.tol, cfg.N, cfg.M, cfg.q, cfg.r_max
    tables = {
        "critical": critical_k0_table(N, q, R),
        "sl2_k0": sl2_sector_table(0, q, R),
        "sl2_k1": sl2_sector_table(1, q, R),
        "higher_spin_1_1": higher_spin_k0_table(1, 1, N, q, R),
        "h_limit_odd": h_limit_table(N, M, 1, q, R),
        "h_limit_even": h_limit_table(N, M, 2, q, R),
    }
    checks = []
    for name, t in tables.items():
        checks.append(Check.from_residuals(f"C0_zero_{name}", [abs(t.coeffs[0])], tol.abs))
        checks.append(Check.from_residuals(f"odd_in_r_{name}", [_table_oddness(t)], tol.abs))
    crit2 = critical_k0_table(2, q, R)
    checks.append(Check.from_residuals("sl2_k0_equals_critical_N2", [max(abs(crit2.coeffs[r] - tables["sl2_k0"].coeffs[r]) for r in crit2.coeffs)], tol.abs))
    crit = tables["critical"]
    checks.append(Check.from_residuals("higher_spin_1_1_equals_critical", [max(abs(crit.coeffs[r] - tables["higher_spin_1_1"].coeffs[r]) for r in crit.coeffs)], tol.abs))
    zero = [max(abs(c) for c in higher_spin_k0_table(i, N, N, q, R).coeffs.values()) for i in range(1, N + 1)]
    checks.append(Check.from_residuals("higher_spin_i_N_zero", zero, tol.abs))
    checks.append(Check.from_residuals("h_even_equals_critical", [max(abs(crit.coeffs[r] - tables["h_limit_even"].coeffs[r]) for r in crit.coeffs)], tol.abs))
    antisym = []
    for n in range(-3, 4):
        for m in range(-3, 4):
            antisym.append(float(len(bracket(crit, n, m) + bracket(crit, m, n))))
    checks.append(Check.from_residuals("bracket_antisymmetry_terms", antisym, 0.5))

    mp = ModularParams(N, q, cfg.p)
    quad = contour_modes(lambda x: f_function(x, mp, tc), sector(N, 0).inner_radius(q), R)
    checks.append(Check.from_residuals("quadrature_critical", [max(abs(quad[r] - crit.coeffs[r]) for r in quad)], tol.abs))
    if N == 2:
        for k in range(3):
            quad_k = contour_modes(lambda x: f_function(x, mp, tc), sector(2, k).inner_radius(q), R)
            tab = sl2_sector_table(k, q, R)
            rel = max(abs(quad_k[r] - tab.coeffs[r]) / max(1.0, abs(tab.coeffs[r])) for r in quad_k)
            checks.append(Check.from_residuals(f"quadrature_sl2_k{k}", [rel], tol.abs))
    for h in (1, 2):
        label = ClassicalLimitLabel(h, M)
        scale = -2 * np.log(complex(q)) / label.normalization(N, q)
        rad = k0_radius(h_limit_pole_exponents(N, M, h, 4 * N), q)
        quad_h = contour_modes(lambda x: f_h_function(x, N, M, h, q, tc), rad, R)
        tab = h_limit_table(N, M, h, q, R)
        checks.append(Check.from_residuals(f"quadrature_h{h}", [max(abs(scale * quad_h[r] - tab.coeffs[r]) for r in quad_h)], tol.abs))

    if N >= 3:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sp = solve_surface(N, M, q, cfg.p)
        xs = sample_x(np.random.default_rng(cfg.seed), cfg.samples, q, N)
        for i in range(1, N):
            checks.append(_collect(f"s_N_central_i{i}", xs, lambda x: abs(quantum_higher_spin_y(i, N, x, sp, tc) - 1), tol.abs))
            checks.append(
                _collect(
                    f"double_exchange_i{i}", xs,
                    lambda x: max(
                        abs(quantum_higher_spin_y(i, j, x, sp, tc) * quantum_higher_spin_y(j, i, 1 / x, sp, tc) - 1)
                        for j in range(1, N + 1)
                    ),
                    tol.abs,
                )
            )
    return CheckReport("modes", cfg.params(), checks)


RUNNERS = {
    "special": special_suite,
    "rmatrix": rmatrix_suite,
    "structure": structure_suite,
    "classical": classical_suite,
    "modes": modes_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> CheckReport:
    if name == "all":
        report = CheckReport("all", cfg.params())
        for key in SUITES:
            report.extend(RUNNERS[key](cfg))
        return report
    return RUNNERS[name](cfg)
