"""Truncated evaluation of the scalar special functions.

Theta functions with rational characteristics, single- and double-base
q-Pochhammer products, the one-parameter theta Theta_p, tau_N, q-numbers and
the integer part. Every infinite object is cut off according to a
:class:`TruncationConfig`; the discarded tail is estimated and a
:class:`TruncationError` is raised when it exceeds ``tail_bound``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ellw.errors import BranchWarning, DomainError, PoleError, TruncationError
from ellw.params import DEFAULT_TRUNC, ModularParams, TruncationConfig

Number = Union[complex, float, np.ndarray]

BRANCH_MARGIN = 1e-9


@dataclass(frozen=True)
class ThetaChar:
    """Rational characteristics (gamma1, gamma2)."""

    gamma1: Fraction
    gamma2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma1", Fraction(self.gamma1))
        object.__setattr__(self, "gamma2", Fraction(self.gamma2))

    def fits_rank(self, N: int) -> bool:
        return (2 * N) % self.gamma1.denominator == 0 and (2 * N) % self.gamma2.denominator == 0


def check_branch(z: Number, margin: float = BRANCH_MARGIN, what: str = "argument") -> None:
    """Warn when any z lies within ``margin`` (in arg) of the negative real axis."""
    arg = np.angle(np.asarray(z, dtype=complex))
    if np.any(math.pi - np.abs(arg) < margin):
        warnings.warn(f"{what} is on the principal-branch cut of log", BranchWarning, stacklevel=3)


def principal_power(z: Number, a: complex) -> Number:
    """z**a = exp(a log z) on the principal branch (flagged near the cut)."""
    check_branch(z, what="base of fractional power")
    return np.exp(a * np.log(np.asarray(z, dtype=complex)))


def check_pole(den: Number, tc: TruncationConfig, what: str) -> None:
    if np.any(np.abs(den) < tc.pole_tol):
        raise PoleError(f"{what} vanishes (|den| < {tc.pole_tol:g})")


def theta_char(ch: ThetaChar, xi: complex, tau: complex, tc: TruncationConfig = DEFAULT_TRUNC) -> complex:
    """Bilateral sum  sum_m exp(i pi (m+g1)^2 tau + 2 i pi (m+g1)(xi+g2)).

    The sum runs over |m| <= theta_terms. The first omitted terms on both
    ends, relative to the largest retained term, must stay below tail_bound.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"theta needs Im(tau) > 0, got tau = {tau}")
    g1 = float(ch.gamma1)
    g2 = float(ch.gamma2)
    xi = complex(xi)
    M = tc.theta_terms
    m = np.arange(-M, M + 1) + g1
    expo = 1j * np.pi * m * m * tau + 2j * np.pi * m * (xi + g2)
    edge = np.array([-M - 1, M + 1]) + g1
    edge_expo = 1j * np.pi * edge * edge * tau + 2j * np.pi * edge * (xi + g2)
    peak = np.max(expo.real)
    tail = np.exp(np.max(edge_expo.real) - peak)
    if tail > tc.tail_bound:
        raise TruncationError(f"theta tail {tail:.3g} exceeds {tc.tail_bound:g}; raise theta_terms")
    return complex(np.sum(np.exp(expo)))


def _product_tail(x_abs: float, base_abs: float, n_kept: int) -> float:
    if base_abs == 0.0:
        return 0.0
    return x_abs * base_abs**n_kept / (1.0 - base_abs)


def q_pochhammer(x: Number, base: complex, tc: TruncationConfig = DEFAULT_TRUNC) -> Number:
    """(x; base)_inf truncated to the factors n = 0..prod_terms."""
    base = complex(base)
    if abs(base) >= 1:
        raise DomainError(f"q-Pochhammer needs |base| < 1, got {abs(base)}")
    x = np.asarray(x, dtype=complex)
    K = tc.prod_terms + 1
    tail = _product_tail(float(np.max(np.abs(x))) if x.size else 0.0, abs(base), K)
    if tail > tc.tail_bound:
        raise TruncationError(f"q-Pochhammer tail {tail:.3g} exceeds {tc.tail_bound:g}; raise prod_terms")
    powers = base ** np.arange(K)
    out = np.prod(1.0 - x[..., None] * powers, axis=-1)
    return complex(out) if out.ndim == 0 else out


def q_pochhammer2(x: Number, base1: complex, base2: complex, tc: TruncationConfig = DEFAULT_TRUNC) -> Number:
    """(x; base1, base2)_inf = prod_{m,n >= 0} (1 - x base1^m base2^n), both cutoffs prod_terms."""
    base1, base2 = complex(base1), complex(base2)
    if abs(base1) >= 1 or abs(base2) >= 1:
        raise DomainError("double q-Pochhammer needs both |bases| < 1")
    x = np.asarray(x, dtype=complex)
    K = tc.prod_terms + 1
    xa = float(np.max(np.abs(x))) if x.size else 0.0
    b1, b2 = abs(base1), abs(base2)
    tail = _product_tail(xa, b1, K) / (1 - b2) + _product_tail(xa, b2, K) / (1 - b1)
    if tail > tc.tail_bound:
        raise TruncationError(f"double q-Pochhammer tail {tail:.3g} exceeds {tc.tail_bound:g}")
    grid = np.outer(base1 ** np.arange(K), base2 ** np.arange(K)).ravel()
    out = np.prod(1.0 - x[..., None] * grid, axis=-1)
    return complex(out) if out.ndim == 0 else out


def big_theta(z: Number, nome: complex, tc: TruncationConfig = DEFAULT_TRUNC) -> Number:
    """Theta_nome(z) = (z; nome)(nome/z; nome)(nome; nome).

    Satisfies Theta(nome z) = -z^{-1} Theta(z).
    """
    nome = complex(nome)
    if abs(nome) >= 1:
        raise DomainError(f"Theta needs |nome| < 1, got {abs(nome)}")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("Theta_nome(z) is undefined at z = 0")
    out = q_pochhammer(z, nome, tc) * q_pochhammer(nome / z, nome, tc) * q_pochhammer(nome, nome, tc)
    return complex(out) if np.ndim(out) == 0 else out


def kappa_inv(z2: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> complex:
    """1/kappa(z^2): four double-base Pochhammer products over four, bases (p, q^{2N})."""
    N, q, p = mp.N, mp.q, mp.p
    z2 = complex(z2)
    if z2 == 0:
        raise DomainError("kappa is undefined at z^2 = 0")
    Q = q ** (2 * N)
    qq = q * q
    pq = p * q ** (2 * N - 2)

    def poch(x):
        return q_pochhammer2(x, p, Q, tc)

    num = poch(Q / z2) * poch(qq * z2) * poch(p / z2) * poch(pq * z2)
    den = poch(Q * z2) * poch(qq / z2) * poch(p * z2) * poch(pq / z2)
    check_pole(den, tc, "denominator of 1/kappa(z^2)")
    return num / den


def tau_n_log(s: Number, N: int, q: complex, tc: TruncationConfig = DEFAULT_TRUNC) -> Number:
    """tau_N(z) with z = exp(s); the power z^{2/N-2} is exp((2/N-2) s), branch free."""
    s = np.asarray(s, dtype=complex)
    z2 = np.exp(2 * s)
    Q = complex(q) ** (2 * N)
    den = big_theta(q / z2, Q, tc)
    check_pole(den, tc, "Theta(q z^-2) in tau_N")
    out = np.exp((2.0 / N - 2.0) * s) * big_theta(q * z2, Q, tc) / den
    return complex(out) if np.ndim(out) == 0 else out


def tau_n(z: Number, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> Number:
    """tau_N(z) = z^{2/N-2} Theta_{q^{2N}}(q z^2) / Theta_{q^{2N}}(q z^{-2}), principal branch.

    tau_N(q^N z) = tau_N(z) and tau_N(1/z) = 1/tau_N(z) hold whenever the
    shifted arguments stay on the same sheet of log; see :func:`tau_n_log`
    for the branch-free version.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("tau_N is undefined at z = 0")
    check_branch(z, what="argument of tau_N")
    return tau_n_log(np.log(z), mp.N, mp.q, tc)


def q_number(r: int, q: complex) -> complex:
    """[r]_q = (q^r - q^-r)/(q - q^-1). Exactly odd in r."""
    q = complex(q)
    if q == 0 or abs(q * q - 1) < 1e-14:
        raise DomainError(f"q-number undefined for q = {q}")
    return (q**r - q ** (-r)) / (q - 1 / q)


def int_part(x: float) -> int:
    """Integer part E(x). Implemented as floor; callers pass x >= 0."""
    return math.floor(x)
