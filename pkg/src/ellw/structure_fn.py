"""Scalar structure functions of the Poisson and exchange algebras of t(z).

T and M decompose the exchange matrix of t(z) near the critical level; f is
the critical Poisson structure function; F and Y are the t-L and t-t
exchange functions on the surface (-p^{1/2})^{NM} = q^{-c-N}; f_h is the
Poisson structure function obtained in the limit p -> q^{Nh}.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ellw.errors import BranchError, BranchWarning, DomainError, EllwError, PoleError, TruncationError
from ellw.params import DEFAULT_TRUNC, ModularParams, TruncationConfig
from ellw.rmatrix import RTensor, r_xi
from ellw.special_fn import big_theta, check_branch, check_pole, int_part, tau_n_log

MAX_CONDITION = 1e8


class SingularMatrixError(EllwError):
    pass


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the surface (-p^{1/2})^{NM} = q^{-c-N}."""

    N: int
    M: int
    q: complex
    p: complex
    c: complex

    def params(self) -> ModularParams:
        return ModularParams(self.N, self.q, self.p, self.c)


@dataclass(frozen=True)
class ClassicalLimitLabel:
    """Label of the degeneration p = q^{Nh}."""

    h: int
    M: int

    def __post_init__(self):
        if self.h == 0 or self.M == 0:
            raise DomainError("h and M must be nonzero")

    @property
    def parity(self) -> str:
        return "odd" if self.h % 2 else "even"

    def normalization(self, N: int, q: complex) -> complex:
        """N_odd = 2 N h ln q, N_even = N^2 M (NM+1) h ln q."""
        lq = cmath.log(q)
        if self.h % 2:
            return 2 * N * self.h * lq
        return N * N * self.M * (N * self.M + 1) * self.h * lq

    def nome(self, N: int, q: complex) -> complex:
        return cmath.exp(N * self.h * cmath.log(q))


def _log_arg(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise DomainError("structure functions are undefined at x = 0")
    check_branch(x, what="x")
    return np.log(x)


def _out(v):
    return complex(v) if np.ndim(v) == 0 else v


# -- critical level ----------------------------------------------------------


def t_function(x, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC):
    """T(x) = tau(q^{1/2}/x) tau(q^{1/2-c} x) / (tau(q^{1/2} x) tau(q^{1/2-c}/x)).

    Evaluated in logarithmic form, so the z^{2/N-2} factors of tau_N cancel
    identically and no branch choice enters.
    """
    if mp.c is None:
        raise DomainError("T(x) needs the central charge c")
    lx = _log_arg(x)
    lq = cmath.log(mp.q)
    a = 0.5 * lq
    b = (0.5 - mp.c) * lq

    def tau(s):
        return tau_n_log(s, mp.N, mp.q, tc)

    den = tau(a + lx) * tau(b - lx)
    check_pole(den, tc, "denominator of T(x)")
    return _out(tau(a - lx) * tau(b + lx) / den)


def _checked_inv(R: RTensor, what: str) -> RTensor:
    cond = np.linalg.cond(R.entries)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMatrixError(f"{what} is singular (condition number {cond:.3g})")
    return R.inv()


def m_function(x: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> RTensor:
    """M(x) = (((R21(x) R21(q^{c+N}x)^{-1} R12(1/x)^{-1})^{t2} R12(q^c/x)^{t2})^{t2}."""
    if mp.c is None:
        raise DomainError("M(x) needs the central charge c")
    xi = complex(_log_arg(x)) / (1j * math.pi)
    zeta = mp.zeta
    R21_x = r_xi(xi, mp, tc).swap()
    R21_shift = r_xi(xi + (mp.c + mp.N) * zeta, mp, tc).swap()
    R12_inv = r_xi(-xi, mp, tc)
    R12_c = r_xi(mp.c * zeta - xi, mp, tc)
    inner = R21_x @ _checked_inv(R21_shift, "R21(q^{c+N} x)") @ _checked_inv(R12_inv, "R12(x^-1)")
    return (inner.t2() @ R12_c.t2()).t2()


def _g(y):
    """y / (1 - y)."""
    return y / (1.0 - y)


def _ladder_len(x, q: complex, step_power: int, tc: TruncationConfig, top_shift: int = 2) -> int:
    """Number of rungs l so that the omitted q^{step_power l} tail is below tail_bound."""
    xa = np.abs(np.asarray(x, dtype=complex))
    span = float(max(np.max(xa) ** 2, np.max(1 / xa) ** 2))
    ratio = abs(q) ** step_power
    for L in range(1, tc.series_lmax + 1):
        if span * ratio**L * abs(q) ** (-top_shift) / (1 - ratio) < tc.tail_bound:
            return L
    raise TruncationError(f"l-ladder not converged within series_lmax={tc.series_lmax}")


class _Rungs:
    """Evaluates g(y q^e) with a pole check that names the offending rung."""

    def __init__(self, y, q, tc):
        self.y, self.q, self.tc = y, q, tc

    def __call__(self, e: int, label: str):
        w = self.y * self.q**e
        if np.any(np.abs(1.0 - w) < self.tc.pole_tol):
            raise PoleError(f"x^2 q^{e} = 1 (rung {label})")
        return _g(w)


def _critical_half(y, N, q, L, tc):
    r = _Rungs(y, q, tc)
    s = 0.0
    for l in range(L):
        e = 2 * N * l
        s = s + 2 * r(e, f"l={l}") - r(e + 2, f"l={l}, +2") - r(e - 2, f"l={l}, -2")
    return s - r(0, "x^2 = 1") + 0.5 * r(2, "q^2") + 0.5 * r(-2, "q^-2")


def f_function(x, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC):
    """Critical Poisson structure function f(x); independent of p.

    -2 ln q [sum_l (2 g(x^2 q^{2Nl}) - g(x^2 q^{2Nl+2}) - g(x^2 q^{2Nl-2}))
    - g(x^2) + g(x^2 q^2)/2 + g(x^2 q^-2)/2 - (x <-> 1/x)], g(y) = y/(1-y).
    """
    N, q = mp.N, mp.q
    x = np.asarray(x, dtype=complex)
    L = _ladder_len(x, q, 2 * N, tc)
    y = x * x
    val = _critical_half(y, N, q, L, tc) - _critical_half(1.0 / y, N, q, L, tc)
    return _out(-2.0 * cmath.log(q) * val)


def f_exchange(M: int, x, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC):
    """t-L exchange function F(M, x)."""
    if M == 0:
        raise DomainError("F(M, x) needs M != 0")
    N, q, p = mp.N, mp.q, mp.p
    Q = q ** (2 * N)
    x = np.asarray(x, dtype=complex)
    y, yi = x * x, 1.0 / (x * x)
    qq = q * q

    def th(z):
        return big_theta(z, Q, tc)

    if M > 0:
        out = q ** (2 * M * (N - 1)) + 0 * y
        for k in range(N * M):
            den = th(yi * qq * p ** (-k)) * th(y * qq * p**k)
            check_pole(den, tc, f"F denominator at k={k}")
            out = out * th(yi * p ** (-k)) * th(y * p**k) / den
    else:
        m = -M
        out = q ** (-2 * m * (N - 1)) + 0 * y
        for k in range(1, N * m + 1):
            den = th(yi * p**k) * th(y * p ** (-k))
            check_pole(den, tc, f"F denominator at k={k}")
            out = out * th(yi * qq * p**k) * th(y * qq * p ** (-k)) / den
    return _out(out)


def y_exchange(N: int, M: int, x, q: complex, p: complex, tc: TruncationConfig = DEFAULT_TRUNC):
    """t-t exchange function Y_{N,p,q,M}(x).

    Only Theta_{q^{2N}} enters, so any nonzero p is admissible; p = q^{Nh}
    with h < 0 has |p| > 1.
    """
    if M == 0:
        raise DomainError("Y needs M != 0")
    q, p = complex(q), complex(p)
    if p == 0 or not 0 < abs(q) < 1:
        raise DomainError("Y needs p != 0 and 0 < |q| < 1")
    Q = q ** (2 * N)
    x = np.asarray(x, dtype=complex)
    y = x * x
    qq = q * q
    top = N * M if M > 0 else N * (-M) - 1
    out = 1.0 + 0 * y

    def th(z):
        return big_theta(z, Q, tc)

    for k in range(1, top + 1):
        pk, pmk = p**k, p ** (-k)
        num = th(y * pmk) ** 2 * th(y * qq * pk) * th(y / qq * pk)
        den = th(y * pk) ** 2 * th(y * qq * pmk) * th(y / qq * pmk)
        check_pole(den, tc, f"Y denominator at k={k}")
        out = out * num / den
    return _out(out)


def _fh_coefficients(N: int, M: int):
    """(E(NM/2)(E(NM/2)+1), E((NM+1)/2)^2) with E the floor."""
    e1 = int_part(N * M / 2)
    e2 = int_part((N * M + 1) / 2)
    return e1 * (e1 + 1), e2 * e2


def _odd_half(y, N, M, q, L, tc):
    A, B = _fh_coefficients(N, M)
    r = _Rungs(y, q, tc)
    s = 0.0
    for l in range(L):
        e = 2 * N * l
        if A:
            s = s + A * (2 * r(e, f"l={l}") - r(e + 2, f"l={l}, +2") - r(e - 2, f"l={l}, -2"))
        if B:
            e = e + N
            s = s + B * (2 * r(e, f"l={l}, +N") - r(e + 2, f"l={l}, +N+2") - r(e - 2, f"l={l}, +N-2"))
    if A:
        s = s - 0.5 * A * (2 * r(0, "x^2 = 1") - r(2, "q^2") - r(-2, "q^-2"))
    return s


def _even_half(y, N, q, L, tc):
    r = _Rungs(y, q, tc)
    s = 0.0
    for l in range(L):
        e = 2 * N * l
        s = s + 2 * r(e, f"l={l}") - r(e + 2, f"l={l}, +2") - r(e - 2, f"l={l}, -2")
    return s - 0.5 * (2 * r(0, "x^2 = 1") - r(2, "q^2") - r(-2, "q^-2"))


def f_h_function(x, N: int, M: int, h: int, q: complex, tc: TruncationConfig = DEFAULT_TRUNC):
    """Poisson structure function of the p = q^{Nh} limit, parity selected by h.

    M enters with its sign; E is the floor function.
    """
    label = ClassicalLimitLabel(h, M)
    q = complex(q)
    x = np.asarray(x, dtype=complex)
    L = _ladder_len(x, q, 2 * N, tc, top_shift=N + 2)
    y = x * x
    if h % 2:
        val = _odd_half(y, N, M, q, L, tc) - _odd_half(1.0 / y, N, M, q, L, tc)
    else:
        val = _even_half(y, N, q, L, tc) - _even_half(1.0 / y, N, q, L, tc)
    return _out(label.normalization(N, q) * val)


def classical_limit_derivative(x, N: int, M: int, h: int, q: complex, step: float = 1e-5, tc: TruncationConfig = DEFAULT_TRUNC):
    """lim_{beta -> 0} (Y - 1)/beta along q^{Nh} = p^{1-beta}, by central differences.

    An oracle for f_h built only from Y.
    """
    lq = cmath.log(complex(q))

    def Y(beta):
        return np.asarray(y_exchange(N, M, x, q, cmath.exp(N * h * lq / (1 - beta)), tc))

    return _out((Y(step) - Y(-step)) / (2 * step))


def solve_surface(N: int, M: int, q: complex, p: complex) -> SurfacePoint:
    """Central charge c with (-p^{1/2})^{NM} = q^{-c-N}, principal branches.

    c = -N - NM log(-p^{1/2}) / log q. Raises BranchError when log q sits on
    its cut; a warning is issued when -p^{1/2} does (harmless, NM is an
    integer).
    """
    if M == 0:
        raise DomainError("surface needs M != 0")
    q, p = complex(q), complex(p)
    if abs(cmath.phase(q)) > math.pi - 1e-12 and q.real < 0:
        raise BranchError("q lies on the branch cut of log")
    # + 0j clears a signed zero so that log(-|r|) takes arg +pi, the principal value
    minus_root = -cmath.sqrt(p) + 0j
    if minus_root.imag == 0 and minus_root.real < 0:
        warnings.warn("-p^{1/2} lies on the branch cut of log; principal value arg = +pi used", BranchWarning, stacklevel=2)
    c = -N - N * M * cmath.log(minus_root) / cmath.log(q)
    lhs = minus_root ** (N * M)
    rhs = cmath.exp((-c - N) * cmath.log(q))
    if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
        raise BranchError(f"surface relation violated: |lhs - rhs| = {abs(lhs - rhs):.3g}")
    return SurfacePoint(N, M, q, p, c)
