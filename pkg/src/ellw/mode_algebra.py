"""Mode-level structure coefficients of the Poisson brackets.

A table maps r to C_r with {t_n, t_m} = sum_r C_r t_{n-2r} t_{m+2r}. The
contour-quadrature helpers extract the same coefficients directly from a
structure function, averaging the Laurent expansions on the two contour
orderings, and serve as the independent check of the closed forms.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from ellw.errors import DomainError, PoleError
from ellw.params import DEFAULT_TRUNC, ModularParams, TruncationConfig
from ellw.special_fn import int_part, q_number
from ellw.structure_fn import SurfacePoint, f_function, y_exchange

MODE_WINDOW = 10_000


@dataclass(frozen=True)
class PoleLadder:
    N: int
    entries: Tuple[int, ...]


@dataclass(frozen=True)
class Sector:
    """R1/R2 in (|q|^{-lower_exponent}, |q|^{-upper_exponent})."""

    k: int
    lower_exponent: float
    upper_exponent: float

    def inner_radius(self, q: complex) -> float:
        """|w/z| at the geometric middle of the sector (R1 > R2 ordering)."""
        return abs(q) ** ((self.lower_exponent + self.upper_exponent) / 2)


@dataclass
class ModeCoeffTable:
    label: str
    N: int
    q: complex
    coeffs: Dict[int, complex]
    meta: Dict[str, int] = field(default_factory=dict)

    @property
    def r_max(self) -> int:
        return max(self.coeffs)

    def rows(self) -> List[Tuple[int, complex]]:
        # adding 0j turns signed zeros into +0 so serialized tables never show -0
        return sorted((r, c + 0j) for r, c in self.coeffs.items())

    def to_csv(self) -> str:
        lines = ["r,re,im"]
        for r, c in self.rows():
            lines.append(f"{r},{c.real:.17g},{c.imag:.17g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "label": self.label,
            "N": self.N,
            "q": {"re": self.q.real, "im": self.q.imag},
            "meta": self.meta,
            "rows": [{"r": r, "re": c.real, "im": c.imag} for r, c in self.rows()],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_text(self) -> str:
        head = f"# {self.label} N={self.N} q={self.q}" + "".join(f" {k}={v}" for k, v in self.meta.items())
        return "\n".join([head] + [f"{r:>5d}  {c.real:+.15e} {c.imag:+.15e}i" for r, c in self.rows()]) + "\n"


class FormalBracket:
    """sum of coefficients times t_{k1} t_{k2} over commuting symbols, k1 <= k2."""

    def __init__(self, terms: Dict[Tuple[int, int], complex] | None = None):
        self.terms: Dict[Tuple[int, int], complex] = {}
        for key, val in (terms or {}).items():
            self._add(key, val)

    def _add(self, key, val):
        k = tuple(sorted(key))
        new = self.terms.get(k, 0) + val
        if new == 0:
            self.terms.pop(k, None)
        else:
            self.terms[k] = new

    def __add__(self, other: "FormalBracket") -> "FormalBracket":
        out = FormalBracket(self.terms)
        for key, val in other.terms.items():
            out._add(key, val)
        return out

    def __neg__(self) -> "FormalBracket":
        return FormalBracket({k: -v for k, v in self.terms.items()})

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalBracket) and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"({v:.6g}) t{a} t{b}" for (a, b), v in sorted(self.terms.items()))
        return f"FormalBracket({body or '0'})"


# -- pole ladders and sectors -------------------------------------------------


def pole_ladder(N: int, cutoff: int) -> PoleLadder:
    """Exponents P with poles of f at |x| = |q|^{-P}: {0,1} and {Nl-1, Nl, Nl+1}."""
    if N < 2 or cutoff < 1:
        raise DomainError("pole_ladder needs N >= 2 and cutoff >= 1")
    found = {0, 1}
    l = 1
    while N * l - 1 <= cutoff:
        found.update({N * l - 1, N * l, N * l + 1})
        l += 1
    return PoleLadder(N, tuple(sorted(e for e in found if e <= cutoff)))


def sector(N: int, k: int) -> Sector:
    if k < 0:
        raise DomainError("sector index k must be >= 0")
    ladder = pole_ladder(N, N * (k + 2) + 1).entries
    return Sector(k, ladder[k], ladder[k + 1])


def h_limit_pole_exponents(N: int, M: int, h: int, cutoff: int) -> Tuple[Fraction, ...]:
    """Exponents e (|x| = |q|^e, e >= 0) of the poles of f_h up to ``cutoff``.

    For odd h with a nonzero E((NM+1)/2) the extra q^{2Nl+N} ladder sits at
    half-integer exponents when N is odd.
    """
    e1 = int_part(N * M / 2)
    A = e1 * (e1 + 1)
    B = int_part((N * M + 1) / 2) ** 2
    found = set()
    for l in range(0, cutoff + 1):
        if h % 2 == 0 or A:
            found.update(Fraction(N * l + d) for d in (-1, 0, 1))
        if h % 2 and B:
            found.update(Fraction(2 * N * l + N + d, 2) for d in (-2, 0, 2))
    return tuple(sorted({abs(e) for e in found if abs(e) <= cutoff}))


# -- analytic tables ----------------------------------------------------------


def _check_q(q: complex) -> complex:
    q = complex(q)
    if q == 0 or abs(abs(q) - 1) < 1e-12:
        raise DomainError(f"mode tables need 0 < |q| != 1, got q = {q}")
    return q


def _prefactor(q: complex) -> complex:
    return -2 * (q - 1 / q) * cmath.log(q)


def _table(label, N, q, r_max, coeff: Callable[[int], complex], **meta) -> ModeCoeffTable:
    if r_max < 0:
        raise DomainError("r_max must be >= 0")
    coeffs = {r: (0j if r == 0 else complex(coeff(r))) for r in range(-r_max, r_max + 1)}
    return ModeCoeffTable(label, N, q, coeffs, dict(meta))


def critical_k0_table(N: int, q: complex, r_max: int) -> ModeCoeffTable:
    """C_r = -2 (q - 1/q) ln q [(N-1)r]_q [r]_q / [Nr]_q."""
    q = _check_q(q)
    pre = _prefactor(q)
    return _table(
        "critical_k0", N, q, r_max,
        lambda r: pre * q_number((N - 1) * r, q) * q_number(r, q) / q_number(N * r, q),
    )


def sl2_sector_table(k: int, q: complex, s_max: int) -> ModeCoeffTable:
    """C_s = (-1)^{k+1} 2 ln q (q^{(2k+1)s} - q^{-(2k+1)s}) / (q^s + q^{-s}), sl(2)."""
    if k < 0:
        raise DomainError("sector index k must be >= 0")
    q = _check_q(q)
    sign = -1 if k % 2 == 0 else 1
    lq = cmath.log(q)
    m = 2 * k + 1

    def coeff(s):
        return sign * 2 * lq * (q ** (m * s) - q ** (-m * s)) / (q**s + q ** (-s))

    return _table("sl2_sector", 2, q, s_max, coeff, k=k)


def higher_spin_k0_table(i: int, j: int, N: int, q: complex, r_max: int) -> ModeCoeffTable:
    """C_r = -2 (q - 1/q) ln q [(N - max(i,j)) r]_q [min(i,j) r]_q / [Nr]_q."""
    if not (1 <= i <= N and 1 <= j <= N):
        raise DomainError(f"spins must satisfy 1 <= i, j <= N, got ({i}, {j})")
    q = _check_q(q)
    pre = _prefactor(q)
    hi, lo = max(i, j), min(i, j)
    return _table(
        "higher_spin_k0", N, q, r_max,
        lambda r: pre * q_number((N - hi) * r, q) * q_number(lo * r, q) / q_number(N * r, q),
        i=i, j=j,
    )


def h_limit_table(N: int, M: int, h: int, q: complex, r_max: int) -> ModeCoeffTable:
    """Sector k=0 table of the p = q^{Nh} limit; M enters with its sign.

    h even reproduces the critical table exactly (same code path). h odd:
    -2 (q - 1/q) ln q (-E((NM+1)/2)^2 [r]^2/[Nr] + E(NM/2)(E(NM/2)+1) [(N-1)r][r]/[Nr]).
    """
    if h == 0 or M == 0:
        raise DomainError("h and M must be nonzero")
    q = _check_q(q)
    if h % 2 == 0:
        base = critical_k0_table(N, q, r_max)
        return ModeCoeffTable("h_limit", N, q, base.coeffs, {"M": M, "h": h})
    e1 = int_part(N * M / 2)
    A = e1 * (e1 + 1)
    B = int_part((N * M + 1) / 2) ** 2
    pre = _prefactor(q)

    def coeff(r):
        qr, qNr = q_number(r, q), q_number(N * r, q)
        return pre * (-B * qr * qr / qNr + A * q_number((N - 1) * r, q) * qr / qNr)

    return _table("h_limit", N, q, r_max, coeff, M=M, h=h)


def bracket(table: ModeCoeffTable, n: int, m: int, window: int = MODE_WINDOW) -> FormalBracket:
    """{t_n, t_m} = sum_r C_r t_{n-2r} t_{m+2r}, |r| <= r_max."""
    if abs(n) > window or abs(m) > window:
        raise DomainError(f"mode indices ({n}, {m}) outside the window |.| <= {window}")
    out = FormalBracket()
    for r, c in table.rows():
        if c != 0:
            out._add((n - 2 * r, m + 2 * r), c)
    return out


# -- higher spin generators ---------------------------------------------------


def spin_grid(i: int) -> Tuple[Fraction, ...]:
    """u in {-(i-1)/2, ..., (i-1)/2}, exact halves."""
    return tuple(Fraction(-(i - 1), 2) + k for k in range(i))


def _qpow(q: complex, u: Fraction) -> complex:
    return cmath.exp(float(u) * cmath.log(q))


def classical_higher_spin_f(i: int, j: int, x, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC):
    """sum_{u,v} f(q^{v-u} x) over the spin-i and spin-j grids."""
    N = mp.N
    if not (1 <= i <= N and 1 <= j <= N):
        raise DomainError(f"spins must satisfy 1 <= i, j <= N, got ({i}, {j})")
    x = np.asarray(x, dtype=complex)
    total = 0.0
    for u in spin_grid(i):
        for v in spin_grid(j):
            try:
                total = total + np.asarray(f_function(_qpow(mp.q, v - u) * x, mp, tc))
            except PoleError as exc:
                raise PoleError(f"{exc} at shift (u, v) = ({u}, {v})") from exc
    return complex(total) if np.ndim(total) == 0 else total


def quantum_higher_spin_y(i: int, j: int, x, sp: SurfacePoint, tc: TruncationConfig = DEFAULT_TRUNC):
    """prod_{u,v} Y_{N,p,q,M}(q^{v-u} x): scalar exchange factor of s_i(z) s_j(w).

    Only the scalar factor is computed; operator ordering within s_i does not
    enter it.
    """
    N = sp.N
    if not (1 <= i <= N and 1 <= j <= N):
        raise DomainError(f"spins must satisfy 1 <= i, j <= N, got ({i}, {j})")
    x = np.asarray(x, dtype=complex)
    out = 1.0 + 0 * x
    for u in spin_grid(i):
        for v in spin_grid(j):
            out = out * np.asarray(y_exchange(N, sp.M, _qpow(sp.q, v - u) * x, sp.q, sp.p, tc))
    return complex(out) if np.ndim(out) == 0 else out


# -- contour quadrature oracle ------------------------------------------------


def laurent_coefficients(func: Callable, radius: float, points: int = 2048) -> Callable[[int], complex]:
    """Laurent coefficients a_s of func on |x| = radius (trapezoid rule / FFT)."""
    theta = 2 * np.pi * np.arange(points) / points
    vals = np.asarray(func(radius * np.exp(1j * theta)), dtype=complex)
    c = np.fft.fft(vals) / points

    def coeff(s: int) -> complex:
        return complex(c[s % points] * radius ** (-s))

    return coeff


def contour_modes(func: Callable, radius: float, r_max: int, points: int = 2048) -> Dict[int, complex]:
    """Symmetrized mode coefficients C_r of {t_n, t_m} = sum_r C_r t_{n-2r} t_{m+2r}.

    ``func`` is the structure function of x = w/z and ``radius`` the value of
    |x| for the R1 > R2 contour ordering; the swapped ordering uses 1/radius.
    C_r is the average of the x^{-2r} coefficients of the two expansions.
    """
    if not 0 < radius < 1:
        raise DomainError("inner contour ratio must lie in (0, 1)")
    inner = laurent_coefficients(func, radius, points)
    outer = laurent_coefficients(func, 1 / radius, points)
    return {r: 0.5 * (inner(-2 * r) + outer(-2 * r)) for r in range(-r_max, r_max + 1)}


def higher_spin_pole_exponents(i: int, j: int, N: int, cutoff: int) -> Tuple[Fraction, ...]:
    """|x| = |q|^e exponents of the poles of sum_{u,v} f(q^{v-u} x)."""
    base = pole_ladder(N, cutoff + N).entries
    shifts = {v - u for u in spin_grid(i) for v in spin_grid(j)}
    found = {abs(sign * Fraction(e) - s) for e in base for sign in (1, -1) for s in shifts}
    return tuple(sorted(e for e in found if e <= cutoff))


def k0_radius(exponents, q: complex) -> float:
    """|q|^{e/2} with e the smallest positive pole exponent: midway into the first sector."""
    e = min(float(x) for x in exponents if x > 0)
    return abs(q) ** (e / 2)
