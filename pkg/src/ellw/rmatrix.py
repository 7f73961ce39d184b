"""The Z_N-vertex elliptic R-matrix and its structural properties.

Spectral parameters are handled additively: z = exp(i pi xi). All
constructors have a ``*_xi`` form taking xi directly; the z-based wrappers
use the principal logarithm. Working in xi makes the maps z -> -z
(xi -> xi + 1) and z -> -p^{1/2} z (xi -> xi + 1 + tau) unambiguous, which
the antisymmetry and quasi-periodicity identities require.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ellw.errors import EllwError
from ellw.params import DEFAULT_TOL, DEFAULT_TRUNC, ModularParams, Tolerance, TruncationConfig
from ellw.report import Check, CheckReport
from ellw.special_fn import ThetaChar, check_branch, check_pole, kappa_inv, tau_n_log, theta_char

HALF = ThetaChar(1 / 2, 1 / 2)


@dataclass(frozen=True, eq=False)
class RTensor:
    """N^2 x N^2 matrix with row index (a, b) and column index (c, d).

    ``entries[a*N + b, c*N + d]`` is R^{a,b}_{c,d}; this is the numpy
    ``kron`` convention, so ``np.kron(A, B)`` is A (x) B.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        dim = self.n * self.n
        if self.entries.shape != (dim, dim):
            raise ValueError(f"RTensor for N={self.n} needs shape {(dim, dim)}, got {self.entries.shape}")

    @property
    def tensor(self) -> np.ndarray:
        """View indexed as [a, b, c, d]."""
        return self.entries.reshape(self.n, self.n, self.n, self.n)

    def entry(self, a: int, b: int, c: int, d: int) -> complex:
        N = self.n
        return complex(self.tensor[a % N, b % N, c % N, d % N])

    def swap(self) -> "RTensor":
        """R_21 = P R_12 P."""
        return RTensor(self.n, self.tensor.transpose(1, 0, 3, 2).reshape(self.entries.shape))

    def t2(self) -> "RTensor":
        """Partial transpose in the second factor (b <-> d)."""
        return RTensor(self.n, self.tensor.transpose(0, 3, 2, 1).reshape(self.entries.shape))

    def inv(self) -> "RTensor":
        return RTensor(self.n, np.linalg.inv(self.entries))

    def __matmul__(self, other: "RTensor") -> "RTensor":
        return RTensor(self.n, self.entries @ other.entries)

    def __mul__(self, scalar: complex) -> "RTensor":
        return RTensor(self.n, scalar * self.entries)

    __rmul__ = __mul__

    def max_abs_diff(self, other) -> float:
        other = other.entries if isinstance(other, RTensor) else other
        return float(np.max(np.abs(self.entries - other)))

    @classmethod
    def identity(cls, n: int) -> "RTensor":
        return cls(n, np.eye(n * n, dtype=complex))


@dataclass(frozen=True)
class WeightMatrix:
    alpha: tuple
    matrix: np.ndarray


@lru_cache(maxsize=None)
def _elementary(N: int, origin: int):
    omega = cmath.exp(2j * math.pi / N)
    g = np.diag([omega ** (i + origin) for i in range(N)])
    h = np.roll(np.eye(N, dtype=complex), 1, axis=1)
    return g, h, omega


def elementary_matrices(N: int, origin: int = 0):
    """g = diag(omega^i), h_{i,i+1} = 1 and omega = exp(2 i pi / N).

    ``origin`` shifts the diagonal index (g_ii = omega^{i+origin}); it only
    changes g by a global phase.
    """
    if N < 2:
        raise EllwError("N must be >= 2")
    g, h, omega = _elementary(N, origin)
    return g.copy(), h.copy(), omega


def sqrt_g(N: int, origin: int = 0) -> np.ndarray:
    """Principal square root of g: diag(exp(i pi (i+origin)/N))."""
    return np.diag([cmath.exp(1j * math.pi * (i + origin) / N) for i in range(N)])


def weight_matrix(alpha, N: int, origin: int = 0) -> WeightMatrix:
    """I_(a1,a2) = g^a2 h^a1."""
    a1, a2 = alpha
    g, h, _ = elementary_matrices(N, origin)
    mat = np.linalg.matrix_power(g, a2 % N) @ np.linalg.matrix_power(h, a1 % N)
    return WeightMatrix((a1 % N, a2 % N), mat)


def weight_w(alpha, xi: complex, zeta: complex, tau: complex, N: int, tc: TruncationConfig = DEFAULT_TRUNC) -> complex:
    """W_(a1,a2)(xi, zeta, tau): ratio of characteristic thetas at xi + zeta/N and zeta/N, over N."""
    a1, a2 = alpha
    ch = ThetaChar(HALF.gamma1 + Fraction(a1 % N, N), HALF.gamma2 + Fraction(a2 % N, N))
    den = theta_char(ch, zeta / N, tau, tc)
    check_pole(den, tc, f"theta denominator of W{tuple(alpha)}")
    return theta_char(ch, xi + zeta / N, tau, tc) / den / N


@lru_cache(maxsize=None)
def _basis_tensors(N: int, origin: int):
    """I_alpha (x) I_alpha^{-1} for all alpha, stacked."""
    out = []
    for a1 in range(N):
        for a2 in range(N):
            I = weight_matrix((a1, a2), N, origin).matrix
            out.append(((a1, a2), np.kron(I, np.linalg.inv(I))))
    return tuple(out)


def r_tilde_xi(xi: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC, origin: int = 0) -> RTensor:
    """R~ at additive spectral parameter xi (z = exp(i pi xi))."""
    N = mp.N
    xi = complex(xi)
    zeta, tau = mp.zeta, mp.tau
    z = cmath.exp(1j * math.pi * xi)
    den = theta_char(HALF, xi + zeta, tau, tc)
    check_pole(den, tc, "theta[1/2,1/2](xi + zeta) in the R-matrix prefactor")
    pref = cmath.exp(1j * math.pi * xi * (2.0 / N - 2.0)) * kappa_inv(z * z, mp, tc)
    pref *= theta_char(HALF, zeta, tau, tc) / den
    acc = np.zeros((N * N, N * N), dtype=complex)
    for alpha, basis in _basis_tensors(N, origin):
        acc += weight_w(alpha, xi, zeta, tau, N, tc) * basis
    return RTensor(N, pref * acc)


def spectral_xi(z: complex) -> complex:
    """xi with z = exp(i pi xi), principal branch."""
    z = complex(z)
    if z == 0:
        raise EllwError("spectral parameter z must be nonzero")
    check_branch(z, what="spectral parameter z")
    return cmath.log(z) / (1j * math.pi)


def build_r_tilde(z: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> RTensor:
    return r_tilde_xi(spectral_xi(z), mp, tc)


def gauge_transform(rt: RTensor, mp: ModularParams = None, origin: int = 0, inverse: bool = False) -> RTensor:
    """(g^{1/2} (x) g^{1/2}) R (g^{-1/2} (x) g^{-1/2}); ``inverse`` undoes it."""
    s = sqrt_g(rt.n, origin)
    G = np.kron(s, s)
    Gi = np.kron(np.diag(1 / np.diag(s)), np.diag(1 / np.diag(s)))
    if inverse:
        G, Gi = Gi, G
    return RTensor(rt.n, G @ rt.entries @ Gi)


def r_xi(xi: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC, origin: int = 0) -> RTensor:
    """Gauge-transformed R at additive xi."""
    return gauge_transform(r_tilde_xi(xi, mp, tc, origin), mp, origin)


def build_r(z: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> RTensor:
    return r_xi(spectral_xi(z), mp, tc)


def tau_prefactor_xi(xi: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> complex:
    """tau_N(q^{1/2} x^{-1}) with x = exp(i pi xi)."""
    s = 1j * math.pi * (mp.zeta / 2 - xi)
    return tau_n_log(s, mp.N, mp.q, tc)


def r_hat_xi(xi: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC, origin: int = 0) -> RTensor:
    return tau_prefactor_xi(xi, mp, tc) * r_xi(xi, mp, tc, origin)


def build_r_hat(z: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> RTensor:
    """R^(z) = tau_N(q^{1/2} z^{-1}) R(z)."""
    return r_hat_xi(spectral_xi(z), mp, tc)


def build_r_hat_star(z: complex, mp: ModularParams, tc: TruncationConfig = DEFAULT_TRUNC) -> RTensor:
    """R^* : R^ with the nome replaced by p* = p q^{-2c}."""
    return build_r_hat(z, ModularParams(mp.N, mp.q, mp.p_star, mp.c), tc)


# -- three-fold embeddings -------------------------------------------------


def embed12(R: RTensor) -> np.ndarray:
    return np.kron(R.entries, np.eye(R.n))


def embed23(R: RTensor) -> np.ndarray:
    return np.kron(np.eye(R.n), R.entries)


def embed13(R: RTensor) -> np.ndarray:
    P23 = np.kron(np.eye(R.n), _permutation(R.n))
    return P23 @ embed12(R) @ P23


@lru_cache(maxsize=None)
def _permutation(N: int) -> np.ndarray:
    P = np.zeros((N * N, N * N))
    for a in range(N):
        for b in range(N):
            P[b * N + a, a * N + b] = 1.0
    return P


def permutation(N: int) -> np.ndarray:
    """The flip operator P on C^N (x) C^N."""
    return _permutation(N).copy()


# -- property residuals -----------------------------------------------------


def ybe_residual(xi_z: complex, xi_w: complex, mp, tc=DEFAULT_TRUNC, origin: int = 0) -> float:
    """R12(z) R13(w) R23(w/z) - R23(w/z) R13(w) R12(z) on the N^3-dim space."""
    a = embed12(r_xi(xi_z, mp, tc, origin))
    b = embed13(r_xi(xi_w, mp, tc, origin))
    c = embed23(r_xi(xi_w - xi_z, mp, tc, origin))
    return float(np.max(np.abs(a @ b @ c - c @ b @ a)))


def unitarity_residual(xi: complex, mp, tc=DEFAULT_TRUNC, origin: int = 0) -> float:
    """R12(z) R21(z^-1) - 1."""
    R = r_xi(xi, mp, tc, origin)
    R21 = r_xi(-xi, mp, tc, origin).swap()
    return R.__matmul__(R21).max_abs_diff(np.eye(mp.N**2))


def crossing_residual(xi: complex, mp, tc=DEFAULT_TRUNC, origin: int = 0) -> float:
    """R12(z)^{t2} R21(q^{-N} z^{-1})^{t2} - 1."""
    R = r_xi(xi, mp, tc, origin).t2()
    R21 = r_xi(-mp.N * mp.zeta - xi, mp, tc, origin).swap().t2()
    return (R @ R21).max_abs_diff(np.eye(mp.N**2))


def antisymmetry_residual(xi: complex, mp, tc=DEFAULT_TRUNC, origin: int = 0) -> float:
    """R12(-z) - omega (g^-1 (x) 1) R12(z) (g (x) 1), with -z meaning xi + 1."""
    N = mp.N
    g, _, omega = elementary_matrices(N, origin)
    I = np.eye(N)
    lhs = r_xi(xi + 1, mp, tc, origin).entries
    rhs = omega * np.kron(np.linalg.inv(g), I) @ r_xi(xi, mp, tc, origin).entries @ np.kron(g, I)
    return float(np.max(np.abs(lhs - rhs)))


def quasi_periodicity_residual(xi: complex, mp, tc=DEFAULT_TRUNC, origin: int = 0) -> float:
    """R^12(-p^{1/2} z) - A^{-1} (R^21(z^{-1}))^{-1} A with A = g^{1/2} h g^{1/2} (x) 1.

    -p^{1/2} z is the shift xi -> xi + 1 + tau.
    """
    N = mp.N
    _, h, _ = elementary_matrices(N, origin)
    s = sqrt_g(N, origin)
    A = np.kron(s @ h @ s, np.eye(N))
    lhs = r_hat_xi(xi + 1 + mp.tau, mp, tc, origin).entries
    inner = np.linalg.inv(r_hat_xi(-xi, mp, tc, origin).swap().entries)
    rhs = np.linalg.inv(A) @ inner @ A
    return float(np.max(np.abs(lhs - rhs)))


def zn_symmetry_residual(rt: RTensor) -> float:
    """max over s of |R~^{a+s,b+s}_{c+s,d+s} - R~^{a,b}_{c,d}|."""
    T = rt.tensor
    worst = 0.0
    for s in range(1, rt.n):
        shifted = np.roll(T, shift=(-s, -s, -s, -s), axis=(0, 1, 2, 3))
        worst = max(worst, float(np.max(np.abs(shifted - T))))
    return worst


def sample_xi(rng: np.random.Generator, mp: ModularParams, count: int) -> np.ndarray:
    """Points xi with |q|^{1/2} < |z| < |q|^{-1/2}, arg z in (-pi, pi)."""
    bound = -math.log(abs(mp.q)) / (2 * math.pi)
    re = rng.uniform(-0.95, 0.95, size=count)
    im = rng.uniform(-0.9 * bound, 0.9 * bound, size=count)
    return re + 1j * im


PROPERTIES = {
    "yang_baxter": None,
    "unitarity": unitarity_residual,
    "crossing": crossing_residual,
    "antisymmetry": antisymmetry_residual,
    "quasi_periodicity": quasi_periodicity_residual,
}


def verify_properties(
    mp: ModularParams,
    tc: TruncationConfig = DEFAULT_TRUNC,
    tol: Tolerance = DEFAULT_TOL,
    samples: int = 20,
    seed: int = 42,
) -> CheckReport:
    """Residuals of the five defining properties at random sample points.

    Points where a factor hits a pole are counted as skipped. A property
    fails when more than half of its samples are skipped.
    """
    rng = np.random.default_rng(seed)
    xs = sample_xi(rng, mp, samples)
    ws = sample_xi(rng, mp, samples)
    checks = []
    for name, fn in PROPERTIES.items():
        residuals, skipped = [], 0
        for k in range(samples):
            try:
                if fn is None:
                    residuals.append(ybe_residual(xs[k], ws[k], mp, tc))
                else:
                    residuals.append(fn(xs[k], mp, tc))
            except EllwError:
                skipped += 1
        checks.append(Check.from_residuals(name, residuals, tol.abs, skipped))
    params = {"N": mp.N, "q": mp.q, "p": mp.p, "samples": samples, "seed": seed}
    return CheckReport("rmatrix", params, checks)
