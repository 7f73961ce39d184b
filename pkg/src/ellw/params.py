"""Parameter containers: moduli, truncation orders and tolerances."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

from ellw.errors import DomainError


@dataclass(frozen=True)
class ModularParams:
    """A parameter point (N, q, p, c).

    ``zeta`` and ``tau`` are the additive moduli with q = exp(i pi zeta) and
    p = exp(2 i pi tau), both taken on the principal branch.
    """

    N: int
    q: complex
    p: complex
    c: Optional[complex] = None

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "p", complex(self.p))
        if self.c is not None:
            object.__setattr__(self, "c", complex(self.c))
        if not 0 < abs(self.q) < 1:
            raise DomainError(f"need 0 < |q| < 1, got |q| = {abs(self.q)}")
        if not 0 < abs(self.p) < 1:
            raise DomainError(f"need 0 < |p| < 1, got |p| = {abs(self.p)}")

    @property
    def zeta(self) -> complex:
        return cmath.log(self.q) / (1j * math.pi)

    @property
    def tau(self) -> complex:
        return cmath.log(self.p) / (2j * math.pi)

    @property
    def p_star(self) -> complex:
        """p* = p q^{-2c}, the nome entering the right-hand R-matrix of the RLL relation."""
        if self.c is None:
            raise DomainError("p* needs the central charge c")
        return self.p * cmath.exp(-2 * self.c * cmath.log(self.q))

    def with_c(self, c: complex) -> "ModularParams":
        return replace(self, c=c)

    @property
    def critical(self) -> "ModularParams":
        return replace(self, c=-self.N)


@dataclass(frozen=True)
class TruncationConfig:
    """Cutoffs for every infinite sum/product plus the pole threshold.

    ``pole_tol`` is the modulus below which a denominator counts as a pole.
    """

    theta_terms: int = 64
    prod_terms: int = 64
    series_lmax: int = 64
    tail_bound: float = 1e-15
    pole_tol: float = 1e-12

    def __post_init__(self):
        for name in ("theta_terms", "prod_terms", "series_lmax"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if not self.tail_bound > 0 or not self.pole_tol > 0:
            raise DomainError("tail_bound and pole_tol must be positive")

    def scaled(self, factor: int) -> "TruncationConfig":
        return replace(
            self,
            theta_terms=self.theta_terms * factor,
            prod_terms=self.prod_terms * factor,
            series_lmax=self.series_lmax * factor,
        )


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-8
    rel: float = 1e-8

    def __post_init__(self):
        if not (self.abs > 0 and self.rel > 0):
            raise DomainError("tolerances must be positive")


DEFAULT_TRUNC = TruncationConfig()
DEFAULT_TOL = Tolerance()
