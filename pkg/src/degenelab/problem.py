"""The continuous problem: coefficient fields, the degeneracy weight,
truncation, data, and the exact radial solution used for verification.

The equation is -div(a(x, grad u) / (1+|u|)^gamma) + u = f on the unit
ball of R^N (reduced to the radial coordinate) or the unit interval, with
u = 0 at r = 1.  Coefficient fields must satisfy, for all x and xi != eta:

    a(x, xi) . xi >= alpha |xi|^2        (ellipticity)
    |a(x, xi)|     <= beta |xi|          (linear growth)
    [a(x, xi) - a(x, eta)] . (xi - eta) > 0   (strict monotonicity)

with a(x, 0) = 0.  The checks are done by sampling, not symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .mesh import GridFunction

__all__ = [
    "CoefficientField",
    "identity_field",
    "diagonal_field",
    "nonlinear_demo_field",
    "Datum",
    "closed_form_datum",
    "constant_datum",
    "zero_datum",
    "nodal_datum",
    "ProblemSpec",
    "ManufacturedSolution",
    "truncate",
    "degeneracy_weight",
    "eval_coefficient",
    "manufactured_solution",
    "truncate_datum",
    "sample_structural_assumptions",
    "InvalidTruncationLevelError",
    "StructuralAssumptionError",
    "SigmaWindowError",
]


class InvalidTruncationLevelError(ValueError):
    """Truncation level k < 0."""


class StructuralAssumptionError(ValueError):
    """A coefficient field violates ellipticity, growth, or monotonicity."""


class SigmaWindowError(ValueError):
    """sigma outside the admissible window 2/gamma < sigma < N-2."""


def truncate(s, k):
    """Clamp to [-k, k]: max(-k, min(s, k)).  Odd and nondecreasing in s."""
    k = float(k)
    if k < 0.0:
        raise InvalidTruncationLevelError(f"truncation level must be >= 0, got {k}")
    return np.clip(s, -k, k)


def degeneracy_weight(u, gamma: float):
    """1 / (1+|u|)^gamma, the coercivity-killing factor; in (0, 1]."""
    if gamma <= 0.0:
        raise ValueError("gamma > 0 required")
    return (1.0 + np.abs(u)) ** (-gamma)


@dataclass(frozen=True)
class CoefficientField:
    """A flux map a(x, xi) with declared structure constants.

    diffusivity is set for fields linear in xi (a = d(x) xi) and is what
    the assembler uses; nonlinear fields go through the per-element
    secant described in the solver.
    """

    name: str
    alpha: float
    beta: float
    flux: Callable = field(repr=False)
    diffusivity: Callable | None = field(default=None, repr=False)

    @property
    def is_linear(self) -> bool:
        return self.diffusivity is not None

    def __post_init__(self):
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValueError("alpha and beta must be positive")


def identity_field() -> CoefficientField:
    """a(x, xi) = xi."""
    return CoefficientField(
        name="identity",
        alpha=1.0,
        beta=1.0,
        flux=lambda r, xi: np.asarray(xi, dtype=float) + 0.0 * np.asarray(r, dtype=float),
        diffusivity=lambda r: np.ones_like(np.asarray(r, dtype=float)),
    )


def diagonal_field(d, alpha: float, beta: float, name: str = "diagonal") -> CoefficientField:
    """a(x, xi) = d(x) xi with alpha <= d <= beta declared by the caller.

    d may be a scalar or a (vectorized) callable of r.
    """
    if callable(d):
        dfun = d
    else:
        dval = float(d)
        dfun = lambda r: np.full_like(np.asarray(r, dtype=float), dval)  # noqa: E731
    return CoefficientField(
        name=name,
        alpha=alpha,
        beta=beta,
        flux=lambda r, xi: dfun(r) * np.asarray(xi, dtype=float),
        diffusivity=dfun,
    )


def nonlinear_demo_field() -> CoefficientField:
    """a(xi) = xi + xi|xi| / (2(1+|xi|)): nonlinear in xi, alpha=1, beta=3/2.

    s + s^2/(2(1+s)) is strictly increasing, so monotonicity is strict.
    """

    def flux(r, xi):
        xi = np.asarray(xi, dtype=float)
        return xi + 0.5 * xi * np.abs(xi) / (1.0 + np.abs(xi))

    return CoefficientField(name="nonlinear-demo", alpha=1.0, beta=1.5, flux=flux)


def eval_coefficient(a: CoefficientField, x, xi, check: bool = False):
    """Evaluate a(x, xi); with check=True assert ellipticity and growth
    at the evaluated pairs (raises StructuralAssumptionError)."""
    xi = np.asarray(xi, dtype=float)
    out = a.flux(x, xi)
    if check:
        tol = 1e-12
        dot = out * xi
        if np.any(dot < a.alpha * xi**2 * (1.0 - 1e-12) - tol):
            raise StructuralAssumptionError(
                f"field {a.name!r} violates ellipticity at a sampled point"
            )
        if np.any(np.abs(out) > a.beta * np.abs(xi) * (1.0 + 1e-12) + tol):
            raise StructuralAssumptionError(
                f"field {a.name!r} violates the growth bound at a sampled point"
            )
    return out


def sample_structural_assumptions(
    a: CoefficientField, samples: int = 10_000, seed: int = 0
) -> None:
    """Randomized sweep of (x, xi, eta) triples checking all three
    structure assumptions plus a(x, 0) = 0; raises on violation."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, samples)
    xi = rng.uniform(-50.0, 50.0, samples)
    eta = rng.uniform(-50.0, 50.0, samples)
    eval_coefficient(a, x, xi, check=True)
    fx, fe = a.flux(x, xi), a.flux(x, eta)
    gap = (fx - fe) * (xi - eta)
    sep = np.abs(xi - eta) > 1e-12
    if np.any(gap[sep] <= 0.0):
        raise StructuralAssumptionError(f"field {a.name!r} is not strictly monotone")
    if np.any(np.abs(a.flux(x, np.zeros(samples))) > 0.0):
        raise StructuralAssumptionError(f"field {a.name!r} has a(x, 0) != 0")


@dataclass(frozen=True)
class Datum:
    """A source term: vectorized evaluation plus declared metadata.

    linf is the known sup bound (None when unbounded); summability is the
    declared Lebesgue exponent m of the class the datum lives in.
    """

    name: str
    fn: Callable = field(repr=False)
    linf: float | None = None
    summability: float = 1.0

    def __call__(self, r):
        return np.asarray(self.fn(np.asarray(r, dtype=float)), dtype=float)


def closed_form_datum(fn, name: str, linf: float | None = None, summability: float = 1.0) -> Datum:
    return Datum(name=name, fn=fn, linf=linf, summability=summability)


def constant_datum(c: float) -> Datum:
    c = float(c)
    return Datum(
        name=f"constant({c:g})",
        fn=lambda r: np.full_like(np.asarray(r, dtype=float), c),
        linf=abs(c),
        summability=math.inf,
    )


def zero_datum() -> Datum:
    return constant_datum(0.0)


def nodal_datum(values: GridFunction, name: str = "nodal") -> Datum:
    return Datum(
        name=name,
        fn=lambda r: values(r),
        linf=values.linf(),
        summability=math.inf,
    )


def truncate_datum(f: Datum, n: int) -> Datum:
    """f_n = T_n(f): |f_n| <= |f| pointwise, bounded by n, converging to f."""
    n = int(n)
    if n < 1:
        raise ValueError("n >= 1 required")
    linf = float(n) if f.linf is None else min(float(n), f.linf)
    return Datum(
        name=f"T_{n}({f.name})",
        fn=lambda r: truncate(f(r), n),
        linf=linf,
        summability=f.summability,
    )


@dataclass(frozen=True)
class ProblemSpec:
    """gamma, dimension, domain, coefficient field, and datum."""

    gamma: float
    dimension: int
    domain: str  # "ball" | "interval"
    coefficient: CoefficientField
    datum: Datum

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ValueError("gamma > 0 required")
        if self.domain not in ("ball", "interval"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.domain == "ball" and self.dimension <= 2:
            raise ValueError("ball problems require dimension N > 2")

    def with_datum(self, datum: Datum) -> "ProblemSpec":
        return replace(self, datum=datum)


@dataclass(frozen=True)
class ManufacturedSolution:
    """The radial pair u(r) = r^(-sigma) - 1 with its exact source.

    For 2/gamma < sigma < N-2 and the identity coefficient,
        f(r) = sigma (N - 2 + sigma (gamma-1)) r^(sigma(gamma-1) - 2)
               + r^(-sigma) - 1,
    and the radial flux identity
        -r^(1-N) d/dr( r^(N-1) u' / (1+u)^gamma ) + u = f
    holds pointwise on (0, 1).
    """

    sigma: float
    dimension: int
    gamma: float

    def u_exact(self, r):
        r = np.asarray(r, dtype=float)
        return r ** (-self.sigma) - 1.0

    def f_exact(self, r):
        r = np.asarray(r, dtype=float)
        s, n, g = self.sigma, self.dimension, self.gamma
        return s * (n - 2.0 + s * (g - 1.0)) * r ** (s * (g - 1.0) - 2.0) + r ** (
            -s
        ) - 1.0

    def datum(self) -> Datum:
        return Datum(
            name=f"radial-exact(sigma={self.sigma:g},N={self.dimension},gamma={self.gamma:g})",
            fn=self.f_exact,
            linf=None,
            summability=(self.gamma + 2.0) / 2.0,
        )

    def problem(self) -> ProblemSpec:
        return ProblemSpec(
            gamma=self.gamma,
            dimension=self.dimension,
            domain="ball",
            coefficient=identity_field(),
            datum=self.datum(),
        )


def manufactured_solution(sigma: float, dimension: int, gamma: float) -> ManufacturedSolution:
    """Build the exact radial pair; sigma must satisfy 2/gamma < sigma < N-2."""
    if gamma <= 0.0:
        raise ValueError("gamma > 0 required")
    lo, hi = 2.0 / gamma, dimension - 2.0
    if not (lo < sigma < hi):
        raise SigmaWindowError(
            f"sigma={sigma:g} outside the admissible window "
            f"({lo:g}, {hi:g}) for gamma={gamma:g}, N={dimension}"
        )
    return ManufacturedSolution(sigma=sigma, dimension=dimension, gamma=gamma)
