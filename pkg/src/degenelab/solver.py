"""Weighted P1 discretization and the damped frozen-coefficient fixed point.

The weak form is discretized with piecewise-linear elements against the
weight, a lumped zero-order term, and the degeneracy factor frozen at the
previous iterate:

    sum_e  c_e(u_prev) (u_i - u_j)/h_e  +  m_i u_i  =  b_i

with c_e = surface_factor * int_e kappa, kappa = (secant diffusivity) *
weight * 1/(1+|T_M(u_prev)|)^gamma.  Lumping makes the matrix an M-matrix
(off-diagonals <= 0, strictly dominant diagonal), which is what gives the
exact discrete comparison principle and the maximum-principle bound
||u||_inf <= ||g||_inf.

Nonlinear-in-xi coefficients are frozen per element through the secant
scalar a(xi_prev).xi_prev/|xi_prev|^2 (falling back to alpha for tiny
slopes); in one dimension the secant times the current slope reproduces
a(xi) exactly at the fixed point, so the converged iterate zeroes the true
nonlinear residual.

The iteration starts from zero, damps by halving on residual increase
(floor 1/16), and stops when the max-norm of the nonlinear residual drops
below the configured tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import (
    DegenerateElementError,
    GridFunction,
    RadialMesh,
    lp_norm,
    w11_seminorm,
)
from .problem import Datum, ProblemSpec, degeneracy_weight, truncate, truncate_datum

__all__ = [
    "SolverConfig",
    "SolveReport",
    "SequenceReport",
    "TridiagonalSystem",
    "assemble_system",
    "solve_bounded",
    "approximate_sequence",
    "residual",
    "residual_vector",
    "NoConvergenceError",
    "MaxPrincipleViolationError",
]


class NoConvergenceError(RuntimeError):
    """Fixed point not reached within the iteration budget."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class MaxPrincipleViolationError(RuntimeError):
    """||u||_inf exceeded the datum bound; signals an assembly bug."""


@dataclass
class SolverConfig:
    tol: float = 1e-10
    max_iterations: int = 200
    damping: float = 1.0
    damping_floor: float = 1.0 / 16.0
    check_coefficient: bool = True

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError("tol > 0 required")
        if not (0.0 < self.damping <= 1.0):
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class TridiagonalSystem:
    """Rows i couple to i-1 via lower[i] and to i+1 via upper[i]."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def solve(self) -> np.ndarray:
        """Thomas elimination without pivoting.

        Valid for the strictly diagonally dominant M-matrices assembled
        here; every multiplier is nonnegative, so a nonnegative right-hand
        side yields a nonnegative solution exactly in floating point.
        """
        n = self.diag.size
        d = self.diag.copy()
        y = self.rhs.copy()
        for i in range(1, n):
            m = self.lower[i] / d[i - 1]
            d[i] -= m * self.upper[i - 1]
            y[i] -= m * y[i - 1]
        x = np.empty(n)
        x[-1] = y[-1] / d[-1]
        for i in range(n - 2, -1, -1):
            x[i] = (y[i] - self.upper[i] * x[i + 1]) / d[i]
        return x


def _element_conductivities(
    mesh: RadialMesh, spec: ProblemSpec, frozen: GridFunction, M: float
) -> np.ndarray:
    """c_e = surface_factor * int_e (secant diffusivity) * degeneracy * weight."""
    wq = degeneracy_weight(truncate(frozen.quad_values(), M), spec.gamma)
    coeff = spec.coefficient
    if coeff.is_linear:
        dq = coeff.diffusivity(mesh.quad_radii)
        kq = dq * wq
    else:
        s = frozen.slopes()
        mid = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
        safe = np.abs(s) >= 1e-14
        sec = np.full_like(s, coeff.alpha)
        if np.any(safe):
            a_of_s = np.asarray(coeff.flux(mid[safe], s[safe]), dtype=float)
            sec[safe] = a_of_s * s[safe] / s[safe] ** 2
        kq = sec[:, None] * wq
    return mesh.surface_factor * np.sum(kq * mesh.quad_mass, axis=1)


def _load_vector(mesh: RadialMesh, fq: np.ndarray) -> np.ndarray:
    """b_i = surface_factor * int f phi_i against the weight."""
    t = mesh.quad_local
    b = np.zeros(mesh.num_nodes)
    contrib = fq * mesh.quad_mass
    b[:-1] += np.sum(contrib * (1.0 - t), axis=1)
    b[1:] += np.sum(contrib * t, axis=1)
    return mesh.surface_factor * b


def _system_from_parts(mesh: RadialMesh, ce: np.ndarray, load: np.ndarray) -> TridiagonalSystem:
    ke = ce / mesh.element_lengths**2
    n = mesh.num_nodes
    diag = mesh.lumped_masses.copy()
    diag[:-1] += ke
    diag[1:] += ke
    lower = np.zeros(n)
    upper = np.zeros(n)
    lower[1:] = -ke
    upper[:-1] = -ke
    b = load.copy()
    # Dirichlet row at r = 1.
    diag[-1] = 1.0
    lower[-1] = 0.0
    b[-1] = 0.0
    return TridiagonalSystem(lower=lower, diag=diag, upper=upper, rhs=b)


def assemble_system(
    mesh: RadialMesh,
    frozen: GridFunction,
    spec: ProblemSpec,
    M: float,
    rhs: Datum,
) -> TridiagonalSystem:
    """Frozen-coefficient linear system: stiffness + lumped mass = load,
    with the Dirichlet row at r = 1 reduced to the identity."""
    if np.any(mesh.element_measures <= 0.0):
        raise DegenerateElementError("an element has zero weighted measure")
    ce = _element_conductivities(mesh, spec, frozen, M)
    return _system_from_parts(mesh, ce, _load_vector(mesh, mesh.sample(rhs)))


def residual_vector(
    u: GridFunction,
    spec: ProblemSpec,
    mesh: RadialMesh,
    M: float = math.inf,
    load: np.ndarray | None = None,
) -> np.ndarray:
    """Nodal weak residual of the discrete system at u.

    Entry i is  sum_e phi_i'|_e F_e + m_i u_i - b_i  with
    F_e = surface_factor * int_e a(r, u') / (1+|T_M(u)|)^gamma * weight;
    the zero-order term is lumped (vertex quadrature), matching the system
    the fixed point solves.  The Dirichlet row is zero by construction.
    """
    if load is None:
        load = _load_vector(mesh, mesh.sample(spec.datum))
    s = u.slopes()
    aq = np.asarray(spec.coefficient.flux(mesh.quad_radii, s[:, None]), dtype=float)
    uq = u.quad_values()
    if math.isfinite(M):
        uq = truncate(uq, M)
    wq = degeneracy_weight(uq, spec.gamma)
    fe = mesh.surface_factor * np.sum(aq * wq * mesh.quad_mass, axis=1)
    per_h = fe / mesh.element_lengths
    r = mesh.lumped_masses * u.values - load
    r[:-1] -= per_h
    r[1:] += per_h
    r[-1] = 0.0
    return r


def residual(u: GridFunction, spec: ProblemSpec, mesh: RadialMesh) -> float:
    """Max weak residual over the free nodes (interior plus origin)."""
    return float(np.max(np.abs(residual_vector(u, spec, mesh)[:-1])))


@dataclass
class SolveReport:
    solution: GridFunction
    iterations: int
    residual_trace: list[float]
    max_principle_margin: float
    truncation_level: float

    def to_json_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "max_principle_margin": self.max_principle_margin,
            "residual_trace": self.residual_trace,
            "truncation_level": self.truncation_level,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def solve_bounded(
    spec: ProblemSpec,
    mesh: RadialMesh,
    config: SolverConfig | None = None,
    initial: GridFunction | None = None,
) -> SolveReport:
    """Solve the bounded-datum problem by the damped frozen-coefficient
    fixed point, starting from zero (or the supplied initial guess).

    The truncation level is M = ||g||_inf + 1 with the sup taken over the
    quadrature points the load sees; on success the discrete maximum
    principle ||u||_inf <= ||g||_inf holds up to 1e-10.
    """
    if config is None:
        config = SolverConfig()
    if np.any(mesh.element_measures <= 0.0):
        raise DegenerateElementError("an element has zero weighted measure")
    fq = mesh.sample(spec.datum)
    if config.check_coefficient:
        from .problem import eval_coefficient

        for xi in (-10.0, -1.0, 1.0, 10.0):
            eval_coefficient(
                spec.coefficient, mesh.quad_radii, np.full_like(fq, xi), check=True
            )
    ginf = float(np.max(np.abs(fq)))
    if not math.isfinite(ginf):
        raise ValueError("datum is unbounded on the quadrature points")
    M = ginf + 1.0
    load = _load_vector(mesh, fq)

    if initial is None:
        u = np.zeros(mesh.num_nodes)
    else:
        if initial.mesh is not mesh:
            raise ValueError("initial guess lives on a different mesh")
        u = initial.values.copy()
        u[-1] = 0.0

    lam = config.damping
    trace: list[float] = []
    prev = math.inf
    streak = 0
    converged = False
    iterations = 0
    for _ in range(config.max_iterations):
        iterations += 1
        ce = _element_conductivities(mesh, spec, GridFunction(mesh, u), M)
        system = _system_from_parts(mesh, ce, load)
        ustar = system.solve()
        u = u + lam * (ustar - u)
        u[-1] = 0.0
        res = float(
            np.max(np.abs(residual_vector(GridFunction(mesh, u), spec, mesh, M=M, load=load)[:-1]))
        )
        trace.append(res)
        if res <= config.tol:
            converged = True
            break
        if res > prev:
            lam = max(lam / 2.0, config.damping_floor)
            streak = 0
        else:
            # Recover cautiously after two consecutive decreases so a
            # transient bump does not pin the iteration at the floor.
            streak += 1
            if streak >= 2:
                lam = min(1.5 * lam, config.damping)
                streak = 0
        prev = res
    if not converged:
        raise NoConvergenceError(
            f"fixed point not reached in {config.max_iterations} iterations "
            f"(residual {trace[-1]:.3e})",
            trace,
        )

    solution = GridFunction(mesh, u, pin_boundary=True)
    margin = solution.linf() - ginf
    if margin > 1e-10:
        raise MaxPrincipleViolationError(
            f"||u||_inf exceeds ||g||_inf by {margin:.3e}; assembly bug"
        )
    return SolveReport(
        solution=solution,
        iterations=iterations,
        residual_trace=trace,
        max_principle_margin=margin,
        truncation_level=M,
    )


@dataclass
class SequenceRecord:
    n: int
    report: SolveReport
    norm_lp: float
    norm_w11: float
    diff_lp: float | None
    diff_w11: float | None


@dataclass
class SequenceReport:
    records: list[SequenceRecord] = field(default_factory=list)
    cauchy_certified: bool = False

    @property
    def limit(self) -> GridFunction:
        return self.records[-1].report.solution

    def csv_rows(self) -> list[list[str]]:
        """Summary rows n,iters,residual,linf,l_gamma2,w11."""
        rows = []
        for rec in self.records:
            rows.append(
                [
                    str(rec.n),
                    str(rec.report.iterations),
                    format(rec.report.residual_trace[-1], ".17g"),
                    format(rec.report.solution.linf(), ".17g"),
                    format(rec.norm_lp, ".17g"),
                    format(rec.norm_w11, ".17g"),
                ]
            )
        return rows

    def to_json_dict(self) -> dict:
        return {
            "cauchy_certified": self.cauchy_certified,
            "records": [
                {
                    "diff_l_gamma2": rec.diff_lp,
                    "diff_w11": rec.diff_w11,
                    "iterations": rec.report.iterations,
                    "l_gamma2": rec.norm_lp,
                    "linf": rec.report.solution.linf(),
                    "n": rec.n,
                    "residual": rec.report.residual_trace[-1],
                    "w11": rec.norm_w11,
                }
                for rec in self.records
            ],
        }


def approximate_sequence(
    spec: ProblemSpec,
    mesh: RadialMesh,
    n_list,
    config: SolverConfig | None = None,
) -> SequenceReport:
    """Drive the truncated-datum sequence f_n = T_n(f) and record the
    norms and consecutive differences that certify the discrete limit.

    cauchy_certified is set when the last consecutive difference is below
    1% of the last norm in both the L^((gamma+2)/2) norm and the W^{1,1}
    seminorm.
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("empty n-list")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n-list must be strictly increasing")

    p = (spec.gamma + 2.0) / 2.0
    report = SequenceReport()
    prev_solution = None
    for n in n_list:
        sub = spec.with_datum(truncate_datum(spec.datum, n))
        solve = solve_bounded(sub, mesh, config)
        u = solve.solution
        diff_lp = diff_w11 = None
        if prev_solution is not None:
            delta = u - prev_solution
            diff_lp = lp_norm(delta, p)
            diff_w11 = w11_seminorm(delta)
        report.records.append(
            SequenceRecord(
                n=n,
                report=solve,
                norm_lp=lp_norm(u, p),
                norm_w11=w11_seminorm(u),
                diff_lp=diff_lp,
                diff_w11=diff_w11,
            )
        )
        prev_solution = u

    last = report.records[-1]
    if last.diff_lp is None:
        report.cauchy_certified = len(report.records) == 1
    else:
        def small(diff, norm):
            return diff <= max(0.01 * norm, 1e-12)

        report.cauchy_certified = small(last.diff_lp, last.norm_lp) and small(
            last.diff_w11, last.norm_w11
        )
    return report
