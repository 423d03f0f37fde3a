"""Scratch validation part 2: contraction, comparison, dirac."""
import math
import time

import numpy as np

from degenelab.mesh import build_radial_mesh, GridFunction, lp_norm, weighted_gradient_energy
from degenelab.problem import (
    ProblemSpec,
    identity_field,
    nodal_datum,
    manufactured_solution,
    truncate_datum,
)
from degenelab.solver import SolverConfig, solve_bounded, approximate_sequence

# --- contraction + comparison random suites (gamma=2, N=3, 256 elements) ---
mesh = build_radial_mesh(3, 256, 1.0)
rng = np.random.default_rng(42)
cfg = SolverConfig()
t0 = time.perf_counter()
worst_contraction = 0.0
worst_comparison = -1.0
for trial in range(20):
    fv = rng.uniform(-5.0, 5.0, mesh.num_nodes)
    gv = rng.uniform(-5.0, 5.0, mesh.num_nodes)
    f = nodal_datum(GridFunction(mesh, fv), name="f")
    g = nodal_datum(GridFunction(mesh, gv), name="g")
    sf = ProblemSpec(2.0, 3, "ball", identity_field(), f)
    sg = ProblemSpec(2.0, 3, "ball", identity_field(), g)
    u = solve_bounded(sf, mesh, cfg).solution
    z = solve_bounded(sg, mesh, cfg).solution
    lhs = lp_norm(u - z, 1.0)
    rhs = lp_norm(lambda r: f(r) - g(r), 1.0, mesh)
    worst_contraction = max(worst_contraction, lhs / rhs)
    # ordered pair
    pv = np.abs(rng.uniform(0.0, 3.0, mesh.num_nodes))
    g2 = nodal_datum(GridFunction(mesh, fv + pv), name="g2")
    sg2 = ProblemSpec(2.0, 3, "ball", identity_field(), g2)
    z2 = solve_bounded(sg2, mesh, cfg).solution
    viol = float(np.max(u.values - z2.values))
    worst_comparison = max(worst_comparison, viol)
print(f"contraction worst lhs/rhs = {worst_contraction:.4f} (need <= 1.05)")
print(f"comparison worst max(u-z) = {worst_comparison:.3e} (need <= 1e-6*(1+|z|))")
print("suite time:", time.perf_counter() - t0)

# --- dirac experiment gamma=2, N=3 ---
print("\ndirac:")
n_list = [8, 16, 32, 64]
base = build_radial_mesh(3, 64, 0.85)
mesh_d = base.with_nodes([1.0 / n for n in n_list])
inside = np.sum(mesh_d.nodes <= 1.0 / 64 + 1e-15) - 1
print("elements inside [0,1/64]:", inside)
omega = mesh_d.surface_factor

def mollified(n):
    c = 3 * n**3 / omega
    from degenelab.problem import Datum
    return Datum(name=f"dirac{n}", fn=lambda r: np.where(r <= 1.0 / n, c, 0.0), linf=c)

phi1 = lambda r: 1.0 - r**2
dphi1 = lambda r: -2.0 * r
phi2 = lambda r: (1.0 - r**2) ** 2
dphi2 = lambda r: -4.0 * r * (1.0 - r**2)

t0 = time.perf_counter()
sups, pair1, pair2, energies, flux1, flux2 = [], [], [], [], [], []
for n in n_list:
    f = mollified(n)
    mass = lp_norm(f, 1.0, mesh_d)
    spec = ProblemSpec(2.0, 3, "ball", identity_field(), f)
    rep = solve_bounded(spec, mesh_d, cfg)
    u = rep.solution
    tail = u.values[mesh_d.nodes >= 0.2]
    sups.append(float(np.max(tail)))
    uq = u.quad_values()
    rq = mesh_d.quad_radii
    pair1.append(mesh_d.integrate(uq * phi1(rq)))
    pair2.append(mesh_d.integrate(uq * phi2(rq)))
    energies.append(weighted_gradient_energy(u, 4.0))
    s = u.slopes()[:, None]
    wq = (1.0 + np.abs(uq)) ** (-2.0)
    flux1.append(mesh_d.integrate(s * wq * dphi1(rq)))
    flux2.append(mesh_d.integrate(s * wq * dphi2(rq)))
    print(f"n={n:3d} mass={mass:.12f} iters={rep.iterations:3d} sup_tail={sups[-1]:.5f} "
          f"pair1={pair1[-1]:.5f} pair2={pair2[-1]:.5f} energy={energies[-1]:.5f} "
          f"flux1={flux1[-1]:.5f} flux2={flux2[-1]:.5f}")
print("pairing errors phi2:", [abs(p - 1.0) for p in pair2])
print("energy*alpha*(gamma-1) <= 1.05?", [e * 1.0 * 1.0 <= 1.05 for e in energies])
print("sup final/initial:", sups[-1] / sups[0])
print("flux ratios:", abs(flux1[-1]) / abs(flux1[0]), abs(flux2[-1]) / abs(flux2[0]))
print("dirac time:", time.perf_counter() - t0)

# --- sequence + independence + nonexpansive (Example 1.1) ---
print("\nindependence:")
ms = manufactured_solution(1.5, 5, 2.0)
spec = ms.problem()
q = (1e-4) ** (1.0 / 256)
mesh5 = build_radial_mesh(5, 256, q)
n_list = [10, 20, 40, 80, 160]
t0 = time.perf_counter()
rep_a = approximate_sequence(spec, mesh5, n_list, cfg)
print("cauchy:", rep_a.cauchy_certified,
      [f"{r.diff_lp:.4f}" if r.diff_lp else "-" for r in rep_a.records])

# alternative sequence
from degenelab.problem import Datum
lim_a = rep_a.limit
prev = None
for n in n_list:
    tn = truncate_datum(spec.datum, n)
    scale = 1.0 - 1.0 / (2.0 * n)
    fn = Datum(name=f"alt{n}", fn=lambda r, tn=tn, s=scale: s * tn(r), linf=tn.linf * scale)
    rep = solve_bounded(spec.with_datum(fn), mesh5, cfg)
    prev = rep.solution
lim_b = prev
gap = lp_norm(lim_a - lim_b, 1.0)
lim_norm = lp_norm(lim_a, 1.0)
print(f"limit gap L1 = {gap:.6f}, tolerance = {max(1e-6, 0.01 * lim_norm):.6f}")

# nonexpansive
spec09 = spec.with_datum(Datum(name="0.9f", fn=lambda r: 0.9 * spec.datum(r), linf=None, summability=2.0))
rep_b = approximate_sequence(spec09, mesh5, n_list, cfg)
l1_gap = lp_norm(rep_a.limit - rep_b.limit, 1.0)
l1_data = lp_norm(lambda r: spec.datum(r) - spec09.datum(r), 1.0, mesh5)
print(f"nonexpansive: {l1_gap:.5f} <= {l1_data:.5f}")
p = 2.0
print(f"norm bounds: {lp_norm(rep_a.limit, p):.4f} <= {lp_norm(spec.datum, p, mesh5):.4f}; "
      f"{lp_norm(rep_b.limit, p):.4f} <= {lp_norm(spec09.datum, p, mesh5):.4f}")
print("sequences time:", time.perf_counter() - t0)
