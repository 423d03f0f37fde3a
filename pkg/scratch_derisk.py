"""Scratch validation of core numerics (deleted before delivery)."""
import math
import time

import numpy as np

from degenelab.mesh import (
    build_interval_mesh,
    build_radial_mesh,
    GridFunction,
    lp_norm,
    w11_seminorm,
    weighted_gradient_energy,
    restricted_integral,
)
from degenelab.problem import manufactured_solution, truncate_datum
from degenelab.solver import SolverConfig, solve_bounded, residual, approximate_sequence

# --- basic mesh sanity ---
m3 = build_radial_mesh(3, 2, 1.0)
print("nodes (3,2,1.0):", m3.nodes)
m3b = build_radial_mesh(3, 2, 0.5)
print("nodes (3,2,0.5):", m3b.nodes)
m = build_radial_mesh(3, 64, 1.0)
print("volume N=3:", m.volume(), "expect", 4 * math.pi / 3)
one = GridFunction(m, np.ones(m.num_nodes))
print("lp_norm 1, p=1:", lp_norm(one, 1.0))
two = GridFunction(m, 2 * np.ones(m.num_nodes))
print("lp_norm 2, p=2:", lp_norm(two, 2.0), "expect", 2 * math.sqrt(4 * math.pi / 3))

mi = build_interval_mesh(32)
v = GridFunction(mi, 1.0 - mi.nodes)
print("w11 1-r interval:", w11_seminorm(v))
print("energy exp=2:", weighted_gradient_energy(v, 2.0), "expect 0.5")

# --- manufactured problem, Picard behavior ---
ms = manufactured_solution(1.5, 5, 2.0)
spec = ms.problem()

def graded_mesh(E, depth=1e-4):
    q = depth ** (1.0 / E)
    return build_radial_mesh(5, E, q)

t0 = time.perf_counter()
for E, n in [(64, 3), (128, 10), (256, 40), (512, 160)]:
    mesh = graded_mesh(E)
    sub = spec.with_datum(truncate_datum(spec.datum, n))
    rep = solve_bounded(sub, mesh, SolverConfig())
    u = rep.solution
    uex = GridFunction(mesh, np.concatenate([[ms.u_exact(mesh.nodes[1])], ms.u_exact(mesh.nodes[1:])]))
    err = u - uex
    l2 = lp_norm(err, 2.0)
    w11 = w11_seminorm(err)
    print(f"E={E:4d} n={n:4d} iters={rep.iterations:3d} res={rep.residual_trace[-1]:.2e} "
          f"margin={rep.max_principle_margin:+.2e} L2err={l2:.5f} W11err={w11:.5f}")
print("mms block time:", time.perf_counter() - t0)

# fixed n=160 floor check
print("\nfixed n=160:")
for E in [64, 128, 256, 512]:
    mesh = graded_mesh(E)
    sub = spec.with_datum(truncate_datum(spec.datum, 160))
    rep = solve_bounded(sub, mesh, SolverConfig())
    uex = GridFunction(mesh, np.concatenate([[ms.u_exact(mesh.nodes[1])], ms.u_exact(mesh.nodes[1:])]))
    err = rep.solution - uex
    print(f"E={E:4d} L2err={lp_norm(err, 2.0):.5f} iters={rep.iterations}")

# --- estimate ladder at 512, n=160 ---
mesh = graded_mesh(512)
sub = spec.with_datum(truncate_datum(spec.datum, 160))
rep = solve_bounded(sub, mesh, SolverConfig())
u = rep.solution
f = spec.datum
p = 2.0
print("\nstimanorma:", lp_norm(u, p), "<=", lp_norm(f, p, mesh))
for k in [0.0, 1.0, 2.0]:
    lhs = restricted_integral(u, u, k, p)
    rhs = restricted_integral(u, f, k, p)
    print(f"(aa) k={k}: {lhs:.6f} <= {rhs:.6f} ratio={lhs/rhs:.3f}")
for k in [0.0, 1.0]:
    lhs = 1.0 * (2.0 / 2.0) * weighted_gradient_energy(u, (2.0 + 2.0) / 2.0, k=k)
    mask_rhs = restricted_integral(u, lambda r: np.abs(f(r)) * (1 + np.abs(u(r))) ** 1.0, k, 1.0)
    print(f"(bb) k={k}: {lhs:.6f} <= {mask_rhs:.6f} ratio={lhs/mask_rhs:.3f}")
from degenelab.problem import truncate as trunc
for k in [0.5, 1.0, 2.0]:
    tk = GridFunction(mesh, trunc(u.values, k))
    lhs = 1.0 * weighted_gradient_energy(tk, 0.0)
    rhs = k * (1 + k) ** 2 * lp_norm(f, 1.0, mesh)
    print(f"(dd) k={k}: {lhs:.6f} <= {rhs:.6f} ratio={lhs/rhs:.3f}")

# --- residual of interpolant convergence ---
print("\ninterpolant residual study:")
prev = None
for E in [64, 128, 256, 512]:
    mesh = graded_mesh(E)
    vals = ms.u_exact(mesh.nodes)
    vals[0] = ms.u_exact(mesh.nodes[1])
    ui = GridFunction(mesh, vals, pin_boundary=True)
    r = residual(ui, spec, mesh)
    rate = "" if prev is None else f" order={math.log2(prev / r):.2f}"
    print(f"E={E:4d} residual={r:.3e}{rate}")
    prev = r
