"""Scratch: dirac solver stall diagnostics."""
import numpy as np

from degenelab.mesh import build_radial_mesh, GridFunction, lp_norm, weighted_gradient_energy
from degenelab.problem import ProblemSpec, identity_field, Datum
from degenelab.solver import SolverConfig, solve_bounded, NoConvergenceError

n_list = [8, 16, 32, 64]
omega = build_radial_mesh(3, 4, 1.0).surface_factor

def mollified(n):
    c = 3 * n**3 / omega
    return Datum(name=f"dirac{n}", fn=lambda r: np.where(r <= 1.0 / n, c, 0.0), linf=c)

phi2 = lambda r: (1.0 - r**2) ** 2

def try_mesh(tag, mesh):
    print(f"--- {tag}: E={mesh.num_elements}")
    cfg = SolverConfig()
    for n in n_list:
        spec = ProblemSpec(2.0, 3, "ball", identity_field(), mollified(n))
        try:
            rep = solve_bounded(spec, mesh, cfg)
            u = rep.solution
            tail = float(np.max(u.values[mesh.nodes >= 0.2]))
            uq = u.quad_values()
            pair2 = mesh.integrate(uq * phi2(mesh.quad_radii))
            energy = weighted_gradient_energy(u, 4.0)
            print(f"  n={n:3d} iters={rep.iterations:3d} res={rep.residual_trace[-1]:.1e} "
                  f"sup={tail:.5f} pair2={pair2:.5f} err={abs(pair2-1):.5f} en={energy:.4f}")
        except NoConvergenceError as e:
            tr = e.trace
            print(f"  n={n:3d} STALL res={tr[-1]:.3e} last5={[f'{x:.2e}' for x in tr[-5:]]}")

# baseline: 64 elements q=0.85
base = build_radial_mesh(3, 64, 0.85).with_nodes([1.0 / n for n in n_list])
try_mesh("64@0.85", base)

# finer: 128 q=0.9
m2 = build_radial_mesh(3, 128, 0.9).with_nodes([1.0 / n for n in n_list])
try_mesh("128@0.9", m2)

# much finer: 256 q=0.95
m3 = build_radial_mesh(3, 256, 0.95).with_nodes([1.0 / n for n in n_list])
try_mesh("256@0.95", m3)

# uniform fine inside [0, 0.25]: composite
nodes = np.unique(np.concatenate([
    np.linspace(0.0, 0.25, 201),
    np.linspace(0.25, 1.0, 76),
    [1.0 / n for n in n_list],
]))
m4 = build_radial_mesh(3, 4, 1.0).__class__(nodes, kind="ball", dimension=3)
try_mesh("composite-fine", m4)
