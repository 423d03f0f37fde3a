"""Scratch: cutoff-clustered meshes for the dirac runs."""
import numpy as np

from degenelab.mesh import build_radial_mesh, RadialMesh, GridFunction, lp_norm, weighted_gradient_energy
from degenelab.problem import ProblemSpec, identity_field, Datum
from degenelab.solver import SolverConfig, solve_bounded, NoConvergenceError

n_list = [8, 16, 32, 64]
omega = build_radial_mesh(3, 4, 1.0).surface_factor

def mollified(n):
    c = 3 * n**3 / omega
    return Datum(name=f"dirac{n}", fn=lambda r: np.where(r <= 1.0 / n, c, 0.0), linf=c)

def cluster(center, span, levels):
    """Geometric node cluster on both sides of center."""
    offs = span * 0.5 ** np.arange(levels)
    pts = np.concatenate([center - offs, [center], center + offs])
    return pts[(pts > 0.0) & (pts < 1.0)]

def dirac_mesh(n_list, base_elements=64, grading=0.85, levels=10):
    base = build_radial_mesh(3, base_elements, grading)
    extra = []
    for n in n_list:
        c = 1.0 / n
        extra.extend(cluster(c, 0.5 * c, levels))
        extra.append(c)
    return base.with_nodes(extra)

phi2 = lambda r: (1.0 - r**2) ** 2

for levels in [8, 10, 12]:
    mesh = dirac_mesh(n_list, levels=levels)
    print(f"--- cluster levels={levels}, E={mesh.num_elements}")
    cfg = SolverConfig()
    for n in n_list:
        spec = ProblemSpec(2.0, 3, "ball", identity_field(), mollified(n))
        try:
            rep = solve_bounded(spec, mesh, cfg)
            u = rep.solution
            tail = float(np.max(u.values[mesh.nodes >= 0.2]))
            pair2 = mesh.integrate(u.quad_values() * phi2(mesh.quad_radii))
            en = weighted_gradient_energy(u, 4.0)
            print(f"  n={n:3d} iters={rep.iterations:3d} sup={tail:.5f} "
                  f"pair2err={abs(pair2 - 1):.5f} energy={en:.5f}")
        except NoConvergenceError as e:
            print(f"  n={n:3d} STALL res={e.trace[-1]:.3e}")
