"""Scratch: spectrum of the Picard map Jacobian at the n=16 fixed point."""
import numpy as np

from degenelab.mesh import build_radial_mesh, GridFunction
from degenelab.problem import ProblemSpec, identity_field, Datum
from degenelab.solver import (
    _element_conductivities,
    _system_from_parts,
    _load_vector,
    residual_vector,
)

omega = build_radial_mesh(3, 4, 1.0).surface_factor
n_list = [8, 16, 32, 64]

def mollified(n):
    c = 3 * n**3 / omega
    return Datum(name=f"dirac{n}", fn=lambda r: np.where(r <= 1.0 / n, c, 0.0), linf=c)

mesh = build_radial_mesh(3, 64, 0.85).with_nodes([1.0 / n for n in n_list])
n = 16
spec = ProblemSpec(2.0, 3, "ball", identity_field(), mollified(n))
fq = mesh.sample(spec.datum)
load = _load_vector(mesh, fq)
M = float(np.max(np.abs(fq))) + 1.0

def G(u):
    ce = _element_conductivities(mesh, spec, GridFunction(mesh, u), M)
    v = _system_from_parts(mesh, ce, load).solve()
    v[-1] = 0.0
    return v

def res_of(u):
    return float(np.max(np.abs(
        residual_vector(GridFunction(mesh, u), spec, mesh, M=M, load=load)[:-1])))

# Converge hard with a tiny-lambda polish phase.
u = np.zeros(mesh.num_nodes)
lam, prev, streak = 1.0, np.inf, 0
for it in range(5000):
    u = u + lam * (G(u) - u)
    r = res_of(u)
    if r <= 1e-12:
        break
    if r > prev:
        lam = max(lam / 2.0, 1 / 16)
        streak = 0
    else:
        streak += 1
        if streak >= 2:
            lam = min(1.5 * lam, 1.0)
            streak = 0
    prev = r
print(f"polish: it={it} res={res_of(u):.2e}")

# Finite-difference Jacobian of G at u (free nodes only).
nfree = mesh.num_nodes - 1
J = np.zeros((nfree, nfree))
g0 = G(u)
for j in range(nfree):
    h = 1e-6 * max(1.0, abs(u[j]))
    up = u.copy(); up[j] += h
    J[:, j] = (G(up)[:-1] - g0[:-1]) / h
eig = np.linalg.eigvals(J)
idx = np.argsort(-np.abs(eig))
print("top |eig| of dG:", [f"{eig[i].real:+.3f}{eig[i].imag:+.3f}j" for i in idx[:8]])
rho = np.max(np.abs(eig))
print(f"spectral radius: {rho:.4f}")
mu_min, mu_max = eig.real.min(), eig.real.max()
print(f"real range: [{mu_min:.3f}, {mu_max:.3f}], max |imag|: {np.abs(eig.imag).max():.3f}")
# best fixed lambda for real spectrum
lam_star = 2.0 / (2.0 - mu_min - mu_max)
print(f"fixed-lambda optimum (real heuristic): {lam_star:.4f}, "
      f"rate ~ {max(abs(1 - lam_star * (1 - mu_min)), abs(1 - lam_star * (1 - mu_max))):.4f}")
