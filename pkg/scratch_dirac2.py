"""Scratch: is the n=16 fixed point oscillatory or repelling?"""
import numpy as np

from degenelab.mesh import build_radial_mesh, GridFunction
from degenelab.problem import ProblemSpec, identity_field, Datum
from degenelab.solver import (
    SolverConfig,
    solve_bounded,
    NoConvergenceError,
    _element_conductivities,
    _system_from_parts,
    _load_vector,
    residual_vector,
)

n_list = [8, 16, 32, 64]
omega = build_radial_mesh(3, 4, 1.0).surface_factor

def mollified(n):
    c = 3 * n**3 / omega
    return Datum(name=f"dirac{n}", fn=lambda r: np.where(r <= 1.0 / n, c, 0.0), linf=c)

mesh = build_radial_mesh(3, 64, 0.85).with_nodes([1.0 / n for n in n_list])

def run(n, lam_fixed=None, floor=1.0 / 16.0, max_it=600, u0=None, verbose=False):
    spec = ProblemSpec(2.0, 3, "ball", identity_field(), mollified(n))
    fq = mesh.sample(spec.datum)
    load = _load_vector(mesh, fq)
    M = float(np.max(np.abs(fq))) + 1.0
    u = np.zeros(mesh.num_nodes) if u0 is None else u0.copy()
    lam = lam_fixed if lam_fixed else 1.0
    prev, streak = np.inf, 0
    for it in range(1, max_it + 1):
        ce = _element_conductivities(mesh, spec, GridFunction(mesh, u), M)
        sys_ = _system_from_parts(mesh, ce, load)
        ustar = sys_.solve()
        u = u + lam * (ustar - u)
        u[-1] = 0.0
        res = float(np.max(np.abs(residual_vector(GridFunction(mesh, u), spec, mesh, M=M, load=load)[:-1])))
        if verbose and (it % 50 == 0 or res <= 1e-10):
            print(f"    it={it} lam={lam:.4f} res={res:.3e}")
        if res <= 1e-10:
            return it, res, u
        if lam_fixed is None:
            if res > prev:
                lam = max(lam / 2.0, floor)
                streak = 0
            else:
                streak += 1
                if streak >= 2:
                    lam = min(1.5 * lam, 1.0)
                    streak = 0
        prev = res
    return None, res, u

print("A) adaptive, floor 1/16, 600 its:")
for n in n_list:
    it, res, _ = run(n)
    print(f"  n={n}: {'conv ' + str(it) if it else 'STALL'} res={res:.2e}")

print("B) adaptive, floor 1/64, 600 its:")
for n in n_list:
    it, res, _ = run(n, floor=1.0 / 64.0)
    print(f"  n={n}: {'conv ' + str(it) if it else 'STALL'} res={res:.2e}")

print("C) fixed lam=1/64, 600 its:")
for n in [16, 32]:
    it, res, _ = run(n, lam_fixed=1.0 / 64.0)
    print(f"  n={n}: {'conv ' + str(it) if it else 'STALL'} res={res:.2e}")

print("D) warm start chain, adaptive floor 1/16, 200 its each:")
u0 = None
for n in n_list:
    it, res, u = run(n, u0=u0, max_it=200)
    print(f"  n={n}: {'conv ' + str(it) if it else 'STALL'} res={res:.2e}")
    u0 = u
