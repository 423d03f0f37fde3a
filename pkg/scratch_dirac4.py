"""Scratch: lambda-policy / mesh scan for dirac convergence."""
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

def iterate(mesh, n, policy, max_it=200):
    spec = ProblemSpec(2.0, 3, "ball", identity_field(), mollified(n))
    fq = mesh.sample(spec.datum)
    load = _load_vector(mesh, fq)
    M = float(np.max(np.abs(fq))) + 1.0
    u = np.zeros(mesh.num_nodes)
    lam = policy["start"]
    prev, streak = np.inf, 0
    for it in range(1, max_it + 1):
        ce = _element_conductivities(mesh, spec, GridFunction(mesh, u), M)
        ustar = _system_from_parts(mesh, ce, load).solve()
        u = u + lam * (ustar - u)
        u[-1] = 0.0
        res = float(np.max(np.abs(
            residual_vector(GridFunction(mesh, u), spec, mesh, M=M, load=load)[:-1])))
        if res <= 1e-10:
            return it
        if policy["kind"] == "adaptive":
            if res > prev:
                lam = max(lam / 2.0, policy["floor"])
                streak = 0
            else:
                streak += 1
                if streak >= policy["patience"]:
                    lam = min(policy["grow"] * lam, policy["cap"])
                    streak = 0
        prev = res
    return None

meshes = {
    "64@0.85+cuts": build_radial_mesh(3, 64, 0.85).with_nodes([1.0 / n for n in n_list]),
    "48@0.80+cuts": build_radial_mesh(3, 48, 0.80).with_nodes([1.0 / n for n in n_list]),
    "96@0.90+cuts": build_radial_mesh(3, 96, 0.90).with_nodes([1.0 / n for n in n_list]),
    "32@0.75+cuts": build_radial_mesh(3, 32, 0.75).with_nodes([1.0 / n for n in n_list]),
}

policies = [
    {"kind": "adaptive", "start": 1.0, "floor": 1/16, "grow": 1.5, "cap": 1.0, "patience": 2, "tag": "A:1.0/1.5x/cap1"},
    {"kind": "adaptive", "start": 1.0, "floor": 1/16, "grow": 1.25, "cap": 0.5, "patience": 3, "tag": "B:1.0/1.25x/cap.5"},
    {"kind": "adaptive", "start": 0.5, "floor": 1/16, "grow": 1.25, "cap": 0.5, "patience": 3, "tag": "C:0.5/1.25x/cap.5"},
    {"kind": "adaptive", "start": 0.25, "floor": 1/16, "grow": 1.25, "cap": 0.25, "patience": 3, "tag": "D:0.25/cap.25"},
    {"kind": "adaptive", "start": 0.25, "floor": 1/16, "grow": 1.5, "cap": 1.0, "patience": 4, "tag": "E:0.25/1.5x/p4"},
]

for mtag, mesh in meshes.items():
    print(f"=== {mtag} (E={mesh.num_elements})")
    for pol in policies:
        outcome = []
        for n in n_list:
            it = iterate(mesh, n, pol)
            outcome.append(f"{n}:{it if it else 'X'}")
        print(f"  {pol['tag']:22s} {' '.join(outcome)}")
