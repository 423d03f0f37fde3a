"""Weighted one-dimensional meshes, nodal functions, and quadrature.

The unit ball in R^N is reduced to the radial interval [0, 1] with weight
r^(N-1) and surface factor 2*pi^(N/2)/Gamma(N/2); the unit interval keeps
weight 1 (and surface factor 1).  In both cases the only Dirichlet node is
r = 1; at r = 0 the weight (or symmetry) makes the origin a natural
boundary and the node stays a free unknown.

All integrals use a fixed 3-point Gauss rule per element, exact for
polynomials of degree <= 5.  Indicator sets {|u| >= k} are resolved at
quadrature points, not by element splitting.
"""

from __future__ import annotations

import csv
import math

import numpy as np

__all__ = [
    "RadialMesh",
    "GridFunction",
    "build_radial_mesh",
    "build_interval_mesh",
    "surface_factor",
    "lp_norm",
    "w11_seminorm",
    "restricted_integral",
    "weighted_gradient_energy",
    "write_grid_csv",
    "read_grid_csv",
    "InvalidGradingError",
    "DegenerateElementError",
    "MeshMismatchError",
]

# 3-point Gauss-Legendre rule on [-1, 1].
_GAUSS_X = np.array([-math.sqrt(0.6), 0.0, math.sqrt(0.6)])
_GAUSS_W = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


class InvalidGradingError(ValueError):
    """Grading ratio outside (0, 1]."""


class DegenerateElementError(ValueError):
    """An element has zero weighted measure."""


class MeshMismatchError(ValueError):
    """Two grid functions live on different meshes."""


def surface_factor(dimension: int) -> float:
    """Area of the unit sphere in R^N: 2 pi^(N/2) / Gamma(N/2)."""
    return 2.0 * math.pi ** (dimension / 2.0) / math.gamma(dimension / 2.0)


class RadialMesh:
    """Nodes on [0, 1] with weight r^(N-1) (ball) or 1 (interval).

    Quadrature data is precomputed per element; meshes are immutable
    after construction and safe to share across threads.
    """

    def __init__(self, nodes, kind: str = "ball", dimension: int = 3):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("mesh needs at least two nodes")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("mesh nodes must be strictly increasing")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("mesh must span [0, 1] exactly")
        if kind not in ("ball", "interval"):
            raise ValueError(f"unknown mesh kind {kind!r}")
        if kind == "ball" and dimension <= 2:
            raise ValueError("ball meshes require dimension N > 2")

        self.kind = kind
        self.dimension = int(dimension) if kind == "ball" else 1
        self.weight_exponent = self.dimension - 1
        self.surface_factor = (
            surface_factor(self.dimension) if kind == "ball" else 1.0
        )
        self.nodes = nodes
        self.nodes.setflags(write=False)

        h = np.diff(nodes)
        self.element_lengths = h
        # Quadrature radii per element, local coordinate t in (0, 1).
        mid = 0.5 * (nodes[:-1] + nodes[1:])
        self.quad_radii = mid[:, None] + 0.5 * h[:, None] * _GAUSS_X[None, :]
        self.quad_local = (self.quad_radii - nodes[:-1, None]) / h[:, None]
        # Jacobian-scaled Gauss weights and the radial weight values.
        self.quad_jacobian = 0.5 * h[:, None] * _GAUSS_W[None, :]
        if self.weight_exponent == 0:
            self.quad_weight = np.ones_like(self.quad_radii)
        else:
            self.quad_weight = self.quad_radii**self.weight_exponent
        # Measure mass of each quadrature point (without the surface factor).
        self.quad_mass = self.quad_jacobian * self.quad_weight
        self.element_measures = self.quad_mass.sum(axis=1)
        # Lumped masses: surface_factor * integral of each hat against the weight.
        t = self.quad_local
        left = (self.quad_mass * (1.0 - t)).sum(axis=1)
        right = (self.quad_mass * t).sum(axis=1)
        masses = np.zeros(nodes.size)
        masses[:-1] += left
        masses[1:] += right
        self.lumped_masses = self.surface_factor * masses
        self.lumped_masses.setflags(write=False)

    @property
    def num_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def num_nodes(self) -> int:
        return self.nodes.size

    def integrate(self, quad_values) -> float:
        """surface_factor * integral of a quadrature-sampled integrand."""
        return self.surface_factor * float(np.sum(quad_values * self.quad_mass))

    def volume(self) -> float:
        return self.integrate(np.ones_like(self.quad_radii))

    def sample(self, f) -> np.ndarray:
        """Evaluate a grid function, callable, or scalar at quadrature points."""
        if isinstance(f, GridFunction):
            if f.mesh is not self:
                raise MeshMismatchError("grid function lives on a different mesh")
            return f.quad_values()
        if callable(f):
            return np.broadcast_to(
                np.asarray(f(self.quad_radii), dtype=float), self.quad_radii.shape
            )
        return np.full_like(self.quad_radii, float(f))

    def with_nodes(self, extra, snap_tol: float = 1e-12) -> "RadialMesh":
        """New mesh with extra nodes inserted (deduplicated against existing)."""
        merged = list(self.nodes)
        for r in extra:
            if min(abs(r - x) for x in merged) > snap_tol:
                merged.append(float(r))
        return RadialMesh(np.sort(merged), kind=self.kind, dimension=self.dimension)


def _graded_nodes(elements: int, grading: float) -> np.ndarray:
    """Nodes on [0, 1] with element lengths shrinking toward 0 by ratio q."""
    if not (0.0 < grading <= 1.0):
        raise InvalidGradingError(f"grading ratio must lie in (0, 1], got {grading}")
    if elements < 2:
        raise ValueError("need at least 2 elements")
    if grading == 1.0:
        return np.linspace(0.0, 1.0, elements + 1)
    # Largest element sits at r = 1; lengths decay by q toward the origin.
    lengths = grading ** np.arange(elements)  # from r=1 inward
    lengths /= lengths.sum()
    nodes = np.concatenate(([1.0], 1.0 - np.cumsum(lengths)))[::-1].copy()
    nodes[0] = 0.0
    nodes[-1] = 1.0
    return nodes


def build_radial_mesh(dimension: int, elements: int, grading: float) -> RadialMesh:
    """Graded mesh for the unit ball in R^N, weight r^(N-1).

    grading = 1 is uniform; grading q < 1 shrinks element lengths
    geometrically toward r = 0 by the ratio q.
    """
    if dimension <= 2:
        raise ValueError("ball meshes require dimension N > 2")
    return RadialMesh(_graded_nodes(elements, grading), kind="ball", dimension=dimension)


def build_interval_mesh(elements: int, grading: float = 1.0) -> RadialMesh:
    """Graded mesh for the unit interval, weight 1."""
    return RadialMesh(_graded_nodes(elements, grading), kind="interval", dimension=1)


class GridFunction:
    """Nodal values of a piecewise-linear function on a RadialMesh."""

    def __init__(self, mesh: RadialMesh, values, pin_boundary: bool = False):
        values = np.array(values, dtype=float)
        if values.shape != (mesh.num_nodes,):
            raise ValueError("one value per node required")
        if pin_boundary:
            values[-1] = 0.0
        self.mesh = mesh
        self.values = values
        self.values.setflags(write=False)
        self.pinned = pin_boundary

    @classmethod
    def zeros(cls, mesh: RadialMesh, pin_boundary: bool = True) -> "GridFunction":
        return cls(mesh, np.zeros(mesh.num_nodes), pin_boundary=pin_boundary)

    @classmethod
    def from_callable(cls, mesh: RadialMesh, f, pin_boundary: bool = False):
        return cls(mesh, np.asarray(f(mesh.nodes), dtype=float), pin_boundary)

    def quad_values(self) -> np.ndarray:
        t = self.mesh.quad_local
        return self.values[:-1, None] * (1.0 - t) + self.values[1:, None] * t

    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.mesh.element_lengths

    def __call__(self, r):
        return np.interp(r, self.mesh.nodes, self.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if other.mesh is not self.mesh:
            raise MeshMismatchError("grid functions live on different meshes")
        return GridFunction(self.mesh, self.values - other.values)

    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))


def lp_norm(u, p: float, mesh: RadialMesh | None = None) -> float:
    """(surface_factor * integral of |u|^p against the weight)^(1/p).

    u may be a GridFunction or any callable of r (e.g. a Datum); callables
    need an explicit mesh.
    """
    if p < 1.0:
        raise ValueError("p >= 1 required")
    if isinstance(u, GridFunction):
        mesh = u.mesh
    elif mesh is None:
        raise ValueError("an explicit mesh is required for callables")
    vals = np.abs(mesh.sample(u))
    return mesh.integrate(vals**p) ** (1.0 / p)


def w11_seminorm(u: GridFunction) -> float:
    """surface_factor * integral of |u'| against the weight."""
    mesh = u.mesh
    s = np.abs(u.slopes())
    return mesh.surface_factor * float(np.sum(s * mesh.element_measures))


def restricted_integral(u: GridFunction, g, k: float, p: float) -> float:
    """surface_factor * integral of |g|^p over {|u| >= k}.

    The indicator is evaluated at quadrature points; g may be a
    GridFunction on the same mesh or a callable of r.
    """
    if k < 0.0:
        raise ValueError("k >= 0 required")
    if p < 1.0:
        raise ValueError("p >= 1 required")
    mesh = u.mesh
    mask = np.abs(u.quad_values()) >= k
    gq = np.abs(mesh.sample(g))
    return mesh.integrate(np.where(mask, gq**p, 0.0))


def weighted_gradient_energy(u: GridFunction, exponent: float, k: float = 0.0) -> float:
    """surface_factor * integral of |u'|^2 / (1+|u|)^exponent over {|u| >= k}.

    exponent = 0 gives the plain weighted Dirichlet energy; k = 0 the
    unrestricted integral.
    """
    if exponent < 0.0:
        raise ValueError("exponent >= 0 required")
    mesh = u.mesh
    uq = np.abs(u.quad_values())
    s2 = u.slopes()[:, None] ** 2
    integrand = s2 / (1.0 + uq) ** exponent if exponent != 0.0 else np.broadcast_to(
        s2, uq.shape
    )
    if k > 0.0:
        integrand = np.where(uq >= k, integrand, 0.0)
    return mesh.integrate(integrand)


def write_grid_csv(u: GridFunction, path) -> None:
    """CSV serialization: header r,value and one row per node, 17 digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "value"])
        for r, v in zip(u.mesh.nodes, u.values):
            w.writerow([format(r, ".17g"), format(v, ".17g")])


def read_grid_csv(path, kind: str = "ball", dimension: int = 3) -> GridFunction:
    """Rebuild a GridFunction from its CSV; mesh kind/dimension are not
    stored in the file and must be supplied."""
    rs, vs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["r", "value"]:
            raise ValueError(f"unexpected CSV header {header!r}")
        for row in reader:
            rs.append(float(row[0]))
            vs.append(float(row[1]))
    mesh = RadialMesh(np.asarray(rs), kind=kind, dimension=dimension)
    return GridFunction(mesh, np.asarray(vs))
