"""P1 finite elements for the Laplacian on a metric graph with unit-length edges.

Every edge owns its own ``mesh_n + 1`` nodal values (a *broken* space: vertex
values are duplicated per incident edge).  Continuity at vertices is expressed by
an explicit constraint matrix ``C``; its kernel is the discrete form domain.  The
Kirchhoff condition is not assembled, it is the natural boundary condition of the
Dirichlet form on ``ker C``.

DOF ``edge_dof_offset[e] + j`` is the value at ``x = j / mesh_n`` on edge ``e``,
where ``x = 0`` is the stored tail (smaller node index).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .graph_core import SimpleGraph, classify

CONSTRAINT_TOL = 1e-10
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class QuantumGraphSpec:
    graph: SimpleGraph
    mesh_n: int = 8

    def __post_init__(self):
        if self.mesh_n < 2:
            raise ValueError("mesh_n must be at least 2")


def element_stiffness(mesh_n: int) -> np.ndarray:
    """``(1/h) tridiag(-1, 2, -1)`` with corner entries ``1/h``."""
    m = mesh_n + 1
    k = np.zeros((m, m))
    for j in range(mesh_n):
        k[j : j + 2, j : j + 2] += np.array([[1.0, -1.0], [-1.0, 1.0]])
    return k * mesh_n


def element_mass(mesh_n: int) -> np.ndarray:
    """``(h/6) tridiag(1, 4, 1)`` with corner entries ``2h/6``."""
    m = mesh_n + 1
    k = np.zeros((m, m))
    for j in range(mesh_n):
        k[j : j + 2, j : j + 2] += np.array([[2.0, 1.0], [1.0, 2.0]])
    return k / (6.0 * mesh_n)


@dataclass(frozen=True, eq=False)
class Discretization:
    graph: SimpleGraph
    mesh_n: int
    stiffness: np.ndarray
    mass: np.ndarray
    constraints: np.ndarray
    domain_basis: np.ndarray
    edge_dof_offset: tuple[int, ...]
    # constraint row -> (vertex, reference endpoint DOF, other endpoint DOF)
    constraint_rows: tuple[tuple[int, int, int], ...]

    @property
    def dof_count(self) -> int:
        return self.stiffness.shape[0]

    @property
    def domain_dim(self) -> int:
        return self.domain_basis.shape[1]

    def endpoint_dof(self, edge: int, at_head: bool) -> int:
        return self.edge_dof_offset[edge] + (self.mesh_n if at_head else 0)

    def dof_location(self, dof: int) -> tuple[int, int]:
        """``(edge, local index)`` of a DOF."""
        return divmod(dof, self.mesh_n + 1)

    @cached_property
    def restricted_stiffness(self) -> np.ndarray:
        """``B^T A B``; the mass matrix restricts to the identity."""
        b = self.domain_basis
        a = b.T @ self.stiffness @ b
        return 0.5 * (a + a.T)

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """All eigenpairs of the restricted problem, eigenvectors lifted to the broken space."""
        lam, v = sla.eigh(self.restricted_stiffness)
        return lam, self.domain_basis @ v

    def in_domain(self, psi, tol: float = CONSTRAINT_TOL) -> bool:
        psi = np.asarray(psi)
        scale = max(1.0, float(np.max(np.abs(psi)))) if psi.size else 1.0
        return bool(np.all(np.abs(self.constraints @ psi) <= tol * scale))

    def mass_inner(self, phi, psi) -> complex:
        return complex(np.vdot(phi, self.mass @ psi))

    def mass_norm(self, psi) -> float:
        return float(np.sqrt(max(np.real(np.vdot(psi, self.mass @ psi)), 0.0)))


def discretize(spec: QuantumGraphSpec) -> Discretization:
    g, n = spec.graph, spec.mesh_n
    if not classify(g).connected:
        raise ValueError("quantum graph must be connected")
    if g.edge_count == 0:
        raise ValueError("quantum graph needs at least one edge")
    m = n + 1
    dofs = g.edge_count * m
    offsets = tuple(e * m for e in range(g.edge_count))
    ke, me = element_stiffness(n), element_mass(n)
    stiffness = np.zeros((dofs, dofs))
    mass = np.zeros((dofs, dofs))
    for off in offsets:
        stiffness[off : off + m, off : off + m] = ke
        mass[off : off + m, off : off + m] = me

    endpoint_dofs: list[list[int]] = [[] for _ in range(g.node_count)]
    for e, (t, h) in enumerate(g.edges):
        endpoint_dofs[t].append(offsets[e])
        endpoint_dofs[h].append(offsets[e] + n)

    rows, meta = [], []
    for v, ends in enumerate(endpoint_dofs):
        for other in ends[1:]:
            r = np.zeros(dofs)
            r[ends[0]], r[other] = 1.0, -1.0
            rows.append(r)
            meta.append((v, ends[0], other))
    constraints = np.array(rows).reshape(len(rows), dofs)

    # natural basis of ker C: one indicator per vertex, one unit vector per interior DOF
    cols = []
    for ends in endpoint_dofs:
        if ends:
            c = np.zeros(dofs)
            c[ends] = 1.0
            cols.append(c)
    for off in offsets:
        for j in range(1, n):
            c = np.zeros(dofs)
            c[off + j] = 1.0
            cols.append(c)
    natural = np.array(cols).T
    # mass-orthonormalize via Cholesky of the restricted mass matrix
    gram = natural.T @ mass @ natural
    chol = sla.cholesky(gram, lower=True)
    basis = sla.solve_triangular(chol, natural.T, lower=True).T

    for arr in (stiffness, mass, constraints, basis):
        arr.setflags(write=False)
    return Discretization(
        graph=g,
        mesh_n=n,
        stiffness=stiffness,
        mass=mass,
        constraints=constraints,
        domain_basis=basis,
        edge_dof_offset=offsets,
        constraint_rows=tuple(meta),
    )


def quadratic_form(d: Discretization, psi) -> float:
    """``a(psi, psi) = psi^* A psi``, the discrete Dirichlet energy."""
    psi = np.asarray(psi)
    if psi.shape != (d.dof_count,):
        raise ValueError(f"state has shape {psi.shape}, expected ({d.dof_count},)")
    val = np.vdot(psi, d.stiffness @ psi)
    return float(max(np.real(val), 0.0))


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, mass-orthonormal, in ker C
    residuals: np.ndarray

    def clusters(self, tol: float = 1e-6) -> list[dict]:
        return multiplicity_clusters(self.eigenvalues, tol)


def spectrum(d: Discretization, k: int | None = None) -> Spectrum:
    """Lowest ``k`` eigenpairs of ``A x = lam M x`` on ``ker C`` (all when ``k`` is None)."""
    if k is None:
        k = d.domain_dim
    if not 1 <= k <= d.domain_dim:
        raise ValueError(f"k must lie in 1..{d.domain_dim}")
    lam, vecs = d.eigh
    lam, vecs = lam[:k].copy(), vecs[:, :k].copy()
    lam[np.abs(lam) < 1e-12 * max(1.0, float(abs(d.eigh[0][-1])))] = 0.0
    # residual of the restricted pencil: B^T (A x - lam M x)
    b = d.domain_basis
    res = np.linalg.norm(b.T @ (d.stiffness @ vecs - (d.mass @ vecs) * lam), axis=0)
    return Spectrum(eigenvalues=lam, eigenvectors=vecs, residuals=res / np.maximum(np.abs(lam), 1.0))


def multiplicity_clusters(eigenvalues, tol: float = 1e-6) -> list[dict]:
    """Group sorted eigenvalues whose gaps are within ``tol * max(1, |lam|)``."""
    out: list[dict] = []
    for i, lam in enumerate(eigenvalues):
        lam = float(lam)
        if out and abs(lam - out[-1]["last"]) <= tol * max(1.0, abs(lam)):
            c = out[-1]
            c["indices"].append(i)
            c["last"] = lam
        else:
            out.append({"indices": [i], "first": lam, "last": lam})
    return [
        {
            "value": float(np.mean([eigenvalues[i] for i in c["indices"]])),
            "multiplicity": len(c["indices"]),
            "indices": c["indices"],
        }
        for c in out
    ]


def evolve(d: Discretization, psi0, t: float, k: int | None = None) -> np.ndarray:
    """``exp(i t Delta) psi0`` on ``ker C``, i.e. phases ``exp(-i lam t)`` for stiffness eigenvalues.

    Modal form ``psi(t) = sum_k exp(-i lam_k t) phi_k (phi_k, psi0)_M`` with the
    lowest ``k`` modes (all by default).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (d.dof_count,):
        raise ValueError(f"state has shape {psi0.shape}, expected ({d.dof_count},)")
    if not d.in_domain(psi0):
        raise ValueError("initial state violates vertex continuity (not in the discrete form domain)")
    lam, vecs = d.eigh
    if k is not None:
        lam, vecs = lam[:k], vecs[:, :k]
    coeff = vecs.T @ (d.mass @ psi0)
    return vecs @ (np.exp(-1j * lam * t) * coeff)


def normal_derivative_sums(d: Discretization, psi) -> dict[int, float]:
    """Per vertex, the sum over incident edges of one-sided derivatives pointing into the edge."""
    psi = np.asarray(psi)
    n, h = d.mesh_n, 1.0 / d.mesh_n
    sums = {v: 0.0 for v in range(d.graph.node_count)}
    for e, (t, hd) in enumerate(d.graph.edges):
        off = d.edge_dof_offset[e]
        sums[t] += (psi[off + 1] - psi[off]) / h
        sums[hd] += (psi[off + n - 1] - psi[off + n]) / h
    return sums


def edge_traces(d: Discretization, vecs) -> list[dict]:
    """Rows ``{edge, tail, head, x, values}`` for CSV export of eigenvector traces."""
    vecs = np.atleast_2d(np.asarray(vecs).T).T
    rows = []
    for e, (t, hd) in enumerate(d.graph.edges):
        off = d.edge_dof_offset[e]
        for j in range(d.mesh_n + 1):
            rows.append({"edge": e, "tail": t, "head": hd, "x": j / d.mesh_n, "values": vecs[off + j, :]})
    return rows
