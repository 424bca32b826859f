"""Two-distance representation dimensions and witness constructions.

Everything here is driven by the spectrum of the projected adjacency matrix
V.T @ A @ V: its extreme eigenvalues bound the feasible second distance, their
multiplicities give the Euclidean and spherical dimensions, and the largest
eigenvalue of the complement adjacency determines the J-spherical data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from . import edm, linalg
from .centering import VBasis, build_v, projected_gram
from .edm import Configuration
from .graphs import Graph, GraphClass, adjacency_matrix, classify, complement

SIDE_LOWER = "lower"
SIDE_UPPER = "upper"


class DegenerateGraphError(ValueError):
    """Complete and null graphs admit no two-distance representation."""


class EndpointError(ValueError):
    """The requested feasibility endpoint does not exist for this graph."""


class InfeasibleBetaError(ValueError):
    """The requested second distance makes the projected Gram indefinite."""

    def __init__(self, beta: float, eigenvalue: float):
        super().__init__(
            f"beta={beta} infeasible: projected Gram eigenvalue {eigenvalue:.6g} < 0")
        self.beta = beta
        self.eigenvalue = eigenvalue


@dataclass(frozen=True)
class ProjectedSpectrum:
    """Clustered spectrum of V.T @ A @ V together with the basis V used."""

    n: int
    groups: tuple  # ((value, basis), ...) descending; basis is (n-1) x mult
    v: VBasis

    @property
    def mu_max(self) -> float:
        return self.groups[0][0]

    @property
    def mu_min(self) -> float:
        return self.groups[-1][0]

    @property
    def m_max(self) -> int:
        return self.groups[0][1].shape[1]

    @property
    def m_min(self) -> int:
        return self.groups[-1][1].shape[1]

    @property
    def u_l(self) -> np.ndarray:
        """Orthonormal eigenbasis for mu_max."""
        return self.groups[0][1]

    @property
    def u_u(self) -> np.ndarray:
        """Orthonormal eigenbasis for mu_min."""
        return self.groups[-1][1]

    def rest_above_min(self) -> Tuple[np.ndarray, np.ndarray]:
        """(W, Lambda) for all groups except the mu_min one."""
        bases = [b for _, b in self.groups[:-1]]
        vals = np.concatenate([[val] * b.shape[1] for (val, b) in self.groups[:-1]])
        return np.hstack(bases), vals

    def flat(self) -> np.ndarray:
        return np.concatenate([[val] * b.shape[1] for val, b in self.groups])


@dataclass(frozen=True)
class BetaIntervals:
    """Feasible second-distance values as closed/open intervals excluding 1."""

    intervals: tuple  # ((lo, lo_closed, hi, hi_closed), ...)

    def contains(self, beta: float, slack: float = 0.0) -> bool:
        for lo, lo_closed, hi, hi_closed in self.intervals:
            above = beta >= lo - slack if lo_closed else beta > lo + (-slack)
            below = beta <= hi + slack if hi_closed else beta < hi - (-slack)
            if above and below:
                return True
        return False


@dataclass(frozen=True)
class JSpherical:
    delta: float
    beta: float  # second squared distance 2 + 2*delta
    dim_j: int
    d: np.ndarray
    config: Configuration


def _orthonormal_range(m: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the column space of m, rank decided by SVD."""
    if m.shape[1] == 0:
        return m
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    # columns enter as unit vectors, so surviving singular values are O(1)
    return u[:, s > rtol]


def projected_spectrum(g: Graph, tol: float = linalg.EIG_TOL) -> ProjectedSpectrum:
    """Clustered spectrum of V.T @ A @ V.

    For regular graphs the spectrum of A is used directly (dropping one copy of
    the degree, whose eigenvector is the all-ones direction), which keeps the
    eigenvalues at full accuracy.
    """
    if g.n < 2:
        raise DegenerateGraphError("projected spectrum needs n >= 2")
    a = adjacency_matrix(g)
    v = build_v(g.n)
    k = g.is_regular()
    if k is not None:
        spec = linalg.eigh(a, tol)
        e = np.ones(g.n)
        groups: List[Tuple[float, np.ndarray]] = []
        for i, grp in enumerate(spec.groups):
            q = grp.basis
            if i == 0:
                # top group holds the degree eigenvalue and the e direction
                q = _orthonormal_range(q - np.outer(e, (e @ q) / g.n))
                if q.shape[1] == 0:
                    continue
            groups.append((grp.value, v.columns.T @ q))
        return ProjectedSpectrum(g.n, tuple(groups), v)
    m = v.columns.T @ a @ v.columns
    spec = linalg.eigh(0.5 * (m + m.T), tol)
    return ProjectedSpectrum(g.n, tuple((grp.value, grp.basis) for grp in spec.groups), v)


def _require_nondegenerate(g: Graph, cls: Optional[GraphClass]) -> GraphClass:
    cls = cls if cls is not None else classify(g)
    if cls.is_degenerate:
        raise DegenerateGraphError(
            f"{cls.tag} graph admits no two-distance representation")
    return cls


def beta_endpoints(ps: ProjectedSpectrum, cls: GraphClass) -> Tuple[Optional[float], Optional[float]]:
    """(beta_l, beta_u); None where the endpoint does not exist."""
    beta_l = ps.mu_max / (ps.mu_max + 1.0) if not cls.is_multipartite else None
    beta_u = abs(ps.mu_min) / (abs(ps.mu_min) - 1.0) if not cls.is_cluster else None
    return beta_l, beta_u


def beta_feasible_set(g: Graph, cls: Optional[GraphClass] = None,
                      ps: Optional[ProjectedSpectrum] = None) -> BetaIntervals:
    """Feasible second squared distances (first distance normalized to 1)."""
    cls = _require_nondegenerate(g, cls)
    ps = ps if ps is not None else projected_spectrum(g)
    beta_l, beta_u = beta_endpoints(ps, cls)
    if cls.is_cluster:
        return BetaIntervals(((beta_l, True, 1.0, False), (1.0, False, math.inf, False)))
    if cls.is_multipartite:
        return BetaIntervals(((0.0, False, 1.0, False), (1.0, False, beta_u, True)))
    return BetaIntervals(((beta_l, True, 1.0, False), (1.0, False, beta_u, True)))


def dim_euclidean(g: Graph, cls: Optional[GraphClass] = None,
                  ps: Optional[ProjectedSpectrum] = None) -> Tuple[int, float]:
    """Minimal Euclidean representation dimension and a witness beta."""
    cls = _require_nondegenerate(g, cls)
    ps = ps if ps is not None else projected_spectrum(g)
    beta_l, beta_u = beta_endpoints(ps, cls)
    if cls.is_cluster:
        return g.n - 1 - ps.m_max, beta_l
    if cls.is_multipartite:
        return g.n - 1 - ps.m_min, beta_u
    r_l = g.n - 1 - ps.m_max
    r_u = g.n - 1 - ps.m_min
    if r_l <= r_u:
        return r_l, beta_l
    return r_u, beta_u


def endpoint_sphericity(g: Graph, side: str, ps: Optional[ProjectedSpectrum] = None,
                        tol_scale: float = linalg.RESIDUAL_TOL) -> bool:
    """Whether the EDM at the requested feasibility endpoint is spherical."""
    ps = ps if ps is not None else projected_spectrum(g)
    a = adjacency_matrix(g)
    tol = tol_scale * math.sqrt(g.n)
    if side == SIDE_LOWER:
        if ps.mu_max <= 1e-9:
            raise EndpointError("lower endpoint requires mu_max > 0")
        z = ps.v.columns @ ps.u_l
        return float(np.max(np.abs(a @ z - ps.mu_max * z))) <= tol
    if side == SIDE_UPPER:
        if ps.mu_min > -1.0 - 1e-9:
            raise EndpointError("upper endpoint requires mu_min < -1")
        z = ps.v.columns @ ps.u_u
        return float(np.max(np.abs(a @ z - ps.mu_min * z))) <= tol
    raise ValueError(f"unknown side {side!r}")


@lru_cache(maxsize=64)
def _adjacency_pair(g: Graph) -> Tuple[np.ndarray, np.ndarray]:
    """(A, Abar), cached and read-only; sweeps hit the same graph repeatedly."""
    a = adjacency_matrix(g)
    abar = adjacency_matrix(complement(g))
    a.flags.writeable = False
    abar.flags.writeable = False
    return a, abar


def _edm_at(g: Graph, beta: float) -> np.ndarray:
    a, abar = _adjacency_pair(g)
    return a + beta * abar


def _interior_beta(cls: GraphClass, beta_l: Optional[float], beta_u: Optional[float]) -> float:
    if beta_l is not None:
        return 0.5 * (beta_l + 1.0)
    return 0.5 * (1.0 + beta_u)


def dim_spherical(g: Graph, cls: Optional[GraphClass] = None,
                  ps: Optional[ProjectedSpectrum] = None) -> Tuple[int, float, float]:
    """Minimal spherical dimension, witness beta and the witness radius."""
    cls = _require_nondegenerate(g, cls)
    ps = ps if ps is not None else projected_spectrum(g)
    beta_l, beta_u = beta_endpoints(ps, cls)
    candidates = []
    if not cls.is_multipartite and endpoint_sphericity(g, SIDE_LOWER, ps):
        candidates.append((g.n - 1 - ps.m_max, beta_l))
    if not cls.is_cluster and endpoint_sphericity(g, SIDE_UPPER, ps):
        candidates.append((g.n - 1 - ps.m_min, beta_u))
    if candidates:
        r, beta = min(candidates, key=lambda t: t[0])
    else:
        r, beta = g.n - 1, _interior_beta(cls, beta_l, beta_u)
    d, config = euclidean_representation(g, beta, cls, ps)
    return r, beta, _witness_radius(d, config.points)


def _witness_radius(d: np.ndarray, p: np.ndarray, tol: float = 1e-7) -> float:
    """Circumradius of a centroid-centered spherical configuration.

    The columns of p are orthogonal (eigenvector directions scaled by
    sqrt(eigenvalue)), so the center equation P c = (diag(B) - mean)/2 solves
    by a diagonal system; rho^2 = |c|^2 + e.T D e / (2 n^2).
    """
    n = p.shape[0]
    diag_b = np.einsum("ij,ij->i", p, p)
    rhs = 0.5 * (diag_b - diag_b.mean())
    lam = np.einsum("ij,ij->j", p, p)
    c = (p.T @ rhs) / lam
    resid = float(np.max(np.abs(p @ c - rhs)))
    if resid > tol * max(1.0, float(diag_b.max())):
        raise edm.InternalConsistencyError(
            f"witness EDM unexpectedly non-spherical: center residual {resid:.3e}")
    return math.sqrt(float(c @ c) + float(d.sum()) / (2.0 * n * n))


def radius_at_beta_u_closed_form(g: Graph, ps: Optional[ProjectedSpectrum] = None) -> float:
    """Squared radius of the upper-endpoint EDM from the spectral closed form."""
    ps = ps if ps is not None else projected_spectrum(g)
    if ps.mu_min > -1.0 - 1e-9:
        raise EndpointError("closed form requires mu_min < -1")
    if not endpoint_sphericity(g, SIDE_UPPER, ps):
        raise EndpointError("upper endpoint is not spherical")
    a = adjacency_matrix(g)
    n = g.n
    e = np.ones(n)
    w_basis, lam = ps.rest_above_min()
    q = w_basis.T @ (ps.v.columns.T @ (a @ e))
    term = float(q @ (q / (ps.mu_min - lam)))
    eae = float(e @ a @ e)
    rho2 = (term + ps.mu_min * (n * n - n) + eae) / (2.0 * n * n * (ps.mu_min + 1.0))
    return rho2


def j_spherical(g: Graph, cls: Optional[GraphClass] = None,
                tol: float = linalg.EIG_TOL) -> JSpherical:
    """The unique J-spherical representation: unit sphere, first distance 2."""
    _require_nondegenerate(g, cls)
    abar = adjacency_matrix(complement(g))
    spec = linalg.eigh(abar, tol)
    lam1 = spec.max_value
    mult = spec.groups[0].multiplicity
    delta = 1.0 / lam1
    dim_j = g.n - mult
    b = np.eye(g.n) - delta * abar
    points = linalg.gram_factor(b, dim_j, tol)
    d = 2.0 * (np.ones((g.n, g.n)) - np.eye(g.n)) + 2.0 * delta * abar
    return JSpherical(delta, 2.0 + 2.0 * delta, dim_j, d,
                      Configuration(points, edm.CENTERING_CIRCUMCENTER))


def same_second_distance(g1: Graph, g2: Graph, tol: float = 1e-9) -> bool:
    """Whether the two J-spherical representations share the second distance."""
    lam1 = linalg.eigh(adjacency_matrix(complement(g1))).max_value
    lam2 = linalg.eigh(adjacency_matrix(complement(g2))).max_value
    return abs(lam1 - lam2) <= tol


def euclidean_representation(g: Graph, beta: float, cls: Optional[GraphClass] = None,
                             ps: Optional[ProjectedSpectrum] = None,
                             tol: float = linalg.EIG_TOL) -> Tuple[np.ndarray, Configuration]:
    """EDM A + beta*Abar and a centroid-centered realizing configuration."""
    _require_nondegenerate(g, cls)
    ps = ps if ps is not None else projected_spectrum(g)
    d = _edm_at(g, beta)
    # X(beta) = (beta I + (beta - 1) V.T A V)/2 shares the eigenvectors of
    # V.T A V, so its spectrum comes straight from the projected spectrum.
    pairs = [(0.5 * (beta + (beta - 1.0) * mu), basis) for mu, basis in ps.groups]
    x_vals = [val for val, _ in pairs]
    scale = max(1.0, max(abs(val) for val in x_vals))
    x_min = min(x_vals)
    if x_min < -tol * scale:
        raise InfeasibleBetaError(beta, x_min)
    pairs.sort(key=lambda t: -t[0])
    cols = [basis * math.sqrt(val) for val, basis in pairs if val > tol * scale]
    points = ps.v.columns @ np.hstack(cols) if cols else np.zeros((g.n, 0))
    return d, Configuration(points, edm.CENTERING_CENTROID)


def lower_bounds(n: int) -> Tuple[float, float]:
    """Lower bounds on dim_E and dim_S from the two-distance cardinality bounds."""
    if n < 2:
        raise ValueError("n >= 2 required")
    lb_e = 0.5 * (math.sqrt(8.0 * n + 1.0) - 3.0)
    lb_s = 0.5 * (math.sqrt(8.0 * n + 9.0) - 3.0)
    return lb_e, lb_s


@dataclass(frozen=True)
class ReprReport:
    """Aggregated analysis of one graph; None marks inapplicable fields."""

    n: int
    graph_class: GraphClass
    degenerate: bool
    mu_min: Optional[float]
    mu_max: Optional[float]
    m_min: Optional[int]
    m_max: Optional[int]
    beta_l: Optional[float]
    beta_u: Optional[float]
    dim_e: Optional[int]
    dim_e_witness_beta: Optional[float]
    dim_s: Optional[int]
    dim_s_witness_beta: Optional[float]
    spherical_at_l: Optional[bool]
    spherical_at_u: Optional[bool]
    rho_l: Optional[float]
    rho_u: Optional[float]
    delta: Optional[float]
    beta_j: Optional[float]
    dim_j: Optional[int]
    lower_bound_e: float
    lower_bound_s: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "class": self.graph_class.tag,
            "partition": list(self.graph_class.partition) if self.graph_class.partition else None,
            "is_cluster": self.graph_class.is_cluster,
            "is_multipartite": self.graph_class.is_multipartite,
            "degenerate": self.degenerate,
            "mu_min": self.mu_min,
            "mu_max": self.mu_max,
            "m_min": self.m_min,
            "m_max": self.m_max,
            "beta_l": self.beta_l,
            "beta_u": self.beta_u,
            "dim_e": self.dim_e,
            "dim_e_witness_beta": self.dim_e_witness_beta,
            "dim_s": self.dim_s,
            "dim_s_witness_beta": self.dim_s_witness_beta,
            "spherical_at_l": self.spherical_at_l,
            "spherical_at_u": self.spherical_at_u,
            "rho_l": self.rho_l,
            "rho_u": self.rho_u,
            "delta": self.delta,
            "beta_j": self.beta_j,
            "dim_j": self.dim_j,
            "lower_bound_e": self.lower_bound_e,
            "lower_bound_s": self.lower_bound_s,
        }


def analyze_graph(g: Graph, tol: float = linalg.EIG_TOL) -> ReprReport:
    """Full representation report for one graph."""
    cls = classify(g)
    lb_e, lb_s = lower_bounds(max(g.n, 2))
    if cls.is_degenerate:
        return ReprReport(g.n, cls, True, *([None] * 17), lb_e, lb_s)
    ps = projected_spectrum(g, tol)
    beta_l, beta_u = beta_endpoints(ps, cls)
    r_e, beta_e = dim_euclidean(g, cls, ps)
    spherical_at_l = endpoint_sphericity(g, SIDE_LOWER, ps) if beta_l is not None else None
    spherical_at_u = endpoint_sphericity(g, SIDE_UPPER, ps) if beta_u is not None else None
    rho_l = rho_u = None
    if spherical_at_l:
        info = edm.spherical_info(_edm_at(g, beta_l), tol)
        rho_l = info.radius if info is not None else None
    if spherical_at_u:
        info = edm.spherical_info(_edm_at(g, beta_u), tol)
        rho_u = info.radius if info is not None else None
    r_s, beta_s, _rho_s = dim_spherical(g, cls, ps)
    js = j_spherical(g, cls, tol)
    return ReprReport(
        n=g.n, graph_class=cls, degenerate=False,
        mu_min=ps.mu_min, mu_max=ps.mu_max, m_min=ps.m_min, m_max=ps.m_max,
        beta_l=beta_l, beta_u=beta_u,
        dim_e=r_e, dim_e_witness_beta=beta_e,
        dim_s=r_s, dim_s_witness_beta=beta_s,
        spherical_at_l=spherical_at_l, spherical_at_u=spherical_at_u,
        rho_l=rho_l, rho_u=rho_u,
        delta=js.delta, beta_j=js.beta, dim_j=js.dim_j,
        lower_bound_e=lb_e, lower_bound_s=lb_s,
    )
