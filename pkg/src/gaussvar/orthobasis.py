"""Orthonormal polynomial bases of a chart's coordinate ring.

The inner product is <p, q> = integral p * q * e^{-r^2} dmu (or plain dmu
with the Gaussian weight switched off).  Restricted monomials can become
linearly dependent through the relations of the variety -- on the unit
circle x^2 + y^2 = 1 kills one of the six degree-2 monomials -- so the
basis is extracted by a threshold Cholesky elimination on the Gram matrix
that processes monomials in graded lexicographic order and drops any whose
residual against the span of its kept predecessors falls below
rank_tol times its diagonal Gram entry.  The kept set is therefore
deterministic: a dependent monomial is always the later one in the order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polyring import MultiPoly, monomials_up_to_degree
from .quadrature import (
    QuadRule, QuadratureError, build_rule, choose_truncation, integrate,
)
from .variety import VarietyChart, chart_euclidean, chart_graph, estimate_growth, restrict

__all__ = [
    "GramBasis",
    "ProjectionReport",
    "RecoveryReport",
    "gram_matrix",
    "orthonormalize",
    "project",
    "basis_inner_products",
    "weighted_equivalence_check",
    "classic_recovery",
    "basis_to_csv",
    "gram_to_csv",
    "projections_to_csv",
]


@dataclass(frozen=True)
class GramBasis:
    """Gram matrix of restricted monomials, plus the extracted basis.

    Before :func:`orthonormalize` only the Gram data is present; afterwards
    ``ortho_coeffs`` holds one row per basis element, giving its expansion
    in the ambient monomials (columns follow ``monomials``; entries outside
    ``kept_indices`` are zero).
    """

    chart: VarietyChart
    degree_cap: int
    monomials: tuple
    gram: np.ndarray
    weight: str
    rank: int | None = None
    kept_indices: tuple | None = None
    ortho_coeffs: np.ndarray | None = None
    rank_tol: float | None = None

    @property
    def chart_id(self) -> str:
        return self.chart.chart_id

    def is_orthonormalized(self) -> bool:
        return self.ortho_coeffs is not None

    def basis_polynomials(self) -> list[MultiPoly]:
        """The basis elements as ambient polynomials."""
        if not self.is_orthonormalized():
            raise ValueError("basis not extracted yet; call orthonormalize first")
        out = []
        n = self.chart.ambient_dim
        for row in self.ortho_coeffs:
            terms = {m: c for m, c in zip(self.monomials, row) if c != 0}
            out.append(MultiPoly(n, terms))
        return out


def _monomial_values(monomials, points_ambient: np.ndarray) -> np.ndarray:
    """Matrix of monomial values, one row per monomial."""
    E = np.empty((len(monomials), points_ambient.shape[0]))
    for i, mono in enumerate(monomials):
        prod = np.ones(points_ambient.shape[0])
        for j, e in enumerate(mono.exponents):
            if e:
                prod = prod * points_ambient[:, j] ** e
        E[i] = prod
    return E


def _measure_weights(chart: VarietyChart, rule: QuadRule, weight: str) -> np.ndarray:
    W = rule.weights * chart.volume_density(rule.points)
    if weight == "gauss":
        W = W * np.exp(-chart.radial_sq(rule.points))
    elif weight != "none":
        raise ValueError(f"weight must be 'gauss' or 'none', got {weight!r}")
    return W


def gram_matrix(chart: VarietyChart, degree_cap: int, rule: QuadRule,
                weight: str = "gauss") -> GramBasis:
    """Pairwise inner products of all restricted monomials of degree <= D."""
    if degree_cap < 0:
        raise ValueError(f"degree cap must be >= 0, got {degree_cap}")
    monomials = tuple(monomials_up_to_degree(chart.ambient_dim, degree_cap))
    X = chart.embed(rule.points)
    E = _monomial_values(monomials, X)
    W = _measure_weights(chart, rule, weight)
    G = (E * W) @ E.T
    G = 0.5 * (G + G.T)
    if not np.all(np.isfinite(G)):
        i, j = np.argwhere(~np.isfinite(G))[0]
        raise QuadratureError(
            f"non-finite Gram entry for monomial pair "
            f"({monomials[i]}, {monomials[j]})"
        )
    return GramBasis(
        chart=chart, degree_cap=degree_cap, monomials=monomials,
        gram=G, weight=weight,
    )


def orthonormalize(gb: GramBasis, rank_tol: float = 1e-9) -> GramBasis:
    """Extract the orthonormal basis by graded-lex threshold elimination.

    A monomial is dropped when its squared residual norm against the span
    of the kept predecessors is at most ``rank_tol`` times its diagonal
    Gram entry; surviving vectors are normalized.  Projections are applied
    twice per step to keep the basis numerically orthogonal.
    """
    if rank_tol <= 0:
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    G = gb.gram
    N = len(gb.monomials)
    kept: list[int] = []
    rows: list[np.ndarray] = []      # coefficient rows of the kept basis
    grams: list[np.ndarray] = []     # cached G @ row for fast inner products
    for i in range(N):
        gii = G[i, i]
        v = np.zeros(N)
        v[i] = 1.0
        for _ in range(2):
            for c, w in zip(rows, grams):
                v = v - (w @ v) * c
        res2 = float(v @ G @ v)
        if gii <= 0 or res2 <= rank_tol * gii:
            continue
        c = v / math.sqrt(res2)
        kept.append(i)
        rows.append(c)
        grams.append(G @ c)
    return GramBasis(
        chart=gb.chart, degree_cap=gb.degree_cap, monomials=gb.monomials,
        gram=gb.gram, weight=gb.weight, rank=len(kept),
        kept_indices=tuple(kept),
        ortho_coeffs=np.array(rows).reshape(len(kept), N),
        rank_tol=rank_tol,
    )


@dataclass(frozen=True)
class ProjectionReport:
    """Best approximation of a target function in the degree-D slice."""

    target: str
    degree_cap: int
    coefficients: np.ndarray
    residual_norm: float
    f_norm: float

    @property
    def rel_residual(self) -> float:
        return self.residual_norm / self.f_norm


def project(gb: GramBasis, f, rule: QuadRule, target: str = "f") -> ProjectionReport:
    """Project ``f`` (callable on parameters) onto the orthonormal basis.

    The residual norm is evaluated as the quadrature norm of the pointwise
    difference f - sum_k c_k b_k, which agrees with
    sqrt(<f, f> - sum c_k^2) but cannot go negative through cancellation.
    """
    if not gb.is_orthonormalized():
        raise ValueError("basis not extracted yet; call orthonormalize first")
    chart = gb.chart
    W = _measure_weights(chart, rule, gb.weight)
    X = chart.embed(rule.points)
    E = _monomial_values(gb.monomials, X)
    B = gb.ortho_coeffs @ E
    fvals = np.asarray(f(rule.points), dtype=float)
    if not np.all(np.isfinite(fvals)):
        i = int(np.nonzero(~np.isfinite(fvals))[0][0])
        raise QuadratureError(
            f"non-finite target sample at node {i}, parameters "
            f"{rule.points[i].tolist()}"
        )
    coeffs = B @ (W * fvals)
    f_norm_sq = float(np.sum(W * fvals * fvals))
    diff = fvals - coeffs @ B
    res_sq = max(float(np.sum(W * diff * diff)), 0.0)
    return ProjectionReport(
        target=target, degree_cap=gb.degree_cap, coefficients=coeffs,
        residual_norm=math.sqrt(res_sq), f_norm=math.sqrt(f_norm_sq),
    )


def basis_inner_products(gb: GramBasis, rule: QuadRule) -> np.ndarray:
    """Re-integrate <b_i, b_j> with an independent rule (verification aid)."""
    if not gb.is_orthonormalized():
        raise ValueError("basis not extracted yet; call orthonormalize first")
    W = _measure_weights(gb.chart, rule, gb.weight)
    X = gb.chart.embed(rule.points)
    B = gb.ortho_coeffs @ _monomial_values(gb.monomials, X)
    M = (B * W) @ B.T
    return 0.5 * (M + M.T)


# ------------------------------------------------------------------ equivalence


def weighted_equivalence_check(chart: VarietyChart, p: MultiPoly, f,
                               rule: QuadRule, rule_rhs: QuadRule | None = None):
    """Evaluate both sides of the weighted approximation identity.

    Left side: integral |f e^{-r^2/4} - p e^{-r^2/4}|^2 e^{-r^2/2} dmu,
    right side: integral |f - p|^2 e^{-r^2} dmu, each with its own
    quadrature pass (``rule_rhs`` defaults to ``rule``).
    """
    pr = restrict(p, chart)

    def lhs_integrand(U):
        damp = np.exp(-0.25 * chart.radial_sq(U))
        diff = np.asarray(f(U)) * damp - np.real(pr(U)) * damp
        return diff * diff

    def rhs_integrand(U):
        diff = np.asarray(f(U)) - np.real(pr(U))
        return diff * diff

    lhs = float(integrate(chart, lhs_integrand, rule, weight_scale=0.5))
    rhs = float(integrate(chart, rhs_integrand, rule_rhs or rule))
    return lhs, rhs


# ------------------------------------------------------------------ classics


def _hermite_coeffs(degree_cap: int) -> np.ndarray:
    """Normalized Hermite coefficients (weight e^{-x^2}), row k = degree k."""
    rows = [np.array([1.0]), np.array([0.0, 2.0])]
    for k in range(1, degree_cap):
        nxt = np.zeros(k + 2)
        nxt[1:] = 2.0 * rows[k]
        nxt[: len(rows[k - 1])] -= 2.0 * k * rows[k - 1]
        rows.append(nxt)
    out = np.zeros((degree_cap + 1, degree_cap + 1))
    for k in range(degree_cap + 1):
        norm = math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
        out[k, : k + 1] = rows[k] / norm
    return out


def _legendre_coeffs(degree_cap: int) -> np.ndarray:
    """Normalized Legendre coefficients (weight 1 on [-1, 1])."""
    rows = [np.array([1.0]), np.array([0.0, 1.0])]
    for k in range(1, degree_cap):
        nxt = np.zeros(k + 2)
        nxt[1:] = (2.0 * k + 1.0) * rows[k]
        nxt[: len(rows[k - 1])] -= k * rows[k - 1]
        rows.append(nxt / (k + 1.0))
    out = np.zeros((degree_cap + 1, degree_cap + 1))
    for k in range(degree_cap + 1):
        out[k, : k + 1] = rows[k] * math.sqrt((2.0 * k + 1.0) / 2.0)
    return out


@dataclass(frozen=True)
class RecoveryReport:
    """Comparison of the computed basis against a classical family."""

    kind: str
    degree_cap: int
    computed: np.ndarray
    reference: np.ndarray
    max_rel_coeff_err: float
    max_spurious_coeff: float
    matched: bool


def classic_recovery(kind: str, degree_cap: int = 6) -> RecoveryReport:
    """Recover the Hermite or Legendre family from the generic machinery.

    ``hermite``: euclidean chart on R with the Gaussian weight;
    ``legendre``: the interval [-1, 1] (a graph chart with no components)
    with the weight switched off.  Rows are sign-fixed so the leading
    coefficient is positive before comparing.
    """
    if kind == "hermite":
        chart = chart_euclidean(1)
        growth = estimate_growth(chart, np.linspace(2.0, 10.0, 9))
        R = choose_truncation(growth, 2 * degree_cap, 1e-12)
        rule = build_rule(chart, R)
        gb = orthonormalize(gram_matrix(chart, degree_cap, rule, weight="gauss"))
        reference = _hermite_coeffs(degree_cap)
    elif kind == "legendre":
        chart = chart_graph([], domain=(-1.0, 1.0))
        rule = build_rule(chart, 2)
        gb = orthonormalize(gram_matrix(chart, degree_cap, rule, weight="none"))
        reference = _legendre_coeffs(degree_cap)
    else:
        raise ValueError(f"kind must be 'hermite' or 'legendre', got {kind!r}")
    computed = gb.ortho_coeffs.copy()
    for k in range(computed.shape[0]):
        if computed[k, gb.kept_indices[k]] < 0:
            computed[k] = -computed[k]
    ref_nz = np.abs(reference) > 0
    rel = np.abs(computed - reference)[ref_nz] / np.abs(reference)[ref_nz]
    spurious = np.abs(computed)[~ref_nz]
    max_rel = float(rel.max())
    max_spur = float(spurious.max()) if spurious.size else 0.0
    matched = (computed.shape == reference.shape and max_rel <= 1e-6
               and max_spur <= 1e-7 * float(np.abs(reference).max()))
    return RecoveryReport(
        kind=kind, degree_cap=degree_cap, computed=computed,
        reference=reference, max_rel_coeff_err=max_rel,
        max_spurious_coeff=max_spur, matched=matched,
    )


# ------------------------------------------------------------------ CSV export


def basis_to_csv(gb: GramBasis, path) -> None:
    """One row per nonzero basis coefficient: index, exponents, value."""
    if not gb.is_orthonormalized():
        raise ValueError("basis not extracted yet; call orthonormalize first")
    with open(path, "w", newline="") as fh:
        fh.write("basis_index,monomial_exponents,coefficient\n")
        for k, row in enumerate(gb.ortho_coeffs):
            for mono, coeff in zip(gb.monomials, row):
                if coeff != 0:
                    exps = " ".join(str(e) for e in mono.exponents)
                    fh.write(f"{k},{exps},{coeff:.17g}\n")


def gram_to_csv(gb: GramBasis, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("i,j,value\n")
        N = len(gb.monomials)
        for i in range(N):
            for j in range(N):
                fh.write(f"{i},{j},{gb.gram[i, j]:.17g}\n")


def projections_to_csv(reports, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("D,residual_norm,f_norm,rel_residual\n")
        for rep in reports:
            fh.write(
                f"{rep.degree_cap},{rep.residual_norm:.17g},"
                f"{rep.f_norm:.17g},{rep.rel_residual:.17g}\n"
            )
