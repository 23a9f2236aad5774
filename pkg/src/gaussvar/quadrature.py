"""Numerical integration against exp(-r^2) dmu on a chart.

The measure-carrying factor exp(-r^2) couples all parameters through the
chart's radial field, so it is kept in the integrand; the per-dimension
rules discretize plain Lebesgue measure on a truncated box:

* unbounded dimensions -- Gauss-Legendre panels on [lo, 0] and [0, hi],
  where [lo, hi] is solved from radial_sq <= R^2 for a truncation radius R
  chosen from the tail of the majorant series C * sum (r+1)^{m+l} e^{-r^2}.
  Splitting at 0 keeps r^m smooth on each panel for odd m.
* bounded dimensions -- a single Gauss-Legendre rule,
* periodic dimensions -- the uniform trapezoidal rule on [0, 2*pi), exact
  for trigonometric polynomials of degree < nodes/2.

Summation over the tensor grid uses numpy's pairwise reduction in a fixed
node order, so every result is reproducible bit-for-bit for a fixed rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .variety import GrowthEstimate, VarietyChart, solve_param_bound

__all__ = [
    "QuadratureError",
    "DimRule",
    "QuadRule",
    "TailBudget",
    "MomentTable",
    "IntegrabilityScan",
    "build_rule",
    "integrate",
    "gaussian_moment",
    "moment_table",
    "tail_budget",
    "choose_truncation",
    "integrability_scan",
    "shell_moment_sum",
    "DEFAULT_NODES",
]

DEFAULT_NODES = {"gauss": 64, "periodic": 64, "bounded": 48}

_TERM_FLOOR = 1e-300


class QuadratureError(RuntimeError):
    """Raised on invalid rules or non-finite integrand samples."""


@dataclass(frozen=True)
class DimRule:
    """Nodes and plain (Lebesgue) weights on one parameter dimension."""

    kind: str  # "gauss" (truncated unbounded), "bounded", "periodic"
    lo: float
    hi: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def length(self) -> float:
        return self.hi - self.lo


class QuadRule:
    """Tensor-product rule over a chart's parameter domain."""

    __slots__ = ("dims", "truncation_radius", "nodes_per_dim", "points", "weights")

    def __init__(self, dims, truncation_radius: float) -> None:
        dims = tuple(dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "truncation_radius", float(truncation_radius))
        object.__setattr__(
            self, "nodes_per_dim", tuple(d.nodes.size for d in dims)
        )
        mesh = np.meshgrid(*[d.nodes for d in dims], indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        w = dims[0].weights
        for d in dims[1:]:
            w = np.multiply.outer(w, d.weights)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", np.asarray(w).ravel())

    def __setattr__(self, name, value):
        raise AttributeError("QuadRule is immutable")

    @property
    def box_volume(self) -> float:
        """Volume of the truncated parameter box."""
        return math.prod(d.length for d in self.dims)

    def __repr__(self) -> str:
        kinds = ",".join(d.kind for d in self.dims)
        return (f"QuadRule(dims=[{kinds}], R={self.truncation_radius:g}, "
                f"nodes={self.nodes_per_dim})")


def _gauss_legendre(n: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def build_rule(chart: VarietyChart, radius: float, nodes_per_dim=None) -> QuadRule:
    """Construct the tensor rule for a chart truncated at radius ``radius``.

    ``nodes_per_dim`` may be a single int for every dimension, a sequence
    with one entry per dimension, or None for the per-kind defaults
    {gauss: 64, periodic: 64, bounded: 48}.
    """
    d = chart.intrinsic_dim
    if nodes_per_dim is None:
        counts = [None] * d
    elif isinstance(nodes_per_dim, int):
        counts = [nodes_per_dim] * d
    else:
        counts = list(nodes_per_dim)
        if len(counts) != d:
            raise QuadratureError(
                f"nodes_per_dim has {len(counts)} entries for a {d}-parameter chart"
            )
    dims = []
    for dim, dom in enumerate(chart.domains):
        kind = {"unbounded": "gauss", "bounded": "bounded", "periodic": "periodic"}[dom.kind]
        n = counts[dim] if counts[dim] is not None else DEFAULT_NODES[kind]
        if not isinstance(n, int) or n < 4:
            raise QuadratureError(f"nodes_per_dim must be integers >= 4, got {n!r}")
        if kind == "gauss":
            lo, hi = solve_param_bound(chart, dim, radius)
            if lo < 0.0 < hi:
                x1, w1 = _gauss_legendre(n // 2, lo, 0.0)
                x2, w2 = _gauss_legendre(n - n // 2, 0.0, hi)
                nodes = np.concatenate([x1, x2])
                weights = np.concatenate([w1, w2])
            else:
                nodes, weights = _gauss_legendre(n, lo, hi)
        elif kind == "bounded":
            lo, hi = dom.lo, dom.hi
            nodes, weights = _gauss_legendre(n, lo, hi)
        else:
            lo, hi = 0.0, 2.0 * math.pi
            nodes = 2.0 * math.pi * np.arange(n) / n
            weights = np.full(n, 2.0 * math.pi / n)
        dims.append(DimRule(kind, lo, hi, nodes, weights))
    return QuadRule(dims, radius)


def _check_rule(chart: VarietyChart, rule: QuadRule) -> None:
    expected = ["unbounded" if d.kind == "gauss" else
                ("bounded" if d.kind == "bounded" else "periodic")
                for d in rule.dims]
    actual = [d.kind for d in chart.domains]
    if expected != actual:
        raise QuadratureError(
            f"rule domain kinds {expected} do not match chart {actual}"
        )


def integrate(chart: VarietyChart, g, rule: QuadRule,
              weight: str = "gauss", weight_scale: float = 1.0):
    """Quadrature value of  integral g * e^{-weight_scale * r^2} dmu.

    ``g`` is a callable on parameter points of shape (N, d) (or a scalar
    constant).  With ``weight="none"`` the Gaussian factor is dropped and
    plain dmu is integrated.  Raises :class:`QuadratureError` naming the
    offending node when a sample is non-finite.
    """
    _check_rule(chart, rule)
    U = rule.points
    W = rule.weights * chart.volume_density(U)
    if weight == "gauss":
        W = W * np.exp(-weight_scale * chart.radial_sq(U))
    elif weight != "none":
        raise ValueError(f"weight must be 'gauss' or 'none', got {weight!r}")
    vals = g(U) if callable(g) else np.full(U.shape[0], float(g))
    vals = np.asarray(vals)
    if vals.shape != (U.shape[0],):
        vals = np.broadcast_to(vals, (U.shape[0],))
    bad = ~np.isfinite(W)
    if not np.iscomplexobj(vals):
        bad |= ~np.isfinite(vals)
    else:
        bad |= ~np.isfinite(vals.real) | ~np.isfinite(vals.imag)
    if np.any(bad):
        i = int(np.nonzero(bad)[0][0])
        raise QuadratureError(
            f"non-finite integrand sample at node {i}, parameters {U[i].tolist()}"
        )
    return np.sum(W * vals)


def gaussian_moment(chart: VarietyChart, m: int, rule: QuadRule) -> float:
    """The moment I_m = integral r^m e^{-r^2} dmu over the chart."""
    if m < 0:
        raise ValueError(f"moment order must be >= 0, got {m}")

    def g(U):
        r2 = chart.radial_sq(U)
        return r2 ** (m // 2) if m % 2 == 0 else r2 ** (m / 2.0)

    return float(integrate(chart, g, rule))


# ------------------------------------------------------------------ tail budget


@dataclass(frozen=True)
class TailBudget:
    """Tail of the majorant series C * sum_{j >= floor(R)} (j+1)^{m+l} e^{-j^2}."""

    m: int
    l: int
    C: float
    R: float
    bound: float


def tail_budget(C: float, l: int, m: int, R: float) -> TailBudget:
    """Evaluate the majorant tail from floor(R) onward.

    Terms are summed until they drop below 1e-300; the term ratio
    ((j+1)/j)^{m+l} e^{-2j-1} vanishes, so this terminates quickly.
    """
    if C <= 0:
        raise ValueError(f"growth constant must be positive, got {C}")
    if R < 1:
        raise ValueError(f"cutoff radius must be >= 1, got {R}")
    j = int(math.floor(R))
    total = 0.0
    while True:
        term = C * math.exp((m + l) * math.log(j + 1.0) - float(j) * j)
        total += term
        j += 1
        if term < _TERM_FLOOR or j > 10 ** 6:
            break
    return TailBudget(m=m, l=l, C=C, R=float(R), bound=total)


def choose_truncation(growth: GrowthEstimate, m_max: int, eps: float = 1e-12) -> int:
    """Smallest integer R >= 2 whose tail budget is at most ``eps``."""
    if growth is None:
        raise ValueError("growth estimate missing")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    for R in range(2, 301):
        if tail_budget(growth.C, growth.l, m_max, R).bound <= eps:
            return R
    raise QuadratureError(
        f"no truncation radius up to 300 meets eps={eps:g} "
        f"(C={growth.C:g}, l={growth.l}, m_max={m_max})"
    )


# ------------------------------------------------------------------ moment tables


@dataclass(frozen=True)
class MomentTable:
    """Moments I_m with their tail budgets for one chart and rule."""

    chart_id: str
    rows: tuple  # (m, I_m, tail_bound)
    R: float
    nodes: tuple

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("m,I_m,tail_bound,R,nodes\n")
            nodes_s = " ".join(str(n) for n in self.nodes)
            for m, value, bound in self.rows:
                fh.write(
                    f"{m},{value:.17g},{bound:.17g},{self.R:.17g},{nodes_s}\n"
                )


def moment_table(chart: VarietyChart, m_values, rule: QuadRule,
                 growth: GrowthEstimate | None = None) -> MomentTable:
    """Compute I_m for each m, recording the tail budget when growth is known."""
    rows = []
    for m in m_values:
        value = gaussian_moment(chart, m, rule)
        if growth is not None:
            bound = tail_budget(growth.C, growth.l, m, rule.truncation_radius).bound
        else:
            bound = float("nan")
        rows.append((int(m), value, bound))
    return MomentTable(
        chart_id=chart.chart_id, rows=tuple(rows),
        R=rule.truncation_radius, nodes=rule.nodes_per_dim,
    )


# ------------------------------------------------------------------ integrability


@dataclass(frozen=True)
class IntegrabilityScan:
    """|| e^{alpha r^2} ||^2 under refinement of the truncation radius."""

    alpha: float
    radii: tuple
    values: tuple
    divergent: bool

    @property
    def final_rel_change(self) -> float:
        a, b = self.values[-2], self.values[-1]
        return abs(b - a) / abs(b)

    def converged(self, tol: float = 1e-6) -> bool:
        return (not self.divergent) and self.final_rel_change < tol


def integrability_scan(chart: VarietyChart, alpha: float,
                       radii=tuple(range(3, 13)),
                       nodes_per_dim=None) -> IntegrabilityScan:
    """Track the squared norm of e^{alpha r^2} as the cutoff radius grows.

    The integrand e^{(2 alpha - 1) r^2} has finite mass exactly for
    alpha < 1/2; divergence is declared when the value grows by more than
    a factor of 10 across three successive radius increments.
    """
    radii = tuple(int(R) for R in radii)
    if len(radii) < 4:
        raise ValueError("need at least 4 radii to judge divergence")
    values = []
    for R in radii:
        rule = build_rule(chart, R, nodes_per_dim)
        val = integrate(
            chart, lambda U: np.exp(2.0 * alpha * chart.radial_sq(U)), rule
        )
        values.append(float(val))
    divergent = any(
        values[i + 3] > 10.0 * values[i] for i in range(len(values) - 3)
    )
    return IntegrabilityScan(
        alpha=float(alpha), radii=radii, values=tuple(values), divergent=divergent
    )


# ------------------------------------------------------------------ shell sums


def shell_moment_sum(chart: VarietyChart, m: int, rule: QuadRule):
    """Moment I_m re-summed over the integer shells B_{j+1} - B_j.

    Returns (per-shell contributions, their total).  The shells partition
    the nodes, so the total must agree with the direct moment up to
    summation reordering.
    """
    _check_rule(chart, rule)
    U = rule.points
    r2 = chart.radial_sq(U)
    r = np.sqrt(r2)
    vals = rule.weights * chart.volume_density(U) * np.exp(-r2) * r ** m
    shell_idx = np.floor(r).astype(int)
    j_max = int(shell_idx.max())
    shells = np.array(
        [np.sum(vals[shell_idx == j]) for j in range(j_max + 1)]
    )
    return shells, float(np.sum(shells))
