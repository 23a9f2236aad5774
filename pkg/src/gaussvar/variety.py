"""Parametrized charts of embedded varieties in R^n.

Each chart bundles the embedding map of a d-parameter family into R^n with
the two scalar fields every downstream computation needs: the volume
density sqrt(det(J^T J)) that converts parameter integrals to surface
integrals, and the squared distance to the origin of the embedded point.
The supported families are

* ``euclidean``      -- R^n with the identity embedding,
* ``graph``          -- the graph x -> (x, f_1(x), ..., f_{n-1}(x)) of a
                        polynomial map, optionally restricted to an interval,
* ``revolution``     -- (f(u1) cos u2, f(u1) sin u2, h(u1)) with f > 0,
* ``modulus_graph``  -- (x, y, |F(x + iy)|) for a complex polynomial F,
* ``circle``         -- the parametric unit circle (cos u, sin u) in R^2.

Charts are immutable and all evaluators are vectorized over arrays of
parameter points of shape (N, d).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .polyring import MultiPoly, parse_poly

__all__ = [
    "ChartError",
    "GrowthError",
    "SpecFileError",
    "ParamDomain",
    "VarietyChart",
    "GrowthEstimate",
    "chart_euclidean",
    "chart_graph",
    "chart_revolution",
    "chart_modulus_graph",
    "chart_circle",
    "restrict",
    "estimate_growth",
    "solve_param_bound",
    "load_chart",
]


class ChartError(ValueError):
    """Raised when a chart's preconditions are violated (e.g. f <= 0)."""


class GrowthError(RuntimeError):
    """Raised when a volume-growth measurement or fit fails."""


class SpecFileError(ValueError):
    """Raised for malformed variety spec files."""


@dataclass(frozen=True)
class ParamDomain:
    """Domain of one parameter: 'unbounded', 'bounded' [lo, hi], or 'periodic'."""

    kind: str
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if self.kind not in ("unbounded", "bounded", "periodic"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "bounded" and not (self.lo < self.hi):  # type: ignore[operator]
            raise ValueError(f"bounded domain needs lo < hi, got [{self.lo}, {self.hi}]")

    def baseline(self) -> float:
        """A reference point inside the domain (0 or the interval midpoint)."""
        if self.kind == "bounded":
            return 0.5 * (self.lo + self.hi)
        return 0.0


class VarietyChart:
    """A parametrization U subset R^d -> R^n with density and radial field."""

    __slots__ = (
        "kind", "ambient_dim", "domains", "_embed", "_density", "_radial",
        "chart_id", "source",
    )

    def __init__(self, kind, ambient_dim, domains, embed, density, radial,
                 chart_id, source=None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "domains", tuple(domains))
        object.__setattr__(self, "_embed", embed)
        object.__setattr__(self, "_density", density)
        object.__setattr__(self, "_radial", radial)
        object.__setattr__(self, "chart_id", chart_id)
        object.__setattr__(self, "source", dict(source or {}))
        if self.intrinsic_dim > self.ambient_dim:
            raise ChartError(
                f"intrinsic dimension {self.intrinsic_dim} exceeds ambient "
                f"dimension {self.ambient_dim}"
            )

    def __setattr__(self, name, value):
        raise AttributeError("VarietyChart is immutable")

    @property
    def intrinsic_dim(self) -> int:
        return len(self.domains)

    def _params(self, u) -> tuple[np.ndarray, bool]:
        arr = np.asarray(u, dtype=float)
        single = arr.ndim <= 1
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            if self.intrinsic_dim == 1 and arr.shape[0] != 1:
                arr = arr.reshape(-1, 1)
                single = False
            else:
                arr = arr.reshape(1, -1)
        if arr.shape[1] != self.intrinsic_dim:
            raise ValueError(
                f"parameter dimension {arr.shape[1]} does not match chart "
                f"dimension {self.intrinsic_dim}"
            )
        return arr, single

    def embed(self, u) -> np.ndarray:
        """Ambient coordinates of the parameter point(s); shape (N, n)."""
        arr, single = self._params(u)
        pts = self._embed(arr)
        return pts[0] if single else pts

    def volume_density(self, u):
        arr, single = self._params(u)
        vals = self._density(arr)
        return float(vals[0]) if single else vals

    def radial_sq(self, u):
        """Squared distance |x|^2 of the embedded point(s) to the origin."""
        arr, single = self._params(u)
        vals = self._radial(arr)
        return float(vals[0]) if single else vals

    def __repr__(self) -> str:
        return f"VarietyChart({self.chart_id})"


# ------------------------------------------------------------------ constructors


def chart_euclidean(n: int) -> VarietyChart:
    """R^n with the identity embedding: density 1, r^2 = sum u_i^2."""
    if n < 1:
        raise ChartError(f"euclidean chart needs n >= 1, got {n}")

    def embed(U):
        return U.copy()

    def density(U):
        return np.ones(U.shape[0])

    def radial(U):
        return np.sum(U * U, axis=1)

    return VarietyChart(
        "euclidean", n, (ParamDomain("unbounded"),) * n,
        embed, density, radial, f"euclidean(n={n})", {"n": n},
    )


def _require_univariate(p: MultiPoly, name: str) -> MultiPoly:
    if p.ambient_dim != 1:
        raise ChartError(f"{name} must be a univariate polynomial, "
                         f"got ambient dimension {p.ambient_dim}")
    return p


def chart_graph(components, domain=None) -> VarietyChart:
    """Graph of a polynomial map R -> R^{n-1}; n = 1 + len(components).

    ``domain`` restricts the base variable to a bounded interval [lo, hi];
    by default the base is all of R.  The density is sqrt(1 + |f'(x)|^2)
    and r^2 = x^2 + |f(x)|^2.
    """
    comps = [_require_univariate(c, f"component {i}") for i, c in enumerate(components)]
    derivs = [c.partial(0) for c in comps]
    n = 1 + len(comps)
    dom = (ParamDomain("unbounded") if domain is None
           else ParamDomain("bounded", float(domain[0]), float(domain[1])))

    def embed(U):
        x = U[:, 0]
        cols = [x] + [np.real(c.eval(x.reshape(-1, 1))) for c in comps]
        return np.stack(cols, axis=1)

    def density(U):
        x = U[:, 0].reshape(-1, 1)
        acc = np.ones(U.shape[0])
        for d in derivs:
            val = np.real(d.eval(x))
            acc = acc + val * val
        return np.sqrt(acc)

    def radial(U):
        x = U[:, 0].reshape(-1, 1)
        acc = U[:, 0] ** 2
        for c in comps:
            val = np.real(c.eval(x))
            acc = acc + val * val
        return acc

    texts = ",".join(c.to_text() for c in comps)
    dom_id = "R" if dom.kind == "unbounded" else f"[{dom.lo:g},{dom.hi:g}]"
    return VarietyChart(
        "graph", n, (dom,), embed, density, radial,
        f"graph([{texts}],{dom_id})", {"components": comps, "domain": dom},
    )


def _check_profile_positive(f: MultiPoly, dom: ParamDomain) -> None:
    """Sample f on a grid plus its critical points; reject if min <= 0."""
    lo, hi = ((dom.lo, dom.hi) if dom.kind == "bounded" else (-30.0, 30.0))
    grid = np.linspace(lo, hi, 1000)
    vals = np.real(f.eval(grid.reshape(-1, 1)))
    fp = f.partial(0)
    dvals = np.real(fp.eval(grid.reshape(-1, 1)))
    crit = []
    sign_change = np.where(np.sign(dvals[:-1]) * np.sign(dvals[1:]) < 0)[0]
    for i in sign_change:
        a, b = grid[i], grid[i + 1]
        fa = float(np.real(fp.eval(np.array([[a]]))[0]))
        for _ in range(80):  # bisection to ~1e-12 on unit-scale brackets
            m = 0.5 * (a + b)
            fm = float(np.real(fp.eval(np.array([[m]]))[0]))
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        crit.append(0.5 * (a + b))
    if crit:
        cvals = np.real(f.eval(np.asarray(crit).reshape(-1, 1)))
        vals = np.concatenate([vals, cvals])
    if np.min(vals) <= 0:
        raise ChartError(
            "revolution profile f must be positive on the parameter domain; "
            f"sampled minimum {np.min(vals):.6g}"
        )


def chart_revolution(f: MultiPoly, h: MultiPoly, u1_domain=None) -> VarietyChart:
    """Revolution surface (f(u1) cos u2, f(u1) sin u2, h(u1)) in R^3.

    Density f * sqrt(f'^2 + h'^2), r^2 = f^2 + h^2.  The profile f must be
    positive; this is checked on a 1000-point grid plus the critical points
    of f located by bisection of f'.
    """
    f = _require_univariate(f, "f")
    h = _require_univariate(h, "h")
    dom1 = (ParamDomain("unbounded") if u1_domain is None
            else ParamDomain("bounded", float(u1_domain[0]), float(u1_domain[1])))
    _check_profile_positive(f, dom1)
    fp, hp = f.partial(0), h.partial(0)

    def embed(U):
        u1 = U[:, 0].reshape(-1, 1)
        fv = np.real(f.eval(u1))
        hv = np.real(h.eval(u1))
        return np.stack([fv * np.cos(U[:, 1]), fv * np.sin(U[:, 1]), hv], axis=1)

    def density(U):
        u1 = U[:, 0].reshape(-1, 1)
        fv = np.real(f.eval(u1))
        fpv = np.real(fp.eval(u1))
        hpv = np.real(hp.eval(u1))
        return fv * np.sqrt(fpv * fpv + hpv * hpv)

    def radial(U):
        u1 = U[:, 0].reshape(-1, 1)
        fv = np.real(f.eval(u1))
        hv = np.real(h.eval(u1))
        return fv * fv + hv * hv

    dom_id = "R" if dom1.kind == "unbounded" else f"[{dom1.lo:g},{dom1.hi:g}]"
    return VarietyChart(
        "revolution", 3, (dom1, ParamDomain("periodic")),
        embed, density, radial,
        f"revolution(f={f.to_text()},h={h.to_text()},u1={dom_id})",
        {"f": f, "h": h},
    )


def chart_modulus_graph(F: MultiPoly) -> VarietyChart:
    """The surface (x, y, |F(z)|) over z = x + iy for a complex polynomial F.

    Density sqrt(1 + |F'(z)|^2), r^2 = |z|^2 + |F(z)|^2.  |F| is not smooth
    at zeros of F, but those form a null set and the direct formulas below
    stay finite there.
    """
    F = _require_univariate(F, "F")
    Fp = F.partial(0)

    def _z(U):
        return (U[:, 0] + 1j * U[:, 1]).reshape(-1, 1)

    def embed(U):
        w = np.abs(F.eval(_z(U)))
        return np.stack([U[:, 0], U[:, 1], w], axis=1)

    def density(U):
        dw = np.abs(Fp.eval(_z(U)))
        return np.sqrt(1.0 + dw * dw)

    def radial(U):
        w = np.abs(F.eval(_z(U)))
        return U[:, 0] ** 2 + U[:, 1] ** 2 + w * w

    return VarietyChart(
        "modulus_graph", 3,
        (ParamDomain("unbounded"), ParamDomain("unbounded")),
        embed, density, radial,
        f"modulus_graph(F={F.to_text()})", {"F": F},
    )


def chart_circle() -> VarietyChart:
    """The parametric unit circle (cos u, sin u) in R^2 (compact, algebraic)."""

    def embed(U):
        return np.stack([np.cos(U[:, 0]), np.sin(U[:, 0])], axis=1)

    def density(U):
        return np.ones(U.shape[0])

    def radial(U):
        return np.ones(U.shape[0])

    return VarietyChart(
        "circle", 2, (ParamDomain("periodic"),),
        embed, density, radial, "circle()", {},
    )


# ------------------------------------------------------------------ restriction


class RestrictedPolynomial:
    """An ambient polynomial restricted to a chart; callable on parameters."""

    __slots__ = ("poly", "chart")

    def __init__(self, poly: MultiPoly, chart: VarietyChart) -> None:
        if poly.ambient_dim != chart.ambient_dim:
            raise ValueError(
                f"polynomial ambient dimension {poly.ambient_dim} does not "
                f"match chart ambient dimension {chart.ambient_dim}"
            )
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "chart", chart)

    def __setattr__(self, name, value):
        raise AttributeError("RestrictedPolynomial is immutable")

    def __call__(self, u):
        pts = self.chart.embed(u)
        return self.poly.eval(pts)

    def __repr__(self) -> str:
        return f"RestrictedPolynomial({self.poly.to_text()} on {self.chart.chart_id})"


def restrict(p: MultiPoly, chart: VarietyChart) -> RestrictedPolynomial:
    """Compose an ambient polynomial with the chart's embedding."""
    return RestrictedPolynomial(p, chart)


# ------------------------------------------------------------------ truncation solve


def solve_param_bound(chart: VarietyChart, dim: int, radius: float,
                      samples: int = 10000, pad: float = 0.1):
    """Interval [lo, hi] on parameter axis ``dim`` covering {r^2 <= radius^2}.

    Samples the radial field along the axis (other parameters at their
    domain baselines), takes the outermost crossing of radius^2 on each
    side and pads it by ``pad``.  The chart's radial polynomial eventually
    grows along any unbounded direction, so a doubling search finds a
    bracket.
    """
    if chart.domains[dim].kind != "unbounded":
        raise ValueError("parameter bounds are only solved for unbounded dimensions")
    base = np.array([d.baseline() for d in chart.domains])
    r2cap = float(radius) ** 2

    def radial_along(ts):
        U = np.tile(base, (ts.size, 1))
        U[:, dim] = ts
        return chart.radial_sq(U)

    span = 2.0 * max(radius, 1.0)
    for _ in range(60):
        ts = np.linspace(0.0, span, samples)
        vals = radial_along(ts)
        if vals[-1] > r2cap and radial_along(-ts)[-1] > r2cap:
            break
        span *= 2.0
    else:
        raise GrowthError(
            f"could not bracket r^2 <= {r2cap:g} along parameter {dim}"
        )
    out = []
    for sign in (1.0, -1.0):
        ts = np.linspace(0.0, span, samples)
        vals = radial_along(sign * ts)
        inside = np.nonzero(vals <= r2cap)[0]
        if inside.size == 0:
            raise GrowthError(
                f"chart misses the ball of radius {radius:g} along parameter {dim}"
            )
        out.append(sign * ts[inside[-1]] * (1.0 + pad))
    hi, lo = out
    return lo, hi


# ------------------------------------------------------------------ volume growth


@dataclass(frozen=True)
class GrowthEstimate:
    """Empirical certificate vol(M cap B_r) <= C * r^l on the sampled range."""

    C: float
    l: int
    fit_range: tuple[float, float]
    slope: float
    radii: np.ndarray
    volumes: np.ndarray


_GROWTH_GRID = {1: 20001, 2: 641, 3: 129}


def _growth_axis(chart: VarietyChart, dim: int, r_max: float, npts: int):
    """Midpoint grid (nodes, cell size) covering B_{r_max} on one dimension."""
    dom = chart.domains[dim]
    if dom.kind == "periodic":
        lo, hi = 0.0, 2.0 * math.pi
    elif dom.kind == "bounded":
        lo, hi = dom.lo, dom.hi
    else:
        lo, hi = solve_param_bound(chart, dim, r_max)
    h = (hi - lo) / npts
    return lo + h * (np.arange(npts) + 0.5), h


def _measure_volumes(chart: VarietyChart, radii: np.ndarray) -> np.ndarray:
    """Riemannian volume of M cap B_r for each r, on one fixed grid."""
    r_max = float(radii[-1])
    if chart.kind in ("revolution", "circle"):
        # density and radius do not depend on the angular parameter, so the
        # measurement is effectively one-dimensional
        nodes, h = _growth_axis(chart, 0, r_max, _GROWTH_GRID[1])
        U = np.zeros((nodes.size, chart.intrinsic_dim))
        U[:, 0] = nodes
        angular = 2.0 * math.pi if chart.kind == "revolution" else 1.0
        dens = chart.volume_density(U)
        r2 = chart.radial_sq(U)
        if not np.all(np.isfinite(dens)):
            raise GrowthError("non-finite volume density sample")
        wd = dens * h * angular
        return np.array([np.sum(wd[r2 <= r * r]) for r in radii])
    npts = _GROWTH_GRID.get(chart.intrinsic_dim, 65)
    axes = [_growth_axis(chart, dim, r_max, npts)
            for dim in range(chart.intrinsic_dim)]
    mesh = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    U = np.stack([m.ravel() for m in mesh], axis=1)
    cell = math.prod(a[1] for a in axes)
    dens = chart.volume_density(U)
    r2 = chart.radial_sq(U)
    if not np.all(np.isfinite(dens)):
        raise GrowthError("non-finite volume density sample")
    wd = dens * cell
    return np.array([np.sum(wd[r2 <= r * r]) for r in radii])


def estimate_growth(chart: VarietyChart, radii) -> GrowthEstimate:
    """Measure vol(M cap B_r) over ``radii`` and fit the bound C * r^l.

    The declared exponent is l = d (intrinsic dimension); C is the least
    constant making the bound hold at every sample.  The reported slope is
    a log-log fit over the upper half of the radius range, and a slope
    exceeding l + 1/2 is treated as a failed fit.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 4:
        raise ValueError("need at least 4 radii")
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    vols = _measure_volumes(chart, radii)
    l = chart.intrinsic_dim
    C = float(np.max(vols / radii ** l))
    mid = radii[radii.size // 2 - 1]
    tail = (radii >= mid) & (vols > 0)
    if np.count_nonzero(tail) < 2:
        raise GrowthError("not enough positive volume samples to fit a slope")
    slope = float(np.polyfit(np.log(radii[tail]), np.log(vols[tail]), 1)[0])
    if slope > l + 0.5:
        raise GrowthError(
            f"measured growth slope {slope:.3f} exceeds declared exponent "
            f"{l} + 1/2"
        )
    return GrowthEstimate(
        C=C, l=l, fit_range=(float(radii[0]), float(radii[-1])),
        slope=slope, radii=radii, volumes=vols,
    )


# ------------------------------------------------------------------ spec files


_SPEC_KEYS = {"kind", "f", "h", "F", "components", "n", "u1_domain"}
_REQUIRED = {
    "euclidean": {"n"},
    "graph": {"components"},
    "revolution": {"f", "h"},
    "modulus_graph": {"F"},
    "circle": set(),
}
_OPTIONAL = {
    "euclidean": set(),
    "graph": {"u1_domain"},
    "revolution": {"u1_domain"},
    "modulus_graph": set(),
    "circle": set(),
}


def _parse_domain(value):
    if value == "unbounded" or value is None:
        return None
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        lo, hi = float(value[0]), float(value[1])
        if not lo < hi:
            raise SpecFileError(f"u1_domain needs lo < hi, got {value}")
        return (lo, hi)
    raise SpecFileError(f"u1_domain must be 'unbounded' or [lo, hi], got {value!r}")


def load_chart(spec) -> VarietyChart:
    """Build a chart from a spec dict or a JSON file path.

    The schema is fixed: {"kind": ..., "f": ..., "h": ..., "F": ...,
    "components": [...], "n": ..., "u1_domain": ...} with polynomials in
    the text format of :mod:`gaussvar.polyring`.  Which keys are required
    depends on the kind; unknown keys are rejected.
    """
    if not isinstance(spec, dict):
        path = spec
        try:
            with open(path, "r", encoding="utf-8") as fh:
                spec = json.load(fh)
        except FileNotFoundError as exc:
            raise SpecFileError(f"variety spec file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise SpecFileError(f"invalid JSON in variety spec {path}: {exc}") from exc
        if not isinstance(spec, dict):
            raise SpecFileError(f"variety spec {path} must contain a JSON object")
    unknown = set(spec) - _SPEC_KEYS
    if unknown:
        raise SpecFileError(f"unknown keys in variety spec: {sorted(unknown)}")
    kind = spec.get("kind")
    if kind not in _REQUIRED:
        raise SpecFileError(
            f"kind must be one of {sorted(_REQUIRED)}, got {kind!r}"
        )
    given = set(spec) - {"kind"}
    missing = _REQUIRED[kind] - given
    if missing:
        raise SpecFileError(f"kind {kind!r} requires keys {sorted(missing)}")
    extra = given - _REQUIRED[kind] - _OPTIONAL[kind]
    if extra:
        raise SpecFileError(f"keys {sorted(extra)} do not apply to kind {kind!r}")

    def poly(key):
        text = spec[key]
        if not isinstance(text, str):
            raise SpecFileError(f"{key} must be a polynomial text string")
        try:
            return parse_poly(text, ambient_dim=1)
        except ValueError as exc:
            raise SpecFileError(f"cannot parse polynomial {key}={text!r}: {exc}") from exc

    try:
        if kind == "euclidean":
            n = spec["n"]
            if not isinstance(n, int) or n < 1:
                raise SpecFileError(f"n must be a positive integer, got {n!r}")
            return chart_euclidean(n)
        if kind == "graph":
            comps = spec["components"]
            if not isinstance(comps, list):
                raise SpecFileError("components must be a list of polynomial texts")
            parsed = []
            for i, text in enumerate(comps):
                if not isinstance(text, str):
                    raise SpecFileError(f"components[{i}] must be a string")
                try:
                    parsed.append(parse_poly(text, ambient_dim=1))
                except ValueError as exc:
                    raise SpecFileError(
                        f"cannot parse components[{i}]={text!r}: {exc}"
                    ) from exc
            return chart_graph(parsed, domain=_parse_domain(spec.get("u1_domain")))
        if kind == "revolution":
            return chart_revolution(
                poly("f"), poly("h"), u1_domain=_parse_domain(spec.get("u1_domain"))
            )
        if kind == "modulus_graph":
            return chart_modulus_graph(poly("F"))
        return chart_circle()
    except ChartError as exc:
        raise SpecFileError(f"invalid chart: {exc}") from exc
