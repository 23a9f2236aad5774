"""Sparse multivariate polynomial arithmetic over real and complex scalars.

A polynomial is a map from monomials (exponent tuples) to coefficients,
kept in canonical sparse form: exactly-zero coefficients are never stored.
Monomials are ordered graded-lexicographically, i.e. by total degree first
and, within a degree, by descending exponent tuple, so that for two
variables the order reads

    1 < x1 < x2 < x1^2 < x1*x2 < x2^2 < ...

All types here are immutable after construction and safe to share between
threads.  Coefficients are double precision (real or complex); no epsilon
pruning is done inside the ring, only exact zeros are dropped.
"""

from __future__ import annotations

import math
from functools import total_ordering

import numpy as np

__all__ = [
    "Monomial",
    "MultiPoly",
    "Wavevector",
    "monomials_up_to_degree",
    "poly_eval",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "truncated_exponential",
    "parse_poly",
    "format_poly",
    "variables",
]


@total_ordering
class Monomial:
    """A power product x1^e1 * ... * xn^en, identified by its exponent tuple."""

    __slots__ = ("exponents",)

    def __init__(self, exponents) -> None:
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in monomial: {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def _key(self):
        # graded lex: degree first, then descending exponent tuple
        return (self.degree, tuple(-e for e in self.exponents))

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __lt__(self, other: "Monomial") -> bool:
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise ValueError("ambient dimension mismatch between monomials")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    def __repr__(self) -> str:
        return f"Monomial{self.exponents}"


def monomials_up_to_degree(n: int, degree_cap: int) -> list[Monomial]:
    """All monomials in ``n`` variables of total degree <= ``degree_cap``.

    Returned in graded lexicographic order; the count is C(n + D, D).
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if degree_cap < 0:
        raise ValueError(f"degree cap must be non-negative, got {degree_cap}")
    out: list[Monomial] = []

    def compositions(total: int, slots: int, prefix: list[int]) -> None:
        if slots == 1:
            out.append(Monomial(prefix + [total]))
            return
        for e in range(total, -1, -1):
            compositions(total - e, slots - 1, prefix + [e])

    for d in range(degree_cap + 1):
        compositions(d, n, [])
    return out


class MultiPoly:
    """Sparse polynomial in ``ambient_dim`` variables.

    ``terms`` maps :class:`Monomial` to a nonzero float or complex
    coefficient.  Instances are immutable; arithmetic returns new objects
    in canonical form.
    """

    __slots__ = ("terms", "ambient_dim")

    def __init__(self, ambient_dim: int, terms=None) -> None:
        ambient_dim = int(ambient_dim)
        if ambient_dim < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {ambient_dim}")
        canon = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(mono, Monomial):
                mono = Monomial(mono)
            if len(mono.exponents) != ambient_dim:
                raise ValueError(
                    f"monomial {mono} does not match ambient dimension {ambient_dim}"
                )
            if coeff == 0:
                continue
            canon[mono] = coeff
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "ambient_dim", ambient_dim)

    # ---------------------------------------------------------------- constructors

    @classmethod
    def zero(cls, n: int) -> "MultiPoly":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value) -> "MultiPoly":
        return cls(n, {Monomial((0,) * n): value})

    @classmethod
    def variable(cls, n: int, index: int) -> "MultiPoly":
        if not 0 <= index < n:
            raise ValueError(f"variable index {index} out of range for n={n}")
        exps = [0] * n
        exps[index] = 1
        return cls(n, {Monomial(exps): 1.0})

    @classmethod
    def linear_form(cls, coeffs) -> "MultiPoly":
        """The polynomial sum_i coeffs[i] * x_{i+1}."""
        coeffs = list(coeffs)
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            terms[Monomial(exps)] = c
        return cls(n, terms)

    # ---------------------------------------------------------------- queries

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(complex(c).imag == 0 for c in self.terms.values())

    def sorted_terms(self) -> list[tuple[Monomial, complex]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0]._key())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.ambient_dim == other.ambient_dim
            and self.terms == other.terms
        )

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    def __repr__(self) -> str:
        return f"MultiPoly({self.ambient_dim}, {self.to_text()!r})"

    # ---------------------------------------------------------------- arithmetic

    def _check_dim(self, other: "MultiPoly") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.ambient_dim, other)
        self._check_dim(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, 0) + coeff
        return MultiPoly(self.ambient_dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ambient_dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.ambient_dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(
                self.ambient_dim, {m: c * other for m, c in self.terms.items()}
            )
        self._check_dim(other)
        terms: dict[Monomial, complex] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = ma * mb
                terms[mono] = terms.get(mono, 0) + ca * cb
        return MultiPoly(self.ambient_dim, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MultiPoly.constant(self.ambient_dim, 1.0)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def partial(self, index: int) -> "MultiPoly":
        """Partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.ambient_dim:
            raise ValueError(f"variable index {index} out of range")
        terms = {}
        for mono, coeff in self.terms.items():
            e = mono.exponents[index]
            if e == 0:
                continue
            exps = list(mono.exponents)
            exps[index] = e - 1
            new = Monomial(exps)
            terms[new] = terms.get(new, 0) + coeff * e
        return MultiPoly(self.ambient_dim, terms)

    # ---------------------------------------------------------------- evaluation

    def eval(self, x):
        """Evaluate at a point (length-n sequence) or a batch of shape (N, n).

        Terms are accumulated in graded lexicographic order so results are
        reproducible bit-for-bit for a fixed input.
        """
        arr = np.asarray(x)
        single = arr.ndim <= 1
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            if self.ambient_dim == 1 and arr.shape[0] != 1:
                arr = arr.reshape(-1, 1)
                single = False
            else:
                arr = arr.reshape(1, -1)
        if arr.shape[1] != self.ambient_dim:
            raise ValueError(
                f"point dimension {arr.shape[1]} does not match ambient "
                f"dimension {self.ambient_dim}"
            )
        use_complex = np.iscomplexobj(arr) or not self.is_real()
        arr = arr.astype(np.complex128 if use_complex else np.float64, copy=False)
        out = np.zeros(arr.shape[0], dtype=arr.dtype)
        for mono, coeff in self.sorted_terms():
            prod = np.ones(arr.shape[0], dtype=arr.dtype)
            for i, e in enumerate(mono.exponents):
                if e:
                    prod = prod * arr[:, i] ** e
            out = out + coeff * prod
        if single:
            return out[0]
        return out

    __call__ = eval

    def to_text(self) -> str:
        return format_poly(self)


def variables(n: int) -> tuple[MultiPoly, ...]:
    """Convenience: the coordinate polynomials (x1, ..., xn)."""
    return tuple(MultiPoly.variable(n, i) for i in range(n))


# -------------------------------------------------------------------- spec-named ops


def poly_eval(p: MultiPoly, x):
    return p.eval(x)


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def poly_scale(p: MultiPoly, c) -> MultiPoly:
    return p * c


# -------------------------------------------------------------------- wavevectors


class Wavevector:
    """A fixed real vector k, used to form the linear phase <k, x>."""

    __slots__ = ("components",)

    def __init__(self, components) -> None:
        object.__setattr__(
            self, "components", tuple(float(c) for c in components)
        )

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def norm_sq(self) -> float:
        return float(sum(c * c for c in self.components))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def dot(self, x):
        arr = np.asarray(x, dtype=float)
        k = np.asarray(self.components)
        if arr.ndim == 1:
            return float(arr @ k)
        return arr @ k

    def linear_form(self) -> MultiPoly:
        return MultiPoly.linear_form(self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, Wavevector) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __setattr__(self, name, value):
        raise AttributeError("Wavevector is immutable")

    def __repr__(self) -> str:
        return f"Wavevector{self.components}"


def truncated_exponential(k, m: int) -> MultiPoly:
    """Degree-(m-1) Taylor partial sum of exp(i <k, x>) as a complex polynomial.

    The monomial x^b of total degree a carries the coefficient
    i^a * prod_j k_j^{b_j} / b_j!, which is the multinomial expansion of
    i^a <k, x>^a / a! summed over a = 0 .. m-1.
    """
    if not isinstance(k, Wavevector):
        k = Wavevector(k)
    if m < 1:
        raise ValueError(f"order m must be >= 1, got {m}")
    n = k.dim
    terms: dict[Monomial, complex] = {}
    for mono in monomials_up_to_degree(n, m - 1):
        alpha = mono.degree
        mult = 1.0
        for i, e in enumerate(mono.exponents):
            if e:
                mult = mult * k.components[i] ** e
                try:
                    mult = mult / math.factorial(e)
                except OverflowError:
                    # factorial beyond float range: the coefficient underflows
                    mult = 0.0
        coeff = (1j ** alpha) * mult
        if coeff != 0:
            terms[mono] = coeff
    return MultiPoly(n, terms)


# -------------------------------------------------------------------- text format


def _fmt17(x: float) -> str:
    return f"{x:.17g}"


def _format_coeff(coeff) -> tuple[str, bool]:
    """Return (text for |coeff| or the complex literal, sign_is_negative)."""
    c = complex(coeff)
    if c.imag == 0:
        re = c.real
        neg = math.copysign(1.0, re) < 0 and re != 0
        return _fmt17(abs(re) if neg else re), neg
    sign = "+" if c.imag >= 0 else "-"
    return f"({_fmt17(c.real)}{sign}{_fmt17(abs(c.imag))}j)", False


def format_poly(p: MultiPoly) -> str:
    """Render a polynomial as ``coeff*x1^e1*...`` terms joined by +/-.

    Coefficients are printed with 17 significant digits so that
    ``parse_poly(format_poly(p))`` reproduces every coefficient bit-exactly.
    """
    if p.is_zero():
        return "0"
    parts = []
    for idx, (mono, coeff) in enumerate(p.sorted_terms()):
        cstr, neg = _format_coeff(coeff)
        factors = [cstr] + [
            f"x{i + 1}^{e}" for i, e in enumerate(mono.exponents) if e > 0
        ]
        term = "*".join(factors)
        if idx == 0:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append((" - " if neg else " + ") + term)
    return "".join(parts)


def _split_terms(text: str) -> list[tuple[int, str]]:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    out = []
    sign = 1
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    start = i
    depth = 0
    for j in range(i, len(s)):
        ch = s[j]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and j > start:
            prev = s[j - 1]
            if prev in "eE*^(":
                continue  # scientific-notation exponent or operator context
            out.append((sign, s[start:j]))
            sign = -1 if ch == "-" else 1
            start = j + 1
    if start >= len(s):
        raise ValueError(f"dangling sign in polynomial text: {text!r}")
    out.append((sign, s[start:]))
    return out


def _parse_factor(factor: str):
    """Return ('var', index, exponent) or ('coeff', value)."""
    if factor.startswith("x"):
        body = factor[1:]
        if "^" in body:
            idx_s, exp_s = body.split("^", 1)
        else:
            idx_s, exp_s = body, "1"
        if not (idx_s.isdigit() and exp_s.isdigit()):
            raise ValueError(f"malformed variable factor: {factor!r}")
        idx = int(idx_s)
        if idx < 1:
            raise ValueError(f"variable indices are 1-based: {factor!r}")
        return "var", idx - 1, int(exp_s)
    if factor.startswith("(") and factor.endswith(")"):
        return "coeff", complex(factor[1:-1])
    try:
        return "coeff", float(factor)
    except ValueError as exc:
        raise ValueError(f"cannot parse factor {factor!r}") from exc


def parse_poly(text: str, ambient_dim: int | None = None) -> MultiPoly:
    """Parse the text format produced by :func:`format_poly`.

    ``ambient_dim`` fixes the number of variables; when omitted it is
    inferred as the largest variable index present (1 for constants).
    """
    raw_terms = []
    max_idx = 0
    for sign, term in _split_terms(text):
        coeff: complex | float = 1.0
        exps: dict[int, int] = {}
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"empty factor in term {term!r}")
            kind, *rest = _parse_factor(factor)
            if kind == "var":
                idx, e = rest
                exps[idx] = exps.get(idx, 0) + e
                max_idx = max(max_idx, idx + 1)
            else:
                coeff = coeff * rest[0]
        if isinstance(coeff, complex) and coeff.imag == 0:
            coeff = coeff.real
        raw_terms.append((sign, exps, coeff))
    n = ambient_dim if ambient_dim is not None else max(max_idx, 1)
    terms: dict[Monomial, complex] = {}
    for sign, exps, coeff in raw_terms:
        if exps and max(exps) >= n:
            raise ValueError(
                f"variable x{max(exps) + 1} exceeds ambient dimension {n}"
            )
        ev = [0] * n
        for idx, e in exps.items():
            ev[idx] = e
        mono = Monomial(ev)
        terms[mono] = terms.get(mono, 0) + (coeff if sign > 0 else -coeff)
    return MultiPoly(n, terms)
