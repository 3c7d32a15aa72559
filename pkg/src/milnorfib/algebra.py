"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in m variables is stored as a dictionary mapping exponent
tuples to nonzero Fraction coefficients:

    x^2*y + 3  (m = 2)   ->   {(2, 1): Fraction(1), (0, 0): Fraction(3)}

The representation is canonical: zero-coefficient terms are never stored,
so two polynomials are equal exactly when their term maps are equal.  All
arithmetic is exact; floating point enters only in `evaluate`, which sums
terms in lexicographic exponent order so rounding is reproducible.

Values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

Exponents = tuple[int, ...]

# Coefficient inputs accepted by constructors; floats are rejected on purpose
# so exactness cannot be broken silently.
Coefficient = Fraction | int | str


def as_fraction(value: Coefficient) -> Fraction:
    """Coerce an exact coefficient (Fraction, int, or 'p/q' string)."""
    if isinstance(value, float):
        raise TypeError("float coefficients are not exact; pass int, Fraction or 'p/q' string")
    return Fraction(value)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_num_vars", "_terms", "_hash", "_eval_terms", "_grad")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], Coefficient] | None = None):
        if num_vars < 0:
            raise ValueError(f"num_vars must be >= 0, got {num_vars}")
        canonical: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != num_vars:
                raise ValueError(f"exponent vector {key} has length {len(key)}, expected {num_vars}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            acc = canonical.get(key, Fraction(0)) + as_fraction(coeff)
            if acc == 0:
                canonical.pop(key, None)
            else:
                canonical[key] = acc
        object.__setattr__(self, "_num_vars", num_vars)
        object.__setattr__(self, "_terms", canonical)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_eval_terms", None)
        object.__setattr__(self, "_grad", None)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars: int, value: Coefficient) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> "Polynomial":
        """The polynomial x_index."""
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, coeff: Coefficient, exponents: Sequence[int]) -> "Polynomial":
        exps = tuple(int(e) for e in exponents)
        return cls(len(exps), {exps: coeff})

    # -- inspection --------------------------------------------------------

    @property
    def num_vars(self) -> int:
        return self._num_vars

    def terms(self) -> Iterator[tuple[Exponents, Fraction]]:
        """Terms in lexicographic exponent order."""
        for exps in sorted(self._terms):
            yield exps, self._terms[exps]

    def term_map(self) -> dict[Exponents, Fraction]:
        """Copy of the canonical exponent -> coefficient map."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        """Exact zero test: true iff the canonical term map is empty."""
        return not self._terms

    def num_terms(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        """Max total degree over terms; 0 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=0)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def weighted_degrees(self, weights: Sequence[Fraction]) -> set[Fraction]:
        """Set of weighted degrees <w, a> over the stored exponent vectors a."""
        if len(weights) != self._num_vars:
            raise ValueError("weight vector length does not match variable count")
        return {sum(w * e for w, e in zip(weights, exps)) for exps in self._terms}

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Polynomial") -> None:
        if self._num_vars != other._num_vars:
            raise ValueError(
                f"variable counts differ: {self._num_vars} vs {other._num_vars}"
            )

    def __add__(self, other: "Polynomial | Coefficient") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self._num_vars, other)
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = out.get(exps, Fraction(0)) + coeff
            if acc == 0:
                out.pop(exps, None)
            else:
                out[exps] = acc
        return self._raw(self._num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._raw(self._num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial | Coefficient") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self._num_vars, other)
        return self + (-other)

    def __rsub__(self, other: Coefficient) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: "Polynomial | Coefficient") -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            if c == 0:
                return Polynomial.zero(self._num_vars)
            return self._raw(self._num_vars, {e: k * c for e, k in self._terms.items()})
        self._check_compatible(other)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(key, Fraction(0)) + ca * cb
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return self._raw(self._num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self._num_vars, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponents, Fraction]) -> "Polynomial":
        # Internal fast path: `terms` is already canonical.
        p = cls.__new__(cls)
        object.__setattr__(p, "_num_vars", num_vars)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        object.__setattr__(p, "_eval_terms", None)
        object.__setattr__(p, "_grad", None)
        return p

    # -- calculus ----------------------------------------------------------

    def partial(self, index: int) -> "Polynomial":
        """Exact partial derivative with respect to variable `index`."""
        if not 0 <= index < self._num_vars:
            raise ValueError(f"variable index {index} out of range")
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            key = exps[:index] + (e - 1,) + exps[index + 1:]
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return self._raw(self._num_vars, {k: v for k, v in out.items() if v != 0})

    def gradient(self) -> "PolyVectorField":
        """Vector field of all partial derivatives (cached)."""
        if self._grad is None:
            grad = PolyVectorField(tuple(self.partial(i) for i in range(self._num_vars)))
            object.__setattr__(self, "_grad", grad)
        return self._grad

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point: Sequence[float]) -> float:
        """Floating-point value at `point`, terms summed in lex exponent order."""
        if len(point) != self._num_vars:
            raise ValueError(
                f"point has {len(point)} coordinates, expected {self._num_vars}"
            )
        if self._eval_terms is None:
            prepared = tuple((exps, float(coeff)) for exps, coeff in self.terms())
            object.__setattr__(self, "_eval_terms", prepared)
        total = 0.0
        try:
            for exps, coeff in self._eval_terms:
                value = coeff
                for x, e in zip(point, exps):
                    if e:
                        value *= float(x) ** e
                total += value
        except OverflowError:
            # Follow float semantics instead of raising; callers treat
            # non-finite values as divergence.
            return math.inf
        return total

    def evaluate_exact(self, point: Sequence[Coefficient]) -> Fraction:
        """Exact rational value at a rational point."""
        if len(point) != self._num_vars:
            raise ValueError(
                f"point has {len(point)} coordinates, expected {self._num_vars}"
            )
        xs = [as_fraction(x) for x in point]
        total = Fraction(0)
        for exps, coeff in self.terms():
            value = coeff
            for x, e in zip(xs, exps):
                if e:
                    value *= x**e
            total += value
        return total

    # -- protocol ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._num_vars == other._num_vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            h = hash((self._num_vars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_string(self, names: Sequence[str] | None = None) -> str:
        """Human-readable form, highest exponent vector first."""
        if self.is_zero():
            return "0"
        if names is None:
            names = [f"x{i+1}" for i in range(self._num_vars)]
        pieces: list[str] = []
        for exps, coeff in reversed(list(self.terms())):
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exps)
                if e
            ]
            body = "*".join(factors)
            if not body:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)}*{body}"
            sign = "-" if coeff < 0 else "+"
            pieces.append(f"{sign} {text}")
        head = pieces[0].lstrip("+ ").strip()
        if pieces[0].startswith("-"):
            head = "-" + pieces[0][2:]
        return " ".join([head] + pieces[1:])

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()})"


@dataclass(frozen=True)
class PolyVectorField:
    """Tuple of m polynomials in the same m variables, used as a vector field."""

    components: tuple[Polynomial, ...]
    # Symbolic Jacobian rows, built lazily on first jacobian_at call.
    _partials: list = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.components:
            raise ValueError("vector field needs at least one component")
        m = self.components[0].num_vars
        for c in self.components:
            if c.num_vars != m:
                raise ValueError("all components must share the same variable count")
        object.__setattr__(self, "_partials", None)

    @property
    def num_vars(self) -> int:
        return self.components[0].num_vars

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def dot(self, other: "PolyVectorField") -> Polynomial:
        """Exact inner product sum_i u_i * v_i."""
        if len(other.components) != len(self.components):
            raise ValueError("vector fields have different lengths")
        total = Polynomial.zero(self.num_vars)
        for u, v in zip(self.components, other.components):
            total = total + u * v
        return total

    def __neg__(self) -> "PolyVectorField":
        return PolyVectorField(tuple(-c for c in self.components))

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        if len(other.components) != len(self.components):
            raise ValueError("vector fields have different lengths")
        return PolyVectorField(
            tuple(u + v for u, v in zip(self.components, other.components))
        )

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return self + (-other)

    def scale(self, factor: Polynomial | Coefficient) -> "PolyVectorField":
        """Componentwise product with a polynomial or exact scalar."""
        return PolyVectorField(tuple(c * factor for c in self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def evaluate(self, point: Sequence[float]) -> np.ndarray:
        return np.array([c.evaluate(point) for c in self.components], dtype=float)

    def jacobian_at(self, point: Sequence[float]) -> np.ndarray:
        """Evaluated Jacobian matrix, row i = gradient of component i."""
        if self._partials is None:
            rows = [
                [c.partial(j) for j in range(self.num_vars)] for c in self.components
            ]
            object.__setattr__(self, "_partials", rows)
        return np.array(
            [[p.evaluate(point) for p in row] for row in self._partials], dtype=float
        )


class MapGerm:
    """A polynomial map germ f = (P, Q): R^m -> R^2 with named variables."""

    __slots__ = ("p", "q", "variable_names", "_hash")

    def __init__(self, p: Polynomial, q: Polynomial, variable_names: Sequence[str] | None = None):
        if p.num_vars != q.num_vars:
            raise ValueError("P and Q must use the same variables")
        if p.num_vars < 2:
            raise ValueError("map germs need at least two variables")
        if variable_names is None:
            variable_names = default_variable_names(p.num_vars)
        names = tuple(str(n) for n in variable_names)
        if len(names) != p.num_vars:
            raise ValueError(
                f"{len(names)} variable names for {p.num_vars} variables"
            )
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MapGerm is immutable")

    @property
    def num_vars(self) -> int:
        return self.p.num_vars

    def value_at(self, point: Sequence[float]) -> np.ndarray:
        """(P(x), Q(x)) as a float 2-vector."""
        return np.array([self.p.evaluate(point), self.q.evaluate(point)], dtype=float)

    def norm_at(self, point: Sequence[float]) -> float:
        """||f(x)|| = sqrt(P^2 + Q^2)."""
        return float(np.hypot(self.p.evaluate(point), self.q.evaluate(point)))

    def jacobian_at(self, point: Sequence[float]) -> np.ndarray:
        """2 x m Jacobian Df(x), rows grad P and grad Q."""
        return np.vstack(
            [self.p.gradient().evaluate(point), self.q.gradient().evaluate(point)]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MapGerm):
            return NotImplemented
        return (
            self.p == other.p
            and self.q == other.q
            and self.variable_names == other.variable_names
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.p, self.q, self.variable_names)))
        return self._hash

    def __repr__(self) -> str:
        return (
            f"MapGerm(P={self.p.to_string(self.variable_names)}, "
            f"Q={self.q.to_string(self.variable_names)})"
        )


def default_variable_names(m: int) -> tuple[str, ...]:
    if m == 2:
        return ("x", "y")
    if m == 3:
        return ("x", "y", "z")
    return tuple(f"x{i+1}" for i in range(m))


def fg_conjugate_germ(
    f_re: Polynomial,
    f_im: Polynomial,
    g_re: Polynomial,
    g_im: Polynomial,
    variable_names: Sequence[str] | None = None,
) -> MapGerm:
    """Real pair (Re h, Im h) of the complex product h = f * conj(g).

    With f = f_re + i*f_im and g = g_re + i*g_im, the product against the
    conjugate expands to

        Re h = f_re*g_re + f_im*g_im,      Im h = f_im*g_re - f_re*g_im.
    """
    for other in (f_im, g_re, g_im):
        if other.num_vars != f_re.num_vars:
            raise ValueError("all four polynomials must share the same variables")
    p = f_re * g_re + f_im * g_im
    q = f_im * g_re - f_re * g_im
    return MapGerm(p, q, variable_names)
