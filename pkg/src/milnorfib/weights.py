"""Weight systems: inference, verification, and the Euler field.

A pair (P, Q) is weighted homogeneous of type (w_1..w_m; b_1, b_2) when every
exponent vector a of P satisfies <w, a> = b_1 and every exponent vector c of Q
satisfies <w, c> = b_2, with all w_i > 0.  Inference solves that linear system
exactly over the rationals.  When the solution space is a single ray the
answer is forced; when it has dimension > 1 the canonical representative is
the exact lexicographic minimizer of (b_1, b_2, w_1, ..., w_m) over the slice
{w_i >= 1}, found with a small rational simplex, and the verdict carries a
multiple-solutions flag.

Returned weight systems are canonical: integer entries with overall gcd 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Coefficient, MapGerm, Polynomial, PolyVectorField, as_fraction


@dataclass(frozen=True)
class WeightSystem:
    """Positive weights plus the two weighted degrees of a germ."""

    weights: tuple[Fraction, ...]
    degree_p: Fraction
    degree_q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(as_fraction(w) for w in self.weights))
        object.__setattr__(self, "degree_p", as_fraction(self.degree_p))
        object.__setattr__(self, "degree_q", as_fraction(self.degree_q))
        if not self.weights:
            raise ValueError("weight system needs at least one weight")
        if any(w <= 0 for w in self.weights):
            raise ValueError(f"weights must be strictly positive, got {self.weights}")
        if self.degree_p <= 0 or self.degree_q <= 0:
            raise ValueError("degrees must be strictly positive")

    @property
    def num_vars(self) -> int:
        return len(self.weights)

    @property
    def same_degree(self) -> bool:
        return self.degree_p == self.degree_q

    def canonical(self) -> "WeightSystem":
        """Scale to integer weights and degrees with overall gcd 1."""
        entries = list(self.weights) + [self.degree_p, self.degree_q]
        scale = Fraction(math.lcm(*(e.denominator for e in entries)))
        ints = [int(e * scale) for e in entries]
        g = math.gcd(*ints)
        ints = [v // g for v in ints]
        return WeightSystem(tuple(Fraction(v) for v in ints[:-2]), Fraction(ints[-2]), Fraction(ints[-1]))


@dataclass(frozen=True)
class QHVerdict:
    """Outcome of weight inference for a germ."""

    quasi_homogeneous: bool
    weight_system: WeightSystem | None
    same_degree: bool
    multiple_solutions: bool = False
    reason: str = ""


def euler_field(ws: WeightSystem) -> PolyVectorField:
    """The vector field (w_1 x_1, ..., w_m x_m)."""
    m = ws.num_vars
    return PolyVectorField(
        tuple(Polynomial.variable(i, m) * ws.weights[i] for i in range(m))
    )


def is_weighted_homogeneous(p: Polynomial, ws: WeightSystem, degree: Coefficient) -> bool:
    """True iff every monomial of p has weighted degree `degree`.

    The zero polynomial verifies for any system (it has no terms).
    """
    if p.num_vars != ws.num_vars:
        raise ValueError("polynomial and weight system use different variable counts")
    target = as_fraction(degree)
    return all(d == target for d in p.weighted_degrees(ws.weights))


def germ_is_weighted_homogeneous(germ: MapGerm, ws: WeightSystem) -> bool:
    """Check both components of a germ against their declared degrees."""
    return is_weighted_homogeneous(germ.p, ws, ws.degree_p) and is_weighted_homogeneous(
        germ.q, ws, ws.degree_q
    )


def euler_residual(p: Polynomial, ws: WeightSystem, degree: Coefficient) -> Polynomial:
    """<grad p, e> - degree * p, exactly; zero certifies the Euler identity."""
    if p.num_vars != ws.num_vars:
        raise ValueError("polynomial and weight system use different variable counts")
    return p.gradient().dot(euler_field(ws)) - p * as_fraction(degree)


# ---------------------------------------------------------------------------
# Inference: exact null space plus positivity analysis.
# ---------------------------------------------------------------------------


def infer_weights(germ: MapGerm, require_same_degree: bool = True) -> QHVerdict:
    """Infer a weight system making both components weighted homogeneous.

    Solves <w, a> = b1 for all exponent vectors a of P and <w, c> = b2 for all
    c of Q (adding b1 = b2 when `require_same_degree`), exactly over the
    rationals.  Returns the canonical integer representative when a strictly
    positive solution exists.  A solution space of dimension > 1 yields the
    lexicographic-minimal representative with `multiple_solutions` set.
    """
    if germ.p.is_zero() or germ.q.is_zero():
        raise ValueError("weight inference requires nonzero P and Q")
    m = germ.num_vars
    n = m + 2  # unknowns: w_1..w_m, b1, b2
    rows: list[list[Fraction]] = []
    for exps, _ in germ.p.terms():
        rows.append([Fraction(e) for e in exps] + [Fraction(-1), Fraction(0)])
    for exps, _ in germ.q.terms():
        rows.append([Fraction(e) for e in exps] + [Fraction(0), Fraction(-1)])
    if require_same_degree:
        rows.append([Fraction(0)] * m + [Fraction(1), Fraction(-1)])

    basis = _null_space_basis(rows, n)
    if not basis:
        return QHVerdict(
            False, None, False, reason="the degree constraints force all weights to zero"
        )

    if len(basis) == 1:
        solution, reason = _positive_ray(basis[0], m)
        multiple = False
    else:
        solution = _lex_min_positive(basis, m)
        reason = "" if solution is not None else "no strictly positive weight solution"
        multiple = solution is not None

    if solution is None:
        return QHVerdict(False, None, False, reason=reason)
    weights, b1, b2 = solution[:m], solution[m], solution[m + 1]
    if b1 <= 0 or b2 <= 0:
        return QHVerdict(False, None, False, reason="inferred degree is not positive")
    ws = WeightSystem(tuple(weights), b1, b2).canonical()
    note = "weight system is not unique; canonical minimal representative chosen" if multiple else ""
    return QHVerdict(True, ws, ws.same_degree, multiple_solutions=multiple, reason=note)


def _positive_ray(vector: list[Fraction], m: int) -> tuple[list[Fraction] | None, str]:
    """Orient a 1-dimensional solution ray so all weights are positive."""
    weight_part = vector[:m]
    sign = 0
    for w in weight_part:
        if w != 0:
            sign = 1 if w > 0 else -1
            break
    if sign == 0:
        return None, "all weights are forced to zero"
    oriented = [sign * v for v in vector]
    for i, w in enumerate(oriented[:m]):
        if w == 0:
            return None, f"the constraints force w{i+1} = 0"
        if w < 0:
            return None, f"w{i+1} has the opposite sign of the other weights"
    return oriented, ""


def _lex_min_positive(basis: list[list[Fraction]], m: int) -> list[Fraction] | None:
    """Lexicographic minimum of (b1, b2, w_1..w_m) over {w_i >= 1} in span(basis).

    The w_i >= 1 normalization picks one point per positive ray; the sequence
    of exact LPs then pins every coordinate, so the result is unique.
    """
    n = len(basis[0])
    k = len(basis)
    # Inequalities: for each weight coordinate i, sum_j basis[j][i] * y_j >= 1.
    ineq_rows = [[basis[j][i] for j in range(k)] for i in range(m)]
    # Objectives in priority order: b1, b2, then the weights.
    objective_order = [m, m + 1] + list(range(m))
    objectives = [[basis[j][i] for j in range(k)] for i in objective_order]
    point = _sequential_lex_min(ineq_rows, objectives)
    if point is None:
        return None
    return [sum(basis[j][i] * point[j] for j in range(k)) for i in range(n)]


# ---------------------------------------------------------------------------
# Exact rational linear algebra: RREF null space and a dense simplex.
# ---------------------------------------------------------------------------


def _null_space_basis(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} via exact Gauss-Jordan elimination."""
    matrix = [list(row) for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot_row = None
        for i in range(r, len(matrix)):
            if matrix[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        inv = 1 / matrix[r][col]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][col] != 0:
                factor = matrix[i][col]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
        if r == len(matrix):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row_idx, p in enumerate(pivots):
            v[p] = -matrix[row_idx][f]
        basis.append(v)
    return basis


def _sequential_lex_min(
    ineq_rows: list[list[Fraction]], objectives: list[list[Fraction]]
) -> list[Fraction] | None:
    """Minimize each objective in turn over {y : ineq_rows . y >= 1}.

    After each stage the achieved optimum is frozen as an equality, so the
    final point is the exact lexicographic minimizer.  Returns None when the
    region is empty.
    """
    k = len(ineq_rows[0]) if ineq_rows else len(objectives[0])
    eq_rows: list[tuple[list[Fraction], Fraction]] = []
    point: list[Fraction] | None = None
    for obj in objectives:
        result = _lp_min(obj, ineq_rows, eq_rows, k)
        if result is None:
            return None
        value, point = result
        eq_rows.append((list(obj), value))
    return point


def _lp_min(
    objective: list[Fraction],
    ineq_rows: list[list[Fraction]],
    eq_rows: list[tuple[list[Fraction], Fraction]],
    k: int,
) -> tuple[Fraction, list[Fraction]] | None:
    """Exact LP: min objective . y s.t. ineq_rows . y >= 1 and eq_rows hold.

    Free variables are split as y = u - v with u, v >= 0 and the >= rows get
    slack variables, giving a standard-form problem for `_simplex`.
    """
    num_ineq = len(ineq_rows)
    total = 2 * k + num_ineq
    a: list[list[Fraction]] = []
    b: list[Fraction] = []
    for idx, row in enumerate(ineq_rows):
        line = [Fraction(0)] * total
        for j in range(k):
            line[j] = row[j]
            line[k + j] = -row[j]
        line[2 * k + idx] = Fraction(-1)
        a.append(line)
        b.append(Fraction(1))
    for row, rhs in eq_rows:
        line = [Fraction(0)] * total
        for j in range(k):
            line[j] = row[j]
            line[k + j] = -row[j]
        a.append(line)
        b.append(rhs)
    c = [Fraction(0)] * total
    for j in range(k):
        c[j] = objective[j]
        c[k + j] = -objective[j]
    solved = _simplex(a, b, c)
    if solved is None:
        return None
    value, x = solved
    y = [x[j] - x[k + j] for j in range(k)]
    return value, y


def _simplex(
    a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]
) -> tuple[Fraction, list[Fraction]] | None:
    """Two-phase simplex with Bland's rule, all arithmetic exact.

    Solves min c.x subject to a.x = b, x >= 0.  Returns (optimum, x) or None
    when infeasible.  Raises on an unbounded problem, which the callers'
    objectives exclude.
    """
    m = len(a)
    n = len(c)
    rows = [list(row) for row in a]
    rhs = list(b)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # Phase 1: artificial variable per row, minimize their sum.
    tableau = [rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n):
        cost[j] = -sum(tableau[i][j] for i in range(m))
    cost[-1] = -sum(rhs)
    _simplex_iterate(tableau, basis, cost, n + m)
    if cost[-1] != 0:
        return None
    # Pivot any leftover artificial variables out of the basis.
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if tableau[i][j] != 0:
                    _pivot(tableau, cost, i, j, basis)
                    break

    # Phase 2 on the original objective, artificial columns frozen.
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n):
        cost[j] = c[j]
    for i in range(m):
        if basis[i] < n and cost[basis[i]] != 0:
            coef = cost[basis[i]]
            for j in range(n + m + 1):
                cost[j] -= coef * tableau[i][j]
    for j in range(n, n + m):
        cost[j] = Fraction(1)  # block re-entry of artificials
    _simplex_iterate(tableau, basis, cost, n + m)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return value, x


def _simplex_iterate(tableau, basis, cost, num_cols) -> None:
    while True:
        enter = next((j for j in range(num_cols) if cost[j] < 0), None)
        if enter is None:
            return
        leave = None
        best = None
        for i in range(len(tableau)):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("linear program is unbounded")
        _pivot(tableau, cost, leave, enter, basis)


def _pivot(tableau, cost, row, col, basis) -> None:
    inv = 1 / tableau[row][col]
    tableau[row] = [v * inv for v in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            f = tableau[i][col]
            tableau[i] = [a - f * b for a, b in zip(tableau[i], tableau[row])]
    if cost[col] != 0:
        f = cost[col]
        for j in range(len(cost)):
            cost[j] -= f * tableau[row][j]
    basis[row] = col
