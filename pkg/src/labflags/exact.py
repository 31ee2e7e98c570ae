"""Exact rational linear algebra and a feasibility solver.

Scalars are :class:`fractions.Fraction`; vectors are plain tuples of them.
Nothing in here ever touches a float.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rational = Fraction
RatVector = tuple


def frac(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"refusing non-exact scalar {x!r}")


def vec(xs: Iterable) -> tuple:
    return tuple(frac(x) for x in xs)


def format_rational(x: Fraction) -> str:
    # str(Fraction) is already "p/q", or "p" when q == 1
    return str(x)


def dot(a: Sequence, b: Sequence):
    # skipping zeros matters: most normals and points here are sparse
    return sum(x * y for x, y in zip(a, b) if x and y)


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def _check_uniform(vectors: Sequence[Sequence]) -> int | None:
    if not vectors:
        return None
    n = len(vectors[0])
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"mixed vector lengths {n} and {len(v)}")
    return n


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    n = _check_uniform(rows)
    if n is None:
        return [], []
    m = [[frac(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _integer_rows(vectors) -> list[list[int]]:
    out = []
    for v in vectors:
        v = [frac(x) for x in v]
        den = common_denominator(v)
        row = [x.numerator * (den // x.denominator) for x in v]
        if any(row):
            out.append(row)
    return out


def rank(vectors: Sequence[Sequence]) -> int:
    """Dimension of the linear span, by fraction-free elimination over Z."""
    _check_uniform(vectors)
    rows = _integer_rows(vectors)
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        a = pr[c]
        for i in range(r + 1, len(rows)):
            b = rows[i][c]
            if b:
                row = [a * x - b * y for x, y in zip(rows[i], pr)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                rows[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(rows: Sequence[Sequence], n: int | None = None) -> list[tuple]:
    """Basis of {x : row . x = 0 for every row}."""
    if n is None:
        n = _check_uniform(rows)
        if n is None:
            raise ValueError("need the ambient dimension for an empty system")
    red, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, p in zip(red, piv):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve_square(a: Sequence[Sequence], b: Sequence) -> tuple | None:
    """Unique solution of a square system, or None when singular."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return tuple(red[i][n] for i in range(n))


# integer helpers used by the hull code

def int_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def int_normal(diffs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Generalized cross product of n-1 integer vectors in Z^n (primitive)."""
    n = len(diffs) + 1
    if n == 1:
        return (1,)
    if n == 2:
        a, b = diffs[0]
        normal = (b, -a)
    elif n == 3:
        (a1, a2, a3), (b1, b2, b3) = diffs
        normal = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    else:
        normal = tuple(
            (-1) ** j * int_det([row[:j] + row[j + 1:] for row in map(list, diffs)])
            for j in range(n)
        )
    return primitive(normal)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for x in values:
        q = x.denominator
        if q != 1:
            den = den * q // gcd(den, q)
    return den


@dataclass(frozen=True)
class AffineSubspace:
    basepoint: tuple
    basis: tuple

    def __post_init__(self):
        if self.basis and rank(self.basis) != len(self.basis):
            raise ValueError("direction vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence) -> bool:
        rows = list(self.basis) + [sub(x, self.basepoint)]
        return rank(rows) == len(self.basis)


def affine_hull(points: Sequence[Sequence]) -> AffineSubspace:
    if not points:
        raise ValueError("affine hull of nothing")
    _check_uniform(points)
    p0 = vec(points[0])
    red, _ = rref([sub(vec(p), p0) for p in points[1:]])
    return AffineSubspace(p0, tuple(tuple(r) for r in red))


@dataclass(frozen=True)
class LinearSystem:
    """Rows (a, b) read as a.x = b, a.x >= b and a.x > b respectively."""

    n: int
    eq: tuple = ()
    ge: tuple = ()
    gt: tuple = ()

    def __post_init__(self):
        for a, _ in (*self.eq, *self.ge, *self.gt):
            if len(a) != self.n:
                raise DimensionMismatch(f"row of length {len(a)} in a system over R^{self.n}")

    def satisfied_by(self, x: Sequence) -> bool:
        return (all(dot(a, x) == b for a, b in self.eq)
                and all(dot(a, x) >= b for a, b in self.ge)
                and all(dot(a, x) > b for a, b in self.gt))


@dataclass(frozen=True)
class Feasible:
    witness: tuple

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    reason: str = field(default="")

    def __bool__(self):
        return False


class _Tableau:
    """Dense simplex tableau, maximisation, Bland's rule throughout."""

    def __init__(self, rows, rhs, basis):
        self.a = rows      # list of lists of Fraction
        self.b = rhs
        self.basis = basis

    def pivot(self, r, c):
        a, b = self.a, self.b
        row = a[r]
        inv = 1 / row[c]
        if inv != 1:
            a[r] = row = [x * inv for x in row]
            b[r] *= inv
        nz = [j for j, x in enumerate(row) if x]
        for i in range(len(a)):
            if i == r:
                continue
            f = a[i][c]
            if f:
                ai = a[i]
                for j in nz:
                    ai[j] -= f * row[j]
                b[i] -= f * b[r]
        self.basis[r] = c

    def maximize(self, cost, allowed):
        """Maximise cost.z over the current feasible basis; columns outside
        ``allowed`` never enter. Returns the optimal value."""
        a, b = self.a, self.b
        while True:
            # reduced costs
            red = list(cost)
            for i, bv in enumerate(self.basis):
                cb = cost[bv]
                if cb:
                    ai = a[i]
                    for j in allowed:
                        if ai[j]:
                            red[j] -= cb * ai[j]
            enter = next((j for j in allowed if red[j] > 0 and j not in self.basis), None)
            if enter is None:
                return sum(cost[bv] * b[i] for i, bv in enumerate(self.basis))
            best = None
            for i in range(len(a)):
                if a[i][enter] > 0:
                    ratio = b[i] / a[i][enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ArithmeticError("unbounded auxiliary program")
            self.pivot(best[1], enter)


def solve_feasibility(sys: LinearSystem):
    """Decide an exact linear system with equalities, >= and > rows.

    Strict rows are relaxed to ``a.x >= b + t`` with ``0 <= t <= 1`` and t is
    maximised; the system is feasible iff the optimum is positive. Returns a
    :class:`Feasible` carrying a witness that satisfies every row exactly, or
    :class:`Infeasible`.
    """
    n = sys.n
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    # column layout: x+ (n), x- (n), one surplus per >= / > row, t, cap slack
    n_ge, n_gt = len(sys.ge), len(sys.gt)
    n_sur = n_ge + n_gt
    t_col = 2 * n + n_sur
    cap_col = t_col + 1
    width = cap_col + 1 if n_gt else 2 * n + n_sur

    def base_row(a):
        row = [Fraction(0)] * width
        for j, x in enumerate(a):
            x = frac(x)
            row[j] = x
            row[n + j] = -x
        return row

    for a, b in sys.eq:
        rows.append(base_row(a))
        rhs.append(frac(b))
    for k, (a, b) in enumerate(sys.ge):
        row = base_row(a)
        row[2 * n + k] = Fraction(-1)
        rows.append(row)
        rhs.append(frac(b))
    for k, (a, b) in enumerate(sys.gt):
        row = base_row(a)
        row[2 * n + n_ge + k] = Fraction(-1)
        row[t_col] = Fraction(-1)
        rows.append(row)
        rhs.append(frac(b))
    if n_gt:
        row = [Fraction(0)] * width
        row[t_col] = Fraction(1)
        row[cap_col] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))

    # phase one: artificials on every row with b made nonnegative
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    full = [r + [Fraction(1) if k == i else Fraction(0) for k in range(m)] for i, r in enumerate(rows)]
    tab = _Tableau(full, list(rhs), [width + i for i in range(m)])
    cost1 = [Fraction(0)] * width + [Fraction(-1)] * m
    if m:
        opt = tab.maximize(cost1, list(range(width + m)))
        if opt != 0:
            return Infeasible("equality/inequality part is empty")
        # drive remaining artificials out of the basis where possible
        for i, bv in enumerate(tab.basis):
            if bv >= width:
                c = next((j for j in range(width) if tab.a[i][j] != 0), None)
                if c is not None:
                    tab.pivot(i, c)
    allowed = list(range(width))
    if n_gt:
        cost2 = [Fraction(0)] * (width + m)
        cost2[t_col] = Fraction(1)
        opt = tab.maximize(cost2, allowed)
        if opt <= 0:
            return Infeasible("strict rows cannot hold simultaneously")
    z = [Fraction(0)] * (width + m)
    for i, bv in enumerate(tab.basis):
        z[bv] = tab.b[i]
    x = tuple(z[j] - z[n + j] for j in range(n))
    if not sys.satisfied_by(x):
        raise ArithmeticError("simplex produced a witness that violates the system")
    return Feasible(x)
