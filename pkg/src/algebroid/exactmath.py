"""Exact rational scalars, sparse multivariate polynomials, and rational
linear algebra.

Everything in this module is exact: coefficients are `fractions.Fraction`
(arbitrary precision), polynomials are sparse maps from exponent
multi-indices to nonzero rationals, and the linear algebra routines decide
rank / kernel / solvability with no rounding. All values are immutable
after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

Rational = Fraction

# exponent multi-index: tuple of non-negative ints, length = base_dim
Expo = tuple


def grlex_key(expo: Expo):
    """Graded lexicographic sort key for exponent multi-indices."""
    return (sum(expo), expo)


def monomials_upto(base_dim: int, max_degree: int) -> Iterator[Expo]:
    """Yield all exponent multi-indices of total degree <= max_degree in
    graded lexicographic order."""

    def of_degree(n: int, d: int) -> Iterator[Expo]:
        if n == 1:
            yield (d,)
            return
        for first in range(d, -1, -1):
            for rest in of_degree(n - 1, d - first):
                yield (first,) + rest

    for d in range(max_degree + 1):
        yield from of_degree(base_dim, d)


class Poly:
    """Sparse multivariate polynomial over the rationals.

    Variables are x1..xn where n = base_dim. Terms map exponent
    multi-indices to nonzero Fraction coefficients; zero coefficients are
    never stored, so equality of term maps is equality of polynomials.
    """

    __slots__ = ("base_dim", "terms", "_hash")

    def __init__(self, base_dim: int, terms=None):
        if base_dim < 1:
            raise ValueError("base_dim must be positive")
        self.base_dim = base_dim
        clean = {}
        if terms:
            for expo, coeff in (terms.items() if isinstance(terms, dict) else terms):
                if len(expo) != base_dim:
                    raise ValueError("exponent length != base_dim")
                coeff = Fraction(coeff)
                if coeff:
                    expo = tuple(int(e) for e in expo)
                    if any(e < 0 for e in expo):
                        raise ValueError("negative exponent")
                    acc = clean.get(expo, Fraction(0)) + coeff
                    if acc:
                        clean[expo] = acc
                    else:
                        clean.pop(expo, None)
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(base_dim: int) -> "Poly":
        return Poly(base_dim)

    @staticmethod
    def constant(base_dim: int, value) -> "Poly":
        return Poly(base_dim, {(0,) * base_dim: Fraction(value)})

    @staticmethod
    def variable(base_dim: int, index: int) -> "Poly":
        if not 0 <= index < base_dim:
            raise ValueError("variable index out of range")
        expo = tuple(1 if i == index else 0 for i in range(base_dim))
        return Poly(base_dim, {expo: Fraction(1)})

    @staticmethod
    def monomial(base_dim: int, expo: Sequence[int], coeff=1) -> "Poly":
        return Poly(base_dim, {tuple(expo): Fraction(coeff)})

    # -- ring operations ----------------------------------------------

    def _check(self, other: "Poly"):
        if self.base_dim != other.base_dim:
            raise ValueError("base_dim mismatch")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for expo, coeff in other.terms.items():
            acc = terms.get(expo, Fraction(0)) + coeff
            if acc:
                terms[expo] = acc
            else:
                terms.pop(expo, None)
        out = Poly.__new__(Poly)
        out.base_dim, out.terms, out._hash = self.base_dim, terms, None
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.base_dim = self.base_dim
        out.terms = {e: -c for e, c in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(expo, Fraction(0)) + c1 * c2
                if acc:
                    terms[expo] = acc
                else:
                    terms.pop(expo, None)
        out = Poly.__new__(Poly)
        out.base_dim, out.terms, out._hash = self.base_dim, terms, None
        return out

    __rmul__ = __mul__

    def scale(self, scalar) -> "Poly":
        scalar = Fraction(scalar)
        if not scalar:
            return Poly.zero(self.base_dim)
        out = Poly.__new__(Poly)
        out.base_dim = self.base_dim
        out.terms = {e: c * scalar for e, c in self.terms.items()}
        out._hash = None
        return out

    def diff(self, index: int) -> "Poly":
        """Partial derivative with respect to x_{index+1}."""
        terms = {}
        for expo, coeff in self.terms.items():
            k = expo[index]
            if k:
                new = list(expo)
                new[index] = k - 1
                terms[tuple(new)] = coeff * k
        return Poly(self.base_dim, terms)

    def diff_multi(self, alpha: Sequence[int]) -> "Poly":
        p = self
        for i, a in enumerate(alpha):
            for _ in range(a):
                p = p.diff(i)
                if not p.terms:
                    return p
        return p

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.base_dim:
            raise ValueError("point length != base_dim")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            val = coeff
            for v, e in zip(pt, expo):
                val *= v ** e
            total += val
        return total

    # -- predicates, ordering, printing --------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.base_dim, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.base_dim == other.base_dim
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base_dim, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, key=grlex_key, reverse=True):
            coeff = self.terms[expo]
            factors = []
            for i, e in enumerate(expo):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# Polynomial text syntax: variables x1..xn, integer/rational literals,
# + - * ^ and parentheses; whitespace insignificant.
# ---------------------------------------------------------------------------


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position + 1})")
        self.position = position


class _PolyParser:
    def __init__(self, text: str, base_dim: int):
        self.text = text
        self.base_dim = base_dim
        self.pos = 0

    def error(self, message: str):
        raise PolyParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        p = self.parse_sum()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return p

    def parse_sum(self) -> Poly:
        ch = self.peek()
        negate = False
        if ch in "+-":
            negate = ch == "-"
            self.pos += 1
        p = self.parse_product()
        if negate:
            p = -p
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                p = p + self.parse_product()
            elif ch == "-":
                self.pos += 1
                p = p - self.parse_product()
            else:
                return p

    def parse_product(self) -> Poly:
        p = self.parse_power()
        while self.peek() == "*":
            self.pos += 1
            p = p * self.parse_power()
        return p

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            exp = self.parse_integer()
            if exp < 0:
                self.error("negative exponent")
            result = Poly.constant(self.base_dim, 1)
            for _ in range(exp):
                result = result * base
            return result
        return base

    def parse_integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def parse_atom(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.parse_sum()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if ch == "x":
            self.pos += 1
            index = self.parse_integer()
            if not 1 <= index <= self.base_dim:
                self.error(f"variable x{index} out of range for base_dim {self.base_dim}")
            return Poly.variable(self.base_dim, index - 1)
        if ch.isdigit():
            num = self.parse_integer()
            if self.peek() == "/":
                self.pos += 1
                den = self.parse_integer()
                if den == 0:
                    self.error("zero denominator")
                return Poly.constant(self.base_dim, Fraction(num, den))
            return Poly.constant(self.base_dim, num)
        self.error("expected polynomial atom")


def parse_poly(text: str, base_dim: int) -> Poly:
    """Parse the polynomial text syntax (`2*x1^2*x2 - 1/3`)."""
    return _PolyParser(text, base_dim).parse()


# ---------------------------------------------------------------------------
# Exact rational linear algebra over list-of-list matrices of Fraction.
# ---------------------------------------------------------------------------


def _as_matrix(m: Sequence[Sequence]) -> list:
    rows = [[Fraction(v) for v in row] for row in m]
    if rows:
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged matrix")
    return rows


def _row_echelon(m: list):
    """In-place reduced row echelon; returns list of pivot columns."""
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rank(m: Sequence[Sequence]) -> int:
    work = _as_matrix(m)
    return len(_row_echelon(work))


def kernel_basis(m: Sequence[Sequence]) -> list:
    """Basis of the right kernel of m; each vector satisfies m.v = 0 exactly.

    The basis size equals cols - rank(m); an empty list means the map is
    injective.
    """
    work = _as_matrix(m)
    if not work:
        return []
    cols = len(work[0])
    pivots = _row_echelon(work)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][free]
        basis.append(vec)
    return basis


def solve_linear(m: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """Solve m.x = b exactly; returns a solution vector or None when the
    system is infeasible. Dimension mismatch raises ValueError."""
    work = _as_matrix(m)
    rhs = [Fraction(v) for v in b]
    if len(rhs) != len(work):
        raise ValueError("right-hand side length != number of rows")
    if not work:
        return []
    cols = len(work[0])
    aug = [row + [val] for row, val in zip(work, rhs)]
    pivots = _row_echelon(aug)
    if pivots and pivots[-1] == cols:
        return None  # pivot in the augmented column: inconsistent
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = aug[r][cols]
    return x


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((Fraction(a) * Fraction(x) for a, x in zip(row, v)), Fraction(0)) for row in m]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    return [
        [
            sum((Fraction(a[i][k]) * Fraction(b[k][j]) for k in range(len(b))), Fraction(0))
            for j in range(len(b[0]))
        ]
        for i in range(len(a))
    ]


def mat_inverse(m: Sequence[Sequence]) -> Optional[list]:
    """Exact inverse of a square rational matrix, or None if singular."""
    n = len(m)
    work = _as_matrix(m)
    if any(len(row) != n for row in work):
        raise ValueError("matrix is not square")
    aug = [row + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(work)]
    pivots = _row_echelon(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in aug]


def poly_matrix_det(m: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of Poly, by Laplace expansion with
    memoised minors (fine for the small ranks used here)."""
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    base_dim = m[0][0].base_dim
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def minor(rows: tuple, cols: tuple) -> Poly:
        if len(rows) == 1:
            return m[rows[0]][cols[0]]
        total = Poly.zero(base_dim)
        r = rows[0]
        rest = rows[1:]
        for k, c in enumerate(cols):
            entry = m[r][c]
            if entry.is_zero():
                continue
            sub = minor(rest, cols[:k] + cols[k + 1 :])
            term = entry * sub
            total = total + (term if k % 2 == 0 else -term)
        return total

    return minor(tuple(range(n)), tuple(range(n)))
