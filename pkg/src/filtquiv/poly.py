"""Exact multivariate polynomials over the rationals.

A polynomial is a sparse map from monomials to nonzero ``Fraction``
coefficients.  Monomials are sorted tuples of ``(Variable, exponent)`` pairs,
so two polynomials are equal exactly when their term maps are equal.

Variables are ordered by ``(kind, label, row, col)``: matrix entries come
before named scalars, labels compare as strings, and indices compare as
integers.  This order fixes the printed form of every polynomial.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

MATRIX_ENTRY = 0
SCALAR = 1

# largest symbolic matrix handed to cofactor expansion
MAX_SYMBOLIC_DET = 8


class Variable(NamedTuple):
    """A polynomial indeterminate.

    Matrix entries carry the label of the matrix they live in (usually an
    arrow id) and 1-based row/column indices; scalars carry only a name.
    """

    kind: int
    label: str
    row: int = 0
    col: int = 0

    @classmethod
    def entry(cls, label: str, row: int, col: int) -> "Variable":
        if row < 1 or col < 1:
            raise ValueError(f"matrix indices are 1-based, got ({row}, {col})")
        return cls(MATRIX_ENTRY, str(label), int(row), int(col))

    @classmethod
    def scalar(cls, name: str) -> "Variable":
        if not name:
            raise ValueError("scalar variables need a nonempty name")
        return cls(SCALAR, str(name))

    @property
    def is_entry(self) -> bool:
        return self.kind == MATRIX_ENTRY

    def __str__(self) -> str:
        if self.kind == SCALAR:
            return self.label
        if self.row < 10 and self.col < 10:
            return f"{self.label}{self.row}{self.col}"
        return f"{self.label}_{self.row}_{self.col}"

    def __repr__(self) -> str:
        return f"Variable({self})"


Monomial = tuple  # tuple[tuple[Variable, int], ...], sorted by variable
Scalar = Union[int, Fraction]

ONE_MONOMIAL: Monomial = ()


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged = dict(m1)
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_from(exponents: Mapping[Variable, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exponents.items() if e))


def monomial_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _sort_key(m: Monomial):
    # higher degree first, then lexicographic in the variable order
    return (-monomial_degree(m), m)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return cls._raw({ONE_MONOMIAL: c} if c else {})

    @classmethod
    def var(cls, v: Variable) -> "Polynomial":
        return cls._raw({((v, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls({m: c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def variables(self) -> set:
        out = set()
        for m in self._terms:
            out.update(v for v, _ in m)
        return out

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max(monomial_degree(m) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self._terms}) <= 1

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        if isinstance(other, Variable):
            return Polynomial.var(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Polynomial._raw({})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = monomial_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                raise ZeroDivisionError("division of a polynomial by zero")
            return Polynomial._raw({m: c / other for m, c in self._terms.items()})
        if isinstance(other, Polynomial) and other.is_constant():
            return self / other.constant_value()
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({m: c * v for m, v in self._terms.items()})

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- rendering -----------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: _sort_key(t[0]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if not m:
                body = str(a)
            elif a == 1:
                body = monomial_str(m)
            else:
                body = f"{a}*{monomial_str(m)}"
            if idx == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    # -- calculus and substitution -------------------------------------------
    def partial(self, v: Variable) -> "Polynomial":
        out: dict = {}
        for m, c in self._terms.items():
            for idx, (w, e) in enumerate(m):
                if w == v:
                    rest = m[:idx] + (((w, e - 1),) if e > 1 else ()) + m[idx + 1:]
                    out[rest] = out.get(rest, 0) + c * e
                    break
        return Polynomial(out)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self._terms.items() if monomial_degree(m) == d})


PolyLike = Union[Polynomial, int, Fraction, Variable]


def as_poly(x: PolyLike) -> Polynomial:
    p = Polynomial._coerce(x)
    if p is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a polynomial")
    return p


def var(label: str, row: int | None = None, col: int | None = None) -> Polynomial:
    """Shorthand: ``var('a', 1, 2)`` is the entry a12, ``var('t')`` a scalar."""
    if row is None:
        return Polynomial.var(Variable.scalar(label))
    return Polynomial.var(Variable.entry(label, row, col))


ZERO = Polynomial.constant(0)
ONE = Polynomial.constant(1)


def add(p: PolyLike, q: PolyLike) -> Polynomial:
    return as_poly(p) + as_poly(q)


def mul(p: PolyLike, q: PolyLike) -> Polynomial:
    return as_poly(p) * as_poly(q)


def coefficients_wrt(p: Polynomial, variables: Iterable[Variable]) -> dict:
    """Group ``p`` by monomials in ``variables``.

    Returns ``{monomial in variables: coefficient polynomial}``; the
    coefficients are free of the grouping variables and
    ``p == sum(monomial * coefficient)``.
    """
    chosen = set(variables)
    groups: dict = {}
    for m, c in p.items():
        inside = tuple((v, e) for v, e in m if v in chosen)
        outside = tuple((v, e) for v, e in m if v not in chosen)
        groups.setdefault(inside, {})[outside] = c
    return {k: Polynomial(v) for k, v in groups.items()}


def substitute(p: Polynomial, images: Mapping[Variable, PolyLike]) -> Polynomial:
    """Ring homomorphism sending each mapped variable to its image."""
    imgs = {v: as_poly(q) for v, q in images.items()}
    powers: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in powers:
            powers[key] = imgs[v] ** e
        return powers[key]

    out = Polynomial._raw({})
    for m, c in p.items():
        kept = []
        term = Polynomial.constant(c)
        for v, e in m:
            if v in imgs:
                term = term * power(v, e)
            else:
                kept.append((v, e))
        if kept:
            term = term * Polynomial._raw({tuple(kept): Fraction(1)})
        out = out + term
    return out


def derive(p: Polynomial, direction: Mapping[Variable, PolyLike]) -> Polynomial:
    """Directional derivation: sum over v of (dp/dv) * direction[v]."""
    out = Polynomial._raw({})
    present = p.variables()
    for v, q in direction.items():
        if v in present:
            out = out + p.partial(v) * as_poly(q)
    return out


class UnboundVariableError(KeyError):
    def __init__(self, v: Variable):
        super().__init__(str(v))
        self.variable = v

    def __str__(self) -> str:
        return f"no value given for variable {self.variable}"


def evaluate(p: Polynomial, point: Mapping[Variable, Scalar]) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        val = c
        for v, e in m:
            if v not in point:
                raise UnboundVariableError(v)
            val *= Fraction(point[v]) ** e
        total += val
    return total


# ---------------------------------------------------------------------------
# symbolic matrices


@dataclass(frozen=True)
class SymbolicMatrix:
    """A rows x cols grid of polynomials, indexed from 0 internally."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[PolyLike]], cols: int | None = None) -> "SymbolicMatrix":
        grid = tuple(tuple(as_poly(x) for x in r) for r in rows)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        return cls(len(grid), cols, grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SymbolicMatrix":
        return cls(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "SymbolicMatrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def general(cls, label: str, rows: int, cols: int, pattern=None) -> "SymbolicMatrix":
        """Matrix of fresh entry variables ``label_rc``; ``pattern[r][c]`` False gives 0."""
        grid = []
        for r in range(rows):
            row = []
            for c in range(cols):
                if pattern is None or pattern[r][c]:
                    row.append(Polynomial.var(Variable.entry(label, r + 1, c + 1)))
                else:
                    row.append(ZERO)
            grid.append(tuple(row))
        return cls(rows, cols, tuple(grid))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, rc) -> Polynomial:
        r, c = rc
        return self.entries[r][c]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in range(self.rows):
            row = []
            for c in range(other.cols):
                acc = ZERO
                for k in range(self.cols):
                    a = self.entries[r][k]
                    if a:
                        b = other.entries[k][c]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return SymbolicMatrix(self.rows, other.cols, tuple(out))

    def _zip(self, other, op) -> "SymbolicMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return SymbolicMatrix(self.rows, self.cols, tuple(
            tuple(op(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.map(lambda a: -a)

    def scale(self, c: PolyLike) -> "SymbolicMatrix":
        c = as_poly(c)
        return self.map(lambda a: a * c)

    def map(self, fn) -> "SymbolicMatrix":
        return SymbolicMatrix(self.rows, self.cols, tuple(tuple(fn(a) for a in r) for r in self.entries))

    def transpose(self) -> "SymbolicMatrix":
        return SymbolicMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols)))

    def minor(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "SymbolicMatrix":
        """Submatrix on 0-based row and column index lists."""
        ri, ci = list(row_idx), list(col_idx)
        for r in ri:
            if not 0 <= r < self.rows:
                raise IndexError(f"row index {r + 1} out of range 1..{self.rows}")
        for c in ci:
            if not 0 <= c < self.cols:
                raise IndexError(f"column index {c + 1} out of range 1..{self.cols}")
        return SymbolicMatrix(len(ri), len(ci), tuple(tuple(self.entries[r][c] for c in ci) for r in ri))

    def trace(self) -> Polynomial:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        acc = ZERO
        for k in range(self.rows):
            acc = acc + self.entries[k][k]
        return acc

    def is_constant(self) -> bool:
        return all(a.is_constant() for r in self.entries for a in r)

    def substitute(self, images) -> "SymbolicMatrix":
        return self.map(lambda a: substitute(a, images))

    def variables(self) -> set:
        out = set()
        for r in self.entries:
            for a in r:
                out |= a.variables()
        return out

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.entries) + "]"


def block_matrix(blocks) -> SymbolicMatrix:
    """Assemble a matrix from a grid of blocks (all blocks in a row share a height)."""
    rows = []
    for brow in blocks:
        heights = {b.rows for b in brow}
        if len(heights) != 1:
            raise ValueError("blocks in one block row must have equal heights")
        for r in range(brow[0].rows):
            rows.append(tuple(x for b in brow for x in b.entries[r]))
    widths = [b.cols for b in blocks[0]] if blocks else []
    for brow in blocks:
        if [b.cols for b in brow] != widths:
            raise ValueError("blocks in one block column must have equal widths")
    return SymbolicMatrix(len(rows), sum(widths), tuple(rows))


def _constant_det(m: SymbolicMatrix) -> Fraction:
    n = m.rows
    a = [[x.constant_value() for x in r] for r in m.entries]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


class MatrixTooLargeError(ValueError):
    pass


def determinant(m: SymbolicMatrix) -> Polynomial:
    """Exact determinant.

    Variable-free matrices use rational elimination.  Symbolic matrices use
    Laplace expansion along rows with memoized minors (keyed by the set of
    remaining columns) and are limited to MAX_SYMBOLIC_DET rows.
    """
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return ONE
    if m.is_constant():
        return Polynomial.constant(_constant_det(m))
    if n > MAX_SYMBOLIC_DET:
        raise MatrixTooLargeError(
            f"symbolic determinant of size {n} exceeds the limit {MAX_SYMBOLIC_DET}")
    e = m.entries
    memo: dict = {}

    def minor_det(cols: tuple) -> Polynomial:
        k = n - len(cols)
        if k == n:
            return ONE
        if cols in memo:
            return memo[cols]
        acc = ZERO
        for pos, c in enumerate(cols):
            a = e[k][c]
            if not a:
                continue
            sub = minor_det(cols[:pos] + cols[pos + 1:])
            if not sub:
                continue
            term = a * sub
            acc = acc - term if pos % 2 else acc + term
        memo[cols] = acc
        return acc

    return minor_det(tuple(range(n)))


# ---------------------------------------------------------------------------
# text input


class PolynomialSyntaxError(ValueError):
    pass


def parse_polynomial(text: str, names: Mapping[str, Variable] | None = None,
                     allow_new_scalars: bool = False) -> Polynomial:
    """Parse ``+ - * ^ **`` expressions with integer and rational literals.

    Identifiers are looked up in ``names`` (typically ``{str(v): v}`` for the
    variables of a representation space).  Unknown identifiers are an error
    unless ``allow_new_scalars`` is set, in which case they become scalars.
    """
    names = dict(names or {})
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        where = f" at column {exc.offset}" if exc.offset else ""
        raise PolynomialSyntaxError(f"cannot parse polynomial{where}: {text!r}") from None

    def walk(node) -> Polynomial:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                exp = walk(node.right)
                if not exp.is_constant() or exp.constant_value().denominator != 1 or exp.constant_value() < 0:
                    raise PolynomialSyntaxError("exponents must be nonnegative integers")
                return left ** int(exp.constant_value())
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or not right.constant_value():
                    raise PolynomialSyntaxError("division only by nonzero constants")
                return left / right.constant_value()
            raise PolynomialSyntaxError(f"unsupported operator {type(node.op).__name__}")
        if isinstance(node, ast.UnaryOp):
            inner = walk(node.operand)
            if isinstance(node.op, ast.USub):
                return -inner
            if isinstance(node.op, ast.UAdd):
                return inner
            raise PolynomialSyntaxError("unsupported unary operator")
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Polynomial.constant(node.value)
        if isinstance(node, ast.Name):
            if node.id in names:
                return Polynomial.var(names[node.id])
            if allow_new_scalars:
                return Polynomial.var(Variable.scalar(node.id))
            raise PolynomialSyntaxError(
                f"unknown variable {node.id!r} at column {node.col_offset + 1}")
        raise PolynomialSyntaxError(f"unsupported expression element at column {getattr(node, 'col_offset', 0) + 1}")

    return walk(tree)


def all_monomials(variables: list, degree: int) -> list:
    """Monomials of exactly ``degree`` in ``variables`` (sorted input order)."""
    vs = sorted(variables)
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(monomial_from(acc))
            return
        for k in range(start, len(vs)):
            acc[vs[k]] = acc.get(vs[k], 0) + 1
            rec(k, remaining - 1, acc)
            acc[vs[k]] -= 1
            if not acc[vs[k]]:
                del acc[vs[k]]

    rec(0, degree, {})
    return out


__all__ = [
    "Variable", "Polynomial", "SymbolicMatrix", "Monomial", "MATRIX_ENTRY", "SCALAR",
    "ZERO", "ONE", "add", "mul", "var", "as_poly", "coefficients_wrt", "substitute",
    "derive", "evaluate", "determinant", "block_matrix", "parse_polynomial",
    "monomial_mul", "monomial_degree", "monomial_from", "monomial_str", "all_monomials",
    "UnboundVariableError", "MatrixTooLargeError", "PolynomialSyntaxError",
]
