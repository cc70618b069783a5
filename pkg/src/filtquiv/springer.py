"""The Borel moment map on pairs (r, s) with framing vectors, on the rss locus.

Points are ``(r, s, i, j)`` with r upper triangular, s lower triangular
(the dual of the Borel algebra under the trace pairing), i a column vector
``(x_1..x_n)`` and j a row vector ``(y_1..y_n)``.  The moment map is
``[r, s] + i j`` projected to the lower triangle.

Two arithmetic back ends share the code:

* rational points, with ``Fraction`` entries;
* symbolic points, with entries in the localization of the polynomial ring
  at the differences ``r_ii - r_jj`` (``Local``).

Indices in the public functions are 1-based.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import Monomial, Polynomial, Variable, as_poly, monomial_str, substitute, var


class NotRSSError(ValueError):
    """Diagonal entries of r are not pairwise distinct."""


# ---------------------------------------------------------------------------
# localization at the differences of diagonal entries


def r_var(i: int, j: int) -> Polynomial:
    return var("r", i, j)


def _diff(i: int, j: int) -> Polynomial:
    return r_var(i, i) - r_var(j, j)


class Local:
    """``num / Π (r_ii - r_jj)^e`` over pairs i < j."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = as_poly(num)
        self.den = Counter({k: e for k, e in (den or {}).items() if e})

    @classmethod
    def inv_diff(cls, i: int, j: int) -> "Local":
        """1 / (r_ii - r_jj)."""
        if i == j:
            raise NotRSSError("r_ii - r_ii is zero")
        if i < j:
            return cls(1, {(i, j): 1})
        return cls(-1, {(j, i): 1})

    @staticmethod
    def _coerce(x) -> "Local":
        return x if isinstance(x, Local) else Local(x)

    def den_poly(self) -> Polynomial:
        out = Polynomial.constant(1)
        for (i, j), e in sorted(self.den.items()):
            out = out * _diff(i, j) ** e
        return out

    def _lift(self, den: Counter) -> Polynomial:
        extra = Polynomial.constant(1)
        for (i, j), e in den.items():
            missing = e - self.den.get((i, j), 0)
            if missing:
                extra = extra * _diff(i, j) ** missing
        return self.num * extra

    def __add__(self, other):
        other = Local._coerce(other)
        den = self.den | other.den
        return Local(self._lift(den) + other._lift(den), den)

    __radd__ = __add__

    def __neg__(self):
        return Local(-self.num, self.den)

    def __sub__(self, other):
        return self + (-Local._coerce(other))

    def __rsub__(self, other):
        return Local._coerce(other) - self

    def __mul__(self, other):
        other = Local._coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return Local(0)
        return Local(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        try:
            return (self - Local._coerce(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        raise TypeError("Local is unhashable")

    def evaluate(self, point) -> Fraction:
        from .poly import evaluate
        d = evaluate(self.den_poly(), point)
        if d == 0:
            raise NotRSSError("a denominator vanishes at this point")
        return evaluate(self.num, point) / d

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        factors = [f"(r{i}{i} - r{j}{j})" + (f"^{e}" if e > 1 else "")
                   for (i, j), e in sorted(self.den.items())]
        dens = factors[0] if len(factors) == 1 else "(" + "*".join(factors) + ")"
        num = str(self.num) if len(self.num) == 1 else f"({self.num})"
        return f"{num}/{dens}"

    __repr__ = __str__


class RationalField:
    symbolic = False

    def const(self, c):
        return Fraction(c)

    def inv_diff(self, r, a: int, b: int):
        d = r[a][a] - r[b][b]
        if d == 0:
            raise NotRSSError(f"r_{a + 1}{a + 1} = r_{b + 1}{b + 1}")
        return 1 / d

    def inv_checked(self, x, r, pairs):
        """1/x, where x should equal Π (r_aa - r_bb) over ``pairs``."""
        if x == 0:
            raise NotRSSError("r has repeated diagonal entries")
        return 1 / Fraction(x)


class LocalField:
    symbolic = True

    def const(self, c):
        return Local(c)

    def inv_diff(self, r, a: int, b: int):
        return Local.inv_diff(a + 1, b + 1)

    def inv_checked(self, x, r, pairs):
        expected = Local(1)
        inv = Local(1)
        for a, b in pairs:
            expected = expected * Local(_diff(a + 1, b + 1))
            inv = inv * Local.inv_diff(a + 1, b + 1)
        if not (x - expected).is_zero():
            raise ArithmeticError(f"expected a product of diagonal differences, got {x}")
        return inv


RATIONAL = RationalField()
LOCAL = LocalField()


# ---------------------------------------------------------------------------
# generic matrix helpers over either back end


def _zeros(n: int, m: int, F) -> list:
    return [[F.const(0) for _ in range(m)] for _ in range(n)]


def _identity(n: int, F) -> list:
    return [[F.const(int(a == b)) for b in range(n)] for a in range(n)]


def _mm(a: list, b: list, F) -> list:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = _zeros(n, m, F)
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if not x:
                continue
            for j in range(m):
                y = b[t][j]
                if y:
                    out[i][j] = out[i][j] + x * y
    return out


def _sub(a: list, b: list) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _trace(a: list, F):
    out = F.const(0)
    for k in range(len(a)):
        out = out + a[k][k]
    return out


def _scale(a: list, c) -> list:
    return [[x * c for x in row] for row in a]


def field_of(m: list):
    for row in m:
        for x in row:
            if isinstance(x, Local):
                return LOCAL
    return RATIONAL


def check_rss(r: list, F=None) -> None:
    F = F or field_of(r)
    n = len(r)
    if F.symbolic:
        diag = [r[k][k] for k in range(n)]
        for k, d in enumerate(diag):
            if d.den or d.num != r_var(k + 1, k + 1):
                raise NotRSSError("symbolic r must carry its own diagonal variables r_kk")
        return
    seen = set()
    for k in range(n):
        if r[k][k] in seen:
            raise NotRSSError(f"diagonal entry {r[k][k]} repeats")
        seen.add(r[k][k])


def _is_upper(r: list) -> bool:
    return all(not r[a][b] for a in range(len(r)) for b in range(a))


# ---------------------------------------------------------------------------
# points


@dataclass
class MomentPoint:
    r: list
    s: list
    x: list
    y: list

    def __post_init__(self):
        n = len(self.r)
        if any(len(row) != n for row in self.r) or len(self.s) != n or any(len(row) != n for row in self.s):
            raise ValueError("r and s must be n x n")
        if len(self.x) != n or len(self.y) != n:
            raise ValueError("i and j need n entries")
        if not _is_upper(self.r):
            raise ValueError("r must be upper triangular")
        if any(self.s[a][b] for a in range(n) for b in range(a + 1, n)):
            raise ValueError("s must be lower triangular")

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def field(self):
        return field_of([self.r[0] + self.s[0] + list(self.x) + list(self.y)] + self.r + self.s)

    @classmethod
    def rational(cls, r, s=None, x=None, y=None) -> "MomentPoint":
        n = len(r)
        fr = [[Fraction(v) for v in row] for row in r]
        fs = [[Fraction(v) for v in row] for row in s] if s is not None else _zeros(n, n, RATIONAL)
        fx = [Fraction(v) for v in x] if x is not None else [Fraction(0)] * n
        fy = [Fraction(v) for v in y] if y is not None else [Fraction(0)] * n
        return cls(fr, fs, fx, fy)

    @classmethod
    def symbolic(cls, n: int, s: bool = True, framing: bool = True) -> "MomentPoint":
        """General point with entries r_ab (a <= b), s_ab (a >= b), x_a, y_a."""
        r = [[Local(r_var(a, b)) if a <= b else Local(0) for b in range(1, n + 1)] for a in range(1, n + 1)]
        ss = [[Local(var("s", a, b)) if (s and a >= b) else Local(0) for b in range(1, n + 1)]
              for a in range(1, n + 1)]
        xs = [Local(var(f"x{a}")) if framing else Local(0) for a in range(1, n + 1)]
        ys = [Local(var(f"y{a}")) if framing else Local(0) for a in range(1, n + 1)]
        return cls(r, ss, xs, ys)


def project_lower(m: list, F) -> list:
    n = len(m)
    return [[m[a][b] if a >= b else F.const(0) for b in range(n)] for a in range(n)]


def moment_b(p: MomentPoint) -> list:
    """``[r, s] + i j`` with the strictly upper part dropped."""
    F = p.field
    n = p.n
    rs = _mm(p.r, p.s, F)
    sr = _mm(p.s, p.r, F)
    ij = [[p.x[a] * p.y[b] for b in range(n)] for a in range(n)]
    full = [[rs[a][b] - sr[a][b] + ij[a][b] for b in range(n)] for a in range(n)]
    return project_lower(full, F)


def act(b: list, p: MomentPoint) -> MomentPoint:
    """(b r b⁻¹, lower part of b s b⁻¹, b i, j b⁻¹) for rational upper triangular b."""
    from . import linalg
    F = p.field
    n = p.n
    bq = [[Fraction(v) for v in row] for row in b]
    if not _is_upper(bq):
        raise ValueError("b must be upper triangular")
    binv = linalg.inverse(bq)
    B = [[F.const(v) for v in row] for row in bq]
    Binv = [[F.const(v) for v in row] for row in binv]
    r = _mm(_mm(B, p.r, F), Binv, F)
    s = project_lower(_mm(_mm(B, p.s, F), Binv, F), F)
    x = [row[0] for row in _mm(B, [[v] for v in p.x], F)]
    y = _mm([list(p.y)], Binv, F)[0]
    r = [[r[a][c] if a <= c else F.const(0) for c in range(n)] for a in range(n)]
    return MomentPoint(r, s, x, y)


# ---------------------------------------------------------------------------
# the projections L^ι


def l_operator(r: list, iota: int) -> list:
    """``Π_{k≠ι}(r - r_kk) / tr(Π_{k≠ι}(r - r_kk))``."""
    F = field_of(r)
    check_rss(r, F)
    n = len(r)
    a = iota - 1
    prod = _identity(n, F)
    for k in range(n):
        if k == a:
            continue
        shifted = [[r[u][v] - (r[k][k] if u == v else F.const(0)) for v in range(n)] for u in range(n)]
        prod = _mm(prod, shifted, F)
    inv = F.inv_checked(_trace(prod, F), r, [(a, k) for k in range(n) if k != a])
    return _scale(prod, inv)


def _chain_sum(r: list, iota: int, lo: int, hi: int, left: bool, F):
    """Sum over chains lo < c_1 < ... < hi of the edge products over node factors.

    On the left of ι (hi == ι) the nodes are lo and the interior points; on the
    right (lo == ι) they are the interior points and hi.
    """
    if lo == hi:
        return F.const(1)
    total = F.const(0)
    inner = range(lo + 1, hi)
    for size in range(len(inner) + 1):
        for mid in itertools.combinations(inner, size):
            nodes = (lo,) + mid + (hi,)
            term = F.const(1)
            for u, v in zip(nodes, nodes[1:]):
                term = term * r[u][v]
            weighted = nodes[:-1] if left else nodes[1:]
            for w in weighted:
                term = term * F.inv_diff(r, iota, w)
            total = total + term
    return total


def l_closed_form(r: list, iota: int) -> list:
    """Entrywise formula for L^ι: left chains into ι times right chains out of ι."""
    F = field_of(r)
    check_rss(r, F)
    n = len(r)
    a = iota - 1
    out = _zeros(n, n, F)
    for g in range(a + 1):
        left = _chain_sum(r, a, g, a, True, F)
        if not left:
            continue
        for m in range(a, n):
            out[g][m] = left * _chain_sum(r, a, a, m, False, F)
    return out


def diagonalizer(r: list) -> list:
    """Upper unitriangular b with b r b⁻¹ = diag(r): row ι of b is row ι of L^ι."""
    n = len(r)
    return [l_operator(r, k + 1)[k] for k in range(n)]


def diagonalizer_inverse(r: list) -> list:
    """Column γ of b⁻¹ is column γ of L^γ."""
    n = len(r)
    cols = [[row[k] for row in l_operator(r, k + 1)] for k in range(n)]
    return [[cols[c][a] for c in range(n)] for a in range(n)]


def _det(m: list, F):
    """Laplace expansion along the first column; fine for the small sizes used here."""
    n = len(m)
    if n == 0:
        return F.const(1)
    total = F.const(0)
    for k in range(n):
        if not m[k][0]:
            continue
        minor = [row[1:] for t, row in enumerate(m) if t != k]
        term = m[k][0] * _det(minor, F)
        total = total + term if k % 2 == 0 else total - term
    return total


def l_determinant(r: list, iota: int):
    """det L^ι; it is 0 for n >= 2 because the rows below ι vanish."""
    F = field_of(r)
    return _det(l_operator(r, iota), F)


# ---------------------------------------------------------------------------
# invariant functions


@dataclass
class InvariantValues:
    F: list
    G: list
    H: list
    K: dict = field(default_factory=dict)


def invariant_functions(p: MomentPoint) -> InvariantValues:
    F_ = p.field
    n = p.n
    Ls = [l_operator(p.r, k + 1) for k in range(n)]
    Fs, Gs, Hs = [], [], []
    for L in Ls:
        Li = _mm(L, [[v] for v in p.x], F_)
        Fs.append(_mm([list(p.y)], Li, F_)[0][0])
        Gs.append(_trace(_mm(L, p.s, F_), F_))
        Hs.append(_trace(_mm(L, p.r, F_), F_))
    K = {}
    for g in range(n):
        for v in range(n):
            if g != v:
                t = _trace(_mm(_sub(Ls[v], Ls[g]), p.r, F_), F_)
                K[(g + 1, v + 1)] = F_.inv_checked(t, p.r, [(v, g)])
    return InvariantValues(Fs, Gs, Hs, K)


def framing_form(p: MomentPoint, iota: int):
    """j L^ι i."""
    F_ = p.field
    L = l_operator(p.r, iota)
    return _mm([list(p.y)], _mm(L, [[v] for v in p.x], F_), F_)[0][0]


def solve_subdiagonals(r: list, x: Sequence, y: Sequence, diag_s: Sequence) -> list:
    """Lower triangular s with the strictly lower moment entries zero.

    Works from the farthest subdiagonal inward, each entry solved from the
    entry (ι, γ) of ``[r, s] + i j``.
    """
    F = field_of([list(r[0]) + list(x) + list(y) + list(diag_s)] + list(r))
    check_rss(r, F)
    n = len(r)
    s = _zeros(n, n, F)
    for k in range(n):
        s[k][k] = F.const(0) + diag_s[k]
    for level in range(n - 1, 0, -1):
        for g in range(n - level):
            a = g + level
            acc = x[a] * y[g]
            for k in range(a + 1, n):
                acc = acc + r[a][k] * s[k][g]
            for k in range(g):
                acc = acc - s[a][k] * r[k][g]
            s[a][g] = acc * F.inv_diff(r, g, a)
    return s


# ---------------------------------------------------------------------------
# z-coordinates and the monomial order


def z_name(i: int, j: int, k: int, l: int) -> str:
    """Variable standing for r_kl / (r_ii - r_jj)."""
    return f"z{i}{j}_{k}{l}"


def z_var(i: int, j: int, k: int, l: int) -> Polynomial:
    return var(z_name(i, j, k, l))


def z_value(name: str) -> Local:
    i, j, k, l = (int(c) for c in name[1:3] + name[4:6])
    return Local(r_var(k, l)) * Local.inv_diff(i, j)


def _z_chain_sum(n: int, iota: int, lo: int, hi: int, left: bool) -> Polynomial:
    if lo == hi:
        return Polynomial.constant(1)
    total = Polynomial.constant(0)
    inner = range(lo + 1, hi)
    for size in range(len(inner) + 1):
        for mid in itertools.combinations(inner, size):
            nodes = (lo,) + mid + (hi,)
            term = Polynomial.constant(1)
            for u, v in zip(nodes, nodes[1:]):
                node = u if left else v
                term = term * z_var(iota, node, u, v)
            total = total + term
    return total


def f_z_form(n: int, iota: int) -> Polynomial:
    """F_ι = j L^ι i as a polynomial in x, y and the z-coordinates."""
    total = Polynomial.constant(0)
    for g in range(1, iota + 1):
        left = _z_chain_sum(n, iota, g, iota, True)
        for m in range(iota, n + 1):
            right = _z_chain_sum(n, iota, iota, m, False)
            total = total + var(f"y{g}") * var(f"x{m}") * left * right
    return total


def z_to_local(p: Polynomial) -> Local:
    """Replace each z-coordinate by its value r_kl / (r_ii - r_jj)."""
    out = Local(0)
    for mono, c in p.items():
        term = Local(c)
        for v, e in mono:
            base = z_value(v.label) if v.label.startswith("z") else Local(Polynomial.var(v))
            for _ in range(e):
                term = term * base
        out = out + term
    return out


@dataclass(frozen=True)
class OrderedMonomialSpec:
    """Lex order on x_1 > ... > x_n > y_n > ... > y_1; other variables are order-neutral."""

    n: int

    @property
    def priority(self) -> tuple:
        return tuple(Variable.scalar(f"x{k}") for k in range(1, self.n + 1)) + \
            tuple(Variable.scalar(f"y{k}") for k in range(self.n, 0, -1))

    def key(self, m: Monomial) -> tuple:
        exps = dict(m)
        return tuple(exps.get(v, 0) for v in self.priority)

    def restrict(self, m: Monomial) -> Monomial:
        pr = set(self.priority)
        return tuple((v, e) for v, e in m if v in pr)

    def check_multiplicative(self, a: Monomial, b: Monomial, c: Monomial) -> bool:
        """a > b implies ac > bc (lex on exponent vectors)."""
        from .poly import monomial_mul
        if self.key(a) <= self.key(b):
            return True
        return self.key(monomial_mul(a, c)) > self.key(monomial_mul(b, c))


def initial_term(f: Polynomial, spec: OrderedMonomialSpec) -> Monomial:
    if f.is_zero():
        raise ValueError("the zero polynomial has no initial term")
    best = max((m for m, _ in f.items()), key=spec.key)
    return spec.restrict(best)


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    monomials: tuple

    def __str__(self) -> str:
        body = ", ".join(monomial_str(m) for m in self.monomials)
        return f"{'coprime' if self.regular else 'not coprime'}: {{{body}}}"


def initial_terms_regular(items: Sequence, spec: OrderedMonomialSpec | None = None) -> RegularityReport:
    """Pairwise coprime initial monomials certify a regular sequence."""
    monos = []
    for it in items:
        if isinstance(it, Polynomial):
            if spec is None:
                raise ValueError("polynomials need a monomial order")
            monos.append(initial_term(it, spec))
        else:
            monos.append(tuple(it))
    ok = True
    for a, b in itertools.combinations(monos, 2):
        if {v for v, _ in a} & {v for v, _ in b}:
            ok = False
    return RegularityReport(ok, tuple(monos))


# ---------------------------------------------------------------------------
# n = 2 identities


@dataclass
class IdentityReport:
    residuals: dict
    forced: list
    residual_system: list

    @property
    def ok(self) -> bool:
        return all(p.is_zero() for p in self.residuals.values())


def n2_identities() -> IdentityReport:
    r11, r12, r22 = var("r", 1, 1), var("r", 1, 2), var("r", 2, 2)
    s11, s21, s22 = var("s", 1, 1), var("s", 2, 1), var("s", 2, 2)
    f = (r11 - r22) * s11 + r12 * s21
    g = (r11 - r22) * s22 - r12 * s21
    h = r11 * s11 + r22 * s22 + r12 * s21
    k = r11 * s22 + r22 * s11 - r12 * s21
    residuals = {
        "f - g - h + k": f - g - h + k,
        "g - r11(s11 + s22) + h": g - r11 * (s11 + s22) + h,
        "f + g + (r22 - r11)(s11 + s22)": f + g + (r22 - r11) * (s11 + s22),
    }
    R1, S1, R2, S2, T = (var(n) for n in ("R1", "S1", "R2", "S2", "T"))
    psi = -2 * T ** 2 + 2 * R1 * S1 * T + 2 * R2 * S2 - S2 * R1 ** 2 - R2 * S1 ** 2
    images = {
        Variable.scalar("R1"): r11 + r22, Variable.scalar("S1"): s11 + s22,
        Variable.scalar("R2"): r11 ** 2 + r22 ** 2, Variable.scalar("S2"): s11 ** 2 + s22 ** 2,
        Variable.scalar("T"): r11 * s11 + r22 * s22,
    }
    residuals["symmetric square relation"] = substitute(psi, images)
    phi = R1 * (S1 + S2 + (R2 - R1) * T)
    grads = [phi.partial(Variable.scalar(n)) for n in ("R1", "S1", "R2", "S2", "T")]
    # a partial that is a scalar multiple of a variable forces that variable to vanish
    forced = sorted({v for g in grads for v in g.variables()
                     if len(g) == 1 and g.degree() == 1}, key=str)
    zero = {v: 0 for v in forced}
    rest = []
    for g in grads:
        q = substitute(g, zero)
        if not q.is_zero() and not any(_proportional(q, e) for e in rest):
            rest.append(q)
    return IdentityReport(residuals, [Polynomial.var(v) for v in forced], rest)


def _proportional(p: Polynomial, q: Polynomial) -> bool:
    (m, c) = p.sorted_terms()[0]
    d = q.coefficient(m)
    return bool(d) and p.scale(d) == q.scale(c)


# ---------------------------------------------------------------------------
# one-parameter limits


@dataclass
class TorusLimit:
    exists: bool
    point: MomentPoint | None
    blocking: list

    def __str__(self) -> str:
        if self.exists:
            return "limit exists"
        return "no limit: " + ", ".join(self.blocking)


def torus_limit(p: MomentPoint, exponents: Sequence[int]) -> TorusLimit:
    """Limit as t -> 0 of diag(t^{a_ι}) acting on a rational point.

    r_ιγ and s_ιγ scale by t^{a_ι - a_γ}, x_ι by t^{a_ι}, y_ι by t^{-a_ι}.
    """
    n = p.n
    a = list(exponents)
    if len(a) != n:
        raise ValueError(f"need {n} exponents")
    blocking = []

    def lim(value, e, name):
        if not value:
            return value
        if e < 0:
            blocking.append(name)
            return value
        return value if e == 0 else value * 0

    r = [[lim(p.r[u][v], a[u] - a[v], f"r{u + 1}{v + 1}") for v in range(n)] for u in range(n)]
    s = [[lim(p.s[u][v], a[u] - a[v], f"s{u + 1}{v + 1}") for v in range(n)] for u in range(n)]
    x = [lim(p.x[u], a[u], f"x{u + 1}") for u in range(n)]
    y = [lim(p.y[u], -a[u], f"y{u + 1}") for u in range(n)]
    if blocking:
        return TorusLimit(False, None, blocking)
    return TorusLimit(True, MomentPoint(r, s, x, y), [])


def recipe_exponents(p: MomentPoint) -> list:
    """+1 where x_ι ≠ 0, -1 where y_ι ≠ 0, else 0 (needs x_ι y_ι = 0)."""
    out = []
    for k in range(p.n):
        if p.x[k] and p.y[k]:
            raise ValueError(f"x{k + 1} and y{k + 1} are both nonzero")
        out.append(1 if p.x[k] else (-1 if p.y[k] else 0))
    return out


__all__ = [
    "Local", "MomentPoint", "NotRSSError", "moment_b", "act", "l_operator", "l_closed_form",
    "diagonalizer", "diagonalizer_inverse", "l_determinant", "invariant_functions",
    "InvariantValues", "framing_form", "solve_subdiagonals", "f_z_form", "z_to_local",
    "OrderedMonomialSpec", "initial_term", "initial_terms_regular", "RegularityReport",
    "n2_identities", "IdentityReport", "torus_limit", "TorusLimit", "recipe_exponents",
    "check_rss", "project_lower",
]
