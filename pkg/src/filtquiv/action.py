"""Change-of-basis group actions, invariance checks and invariant spaces.

A group element assigns an invertible matrix to every unframed vertex and
acts on a representation by ``W(a) -> g_ha W(a) g_ta^{-1}``.  On functions
the action is ``(g.f)(W) = f(g^{-1}.W)``.

Unipotent invariance is certified by the elementary root subgroups
``1 + u E_ij`` with a symbolic parameter ``u``.  Invariant spaces of bounded
degree are computed as kernels of the matching derivations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from . import linalg
from .poly import (ONE, ZERO, Polynomial, SymbolicMatrix, Variable, all_monomials,
                   derive, substitute)
from .repspace import ConcreteRep, GeneralRep, parabolic_pattern


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    """Vertex-indexed invertible matrices with their verified inverses."""

    dims: tuple
    mats: Mapping[int, SymbolicMatrix]
    inverses: Mapping[int, SymbolicMatrix]

    def __post_init__(self):
        for v, n in enumerate(self.dims, start=1):
            g = self.mats.get(v)
            h = self.inverses.get(v)
            if g is None and h is None:
                continue
            if g is None or h is None:
                raise GroupError(f"vertex {v}: a matrix and its inverse must both be given")
            if g.shape != (n, n) or h.shape != (n, n):
                raise GroupError(f"vertex {v}: expected {n}x{n} matrices")
            if g @ h != SymbolicMatrix.identity(n):
                raise GroupError(f"vertex {v}: supplied inverse does not invert the matrix")

    def at(self, v: int) -> SymbolicMatrix:
        return self.mats.get(v) or SymbolicMatrix.identity(self.dims[v - 1])

    def inverse_at(self, v: int) -> SymbolicMatrix:
        return self.inverses.get(v) or SymbolicMatrix.identity(self.dims[v - 1])

    def inverse(self) -> "GroupElement":
        return GroupElement(self.dims, dict(self.inverses), dict(self.mats))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.dims != other.dims:
            raise GroupError("group elements live over different dimension vectors")
        vs = set(self.mats) | set(other.mats)
        mats = {v: self.at(v) @ other.at(v) for v in vs}
        invs = {v: other.inverse_at(v) @ self.inverse_at(v) for v in vs}
        return GroupElement(self.dims, mats, invs)


def identity_element(dims) -> GroupElement:
    return GroupElement(tuple(dims), {}, {})


def rational_element(q, dims, mats: Mapping[int, list]) -> GroupElement:
    """Group element from rational matrices; inverses are computed exactly."""
    out, inv = {}, {}
    for v, m in mats.items():
        if q.is_framed(v):
            raise GroupError(f"vertex {v} is framed and carries no group")
        fm = linalg.frac_matrix(m)
        out[v] = SymbolicMatrix.from_rows(fm)
        inv[v] = SymbolicMatrix.from_rows(linalg.inverse(fm))
    return GroupElement(tuple(dims), out, inv)


def elementary_unipotent(space: GeneralRep, v: int, i: int, j: int, param: str = "u",
                         allow_lower: bool = False) -> GroupElement:
    """``1 + u E_ij`` at vertex v, inverse ``1 - u E_ij``.

    By default (i, j) must be strictly upper triangular.  With
    ``allow_lower`` any off-diagonal entry allowed by the stabilizer of the
    flag at v is accepted (all of them when v is unfiltered).
    """
    q = space.quiver
    if q.is_framed(v):
        raise GroupError(f"vertex {v} is framed and carries no group")
    n = space.dims[v - 1]
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise GroupError(f"({i}, {j}) is not an off-diagonal position of a {n}x{n} matrix")
    if not allow_lower and i > j:
        raise GroupError(f"({i}, {j}) is not strictly upper triangular")
    if space.filtration is not None and not parabolic_pattern(space.filtration, v)[i - 1][j - 1]:
        raise GroupError(f"({i}, {j}) lies outside the parabolic at vertex {v}")
    u = Polynomial.var(Variable.scalar(param))

    def build(sign):
        rows = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        rows[i - 1][j - 1] = u if sign > 0 else -u
        return SymbolicMatrix.from_rows(rows)

    return GroupElement(space.dims, {v: build(1)}, {v: build(-1)})


def root_positions(space: GeneralRep, include_lower: bool = False) -> list:
    """(vertex, i, j) of the elementary generators at every unframed vertex."""
    out = []
    q = space.quiver
    for v in q.vertices:
        if q.is_framed(v):
            continue
        n = space.dims[v - 1]
        pat = parabolic_pattern(space.filtration, v) if space.filtration is not None else None
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j or (i > j and not include_lower):
                    continue
                if pat is not None and not pat[i - 1][j - 1]:
                    continue
                out.append((v, i, j))
    return out


# ---------------------------------------------------------------------------
# actions


def act_on_rep(g: GroupElement, w):
    """``g_ha W(a) g_ta^{-1}`` on a general or concrete representation."""
    if isinstance(w, ConcreteRep):
        mats = {}
        for a in w.quiver.arrows:
            left = _rational(g.at(a.head))
            right = _rational(g.inverse_at(a.tail))
            m = w.mats[a.id]
            cols = w.dims[a.tail - 1]
            mats[a.id] = linalg.matmul(linalg.matmul(left, m, bcols=cols), right, bcols=cols) if m else []
        return ConcreteRep(w.quiver, w.dims, mats)
    if isinstance(w, GeneralRep):
        mats = {a.id: g.at(a.head) @ w.mats[a.id] @ g.inverse_at(a.tail) for a in w.quiver.arrows}
        return w.with_matrices(mats)
    raise TypeError("act_on_rep expects a GeneralRep or a ConcreteRep")


def _rational(m: SymbolicMatrix) -> list:
    if not m.is_constant():
        raise GroupError("a concrete representation needs a rational group element")
    return [[x.constant_value() for x in r] for r in m.entries]


class ForeignVariableError(ValueError):
    pass


def act_on_poly(g: GroupElement, f: Polynomial, space: GeneralRep) -> Polynomial:
    """``(g.f)(W) = f(g^{-1}.W)``, expanded symbolically."""
    locs = space.locations()
    stray = [v for v in f.variables() if v.is_entry and v not in locs]
    if stray:
        raise ForeignVariableError(f"variables {sorted(str(v) for v in stray)} do not belong to the space")
    moved = act_on_rep(g.inverse(), space)
    images = {}
    for v, (aid, r, c) in locs.items():
        images[v] = moved.mats[aid][r - 1, c - 1]
    return substitute(f, images)


@dataclass(frozen=True)
class InvarianceResult:
    invariant: bool
    generator: tuple | None = None
    difference: Polynomial | None = None

    def __bool__(self) -> bool:
        return self.invariant


def _fresh_param(f: Polynomial) -> str:
    names = {v.label for v in f.variables() if not v.is_entry}
    name = "u"
    k = 0
    while name in names:
        k += 1
        name = f"u{k}"
    return name


def is_unipotent_invariant(f: Polynomial, space: GeneralRep, include_lower: bool = False) -> InvarianceResult:
    """Check ``g.f == f`` for every elementary generator; report the first failure.

    ``include_lower`` also tests the lower root subgroups, which together
    with the upper ones generate the special linear groups at unfiltered
    vertices.
    """
    param = _fresh_param(f)
    for v, i, j in root_positions(space, include_lower):
        g = elementary_unipotent(space, v, i, j, param, allow_lower=include_lower)
        diff = act_on_poly(g, f, space) - f
        if not diff.is_zero():
            return InvarianceResult(False, (v, i, j), diff)
    return InvarianceResult(True)


# ---------------------------------------------------------------------------
# torus weights


@dataclass(frozen=True)
class TorusWeight:
    """Per unframed vertex, the exponent of each diagonal torus coordinate."""

    coords: tuple  # tuple of (vertex, tuple of exponents)

    def as_dict(self) -> dict:
        return dict(self.coords)

    def as_character(self) -> "Character | None":
        """Det-power character when every vertex has a uniform weight."""
        weights = []
        for v, exps in self.coords:
            if exps and len(set(exps)) != 1:
                return None
            weights.append((v, exps[0] if exps else 0))
        return Character(tuple(weights))


@dataclass(frozen=True)
class Character:
    """``prod_v det(g_v)^{m_v}``, listed as (vertex, m_v) for unframed vertices."""

    weights: tuple

    def as_dict(self) -> dict:
        return dict(self.weights)

    def values(self) -> tuple:
        return tuple(m for _, m in self.weights)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{m:+d}" if m else "0" for _, m in self.weights) + ")"


HETEROGENEOUS = "heterogeneous"


def _variable_weight(space: GeneralRep, locs) -> dict:
    """Variable -> {(vertex, coordinate): exponent} under ``f(t.W) = χ(t) f(W)``."""
    q = space.quiver
    out = {}
    for v, (aid, r, c) in locs.items():
        a = q.arrow(aid)
        w: dict = {}
        if not q.is_framed(a.head):
            w[(a.head, r)] = w.get((a.head, r), 0) + 1
        if not q.is_framed(a.tail):
            w[(a.tail, c)] = w.get((a.tail, c), 0) - 1
        out[v] = {k: e for k, e in w.items() if e}
    return out


def monomial_weight(m, vweights) -> tuple:
    acc: dict = {}
    for v, e in m:
        for k, x in vweights.get(v, {}).items():
            acc[k] = acc.get(k, 0) + e * x
    return tuple(sorted((k, x) for k, x in acc.items() if x))


def torus_weight(f: Polynomial, space: GeneralRep):
    """Weight of ``f`` under the diagonal torus, or HETEROGENEOUS.

    The zero polynomial and constants have weight zero.
    """
    vweights = _variable_weight(space, space.locations())
    seen = {monomial_weight(m, vweights) for m, _ in f.items()} or {()}
    if len(seen) != 1:
        return HETEROGENEOUS
    (w,) = seen
    wd = dict(w)
    q = space.quiver
    coords = []
    for v in q.vertices:
        if q.is_framed(v):
            continue
        coords.append((v, tuple(wd.get((v, k), 0) for k in range(1, space.dims[v - 1] + 1))))
    return TorusWeight(tuple(coords))


def is_semi_invariant(f: Polynomial, space: GeneralRep, chi: Character) -> bool:
    w = torus_weight(f, space)
    if w == HETEROGENEOUS or w.as_character() != chi:
        return False
    return bool(is_unipotent_invariant(f, space))


@dataclass(frozen=True)
class SemiInvariance:
    semi_invariant: bool
    character: Character | None
    failure: InvarianceResult | None = None

    def __bool__(self) -> bool:
        return self.semi_invariant


def is_sl_semi_invariant(f: Polynomial, space: GeneralRep) -> SemiInvariance:
    """Semi-invariance for the product of general linear groups.

    ``f`` must have a det-power torus weight and be fixed by every root
    subgroup (upper and lower), i.e. be invariant under the special linear
    groups.
    """
    w = torus_weight(f, space)
    chi = None if w == HETEROGENEOUS else w.as_character()
    if chi is None:
        return SemiInvariance(False, None)
    res = is_unipotent_invariant(f, space, include_lower=True)
    return SemiInvariance(bool(res), chi, None if res else res)


# ---------------------------------------------------------------------------
# bounded-degree invariant spaces


class CapExceededError(RuntimeError):
    pass


DEFAULT_MONOMIAL_CAP = 20000


def derivation_directions(space: GeneralRep) -> list:
    """For each generator (v, i, j): variable -> derivative under exp(-t E_ij)."""
    q = space.quiver
    out = []
    for v, i, j in root_positions(space):
        direction: dict = {}
        for a in q.arrows:
            if v not in (a.head, a.tail):
                continue
            w = space.mats[a.id]
            delta = [[ZERO] * w.cols for _ in range(w.rows)]
            if a.head == v:
                # -E_ij W: row i receives -(row j of W)
                for c in range(w.cols):
                    delta[i - 1][c] = delta[i - 1][c] - w[j - 1, c]
            if a.tail == v:
                # W E_ij: column j receives column i of W
                for r in range(w.rows):
                    delta[r][j - 1] = delta[r][j - 1] + w[r, i - 1]
            for r in range(w.rows):
                for c in range(w.cols):
                    d = delta[r][c]
                    if d.is_zero():
                        continue
                    entry = w[r, c]
                    if entry.is_zero():
                        raise GroupError(
                            f"generator ({v},{i},{j}) leaves the pattern of arrow {a.id} at ({r + 1},{c + 1})")
                    (var,) = entry.variables()
                    direction[var] = d
        out.append(((v, i, j), direction))
    return out


@dataclass
class InvariantSpace:
    dimension: int
    basis: list
    by_degree: dict = field(default_factory=dict)


def invariant_space_dim(space: GeneralRep, degree: int, cap: int = DEFAULT_MONOMIAL_CAP) -> InvariantSpace:
    """Basis of the unipotent invariants of degree <= ``degree``.

    The space is the common kernel of the derivations of all elementary
    generators.  Each derivation preserves degree and shifts the torus weight
    by a fixed amount, so the kernel is computed one (degree, weight) block
    at a time.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    variables = space.variables()
    total = comb(len(variables) + degree, degree)
    if total > cap:
        raise CapExceededError(f"{total} monomials of degree <= {degree} exceed the cap {cap}")
    vweights = _variable_weight(space, space.locations())
    directions = derivation_directions(space)
    basis = []
    by_degree = {}
    for d in range(degree + 1):
        blocks: dict = {}
        for m in all_monomials(variables, d):
            blocks.setdefault(monomial_weight(m, vweights), []).append(m)
        found = []
        for w in sorted(blocks):
            found.extend(_block_kernel(blocks[w], directions))
        by_degree[d] = len(found)
        basis.extend(found)
    return InvariantSpace(len(basis), basis, by_degree)


def _block_kernel(monomials: list, directions: list) -> list:
    images = []
    row_index: dict = {}
    for m in monomials:
        p = Polynomial.monomial(m)
        col = {}
        for k, (_, direction) in enumerate(directions):
            dp = derive(p, direction)
            for mono, c in dp.items():
                key = (k, mono)
                if key not in row_index:
                    row_index[key] = len(row_index)
                col[row_index[key]] = c
        images.append(col)
    if not row_index:
        return [Polynomial.monomial(m) for m in monomials]
    mat = [[Fraction(0)] * len(monomials) for _ in range(len(row_index))]
    for j, col in enumerate(images):
        for r, c in col.items():
            mat[r][j] = c
    kernel = linalg.columns(linalg.nullspace(mat))
    return [Polynomial({m: c for m, c in zip(monomials, vec) if c}) for vec in kernel]


def diagonal_monomial_count(space: GeneralRep, degree: int) -> int:
    k = len(space.diagonal_variables())
    return comb(k + degree, degree)


def span_contains(basis: list, f: Polynomial) -> bool:
    """Whether ``f`` lies in the linear span of the polynomials in ``basis``."""
    monos = sorted({m for p in basis + [f] for m, _ in p.items()}, key=repr)
    if not monos:
        return True
    idx = {m: k for k, m in enumerate(monos)}
    cols = []
    for p in basis:
        v = [Fraction(0)] * len(monos)
        for m, c in p.items():
            v[idx[m]] = c
        cols.append(v)
    target = [Fraction(0)] * len(monos)
    for m, c in f.items():
        target[idx[m]] = c
    if not cols:
        return f.is_zero()
    return linalg.solve_in_span(linalg.from_columns(cols, len(monos)), target) is not None


def linear_rank(polys: list) -> int:
    monos = sorted({m for p in polys for m, _ in p.items()}, key=repr)
    if not monos or not polys:
        return 0
    idx = {m: k for k, m in enumerate(monos)}
    rows = []
    for p in polys:
        v = [Fraction(0)] * len(monos)
        for m, c in p.items():
            v[idx[m]] = c
        rows.append(v)
    return linalg.rank(rows)


__all__ = [
    "GroupElement", "Character", "TorusWeight", "InvarianceResult", "InvariantSpace",
    "identity_element", "rational_element", "elementary_unipotent", "root_positions",
    "act_on_rep", "act_on_poly", "is_unipotent_invariant", "torus_weight", "is_semi_invariant",
    "is_sl_semi_invariant", "invariant_space_dim", "diagonal_monomial_count", "span_contains",
    "linear_rank", "HETEROGENEOUS", "CapExceededError", "GroupError", "ForeignVariableError",
]
