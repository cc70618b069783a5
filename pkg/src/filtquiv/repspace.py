"""Representation spaces of quivers with coordinate filtrations.

A filtration assigns each vertex a chain ``γ^1 <= ... <= γ^N = β_i``; level
``k`` at vertex ``i`` is the span of the first ``γ^k_i`` standard basis
vectors.  A map preserves the filtration when it sends level ``k`` into
level ``k`` at every level, which for matrices is a sparsity pattern.

Arrows touching a framed vertex are never constrained: framed vertices carry
no flag and no group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .poly import SymbolicMatrix
from .quiver import Quiver, QuiverError, dim_vector


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True)
class Filtration:
    """Per-vertex chains of subspace dimensions, all of the same length N."""

    chains: tuple

    def __post_init__(self):
        chains = tuple(tuple(int(x) for x in c) for c in self.chains)
        object.__setattr__(self, "chains", chains)
        lengths = {len(c) for c in chains}
        if len(lengths) > 1:
            raise FiltrationError(f"all chains need the same length, got lengths {sorted(lengths)}")
        for v, c in enumerate(chains, start=1):
            if not c:
                raise FiltrationError(f"vertex {v} has an empty chain")
            if any(x < 0 for x in c):
                raise FiltrationError(f"vertex {v}: chain entries must be nonnegative")
            if any(x > y for x, y in zip(c, c[1:])):
                raise FiltrationError(f"vertex {v}: chain {list(c)} is not nondecreasing")

    @classmethod
    def trivial(cls, beta: Sequence[int]) -> "Filtration":
        return cls(tuple((b,) for b in beta))

    @classmethod
    def complete(cls, beta: Sequence[int]) -> "Filtration":
        """Complete standard flag; chains run to max(β), padded at the top."""
        n = max(beta) if beta else 0
        n = max(n, 1)
        return cls(tuple(tuple(min(k, b) for k in range(1, n + 1)) for b in beta))

    @classmethod
    def two_step(cls, gamma: Sequence[int], beta: Sequence[int]) -> "Filtration":
        return cls(tuple((g, b) for g, b in zip(gamma, beta)))

    @property
    def levels(self) -> int:
        return len(self.chains[0]) if self.chains else 0

    @property
    def dims(self) -> tuple:
        return tuple(c[-1] for c in self.chains)

    def chain(self, v: int) -> tuple:
        return self.chains[v - 1]

    def level_dim(self, v: int, k: int) -> int:
        """Dimension of level k (1-based); level 0 is the zero subspace."""
        if k <= 0:
            return 0
        return self.chains[v - 1][min(k, self.levels) - 1]

    def check_against(self, q: Quiver, beta: Sequence[int]) -> None:
        if len(self.chains) != q.num_vertices:
            raise FiltrationError("filtration must list a chain for every vertex")
        for v, (c, b) in enumerate(zip(self.chains, beta), start=1):
            if c[-1] != b:
                raise FiltrationError(f"vertex {v}: chain ends at {c[-1]} but β_{v} = {b}")


Pattern = tuple  # tuple[tuple[bool, ...], ...], shape β_head x β_tail


def _full(rows: int, cols: int) -> Pattern:
    return tuple(tuple(True for _ in range(cols)) for _ in range(rows))


def filtered_pattern(q: Quiver, f: Filtration, arrow_id: str) -> Pattern:
    """Allowed entries of W(a) for filtration-preserving maps.

    Entry (r, c) is allowed iff, at every level k, ``c <= γ^k_ta`` implies
    ``r <= γ^k_ha`` (1-based indices).
    """
    a = q.arrow(arrow_id)
    rows, cols = f.dims[a.head - 1], f.dims[a.tail - 1]
    if q.is_framed(a.tail) or q.is_framed(a.head):
        return _full(rows, cols)
    tail_chain, head_chain = f.chain(a.tail), f.chain(a.head)
    grid = []
    for r in range(1, rows + 1):
        grid.append(tuple(
            all(c > gt or r <= gh for gt, gh in zip(tail_chain, head_chain))
            for c in range(1, cols + 1)))
    return tuple(grid)


def parabolic_pattern(f: Filtration, v: int) -> Pattern:
    """Entries of g in the stabilizer of the flag at vertex v."""
    chain = f.chain(v)
    n = chain[-1]
    return tuple(tuple(all(c > g or r <= g for g in chain) for c in range(1, n + 1))
                 for r in range(1, n + 1))


def transpose_pattern(p: Pattern, rows: int | None = None, cols: int | None = None) -> Pattern:
    if not p:
        return tuple(() for _ in range(cols or 0))
    return tuple(tuple(p[r][c] for r in range(len(p))) for c in range(len(p[0])))


def dual_pattern(q: Quiver, f: Filtration, arrow_id: str) -> Pattern:
    """Lower block-triangular model of the dual space: the transpose pattern."""
    a = q.arrow(arrow_id)
    return transpose_pattern(filtered_pattern(q, f, arrow_id),
                             f.dims[a.head - 1], f.dims[a.tail - 1])


def pattern_count(p: Pattern) -> int:
    return sum(1 for row in p for x in row if x)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class GeneralRep:
    """Per-arrow matrices of fresh variables (zero where the pattern forbids).

    Variables of arrow ``a`` are labeled by the arrow id, so entry (r, c)
    prints as ``a12`` and so on.
    """

    quiver: Quiver
    dims: tuple
    filtration: Filtration | None
    mats: Mapping[str, SymbolicMatrix]
    patterns: Mapping[str, Pattern] = field(default_factory=dict)

    def matrix(self, arrow_id: str) -> SymbolicMatrix:
        return self.mats[arrow_id]

    def variables(self) -> list:
        out = []
        for a in self.quiver.arrows:
            out.extend(sorted(self.mats[a.id].variables()))
        return out

    def names(self) -> dict:
        return {str(v): v for v in self.variables()}

    def locations(self) -> dict:
        """Variable -> (arrow id, row, col) with 1-based indices."""
        out = {}
        for a in self.quiver.arrows:
            m = self.mats[a.id]
            for r in range(m.rows):
                for c in range(m.cols):
                    e = m[r, c]
                    if not e.is_zero():
                        (v,) = e.variables()
                        out[v] = (a.id, r + 1, c + 1)
        return out

    def diagonal_variables(self) -> list:
        """Entries (k, k) of arrows whose ends are both unframed."""
        q = self.quiver
        out = []
        for v, (aid, r, c) in self.locations().items():
            a = q.arrow(aid)
            if r == c and not q.is_framed(a.tail) and not q.is_framed(a.head):
                out.append(v)
        return sorted(out)

    def with_matrices(self, mats: Mapping[str, SymbolicMatrix]) -> "GeneralRep":
        return GeneralRep(self.quiver, self.dims, self.filtration, dict(mats), self.patterns)


def general_rep(q: Quiver, beta: Sequence[int], f: Filtration | None = None,
                labels: Mapping[str, str] | None = None) -> GeneralRep:
    beta = dim_vector(q, beta)
    if f is not None:
        f.check_against(q, beta)
    labels = dict(labels or {})
    mats, patterns = {}, {}
    for a in q.arrows:
        rows, cols = beta[a.head - 1], beta[a.tail - 1]
        pat = filtered_pattern(q, f, a.id) if f is not None else _full(rows, cols)
        patterns[a.id] = pat
        mats[a.id] = SymbolicMatrix.general(labels.get(a.id, a.id), rows, cols, pat)
    return GeneralRep(q, beta, f, mats, patterns)


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class ConcreteRep:
    """Per-arrow rational matrices of shape β_head x β_tail."""

    quiver: Quiver
    dims: tuple
    mats: Mapping[str, list]

    def __post_init__(self):
        dims = dim_vector(self.quiver, self.dims)
        object.__setattr__(self, "dims", dims)
        clean = {}
        for a in self.quiver.arrows:
            if a.id not in self.mats:
                raise RepresentationError(f"no matrix for arrow {a.id}")
            rows, cols = dims[a.head - 1], dims[a.tail - 1]
            m = [[Fraction(x) for x in r] for r in self.mats[a.id]]
            if rows == 0:
                m = []
            if len(m) != rows or any(len(r) != cols for r in m):
                raise RepresentationError(
                    f"arrow {a.id} needs a {rows}x{cols} matrix")
            clean[a.id] = m
        extra = set(self.mats) - set(clean)
        if extra:
            raise RepresentationError(f"matrices given for unknown arrows {sorted(extra)}")
        object.__setattr__(self, "mats", clean)

    def matrix(self, arrow_id: str) -> list:
        return self.mats[arrow_id]

    def respects(self, f: Filtration) -> bool:
        for a in self.quiver.arrows:
            pat = filtered_pattern(self.quiver, f, a.id)
            m = self.mats[a.id]
            for r, row in enumerate(m):
                for c, x in enumerate(row):
                    if x and not pat[r][c]:
                        return False
        return True

    def __eq__(self, other):
        if not isinstance(other, ConcreteRep):
            return NotImplemented
        return (self.quiver == other.quiver and self.dims == other.dims
                and all(self.mats[k] == other.mats[k] for k in self.mats))

    def __hash__(self):
        return hash((self.quiver, self.dims))


def zero_rep(q: Quiver, beta: Sequence[int]) -> ConcreteRep:
    beta = dim_vector(q, beta)
    return ConcreteRep(q, beta, {a.id: linalg.zeros(beta[a.head - 1], beta[a.tail - 1]) for a in q.arrows})


def simple_rep(q: Quiver, i: int) -> ConcreteRep:
    beta = tuple(int(v == i) for v in q.vertices)
    return zero_rep(q, beta)


# ---------------------------------------------------------------------------
# quiver Grassmannian dimension counts


def _check_sub(beta: Sequence[int], gamma: Sequence[int]) -> None:
    if len(beta) != len(gamma):
        raise QuiverError("β and γ must have the same length")
    for v, (b, g) in enumerate(zip(beta, gamma), start=1):
        if g < 0 or g > b:
            raise QuiverError(f"γ_{v} = {g} must lie in 0..β_{v} = {b}")


def grassmannian_fiber_rank(q: Quiver, beta: Sequence[int], gamma: Sequence[int]) -> int:
    """Rank of the space of representations preserving a fixed γ-subspace."""
    beta = dim_vector(q, beta)
    _check_sub(beta, gamma)
    total = 0
    for a in q.arrows:
        bi, bj = beta[a.tail - 1], beta[a.head - 1]
        gi, gj = gamma[a.tail - 1], gamma[a.head - 1]
        total += bi * bj + gi * gj - bj * gi
    return total


def grassmannian_dim(beta: Sequence[int], gamma: Sequence[int]) -> int:
    _check_sub(beta, gamma)
    return sum(g * (b - g) for b, g in zip(beta, gamma))
