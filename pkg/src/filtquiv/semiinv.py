"""Semi-invariant constructions and bounded-degree theorem harnesses.

* Determinantal semi-invariants from the map ``X -> W(a) X_ta - X_ha V(a)``
  (the Derksen-Weyman construction), with coefficients taken over the
  entries of V.
* Block matrices of path products with formal scalar weights (the
  Domokos-Zubkov construction), with coefficients taken over the scalars.
* Bideterminants of bitableaux tagged by matrix products, and block standard
  form.
* Comparison of bounded-degree invariant spaces with the polynomial ring in
  the diagonal variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .action import (InvariantSpace, diagonal_monomial_count, invariant_space_dim,
                     is_unipotent_invariant, span_contains)
from .poly import (ONE, ZERO, Polynomial, SymbolicMatrix, Variable, block_matrix,
                   coefficients_wrt, determinant)
from .quiver import Quiver, enumerate_pathways, euler_form
from .repspace import Filtration, GeneralRep, general_rep


class ProblemError(ValueError):
    pass


def normalized(p: Polynomial) -> Polynomial:
    """Scale so that the leading printed term has coefficient 1."""
    if p.is_zero():
        return p
    (_, c) = p.sorted_terms()[0]
    return p.scale(1 / c)


def same_up_to_scalar(p: Polynomial, q: Polynomial) -> bool:
    return normalized(p) == normalized(q)


# ---------------------------------------------------------------------------
# determinantal semi-invariants


@dataclass(frozen=True)
class DWProblem:
    """Acyclic quiver, dimension vector β, and α with ⟨α, β⟩ = 0.

    ``V`` optionally fixes the α-representation: arrow id -> matrix of shape
    α_ha x α_ta (entries may be polynomials, e.g. a scalar λ).  Arrows left
    out get fresh entries labeled ``v<arrow id>``.
    """

    quiver: Quiver
    beta: tuple
    alpha: tuple
    V: Mapping[str, SymbolicMatrix] | None = None

    def __post_init__(self):
        q = self.quiver
        if not q.is_acyclic():
            raise ProblemError("the determinantal construction needs an acyclic quiver")
        if len(self.beta) != q.num_vertices or len(self.alpha) != q.num_vertices:
            raise ProblemError("α and β must list every vertex")
        ef = euler_form(q, self.alpha, self.beta)
        if ef != 0:
            raise ProblemError(f"⟨α, β⟩ = {ef}, but the construction needs 0")
        rows = sum(self.alpha[a.tail - 1] * self.beta[a.head - 1] for a in q.arrows)
        cols = sum(x * y for x, y in zip(self.alpha, self.beta))
        if rows != cols:
            raise ProblemError(f"the map is {rows}x{cols}, not square")

    def v_matrices(self) -> dict:
        out = {}
        given = dict(self.V or {})
        for a in self.quiver.arrows:
            shape = (self.alpha[a.head - 1], self.alpha[a.tail - 1])
            if a.id in given:
                m = given[a.id]
                if not isinstance(m, SymbolicMatrix):
                    m = SymbolicMatrix.from_rows(m, cols=shape[1])
                if m.shape != shape:
                    raise ProblemError(f"V({a.id}) must be {shape[0]}x{shape[1]}")
                out[a.id] = m
            else:
                out[a.id] = SymbolicMatrix.general(f"v{a.id}", *shape)
        return out

    def v_variables(self) -> set:
        out = set()
        for m in self.v_matrices().values():
            out |= m.variables()
        return out


def dw_matrix(p: DWProblem, space: GeneralRep | None = None) -> SymbolicMatrix:
    """Matrix of ``X -> (W(a) X_ta - X_ha V(a))_a``.

    Columns: entries of X_i (a β_i x α_i matrix) ordered by (vertex, row,
    col).  Rows: arrows in quiver order, then (row, col) of the β_ha x α_ta
    target block.
    """
    q = p.quiver
    w = space or general_rep(q, p.beta)
    V = p.v_matrices()
    col_index = {}
    for v in q.vertices:
        for r in range(p.beta[v - 1]):
            for c in range(p.alpha[v - 1]):
                col_index[(v, r, c)] = len(col_index)
    rows = []
    for a in q.arrows:
        W = w.mats[a.id]
        for r in range(p.beta[a.head - 1]):
            for c in range(p.alpha[a.tail - 1]):
                row = [ZERO] * len(col_index)
                # W(a) X_ta: entry (r, c) uses X_ta[k][c]
                for k in range(p.beta[a.tail - 1]):
                    idx = col_index[(a.tail, k, c)]
                    row[idx] = row[idx] + W[r, k]
                # - X_ha V(a): entry (r, c) uses X_ha[r][k]
                for k in range(p.alpha[a.head - 1]):
                    idx = col_index[(a.head, r, k)]
                    row[idx] = row[idx] - V[a.id][k, c]
                rows.append(row)
    if len(rows) != len(col_index):
        raise ProblemError("the map is not square")
    return SymbolicMatrix(len(rows), len(col_index), tuple(tuple(r) for r in rows))


def _coefficient_list(det: Polynomial, variables) -> list:
    """Nonzero coefficients, one per scalar multiple.

    Constants are dropped unless nothing else is left.
    """
    groups = coefficients_wrt(det, variables)
    out: list = []
    for k in sorted(groups):
        g = groups[k]
        if not g.is_zero() and not any(same_up_to_scalar(g, h) for h in out):
            out.append(g)
    nonconstant = [g for g in out if not g.is_constant()]
    return nonconstant or out[:1]


def dw_generators(p: DWProblem, space: GeneralRep | None = None) -> list:
    """Coefficients of det(dw_matrix) with respect to the V entries."""
    det = determinant(dw_matrix(p, space))
    return _coefficient_list(det, p.v_variables())


# ---------------------------------------------------------------------------
# block matrices of path products


@dataclass(frozen=True)
class DZTerm:
    scalar: str | None
    path: tuple  # arrow ids in traversal order; () means the identity

    def __str__(self) -> str:
        body = "".join(reversed(self.path)) if self.path else "I"
        return f"{self.scalar}*{body}" if self.scalar else body


@dataclass(frozen=True)
class DZProblem:
    """Block matrix from sources v_1..v_n to targets w_1..w_m.

    ``entries[(i, j)]`` (0-based, i over targets, j over sources) is a list
    of DZTerm; each path must run from ``sources[j]`` to ``targets[i]``.
    """

    quiver: Quiver
    beta: tuple
    sources: tuple
    targets: tuple
    entries: Mapping[tuple, tuple]

    def __post_init__(self):
        q = self.quiver
        src = sum(self.beta[v - 1] for v in self.sources)
        tgt = sum(self.beta[w - 1] for w in self.targets)
        if src != tgt:
            raise ProblemError(f"unbalanced blocks: sources give {src}, targets give {tgt}")
        for (i, j), terms in self.entries.items():
            if not (0 <= i < len(self.targets) and 0 <= j < len(self.sources)):
                raise ProblemError(f"block ({i}, {j}) is out of range")
            for t in terms:
                self._check_path(q, t.path, self.sources[j], self.targets[i])

    @staticmethod
    def _check_path(q: Quiver, path, start, end):
        if not path:
            if start != end:
                raise ProblemError(f"identity block needs equal vertices, got {start} and {end}")
            return
        here = start
        for aid in path:
            a = q.arrow(aid)
            if a.tail != here:
                raise ProblemError(f"path {path} is not composable from vertex {start}")
            here = a.head
        if here != end:
            raise ProblemError(f"path {path} ends at {here}, expected {end}")

    def scalar_variables(self) -> set:
        return {Variable.scalar(t.scalar) for terms in self.entries.values() for t in terms if t.scalar}


def path_matrix(space: GeneralRep, path: Sequence[str], vertex: int) -> SymbolicMatrix:
    """Product of general matrices along a path (identity for the empty path)."""
    if not path:
        return SymbolicMatrix.identity(space.dims[vertex - 1])
    m = space.mats[path[0]]
    for aid in path[1:]:
        m = space.mats[aid] @ m
    return m


def dz_matrix(p: DZProblem, space: GeneralRep | None = None) -> SymbolicMatrix:
    w = space or general_rep(p.quiver, p.beta)
    grid = []
    for i, tv in enumerate(p.targets):
        brow = []
        for j, sv in enumerate(p.sources):
            blk = SymbolicMatrix.zeros(p.beta[tv - 1], p.beta[sv - 1])
            for t in p.entries.get((i, j), ()):
                term = path_matrix(w, t.path, sv)
                if t.scalar:
                    term = term.scale(Polynomial.var(Variable.scalar(t.scalar)))
                blk = blk + term
            brow.append(blk)
        grid.append(brow)
    return block_matrix(grid)


def dz_generators(p: DZProblem, space: GeneralRep | None = None) -> list:
    det = determinant(dz_matrix(p, space))
    return _coefficient_list(det, p.scalar_variables())


def dz_auto_problem(q: Quiver, beta, sources, targets, max_length: int = 2) -> DZProblem:
    """Every pathway of length <= max_length in every block, each with its own scalar."""
    paths = enumerate_pathways(q)
    entries = {}
    k = 0
    for i, tv in enumerate(targets):
        for j, sv in enumerate(sources):
            terms = []
            for path in sorted(paths.get((sv, tv), ()), key=lambda x: (x.length, x.arrows)):
                if path.length > max_length:
                    continue
                k += 1
                terms.append(DZTerm(f"t{k}", path.arrows))
            if terms:
                entries[(i, j)] = tuple(terms)
    return DZProblem(q, tuple(beta), tuple(sources), tuple(targets), entries)


# ---------------------------------------------------------------------------
# bitableaux


@dataclass(frozen=True)
class BitableauRow:
    J: tuple  # row indices (1-based)
    I: tuple  # column indices (1-based)
    phi: tuple  # tag of the matrix product A_phi[0] ... A_phi[-1]

    def __post_init__(self):
        if len(self.J) != len(self.I) or not self.J:
            raise ValueError("each bitableau row needs equally many (>= 1) row and column indices")


@dataclass(frozen=True)
class Bitableau:
    rows: tuple

    @classmethod
    def of(cls, *rows) -> "Bitableau":
        return cls(tuple(r if isinstance(r, BitableauRow) else BitableauRow(tuple(r[0]), tuple(r[1]), tuple(r[2]))
                         for r in rows))


def chain_product(mats: Mapping[int, SymbolicMatrix], phi: Sequence[int]) -> SymbolicMatrix:
    """``A_phi[0] A_phi[1] ... A_phi[-1]`` for an integer tag."""
    m = mats[phi[0]]
    for k in phi[1:]:
        m = m @ mats[k]
    return m


def bideterminant(t: Bitableau, products: Mapping[tuple, SymbolicMatrix]) -> Polynomial:
    """Product over rows of the minor (J | I) of the tagged product matrix."""
    out = ONE
    for row in t.rows:
        if row.phi not in products:
            raise KeyError(f"no product matrix for tag {list(row.phi)}")
        m = products[row.phi]
        for r in row.J:
            if not 1 <= r <= m.rows:
                raise IndexError(f"row index {r} out of range 1..{m.rows} for tag {list(row.phi)}")
        for c in row.I:
            if not 1 <= c <= m.cols:
                raise IndexError(f"column index {c} out of range 1..{m.cols} for tag {list(row.phi)}")
        out = out * determinant(m.minor([r - 1 for r in row.J], [c - 1 for c in row.I]))
    return out


def tag_leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """Shorter tags first; equal lengths compare by the rightmost differing entry."""
    if len(u) != len(v):
        return len(u) < len(v)
    for x, y in zip(reversed(u), reversed(v)):
        if x != y:
            return y - x > 0
    return True


def _standard_block(rows: list) -> bool:
    for r in rows:
        if any(x >= y for x, y in zip(r.J, r.J[1:])) or any(x >= y for x, y in zip(r.I, r.I[1:])):
            return False
    for upper, lower in zip(rows, rows[1:]):
        if len(lower.J) > len(upper.J):
            return False
        for k in range(len(lower.J)):
            if lower.J[k] < upper.J[k] or lower.I[k] < upper.I[k]:
                return False
    return True


def is_block_standard(t: Bitableau) -> bool:
    rows = list(t.rows)
    for u, v in zip(rows, rows[1:]):
        if not tag_leq(u.phi, v.phi):
            return False
    blocks: list = []
    for r in rows:
        if blocks and blocks[-1][0].phi == r.phi:
            blocks[-1].append(r)
        else:
            blocks.append([r])
    return all(_standard_block(b) for b in blocks)


def framed_affine_invariant_check(f: Polynomial, space: GeneralRep) -> bool:
    """Unipotent invariance of a candidate built from bideterminants."""
    return bool(is_unipotent_invariant(f, space))


# ---------------------------------------------------------------------------
# bounded-degree comparison with the diagonal ring


@dataclass
class HarnessReport:
    quiver: Quiver
    n: int
    degree: int
    invariant_dim: int
    diagonal_dim: int
    extra: list = field(default_factory=list)
    space: GeneralRep | None = None
    invariants: InvariantSpace | None = None

    @property
    def equal(self) -> bool:
        return self.invariant_dim == self.diagonal_dim

    def contains(self, f: Polynomial) -> bool:
        return span_contains(self.invariants.basis, f)


def _extras(basis: list, diagonal: set) -> list:
    """Invariants modulo the span of pure-diagonal monomials, reduced to a basis."""
    remainders = []
    for p in basis:
        r = Polynomial({m: c for m, c in p.items() if any(v not in diagonal for v, _ in m)})
        if not r.is_zero():
            remainders.append(r)
    picked: list = []
    for r in remainders:
        if not span_contains(picked, r):
            picked.append(r)
    return picked


def theorem_harness(q: Quiver, n: int, degree: int, cap: int | None = None) -> HarnessReport:
    """Invariants of degree <= d versus polynomials in the diagonal variables."""
    beta = tuple(n for _ in q.vertices)
    f = Filtration.complete(beta)
    space = general_rep(q, beta, f)
    kwargs = {} if cap is None else {"cap": cap}
    inv = invariant_space_dim(space, degree, **kwargs)
    diag = diagonal_monomial_count(space, degree)
    extra = _extras(inv.basis, set(space.diagonal_variables()))
    return HarnessReport(q, n, degree, inv.dimension, diag, extra, space, inv)


__all__ = [
    "DWProblem", "DZProblem", "DZTerm", "Bitableau", "BitableauRow", "HarnessReport",
    "dw_matrix", "dw_generators", "dz_matrix", "dz_generators", "dz_auto_problem",
    "bideterminant", "chain_product", "path_matrix", "is_block_standard", "tag_leq",
    "framed_affine_invariant_check", "theorem_harness", "normalized", "same_up_to_scalar",
]
