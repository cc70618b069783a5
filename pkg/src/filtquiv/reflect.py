"""Reflection functors, induced filtrations and the graded/Rees translations.

Everything is exact over Q.  Kernels and cokernels get canonical bases from
reduced row echelon forms, so functor outputs are deterministic and can be
compared by equality; isomorphism checks are kept for basis-free claims.

Filtered representations live in the coordinate model: level ``l`` at
vertex ``v`` is the span of the first ``γ^l_v`` basis vectors.  When a
construction produces non-coordinate subspaces (induced filtrations, Filt)
the new space is given a basis adapted to the flag, which brings it back
into the coordinate model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .poly import Polynomial, SymbolicMatrix, Variable, determinant, evaluate
from .quiver import Quiver, QuiverError
from .repspace import ConcreteRep, Filtration, FiltrationError, RepresentationError

# ---------------------------------------------------------------------------
# classical reflection functors


def _in_map(W: ConcreteRep, i: int) -> tuple:
    """Arrows into i and the block matrix ⊕ W_ta -> W_i."""
    q = W.quiver
    arrows = q.arrows_into(i)
    n = W.dims[i - 1]
    blocks = [W.mats[a.id] for a in arrows]
    widths = [W.dims[a.tail - 1] for a in arrows]
    rows = [sum((list(b[r]) for b in blocks), []) for r in range(n)]
    return arrows, widths, rows


def _offsets(widths: Sequence[int]) -> list:
    out, acc = [], 0
    for w in widths:
        out.append(acc)
        acc += w
    return out


def kernel_basis(m: linalg.Matrix, ncols: int) -> linalg.Matrix:
    """RREF basis of ker m as columns (``ncols`` columns of m)."""
    if not m:
        return linalg.identity(ncols)
    return linalg.column_space(linalg.nullspace(m, ncols))


def reflect_plus(W: ConcreteRep, i: int) -> ConcreteRep:
    """Replace the space at the sink i by the kernel of the total in-map."""
    q = W.quiver
    if not q.is_sink(i):
        raise QuiverError(f"vertex {i} is not a sink")
    arrows, widths, phi = _in_map(W, i)
    total = sum(widths)
    K = kernel_basis(phi, total)
    return _plus_from_basis(W, i, arrows, widths, K)


def _plus_from_basis(W, i, arrows, widths, K) -> ConcreteRep:
    q = W.quiver
    k = linalg.ncols_of(K) if K else 0
    dims = list(W.dims)
    dims[i - 1] = k
    mats = {}
    offs = _offsets(widths)
    into = {a.id for a in arrows}
    for a in q.arrows:
        if a.id in into:
            idx = [x.id for x in arrows].index(a.id)
            rows = range(offs[idx], offs[idx] + widths[idx])
            mats[a.id] = [[K[r][c] for c in range(k)] for r in rows]
        else:
            mats[a.id] = W.mats[a.id]
    return ConcreteRep(q.reflected_at(i), tuple(dims), mats)


def _out_map(W: ConcreteRep, i: int) -> tuple:
    q = W.quiver
    arrows = q.arrows_out_of(i)
    heights = [W.dims[a.head - 1] for a in arrows]
    rows = []
    for a in arrows:
        rows.extend(list(r) for r in W.mats[a.id])
    return arrows, heights, rows


def cokernel_projection(m: linalg.Matrix, nrows: int) -> linalg.Matrix:
    """Rows P (RREF) with P m = 0 spanning all such rows: the quotient map."""
    if nrows == 0:
        return []
    return linalg.left_nullspace(m, nrows)


def reflect_minus(W: ConcreteRep, i: int) -> ConcreteRep:
    """Replace the space at the source i by the cokernel of the total out-map."""
    q = W.quiver
    if not q.is_source(i):
        raise QuiverError(f"vertex {i} is not a source")
    arrows, heights, psi = _out_map(W, i)
    P = cokernel_projection(psi, sum(heights))
    return _minus_from_projection(W, i, arrows, heights, P)


def _minus_from_projection(W, i, arrows, heights, P) -> ConcreteRep:
    q = W.quiver
    k = len(P)
    dims = list(W.dims)
    dims[i - 1] = k
    offs = _offsets(heights)
    out_ids = [a.id for a in arrows]
    mats = {}
    for a in q.arrows:
        if a.id in out_ids:
            idx = out_ids.index(a.id)
            cols = range(offs[idx], offs[idx] + heights[idx])
            mats[a.id] = [[P[r][c] for c in cols] for r in range(k)]
        else:
            mats[a.id] = W.mats[a.id]
    return ConcreteRep(q.reflected_at(i), tuple(dims), mats)


# ---------------------------------------------------------------------------
# isomorphism testing


@dataclass(frozen=True)
class IsoResult:
    outcome: str  # "yes", "no" or "inconclusive"
    witness: dict | None = None
    solution_dim: int = 0
    method: str = ""

    def __bool__(self) -> bool:
        return self.outcome == "yes"


def intertwiner_basis(W1: ConcreteRep, W2: ConcreteRep) -> list:
    """Basis of {g : g_ha W1(a) = W2(a) g_ta for every arrow} as dicts v -> matrix."""
    q = W1.quiver
    dims = W1.dims
    index = {}
    for v in q.vertices:
        d = dims[v - 1]
        for r in range(d):
            for c in range(d):
                index[(v, r, c)] = len(index)
    n = len(index)
    eqs = []
    for a in q.arrows:
        A1, A2 = W1.mats[a.id], W2.mats[a.id]
        dh, dt = dims[a.head - 1], dims[a.tail - 1]
        for r in range(dh):
            for c in range(dt):
                row = [Fraction(0)] * n
                for k in range(dh):
                    if A1[k][c]:
                        row[index[(a.head, r, k)]] += A1[k][c]
                for k in range(dt):
                    if A2[r][k]:
                        row[index[(a.tail, k, c)]] -= A2[r][k]
                eqs.append(row)
    basis_cols = linalg.columns(linalg.nullspace(eqs, n)) if n else []
    out = []
    for vec in basis_cols:
        g = {}
        for v in q.vertices:
            d = dims[v - 1]
            g[v] = [[vec[index[(v, r, c)]] for c in range(d)] for r in range(d)]
        out.append(g)
    return out


def _combine(basis: list, coeffs: Sequence) -> dict:
    g = {}
    for v in basis[0]:
        d = len(basis[0][v])
        g[v] = [[sum((Fraction(c) * b[v][r][s] for c, b in zip(coeffs, basis)), Fraction(0))
                 for s in range(d)] for r in range(d)]
    return g


def _invertible(g: dict) -> bool:
    return all(linalg.det(m) != 0 for m in g.values())


SYMBOLIC_LIMIT = 4


def are_isomorphic(W1: ConcreteRep, W2: ConcreteRep, trials: int = 32, seed: int = 0) -> IsoResult:
    """Search the intertwiner space for an invertible element.

    Small solution spaces (dimension <= 4, vertex dimensions <= 8) are
    decided exactly through the determinant as a polynomial in the
    coordinates; larger ones are sampled with a seeded generator.
    """
    if W1.quiver != W2.quiver:
        raise RepresentationError("representations of different quivers")
    if W1.dims != W2.dims:
        return IsoResult("no", method="dimension vectors")
    if sum(W1.dims) == 0:
        return IsoResult("yes", {v: [] for v in W1.quiver.vertices}, 0, "zero")
    basis = intertwiner_basis(W1, W2)
    k = len(basis)
    if k == 0:
        return IsoResult("no", solution_dim=0, method="no intertwiners")
    if k <= SYMBOLIC_LIMIT and max(W1.dims) <= 8:
        ts = [Variable.scalar(f"t{n + 1}") for n in range(k)]
        prod = Polynomial.constant(1)
        for v in basis[0]:
            d = len(basis[0][v])
            if d == 0:
                continue
            entries = [[sum((Polynomial.var(t) * b[v][r][s] for t, b in zip(ts, basis)),
                            Polynomial.constant(0)) for s in range(d)] for r in range(d)]
            prod = prod * determinant(SymbolicMatrix.from_rows(entries))
        if prod.is_zero():
            return IsoResult("no", solution_dim=k, method="symbolic determinant")
        # a nonzero polynomial of degree D has a nonroot in any grid of side D+1
        side = prod.degree() + 1
        for point in _grid(k, side):
            if evaluate(prod, dict(zip(ts, point))) != 0:
                return IsoResult("yes", _combine(basis, point), k, "symbolic determinant")
        raise AssertionError("unreachable: nonzero polynomial vanished on a full grid")
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [Fraction(rng.randint(-10, 10)) for _ in range(k)]
        g = _combine(basis, coeffs)
        if _invertible(g):
            return IsoResult("yes", g, k, "random search")
    return IsoResult("inconclusive", solution_dim=k, method="random search")


def _grid(k: int, side: int):
    """Integer points of {0..side-1}^k ordered by max-norm, then lexicographically."""
    import itertools
    for radius in range(side):
        for point in itertools.product(range(radius + 1), repeat=k):
            if max(point, default=0) == radius:
                yield tuple(Fraction(x) for x in point)


def check_intertwiner(W1: ConcreteRep, W2: ConcreteRep, g: Mapping[int, list]) -> bool:
    for a in W1.quiver.arrows:
        lhs = linalg.matmul(g[a.head], W1.mats[a.id], inner=W1.dims[a.head - 1],
                            bcols=W1.dims[a.tail - 1])
        rhs = linalg.matmul(W2.mats[a.id], g[a.tail], inner=W1.dims[a.tail - 1],
                            bcols=W1.dims[a.tail - 1])
        if lhs != rhs:
            return False
    return _invertible(g)


# ---------------------------------------------------------------------------
# filtered and graded representations


@dataclass(frozen=True)
class FilteredConcreteRep:
    rep: ConcreteRep
    filtration: Filtration

    def __post_init__(self):
        self.filtration.check_against(self.rep.quiver, self.rep.dims)
        if not self.rep.respects(self.filtration):
            raise FiltrationError("a map does not preserve the filtration")

    @property
    def quiver(self) -> Quiver:
        return self.rep.quiver

    @property
    def dims(self) -> tuple:
        return self.rep.dims

    def forget(self) -> ConcreteRep:
        return self.rep


@dataclass(frozen=True)
class GradedRep:
    """Graded pieces per vertex and one map per level and arrow."""

    quiver: Quiver
    pieces: tuple  # pieces[v-1][l] = dimension of piece l
    maps: Mapping[str, tuple]

    @property
    def levels(self) -> int:
        return len(self.pieces[0]) if self.pieces else 0

    def level_rep(self, l: int) -> ConcreteRep:
        dims = tuple(p[l] for p in self.pieces)
        return ConcreteRep(self.quiver, dims, {a: m[l] for a, m in self.maps.items()})

    def total_dims(self) -> tuple:
        return tuple(sum(p) for p in self.pieces)

    def dimension_data(self) -> tuple:
        return tuple(tuple(p) for p in self.pieces)


def _piece_range(chain: Sequence[int], l: int) -> range:
    lo = chain[l - 1] if l > 0 else 0
    return range(lo, chain[l])


def gr(X: FilteredConcreteRep) -> GradedRep:
    f = X.filtration
    q = X.quiver
    N = f.levels
    pieces = tuple(tuple(len(_piece_range(f.chain(v), l)) for l in range(N)) for v in q.vertices)
    maps = {}
    for a in q.arrows:
        m = X.rep.mats[a.id]
        level_maps = []
        for l in range(N):
            rows = _piece_range(f.chain(a.head), l)
            cols = _piece_range(f.chain(a.tail), l)
            level_maps.append([[m[r][c] for c in cols] for r in rows])
        maps[a.id] = tuple(level_maps)
    return GradedRep(q, pieces, maps)


def graded_reflect_plus(G: GradedRep, i: int) -> GradedRep:
    """Reflect each graded level separately."""
    levels = [reflect_plus(G.level_rep(l), i) for l in range(G.levels)]
    return _graded_from_levels(levels)


def graded_reflect_minus(G: GradedRep, i: int) -> GradedRep:
    levels = [reflect_minus(G.level_rep(l), i) for l in range(G.levels)]
    return _graded_from_levels(levels)


def _graded_from_levels(levels: list) -> GradedRep:
    q = levels[0].quiver
    pieces = tuple(tuple(rep.dims[v - 1] for rep in levels) for v in q.vertices)
    maps = {a.id: tuple(rep.mats[a.id] for rep in levels) for a in q.arrows}
    return GradedRep(q, pieces, maps)


def graded_isomorphic(G1: GradedRep, G2: GradedRep, **kwargs) -> IsoResult:
    """Level-by-level isomorphism; the witness maps level -> intertwiner."""
    if G1.dimension_data() != G2.dimension_data():
        return IsoResult("no", method="dimension data")
    witness = {}
    for l in range(G1.levels):
        res = are_isomorphic(G1.level_rep(l), G2.level_rep(l), **kwargs)
        if res.outcome != "yes":
            return res
        witness[l] = res.witness
    return IsoResult("yes", witness, method="levelwise")


def _adapted_sub_basis(levels: Sequence[linalg.Matrix], n: int) -> linalg.Matrix:
    """Columns spanning the last level, the first dim(level l) spanning level l.

    Vectors are taken from the RREF basis of each level in turn, keeping one
    only when it raises the rank.
    """
    chosen: list = []
    rk = 0
    for level in levels:
        for vec in linalg.columns(linalg.column_space(level)):
            if rank_if_added(chosen, vec) > rk:
                chosen.append(vec)
                rk += 1
    return linalg.from_columns(chosen, n)


def rank_if_added(chosen: list, vec: list) -> int:
    return linalg.rank(chosen + [vec])


def induced_filtration_plus(X: FilteredConcreteRep, i: int) -> FilteredConcreteRep:
    """S_i^+ with the kernel filtered by ker φ ∩ (⊕_j X_{j,l})."""
    W = X.rep
    q = W.quiver
    if not q.is_sink(i):
        raise QuiverError(f"vertex {i} is not a sink")
    f = X.filtration
    arrows, widths, phi = _in_map(W, i)
    total = sum(widths)
    K = kernel_basis(phi, total)
    offs = _offsets(widths)
    levels = []
    for l in range(1, f.levels + 1):
        coords = []
        for a, off in zip(arrows, offs):
            for c in range(f.level_dim(a.tail, l)):
                e = [Fraction(0)] * total
                e[off + c] = Fraction(1)
                coords.append(e)
        levels.append(linalg.intersect(K, linalg.from_columns(coords, total)))
    levels.append(K)
    B = _adapted_sub_basis(levels, total)
    rep = _plus_from_basis(W, i, arrows, widths, B)
    chains = list(f.chains)
    chains[i - 1] = tuple(linalg.span_dim(level) for level in levels[:-1])
    return FilteredConcreteRep(rep, Filtration(tuple(chains)))


def induced_filtration_minus(X: FilteredConcreteRep, i: int) -> FilteredConcreteRep:
    """S_i^- with the cokernel filtered by the images of ⊕_j X_{j,l}."""
    W = X.rep
    q = W.quiver
    if not q.is_source(i):
        raise QuiverError(f"vertex {i} is not a source")
    f = X.filtration
    arrows, heights, psi = _out_map(W, i)
    total = sum(heights)
    P = cokernel_projection(psi, total)
    k = len(P)
    offs = _offsets(heights)
    levels = []
    for l in range(1, f.levels + 1):
        cols = [off + c for a, off in zip(arrows, offs) for c in range(f.level_dim(a.head, l))]
        img = [[P[r][c] for c in cols] for r in range(k)]
        levels.append(linalg.column_space(img) if cols else [[] for _ in range(k)])
    levels.append(linalg.identity(k))
    B = _adapted_sub_basis(levels, k)
    newP = linalg.matmul(linalg.inverse(B), P, inner=k, bcols=total) if k else []
    rep = _minus_from_projection(W, i, arrows, heights, newP)
    chains = list(f.chains)
    chains[i - 1] = tuple(linalg.span_dim(level) for level in levels[:-1])
    return FilteredConcreteRep(rep, Filtration(tuple(chains)))


# ---------------------------------------------------------------------------
# Rees and Filt


@dataclass(frozen=True)
class TGradedRep:
    """Graded C[t]-representation on the window of degrees ``start .. start+len-1``.

    ``pieces[v-1][l]`` is a dimension, ``tmaps[v-1][l]`` the matrix of
    multiplication by t from piece l to piece l+1, and ``maps[a][l]`` the
    arrow map on piece l.  Beyond the window t acts as the identity on the
    top piece.
    """

    quiver: Quiver
    pieces: tuple
    tmaps: tuple
    maps: Mapping[str, tuple]
    start: int = 1

    def __post_init__(self):
        q = self.quiver
        L = len(self.pieces[0]) if self.pieces else 0
        for v in q.vertices:
            if len(self.pieces[v - 1]) != L or len(self.tmaps[v - 1]) != max(L - 1, 0):
                raise RepresentationError(f"vertex {v}: window sizes disagree")
            for l, t in enumerate(self.tmaps[v - 1]):
                _check_shape(t, self.pieces[v - 1][l + 1], self.pieces[v - 1][l], f"t-map at vertex {v}")
        for a in q.arrows:
            for l in range(L):
                _check_shape(self.maps[a.id][l], self.pieces[a.head - 1][l], self.pieces[a.tail - 1][l],
                             f"arrow {a.id} on piece {l}")
            for l in range(L - 1):
                lhs = linalg.matmul(self.tmaps[a.head - 1][l], self.maps[a.id][l],
                                    inner=self.pieces[a.head - 1][l], bcols=self.pieces[a.tail - 1][l])
                rhs = linalg.matmul(self.maps[a.id][l + 1], self.tmaps[a.tail - 1][l],
                                    inner=self.pieces[a.tail - 1][l + 1], bcols=self.pieces[a.tail - 1][l])
                if lhs != rhs:
                    raise RepresentationError(f"arrow {a.id} does not commute with t on piece {l}")

    @property
    def window(self) -> int:
        return len(self.pieces[0]) if self.pieces else 0

    def is_torsion_free(self) -> bool:
        return all(linalg.rank(t) == self.pieces[v][l] if self.pieces[v][l] else True
                   for v in range(len(self.pieces)) for l, t in enumerate(self.tmaps[v]))


def _check_shape(m, rows: int, cols: int, what: str) -> None:
    if len(m) != rows or any(len(r) != cols for r in m):
        raise RepresentationError(f"{what} must be {rows}x{cols}")


def _inclusion(big: int, small: int) -> linalg.Matrix:
    return [[Fraction(int(r == c)) for c in range(small)] for r in range(big)]


def rees(X: FilteredConcreteRep) -> TGradedRep:
    """Pieces X_{v,l} with t acting by the inclusions X_{v,l} ⊂ X_{v,l+1}."""
    f = X.filtration
    q = X.quiver
    N = f.levels
    pieces = tuple(tuple(f.chain(v)) for v in q.vertices)
    tmaps = tuple(tuple(_inclusion(f.chain(v)[l + 1], f.chain(v)[l]) for l in range(N - 1))
                  for v in q.vertices)
    maps = {}
    for a in q.arrows:
        m = X.rep.mats[a.id]
        maps[a.id] = tuple([[m[r][c] for c in range(f.chain(a.tail)[l])]
                            for r in range(f.chain(a.head)[l])] for l in range(N))
    return TGradedRep(q, pieces, tmaps, maps)


def _to_top(R: TGradedRep, v: int, l: int) -> linalg.Matrix:
    """Composite of t-maps from piece l to the top piece of the window."""
    p = R.pieces[v - 1]
    m = linalg.identity(p[l])
    for k in range(l, R.window - 1):
        m = linalg.matmul(R.tmaps[v - 1][k], m, inner=p[k], bcols=p[l])
    return m


def filt(R: TGradedRep) -> FilteredConcreteRep:
    """Filter the top piece (the colimit) by the images of the lower pieces."""
    q = R.quiver
    top = R.window - 1
    bases, chains = {}, []
    for v in q.vertices:
        n = R.pieces[v - 1][top]
        levels = []
        for l in range(R.window):
            img = _to_top(R, v, l)
            levels.append(linalg.column_space(img) if img and img[0] else [[] for _ in range(n)])
        chains.append(tuple(linalg.span_dim(x) for x in levels))
        levels.append(linalg.identity(n))
        bases[v] = _adapted_sub_basis(levels, n)
    mats = {}
    for a in q.arrows:
        m = R.maps[a.id][top]
        nh, nt = R.pieces[a.head - 1][top], R.pieces[a.tail - 1][top]
        mt = linalg.matmul(m, bases[a.tail], inner=nt, bcols=nt)
        mats[a.id] = linalg.matmul(linalg.inverse(bases[a.head]), mt, inner=nh, bcols=nt) if nh else []
    dims = tuple(R.pieces[v - 1][top] for v in q.vertices)
    return FilteredConcreteRep(ConcreteRep(q, dims, mats), Filtration(tuple(chains)))


def torsion_dims(R: TGradedRep) -> tuple:
    """Per vertex and piece, the dimension of the part killed in the colimit."""
    out = []
    for v in R.quiver.vertices:
        row = []
        for l in range(R.window):
            img = _to_top(R, v, l)
            row.append(R.pieces[v - 1][l] - (linalg.rank(img) if img and img[0] else 0))
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------
# strict maps


@dataclass(frozen=True)
class FilteredSpace:
    """Q^n with an increasing chain of subspaces (column bases) ending at Q^n."""

    dim: int
    levels: tuple

    def __post_init__(self):
        for lo, hi in zip(self.levels, self.levels[1:]):
            if not linalg.contains(hi, lo):
                raise FiltrationError("filtration levels must increase")

    @classmethod
    def coordinate(cls, chain: Sequence[int], n: int | None = None) -> "FilteredSpace":
        n = chain[-1] if n is None else n
        return cls(n, tuple(linalg.coordinate_subspace(n, k) for k in chain))

    @classmethod
    def of(cls, n: int, levels: Sequence) -> "FilteredSpace":
        return cls(n, tuple(linalg.frac_matrix(l) if l else [[] for _ in range(n)] for l in levels))

    def level(self, l: int) -> linalg.Matrix:
        return self.levels[min(l, len(self.levels) - 1)]

    def adapted(self) -> linalg.Matrix:
        return _adapted_sub_basis(list(self.levels) + [linalg.identity(self.dim)], self.dim)


def _image(phi: linalg.Matrix, basis: linalg.Matrix, rows: int) -> linalg.Matrix:
    k = linalg.ncols_of(basis)
    if k == 0 or rows == 0:
        return [[] for _ in range(rows)]
    return linalg.column_space(linalg.matmul(phi, basis, inner=len(basis), bcols=k))


def check_filtered(phi: linalg.Matrix, M: FilteredSpace, N: FilteredSpace) -> None:
    L = max(len(M.levels), len(N.levels))
    for l in range(L):
        if not linalg.contains(N.level(l), _image(phi, M.level(l), N.dim)):
            raise FiltrationError(f"the map sends level {l + 1} outside level {l + 1}")


def is_strict(phi: linalg.Matrix, M: FilteredSpace, N: FilteredSpace) -> bool:
    """φ(M_l) = φ(M) ∩ N_l at every level."""
    phi = linalg.frac_matrix(phi)
    check_filtered(phi, M, N)
    whole = _image(phi, linalg.identity(M.dim), N.dim)
    for l in range(max(len(M.levels), len(N.levels))):
        lhs = _image(phi, M.level(l), N.dim)
        rhs = linalg.intersect(whole, N.level(l))
        if not linalg.same_span(lhs, rhs):
            return False
    return True


def gr_map(phi: linalg.Matrix, M: FilteredSpace, N: FilteredSpace) -> list:
    """Level maps M_l/M_{l-1} -> N_l/N_{l-1} in adapted coordinates."""
    phi = linalg.frac_matrix(phi)
    check_filtered(phi, M, N)
    BM, BN = M.adapted(), N.adapted()
    BNinv = linalg.inverse(BN) if N.dim else []
    L = max(len(M.levels), len(N.levels))
    mdims = [linalg.span_dim(M.level(l)) for l in range(L)]
    ndims = [linalg.span_dim(N.level(l)) for l in range(L)]
    out = []
    for l in range(L):
        mlo = mdims[l - 1] if l else 0
        nlo = ndims[l - 1] if l else 0
        cols = [[BM[r][c] for r in range(M.dim)] for c in range(mlo, mdims[l])]
        level = []
        coords = [linalg.matmul(BNinv, linalg.matmul(phi, [[x] for x in col], inner=M.dim, bcols=1),
                                inner=N.dim, bcols=1) for col in cols]
        for r in range(nlo, ndims[l]):
            level.append([coords[c][r][0] for c in range(len(cols))])
        out.append(level)
    return out


def graded_dims(S: FilteredSpace, levels: int) -> list:
    dims = [linalg.span_dim(S.level(l)) for l in range(levels)]
    return [d - (dims[l - 1] if l else 0) for l, d in enumerate(dims)]


def is_exact_pair(phi: linalg.Matrix, psi: linalg.Matrix, mid: int, src: int | None = None) -> bool:
    """ψφ = 0 and im φ = ker ψ for matrices around a space of dimension ``mid``."""
    src = linalg.ncols_of(phi) if src is None else src
    if mid == 0:
        return True
    comp = linalg.matmul(psi, phi, inner=mid, bcols=src) if psi else []
    if not linalg.is_zero(comp):
        return False
    rk_phi = linalg.rank(phi) if phi and src else 0
    rk_psi = linalg.rank(psi) if psi and psi[0] else 0
    return rk_phi + rk_psi == mid


def gr_is_exact(phi, psi, M: FilteredSpace, N: FilteredSpace, P: FilteredSpace) -> bool:
    """Exactness of gr M -> gr N -> gr P at the middle, level by level."""
    L = max(len(M.levels), len(N.levels), len(P.levels))
    gphi, gpsi = gr_map(phi, M, N), gr_map(psi, N, P)
    mdims, ndims = graded_dims(M, L), graded_dims(N, L)
    return all(is_exact_pair(gphi[l], gpsi[l], ndims[l], mdims[l]) for l in range(L))


# ---------------------------------------------------------------------------
# the A_3 example where S_2^+ and gr do not commute


def a3_counterexample() -> FilteredConcreteRep:
    from .quiver import dynkin
    q = dynkin("A", 3, orientation=[True, False])
    rep = ConcreteRep(q, (2, 2, 2), {"a": [[0, 1], [0, 0]], "b": [[0, 0], [0, 0]]})
    return FilteredConcreteRep(rep, Filtration.two_step((1, 1, 1), (2, 2, 2)))


__all__ = [
    "reflect_plus", "reflect_minus", "are_isomorphic", "IsoResult", "intertwiner_basis",
    "check_intertwiner", "FilteredConcreteRep", "GradedRep", "gr", "graded_reflect_plus",
    "graded_reflect_minus", "graded_isomorphic", "induced_filtration_plus",
    "induced_filtration_minus", "TGradedRep", "rees", "filt", "torsion_dims", "FilteredSpace",
    "is_strict", "gr_map", "gr_is_exact", "is_exact_pair", "a3_counterexample",
]
