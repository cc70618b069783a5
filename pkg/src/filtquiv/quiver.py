"""Quivers, dimension vectors, paths and pathways.

Vertices are 1-based integers.  Arrows carry a string id, a tail and a head.
Framed copies of vertices are ordinary vertices with a flag set; their label
is ``i♮`` where ``i`` is the vertex they frame.

Constructors label arrows with lowercase letters in edge order (``a``, ``b``,
...), so a general representation prints as ``a12``, ``b21`` and so on.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Arrow(NamedTuple):
    id: str
    tail: int
    head: int


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    num_vertices: int
    arrows: tuple
    framed: tuple = ()
    # framed vertex -> vertex it frames
    frames: tuple = ()

    def __post_init__(self):
        if self.num_vertices < 0:
            raise QuiverError("vertex count must be nonnegative")
        arrows = tuple(Arrow(str(a[0]), int(a[1]), int(a[2])) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError(f"arrow ids must be unique, got {ids}")
        for a in arrows:
            for end in (a.tail, a.head):
                if not 1 <= end <= self.num_vertices:
                    raise QuiverError(f"arrow {a.id} touches vertex {end} outside 1..{self.num_vertices}")
        framed = tuple(bool(x) for x in self.framed) or (False,) * self.num_vertices
        if len(framed) != self.num_vertices:
            raise QuiverError("framed flags must list every vertex")
        object.__setattr__(self, "framed", framed)
        object.__setattr__(self, "frames", tuple(tuple(p) for p in self.frames))

    @property
    def vertices(self) -> range:
        return range(1, self.num_vertices + 1)

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise QuiverError(f"no arrow named {aid!r}")

    def arrow_ids(self) -> list:
        return [a.id for a in self.arrows]

    def is_framed(self, v: int) -> bool:
        return self.framed[v - 1]

    def vertex_label(self, v: int) -> str:
        for fv, base in self.frames:
            if fv == v:
                return f"{base}♮"
        return str(v)

    def arrows_into(self, v: int) -> list:
        return [a for a in self.arrows if a.head == v]

    def arrows_out_of(self, v: int) -> list:
        return [a for a in self.arrows if a.tail == v]

    def has_loop(self, v: int) -> bool:
        return any(a.tail == v and a.head == v for a in self.arrows)

    def is_sink(self, v: int) -> bool:
        return all(a.tail != v for a in self.arrows)

    def is_source(self, v: int) -> bool:
        return all(a.head != v for a in self.arrows)

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.head] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for a in self.arrows_out_of(v):
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    ready.append(a.head)
        return seen == self.num_vertices

    def reflected_at(self, v: int) -> "Quiver":
        """Same quiver with every arrow touching ``v`` reversed (ids kept)."""
        arrows = []
        for a in self.arrows:
            if a.tail == v and a.head == v:
                raise QuiverError(f"cannot reflect at vertex {v}: it carries a loop")
            if v in (a.tail, a.head):
                arrows.append(Arrow(a.id, a.head, a.tail))
            else:
                arrows.append(a)
        return Quiver(self.num_vertices, tuple(arrows), self.framed, self.frames)


# ---------------------------------------------------------------------------
# dimension vectors and forms


def dim_vector(q: Quiver, values: Iterable[int]) -> tuple:
    vals = tuple(int(x) for x in values)
    if len(vals) != q.num_vertices:
        raise QuiverError(f"dimension vector has length {len(vals)}, quiver has {q.num_vertices} vertices")
    if any(x < 0 for x in vals):
        raise QuiverError("dimension vectors are nonnegative")
    return vals


def _check_len(q: Quiver, *vecs: Sequence[int]) -> None:
    for v in vecs:
        if len(v) != q.num_vertices:
            raise QuiverError(f"vector {tuple(v)} does not match {q.num_vertices} vertices")


def euler_form(q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    _check_len(q, alpha, beta)
    total = sum(x * y for x, y in zip(alpha, beta))
    for a in q.arrows:
        total -= alpha[a.tail - 1] * beta[a.head - 1]
    return total


def symmetrized_form(q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    return euler_form(q, alpha, beta) + euler_form(q, beta, alpha)


def unit_vector(q: Quiver, i: int) -> tuple:
    return tuple(int(v == i) for v in q.vertices)


def sigma(q: Quiver, i: int, beta: Sequence[int]) -> tuple:
    """Simple reflection of a dimension vector at a loop-free vertex."""
    _check_len(q, beta)
    if q.has_loop(i):
        raise QuiverError(f"vertex {i} carries a loop; the reflection is not an involution there")
    e = unit_vector(q, i)
    c = symmetrized_form(q, beta, e)
    return tuple(b - c * x for b, x in zip(beta, e))


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """A path given by its start vertex and the arrows in traversal order.

    The trivial path ``e_i`` has no arrows.  Rendering follows composition
    order, so traversing ``a`` then ``b`` prints as ``ba``.
    """

    start: int
    arrows: tuple = ()
    end: int = field(default=0)

    def __post_init__(self):
        if not self.end:
            object.__setattr__(self, "end", self.start)

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def tail(self) -> int:
        return self.start

    @property
    def head(self) -> int:
        return self.end

    def word(self) -> tuple:
        """Arrow ids in composition order (last traversed first)."""
        return tuple(reversed(self.arrows))

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.start}"
        return "".join(self.word())


def trivial_path(v: int) -> Path:
    return Path(v, (), v)


def path_from_arrows(q: Quiver, traversal: Sequence[str]) -> Path:
    """Build a path from arrow ids listed in traversal order."""
    if not traversal:
        raise QuiverError("use trivial_path for paths of length zero")
    arrows = [q.arrow(x) for x in traversal]
    for prev, nxt in zip(arrows, arrows[1:]):
        if nxt.tail != prev.head:
            raise QuiverError(f"arrows {prev.id} and {nxt.id} are not composable")
    return Path(arrows[0].tail, tuple(a.id for a in arrows), arrows[-1].head)


def compose(p: Path, q: Path) -> Path | None:
    """The product ``p q`` (first q, then p); None stands for the zero path."""
    if p.tail != q.head:
        return None
    if not p.arrows:
        return q
    if not q.arrows:
        return p
    return Path(q.start, q.arrows + p.arrows, p.end)


def _has_square_suffix(word: list) -> bool:
    n = len(word)
    for k in range(1, n // 2 + 1):
        if word[n - 2 * k:n - k] == word[n - k:]:
            return True
    return False


def is_reduced(word: Sequence[str]) -> bool:
    """True when the arrow word has no factor of the form ww."""
    w = list(word)
    n = len(w)
    for k in range(1, n // 2 + 1):
        for s in range(0, n - 2 * k + 1):
            if w[s:s + k] == w[s + k:s + 2 * k]:
                return False
    return True


class PathwayOverflowError(RuntimeError):
    """Square-free paths still exist at the length cap (the set may be infinite)."""


DEFAULT_PATHWAY_CAP = 24


def _walk_pathways(q: Quiver, visit, max_length: int) -> None:
    out_arrows = {v: q.arrows_out_of(v) for v in q.vertices}

    def dfs(start, end, word):
        if visit(start, end, word) is False:
            return False
        if len(word) == max_length:
            if any(not _has_square_suffix(word + [a.id]) for a in out_arrows[end]):
                raise PathwayOverflowError(
                    f"square-free paths from vertex {start} exceed length {max_length}")
            return True
        for a in out_arrows[end]:
            word.append(a.id)
            if not _has_square_suffix(word):
                if dfs(start, a.head, word) is False:
                    return False
            word.pop()
        return True

    for v in q.vertices:
        if dfs(v, v, []) is False:
            return


def enumerate_pathways(q: Quiver, max_length: int = DEFAULT_PATHWAY_CAP) -> dict:
    """All pathways, grouped by (tail, head).

    Includes the trivial path at each vertex.  Raises PathwayOverflowError
    when square-free paths reach ``max_length`` and can still be extended.
    """
    found: dict = {}

    def visit(start, end, word):
        found.setdefault((start, end), set()).add(Path(start, tuple(word), end))

    _walk_pathways(q, visit, max_length)
    return found


def max_pathways(q: Quiver, max_length: int = DEFAULT_PATHWAY_CAP) -> int:
    paths = enumerate_pathways(q, max_length)
    return max((len(s) for s in paths.values()), default=0)


def at_most_two_pathways(q: Quiver, max_length: int = DEFAULT_PATHWAY_CAP) -> bool:
    """Whether every ordered vertex pair has at most two pathways.

    Stops at the first pair that reaches three, so it also answers for
    quivers whose pathway sets are infinite.
    """
    counts: dict = {}
    verdict = [True]

    def visit(start, end, word):
        counts[(start, end)] = counts.get((start, end), 0) + 1
        if counts[(start, end)] > 2:
            verdict[0] = False
            return False

    try:
        _walk_pathways(q, visit, max_length)
    except PathwayOverflowError:
        # infinitely many square-free words give more than two somewhere
        return False
    return verdict[0]


def all_paths_acyclic(q: Quiver) -> dict:
    """Plain path enumeration by DFS (acyclic quivers only)."""
    if not q.is_acyclic():
        raise QuiverError("plain path enumeration needs an acyclic quiver")
    found: dict = {}

    def dfs(start, end, word):
        found.setdefault((start, end), set()).add(Path(start, tuple(word), end))
        for a in q.arrows_out_of(end):
            dfs(start, a.head, word + [a.id])

    for v in q.vertices:
        dfs(v, v, [])
    return found


# ---------------------------------------------------------------------------
# constructors


def letter_ids(n: int) -> list:
    letters = string.ascii_lowercase
    if n <= len(letters):
        return list(letters[:n])
    return [f"a{k}" for k in range(1, n + 1)]


def _orient(edges, orientation, ids) -> tuple:
    if orientation is None:
        orientation = [True] * len(edges)
    orientation = list(orientation)
    if len(orientation) != len(edges):
        raise QuiverError(f"orientation list needs {len(edges)} entries, got {len(orientation)}")
    ids = list(ids) if ids is not None else letter_ids(len(edges))
    if len(ids) != len(edges):
        raise QuiverError("one arrow id per edge is required")
    arrows = []
    for (s, t), keep, aid in zip(edges, orientation, ids):
        arrows.append(Arrow(aid, s, t) if keep else Arrow(aid, t, s))
    return tuple(arrows)


def dynkin_edges(family: str, r: int) -> list:
    """Edges of the Dynkin diagram, each listed in its preferred direction."""
    family = family.upper()
    if family == "A":
        if r < 1:
            raise QuiverError("A_r needs r >= 1")
        return [(i, i + 1) for i in range(1, r)]
    if family == "D":
        if r < 4:
            raise QuiverError("D_r needs r >= 4")
        return [(i, i + 1) for i in range(1, r - 2)] + [(r - 2, r - 1), (r - 2, r)]
    if family == "E":
        if r not in (6, 7, 8):
            raise QuiverError("E_r needs r in {6, 7, 8}")
        chain = [1, 2, 3, 5, 6, 7, 8][: r - 1]
        return [(chain[k], chain[k + 1]) for k in range(len(chain) - 1)] + [(3, 4)]
    raise QuiverError(f"unknown Dynkin family {family!r}")


def dynkin(family: str, r: int, orientation: Sequence[bool] | None = None,
           ids: Sequence[str] | None = None) -> Quiver:
    """ADE quiver.  ``orientation[k]`` False reverses the k-th edge."""
    edges = dynkin_edges(family, r)
    return Quiver(r, _orient(edges, orientation, ids))


def affine_a(r: int, orientation: Sequence[bool] | None = None,
             ids: Sequence[str] | None = None) -> Quiver:
    """Affine Ã_r: a cycle on r+1 vertices, edges (i, i+1) and (r+1, 1)."""
    if r < 1:
        raise QuiverError("affine A_r needs r >= 1")
    edges = [(i, i + 1) for i in range(1, r + 1)] + [(r + 1, 1)]
    return Quiver(r + 1, _orient(edges, orientation, ids))


def jordan(m: int, ids: Sequence[str] | None = None) -> Quiver:
    """One vertex with ``m`` loops."""
    if m < 1:
        raise QuiverError("the m-Jordan quiver needs m >= 1")
    ids = list(ids) if ids is not None else letter_ids(m)
    return Quiver(1, tuple(Arrow(x, 1, 1) for x in ids))


def kronecker(k: int, ids: Sequence[str] | None = None) -> Quiver:
    """Two vertices with ``k`` parallel arrows 1 -> 2."""
    if k < 1:
        raise QuiverError("the k-Kronecker quiver needs k >= 1")
    ids = list(ids) if ids is not None else letter_ids(k)
    return Quiver(2, tuple(Arrow(x, 1, 2) for x in ids))


def opposite(q: Quiver) -> Quiver:
    return Quiver(q.num_vertices, tuple(Arrow(a.id, a.head, a.tail) for a in q.arrows), q.framed, q.frames)


def double(q: Quiver, suffix: str = "op") -> Quiver:
    extra = tuple(Arrow(a.id + suffix, a.head, a.tail) for a in q.arrows)
    return Quiver(q.num_vertices, q.arrows + extra, q.framed, q.frames)


def framed(q: Quiver, vertices: Iterable[int] | None = None, ids=None) -> Quiver:
    """Adjoin a framed copy ``i♮`` of each chosen vertex and an arrow ``i♮ -> i``.

    Framed copies are numbered after the existing vertices.  Framing arrows
    are named ``x`` when only one vertex is framed and ``x1``, ``x2``, ...
    otherwise, unless ``ids`` (a mapping vertex -> id) says differently.
    """
    chosen = list(vertices) if vertices is not None else list(q.vertices)
    for v in chosen:
        if not 1 <= v <= q.num_vertices:
            raise QuiverError(f"cannot frame vertex {v}")
    ids = dict(ids or {})
    p = q.num_vertices
    arrows = list(q.arrows)
    frames = list(q.frames)
    flags = list(q.framed)
    for k, v in enumerate(chosen, start=1):
        aid = ids.get(v, "x" if len(chosen) == 1 else f"x{v}")
        arrows.append(Arrow(aid, p + k, v))
        frames.append((p + k, v))
        flags.append(True)
    return Quiver(p + len(chosen), tuple(arrows), tuple(flags), tuple(frames))
