"""Plain-text quiver descriptions.

One statement per line, ``#`` starts a comment, whitespace is free::

    vertices 2
    arrow a: 1 -> 1
    arrow x: 2 -> 1
    framed 2
    dim 1 = 2
    dim 2 = 2
    filtration 1: 1 2

Further statements feed particular subcommands:

=====================================  =======================================
``map <arrow>: 0 1; 0 0``              rational matrix of a concrete representation (rows split by ``;``)
``alpha <vertex> = <n>``               α for the determinantal construction
``vmap <arrow>: 1``                    fixed entries of V(a); polynomials allowed (e.g. ``λ``)
``source <vertex>`` / ``target <vertex>``  block sources and targets, in order
``block <i> <j>: s*a + t*b.a + u``     block (target i, source j); a term is ``scalar*word`` or a bare scalar (identity); words are arrow ids joined by ``.`` in composition order
``product <k ...>: <word>``            path product tagged by the integers ``k ...``
``row <J ...> | <I ...> @ <k ...>``    bitableau row
``poly <expression>``                  polynomial to test
=====================================  =======================================

Vertices must be declared before they are used.  Chains shorter than the
longest one are padded with their top value; vertices without a filtration
line get the one-step chain ``(β_v)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import PolynomialSyntaxError, SymbolicMatrix, parse_polynomial
from .quiver import Arrow, Quiver, QuiverError
from .repspace import Filtration


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        return f"line {self.line}, column {self.col}: {self.message}"


@dataclass
class QuiverFile:
    quiver: Quiver
    dims: tuple | None
    filtration: Filtration | None
    maps: dict = field(default_factory=dict)
    alpha: tuple | None = None
    vmaps: dict = field(default_factory=dict)
    sources: list = field(default_factory=list)
    targets: list = field(default_factory=list)
    blocks: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    polys: list = field(default_factory=list)  # (text, line)
    filtered_vertices: set = field(default_factory=set)

    def require_dims(self) -> tuple:
        if self.dims is None:
            raise ParseError("this command needs a 'dim' line for every vertex", 1)
        return self.dims


_TOKEN = re.compile(r"\S+")
_INT = re.compile(r"-?\d+$")
_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class _Line:
    def __init__(self, text: str, number: int):
        self.text = text
        self.number = number

    def error(self, message: str, col: int = 1) -> ParseError:
        return ParseError(message, self.number, col)

    def col_of(self, fragment: str, start: int = 0) -> int:
        k = self.text.find(fragment, start)
        return (k if k >= 0 else 0) + 1


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.n: int | None = None
        self.arrows: list = []
        self.framed: set = set()
        self.dims: dict = {}
        self.chains: dict = {}
        self.chain_lines: dict = {}
        self.out = {
            "maps": {}, "alpha": {}, "vmaps": {}, "sources": [], "targets": [],
            "blocks": {}, "products": {}, "rows": [], "polys": [],
        }
        self.dim_lines: dict = {}

    # -- helpers -----------------------------------------------------------

    def int_at(self, ln: _Line, tok: str, col: int, what: str) -> int:
        if not _INT.match(tok):
            raise ln.error(f"expected an integer {what}, got {tok!r}", col)
        return int(tok)

    def vertex_at(self, ln: _Line, tok: str, col: int) -> int:
        if self.n is None:
            raise ln.error("declare 'vertices N' before referring to vertices", col)
        v = self.int_at(ln, tok, col, "vertex")
        if not 1 <= v <= self.n:
            raise ln.error(f"vertex {v} is not among 1..{self.n}", col)
        return v

    def arrow_at(self, ln: _Line, tok: str, col: int) -> Arrow:
        for a in self.arrows:
            if a.id == tok:
                return a
        raise ln.error(f"unknown arrow {tok!r}", col)

    def split_head(self, ln: _Line, body: str, keyword: str) -> tuple:
        if ":" not in body:
            raise ln.error(f"'{keyword}' needs a ':'", len(ln.text.rstrip()) + 1)
        head, rest = body.split(":", 1)
        return head, rest

    def tokens(self, s: str, offset: int) -> list:
        return [(m.group(), m.start() + offset + 1) for m in _TOKEN.finditer(s)]

    # -- statements ----------------------------------------------------------

    def run(self) -> QuiverFile:
        for number, raw in enumerate(self.text.splitlines(), start=1):
            text = raw.split("#", 1)[0]
            if not text.strip():
                continue
            ln = _Line(text, number)
            m = re.match(r"\s*(\S+)", text)
            keyword = m.group(1)
            body_start = m.end()
            handler = getattr(self, "do_" + keyword.replace("-", "_"), None)
            if handler is None:
                raise ln.error(f"unknown statement {keyword!r}", m.start(1) + 1)
            handler(ln, text[body_start:], body_start)
        return self.finish()

    def do_vertices(self, ln, body, off):
        toks = self.tokens(body, off)
        if len(toks) != 1:
            raise ln.error("expected 'vertices N'", off + 1)
        if self.n is not None:
            raise ln.error("'vertices' given twice", toks[0][1])
        n = self.int_at(ln, *toks[0], "vertex count")
        if n < 0:
            raise ln.error("vertex count must be nonnegative", toks[0][1])
        self.n = n

    def do_arrow(self, ln, body, off):
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(\S+)\s*->\s*(\S+)\s*$", body)
        if not m:
            raise ln.error("expected 'arrow <id>: <tail> -> <head>'", off + 1)
        aid = m.group(1)
        if any(a.id == aid for a in self.arrows):
            raise ln.error(f"arrow {aid!r} defined twice", m.start(1) + off + 1)
        tail = self.vertex_at(ln, m.group(2), m.start(2) + off + 1)
        head = self.vertex_at(ln, m.group(3), m.start(3) + off + 1)
        self.arrows.append(Arrow(aid, tail, head))

    def do_framed(self, ln, body, off):
        toks = self.tokens(body, off)
        if not toks:
            raise ln.error("expected 'framed <vertex>'", off + 1)
        for tok, col in toks:
            self.framed.add(self.vertex_at(ln, tok, col))

    def do_dim(self, ln, body, off):
        m = re.match(r"\s*(\S+)\s*=\s*(\S+)\s*$", body)
        if not m:
            raise ln.error("expected 'dim <vertex> = <n>'", off + 1)
        v = self.vertex_at(ln, m.group(1), m.start(1) + off + 1)
        d = self.int_at(ln, m.group(2), m.start(2) + off + 1, "dimension")
        if d < 0:
            raise ln.error("dimensions must be nonnegative", m.start(2) + off + 1)
        if v in self.dims:
            raise ln.error(f"dimension of vertex {v} given twice", m.start(1) + off + 1)
        self.dims[v] = d
        self.dim_lines[v] = ln.number

    def do_filtration(self, ln, body, off):
        head, rest = self.split_head(ln, body, "filtration")
        htoks = self.tokens(head, off)
        if len(htoks) != 1:
            raise ln.error("expected 'filtration <vertex>: d1 d2 ...'", off + 1)
        v = self.vertex_at(ln, *htoks[0])
        if v in self.chains:
            raise ln.error(f"filtration of vertex {v} given twice", htoks[0][1])
        rtoks = self.tokens(rest, off + len(head) + 1)
        if not rtoks:
            raise ln.error("a filtration needs at least one dimension", off + len(head) + 2)
        chain = []
        for tok, col in rtoks:
            d = self.int_at(ln, tok, col, "subspace dimension")
            if d < 0:
                raise ln.error("subspace dimensions must be nonnegative", col)
            if chain and d < chain[-1]:
                raise ln.error(f"filtration is not monotone: {d} follows {chain[-1]}", col)
            chain.append(d)
        self.chains[v] = chain
        self.chain_lines[v] = ln.number

    def _matrix(self, ln, rest, off, poly: bool):
        rows = []
        pos = off
        for chunk in rest.split(";"):
            row = []
            for tok, col in self.tokens(chunk, pos):
                if poly:
                    try:
                        row.append(parse_polynomial(tok, allow_new_scalars=True))
                    except PolynomialSyntaxError as exc:
                        raise ln.error(str(exc), col) from None
                else:
                    try:
                        row.append(Fraction(tok))
                    except (ValueError, ZeroDivisionError):
                        raise ln.error(f"expected a rational number, got {tok!r}", col) from None
            rows.append(row)
            pos += len(chunk) + 1
        if rows == [[]]:
            return []
        if any(len(r) != len(rows[0]) for r in rows):
            raise ln.error("matrix rows have different lengths", off + 1)
        return rows

    def _arrow_head(self, ln, body, off, keyword):
        head, rest = self.split_head(ln, body, keyword)
        htoks = self.tokens(head, off)
        if len(htoks) != 1:
            raise ln.error(f"expected '{keyword} <arrow>: ...'", off + 1)
        a = self.arrow_at(ln, *htoks[0])
        return a, rest, off + len(head) + 1

    def do_map(self, ln, body, off):
        a, rest, roff = self._arrow_head(ln, body, off, "map")
        if a.id in self.out["maps"]:
            raise ln.error(f"map for arrow {a.id!r} given twice", off + 1)
        self.out["maps"][a.id] = (self._matrix(ln, rest, roff, poly=False), ln.number)

    def do_vmap(self, ln, body, off):
        a, rest, roff = self._arrow_head(ln, body, off, "vmap")
        rows = self._matrix(ln, rest, roff, poly=True)
        self.out["vmaps"][a.id] = (rows, ln.number)

    def do_alpha(self, ln, body, off):
        m = re.match(r"\s*(\S+)\s*=\s*(\S+)\s*$", body)
        if not m:
            raise ln.error("expected 'alpha <vertex> = <n>'", off + 1)
        v = self.vertex_at(ln, m.group(1), m.start(1) + off + 1)
        d = self.int_at(ln, m.group(2), m.start(2) + off + 1, "dimension")
        if d < 0:
            raise ln.error("dimensions must be nonnegative", m.start(2) + off + 1)
        self.out["alpha"][v] = d

    def do_source(self, ln, body, off):
        for tok, col in self.tokens(body, off):
            self.out["sources"].append(self.vertex_at(ln, tok, col))

    def do_target(self, ln, body, off):
        for tok, col in self.tokens(body, off):
            self.out["targets"].append(self.vertex_at(ln, tok, col))

    def _word(self, ln, word: str, col: int) -> tuple:
        """Composition-order word ``b.a`` -> traversal tuple ('a', 'b')."""
        parts = word.split(".")
        for p in parts:
            if not _ID.match(p):
                raise ln.error(f"bad path word {word!r}", col)
            self.arrow_at(ln, p, col)
        return tuple(reversed(parts))

    def do_block(self, ln, body, off):
        head, rest = self.split_head(ln, body, "block")
        htoks = self.tokens(head, off)
        if len(htoks) != 2:
            raise ln.error("expected 'block <i> <j>: terms'", off + 1)
        i = self.int_at(ln, *htoks[0], "block row")
        j = self.int_at(ln, *htoks[1], "block column")
        terms = []
        roff = off + len(head) + 1
        for m in re.finditer(r"[^+]+", rest):
            piece = m.group().strip()
            col = roff + m.start() + 1 + (len(m.group()) - len(m.group().lstrip()))
            if not piece:
                raise ln.error("empty term", col)
            if "*" in piece:
                scalar, word = (x.strip() for x in piece.split("*", 1))
                path = self._word(ln, word, col)
            else:
                scalar, path = piece, ()
            if not _ID.match(scalar):
                raise ln.error(f"bad scalar name {scalar!r}", col)
            terms.append((scalar, path))
        self.out["blocks"][(i - 1, j - 1)] = (terms, ln.number)

    def do_product(self, ln, body, off):
        head, rest = self.split_head(ln, body, "product")
        tag = tuple(self.int_at(ln, tok, col, "tag entry") for tok, col in self.tokens(head, off))
        if not tag:
            raise ln.error("a product needs an integer tag", off + 1)
        rtoks = self.tokens(rest, off + len(head) + 1)
        if len(rtoks) != 1:
            raise ln.error("expected one path word", off + len(head) + 2)
        self.out["products"][tag] = (self._word(ln, *rtoks[0]), ln.number)

    def do_row(self, ln, body, off):
        m = re.match(r"([^|@]*)\|([^|@]*)@(.*)$", body)
        if not m:
            raise ln.error("expected 'row J ... | I ... @ tag ...'", off + 1)
        parts = []
        for g in (1, 2, 3):
            toks = self.tokens(m.group(g), off + m.start(g))
            parts.append(tuple(self.int_at(ln, tok, col, "index") for tok, col in toks))
        J, I, tag = parts
        if not J or len(J) != len(I):
            raise ln.error("J and I need the same positive length", off + 1)
        self.out["rows"].append((J, I, tag, ln.number))

    def do_poly(self, ln, body, off):
        if not body.strip():
            raise ln.error("expected 'poly <expression>'", off + 1)
        self.out["polys"].append((body.strip(), ln.number))

    # -- assembly ------------------------------------------------------------

    def finish(self) -> QuiverFile:
        if self.n is None:
            raise ParseError("missing 'vertices N' statement", 1)
        flags = tuple(v in self.framed for v in range(1, self.n + 1))
        frames = []
        for v in sorted(self.framed):
            heads = {a.head for a in self.arrows if a.tail == v and a.head != v}
            if len(heads) == 1:
                frames.append((v, heads.pop()))
        try:
            q = Quiver(self.n, tuple(self.arrows), flags, tuple(frames))
        except QuiverError as exc:
            raise ParseError(str(exc), 1) from None
        dims = None
        if self.dims:
            missing = [v for v in q.vertices if v not in self.dims]
            if missing:
                raise ParseError(f"no 'dim' line for vertex {missing[0]}", max(self.dim_lines.values()))
            dims = tuple(self.dims[v] for v in q.vertices)
        filt = None
        if self.chains:
            if dims is None:
                raise ParseError("a filtration needs 'dim' lines", min(self.chain_lines.values()))
            for v, c in self.chains.items():
                if c[-1] != dims[v - 1]:
                    raise ParseError(f"filtration of vertex {v} ends at {c[-1]} but dim is {dims[v - 1]}",
                                     self.chain_lines[v])
            length = max(len(c) for c in self.chains.values())
            chains = []
            for v in q.vertices:
                c = self.chains.get(v, [dims[v - 1]])
                chains.append(tuple(c) + (c[-1],) * (length - len(c)))
            filt = Filtration(tuple(chains))
        out = self.out
        maps = {}
        for aid, (rows, line) in out["maps"].items():
            if dims is not None:
                a = q.arrow(aid)
                shape = (dims[a.head - 1], dims[a.tail - 1])
                got = (len(rows), len(rows[0]) if rows else shape[1])
                if got != shape and not (shape[0] == 0 and not rows):
                    raise ParseError(f"map {aid} must be {shape[0]}x{shape[1]}, got {got[0]}x{got[1]}", line)
            maps[aid] = rows
        vmaps = {aid: SymbolicMatrix.from_rows(rows) if rows else None for aid, (rows, _) in out["vmaps"].items()}
        alpha = None
        if out["alpha"]:
            alpha = tuple(out["alpha"].get(v, 0) for v in q.vertices)
        blocks = {k: terms for k, (terms, _) in out["blocks"].items()}
        products = {k: w for k, (w, _) in out["products"].items()}
        return QuiverFile(q, dims, filt, maps, alpha, vmaps, out["sources"], out["targets"], blocks,
                          products, out["rows"], out["polys"], set(self.chains))


def parse_quiver_file(text: str) -> QuiverFile:
    return _Parser(text).run()


__all__ = ["ParseError", "QuiverFile", "parse_quiver_file"]
