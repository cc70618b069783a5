"""Batch command-line front end.

Exit codes: 0 success, 1 a check failed or a computation limit was hit,
2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, linalg
from . import springer as sp
from .action import (HETEROGENEOUS, CapExceededError, diagonal_monomial_count, invariant_space_dim,
                     is_sl_semi_invariant, is_unipotent_invariant, torus_weight)
from .parser import ParseError, QuiverFile, parse_quiver_file
from .poly import MatrixTooLargeError, PolynomialSyntaxError, determinant, parse_polynomial
from .quiver import PathwayOverflowError, QuiverError, enumerate_pathways, euler_form
from .reflect import (FilteredConcreteRep, are_isomorphic, gr, graded_isomorphic, graded_reflect_minus,
                      graded_reflect_plus, induced_filtration_minus, induced_filtration_plus,
                      reflect_minus, reflect_plus)
from .repspace import ConcreteRep, Filtration, FiltrationError, RepresentationError, general_rep
from .semiinv import (Bitableau, BitableauRow, DWProblem, DZProblem, DZTerm, ProblemError,
                      bideterminant, dw_generators, dz_auto_problem, dz_generators, dz_matrix,
                      is_block_standard, path_matrix)
from .verify import random_rss, l_suite, run_all


class UsageError(ValueError):
    pass


INPUT_ERRORS = (ParseError, QuiverError, ProblemError, FiltrationError, RepresentationError,
                PolynomialSyntaxError, UsageError, OSError, KeyError, IndexError)
LIMIT_ERRORS = (CapExceededError, PathwayOverflowError, MatrixTooLargeError)


# ---------------------------------------------------------------------------
# rendering


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def fmt_matrix(m) -> list:
    return [[fmt(x) for x in row] for row in m]


class Report:
    """Collects text lines and a JSON payload; prints one of them."""

    def __init__(self, command: str):
        self.lines: list = []
        self.data: dict = {"command": command}
        self.ok = True

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self, as_json: bool, out) -> None:
        if as_json:
            self.data["ok"] = self.ok
            out.write(json.dumps(self.data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def weight_str(f, space) -> str:
    w = torus_weight(f, space)
    if w == HETEROGENEOUS:
        return HETEROGENEOUS
    chi = w.as_character()
    if chi is not None:
        return str(chi)
    return "; ".join(f"{v}: {list(e)}" for v, e in w.coords)


# ---------------------------------------------------------------------------
# commands


def load(path: str) -> QuiverFile:
    return parse_quiver_file(Path(path).read_text(encoding="utf-8"))


def concrete(qf: QuiverFile) -> ConcreteRep:
    dims = qf.require_dims()
    for a in qf.quiver.arrows:
        if a.id not in qf.maps:
            raise UsageError(f"no 'map' line for arrow {a.id}")
    return ConcreteRep(qf.quiver, dims, qf.maps)


def cmd_pathways(args, rep: Report) -> None:
    qf = load(args.file)
    paths = enumerate_pathways(qf.quiver, args.cap or 24)
    rep.data["pathways"] = {}
    for (s, t) in sorted(paths):
        words = sorted(paths[(s, t)], key=lambda p: (p.length, str(p)))
        rep.line(f"{len(words)} pathways ({s},{t}): " + ", ".join(str(p) for p in words))
        rep.data["pathways"][f"{s},{t}"] = [str(p) for p in words]
    most = max((len(v) for v in paths.values()), default=0)
    rep.data["at_most_two"] = most <= 2
    rep.line(f"at most two pathways between any two vertices: {'yes' if most <= 2 else 'no'}")


def parse_vector(text: str, n: int, what: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"{what} must be a list of integers") from None
    if len(vals) != n:
        raise UsageError(f"{what} needs {n} entries")
    return vals


def cmd_euler(args, rep: Report) -> None:
    qf = load(args.file)
    q = qf.quiver
    n = q.num_vertices
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    matrix = [[euler_form(q, u, v) for v in units] for u in units]
    rep.data["matrix"] = matrix
    rep.line("Euler form matrix ⟨e_i, e_j⟩:")
    for row in matrix:
        rep.line("  " + " ".join(f"{x:3d}" for x in row))
    if qf.dims is not None:
        beta = qf.dims
        alpha = parse_vector(" ".join(args.alpha), n, "--alpha") if args.alpha else (qf.alpha or beta)
        val = euler_form(q, alpha, beta)
        rep.data.update(alpha=list(alpha), beta=list(beta), value=val)
        rep.line(f"⟨{list(alpha)}, {list(beta)}⟩ = {val}")


def _rep_lines(rep: Report, W: ConcreteRep, key: str) -> None:
    rep.data[key] = {"dims": list(W.dims), "arrows": {}}
    rep.line(f"dimension vector {list(W.dims)}")
    for a in W.quiver.arrows:
        m = fmt_matrix(W.mats[a.id])
        rep.data[key]["arrows"][a.id] = {"tail": a.tail, "head": a.head, "matrix": m}
        rep.line(f"  {a.id}: {a.tail} -> {a.head}  {m}")


def _vertex_option(args) -> tuple:
    if (args.sink is None) == (args.source is None):
        raise UsageError("give exactly one of --sink or --source")
    return ("sink", args.sink) if args.sink is not None else ("source", args.source)


def cmd_reflect(args, rep: Report) -> None:
    qf = load(args.file)
    W = concrete(qf)
    kind, v = _vertex_option(args)
    out = reflect_plus(W, v) if kind == "sink" else reflect_minus(W, v)
    rep.line(f"reflection at {kind} {v}")
    _rep_lines(rep, out, "result")
    back = reflect_minus(out, v) if kind == "sink" else reflect_plus(out, v)
    iso = are_isomorphic(back, W, trials=args.trials, seed=args.seed)
    rep.data["round_trip"] = iso.outcome
    rep.line(f"round trip isomorphic to the input: {iso.outcome}")


def cmd_gr(args, rep: Report) -> None:
    qf = load(args.file)
    W = concrete(qf)
    f = qf.filtration or Filtration.trivial(W.dims)
    X = FilteredConcreteRep(W, f)
    G = gr(X)
    rep.data["pieces"] = [list(p) for p in G.pieces]
    rep.line("graded pieces per vertex: " + ", ".join(f"{v}: {list(p)}" for v, p in zip(qf.quiver.vertices, G.pieces)))
    if args.sink is None and args.source is None:
        return
    kind, v = _vertex_option(args)
    if kind == "sink":
        left, right = graded_reflect_plus(G, v), gr(induced_filtration_plus(X, v))
        names = ("S^+ gr X", "gr S^+ X")
    else:
        left, right = graded_reflect_minus(G, v), gr(induced_filtration_minus(X, v))
        names = ("S^- gr X", "gr S^- X")
    iso = graded_isomorphic(left, right, trials=args.trials, seed=args.seed)
    rep.data["reflected"] = {names[0]: [list(p) for p in left.pieces],
                             names[1]: [list(p) for p in right.pieces], "isomorphic": iso.outcome}
    rep.line(f"{names[0]} pieces: {[list(p) for p in left.pieces]}")
    rep.line(f"{names[1]} pieces: {[list(p) for p in right.pieces]}")
    rep.line(f"isomorphic as graded representations: {iso.outcome}")


def _generator_report(rep: Report, gens: list, space) -> None:
    rep.data["generators"] = []
    rep.line(f"{len(gens)} generators")
    for g in gens:
        sem = is_sl_semi_invariant(g, space)
        entry = {"polynomial": str(g), "degree": g.degree(), "weight": weight_str(g, space),
                 "semi_invariant": bool(sem)}
        rep.data["generators"].append(entry)
        rep.ok &= bool(sem)
        rep.line(f"  {g}    degree {g.degree()}, weight {entry['weight']}"
                 + ("" if sem else "  NOT semi-invariant"))


def cmd_dw(args, rep: Report) -> None:
    qf = load(args.file)
    beta = qf.require_dims()
    if qf.alpha is None:
        raise UsageError("the determinantal construction needs 'alpha' lines")
    V = {k: m for k, m in qf.vmaps.items() if m is not None}
    p = DWProblem(qf.quiver, beta, qf.alpha, V or None)
    space = general_rep(qf.quiver, beta)
    _generator_report(rep, dw_generators(p, space), space)


def dz_problem(qf: QuiverFile, auto: bool) -> DZProblem:
    beta = qf.require_dims()
    if not qf.sources or not qf.targets:
        raise UsageError("the block construction needs 'source' and 'target' lines")
    if auto:
        return dz_auto_problem(qf.quiver, beta, qf.sources, qf.targets)
    entries = {k: tuple(DZTerm(s, w) for s, w in terms) for k, terms in qf.blocks.items()}
    return DZProblem(qf.quiver, beta, tuple(qf.sources), tuple(qf.targets), entries)


def cmd_dz(args, rep: Report) -> None:
    qf = load(args.file)
    p = dz_problem(qf, args.auto)
    det = determinant(dz_matrix(p))
    rep.data["determinant"] = str(det)
    rep.line(f"det(M) = {det}")
    space = general_rep(qf.quiver, p.beta)
    _generator_report(rep, dz_generators(p), space)


def cmd_bidet(args, rep: Report) -> None:
    qf = load(args.file)
    space = general_rep(qf.quiver, qf.require_dims(), qf.filtration)
    if not qf.rows:
        raise UsageError("no 'row' lines")
    products = {}
    for tag, word in qf.products.items():
        start = qf.quiver.arrow(word[0]).tail
        products[tag] = path_matrix(space, word, start)
    rows = []
    for J, I, tag, line in qf.rows:
        if tag not in products:
            raise ParseError(f"no 'product' line for tag {' '.join(map(str, tag))}", line)
        rows.append(BitableauRow(J, I, tag))
    t = Bitableau(tuple(rows))
    value = bideterminant(t, products)
    std = is_block_standard(t)
    inv = is_unipotent_invariant(value, space)
    rep.data.update(value=str(value), block_standard=std, invariant=bool(inv))
    rep.line(f"bideterminant = {value}")
    rep.line(f"block standard: {'yes' if std else 'no'}")
    rep.line(f"unipotent invariant: {'yes' if inv else 'no'}")


def _polys(qf: QuiverFile, extra: list, names: dict) -> list:
    out = []
    for text, line in qf.polys:
        try:
            out.append((text, parse_polynomial(text, names)))
        except PolynomialSyntaxError as exc:
            raise ParseError(str(exc), line) from None
    for text in extra:
        out.append((text, parse_polynomial(text, names)))
    if not out:
        raise UsageError("no polynomial given (use 'poly' lines or --poly)")
    return out


def cmd_invariant_check(args, rep: Report) -> None:
    qf = load(args.file)
    beta = qf.require_dims()
    f = qf.filtration or Filtration.complete(beta)
    space = general_rep(qf.quiver, beta, f)
    rep.data["results"] = []
    for text, p in _polys(qf, args.poly or [], space.names()):
        res = is_unipotent_invariant(p, space)
        entry = {"polynomial": str(p), "invariant": bool(res), "weight": weight_str(p, space)}
        if not res:
            v, i, j = res.generator
            entry["failure"] = {"vertex": v, "root": [i, j], "difference": str(res.difference)}
        rep.data["results"].append(entry)
        rep.ok &= bool(res)
        tail = "" if res else f"  (u_{res.generator[1]}{res.generator[2]} at vertex {res.generator[0]} changes it by {res.difference})"
        rep.line(f"{p}: {'invariant' if res else 'NOT invariant'}, weight {entry['weight']}{tail}")


def cmd_invariant_dim(args, rep: Report) -> None:
    qf = load(args.file)
    beta = qf.require_dims()
    f = qf.filtration or Filtration.complete(beta)
    space = general_rep(qf.quiver, beta, f)
    kwargs = {"cap": args.cap} if args.cap else {}
    inv = invariant_space_dim(space, args.degree, **kwargs)
    diag = diagonal_monomial_count(space, args.degree)
    rep.data.update(degree=args.degree, invariant_dim=inv.dimension, diagonal_dim=diag,
                    by_degree={str(k): v for k, v in inv.by_degree.items()})
    rep.line(f"invariants of degree <= {args.degree}: {inv.dimension}")
    rep.line("  by degree: " + ", ".join(f"{k}: {v}" for k, v in inv.by_degree.items()))
    rep.line(f"polynomials in diagonal variables of degree <= {args.degree}: {diag}")
    rep.line("equal" if inv.dimension == diag else f"differ by {inv.dimension - diag}")


def cmd_springer_lab(args, rep: Report) -> None:
    n = args.n
    if n < 1:
        raise UsageError("--n must be positive")
    rng = random.Random(args.seed)
    passed = sum(l_suite(random_rss(n, rng)) for _ in range(args.samples))
    rep.data["l_suite"] = {"samples": args.samples, "passed": passed}
    rep.ok &= passed == args.samples
    rep.line(f"L-operator suite: {passed}/{args.samples} random rss matrices pass")
    r = random_rss(n, rng)
    x = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    y = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    s = sp.solve_subdiagonals(r, x, y, [Fraction(rng.randint(-5, 5)) for _ in range(n)])
    p = sp.MomentPoint(r, s, x, y)
    vals = sp.invariant_functions(p)
    mu = sp.moment_b(p)
    residual = [[fmt(mu[a][b]) for b in range(a)] for a in range(n)]
    lower_zero = all(not mu[a][b] for a in range(n) for b in range(a))
    diag_ok = all(mu[k][k] == vals.F[k] for k in range(n))
    rep.ok &= lower_zero and diag_ok
    rep.data["point"] = {"r": fmt_matrix(r), "s": fmt_matrix(s), "i": [fmt(v) for v in x], "j": [fmt(v) for v in y]}
    rep.data["invariants"] = {"F": [fmt(v) for v in vals.F], "G": [fmt(v) for v in vals.G],
                              "H": [fmt(v) for v in vals.H]}
    rep.data["solver"] = {"lower_residuals": residual, "diagonal_equals_F": diag_ok}
    rep.line(f"point: r = {fmt_matrix(r)}, i = {[fmt(v) for v in x]}, j = {[fmt(v) for v in y]}")
    rep.line(f"solved s = {fmt_matrix(s)}")
    rep.line(f"F = {[fmt(v) for v in vals.F]}, G = {[fmt(v) for v in vals.G]}, H = {[fmt(v) for v in vals.H]}")
    rep.line(f"moment map strictly lower entries zero: {lower_zero}; diagonal equals F: {diag_ok}")
    b = sp.diagonalizer(r)
    d = linalg.matmul(linalg.matmul(b, r), linalg.inverse(b))
    rep.line(f"diagonalizer b = {fmt_matrix(b)}; b r b⁻¹ = {fmt_matrix(d)}")
    rep.data["diagonalizer"] = fmt_matrix(b)
    rep.line("det L^ι is 0 for n >= 2 (a zero row), so only tr L^ι = 1 is checked")


def cmd_verify(args, rep: Report) -> None:
    results = run_all(seed=args.seed)
    rep.data["checks"] = [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in results]
    for r in results:
        rep.line(r.line())
        rep.ok &= r.passed
    rep.line(f"{sum(r.passed for r in results)}/{len(results)} checks passed")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--trials", type=int, default=32, help="random trials for isomorphism search")
    common.add_argument("--degree", type=int, default=2, help="degree bound")
    common.add_argument("--cap", type=int, default=None, help="monomial / path length cap")

    p = argparse.ArgumentParser(prog="filtquiv", description="Filtered quiver invariants toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True):
        sp_ = sub.add_parser(name, parents=[common], help=help_)
        if file:
            sp_.add_argument("file", help="quiver description")
        sp_.set_defaults(fn=fn)
        return sp_

    add("pathways", cmd_pathways, "list pathways between vertices")
    add("euler", cmd_euler, "Euler form").add_argument(
        "--alpha", nargs="+", help="α as integers, space or comma separated")
    for name, fn, help_ in (("reflect", cmd_reflect, "reflection functor"),
                            ("gr", cmd_gr, "associated graded representation")):
        s = add(name, fn, help_)
        s.add_argument("--sink", type=int)
        s.add_argument("--source", type=int)
    add("dw", cmd_dw, "determinantal semi-invariants")
    add("dz", cmd_dz, "block-matrix semi-invariants").add_argument(
        "--auto", action="store_true", help="fill every block with pathways of length <= 2")
    add("bidet", cmd_bidet, "bideterminant of a tableau")
    add("invariant-check", cmd_invariant_check, "unipotent invariance of polynomials").add_argument(
        "--poly", action="append", help="polynomial to test (repeatable)")
    add("invariant-dim", cmd_invariant_dim, "bounded-degree invariant dimension")
    s = add("springer-lab", cmd_springer_lab, "moment map and L-operator report", file=False)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--samples", type=int, default=50)
    add("verify", cmd_verify, "run the acceptance checks", file=False)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.command)
    try:
        args.fn(args, rep)
    except INPUT_ERRORS as exc:
        where = f"{args.file}: " if getattr(args, "file", None) else ""
        err.write(f"error: {where}{_describe(exc)}\n")
        return 2
    except LIMIT_ERRORS as exc:
        err.write(f"limit reached: {exc}\n")
        return 1
    rep.emit(args.json, out)
    return 0 if rep.ok else 1


def _describe(exc: Exception) -> str:
    if isinstance(exc, OSError):
        return f"cannot read input ({exc.strerror or exc})"
    if isinstance(exc, KeyError):
        return f"unknown key {exc.args[0]}"
    return str(exc)


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    run()
