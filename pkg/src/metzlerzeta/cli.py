"""Command-line interface: ``metzlerzeta {verify,zeta,sis,spectrum,ledger}``.

Every command emits one result document (sorted-key JSON, no timestamps) so
that identical invocations produce identical bytes.  The exit code is 0 when
every verdict passes, 1 when one fails, 2 for invalid input and 3 when a
numerical routine gives up (poles, domain or solver errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .digraph import (
    Digraph,
    assemble,
    build_torus,
    complete_edges,
    cycle_edges,
    directed_cycle,
    load_digraph,
    petersen_edges,
    random_digraph,
    regular_degree,
    single_arc,
    symmetrize,
)
from .errors import GraphValidationError, MetzlerZetaError
from .ledger import ledger_document
from .polydet import (
    backtrackless_series_check,
    constant_rate_det,
    factored_det_poly,
    ihara_zeta_recip,
    pencil_det,
    poly_det_pencil,
    weinstein_aronszajn_check,
)
from .sis import MAX_EXACT_VERTICES, bound_report, gillespie_run
from .spectra import clustered_distance, decay_bound, eigenvalues, metzler_spectrum_closed, multiset_distance
from .zeta import CoinWalk, DIRECT_DIM_LIMIT, limit_convergence_table, metzler_zeta_finite, metzler_zeta_limit, walk_zeta

IDENTITY_TOL = 1e-9
SPECTRUM_TOL = 1e-6
CHECKS = ("prop1", "thm1", "thm2", "thm3", "thm4", "thm5", "cor", "cor5", "series", "metzler")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# graph sources


@dataclass(frozen=True, eq=False)
class GraphSource:
    graph: Digraph
    kind: str
    params: dict
    undirected: tuple[int, list[tuple[int, int]]] | None = None  # (n, edges) when symmetric


def _kv(text: str) -> dict[str, int]:
    out = {}
    for part in filter(None, text.split(",")):
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"expected key=value in graph spec, got {part!r}")
        try:
            out[key.strip()] = int(val)
        except ValueError as exc:
            raise UsageError(f"graph parameter {key!r} must be an integer, got {val!r}") from exc
    return out


def _need(params: dict, *keys: str) -> list[int]:
    missing = [k for k in keys if k not in params]
    if missing:
        raise UsageError(f"graph spec is missing {', '.join(missing)}")
    return [params[k] for k in keys]


def parse_graph(spec: str, beta: float | None, delta: float | None) -> GraphSource:
    """Build a graph from a generator spec or a JSON file; ``beta``/``delta`` override rates."""
    name, _, rest = spec.partition(":")
    p = _kv(rest)
    b = 1.0 if beta is None else beta
    d = 1.0 if delta is None else delta
    und = None
    if name == "torus":
        dim, N = _need(p, "d", "N")
        g = build_torus(dim, N, b, d)
        und = (N**dim, g.undirected_edges())
    elif name == "cycle":
        (n,) = _need(p, "n")
        g = symmetrize(n, cycle_edges(n), b, d)
        und = (n, cycle_edges(n))
    elif name == "complete":
        (n,) = _need(p, "n")
        g = symmetrize(n, complete_edges(n), b, d)
        und = (n, complete_edges(n))
    elif name == "petersen":
        g = symmetrize(10, petersen_edges(), b, d)
        und = (10, petersen_edges())
    elif name == "dcycle":
        (n,) = _need(p, "n")
        g = directed_cycle(n, b, d)
    elif name == "path1":
        g = single_arc(b, d)
    elif name == "random":
        n, seed = _need(p, "n", "seed")
        g = random_digraph(n, np.random.default_rng(seed))
        if beta is not None or delta is not None:
            g = g.with_rates(g.beta if beta is None else beta, g.delta if delta is None else delta)
    elif Path(spec).is_file():
        g = load_digraph(Path(spec).read_text())
        if beta is not None or delta is not None:
            g = g.with_rates(g.beta if beta is None else beta, g.delta if delta is None else delta)
        name, p = "file", {"path": spec}
    else:
        raise UsageError(f"unknown graph generator or missing file: {spec!r}")
    if und is None and g.is_symmetric():
        und = (g.n_vertices, g.undirected_edges())
    return GraphSource(g, name, p, und)


# --------------------------------------------------------------------------
# result documents


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _clean(float(x.real)), "im": _clean(float(x.imag))}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


class Document:
    def __init__(self, command: str, argv: list[str], seed: int, parameters: dict):
        self.command = command
        self.argv = list(argv)
        self.seed = seed
        self.parameters = parameters
        self.results: dict = {}
        self.verdicts: dict[str, str] = {}
        self.skipped: dict[str, str] = {}
        self.rows: list[list] = []
        self.header: list[str] = []

    def verdict(self, name: str, ok: bool, **measured):
        self.verdicts[name] = "pass" if ok else "fail"
        if measured:
            self.results.setdefault(name, {}).update(measured)

    @property
    def ok(self) -> bool:
        return all(v == "pass" for v in self.verdicts.values())

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "argv": self.argv,
            "version": __version__,
            "seed": self.seed,
            "parameters": self.parameters,
            "results": self.results,
            "verdicts": self.verdicts,
            "skipped": self.skipped,
            "ok": self.ok,
        }
        return json.dumps(_clean(body), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        return buf.getvalue()


# --------------------------------------------------------------------------
# verify


def _rel_err(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _pole_free_points(g: Digraph, count: int = 16) -> np.ndarray:
    # every pole of the factored forms is real and has |u| >= 1 / (2 max(beta + 2 delta))
    scale = float(np.max(g.beta) + 2 * np.max(g.delta))
    r = 0.25 / scale
    return r * np.exp(2j * np.pi * (np.arange(count) + 0.5) / count)


def _check_prop1(src, doc, tol, rng):
    asm = assemble(src.graph)
    K, L, J, H = (np.asarray(x).astype(np.int64) for x in (asm.K, asm.L, asm.J, asm.H))
    diff = int(np.max(np.abs(H - (K.T @ L - J)), initial=0))
    doc.verdict("prop1", diff == 0, max_abs_diff=diff, arcs=src.graph.n_arcs)


def _check_thm5(src, doc, tol, rng):
    asm = assemble(src.graph)
    ref = poly_det_pencil(asm.A_cal).coef
    got = factored_det_poly(asm).coef
    size = max(len(ref), len(got))
    ref = np.pad(ref, (0, size - len(ref)))
    got = np.pad(got, (0, size - len(got)))
    err = np.abs(got - ref)
    small = np.abs(ref) < 1e-10 / 1e-8
    ok = bool(np.all(np.where(small, err <= 1e-10, err <= 1e-8 * np.abs(ref))))
    pts = _pole_free_points(src.graph, 8)
    from .polydet import factored_det_many

    point_err = _rel_err(factored_det_many(asm, pts), pencil_det(asm.A_cal, pts))
    doc.verdict(
        "thm5",
        ok and point_err <= tol,
        degree=size - 1,
        max_coef_rel_err=float(np.max(err / np.maximum(np.abs(ref), 1e-300))),
        max_point_rel_err=point_err,
    )


def _check_cor(src, doc, tol, rng):
    g = src.graph
    b, d = float(g.beta[0]), float(g.delta[0])
    gc = g if g.has_constant_rates() else g.with_rates(b, d)
    pts = _pole_free_points(gc)
    ref = pencil_det(assemble(gc).A_cal, pts)
    kinds = ["general-digraph"]
    if gc.is_symmetric():
        kinds.append("undirected")
        if regular_degree(gc) is not None:
            kinds.append("regular")
    errs = {k: _rel_err([constant_rate_det(k, gc, b, d, u) for u in pts], ref) for k in kinds}
    doc.verdict("cor", max(errs.values()) <= tol, rates={"beta": b, "delta": d}, rel_err=errs)


def _check_cor5(src, doc, tol, rng):
    g = src.graph
    if not g.is_symmetric() or regular_degree(g) is None:
        doc.skipped["cor5"] = "needs the symmetric digraph of a regular graph"
        return
    b, d = float(g.beta[0]), float(g.delta[0])
    gc = g if g.has_constant_rates() else g.with_rates(b, d)
    numeric = eigenvalues(assemble(gc).A_cal).eigenvalues
    closed = metzler_spectrum_closed(gc, b, d).eigenvalues
    # defective eigenvalues (e.g. b = d = 1) are compared through cluster means
    dist = clustered_distance(closed, numeric)
    published = multiset_distance(metzler_spectrum_closed(gc, b, d, "published").eigenvalues, numeric)
    doc.verdict(
        "cor5",
        dist <= SPECTRUM_TOL,
        distance=multiset_distance(closed, numeric),
        clustered_distance=dist,
        published_quadratic_distance=published,
    )


def _check_thm1(src, doc, tol, rng):
    if src.undirected is None:
        doc.skipped["thm1"] = "needs a symmetric digraph"
        return
    n, edges = src.undirected
    pts = 0.4 * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)
    pairs = [ihara_zeta_recip(n, edges, u) for u in pts]
    err = _rel_err([p[0] for p in pairs], [p[1] for p in pairs])
    doc.verdict("thm1", err <= tol, rel_err=err)


def _check_series(src, doc, tol, rng):
    if src.undirected is None:
        doc.skipped["series"] = "needs a symmetric digraph"
        return
    n, edges = src.undirected
    from .polydet import edge_matrix

    rho = float(np.max(np.abs(np.linalg.eigvals(edge_matrix(n, edges)))))
    u = 0.3 / max(rho, 1.0)
    series, direct = backtrackless_series_check(n, edges, u, 20)
    err = _rel_err(series, direct)
    doc.verdict("series", err <= 1e-8, u=u, rel_err=err)


def _check_thm4(src, doc, tol, rng):
    asm = assemble(src.graph)
    u = 0.1
    pairs = [(u * asm.K @ asm.Bp, asm.L.T.astype(float))]
    for _ in range(20):
        r, s = rng.integers(1, 9), rng.integers(1, 13)
        pairs.append((rng.normal(size=(r, s)) / s, rng.normal(size=(s, r)) / r))
    err = max(abs(a - b) / max(abs(b), 1e-300) for a, b in (weinstein_aronszajn_check(A, B) for A, B in pairs))
    doc.verdict("thm4", err <= 1e-10, pairs=len(pairs), rel_err=float(err))


def _check_thm3(src, doc, tol, rng):
    g = src.graph
    if g.n_vertices > MAX_EXACT_VERTICES:
        doc.skipped["thm3"] = f"exact chain limited to {MAX_EXACT_VERTICES} vertices"
        return
    rep = bound_report(g)
    doc.verdict("thm3", bool(rep.exact_ok), bound=rep.bound, exact=rep.exact)


def _check_thm2(src, doc, tol, rng):
    if src.kind != "torus":
        doc.skipped["thm2"] = "needs a torus graph spec"
        return
    dim, N = src.params["d"], src.params["N"]
    k = 2 * dim
    coin = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    coin /= np.linalg.norm(coin, 2)
    direct, fourier = walk_zeta(CoinWalk(dim, N, coin), 0.3)
    err = abs(direct.value - fourier.value) / abs(direct.value)
    doc.verdict("thm2", err <= tol, u=0.3, rel_err=float(err))


def _check_metzler(src, doc, tol, rng):
    g = src.graph
    if src.kind != "torus" or not g.has_constant_rates():
        doc.skipped["metzler"] = "needs a torus graph spec with constant rates"
        return
    dim, N = src.params["d"], src.params["N"]
    if (2 * dim + 1) * N**dim > DIRECT_DIM_LIMIT:
        doc.skipped["metzler"] = "direct determinant too large"
        return
    b, d = float(g.beta[0]), float(g.delta[0])
    u = 0.25 / (b + 2 * d)
    direct, spectral = metzler_zeta_finite(dim, N, b, d, u)
    _, published = metzler_zeta_finite(dim, N, b, d, u, exponent="published")
    err = abs(direct.log_value - spectral.log_value)
    doc.verdict(
        "metzler",
        err <= tol,
        u=u,
        log_abs_err=float(err),
        published_exponent_log_abs_err=float(abs(direct.log_value - published.log_value)),
    )


_CHECK_FUNCS = {
    "prop1": _check_prop1,
    "thm1": _check_thm1,
    "thm2": _check_thm2,
    "thm3": _check_thm3,
    "thm4": _check_thm4,
    "thm5": _check_thm5,
    "cor": _check_cor,
    "cor5": _check_cor5,
    "series": _check_series,
    "metzler": _check_metzler,
}


def _select_checks(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    if "all" in names:
        return list(CHECKS)
    unknown = [c for c in names if c not in _CHECK_FUNCS]
    if unknown or not names:
        raise UsageError(f"unknown check(s) {unknown or names}; choose from {', '.join(CHECKS)} or all")
    return list(dict.fromkeys(names))


def cmd_verify(args, doc: Document):
    src = parse_graph(args.graph, args.beta, args.delta)
    checks = _select_checks(args.checks)
    tol = args.tol if args.tol is not None else IDENTITY_TOL
    doc.parameters.update(graph=args.graph, checks=checks, tol=tol, n_vertices=src.graph.n_vertices, n_arcs=src.graph.n_arcs)
    rng = np.random.default_rng(args.seed)
    for name in checks:
        _CHECK_FUNCS[name](src, doc, tol, rng)
    doc.header = ["check", "verdict"]
    doc.rows = [[k, v] for k, v in sorted(doc.verdicts.items())] + [[k, "skipped"] for k in sorted(doc.skipped)]


# --------------------------------------------------------------------------
# zeta


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _coin(name: str, dim: int, rng) -> np.ndarray:
    k = 2 * dim
    if name == "identity":
        return np.eye(k)
    if name == "grover":
        return 2.0 / k * np.ones((k, k)) - np.eye(k)
    if name == "hadamard":
        if k != 2:
            raise UsageError("hadamard coin needs d = 1")
        return np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    if name == "random":
        c = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        return c / np.linalg.norm(c, 2)
    raise UsageError(f"unknown coin {name!r}; choose identity, grover, hadamard or random")


def cmd_zeta(args, doc: Document):
    tol = args.tol if args.tol is not None else IDENTITY_TOL
    Ns = _int_list(args.N)
    if not Ns:
        raise UsageError("--N needs at least one value")
    doc.parameters.update(kind=args.kind, d=args.d, N=Ns, u=args.u, tol=tol)
    if args.kind == "walk":
        rng = np.random.default_rng(args.seed)
        coin = _coin(args.coin, args.d, rng)
        doc.parameters["coin"] = args.coin
        doc.header = ["N", "direct_re", "direct_im", "fourier_re", "fourier_im"]
        for N in Ns:
            direct, fourier = walk_zeta(CoinWalk(args.d, N, coin), args.u)
            err = abs(direct.value - fourier.value) / max(abs(direct.value), 1e-300)
            entry = {"direct": direct.value, "fourier": fourier.value, "rel_err": err}
            doc.verdict(f"walk-fourier-N{N}", err <= tol)
            if args.coin == "identity":
                closed = complex((1 - args.u**N) ** 2) ** (args.d / N)
                cerr = abs(direct.value - closed) / abs(closed)
                entry.update(closed_form=closed, closed_rel_err=cerr)
                doc.verdict(f"walk-closed-form-N{N}", cerr <= max(tol, 1e-12))
            doc.results[f"N={N}"] = entry
            doc.rows.append([N, direct.value.real, direct.value.imag, fourier.value.real, fourier.value.imag])
        return
    b, d = args.beta, args.delta
    if b is None or d is None:
        b, d = (1.0 if b is None else b), (1.0 if d is None else d)
    if b <= 0 or d <= 0:
        raise GraphValidationError("rates must be positive")
    doc.parameters.update(beta=b, delta=d, Q=args.Q, exponent=args.exponent)
    doc.header = ["N", "log_zeta_recip", "diff", "limit_gap"]
    for N in Ns:
        entry = {}
        if (2 * args.d + 1) * N**args.d <= DIRECT_DIM_LIMIT:
            direct, spectral = metzler_zeta_finite(args.d, N, b, d, args.u, exponent=args.exponent)
            err = abs(direct.log_value - spectral.log_value)
            entry.update(direct=direct.value, spectral=spectral.value, log_abs_err=err)
            doc.verdict(f"direct-vs-spectral-N{N}", err <= tol)
        else:
            entry["direct"] = "skipped: dimension above limit"
        doc.results[f"N={N}"] = entry
    limit, qdiff = metzler_zeta_limit(args.d, b, d, args.u, args.Q)
    doc.results["limit"] = {"value": limit.value, "log_value": limit.log_value, "Q_halving_diff": qdiff}
    if min(Ns) >= 3:
        rows = limit_convergence_table(args.d, b, d, args.u, Ns)
        doc.results["convergence"] = [
            {"N": r.N, "log_zeta_recip": r.log_zeta_recip, "diff": r.diff, "limit_gap": r.limit_gap} for r in rows
        ]
        doc.rows = [[r.N, r.log_zeta_recip, "" if r.diff is None else r.diff, r.limit_gap] for r in rows]


# --------------------------------------------------------------------------
# sis and spectrum


def cmd_sis(args, doc: Document):
    if args.trials < 100:
        raise UsageError(f"--trials must be at least 100, got {args.trials}")
    src = parse_graph(args.graph, args.beta, args.delta)
    g = src.graph
    doc.parameters.update(graph=args.graph, trials=args.trials, t_max=args.t_max, n_vertices=g.n_vertices)
    rep = bound_report(g, args.trials, args.t_max, args.seed, jobs=args.jobs)
    est = rep.estimate
    res = {
        "bound": rep.bound,
        "lambda_max": rep.lambda_max,
        "exact": rep.exact,
        "outcome": est.outcome,
        "gamma_hat": est.gamma_hat,
        "stderr": est.stderr,
        "window": est.window,
    }
    if rep.exact is not None and est.gamma_hat is not None and est.stderr:
        res["z_vs_exact"] = (est.gamma_hat - rep.exact) / est.stderr
    doc.results["decay"] = res
    if rep.exact_ok is None:
        doc.skipped["bound-exact"] = f"exact chain limited to {MAX_EXACT_VERTICES} vertices"
    else:
        doc.verdict("bound-exact", rep.exact_ok)
    if rep.estimate_ok is None:
        doc.skipped["bound-estimate"] = est.outcome
    else:
        doc.verdict("bound-estimate", rep.estimate_ok)
    traj = gillespie_run(g, args.t_max, args.seed, trial=0)
    doc.header = ["time", "infected"]
    doc.rows = [[float(t), int(c)] for t, c in zip(traj.times, traj.counts)]


def cmd_spectrum(args, doc: Document):
    src = parse_graph(args.graph, args.beta, args.delta)
    g = src.graph
    asm = assemble(g)
    spec = eigenvalues(asm.A_cal, "Metzler matrix")
    db = decay_bound(asm)
    pairs = spec.pairs()
    doc.parameters.update(graph=args.graph, dimension=spec.dimension)
    doc.results["eigenvalues"] = [list(p) for p in pairs]
    doc.results["decay_bound"] = {"lambda_max": db.lambda_max, "bound": db.bound, "dominant_imag": db.dominant_imag}
    if g.is_symmetric() and regular_degree(g) is not None and g.has_constant_rates():
        closed = metzler_spectrum_closed(g, float(g.beta[0]), float(g.delta[0]))
        dist = clustered_distance(closed.eigenvalues, spec.eigenvalues)
        doc.results["closed_form_distance"] = multiset_distance(closed.eigenvalues, spec.eigenvalues)
        doc.results["closed_form_clustered_distance"] = dist
        doc.verdict("closed-vs-numeric", dist <= (args.tol if args.tol is not None else SPECTRUM_TOL))
    else:
        doc.skipped["closed-vs-numeric"] = "needs a regular symmetric digraph with constant rates"
    doc.header = ["re", "im"]
    doc.rows = [list(p) for p in pairs]


def cmd_ledger(args, doc: Document):
    led = ledger_document()
    doc.results.update(led)
    tol = args.tol if args.tol is not None else IDENTITY_TOL
    for e in led["entries"]:
        if e["adopted_error"] is not None:
            doc.verdict(f"adopted-{e['key']}", e["adopted_error"] <= tol)
    doc.header = ["key", "status", "published_error", "adopted_error"]
    doc.rows = [[e["key"], e["status"], e["published_error"], e["adopted_error"]] for e in led["entries"]]


# --------------------------------------------------------------------------
# argument parsing


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override the identity tolerance")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for simulation")
    common.add_argument("--out", default=None, help="write the output here instead of stdout")
    common.add_argument("--format", choices=("document", "csv"), default="document")
    rates = argparse.ArgumentParser(add_help=False)
    rates.add_argument("--beta", type=float, default=None)
    rates.add_argument("--delta", type=float, default=None)

    parser = argparse.ArgumentParser(prog="metzlerzeta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common, rates], help="run identity checks on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--checks", default="all", help=f"comma list of {', '.join(CHECKS)} or all")

    p = sub.add_parser("zeta", parents=[common, rates], help="walk and Metzler zeta values on tori")
    p.add_argument("kind", choices=("metzler", "walk"))
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--N", default="4", help="side length or comma list")
    p.add_argument("--u", type=float, default=0.1)
    p.add_argument("--coin", default="identity")
    p.add_argument("--Q", type=int, default=128, help="quadrature grid for the limit")
    p.add_argument("--exponent", choices=("rederived", "published"), default="rederived")

    p = sub.add_parser("sis", parents=[common, rates], help="SIS decay rate against the spectral bound")
    p.add_argument("--graph", default="path1")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--t-max", dest="t_max", type=float, default=20.0)

    p = sub.add_parser("spectrum", parents=[common, rates], help="eigenvalues of the Metzler matrix")
    p.add_argument("--graph", required=True)

    sub.add_parser("ledger", parents=[common], help="printed-versus-adopted discrepancy report")
    return parser


_COMMANDS = {"verify": cmd_verify, "zeta": cmd_zeta, "sis": cmd_sis, "spectrum": cmd_spectrum, "ledger": cmd_ledger}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    doc = Document(args.command, argv, args.seed, {})
    try:
        _COMMANDS[args.command](args, doc)
    except (UsageError, GraphValidationError) as exc:
        print(f"metzlerzeta {args.command}: invalid input: {exc}", file=sys.stderr)
        return 2
    except (MetzlerZetaError, ArithmeticError, MemoryError) as exc:
        print(f"metzlerzeta {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = doc.to_csv() if args.format == "csv" else doc.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if doc.ok else 1


if __name__ == "__main__":
    sys.exit(main())
