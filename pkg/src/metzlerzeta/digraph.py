"""Digraph data model, canonical arc ordering and assembly of the SIS Metzler matrix.

Conventions used throughout the package:

* vertices are ``0..n-1``; an arc ``e = (o(e), t(e))`` goes from origin to terminus;
* incidence blocks ``K`` (terminus) and ``L`` (origin) are ``N x M`` (rows are
  vertices, columns are arcs), which is the only orientation under which the
  block matrix ``A = [[-D, K B'], [D2' L^T, H^T B' - E]]`` is conformable;
* every arc-indexed object is stored in the canonical order produced by
  :func:`arc_partition`: unpaired arcs first, then ``f_1..f_m``, then
  ``f_1^-1..f_m^-1``.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    DuplicateArcError,
    GraphValidationError,
    MalformedDocumentError,
    NonPositiveRateError,
    SelfLoopError,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Digraph:
    """A connected simple digraph with per-arc infection and per-vertex recovery rates."""

    n_vertices: int
    arcs: tuple[tuple[int, int], ...]
    beta: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple((int(a), int(b)) for a, b in self.arcs))
        object.__setattr__(self, "beta", _frozen(np.asarray(self.beta, dtype=float)))
        object.__setattr__(self, "delta", _frozen(np.asarray(self.delta, dtype=float)))
        _validate(self)

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def origins(self) -> np.ndarray:
        return np.array([a for a, _ in self.arcs], dtype=int).reshape(-1)

    @property
    def termini(self) -> np.ndarray:
        return np.array([b for _, b in self.arcs], dtype=int).reshape(-1)

    def has_constant_rates(self, rtol: float = 0.0) -> bool:
        return bool(
            np.allclose(self.beta, self.beta[0], rtol=rtol, atol=0.0)
            and np.allclose(self.delta, self.delta[0], rtol=rtol, atol=0.0)
        )

    def is_symmetric(self) -> bool:
        arcset = set(self.arcs)
        return all((b, a) in arcset for a, b in self.arcs)

    def with_rates(self, beta, delta) -> "Digraph":
        return Digraph(
            self.n_vertices,
            self.arcs,
            np.broadcast_to(np.asarray(beta, dtype=float), (self.n_arcs,)).copy(),
            np.broadcast_to(np.asarray(delta, dtype=float), (self.n_vertices,)).copy(),
        )

    def undirected_edges(self) -> list[tuple[int, int]]:
        """Edges ``{u, v}`` (with ``u < v``) of the underlying simple graph."""
        return sorted({(min(a, b), max(a, b)) for a, b in self.arcs})

    def adjacency(self) -> np.ndarray:
        """0/1 arc adjacency, ``A[u, v] = 1`` iff ``(u, v)`` is an arc."""
        adj = np.zeros((self.n_vertices, self.n_vertices))
        for a, b in self.arcs:
            adj[a, b] = 1.0
        return adj

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.origins, minlength=self.n_vertices)

    def __repr__(self) -> str:
        return f"Digraph(n_vertices={self.n_vertices}, n_arcs={self.n_arcs})"


def _validate(g: Digraph) -> None:
    n = g.n_vertices
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise GraphValidationError(f"vertex count must be a positive integer, got {n!r}")
    if not g.arcs:
        raise GraphValidationError("a digraph needs at least one arc")
    seen = set()
    for a, b in g.arcs:
        if not (0 <= a < n and 0 <= b < n):
            raise GraphValidationError(f"arc ({a}, {b}) references a vertex outside 0..{n - 1}")
        if a == b:
            raise SelfLoopError(f"self-loop at vertex {a}")
        if (a, b) in seen:
            raise DuplicateArcError(f"duplicate arc ({a}, {b})")
        seen.add((a, b))
    if g.beta.shape != (len(g.arcs),):
        raise GraphValidationError(f"beta must have one entry per arc ({len(g.arcs)}), got shape {g.beta.shape}")
    if g.delta.shape != (n,):
        raise GraphValidationError(f"delta must have one entry per vertex ({n}), got shape {g.delta.shape}")
    for name, rates in (("beta", g.beta), ("delta", g.delta)):
        if not np.all(np.isfinite(rates)) or np.any(rates <= 0):
            raise NonPositiveRateError(f"all {name} rates must be finite and > 0")
    if not _weakly_connected(n, g.arcs):
        raise DisconnectedGraphError("underlying undirected graph is disconnected")


def _weakly_connected(n: int, arcs: Iterable[tuple[int, int]]) -> bool:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        nbrs[a].append(b)
        nbrs[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == n


# --------------------------------------------------------------------------
# construction


def load_digraph(document: str) -> Digraph:
    """Parse a JSON graph description.

    Fields: ``n``; exactly one of ``arcs`` (``[{from, to, beta?}]``) or
    ``edges`` (``[{u, v, beta?}]``, expanded to both orientations); ``beta``
    (global default infection rate); ``delta`` (scalar or per-vertex list).
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocumentError("top level must be an object")
    try:
        n = doc["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise MalformedDocumentError("'n' must be an integer")
        has_arcs, has_edges = "arcs" in doc, "edges" in doc
        if has_arcs == has_edges:
            raise MalformedDocumentError("exactly one of 'arcs' or 'edges' is required")
        default_beta = doc.get("beta")

        def rate(item):
            b = item.get("beta", default_beta)
            if b is None:
                raise MalformedDocumentError(f"no beta for {item} and no global default")
            return float(b)

        arcs: list[tuple[int, int]] = []
        betas: list[float] = []
        if has_arcs:
            for item in doc["arcs"]:
                arcs.append((int(item["from"]), int(item["to"])))
                betas.append(rate(item))
        else:
            for item in doc["edges"]:
                u, v = int(item["u"]), int(item["v"])
                b = rate(item)
                arcs += [(u, v), (v, u)]
                betas += [b, b]
        if "delta" not in doc:
            raise MalformedDocumentError("'delta' is required")
        delta = doc["delta"]
        if isinstance(delta, list):
            if len(delta) != n:
                raise MalformedDocumentError(f"'delta' list must have {n} entries")
            delta = [float(x) for x in delta]
        else:
            delta = [float(delta)] * n
    except (KeyError, TypeError) as exc:
        raise MalformedDocumentError(f"malformed graph document: {exc!r}") from exc
    return Digraph(n, tuple(arcs), np.array(betas), np.array(delta))


def dump_digraph(g: Digraph) -> str:
    """Inverse of :func:`load_digraph` (per-arc rates, per-vertex deltas)."""
    doc = {
        "n": g.n_vertices,
        "arcs": [{"from": a, "to": b, "beta": float(r)} for (a, b), r in zip(g.arcs, g.beta)],
        "delta": [float(x) for x in g.delta],
    }
    return json.dumps(doc, sort_keys=True)


def symmetrize(n: int, edges: Sequence[tuple[int, int]], beta=1.0, delta=1.0) -> Digraph:
    """Symmetric digraph of a simple undirected graph: both orientations of every edge."""
    arcs = []
    for e in edges:
        if len(e) != 2:
            raise GraphValidationError(f"edge {e!r} is not a vertex pair")
        u, v = int(e[0]), int(e[1])
        arcs += [(u, v), (v, u)]
    m = len(arcs)
    return Digraph(
        n,
        tuple(arcs),
        np.broadcast_to(np.asarray(beta, dtype=float), (m,)).copy(),
        np.broadcast_to(np.asarray(delta, dtype=float), (n,)).copy(),
    )


def torus_edges(d: int, N: int) -> list[tuple[int, int]]:
    """Edges of the d-dimensional torus of side N, vertices indexed row-major."""
    shape = (N,) * d
    edges = []
    for idx in itertools.product(range(N), repeat=d):
        v = int(np.ravel_multi_index(idx, shape))
        for j in range(d):
            nxt = list(idx)
            nxt[j] = (nxt[j] + 1) % N
            edges.append((v, int(np.ravel_multi_index(nxt, shape))))
    return edges


def build_torus(d: int, N: int, beta=1.0, delta=1.0) -> Digraph:
    if d < 1:
        raise GraphValidationError(f"torus dimension must be >= 1, got {d}")
    if N < 3:
        # N = 2 would need parallel edges between x and x + e_j
        raise GraphValidationError(f"torus side must be >= 3, got {N}")
    return symmetrize(N**d, torus_edges(d, N), beta, delta)


def cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def complete_edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def petersen_edges() -> list[tuple[int, int]]:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return outer + spokes + inner


def directed_cycle(n: int, beta=1.0, delta=1.0) -> Digraph:
    arcs = tuple((i, (i + 1) % n) for i in range(n))
    return Digraph(n, arcs, np.full(n, float(beta)), np.full(n, float(delta)))


def single_arc(beta=1.0, delta=1.0) -> Digraph:
    return Digraph(2, ((0, 1),), np.array([float(beta)]), np.full(2, float(delta)))


def random_digraph(
    n: int,
    rng: np.random.Generator,
    *,
    p_extra: float = 0.3,
    p_pair: float = 0.4,
    rate_range: tuple[float, float] = (0.1, 2.0),
) -> Digraph:
    """Random weakly connected simple digraph with a mix of paired and unpaired arcs.

    A random spanning tree guarantees connectivity; each tree edge becomes a
    single arc of random direction or (with probability ``p_pair``) an arc pair.
    Every remaining ordered pair is then added independently with ``p_extra``.
    """
    if n < 2:
        raise GraphValidationError("random digraph needs at least 2 vertices")
    arcs: set[tuple[int, int]] = set()
    perm = rng.permutation(n)
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(0, i)])
        if rng.random() < p_pair:
            arcs |= {(a, b), (b, a)}
        elif rng.random() < 0.5:
            arcs.add((a, b))
        else:
            arcs.add((b, a))
    for a in range(n):
        for b in range(n):
            if a != b and (a, b) not in arcs and rng.random() < p_extra:
                arcs.add((a, b))
    arcs_t = tuple(sorted(arcs))
    lo, hi = rate_range
    return Digraph(
        n,
        arcs_t,
        rng.uniform(lo, hi, size=len(arcs_t)),
        rng.uniform(lo, hi, size=n),
    )


# --------------------------------------------------------------------------
# arc ordering


@dataclass(frozen=True)
class ArcOrdering:
    """Canonical arc order ``e_1..e_{M0}, f_1..f_{M1}, f_1^-1..f_{M1}^-1``.

    ``order[p]`` is the original index of the arc at canonical position ``p``;
    ``position`` is the inverse permutation.
    """

    singles: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    order: tuple[int, ...]
    position: tuple[int, ...]

    @property
    def m0(self) -> int:
        return len(self.singles)

    @property
    def m1(self) -> int:
        return len(self.pairs)

    @property
    def n_arcs(self) -> int:
        return len(self.order)


def arc_partition(g: Digraph) -> ArcOrdering:
    index = {arc: i for i, arc in enumerate(g.arcs)}
    singles = sorted((i for i, (a, b) in enumerate(g.arcs) if (b, a) not in index), key=lambda i: g.arcs[i])
    pairs = sorted(
        ((i, index[(b, a)]) for i, (a, b) in enumerate(g.arcs) if (b, a) in index and (a, b) < (b, a)),
        key=lambda p: g.arcs[p[0]],
    )
    order = tuple(singles) + tuple(f for f, _ in pairs) + tuple(finv for _, finv in pairs)
    position = [0] * len(order)
    for pos, i in enumerate(order):
        position[i] = pos
    return ArcOrdering(tuple(singles), tuple(pairs), order, tuple(position))


# --------------------------------------------------------------------------
# assembly


@dataclass(frozen=True, eq=False)
class MetzlerAssembly:
    """The ``(N+M) x (N+M)`` Metzler matrix and its constituent blocks.

    All arc-indexed blocks follow the canonical order in ``ordering``;
    ``origins``, ``termini`` and ``beta`` are the arc data in that order.
    """

    A_cal: np.ndarray
    K: np.ndarray
    L: np.ndarray
    C: np.ndarray
    J: np.ndarray
    H: np.ndarray
    Bp: np.ndarray
    D1p: np.ndarray
    D2p: np.ndarray
    E: np.ndarray
    Dv: np.ndarray
    Bw: np.ndarray
    ordering: ArcOrdering
    origins: np.ndarray
    termini: np.ndarray
    beta: np.ndarray
    delta: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.Dv.shape[0]

    @property
    def n_arcs(self) -> int:
        return self.H.shape[0]


def nonbacktracking_matrix(origins: np.ndarray, termini: np.ndarray) -> np.ndarray:
    """``H[e, f] = 1`` iff ``t(e) = o(f)`` and ``f`` is not the inverse of ``e``."""
    follows = termini[:, None] == origins[None, :]
    reverses = (termini[None, :] == origins[:, None]) & follows
    return (follows & ~reverses).astype(np.int64)


def assemble(g: Digraph, ordering: ArcOrdering | None = None) -> MetzlerAssembly:
    if ordering is None:
        ordering = arc_partition(g)
    if ordering.n_arcs != g.n_arcs or sorted(ordering.order) != list(range(g.n_arcs)):
        raise DimensionMismatchError(
            f"ordering covers {ordering.n_arcs} arcs but the digraph has {g.n_arcs}"
        )
    n, m = g.n_vertices, g.n_arcs
    idx = np.array(ordering.order, dtype=int)
    o = g.origins[idx]
    t = g.termini[idx]
    beta = g.beta[idx]
    delta = g.delta

    cols = np.arange(m)
    K = np.zeros((n, m), dtype=np.int64)
    L = np.zeros((n, m), dtype=np.int64)
    K[t, cols] = 1
    L[o, cols] = 1
    C = K - L

    J = np.zeros((m, m), dtype=np.int64)
    m0, m1 = ordering.m0, ordering.m1
    for k in range(m1):
        J[m0 + k, m0 + m1 + k] = 1
        J[m0 + m1 + k, m0 + k] = 1

    H = nonbacktracking_matrix(o, t)
    Bp = np.diag(beta)
    D1p = np.diag(delta[o])
    D2p = np.diag(delta[t])
    E = Bp + D1p + D2p
    Dv = np.diag(delta)
    Bw = np.zeros((n, n))
    Bw[o, t] = beta

    A_cal = np.block([[-Dv, K @ Bp], [D2p @ L.T, H.T @ Bp - E]])
    if not np.all(np.isfinite(A_cal)):
        raise GraphValidationError("assembled matrix has non-finite entries")
    return MetzlerAssembly(
        A_cal=_frozen(A_cal),
        K=_frozen(K),
        L=_frozen(L),
        C=_frozen(C),
        J=_frozen(J),
        H=_frozen(H),
        Bp=_frozen(Bp),
        D1p=_frozen(D1p),
        D2p=_frozen(D2p),
        E=_frozen(E),
        Dv=_frozen(Dv),
        Bw=_frozen(Bw),
        ordering=ordering,
        origins=_frozen(o),
        termini=_frozen(t),
        beta=_frozen(beta),
        delta=_frozen(np.asarray(delta)),
    )


def is_metzler(X: np.ndarray) -> bool:
    off = X - np.diag(np.diag(X))
    return bool(np.min(off, initial=0.0) >= 0.0)


def regular_degree(g: Digraph) -> int | None:
    """Common degree of a symmetric digraph's underlying graph, or ``None``."""
    if not g.is_symmetric():
        return None
    deg = g.out_degrees()
    return int(deg[0]) if np.all(deg == deg[0]) else None
