"""Polynomial determinants of pencils ``I - uX`` and the factored determinant of the Metzler matrix.

Coefficients of ``det(I - uX)`` are recovered by evaluation and interpolation on
circles in the complex plane.  A single circle only resolves coefficients
whose scaled size ``|c_k| r^k`` is comparable to the largest one, so a ladder
of radii (ratio 2) is walked and each coefficient is read off the circle on
which it is best resolved.  Circle points are offset by half a step so they
never lie on the real axis, where all the poles of the factored form live.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .digraph import Digraph, MetzlerAssembly, arc_partition, assemble, symmetrize
from .errors import (
    ConvergenceDomainError,
    DimensionMismatchError,
    PoleError,
    StructureMismatchError,
)

POLE_THRESHOLD = 1e-8
_EPS = np.finfo(float).eps


# --------------------------------------------------------------------------
# interpolation


@dataclass(frozen=True)
class CoefficientFit:
    coef: np.ndarray  # real, lowest degree first, length degree_bound + 1
    noise: np.ndarray  # estimated absolute error of each coefficient
    radii: tuple[float, ...]

    def polynomial(self, trim_factor: float = 100.0) -> Polynomial:
        """Trailing coefficients indistinguishable from zero are dropped."""
        c = self.coef.copy()
        top = len(c) - 1
        while top > 0 and abs(c[top]) <= trim_factor * self.noise[top]:
            top -= 1
        return Polynomial(c[: top + 1])


def _circle(radius: float, npts: int, phase: float) -> np.ndarray:
    return radius * np.exp(1j * (2 * np.pi * (np.arange(npts) + phase) / npts))


def interpolate_on_circles(
    evaluate: Callable[[np.ndarray], np.ndarray],
    degree: int,
    start_radius: float,
    *,
    max_radii: int = 160,
    phase: float = 0.5,
) -> CoefficientFit:
    """Coefficients of a polynomial of degree <= ``degree`` known only through ``evaluate``.

    ``evaluate`` maps a complex array of sample points to the polynomial
    values at those points.
    """
    if degree < 0:
        raise DimensionMismatchError("degree bound must be nonnegative")
    npts = degree + 1
    ks = np.arange(npts)
    best = np.zeros(npts, dtype=complex)
    noise = np.full(npts, np.inf)

    def probe(r: float) -> tuple[float, int, int]:
        """Sample on radius r and keep better estimates.

        Returns the magnitude-weighted mean index of the scaled coefficients
        and the lowest/highest index that is significant on this circle.
        """
        pts = _circle(r, npts, phase)
        vals = np.asarray(evaluate(pts), dtype=complex)
        if vals.shape != (npts,) or not np.all(np.isfinite(vals)):
            raise ArithmeticError(f"non-finite polynomial samples on |u| = {r:g}")
        scaled = np.fft.fft(vals) / npts
        with np.errstate(over="ignore", under="ignore"):
            rk = np.exp(ks * np.log(r))
            est = scaled / (rk * np.exp(2j * np.pi * ks * phase / npts))
            nz = 16 * npts * _EPS * np.max(np.abs(vals)) / rk
        better = nz < noise
        best[better] = est[better]
        noise[better] = nz[better]
        radii.append(r)
        mag = np.abs(scaled)
        total = mag.sum()
        if total == 0.0:
            return 0.0, 0, 0
        significant = np.nonzero(mag > 1e-12 * total)[0]
        return float((ks * mag).sum() / total), int(significant[0]), int(significant[-1])

    radii: list[float] = []
    first = probe(float(start_radius))
    # walk down until the lowest significant coefficient dominates ...
    r, (kbar, lo, _) = float(start_radius), first
    for _ in range(max_radii):
        if kbar <= lo + 0.5:
            break
        r /= 2.0
        kbar, lo, _ = probe(r)
    # ... and up until the highest one does
    r, (kbar, _, hi) = float(start_radius), first
    for _ in range(max_radii):
        if kbar >= hi - 0.5:
            break
        r *= 2.0
        kbar, _, hi = probe(r)
    if np.any(~np.isfinite(noise)):
        raise ArithmeticError("interpolation failed to resolve every coefficient")
    if np.any(np.abs(best.imag) > np.maximum(1e-9 * np.abs(best.real), 1e3 * noise)):
        raise ArithmeticError("interpolated coefficients of a real polynomial have large imaginary parts")
    return CoefficientFit(best.real.copy(), noise, tuple(sorted(radii)))


def pencil_radius(X: np.ndarray) -> float:
    return 1.0 / (1.0 + float(np.max(np.sum(np.abs(X), axis=1), initial=0.0)))


def pencil_det(X: np.ndarray, u) -> np.ndarray:
    """``det(I - uX)`` for every entry of ``u`` via partial-pivoting LU."""
    X = np.asarray(X)
    u = np.atleast_1d(np.asarray(u))
    n = X.shape[0]
    stack = np.eye(n)[None, :, :] - u[:, None, None] * X[None, :, :]
    return np.linalg.det(stack)


def fit_det_pencil(X: np.ndarray) -> CoefficientFit:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatchError(f"pencil matrix must be square, got shape {X.shape}")
    if X.shape[0] == 0:
        raise DimensionMismatchError("pencil matrix has dimension zero")
    if not np.all(np.isfinite(X)):
        raise ValueError("pencil matrix has non-finite entries")
    return interpolate_on_circles(lambda u: pencil_det(X, u), X.shape[0], pencil_radius(X))


def poly_det_pencil(X: np.ndarray) -> Polynomial:
    """Polynomial ``p(u) = det(I - uX)``; ``p(0) = 1`` and ``deg p <= dim X``."""
    return fit_det_pencil(X).polynomial()


# --------------------------------------------------------------------------
# factored determinant of I - uA for a digraph


@dataclass(frozen=True, eq=False)
class FactorData:
    """Per-arc rates ``gamma_e = beta_e + delta_o + delta_t``, ``eps_e = delta_o + delta_t``
    and the quadratic pair factors, all in canonical arc order."""

    gamma: np.ndarray
    epsilon: np.ndarray
    pair_coef: np.ndarray  # shape (M1, 3): constant, linear, quadratic coefficients

    def pair_polys(self) -> list[Polynomial]:
        return [Polynomial(c) for c in self.pair_coef]


def factor_data(asm: MetzlerAssembly) -> FactorData:
    eps = asm.delta[asm.origins] + asm.delta[asm.termini]
    gamma = asm.beta + eps
    m0, m1 = asm.ordering.m0, asm.ordering.m1
    f = np.arange(m0, m0 + m1)
    finv = f + m1
    coef = np.column_stack(
        [
            np.ones(m1),
            gamma[f] + gamma[finv],
            gamma[f] * gamma[finv] - asm.beta[f] * asm.beta[finv],
        ]
    )
    return FactorData(gamma, eps, coef)


@dataclass(frozen=True, eq=False)
class FactoredCore:
    """The ``N x N`` u-dependent matrices of the reduced determinant at one point ``u``.

    ``M = A_nsym^T + A_sym - u * D_tilde`` so that the reduced matrix is
    ``I + u D - u M = I + u D - u A_nsym^T - u A_sym + u^2 D_tilde``.
    ``A_nsym[a, b]`` belongs to the unpaired arc ``(a, b)``; ``A_sym[a, b]`` to
    the paired arc ``(a, b)``; ``D_tilde`` is diagonal.
    """

    u: complex
    A_nsym: np.ndarray
    A_sym: np.ndarray
    D_tilde: np.ndarray
    M: np.ndarray
    reduced: np.ndarray


def _pole_check(values: np.ndarray, what: str) -> None:
    if values.size and np.min(np.abs(values)) < POLE_THRESHOLD:
        raise PoleError(f"evaluation point is within {POLE_THRESHOLD:g} of a pole ({what})")


def _core_terms(asm: MetzlerAssembly, fd: FactorData, u: np.ndarray):
    """Batched pieces of the reduced determinant for sample points ``u`` (shape (P,))."""
    n = asm.n_vertices
    m0, m1 = asm.ordering.m0, asm.ordering.m1
    o, t, beta = asm.origins, asm.termini, asm.beta
    P = u.shape[0]
    uc = u[:, None]

    s = np.arange(m0)
    single_den = 1.0 + fd.gamma[s][None, :] * uc
    _pole_check(single_den, "1 + gamma_e u of an unpaired arc")
    A_nsym = np.zeros((P, n, n), dtype=complex)
    A_nsym[:, o[s], t[s]] = beta[s][None, :] * (1.0 + fd.epsilon[s][None, :] * uc) / single_den

    f = np.arange(m0, m0 + m1)
    finv = f + m1
    G = fd.pair_coef[:, 0][None, :] + fd.pair_coef[:, 1][None, :] * uc + fd.pair_coef[:, 2][None, :] * uc**2
    _pole_check(G, "quadratic pair factor")
    one_eps = 1.0 + fd.epsilon[f][None, :] * uc  # same for f and f^-1
    A_sym = np.zeros((P, n, n), dtype=complex)
    # arc f = (a, b) sits at [a, b]; its weight carries beta of the reverse arc
    A_sym[:, o[f], t[f]] = beta[finv][None, :] * (1.0 + fd.gamma[f][None, :] * uc) * one_eps / G
    A_sym[:, o[finv], t[finv]] = beta[f][None, :] * (1.0 + fd.gamma[finv][None, :] * uc) * one_eps / G

    d_pair = (beta[f] * beta[finv])[None, :] * one_eps / G  # (P, m1)
    inc = np.zeros((m1, n))
    inc[np.arange(m1), o[f]] += 1.0
    inc[np.arange(m1), t[f]] += 1.0
    D_tilde = d_pair @ inc  # (P, n) diagonal entries

    prefactor = np.prod(single_den, axis=1) * np.prod(G, axis=1)
    return A_nsym, A_sym, D_tilde, prefactor


def _reduced_matrix(asm, u, A_nsym, A_sym, D_tilde):
    n = asm.n_vertices
    uc = u[:, None, None]
    red = np.eye(n)[None] + uc * np.diag(asm.delta)[None] - uc * np.swapaxes(A_nsym, 1, 2) - uc * A_sym
    idx = np.arange(n)
    red[:, idx, idx] += (u[:, None] ** 2) * D_tilde
    return red


def factored_core(asm: MetzlerAssembly, u) -> FactoredCore:
    u_arr = np.array([complex(u)])
    fd = factor_data(asm)
    A_nsym, A_sym, D_tilde, _ = _core_terms(asm, fd, u_arr)
    red = _reduced_matrix(asm, u_arr, A_nsym, A_sym, D_tilde)
    Dmat = np.diag(D_tilde[0])
    M = A_nsym[0].T + A_sym[0] - complex(u) * Dmat
    return FactoredCore(complex(u), A_nsym[0], A_sym[0], Dmat, M, red[0])


def factored_det_many(asm: MetzlerAssembly, u) -> np.ndarray:
    """Factored form of ``det(I - uA)`` at every point of ``u``.

    ``prod_single (1 + gamma_e u) * prod_pairs G_k(u) * det(I + uD - uA_nsym^T - uA_sym + u^2 D_tilde)``
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    fd = factor_data(asm)
    A_nsym, A_sym, D_tilde, prefactor = _core_terms(asm, fd, u)
    red = _reduced_matrix(asm, u, A_nsym, A_sym, D_tilde)
    return prefactor * np.linalg.det(red)


def factored_det(asm: MetzlerAssembly, u):
    """Scalar version of :func:`factored_det_many`; real input gives a real result."""
    val = factored_det_many(asm, u)[0]
    return float(val.real) if np.isrealobj(u) else complex(val)


def fit_factored_det(asm: MetzlerAssembly) -> CoefficientFit:
    dim = asm.A_cal.shape[0]
    r0 = pencil_radius(asm.A_cal)
    last: PoleError | None = None
    for phase in (0.5, 0.5 + 1 / np.pi, 0.5 - 1 / np.e, 0.25, 0.75):
        try:
            return interpolate_on_circles(lambda u: factored_det_many(asm, u), dim, r0, phase=phase)
        except PoleError as exc:
            last = exc
    raise PoleError(f"no pole-free set of sample circles found: {last}")


def factored_det_poly(asm: MetzlerAssembly) -> Polynomial:
    """``det(I - uA)`` rebuilt by interpolating the factored form."""
    return fit_factored_det(asm).polynomial()


# --------------------------------------------------------------------------
# constant-rate specializations


def pair_factor_coef(beta: float, delta: float) -> np.ndarray:
    """``(1 + (b+2d)u)^2 - b^2 u^2 = (1 + 2du)(1 + 2(b+d)u)``."""
    return np.array([1.0, 2 * (beta + 2 * delta), 4 * delta * (beta + delta)])


def regular_diagonal_coef(beta: float, delta: float, degree: int) -> np.ndarray:
    """Cubic multiplying the identity in the reduced determinant of a regular graph."""
    b, d, k = beta, delta, degree
    return np.array(
        [
            1.0,
            2 * b + 5 * d,
            6 * b * d + 8 * d**2 + k * b**2,
            2 * d * (2 * d * (b + d) + k * b**2),
        ]
    )


def regular_adjacency_coef(beta: float, delta: float) -> np.ndarray:
    """``beta u (1 + 2 delta u)(1 + (beta + 2 delta) u)``."""
    b, d = beta, delta
    return np.array([0.0, b, b * (b + 4 * d), 2 * b * d * (b + 2 * d)])


def _structure(g: Digraph):
    index = set(g.arcs)
    n = g.n_vertices
    A0 = np.zeros((n, n))
    A1 = np.zeros((n, n))
    for a, b in g.arcs:
        if (b, a) in index:
            A1[a, b] = 1.0
        else:
            A0[a, b] = 1.0
    return A0, A1


def constant_rate_det(kind: str, g: Digraph, beta: float, delta: float, u):
    """``det(I - uA)`` of ``g`` with all rates set to ``beta``/``delta``, via closed forms.

    ``kind`` is ``"general-digraph"``, ``"undirected"`` (symmetric digraphs) or
    ``"regular"`` (symmetric digraphs of regular graphs).
    """
    if beta <= 0 or delta <= 0:
        raise ValueError("rates must be positive")
    ordering = arc_partition(g)
    n, m0, m1 = g.n_vertices, ordering.m0, ordering.m1
    u = complex(u) if np.iscomplexobj(u) else float(u)
    gamma = beta + 2 * delta
    eps = 2 * delta
    G = np.polynomial.polynomial.polyval(u, pair_factor_coef(beta, delta))
    one_g, one_e = 1 + gamma * u, 1 + eps * u
    if abs(one_g) < POLE_THRESHOLD or abs(G) < POLE_THRESHOLD:
        raise PoleError(f"u = {u} is at a pole of the constant-rate factors")

    if kind == "general-digraph":
        A0, A1 = _structure(g)
        Dp = np.diag(A1.sum(axis=1))  # paired out-degree
        core = (
            (1 + delta * u) * one_g * G * np.eye(n)
            - u * beta * one_e * G * A0.T
            - u * beta * one_e * one_g**2 * A1
            + u**2 * beta**2 * one_e * one_g * Dp
        )
        return one_g ** (m0 - n) * G ** (m1 - n) * np.linalg.det(core)
    if kind == "undirected":
        if m0 != 0:
            raise StructureMismatchError("undirected specialization needs a symmetric digraph")
        A = g.adjacency()
        core = (
            (1 + delta * u) * G * np.eye(n)
            - u * beta * one_e * one_g * A
            + u**2 * beta**2 * one_e * np.diag(A.sum(axis=1))
        )
        return G ** (m1 - n) * np.linalg.det(core)
    if kind == "regular":
        if m0 != 0:
            raise StructureMismatchError("regular specialization needs a symmetric digraph")
        A = g.adjacency()
        deg = A.sum(axis=1)
        if not np.all(deg == deg[0]):
            raise StructureMismatchError("regular specialization needs a regular graph")
        diag = np.polynomial.polynomial.polyval(u, regular_diagonal_coef(beta, delta, int(deg[0])))
        adj = np.polynomial.polynomial.polyval(u, regular_adjacency_coef(beta, delta))
        return G ** (m1 - n) * np.linalg.det(diag * np.eye(n) - adj * A)
    raise ValueError(f"unknown specialization {kind!r}")


# --------------------------------------------------------------------------
# Ihara zeta cross-checks


def edge_matrix(n: int, edges) -> np.ndarray:
    """``B - J0`` of the symmetric digraph of a graph, in canonical arc order."""
    return assemble(symmetrize(n, edges)).H.astype(float)


def ihara_zeta_recip(n: int, edges, u) -> tuple[complex, complex]:
    """Reciprocal Ihara zeta in edge-matrix form and in vertex (Bass) form."""
    g = symmetrize(n, edges)  # validates connectivity and simplicity
    T = assemble(g).H.astype(float)
    m = len(edges)
    edge_form = np.linalg.det(np.eye(2 * m) - u * T)
    A = g.adjacency()
    Dg = np.diag(A.sum(axis=1))
    bass_form = (1 - u**2) ** (m - n) * np.linalg.det(np.eye(n) - u * A + u**2 * (Dg - np.eye(n)))
    return edge_form, bass_form


def backtrackless_series_check(n: int, edges, u, L: int = 20) -> tuple[complex, complex]:
    """Truncated series ``exp(sum_{m<=L} tr(T^m) u^m / m)`` next to ``1 / det(I - uT)``."""
    if not 1 <= L <= 24:
        raise ValueError("truncation order must be in 1..24")
    T = edge_matrix(n, edges)
    rho = float(np.max(np.abs(np.linalg.eigvals(T)), initial=0.0))
    if abs(u) * rho >= 1.0:
        raise ConvergenceDomainError(f"|u| * spectral radius = {abs(u) * rho:g} >= 1")
    total = 0.0
    P = np.eye(T.shape[0])
    for m in range(1, L + 1):
        P = P @ T
        total += np.trace(P) * u**m / m
    return np.exp(total), 1.0 / np.linalg.det(np.eye(T.shape[0]) - u * T)


def count_backtrackless_closed_walks(n: int, edges, length: int) -> int:
    """Closed arc sequences ``e_1..e_m`` with no backtracking, including ``e_m -> e_1``."""
    arcs = [(a, b) for a, b in edges] + [(b, a) for a, b in edges]
    out: dict[int, list[int]] = {v: [] for v in range(n)}
    for i, (a, _) in enumerate(arcs):
        out[a].append(i)

    def ok(i, j):
        return arcs[i][1] == arcs[j][0] and not (arcs[j] == (arcs[i][1], arcs[i][0]))

    count = 0

    def walk(first, cur, steps):
        nonlocal count
        if steps == length:
            if ok(cur, first):
                count += 1
            return
        for nxt in out[arcs[cur][1]]:
            if ok(cur, nxt):
                walk(first, nxt, steps + 1)

    for start in range(len(arcs)):
        walk(start, start, 1)
    return count


def weinstein_aronszajn_check(A: np.ndarray, B: np.ndarray) -> tuple[float, float]:
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape != B.shape[::-1]:
        raise DimensionMismatchError(f"shapes {A.shape} and {B.shape} are not conformable both ways")
    r, s = A.shape
    return np.linalg.det(np.eye(r) - A @ B), np.linalg.det(np.eye(s) - B @ A)
