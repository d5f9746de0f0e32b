"""Spectra of the Metzler matrix: numeric, closed form for regular graphs, and the decay-rate bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .digraph import Digraph, MetzlerAssembly, arc_partition
from .errors import EigenSolverError, GraphValidationError, StructureMismatchError


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray  # complex, multiset
    source: str  # "numeric" or "closed-form"
    dimension: int

    def pairs(self) -> list[tuple[float, float]]:
        """``(re, im)`` pairs sorted by real part descending, then imaginary ascending."""
        ev = self.eigenvalues
        order = np.lexsort((ev.imag, -ev.real))
        return [(float(ev[i].real), float(ev[i].imag)) for i in order]


@dataclass(frozen=True)
class DecayBound:
    lambda_max: float
    bound: float
    dominant_imag: float


def eigenvalues(X: np.ndarray, name: str = "matrix") -> SpectrumResult:
    """Full spectrum of a dense real matrix (LAPACK: balancing, Hessenberg, shifted QR)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"{name} must be square, got shape {X.shape}")
    if X.shape[0] > 2000:
        raise ValueError(f"{name} has dimension {X.shape[0]} > 2000")
    try:
        ev = np.linalg.eigvals(X)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"QR iteration did not converge for {name}: {exc}") from exc
    return SpectrumResult(ev.astype(complex), "numeric", X.shape[0])


def multiset_distance(a, b) -> float:
    """Bottleneck distance between two equal-size multisets of complex numbers.

    Points are matched by a minimum-cost assignment; the largest matched
    distance is returned.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise ValueError(f"multisets have different sizes {a.size} and {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def cluster_means(ev, radius: float) -> np.ndarray:
    """Replace each eigenvalue by the mean of its cluster (single linkage at ``radius``).

    A defective eigenvalue of multiplicity ``k`` is only resolved to about
    ``eps^(1/k)``, but the mean of the perturbed cluster stays accurate.
    """
    from scipy.cluster.hierarchy import fcluster, linkage

    ev = np.asarray(ev, dtype=complex).ravel()
    if ev.size < 2:
        return ev.copy()
    labels = fcluster(linkage(np.column_stack([ev.real, ev.imag]), "single"), radius, "distance")
    out = ev.copy()
    for lab in np.unique(labels):
        out[labels == lab] = ev[labels == lab].mean()
    return out


def clustered_distance(a, b, rel_radius: float = 1e-4) -> float:
    """:func:`multiset_distance` after cluster averaging both sides."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    radius = rel_radius * max(1.0, float(np.max(np.abs(np.concatenate([a, b])), initial=0.0)))
    return multiset_distance(cluster_means(a, radius), cluster_means(b, radius))


def conjugate_pairing_error(ev) -> float:
    """How far a spectrum of a real matrix is from being closed under conjugation."""
    ev = np.asarray(ev, dtype=complex)
    return multiset_distance(ev, ev.conj())


def regular_cubic_coef(beta: float, delta: float, degree: int, mu: float) -> np.ndarray:
    """Monic cubic ``l^3 + c2 l^2 + c1 l + c0`` whose roots are eigenvalues for adjacency eigenvalue ``mu``.

    Highest degree first.
    """
    b, d, k = beta, delta, degree
    return np.array(
        [
            1.0,
            2 * b + 5 * d - b * mu,
            6 * b * d + 8 * d**2 + k * b**2 - b * (b + 4 * d) * mu,
            2 * d * (2 * d * (b + d) + k * b**2 - b * (b + 2 * d) * mu),
        ]
    )


def _companion_roots(coef_desc: np.ndarray) -> np.ndarray:
    c = np.asarray(coef_desc, dtype=float)
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(comp)


def pair_roots(beta: float, delta: float, form: str = "rederived") -> np.ndarray:
    """Roots of ``l^2 + 2(b + 2d) l + 4d(b + d)``, i.e. ``-2d`` and ``-2(b + d)``.

    ``form="published"`` returns ``-(b + 2d) +- sqrt(b^2 + 4d(b - 1))`` instead,
    the roots of the misprinted constant term ``4d(d + 1)``.
    """
    if form == "rederived":
        return np.array([-2.0 * delta, -2.0 * (beta + delta)], dtype=complex)
    if form == "published":
        disc = np.sqrt(complex(beta**2 + 4 * delta * (beta - 1)))
        return np.array([-(beta + 2 * delta) + disc, -(beta + 2 * delta) - disc])
    raise ValueError(f"unknown form {form!r}")


def metzler_spectrum_closed(g: Digraph, beta: float, delta: float, form: str = "rederived") -> SpectrumResult:
    """Eigenvalues of the Metzler matrix of a regular graph's symmetric digraph with constant rates.

    Three eigenvalues per adjacency eigenvalue ``mu`` (roots of a cubic, found
    as companion-matrix eigenvalues) plus the two pair-factor roots, each with
    multiplicity ``|E| - N``.
    """
    ordering = arc_partition(g)
    if ordering.m0 != 0:
        raise StructureMismatchError("closed-form spectrum needs a symmetric digraph")
    A = g.adjacency()
    deg = A.sum(axis=1)
    if not np.all(deg == deg[0]):
        raise StructureMismatchError("closed-form spectrum needs a regular graph")
    n, m_edges = g.n_vertices, ordering.m1
    mus = np.linalg.eigvalsh(A)
    cubic = [_companion_roots(regular_cubic_coef(beta, delta, int(deg[0]), mu)) for mu in mus]
    quad = np.repeat(pair_roots(beta, delta, form), m_edges - n)
    ev = np.concatenate(cubic + [quad]).astype(complex)
    return SpectrumResult(ev, "closed-form", n + 2 * m_edges)


def torus_adjacency_spectrum(d: int, N: int) -> np.ndarray:
    """Sorted multiset ``{2 sum_j cos(2 pi k_j / N)}`` over ``k in {0..N-1}^d``."""
    if d < 1 or N < 3:
        raise GraphValidationError(f"torus needs d >= 1 and N >= 3, got d={d}, N={N}")
    c = 2 * np.cos(2 * np.pi * np.arange(N) / N)
    total = np.zeros(())
    for _ in range(d):
        total = np.add.outer(total, c)
    return np.sort(total.ravel())


def decay_bound(asm: MetzlerAssembly) -> DecayBound:
    """Lower bound ``-lambda_max`` on the SIS decay rate.

    The rightmost eigenvalue of a Metzler matrix is real; ``dominant_imag`` is
    the smallest imaginary part among eigenvalues attaining the maximal real
    part and is reported so callers can see that this holds numerically.
    """
    ev = eigenvalues(asm.A_cal, "Metzler matrix").eigenvalues
    lam = float(np.max(ev.real))
    tol = 1e-9 * max(1.0, abs(lam))
    top = ev[ev.real >= lam - tol]
    return DecayBound(lam, -lam, float(np.min(np.abs(top.imag))))
