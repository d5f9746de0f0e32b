"""Walk-type zeta functions on finite tori.

Two families are covered:

* the coin walk ``M_A = sum_j (P_{2j-1} A tau_j^{-1} + P_{2j} A tau_j)`` on the
  torus, whose reciprocal zeta ``det(I - u M_A)^{1/N^d}`` factorizes over
  Fourier modes into ``2d x 2d`` blocks ``I - u diag(e^{iw_1}, e^{-iw_1}, ...) A``;
* the SIS Metzler matrix of the torus with constant rates, whose reciprocal
  zeta reduces to a product over adjacency eigenvalues ``2 sum_j cos(2 pi k_j / N)``
  and, as ``N -> oo``, to an integral that the same grid sum approximates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .digraph import assemble, build_torus
from .errors import ConvergenceDomainError, SingularPencilError
from .polydet import pair_factor_coef, regular_adjacency_coef, regular_diagonal_coef

DIRECT_DIM_LIMIT = 4000


@dataclass(frozen=True)
class ZetaValue:
    """Reciprocal zeta value ``value = exp(log_value)`` and the method that produced it."""

    value: complex
    log_value: complex
    method: str  # "direct-det", "fourier-product" or "quadrature-limit"
    params: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# coin walks


@dataclass(frozen=True, eq=False)
class CoinWalk:
    d: int
    N: int
    coin: np.ndarray

    def __post_init__(self):
        coin = np.array(self.coin, dtype=complex)
        if self.d < 1 or self.N < 2:
            raise ValueError(f"coin walk needs d >= 1 and N >= 2, got d={self.d}, N={self.N}")
        if coin.shape != (2 * self.d, 2 * self.d):
            raise ValueError(f"coin must be {2 * self.d}x{2 * self.d}, got {coin.shape}")
        coin.setflags(write=False)
        object.__setattr__(self, "coin", coin)

    @property
    def projections(self) -> list[np.ndarray]:
        k = 2 * self.d
        return [np.diag(np.eye(k)[j]) for j in range(k)]

    @property
    def n_sites(self) -> int:
        return self.N**self.d


def walk_operator(w: CoinWalk) -> np.ndarray:
    """Matrix of ``M_A`` on ``C^{2d} (x) C^{N^d}``; state index is ``site * 2d + component``.

    Component ``2j`` (0-based) reads the coin output from ``x + e_j``, component
    ``2j + 1`` from ``x - e_j``.
    """
    d, N, A = w.d, w.N, w.coin
    k = 2 * d
    shape = (N,) * d
    M = np.zeros((k * w.n_sites, k * w.n_sites), dtype=complex)
    for idx in itertools.product(range(N), repeat=d):
        x = int(np.ravel_multi_index(idx, shape))
        for j in range(d):
            for comp, step in ((2 * j, 1), (2 * j + 1, -1)):
                nb = list(idx)
                nb[j] = (nb[j] + step) % N
                y = int(np.ravel_multi_index(nb, shape))
                M[x * k + comp, y * k : y * k + k] += A[comp, :]
    return M


def fourier_symbol(w: CoinWalk, wave) -> np.ndarray:
    """``sum_j (e^{i w_j} P_{2j-1} + e^{-i w_j} P_{2j}) A`` for a wave vector ``wave``."""
    wave = np.asarray(wave, dtype=float)
    phases = np.empty(2 * w.d, dtype=complex)
    phases[0::2] = np.exp(1j * wave)
    phases[1::2] = np.exp(-1j * wave)
    return phases[:, None] * w.coin


def wave_vectors(d: int, N: int) -> np.ndarray:
    k = 2 * np.pi * np.arange(N) / N
    return np.array(list(itertools.product(k, repeat=d)))


def continued_logdet(X: np.ndarray, u, steps: int = 64, max_steps: int = 1 << 16) -> complex:
    """``log det(I - uX)`` on the branch obtained by continuation from ``u = 0``.

    The determinant is followed along ``s u``, ``s in [0, 1]``, and its phase
    unwrapped; the step count is doubled until no phase jump exceeds pi/4.
    """
    X = np.asarray(X)
    n = X.shape[0]
    while steps <= max_steps:
        s = np.linspace(0.0, 1.0, steps + 1)
        dets = np.linalg.det(np.eye(n)[None] - (s * u)[:, None, None] * X[None])
        if np.any(dets == 0) or np.min(np.abs(dets)) < 1e-300:
            raise SingularPencilError(f"det(I - suX) vanishes on the path to u = {u}")
        jumps = np.angle(dets[1:] / dets[:-1])
        if np.max(np.abs(jumps), initial=0.0) < np.pi / 4:
            return complex(np.log(np.abs(dets[-1])) + 1j * np.sum(jumps))
        steps *= 2
    raise ConvergenceDomainError(f"could not track the phase of det(I - uX) up to u = {u}")


def walk_zeta(w: CoinWalk, u) -> tuple[ZetaValue, ZetaValue]:
    """Reciprocal walk zeta by the full determinant and by the Fourier block product."""
    params = {"d": w.d, "N": w.N, "u": u}
    if u == 0:
        return ZetaValue(1.0, 0.0, "direct-det", params), ZetaValue(1.0, 0.0, "fourier-product", params)
    M = walk_operator(w)
    logdet = continued_logdet(M, u)
    direct = ZetaValue(np.exp(logdet / w.n_sites), logdet / w.n_sites, "direct-det", params)

    total = 0.0 + 0.0j
    for wave in wave_vectors(w.d, w.N):
        block = fourier_symbol(w, wave)
        principal = np.log(complex(np.linalg.det(np.eye(2 * w.d) - u * block)))
        if abs(continued_logdet(block, u) - principal) > 1e-6:
            raise ConvergenceDomainError(
                f"block determinant at wave vector {tuple(wave)} winds around 0; |u| = {abs(u)} too large"
            )
        total += principal
    log_f = total / w.n_sites
    fourier = ZetaValue(np.exp(log_f), log_f, "fourier-product", params)
    return direct, fourier


def block_product_error(w: CoinWalk, u) -> float:
    """Relative gap between ``det(I - u M_A)`` and the product of the Fourier block determinants."""
    M = walk_operator(w)
    full = np.linalg.det(np.eye(M.shape[0]) - u * M)
    prod = 1.0 + 0.0j
    for wave in wave_vectors(w.d, w.N):
        prod *= np.linalg.det(np.eye(2 * w.d) - u * fourier_symbol(w, wave))
    return float(abs(full - prod) / max(abs(full), 1e-300))


# --------------------------------------------------------------------------
# Metzler zeta on the torus


def _mode_factor(d: int, beta: float, delta: float, u: float, mu) -> np.ndarray:
    """Per-mode factor of the reduced determinant for adjacency eigenvalue ``mu``."""
    pv = np.polynomial.polynomial.polyval
    return pv(u, regular_diagonal_coef(beta, delta, 2 * d)) - pv(u, regular_adjacency_coef(beta, delta)) * mu


def _grid_mus(d: int, n: int) -> np.ndarray:
    c = 2 * np.cos(2 * np.pi * np.arange(n) / n)
    total = np.zeros(())
    for _ in range(d):
        total = np.add.outer(total, c)
    return total.ravel()


def _prefactor_log(d: int, beta: float, delta: float, u: float, exponent: str) -> float:
    G = np.polynomial.polynomial.polyval(u, pair_factor_coef(beta, delta))
    power = {"rederived": d - 1, "published": 2 * d - 1}[exponent]
    if power == 0:
        return 0.0
    if G <= 0:
        raise ConvergenceDomainError(f"pair factor G(u) = {G:g} <= 0 at u = {u}")
    return power * float(np.log(G))


def _grid_log(d, beta, delta, u, n, exponent):
    vals = _mode_factor(d, beta, delta, u, _grid_mus(d, n))
    if np.min(vals) <= 0:
        i = int(np.argmin(vals))
        theta = np.array(np.unravel_index(i, (n,) * d)) * 2 * np.pi / n
        raise ConvergenceDomainError(f"log argument {vals[i]:g} <= 0 at theta = {tuple(theta)}")
    return _prefactor_log(d, beta, delta, u, exponent) + float(np.mean(np.log(vals)))


def metzler_zeta_finite(
    d: int, N: int, beta: float, delta: float, u: float, exponent: str = "rederived"
) -> tuple[ZetaValue, ZetaValue]:
    """Reciprocal Metzler zeta of the torus by full determinant and by the adjacency spectrum.

    ``exponent`` selects the power of the pair factor in front of the mode
    product: ``"rederived"`` uses ``(|E| - N^d) / N^d = d - 1``,
    ``"published"`` the printed ``2d - 1``.
    """
    params = {"d": d, "N": N, "beta": beta, "delta": delta, "u": u}
    g = build_torus(d, N, beta, delta)
    dim = (2 * d + 1) * N**d
    if dim > DIRECT_DIM_LIMIT:
        raise MemoryError(f"direct determinant would be {dim}x{dim} (limit {DIRECT_DIM_LIMIT})")
    A = assemble(g).A_cal
    sign, logabs = np.linalg.slogdet(np.eye(dim) - u * A)
    if sign <= 0:
        raise ConvergenceDomainError(f"det(I - uA) = {sign} * exp({logabs:g}) has no positive real root")
    log_direct = logabs / N**d
    direct = ZetaValue(float(np.exp(log_direct)), log_direct, "direct-det", params)
    log_spec = _grid_log(d, beta, delta, u, N, exponent)
    spectral = ZetaValue(float(np.exp(log_spec)), log_spec, "fourier-product", params)
    return direct, spectral


def metzler_zeta_spectral(d: int, N: int, beta: float, delta: float, u: float) -> ZetaValue:
    """Spectral-product value only; no size limit."""
    log_spec = _grid_log(d, beta, delta, u, N, "rederived")
    params = {"d": d, "N": N, "beta": beta, "delta": delta, "u": u}
    return ZetaValue(float(np.exp(log_spec)), log_spec, "fourier-product", params)


def metzler_zeta_limit(d: int, beta: float, delta: float, u: float, Q: int = 128) -> tuple[ZetaValue, float]:
    """``N -> oo`` limit by the uniform Riemann sum on a ``Q^d`` grid over ``[0, 2 pi)^d``.

    Returns the value and ``|value(Q) - value(Q // 2)|`` as a convergence estimate.
    """
    if Q < 2:
        raise ValueError("quadrature resolution must be >= 2")
    b = np.polynomial.polynomial.polyval(u, regular_adjacency_coef(beta, delta))
    a = np.polynomial.polynomial.polyval(u, regular_diagonal_coef(beta, delta, 2 * d))
    if a - 2 * d * abs(b) <= 0:
        # the integrand a - b * 2 sum cos(theta_j) reaches zero on the torus
        theta = 0.0 if b > 0 else np.pi
        raise ConvergenceDomainError(
            f"log argument reaches {a - 2 * d * abs(b):g} <= 0 at theta = {(theta,) * d}"
        )
    log_q = _grid_log(d, beta, delta, u, Q, "rederived")
    log_half = _grid_log(d, beta, delta, u, max(Q // 2, 1), "rederived")
    params = {"d": d, "Q": Q, "beta": beta, "delta": delta, "u": u}
    value = float(np.exp(log_q))
    return ZetaValue(value, log_q, "quadrature-limit", params), float(abs(value - np.exp(log_half)))


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    log_zeta_recip: float
    diff: float | None  # |log value(N) - log value(previous N)|
    limit_gap: float  # |log value(N) - log value(limit)|


def limit_convergence_table(
    d: int, beta: float, delta: float, u: float, Ns, reference_Q: int | None = None
) -> list[ConvergenceRow]:
    Ns = [int(n) for n in Ns]
    if not Ns or min(Ns) < 3:
        raise ValueError("N list must be nonempty with every N >= 3")
    if reference_Q is None:
        reference_Q = max(8 * max(Ns), 256) if d == 1 else max(4 * max(Ns), 64)
    limit, _ = metzler_zeta_limit(d, beta, delta, u, reference_Q)
    rows = []
    prev = None
    for n in Ns:
        log_n = metzler_zeta_spectral(d, n, beta, delta, u).log_value
        rows.append(
            ConvergenceRow(
                n,
                log_n,
                None if prev is None else abs(log_n - prev),
                abs(log_n - limit.log_value),
            )
        )
        prev = log_n
    return rows
