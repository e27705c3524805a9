"""Bohr-radius brackets for a Faber-Green condenser.

Upper bounds come from the Caratheodory-type coefficient inequality: the
Bohr property holds at level ``R`` once ``g(R) = sum 2 M_n / (R**n - 1) <= 1``.
Lower bounds come from the extremal family

    f(z) = -r1 + (1/r1 - r1) * sum_n (r1/R)**n F_n(z)

whose Bohr sum ``S`` exceeds its boundary sup ``T`` on the level ``R`` whenever
the Bohr property fails there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .exceptions import BohrLabError, DomainError
from .faber import en_tail_bound, faber_polys, scale_to_level
from .norms import NormModel

OVERFLOW_GUARD = 1e6


def caratheodory_bound(reA0, R, n):
    if R <= 1:
        raise DomainError("R must exceed 1")
    if n < 1 or reA0 < 0:
        raise ValueError("need n >= 1 and re(a0) >= 0")
    return 2.0 * reA0 / (R ** n - 1)


def caratheodory_bound_annulus(reA0, R, r, n):
    """Coefficient bound on the annulus ``1/r < |w| < R``: ``2 re a0 / (R**n - r**-n)``."""
    if R <= 1 or r <= 1:
        raise DomainError("need R > 1 and r > 1")
    denom = R ** n - r ** (-n)
    if denom <= 0:
        raise DomainError("R**n must exceed r**-n")
    return 2.0 * reA0 / denom


@dataclass(frozen=True)
class CaratheodoryCheck:
    ok: bool
    worst_slack: float
    slacks: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)    # bound / |a_n|, inf where a_n = 0


def check_caratheodory(coeffs, R, fmap=None, tol=0.0):
    """Check ``|a_n| <= 2 re(a0) / (R**n - 1)`` for every supplied ``n >= 1``."""
    a = np.asarray(coeffs, dtype=complex)
    re0 = a[0].real
    if re0 < 0:
        raise DomainError("re(a0) < 0: rotate f so that a0 is a nonnegative real first")
    n = np.arange(1, a.size)
    bound = 2.0 * re0 / (R ** n.astype(float) - 1)
    mags = np.abs(a[1:])
    slack = bound - mags
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(mags > 0, bound / np.where(mags > 0, mags, 1), np.inf)
    worst = float(slack.min()) if slack.size else math.inf
    return CaratheodoryCheck(bool(worst >= -tol), worst, slack, ratios)


@dataclass(frozen=True)
class BoundReport:
    direction: str
    R: float
    method: str
    residual: float
    truncationN: int
    tailEstimate: float
    params: dict = field(default_factory=dict)

    def row(self, condenser=""):
        return (condenser, self.direction, self.R, self.method, self.residual)


def _series_parts(M, scale, R, N, r_inner):
    n = np.arange(1, N + 1, dtype=float)
    denom = R ** n - (r_inner ** -n if r_inner else 1.0)
    head = 2.0 * scale * float(np.sum(M.values(N) / denom))
    # R**n - r**-n >= R**n - 1 >= R**n (1 - R**-(N+1)) for n > N
    tail = 2.0 * scale * M.tail_sum(N, 1.0 / R) / (1.0 - R ** -(N + 1))
    return head, tail


def _choose_N(M, scale, R, tol, n_cap):
    N = 8
    while True:
        _, tail = _series_parts(M, scale, R, N, None)
        if tail < tol / 10:
            return N
        if N >= n_cap:
            raise BohrLabError(f"series tail at R={R:.6g} not below tol/10 within {n_cap} terms")
        N = min(2 * N, n_cap)


def _solve(M, tol, n_cap, inflation, r_inner, method):
    if M.is_sampled and inflation is None:
        raise ValueError("sampled norms are estimates; pass an explicit inflation factor "
                         "(e.g. 1 + 1e-4) to use them for an upper bound")
    scale = inflation or 1.0
    params = {"tol": tol, "model": M.name, "inflation": scale}
    if r_inner is not None:
        params["r"] = r_inner
    if M.envelope == 0 and all(M.value(n) == 0 for n in range(1, 65)):
        return BoundReport("upper", 1.0, method + ":degenerate", 0.0, 0, 0.0, params)

    def g(R, N):
        h, t = _series_parts(M, scale, R, N, r_inner)
        return h + t

    hi = 2.0
    while g(hi, _choose_N(M, scale, hi, tol, n_cap)) >= 1:
        hi *= 2
        if hi > OVERFLOW_GUARD:
            raise BohrLabError("g(R) > 1 for every R below the overflow guard")
    lo = hi
    while True:
        lo = 1.0 + (lo - 1.0) * 0.9
        N = _choose_N(M, scale, hi, tol, n_cap)
        if _series_parts(M, scale, lo, N, r_inner)[0] > 1:
            break
    N = _choose_N(M, scale, lo, tol, n_cap)
    R = brentq(lambda x: g(x, N) - 1.0, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
               maxiter=500)
    while g(R, N) > 1.0:
        R = np.nextafter(R, np.inf)
    head, tail = _series_parts(M, scale, R, N, r_inner)
    params["bracket"] = (lo, hi)
    return BoundReport("upper", float(R), method, head + tail - 1.0, N, tail, params)


def upper_series(M, R, r=None, tol=1e-12, n_cap=100000):
    """``g(R) = sum 2 M_n / (R**n - 1)`` (or ``R**n - r**-n``), tail included as a bound."""
    if R <= 1:
        raise DomainError("R must exceed 1")
    N = _choose_N(M, 1.0, R, tol, n_cap)
    head, tail = _series_parts(M, 1.0, R, N, r)
    return head + tail


def solve_upper(M, tol=1e-9, n_cap=100000, sampled_inflation=None):
    """Smallest ``R`` with ``sum 2 M_n / (R**n - 1) + tail <= 1``."""
    return _solve(M, tol, n_cap, sampled_inflation, None, f"series:{M.name}")


def solve_upper_annulus(M, r, tol=1e-9, n_cap=100000, sampled_inflation=None):
    """As :func:`solve_upper` with denominators ``R**n - r**-n`` (level-set condenser)."""
    if r <= 1:
        raise DomainError("inner level r must exceed 1")
    return _solve(M, tol, n_cap, sampled_inflation, float(r), f"annulus-series:{M.name}")


def bohr_sum(coeffs, M, N=None):
    """``sum_{n<=N} |a_n| M_n`` with ``M_0 = 1``."""
    a = np.abs(np.asarray(coeffs, dtype=complex))
    N = a.size - 1 if N is None else N
    if N >= a.size:
        raise ValueError("N exceeds the number of available coefficients")
    m = np.concatenate([[1.0], M.values(N)]) if N else np.array([1.0])
    return float(np.sum(a[:N + 1] * m))


def extremal_coefficients(R, r1, N):
    """Faber coefficients of the extremal family member at level ``R``."""
    n = np.arange(1, N + 1)
    return np.concatenate([[-r1], (1 / r1 - r1) * (r1 / R) ** n])


@dataclass(frozen=True)
class Certificate:
    R: float
    r1: float
    r0: float
    bohrSum: float
    boundarySup: float
    ratio: float
    certified: bool
    margin: float
    truncationN: int = 0
    tail: float = 0.0
    boundarySampled: float = float("nan")
    reason: str = ""


def _is_positive(fmap, tol=1e-12):
    return all(b.real >= -tol and abs(b.imag) <= tol for b in fmap.betas)


def _alpha_table(fmap, N):
    polys = faber_polys(fmap, N)
    width = max((p.alpha_tail.size for p in polys), default=0)
    table = np.zeros((N + 1, width), dtype=complex)
    for p in polys:
        table[p.n, :p.alpha_tail.size] = p.alpha_tail
    return table


def _tail_T(fmap, M, R, r1, N, positive, r0):
    x = r1 / R
    k = 1 / r1 - r1
    if fmap.is_affine:
        return 0.0
    if positive:
        # sup |E_n| on |w| = R is at most sum_j alpha_j = M_n - 1 < M_n
        return k * M.tail_sum(N, x)
    tb = en_tail_bound(fmap, r0, 0.5 * (r0 + R), R)
    q = x * r0
    return k * tb.Mprime * q ** (N + 1) / (1 - q)


def lower_certificate(fmap, M, R, r1, trunc=80, margin=1e-6, n_theta=4096, r0=None):
    """Evaluate the extremal family at ``(R, r1)``.

    ``boundarySup`` is an upper bound for ``sup |f|`` on the level ``R``: the
    Moebius part has modulus one, the Faber tails are bounded on a grid plus a
    Lipschitz correction, and the discarded ``n > N`` terms are bounded
    separately.  Certified means ``bohrSum / boundarySup > 1 + margin``, which
    shows the Bohr property fails at ``R`` and hence ``B(K) >= R``.
    """
    if not 0 < r1 < 1:
        raise DomainError("r1 must lie in (0, 1)")
    if R <= 1:
        raise DomainError("R must exceed 1")
    r0 = math.sqrt(R) if r0 is None else r0
    positive = _is_positive(fmap)
    x = r1 / R
    k = 1 / r1 - r1

    # N must make both the boundary-sup tail and the Bohr-sum tail negligible
    N, tail = 1, math.inf
    while N <= trunc:
        tail = _tail_T(fmap, M, R, r1, N, positive, r0)
        tail_S = k * M.tail_sum(N, x)
        if max(tail, tail_S) < margin / 10:
            break
        N = N + 1 if N < 8 else N + 4
    N = min(N, trunc)
    if max(tail, tail_S) >= margin / 10:
        return Certificate(R, r1, r0, math.nan, math.nan, math.nan, False, margin, N, tail,
                           reason="truncation tail not below margin/10")

    S = r1 + k * float(np.sum(x ** np.arange(1, N + 1) * M.values(N)))

    table = _alpha_table(fmap, N)
    c = (x ** np.arange(N + 1)) @ table                # c_j = sum_n x**n alpha_j^(n)
    b = k * c * R ** -np.arange(1.0, c.size + 1)      # coefficient of e^{-i j theta}
    theta = 2 * np.pi * np.arange(n_theta) / n_theta

    def B(t):
        if b.size == 0:
            return np.zeros_like(t, dtype=complex)
        j = np.arange(1, b.size + 1)
        return np.exp(-1j * np.outer(t, j)) @ b

    if b.size and b.size < n_theta:
        padded = np.zeros(n_theta, dtype=complex)
        padded[1:b.size + 1] = b
        Bgrid = np.fft.fft(padded)
    else:
        Bgrid = B(theta)
    e = np.exp(1j * theta)
    A = (e - r1) / (1 - r1 * e)
    fvals = np.abs(A + Bgrid)
    i = int(np.argmax(fvals))
    h = 2 * np.pi / n_theta
    t = theta[i] + np.linspace(-h, h, 65)
    et = np.exp(1j * t)
    sampled = max(float(fvals[i]), float(np.abs((et - r1) / (1 - r1 * et) + B(t)).max()))

    lip = float(np.sum(np.arange(1, b.size + 1) * np.abs(b))) if b.size else 0.0
    supB = float(np.abs(Bgrid).max()) + lip * np.pi / n_theta if b.size else 0.0
    T = 1.0 + supB + tail
    ratio = S / T
    ok = ratio > 1 + margin
    return Certificate(R, r1, r0, S, T, ratio, bool(ok), margin, N, tail, sampled,
                       "" if ok else "ratio not above 1 + margin")


def lower_scan(fmap, M, Rgrid, r1grid, **kwargs):
    """Largest certified level over ``Rgrid x r1grid`` as a lower bound report."""
    Rgrid = np.sort(np.asarray(Rgrid, dtype=float))
    best = None
    for R in Rgrid:
        if best is not None and R <= best.R:
            continue
        for r1 in r1grid:
            cert = lower_certificate(fmap, M, float(R), float(r1), **kwargs)
            if cert.certified:
                best = cert
                break
    step = float(np.max(np.diff(Rgrid))) if Rgrid.size > 1 else 0.0
    params = {"grid_step": step, "R_range": (float(Rgrid[0]), float(Rgrid[-1])),
              "r1grid": tuple(float(r) for r in r1grid), "model": M.name}
    if best is None:
        return BoundReport("lower", 1.0, "extremal-certificate:none", 0.0, 0, 0.0, params)
    params["r1"] = best.r1
    return BoundReport("lower", best.R, "extremal-certificate", best.ratio - 1,
                       best.truncationN, best.tail, params)


@dataclass(frozen=True)
class AsymptoticRow:
    r: float
    lowerB: float
    upperB: float
    Mprime: float
    epsilonUp: float
    epsilonDown: float
    lowerMethod: str = ""


def analytic_lower(tb, r):
    """Largest ``R`` violating ``1/(R-1) <= 1/2 + M/r + M'(r) r0 / (R r - r0)``."""
    M = tb.lemma_constant
    Mp = tb.Mprime

    def h(R):
        return 1 / (R - 1) - 0.5 - M / r - Mp * tb.r0 / (R * r - tb.r0)

    grid = 1 + np.geomspace(1e-8, 2.0, 4000)
    vals = np.array([h(R) for R in grid])
    pos = np.nonzero(vals > 0)[0]
    if pos.size == 0:
        return 1.0
    i = pos[-1]
    if i + 1 >= grid.size:
        return float(grid[-1])
    return float(brentq(h, grid[i], grid[i + 1], xtol=1e-14))


DEFAULT_R1GRID = (0.9, 0.99, 0.999, 0.9999)


def theorem2_experiment(fmap, r_list, r0=1.5, r0prime=2.0, tol=1e-9, Rgrid=None,
                        r1grid=DEFAULT_R1GRID, n_grid=4096):
    """Bracket ``B(Omega_r)`` for each ``r``; both ends should approach 3."""
    r_list = [float(r) for r in r_list]
    if any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise ValueError("r_list must be increasing")
    if not 1 < r0 < r0prime <= min(r_list):
        raise DomainError("need 1 < r0 < r0prime <= every r")
    if Rgrid is None:
        Rgrid = np.round(np.arange(2.5, 4.0 + 1e-9, 0.005), 10)
    rows = []
    for r in r_list:
        if fmap.is_affine:
            rows.append(AsymptoticRow(r, 3.0, 3.0, 0.0, 0.0, 0.0, "exact-disk"))
            continue
        tb = en_tail_bound(fmap, r0, r0prime, r, n_grid)
        Mp, q = tb.Mprime, r0 / r
        model = NormModel.custom(lambda n, Mp=Mp, q=q: 1.0 + q ** n * Mp,
                                 envelope=1.0 + q * Mp, label="tail-bound-upper")
        upper = solve_upper_annulus(model, r, tol).R
        scaled = scale_to_level(fmap, r)
        if _is_positive(scaled):
            rep = lower_scan(scaled, NormModel.positive_class(scaled), Rgrid, r1grid)
            lower, how = rep.R, "extremal-certificate"
        else:
            lower, how = analytic_lower(tb, r), "analytic"
        rows.append(AsymptoticRow(r, lower, upper, Mp, upper - 3.0, 3.0 - lower, how))
    return rows
