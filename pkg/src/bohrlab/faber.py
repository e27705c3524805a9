"""Faber polynomials of a continuum given by its inverse exterior map.

``F_n`` is the unique degree-``n`` polynomial whose composition with ``psi``
has Laurent expansion ``w**n + sum_j alpha_j w**-j``.  We build it by a
triangular solve against the powers ``psi**0 .. psi**n``: the coefficient of
``w**d`` in ``sum_k c_k psi**k`` must vanish for ``0 <= d < n``.

The tails ``alpha_j`` are taken from the Faber recurrence run directly on the
Laurent side, where every series stays bounded.  Reading them off the
composition instead subtracts powers of size ``gamma**n`` and loses all
accuracy once ``n`` reaches a few dozen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .exceptions import DomainError, OracleFailure
from .laurent import DD_DIGITS, ExteriorMap, LaurentSeries, get_precision, laurent_mul


@dataclass(frozen=True, eq=False)
class FaberPoly:
    n: int
    z_coeffs: np.ndarray          # ascending powers of z
    alpha_tail: np.ndarray        # alpha_1 .. alpha_J
    map: ExteriorMap = field(repr=False)
    residual: float = 0.0         # max |coeff| of w**0..w**(n-1) and |lead - 1|
    precision: str = "double"

    def __call__(self, z):
        return np.polyval(self.z_coeffs[::-1], z)

    def composed(self, w):
        """``F_n(psi(w))`` from the Laurent form ``w**n + sum alpha_j w**-j``."""
        w = np.asarray(w, dtype=complex)
        val = w ** self.n
        if self.alpha_tail.size:
            u = 1.0 / w
            acc = np.zeros_like(w)
            for a in self.alpha_tail[::-1]:
                acc = acc * u + a
            val = val + u * acc
        return val

    def tail_at(self, w):
        return self.composed(w) - np.asarray(w, dtype=complex) ** self.n

    def composition_residual(self, radius=1.5, n_theta=512):
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        w = radius * np.exp(1j * theta)
        return float(np.abs(self(self.map(w)) - self.composed(w)).max())

    def to_dict(self):
        return {
            "degree": self.n,
            "zCoeffs": [[c.real, c.imag] for c in self.z_coeffs],
            "alphaTail": [[a.real, a.imag] for a in self.alpha_tail],
            "residual": self.residual,
            "compositionResidual": self.composition_residual(),
            "precision": self.precision,
        }


def _psi_powers(psi, n, lo):
    powers = [LaurentSeries.constant(1.0, psi.precision)]
    for _ in range(n):
        nxt = laurent_mul(powers[-1], psi)
        if nxt.lo < lo:
            nxt = nxt.restrict(lo, nxt.hi)
        powers.append(nxt)
    return powers


def _solve(powers, n, gamma_pow, zero):
    c = [zero] * (n + 1)
    c[n] = gamma_pow[n]
    for d in range(n - 1, -1, -1):
        acc = zero
        for k in range(d + 1, n + 1):
            acc += c[k] * powers[k][d]
        c[d] = -gamma_pow[d] * acc
    return c


def _composition(powers, c, lo, n):
    hi = n
    dtype = powers[0].coeffs.dtype
    total = np.zeros(hi - lo + 1, dtype=dtype)
    if dtype == object:
        total[:] = mpmath.mpc(0)
    for k, ck in enumerate(c):
        p = powers[k]
        a = max(p.lo, lo)
        total[a - lo:p.hi - lo + 1] += ck * p.coeffs[a - p.lo:]
    return total


def _alpha_recurrence(fmap, N, L, precision):
    """Negative parts ``A_n[m]`` (coefficient of ``w**-m``, ``m = 1..L``) of ``F_n(psi(w))``.

    With ``b_j = gamma beta_j`` the recurrence
    ``F_{n+1} = z F_n - sum_{j<=n} b_j F_{n-j} - n b_n`` in the monic variable
    becomes ``A_{n+1}[m] = A_n[m+1] + b_{n+m} + (b * A_n)[m] - sum_{j>=1} b_j A_{n-j}[m]``.
    """
    dd = precision == "dd"
    if dd:
        g = mpmath.mpf(fmap.gamma)
        b = np.array([mpmath.mpc(0)] + [g * mpmath.mpc(x) for x in fmap.betas], dtype=object)
        zeros = lambda: np.array([mpmath.mpc(0)] * (L + 2), dtype=object)  # noqa: E731
    else:
        b = np.concatenate([[0j], fmap.gamma * np.asarray(fmap.betas, dtype=complex)])
        zeros = lambda: np.zeros(L + 2, dtype=complex)  # noqa: E731
    J = b.size - 1
    A = [zeros()]                                   # index m; slots 0 and L+1 are padding
    for n in range(N):
        cur = A[-1]
        nxt = zeros()
        nxt[1:L + 1] = cur[2:L + 2]
        lo_m, hi_m = 1, min(L, J - n)
        if hi_m >= lo_m:
            nxt[lo_m:hi_m + 1] += b[n + lo_m:n + hi_m + 1]
        if J:
            nxt[1:L + 1] += np.convolve(b, cur)[1:L + 1]
            for j in range(1, min(n, J) + 1):
                nxt[1:L + 1] -= b[j] * A[n - j][1:L + 1]
        A.append(nxt)
    return [a[1:L + 1] for a in A]


@lru_cache(maxsize=256)
def _faber_batch(fmap, N, tail, precision):
    J = fmap.J
    tail = J * N if tail is None else tail
    lo = -(tail + N)
    dd = precision == "dd"
    ctx = mpmath.workdps(DD_DIGITS) if dd else _nullctx()
    with ctx:
        psi = fmap.series(precision)
        powers = _psi_powers(psi, N, lo)
        if dd:
            g = mpmath.mpf(fmap.gamma)
            zero = mpmath.mpc(0)
        else:
            g = fmap.gamma
            zero = 0j
        gamma_pow = [g ** k for k in range(N + 1)]
        # one spare slot per step absorbs the upward drift of truncation error
        tails = _alpha_recurrence(fmap, N, tail + N + 1, precision)
        out = []
        for n in range(N + 1):
            c = _solve(powers, n, gamma_pow, zero)
            comp = _composition(powers[:n + 1], c, lo, n)
            poly_part = comp[-(n + 1):]            # w**0 .. w**n
            resid = max([abs(x) for x in poly_part[:-1]] + [abs(poly_part[-1] - 1)])
            ntail = min(tail, J * n)
            alpha = tails[n][:ntail]
            zc = np.array([complex(x) for x in c])
            al = np.array([complex(x) for x in alpha], dtype=complex)
            zc.setflags(write=False)
            al.setflags(write=False)
            out.append(FaberPoly(n, zc, al, fmap, float(resid), precision))
    return tuple(out)


class _nullctx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def faber_polys(fmap, N, tail=None, precision=None):
    """All Faber polynomials ``F_0 .. F_N`` sharing one table of psi-powers.

    ``tail=None`` keeps every nonzero alpha (exact for finite maps: the
    composition of ``F_n`` with a Laurent polynomial of depth ``J`` stops at
    ``w**(-J n)``).
    """
    if N < 0:
        raise ValueError("degree must be nonnegative")
    if not isinstance(fmap, ExteriorMap):
        raise TypeError("expected an ExteriorMap")
    return _faber_batch(fmap, int(N), None if tail is None else int(tail), get_precision(precision))


def faber_poly(fmap, n, J=None, precision=None):
    if n < 0 or (J is not None and J < 0):
        raise ValueError("n and J must be nonnegative")
    return faber_polys(fmap, n, J, precision)[n]


def _winding_number(curve, z):
    ang = np.unwrap(np.angle(curve - z))
    return (ang[-1] - ang[0] + np.angle((curve[0] - z) / (curve[-1] - z))) / (2 * np.pi)


def faber_oracle(fmap, n, z, rho=1.5, nodes=256, max_doublings=10, tol=1e-10):
    """Contour-integral value of ``F_n(z)``, independent of the triangular solve.

    Uses the generating kernel ``w psi'(w) / (psi(w) - z) = sum F_n(z) w**-n``
    on ``|w| = rho`` with the periodic trapezoid rule, doubling ``nodes``
    until two successive values agree to ``tol``.
    """
    if nodes & (nodes - 1):
        raise ValueError("nodes must be a power of two")
    probe = rho * np.exp(2j * np.pi * np.arange(4096) / 4096)
    if round(_winding_number(fmap(probe), z)) != 1:
        raise DomainError("z is not enclosed by psi(|w| = rho)")
    prev = None
    for _ in range(max_doublings + 1):
        w = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        val = np.mean(w ** (n + 1) * fmap.derivative(w) / (fmap(w) - z))
        if prev is not None and abs(val - prev) < tol * max(1.0, abs(val)):
            return complex(val)
        prev = val
        nodes *= 2
    raise OracleFailure(f"contour oracle did not converge for n={n}, z={z}")


def faber_coefficients(f, fmap, rho, n_max, nodes=None, tol=1e-13, max_nodes=1 << 16):
    """Faber coefficients ``a_0 .. a_n_max`` of ``f`` on the level ``rho``.

    ``f`` is either a callable of ``z`` or an array of samples of
    ``f(psi(rho e^{i theta_k}))`` on equispaced ``theta_k``.
    """
    if rho <= 1:
        raise DomainError("rho must exceed 1")

    def extract(samples):
        m = samples.size
        if m <= 2 * n_max:
            raise ValueError("need more than 2*n_max samples")
        a = np.fft.fft(samples)[: n_max + 1] / m
        return a * rho ** -np.arange(n_max + 1.0)

    if not callable(f):
        return extract(np.asarray(f, dtype=complex))
    m = nodes or max(256, 1 << int(math.ceil(math.log2(4 * n_max + 4))))
    prev = None
    while True:
        w = rho * np.exp(2j * np.pi * np.arange(m) / m)
        a = extract(np.asarray(f(fmap(w)), dtype=complex))
        if prev is not None:
            scale = max(1.0, float(np.abs(a).max()))
            if np.abs(a - prev).max() < tol * scale:
                return a
        if m >= max_nodes or nodes is not None:
            return a
        prev = a
        m *= 2


@dataclass(frozen=True)
class TailBound:
    """Uniform bound ``|E_n| <= r0**n L / (2 pi d)`` outside the level ``r``."""

    r0: float
    r0prime: float
    r: float
    boundary_length: float
    separation: float
    separation_prime: float

    @property
    def Mprime(self):
        return self.boundary_length / (2 * np.pi * self.separation)

    @property
    def lemma_constant(self):
        """``r0 r0' / (r0' - r0) * L / (2 pi dist(level r0, level r0'))``."""
        return (self.r0 * self.r0prime / (self.r0prime - self.r0)
                * self.boundary_length / (2 * np.pi * self.separation_prime))

    def value(self, n):
        return self.r0 ** n * self.Mprime


def level_length(fmap, r, n_theta=4096):
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    w = r * np.exp(1j * theta)
    return float(2 * np.pi * r * np.abs(fmap.derivative(w)).mean())


def level_separation(fmap, r_in, r_out, n_grid=4096):
    """Lower bound on the distance between the level curves ``r_in < r_out``."""
    theta = 2 * np.pi * np.arange(n_grid) / n_grid
    a = fmap(r_in * np.exp(1j * theta))
    b = fmap(r_out * np.exp(1j * theta))
    tree = cKDTree(np.column_stack([b.real, b.imag]))
    dist, idx = tree.query(np.column_stack([a.real, a.imag]))
    i = int(np.argmin(dist))
    j = int(idx[i])
    h = 2 * np.pi / n_grid
    t1, t2 = theta[i], theta[j]

    def gap(s, t):
        return abs(fmap(r_in * np.exp(1j * s)) - fmap(r_out * np.exp(1j * t)))

    for _ in range(3):
        t1 = minimize_scalar(lambda s: gap(s, t2), bounds=(t1 - h, t1 + h), method="bounded").x
        t2 = minimize_scalar(lambda t: gap(t1, t), bounds=(t2 - h, t2 + h), method="bounded").x
    refined = min(gap(t1, t2), float(dist[i]))
    cell = max(np.abs(np.diff(np.append(a, a[0]))).max(), np.abs(np.diff(np.append(b, b[0]))).max())
    sep = refined - cell
    if sep <= 0:
        raise DomainError("level-curve grids too coarse to certify a positive separation")
    return float(sep)


def en_tail_bound(fmap, r0, r0prime, r, n_grid=4096):
    if not 1 < r0 < r0prime <= r:
        raise DomainError("need 1 < r0 < r0prime <= r")
    return TailBound(
        r0=r0, r0prime=r0prime, r=r,
        boundary_length=level_length(fmap, r0, n_grid),
        separation=level_separation(fmap, r0, r, n_grid),
        separation_prime=level_separation(fmap, r0, r0prime, n_grid),
    )


def scale_to_level(fmap, R):
    """Map of the level set ``Omega_R``: ``w -> psi(R w)``."""
    if R <= 1:
        raise DomainError("level R must exceed 1")
    return fmap.scaled(R)


def extraction_floor(samples, rho, n_max, digits=13):
    """Smallest coefficient :func:`faber_coefficients` can resolve at each degree."""
    scale = float(np.abs(np.asarray(samples)).max())
    return scale * 10.0 ** -digits * rho ** -np.arange(n_max + 1.0)


class RadiusEstimate(tuple):
    __slots__ = ()

    def __new__(cls, radius, quality):
        return super().__new__(cls, (radius, quality))

    radius = property(lambda self: self[0])
    quality = property(lambda self: self[1])


def holomorphy_radius(coeffs, noise=0.0):
    """Estimate ``R`` from ``limsup |a_n|**(1/n) = 1/R``.

    Fits ``log|a_n|`` against ``n`` over the trailing half by least squares;
    ``quality`` is the coefficient of determination of that fit.  ``noise``
    is a scalar or per-coefficient floor; coefficients at or below it are
    ignored (see :func:`extraction_floor`).
    """
    a = np.abs(np.asarray(coeffs, dtype=complex))
    n = np.arange(a.size)
    floor = np.broadcast_to(np.asarray(noise, dtype=float), a.shape)
    resolved = np.nonzero(a[1:] > floor[1:])[0]
    if resolved.size == 0:
        return RadiusEstimate(math.inf, 1.0)
    top = int(resolved[-1]) + 2            # fit only up to the last resolved degree
    half = top // 2
    tail_n, tail_a = n[half:top], a[half:top]
    keep = tail_a > floor[half:top]
    if keep.sum() < 8:
        raise ValueError("need at least 8 nonzero trailing coefficients")
    x, y = tail_n[keep], np.log(tail_a[keep])
    slope, icept = np.polyfit(x, y, 1)
    fit = slope * x + icept
    ss = float(((y - y.mean()) ** 2).sum())
    quality = 1.0 - float(((y - fit) ** 2).sum()) / ss if ss > 0 else 1.0
    return RadiusEstimate(math.exp(-slope), quality)
