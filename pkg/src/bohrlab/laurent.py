"""Truncated Laurent series and the exterior-map data type.

A :class:`LaurentSeries` stores the coefficients of ``w**lo .. w**hi`` in
ascending order.  Coefficients are ``complex128`` in double mode and
``mpmath.mpc`` objects (32 significant digits) in extended mode; the mode is
picked per call or from the ``BOHRLAB_PRECISION`` environment variable
(``double`` or ``dd``).

``floor`` is an l1 bound on coefficients that were discarded by windowed
products.  It propagates through multiplication by Young's inequality::

    floor(a*b) <= |a|_1 floor(b) + |b|_1 floor(a) + floor(a) floor(b) + dropped
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .exceptions import DomainError

DD_DIGITS = 32
PRECISIONS = ("double", "dd")


def get_precision(precision=None):
    if precision is None:
        precision = os.environ.get("BOHRLAB_PRECISION", "double").strip().lower() or "double"
    if precision not in PRECISIONS:
        raise ValueError(f"unknown precision mode {precision!r}; expected one of {PRECISIONS}")
    return precision


def as_coeff_array(values, precision="double"):
    if precision == "dd":
        with mpmath.workdps(DD_DIGITS):
            return np.array([mpmath.mpc(complex(v)) if not isinstance(v, mpmath.mpc) else v
                             for v in values], dtype=object)
    return np.asarray(values, dtype=complex).copy()


def _l1(coeffs):
    if coeffs.dtype == object:
        return float(sum(abs(c) for c in coeffs))
    return float(np.abs(coeffs).sum())


class LaurentSeries:
    """Finite Laurent series ``sum_k coeffs[k] * w**(lo + k)``."""

    __slots__ = ("lo", "coeffs", "floor")
    __array_ufunc__ = None        # numpy scalars defer to __rmul__ / __radd__

    def __init__(self, lo, coeffs, floor=0.0):
        coeffs = coeffs if isinstance(coeffs, np.ndarray) and coeffs.dtype == object \
            else np.asarray(coeffs, dtype=complex if not _is_object(coeffs) else object)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("coefficient list must be a non-empty 1-d sequence")
        if floor < 0:
            raise ValueError("truncation floor must be nonnegative")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        self.lo = int(lo)
        self.coeffs = coeffs
        self.floor = float(floor)

    @classmethod
    def constant(cls, value=1.0, precision="double"):
        return cls(0, as_coeff_array([value], precision))

    @classmethod
    def monomial(cls, degree, value=1.0, precision="double"):
        return cls(degree, as_coeff_array([value], precision))

    @property
    def hi(self):
        return self.lo + self.coeffs.size - 1

    @property
    def precision(self):
        return "dd" if self.coeffs.dtype == object else "double"

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, degree):
        if self.lo <= degree <= self.hi:
            return self.coeffs[degree - self.lo]
        return 0.0

    def __repr__(self):
        return f"LaurentSeries(lo={self.lo}, hi={self.hi}, floor={self.floor:.3g})"

    def degrees(self):
        return np.arange(self.lo, self.hi + 1)

    def to_complex(self):
        if self.coeffs.dtype == object:
            return LaurentSeries(self.lo, np.array([complex(c) for c in self.coeffs]), self.floor)
        return self

    def l1(self):
        return _l1(self.coeffs)

    def restrict(self, lo, hi):
        """Keep degrees ``lo..hi``; discarded mass goes into ``floor``."""
        if lo > hi:
            raise ValueError("empty window")
        out = np.zeros(hi - lo + 1, dtype=self.coeffs.dtype)
        if out.dtype == object:
            out[:] = mpmath.mpc(0)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo:b - lo + 1] = self.coeffs[a - self.lo:b - self.lo + 1]
        dropped = self.l1() - _l1(out)
        return LaurentSeries(lo, out, self.floor + max(dropped, 0.0))

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.precision)
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        a, b = self.restrict(lo, hi), other.restrict(lo, hi)
        return LaurentSeries(lo, a.coeffs + b.coeffs, self.floor + other.floor)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return laurent_mul(self, other)
        return LaurentSeries(self.lo, self.coeffs * other, self.floor * abs(other))

    __rmul__ = __mul__

    def __call__(self, w):
        return eval_series(self, w)


def _is_object(values):
    return any(isinstance(v, (mpmath.mpc, mpmath.mpf)) for v in values)


def laurent_mul(a, b, window=None):
    """Product of two series restricted to the inclusive degree ``window``."""
    full = np.convolve(a.coeffs, b.coeffs)
    lo = a.lo + b.lo
    floor = a.floor * b.l1() + b.floor * a.l1() + a.floor * b.floor
    product = LaurentSeries(lo, full, floor)
    if window is None:
        return product
    wlo, whi = window
    if wlo > whi:
        raise ValueError("empty window")
    return product.restrict(wlo, whi)


def laurent_pow(a, k, window=None):
    """``a**k`` by repeated squaring, each intermediate product windowed."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    if window is not None and window[0] > window[1]:
        raise ValueError("empty window")
    result = LaurentSeries.constant(1.0, a.precision)
    base = a
    while k:
        if k & 1:
            result = laurent_mul(result, base, window)
        k >>= 1
        if k:
            base = laurent_mul(base, base, window)
    if window is not None:
        result = result.restrict(*window)
    return result


def _horner(coeffs_desc, x):
    acc = np.zeros_like(x)
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def eval_series(a, w):
    """Evaluate a :class:`LaurentSeries` or :class:`ExteriorMap` at ``w``."""
    if isinstance(a, ExteriorMap):
        return a(w)
    scalar = np.isscalar(w)
    w = np.asarray(w, dtype=complex)
    c = a.to_complex().coeffs
    if a.lo < 0 and np.any(w == 0):
        raise DomainError("cannot evaluate negative powers at w = 0")
    pos = c[max(-a.lo, 0):]                      # degrees max(lo,0)..hi
    val = _horner(pos[::-1], w) * (w ** max(a.lo, 0) if a.lo > 0 else 1)
    if a.lo < 0:
        neg = c[:min(-a.lo, c.size)]              # degrees lo..min(hi,-1)
        u = 1.0 / w
        top = min(a.hi, -1)
        # sum_{d=lo}^{top} c_d u^{-d} = u^{-top} * poly in u
        val = val + _horner(neg, u) * u ** (-top)
    return complex(val) if scalar else val


@dataclass(frozen=True)
class ExteriorMap:
    """Inverse exterior map ``psi(w) = w/gamma + beta0 + sum_j betas[j-1] w**-j``.

    ``tail_bound`` records the l1 mass of any beta coefficients dropped when
    the map was truncated; it is zero for exact finite maps.
    """

    gamma: float
    beta0: complex = 0j
    betas: tuple = ()
    tail_bound: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not (self.gamma > 0) or not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be a positive real, got {self.gamma!r}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "beta0", complex(self.beta0))
        object.__setattr__(self, "betas", tuple(complex(b) for b in self.betas))

    @property
    def J(self):
        return len(self.betas)

    @property
    def capacity(self):
        # gamma is Phi'(infinity); the conventional logarithmic capacity is 1/gamma.
        return 1.0 / self.gamma

    @property
    def is_affine(self):
        return all(b == 0 for b in self.betas)

    def series(self, precision="double"):
        coeffs = list(reversed(self.betas)) + [self.beta0]
        if precision == "dd":
            with mpmath.workdps(DD_DIGITS):
                lead = mpmath.mpc(1) / mpmath.mpf(self.gamma)
                arr = as_coeff_array(coeffs, "dd")
                return LaurentSeries(-self.J, np.append(arr, lead))
        return LaurentSeries(-self.J, np.array(coeffs + [1.0 / self.gamma], dtype=complex))

    def _check_domain(self, w):
        if self.J and np.any(np.abs(w) < 1.0 - 1e-12):
            raise DomainError("the exterior map is only evaluated on |w| >= 1")

    def __call__(self, w):
        scalar = np.isscalar(w)
        w = np.asarray(w, dtype=complex)
        self._check_domain(w)
        val = w / self.gamma + self.beta0
        if self.J:
            u = 1.0 / w
            val = val + u * _horner(np.array(self.betas[::-1]), u)
        return complex(val) if scalar else val

    def derivative(self, w):
        scalar = np.isscalar(w)
        w = np.asarray(w, dtype=complex)
        self._check_domain(w)
        val = np.full_like(w, 1.0 / self.gamma)
        if self.J:
            u = 1.0 / w
            jb = np.array([-j * b for j, b in enumerate(self.betas, start=1)])
            val = val + u * u * _horner(jb[::-1], u)
        return complex(val) if scalar else val

    def second_derivative(self, w):
        w = np.asarray(w, dtype=complex)
        val = np.zeros_like(w)
        for j, b in enumerate(self.betas, start=1):
            val = val + j * (j + 1) * b * w ** (-j - 2)
        return val

    def scaled(self, R):
        """The map ``w -> psi(R w)``: gamma/R, same beta0, beta_j R**-j."""
        return ExteriorMap(self.gamma / R, self.beta0,
                           tuple(b * R ** -(j) for j, b in enumerate(self.betas, start=1)),
                           self.tail_bound, self.name)

    def truncated(self, J):
        """Keep ``beta_1..beta_J``; the dropped mass is bounded geometrically.

        The decay ratio of ``|beta_j|`` is fitted on the kept coefficients and
        the discarded part is bounded by the larger of its actual l1 mass and the
        geometric continuation of the last kept term.
        """
        if J >= self.J:
            return self
        kept, dropped = self.betas[:J], self.betas[J:]
        mass = float(np.sum(np.abs(dropped)))
        mags = np.abs(np.array(kept))
        nz = np.nonzero(mags)[0]
        if nz.size >= 2:
            slope = np.polyfit(nz + 1, np.log(mags[nz]), 1)[0]
            q = math.exp(min(slope, -1e-3))
            mass = max(mass, mags[nz[-1]] * q / (1 - q))
        return ExteriorMap(self.gamma, self.beta0, kept, self.tail_bound + mass, self.name)

    def check_univalence(self, levels=range(1, 9), n_theta=1024):
        """Minimum of ``|psi'|`` on the circles ``|w| = 1 + 2**-k``.

        Diagnostic only: a value bounded away from zero is consistent with a
        locally univalent map; it does not prove global univalence.
        """
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        worst = math.inf
        for k in levels:
            w = (1 + 2.0 ** -k) * np.exp(1j * theta)
            worst = min(worst, float(np.abs(self.derivative(w)).min()))
        return worst

    def convexity_margin(self, n_theta=4096):
        """``min Re(1 + w psi''/psi')`` on ``|w| = 1``; nonnegative for convex images."""
        theta = 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
        w = np.exp(1j * theta)
        d1 = self.derivative(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.real(1 + w * self.second_derivative(w) / d1)
        k = k[np.isfinite(k)]
        return float(k.min()) if k.size else -math.inf

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "beta0": [self.beta0.real, self.beta0.imag],
            "betas": [[b.real, b.imag] for b in self.betas],
            "tailBound": self.tail_bound,
        }

    @classmethod
    def from_dict(cls, doc, name=""):
        try:
            gamma = doc["gamma"]
            b0 = doc.get("beta0", [0.0, 0.0])
            betas = tuple(complex(re, im) for re, im in doc.get("betas", []))
            tail = float(doc.get("tailBound", 0.0))
            return cls(gamma, complex(b0[0], b0[1]), betas, tail, name=name)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed map document: {exc}") from exc
