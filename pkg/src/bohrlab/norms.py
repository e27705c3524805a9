"""Sup-norms of Faber polynomials: closed forms, bounds and sampled estimates."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DiagnosticFailure, NotPositiveClass
from .faber import faber_poly, faber_polys
from .laurent import ExteriorMap

LAMBDA_H4 = (-1 + math.sqrt(2) * 1j) / math.sqrt(3)

EXACT_DISK = "ExactDisk"
EXACT_H3 = "ExactH3"
EXACT_H4 = "ExactH4"
EXACT_POSITIVE = "ExactPositiveClass"
BOUND_CONVEX = "BoundConvex"
BOUND_GENERAL = "BoundGeneral"
BOUND_HYPOCYCLOID = "BoundHypocycloid"
BOUND_ANGULAR = "BoundAngular"
SAMPLED = "Sampled"
CUSTOM = "Custom"

KINDS = (EXACT_DISK, EXACT_H3, EXACT_H4, EXACT_POSITIVE, BOUND_CONVEX, BOUND_GENERAL,
         BOUND_HYPOCYCLOID, BOUND_ANGULAR, SAMPLED, CUSTOM)


def general_bound(n):
    """Growth bound ``2 sqrt(n ln n + 2n)`` valid for every continuum."""
    return 2.0 * math.sqrt(n * math.log(n) + 2 * n)


def hypocycloid_bound(m):
    return (m / (m - 1)) ** (m - 1)


def angular_norm_bound(V):
    """Norm bound ``V / pi`` from the angular variation of the boundary."""
    return V / math.pi


def angular_series_constant(V):
    """Numerator ``2 V / pi`` of the angular-variation Bohr series."""
    return 2.0 * V / math.pi


def m3(n):
    return 2.0 + (-0.5) ** n


def m4(n):
    lam = LAMBDA_H4 ** n
    return float((2.0 + (lam + lam.conjugate()) / 3.0 ** (n / 2)).real)


@dataclass(frozen=True, eq=False)
class NormModel:
    """A rule ``n -> M_n`` with ``M_n`` equal to or bounding ``||F_n||_K``.

    ``envelope`` is a constant bounding every ``M_n``; ``None`` means the model
    grows and its tail is controlled by the general bound instead.
    """

    kind: str
    param: float | None = None
    map: ExteriorMap | None = field(default=None, repr=False)
    fn: object = field(default=None, repr=False)
    envelope: float | None = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown norm model kind {self.kind!r}")
        if self.envelope is None:
            env = {
                EXACT_DISK: 1.0,
                EXACT_H3: 2.25,
                EXACT_H4: 2.0 + 2.0 / math.sqrt(3),
                BOUND_CONVEX: 2.0,
            }.get(self.kind)
            if self.kind == BOUND_HYPOCYCLOID:
                env = hypocycloid_bound(self.param)
            elif self.kind == BOUND_ANGULAR:
                env = angular_norm_bound(self.param)
            object.__setattr__(self, "envelope", env)

    @property
    def is_exact(self):
        return self.kind.startswith("Exact")

    @property
    def is_sampled(self):
        return self.kind == SAMPLED

    @property
    def lam(self):
        return LAMBDA_H4

    @property
    def name(self):
        if self.label:
            return self.label
        if self.kind in (BOUND_HYPOCYCLOID, BOUND_ANGULAR):
            return f"{self.kind}({self.param:g})"
        return self.kind

    @classmethod
    def positive_class(cls, fmap):
        return cls(EXACT_POSITIVE, map=fmap)

    @classmethod
    def sampled(cls, fmap, **kwargs):
        return cls(SAMPLED, map=fmap, fn=lambda n: norm_sampled(fmap, n, **kwargs))

    @classmethod
    def custom(cls, fn, envelope=None, label="custom"):
        return cls(CUSTOM, fn=fn, envelope=envelope, label=label)

    def value(self, n):
        if n == 0:
            return 1.0
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n in self._cache:
            return self._cache[n]
        k = self.kind
        if k == EXACT_DISK:
            v = 1.0
        elif k == EXACT_H3:
            v = m3(n)
        elif k == EXACT_H4:
            v = m4(n)
        elif k == BOUND_CONVEX:
            v = 2.0
        elif k == BOUND_GENERAL:
            v = general_bound(n)
        elif k == BOUND_HYPOCYCLOID:
            v = hypocycloid_bound(self.param)
        elif k == BOUND_ANGULAR:
            v = angular_norm_bound(self.param)
        elif k == EXACT_POSITIVE:
            v = norm_positive_class(self.map, n)
        else:
            v = float(self.fn(n))
        self._cache[n] = v
        return v

    def values(self, N):
        """``M_1 .. M_N`` as an array."""
        return np.array([self.value(n) for n in range(1, N + 1)])

    def tail_sum(self, N, x):
        """Upper bound on ``sum_{n>N} M_n x**n`` for ``0 < x < 1``."""
        if not 0 < x < 1:
            return math.inf
        if self.envelope is not None:
            return self.envelope * x ** (N + 1) / (1 - x)
        h1, h2 = general_bound(N + 1), general_bound(N + 2)
        q = h2 / h1                      # successive ratios of the bound decrease
        if q * x >= 1:
            return math.inf
        return h1 * x ** (N + 1) / (1 - q * x)


def norm_model(kind, n, param=None):
    return NormModel(kind, param=param).value(n)


@dataclass(frozen=True)
class SampledNorm:
    value: float
    ladder: tuple            # (eps, max) pairs, largest eps first
    gap: float               # ladder value at the smallest eps minus the boundary value
    argmax_theta: float
    tag: str = "estimate, lower-biased"


def _boundary_max(poly, fmap, radius, n_theta):
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = np.abs(poly(fmap(radius * np.exp(1j * theta))))
    i = int(np.argmax(vals))
    best_t, best_v = theta[i], float(vals[i])
    h = 2 * np.pi / n_theta
    for _ in range(2):
        t = best_t + np.linspace(-h, h, 65)
        v = np.abs(poly(fmap(radius * np.exp(1j * t))))
        j = int(np.argmax(v))
        if v[j] > best_v:
            best_t, best_v = float(t[j]), float(v[j])
        h /= 32
    return best_v, best_t


def sample_norm_ladder(fmap, n, n_theta=4096, eps_ladder=(1e-2, 1e-3, 1e-4), tol=1e-6):
    """Sample ``max |F_n(psi((1+eps) e^{i theta}))|`` along a shrinking ladder.

    The stored map is a Laurent polynomial, so it extends continuously to
    ``|w| = 1``; the reported value is the ``eps = 0`` boundary maximum and the
    ladder serves as a consistency check.  By the maximum principle the ladder
    must decrease as ``eps`` shrinks.
    """
    poly = faber_poly(fmap, n)
    ladder = []
    for eps in sorted(eps_ladder, reverse=True):
        v, _ = _boundary_max(poly, fmap, 1.0 + eps, n_theta)
        ladder.append((eps, v))
    final, theta = _boundary_max(poly, fmap, 1.0, n_theta)
    seq = [v for _, v in ladder] + [final]
    for a, b in zip(seq, seq[1:]):
        if b > a * (1 + tol) + tol:
            raise DiagnosticFailure(
                f"norm ladder not monotone for n={n}: {a!r} -> {b!r}; "
                "the truncated map may not be continuous up to |w| = 1")
    return SampledNorm(final, tuple(ladder), seq[-2] - final, theta)


def norm_sampled(fmap, n, n_theta=4096, eps_ladder=(1e-2, 1e-3, 1e-4), tol=1e-6):
    return sample_norm_ladder(fmap, n, n_theta, eps_ladder, tol).value


def _check_betas(fmap, tol=1e-12):
    for j, b in enumerate(fmap.betas, start=1):
        if b.real < -tol or abs(b.imag) > tol:
            return j
    return None


def norm_positive_class(fmap, n, tol=1e-12):
    """``F_n(psi(1)) = 1 + sum_j alpha_j``, the sup-norm for positive-class maps."""
    j = _check_betas(fmap, tol)
    if j is not None:
        raise NotPositiveClass(f"beta_{j} = {fmap.betas[j - 1]} is not a nonnegative real")
    alpha = faber_poly(fmap, n).alpha_tail
    if alpha.size == 0:
        return 1.0
    bad = np.nonzero((alpha.real < -tol) | (np.abs(alpha.imag) > tol * max(1.0, np.abs(alpha).max())))[0]
    if bad.size:
        j = int(bad[0]) + 1
        raise NotPositiveClass(f"alpha_{j}^({n}) = {alpha[j - 1]} is negative")
    return 1.0 + float(alpha.real.sum())


def norm_table(model, nmax):
    """Rows ``(n, value, kind, isExact)`` for ``n = 1..nmax``."""
    return [(n, model.value(n), model.name, model.is_exact) for n in range(1, nmax + 1)]


def write_norm_csv(rows, fp):
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["n", "value", "kind", "isExact"])
    for n, v, kind, exact in rows:
        w.writerow([n, f"{v:.12g}", kind, str(bool(exact)).lower()])


# --- polygons ---------------------------------------------------------------

def _segments_intersect(p1, p2, q1, q2):
    def cross(o, a, b):
        return (a - o).real * (b - o).imag - (a - o).imag * (b - o).real

    d1, d2 = cross(q1, q2, p1), cross(q1, q2, p2)
    d3, d4 = cross(p1, p2, q1), cross(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True

    def on_seg(a, b, c):
        return (min(a.real, b.real) <= c.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= c.imag <= max(a.imag, b.imag))

    return ((d1 == 0 and on_seg(q1, q2, p1)) or (d2 == 0 and on_seg(q1, q2, p2))
            or (d3 == 0 and on_seg(p1, p2, q1)) or (d4 == 0 and on_seg(p1, p2, q2)))


class PolygonCurve:
    """Closed simple polygon, stored with counter-clockwise orientation."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=complex)
        if v.ndim != 1 or v.size < 3:
            raise ValueError("a polygon needs at least three vertices")
        if v[0] == v[-1]:
            v = v[:-1]
        if np.any(v == np.roll(v, -1)):
            raise ValueError("polygon has repeated consecutive vertices")
        m = v.size
        for i in range(m):
            for j in range(i + 1, m):
                if j == i + 1 or (i == 0 and j == m - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]):
                    raise ValueError("polygon is self-intersecting")
        area = 0.5 * np.sum((np.conj(v) * np.roll(v, -1)).imag)
        if area < 0:
            v = v[::-1]
        self.vertices = v

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        try:
            return cls([complex(x, y) for x, y in data])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed polygon document: {exc}") from exc

    def to_json(self):
        return json.dumps([[z.real, z.imag] for z in self.vertices])


def turning_angles(poly):
    v = poly.vertices
    edges = np.roll(v, -1) - v
    return np.angle(edges / np.roll(edges, 1))


def angular_variation(poly):
    """Total variation of the tangent angle: sum of absolute turning angles."""
    if not isinstance(poly, PolygonCurve):
        poly = PolygonCurve(poly)
    return float(np.abs(turning_angles(poly)).sum())
