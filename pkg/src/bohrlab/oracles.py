"""Independent reference computations used to cross-check the main routes.

Nothing here calls the Faber engine or the series solver.
"""
import mpmath
import numpy as np
from numpy.polynomial import chebyshev


def series_root_oracle(norm_value, n_terms=200, dps=50, r_inner=None, lo=1.0001, hi=100.0,
                       iterations=200):
    """Root of ``sum_{n<=n_terms} 2 M_n / (R**n - r**-n) = 1`` by plain bisection.

    ``norm_value(n)`` may return floats or mpmath numbers; ``r_inner=None``
    means the plain denominators ``R**n - 1``.
    """
    with mpmath.workdps(dps):
        M = [mpmath.mpf(norm_value(n)) for n in range(1, n_terms + 1)]
        r = None if r_inner is None else mpmath.mpf(r_inner)

        def g(R):
            s = mpmath.mpf(0)
            for n, m in enumerate(M, start=1):
                s += 2 * m / (R ** n - (r ** -n if r is not None else 1))
            return s - 1

        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        if not (g(a) > 0 > g(b)):
            raise ValueError("oracle bracket does not straddle the root")
        for _ in range(iterations):
            mid = (a + b) / 2
            if g(mid) > 0:
                a = mid
            else:
                b = mid
        return float((a + b) / 2)


def m3_mp(n):
    return 2 + mpmath.mpf(-1) ** n / mpmath.mpf(2) ** n


def m4_mp(n):
    lam = mpmath.mpc(-1, mpmath.sqrt(2)) / mpmath.sqrt(3)
    return mpmath.re(2 + (lam ** n + mpmath.conj(lam) ** n) / mpmath.power(3, mpmath.mpf(n) / 2))


def twice_chebyshev(n):
    """Ascending power coefficients of ``2 T_n`` (``T_0`` for ``n = 0``)."""
    c = np.zeros(n + 1)
    c[n] = 1.0
    p = chebyshev.cheb2poly(c)
    return p if n == 0 else 2 * p


def disk_bohr_sum(r1, R):
    """Bohr sum of the extremal family on the unit disk, summed in closed form."""
    return r1 + (1 - r1 ** 2) / (R - r1)
