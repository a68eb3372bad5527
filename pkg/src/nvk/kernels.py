"""Integration kernels for Herglotz-Nevanlinna representations.

Two algebraically equivalent forms of the n-variable kernel K_n are kept as
separate code paths so they can be cross-checked numerically; the rational
single-fraction form is the default (one division, better rounding).

The ladder kernels arise when K_n is composed with the affine map

    (t1, ..., tn) |-> (t1 - b1 t2, ..., t1 - b_{n-1} tn, t1 + ... + tn)

and then integrated out one Lebesgue variable at a time, innermost last
variable first.  ``ladder_kernel(z, t, b, m, d)`` is the kernel after d such
integrations, a function of m remaining real variables; d = 0, m = n
recovers the composed kernel itself.

All evaluators broadcast when one of the real coordinates arrives as a
numpy array, which is how the adaptive quadrature drives them.
"""

from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError

__all__ = [
    "require_upper_half",
    "kernel_1d",
    "kernel_nd_sum",
    "kernel_nd_rational",
    "kernel_nd",
    "ladder_kernel_full",
    "ladder_kernel",
    "ladder_weight",
    "ladder_z_sum",
]

_I_POW = (1.0 + 0.0j, 1j, -1.0 + 0.0j, -1j)

POLE_PROXIMITY = 1e-12


def require_upper_half(z: Sequence[complex]) -> tuple[complex, ...]:
    """Validate that every coordinate has strictly positive imaginary part."""
    zs = tuple(complex(v) for v in (z if isinstance(z, (tuple, list, np.ndarray)) else (z,)))
    if any(v.imag <= 0 for v in zs):
        raise DomainError("point not in poly-upper half-plane")
    return zs


def _warn_near_pole(tj, zj):
    d = np.min(np.abs(np.asarray(tj) - zj))
    if d < POLE_PROXIMITY:
        warnings.warn(
            "kernel evaluated within 1e-12 of a pole; result is ill-conditioned",
            RuntimeWarning,
            stacklevel=3,
        )


def kernel_1d(z: complex, t):
    """One-variable kernel 1/(t - z) - t/(1 + t^2), Im z > 0."""
    (z,) = require_upper_half((z,))
    _warn_near_pole(t, z)
    return 1.0 / (t - z) - t / (1.0 + t * t)


def kernel_nd_sum(z: Sequence[complex], t: Sequence):
    """n-variable kernel in the product/difference form

    i * ( 2/(2i)^n * prod_j (1/(t_j - z_j) - 1/(t_j + i))
          - 1/(2i)^n * prod_j (1/(t_j - i) - 1/(t_j + i)) ).
    """
    zs = require_upper_half(z)
    n = len(zs)
    if len(t) != n:
        raise DimensionMismatchError("z and t must have the same length")
    two_i_n = (2j) ** n
    p1 = 1.0 + 0.0j
    p2 = 1.0 + 0.0j
    for zj, tj in zip(zs, t):
        _warn_near_pole(tj, zj)
        p1 = p1 * (1.0 / (tj - zj) - 1.0 / (tj + 1j))
        p2 = p2 * (1.0 / (tj - 1j) - 1.0 / (tj + 1j))
    return 1j * (2.0 / two_i_n * p1 - 1.0 / two_i_n * p2)


def kernel_nd_rational(z: Sequence[complex], t: Sequence):
    """n-variable kernel as a single fraction

    ( i^(3n+1) prod_j (t_j - i)(z_j + i) - 2^(n-1) i prod_j (t_j - z_j) )
    / ( 2^(n-1) prod_j (t_j - z_j)(t_j - i)(t_j + i) ).
    """
    zs = require_upper_half(z)
    n = len(zs)
    if len(t) != n:
        raise DimensionMismatchError("z and t must have the same length")
    p1 = 1.0 + 0.0j
    p2 = 1.0 + 0.0j
    p3 = 1.0 + 0.0j
    for zj, tj in zip(zs, t):
        _warn_near_pole(tj, zj)
        p1 = p1 * (tj - 1j) * (zj + 1j)
        p2 = p2 * (tj - zj)
        p3 = p3 * (tj - zj) * (tj - 1j) * (tj + 1j)
    c = 2.0 ** (n - 1)
    return (_I_POW[(3 * n + 1) % 4] * p1 - c * 1j * p2) / (c * p3)


kernel_nd = kernel_nd_rational


def _ladder_coords(t: Sequence, b: Sequence[float]):
    """Coordinates of the ladder map applied to t (length n = len(b) + 1)."""
    n = len(b) + 1
    out = [t[0] - b[j] * t[j + 1] for j in range(n - 1)]
    out.append(sum(t[1:], start=t[0]))
    return out


def ladder_kernel_full(z: Sequence[complex], t: Sequence, b: Sequence[float]):
    """The composed kernel K_n(z, M t) before any integration (d = 0)."""
    zs = require_upper_half(z)
    n = len(zs)
    if len(b) != n - 1:
        raise DimensionMismatchError("need n - 1 ladder coefficients")
    if len(t) != n:
        raise DimensionMismatchError("t must have length n")
    if any(not bj > 0 for bj in b):
        raise DomainError("ladder coefficients must be strictly positive")
    return kernel_nd_rational(zs, _ladder_coords(t, b))


def ladder_weight(m: int, d: int, b: Sequence[float]) -> float:
    """Weight accumulated by d integrations: 1 + sum_{j=m}^{m+d-1} 1/b_j."""
    return 1.0 + sum(1.0 / b[i - 1] for i in range(m, m + d))


def ladder_z_sum(m: int, d: int, b: Sequence[float], z: Sequence[complex]) -> complex:
    """Weighted tail sum z_m/b_m + ... + z_{m+d-1}/b_{m+d-1} + z_{m+d}."""
    total = 0.0 + 0.0j
    for i in range(m, m + d):
        total += complex(z[i - 1]) / b[i - 1]
    return total + complex(z[m + d - 1])


def ladder_kernel(z: Sequence[complex], t: Sequence, b: Sequence[float],
                  m: int, d: int):
    """Ladder kernel after d integrations, a function of t = (t1, ..., tm).

    With the building blocks

        A = prod_{j=2}^{m} (t1 - b_{j-1} t_j - i)
        B = prod_{j=1}^{m-1} (z_j + i)
        C = prod_{j=2}^{m} (t1 - b_{j-1} t_j - z_{j-1})
        D = prod_{j=2}^{m} (t1 - b_{j-1} t_j + i)
        F = 1 + sum_{j=m}^{m+d-1} 1/b_j
        T = F t1 + t2 + ... + tm
        Z = z_m/b_m + ... + z_{m+d-1}/b_{m+d-1} + z_{m+d}

    the kernel reads

        ( i^(3m+1) A (T - F i) B (Z + F i) - 2^(m-1) F i C (T - Z) )
        / ( 2^(m-1) A C D (T - F i)(T - Z)(T + F i) ).

    Empty products are 1.  Requires m >= 1, d >= 0, m + d = len(z) >= 2 and
    all b_j > 0.
    """
    zs = require_upper_half(z)
    n = len(zs)
    if m < 1 or d < 0 or m + d != n:
        raise DomainError("need m >= 1, d >= 0 and m + d = len(z)")
    if n < 2:
        raise DomainError("ladder kernels need at least two variables")
    if len(b) != n - 1:
        raise DimensionMismatchError("need n - 1 ladder coefficients")
    if any(not bj > 0 for bj in b):
        raise DomainError("ladder coefficients must be strictly positive")
    if len(t) != m:
        raise DimensionMismatchError("t must have length m")

    a_prod = 1.0 + 0.0j
    c_prod = 1.0 + 0.0j
    d_prod = 1.0 + 0.0j
    for j in range(2, m + 1):
        u = t[0] - b[j - 2] * t[j - 1]
        a_prod = a_prod * (u - 1j)
        c_prod = c_prod * (u - zs[j - 2])
        d_prod = d_prod * (u + 1j)
    b_prod = 1.0 + 0.0j
    for j in range(1, m):
        b_prod *= zs[j - 1] + 1j

    f_w = ladder_weight(m, d, b)
    t_sum = f_w * t[0] + sum(t[1:m], start=0.0)
    z_sum = ladder_z_sum(m, d, b, zs)

    c = 2.0 ** (m - 1)
    num = (_I_POW[(3 * m + 1) % 4] * a_prod * (t_sum - f_w * 1j) * b_prod * (z_sum + f_w * 1j)
           - c * f_w * 1j * c_prod * (t_sum - z_sum))
    den = c * a_prod * c_prod * d_prod * (t_sum - f_w * 1j) * (t_sum - z_sum) * (t_sum + f_w * 1j)
    return num / den
