"""Hot pointwise kernels, in numba and pure-numpy flavours.

All kernels operate on 1-D contiguous float64 arrays (callers ravel and
reshape; both operations are views for contiguous data).  The module
exposes the selected flavour under the plain names (``brusselator_rhs``,
...) and keeps both flavours importable for the benchmark suite.

Power-evaluation policy: bases raised to a non-integer exponent are clamped
to zero from below before the power is taken (spectral truncation produces
small negative undershoots and fractional powers of negative numbers are
undefined); integer exponents are evaluated directly.
"""

from __future__ import annotations

import numpy as np

from . import accel


# --- pure numpy flavour ---------------------------------------------------

def brusselator_rhs_numpy(u1, u2, a, b):
    auto = u1 * u2 * u2
    f1 = -auto + b * u2
    f2 = auto - (b + 1.0) * u2 + a
    return f1, f2


def reversible_rhs_numpy(u1, u2, u3, alpha, beta, gamma, clamp1, clamp2, clamp3):
    b1 = np.maximum(u1, 0.0) if clamp1 else u1
    b2 = np.maximum(u2, 0.0) if clamp2 else u2
    b3 = np.maximum(u3, 0.0) if clamp3 else u3
    g = b3 ** gamma - b1 ** alpha * b2 ** beta
    return alpha * g, beta * g, -gamma * g


def implicit_mode_update_numpy(old, fk, ht, inv_denom):
    return (old + ht * fk) * inv_denom


def max_abs_diff_numpy(a, b):
    return float(np.max(np.abs(a - b)))


# --- numba flavour --------------------------------------------------------

if accel.NUMBA_AVAILABLE:
    from numba import njit

    # The stepper validates finiteness before these kernels run, so the
    # fastmath no-NaN assumption holds.
    @njit(cache=True, fastmath=True)
    def brusselator_rhs_numba(u1, u2, a, b):
        n = u1.shape[0]
        f1 = np.empty(n)
        f2 = np.empty(n)
        for i in range(n):
            auto = u1[i] * u2[i] * u2[i]
            f1[i] = -auto + b * u2[i]
            f2[i] = auto - (b + 1.0) * u2[i] + a
        return f1, f2

    @njit(cache=True)
    def _pow(base, exponent, exp_int, is_int):
        # libm pow is the bottleneck; whole-number exponents (the common
        # case) go through repeated multiplication instead.
        if is_int:
            out = 1.0
            for _ in range(exp_int):
                out *= base
            return out
        return base ** exponent

    @njit(cache=True)
    def reversible_rhs_numba(u1, u2, u3, alpha, beta, gamma, clamp1, clamp2, clamp3):
        n = u1.shape[0]
        f1 = np.empty(n)
        f2 = np.empty(n)
        f3 = np.empty(n)
        ia, ib, ig = int(alpha), int(beta), int(gamma)
        alpha_int = alpha == ia
        beta_int = beta == ib
        gamma_int = gamma == ig
        for i in range(n):
            b1 = max(u1[i], 0.0) if clamp1 else u1[i]
            b2 = max(u2[i], 0.0) if clamp2 else u2[i]
            b3 = max(u3[i], 0.0) if clamp3 else u3[i]
            g = _pow(b3, gamma, ig, gamma_int) - (
                _pow(b1, alpha, ia, alpha_int) * _pow(b2, beta, ib, beta_int)
            )
            f1[i] = alpha * g
            f2[i] = beta * g
            f3[i] = -gamma * g
        return f1, f2, f3

    @njit(cache=True, fastmath=True)
    def implicit_mode_update_numba(old, fk, ht, inv_denom):
        n = old.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = (old[i] + ht * fk[i]) * inv_denom[i]
        return out

    @njit(cache=True, fastmath=True)
    def max_abs_diff_numba(a, b):
        worst = 0.0
        for i in range(a.shape[0]):
            worst = max(worst, abs(a[i] - b[i]))
        return worst


# --- selected path ---------------------------------------------------------

if accel.NUMBA_ENABLED:
    brusselator_rhs = brusselator_rhs_numba
    reversible_rhs = reversible_rhs_numba
    implicit_mode_update = implicit_mode_update_numba
else:
    brusselator_rhs = brusselator_rhs_numpy
    reversible_rhs = reversible_rhs_numpy
    implicit_mode_update = implicit_mode_update_numpy

# The max-abs reduction benchmarks faster through numpy's vectorized ops
# than through the scalar njit loop (see benchmarks/bench_kernels.py), so
# both paths share the numpy implementation.
max_abs_diff = max_abs_diff_numpy


def warm_up() -> None:
    """Trigger JIT compilation of the selected kernels on tiny inputs.

    No-op on the numpy path.  Useful before timing-sensitive sections.
    """
    z = np.zeros(2)
    brusselator_rhs(z, z, 1.0, 1.0)
    reversible_rhs(z, z, z, 1.0, 1.0, 2.0, False, False, False)
    implicit_mode_update(z, z, 0.1, np.ones(2))
    max_abs_diff(z, z)
