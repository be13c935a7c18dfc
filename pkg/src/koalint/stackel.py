"""Stackel-type deformation of the SW Hamiltonian and its separation data.

The Hamiltonian is the image of J+ exp(z J-) + omega^2 (exp(2 z J-) - 1)/(2 z)
under the deformed N-site realization.  It has the Stackel form
sum_i a_i(q) (p_i^2/2 + U_i(q_i)).  The separation matrix B, its inverse A
and the extra integrals Z_j built from them live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BadTowerIndex, SingularPoint
from .numkit import Observable, PhasePoint, exp, expm1c, sinhc
from .sl2_deformed import DeformedParams


@dataclass(frozen=True)
class StackelSystem:
    params: DeformedParams

    def __post_init__(self):
        if self.params.N < 2:
            raise ValueError("the Stackel system needs N >= 2")

    @classmethod
    def make(cls, N, omega2=1.0, b=(), z=0.0):
        return cls(DeformedParams.make(N, omega2, b, z))

    @property
    def N(self):
        return self.params.N

    @property
    def z(self):
        return self.params.z


def _suffix_sums(sq):
    """out[i] = sum_{k>i} sq[k]."""
    out = [0.0] * len(sq)
    acc = 0.0
    for i in range(len(sq) - 1, -1, -1):
        out[i] = acc
        acc = acc + sq[i]
    return out


def stackel_hamiltonian(sys):
    z, w2, b = sys.z, sys.params.omega2, sys.params.b

    def h(q, p):
        sq = [x * x for x in q]
        after = _suffix_sums(sq)
        total = 0.0
        for i in range(len(q)):
            s = sinhc(z, sq[i])
            t = p[i] * p[i]
            if b[i] != 0.0:
                t = t + b[i] / (sq[i] * s * s)
            total = total + s * exp(z * (sq[i] + 2.0 * after[i])) * t
        u = sum(sq)
        return total + w2 * u * expm1c(2.0 * z * u)

    return Observable(sys.N, h, f"H_stackel(N={sys.N}, z={z:g})", sys.params.base.centrifugal_sites())


def _a_coefficient(z, i):
    def a(q, p):
        sq = [x * x for x in q]
        after = _suffix_sums(sq)[i]
        return 2.0 * sinhc(z, sq[i]) * exp(z * (sq[i] + 2.0 * after))

    return a


def _potential(z, w2, b, i, n):
    """U_i as a function of the single coordinate q_i."""
    first, last = i == 0, i == n - 1
    if (first or last) and w2 != 0.0 and z == 0.0:

        def diverges(qi):
            raise SingularPoint(f"U{i + 1}: the omega^2 boundary term diverges at z = 0")

        return diverges

    def u(qi):
        q2 = qi * qi
        s = sinhc(z, q2)
        val = 0.0
        if b[i] != 0.0:
            val = b[i] / (2.0 * q2 * s * s)
        if first and w2 != 0.0:
            val = val + w2 / (4.0 * z) * exp(z * q2) / s
        if last and w2 != 0.0:
            val = val - w2 / (4.0 * z) * exp(-z * q2) / s
        return val

    return u


def stackel_coefficients(sys):
    """(a_1..a_N as observables, U_1..U_N as one-variable callables)."""
    z, w2, b, n = sys.z, sys.params.omega2, sys.params.b, sys.N
    a = [Observable(n, _a_coefficient(z, i), f"a{i + 1}") for i in range(n)]
    U = [_potential(z, w2, b, i, n) for i in range(n)]
    return a, U


def stackel_decomposition(sys):
    """sum_i a_i (p_i^2/2 + U_i(q_i)); an independent route to the Hamiltonian."""
    a, U = stackel_coefficients(sys)
    afn = [ai.fn for ai in a]

    def h(q, p):
        total = 0.0
        for i in range(len(q)):
            total = total + afn[i](q, p) * (0.5 * p[i] * p[i] + U[i](q[i]))
        return total

    return Observable(sys.N, h, "sum a_i (p_i^2/2 + U_i)", sys.params.base.centrifugal_sites())


def _point(x, n):
    x = x.as_array() if isinstance(x, PhasePoint) else np.asarray(x, dtype=float)
    if x.shape != (2 * n,):
        raise ValueError(f"expected a point of shape ({2 * n},), got {x.shape}")
    return x[:n], x[n:]


def _inv_sinhc(z, q2):
    return 1.0 / sinhc(z, q2)


def stackel_matrix(sys, x):
    """Separation matrix B with entries b_ij(q_j)."""
    n, z = sys.N, sys.z
    q, _ = _point(x, n)
    q2 = q * q
    B = np.zeros((n, n))
    B[0, n - 1] = 0.5 * _inv_sinhc(z, q2[-1]) * np.exp(-z * q2[-1])
    for i in range(1, n):
        B[i, i - 1] = _inv_sinhc(z, q2[i - 1]) * np.exp(-z * q2[i - 1])
        B[i, i] = -_inv_sinhc(z, q2[i]) * np.exp(z * q2[i])
    return B


def inverse_coefficients(sys, x):
    """Closed-form inverse A of B; column 1 holds the a_i."""
    n, z = sys.N, sys.z
    q, _ = _point(x, n)
    q2 = q * q
    A = np.zeros((n, n))
    for i in range(n):
        base = sinhc(z, q2[i]) * np.exp(z * q2[i])
        A[i, 0] = 2.0 * base * np.exp(2.0 * z * q2[i + 1 :].sum())
        for j in range(i + 1, n):
            A[i, j] = base * np.exp(2.0 * z * q2[i + 1 : j].sum())
    return A


def closed_form_determinant(sys, x):
    """(1/2) prod_i (z q_i^2/sinh z q_i^2) exp(-z q_i^2), as printed.

    The determinant of :func:`stackel_matrix` equals this times (-1)**(N+1).
    """
    n, z = sys.N, sys.z
    q, _ = _point(x, n)
    q2 = q * q
    return 0.5 * float(np.prod([_inv_sinhc(z, v) * np.exp(-z * v) for v in q2]))


def lu_determinant(B):
    lu, piv = scipy.linalg.lu_factor(B)
    sign = -1.0 if np.count_nonzero(piv != np.arange(piv.size)) % 2 else 1.0
    return sign * float(np.prod(np.diag(lu)))


def stackel_condition_residual(sys, x):
    """max_i |sum_j b_ij a_j - delta_i1| at x."""
    B = stackel_matrix(sys, x)
    a, _ = stackel_coefficients(sys)
    av = np.array([ai(x) for ai in a])
    e1 = np.zeros(sys.N)
    e1[0] = 1.0
    return float(np.max(np.abs(B @ av - e1)))


def _check_j(sys, j):
    if not 2 <= j <= sys.N:
        raise BadTowerIndex(f"Z_j needs 2 <= j <= {sys.N}, got {j}")


def z_integral(sys, j):
    """Z_j^z: the separated integral attached to column j of A (j = 2..N)."""
    _check_j(sys, j)
    z, w2, b = sys.z, sys.params.omega2, sys.params.b
    top = j - 1

    def f(q, p):
        sq = [x * x for x in q[:top]]
        total = 0.0
        between = 0.0
        # walk i = j-1 down to 1 so the inner sums over i<k<j accumulate
        terms = []
        for i in range(top - 1, -1, -1):
            s = sinhc(z, sq[i])
            t = p[i] * p[i]
            if b[i] != 0.0:
                t = t + b[i] / (sq[i] * s * s)
            terms.append(0.5 * s * exp(z * (sq[i] + 2.0 * between)) * t)
            between = between + sq[i]
        for t in reversed(terms):
            total = total + t
        u = sum(sq)
        return total + 0.5 * w2 * u * expm1c(2.0 * z * u)

    sites = [i for i in sys.params.base.centrifugal_sites() if i < top]
    return Observable(sys.N, f, f"Z{j}(z={z:g})", sites)


def z_integral_limit(sys, j):
    """Z_j^0 = (1/2) sum_{i<j} (p_i^2 + b_i/q_i^2) + (omega^2/2) sum_{k<j} q_k^2."""
    _check_j(sys, j)
    w2, b = sys.params.omega2, sys.params.b
    top = j - 1

    def f(q, p):
        total = 0.0
        for i in range(top):
            t = p[i] * p[i]
            if b[i] != 0.0:
                t = t + b[i] / (q[i] * q[i])
            total = total + 0.5 * t
        u = sum(x * x for x in q[:top])
        return total + 0.5 * w2 * u

    sites = [i for i in sys.params.base.centrifugal_sites() if i < top]
    return Observable(sys.N, f, f"Z{j}(0)", sites)


def separated_integral(sys, j, x):
    """sum_i (B^-1)_ij (p_i^2/2 + U_i(q_i)) with B inverted numerically.

    Differs from :func:`z_integral` by the constant omega^2/(4z), which comes
    from the U_1 boundary term.
    """
    _check_j(sys, j)
    q, p = _point(x, sys.N)
    B = stackel_matrix(sys, x)
    col = scipy.linalg.lu_solve(scipy.linalg.lu_factor(B), np.eye(sys.N)[:, j - 1])
    _, U = stackel_coefficients(sys)
    return float(sum(col[i] * (0.5 * p[i] ** 2 + U[i](q[i])) for i in range(sys.N)))
