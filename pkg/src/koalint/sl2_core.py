"""Undeformed sl(2) coalgebra systems: the Smorodinsky-Winternitz family.

Sites are numbered 1..N in every public signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import BadTowerIndex
from .numkit import Observable, SmoothFunction, exp, expm1c


@dataclass(frozen=True)
class Sl2Params:
    N: int
    omega2: float = 1.0
    b: tuple = field(default=())

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        b = tuple(float(v) for v in self.b) if len(self.b) else (0.0,) * self.N
        if len(b) != self.N:
            raise ValueError(f"b has {len(b)} entries, expected N={self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "omega2", float(self.omega2))
        object.__setattr__(self, "b", b)

    def centrifugal_sites(self, sites=None):
        """0-based sites among ``sites`` whose b_i is nonzero."""
        idx = range(self.N) if sites is None else sites
        return tuple(i for i in idx if self.b[i] != 0.0)


def _check_window(params, m):
    if not 2 <= m <= params.N:
        raise BadTowerIndex(f"tower index m={m} outside 2..{params.N}")


def generator_minus(params):
    return Observable(params.N, lambda q, p: sum(x * x for x in q), "f-")


def _plus_terms(b):
    def f(q, p):
        s = 0.0
        for i in range(len(q)):
            t = p[i] * p[i]
            if b[i] != 0.0:
                t = t + b[i] / (q[i] * q[i])
            s = s + t
        return s

    return f


def generator_plus(params):
    return Observable(params.N, _plus_terms(params.b), "f+", params.centrifugal_sites())


def generator_three(params):
    return Observable(params.N, lambda q, p: sum(q[i] * p[i] for i in range(len(q))), "f3")


def generators(params):
    """(f-, f+, f3): the N-site images of J-, J+, J3."""
    return generator_minus(params), generator_plus(params), generator_three(params)


def sw_hamiltonian(params):
    """sum_i p_i^2 + omega^2 q_i^2 + b_i/q_i^2."""
    w2 = params.omega2
    fp = _plus_terms(params.b)

    def h(q, p):
        return fp(q, p) + w2 * sum(x * x for x in q)

    return Observable(params.N, h, f"H_SW(N={params.N})", params.centrifugal_sites())


def _iij(b, i, j):
    """Closed-form I_ij term on 0-based sites i<j, as a function of (q, p)."""
    bi, bj = b[i], b[j]

    def term(q, p):
        ang = q[i] * p[j] - q[j] * p[i]
        s = ang * ang
        qi2, qj2 = q[i] * q[i], q[j] * q[j]
        if bi != 0.0:
            s = s + bi * (qj2 / qi2)
        if bj != 0.0:
            s = s + bj * (qi2 / qj2)
        return s

    return term


def i_ij(params, i, j):
    if not 1 <= i < j <= params.N:
        raise BadTowerIndex(f"need 1 <= i < j <= {params.N}, got ({i}, {j})")
    return Observable(
        params.N, _iij(params.b, i - 1, j - 1), f"I{i}{j}", params.centrifugal_sites((i - 1, j - 1))
    )


def _casimir_tower(params, sites, label):
    terms = [_iij(params.b, i, j) for i, j in combinations(sites, 2)]
    bs = [params.b[i] for i in sites]

    def c(q, p):
        s = 0.0
        for t in terms:
            s = s - t(q, p)
        for v in bs:
            s = s - v
        return s

    return Observable(params.N, c, label, params.centrifugal_sites(sites))


def left_integral(params, m):
    """C^(m): the m-site Casimir on sites 1..m."""
    _check_window(params, m)
    return _casimir_tower(params, list(range(m)), f"C({m})")


def right_integral(params, m):
    """I^(m): the m-site Casimir on sites N-m+1..N."""
    _check_window(params, m)
    return _casimir_tower(params, list(range(params.N - m, params.N)), f"I({m})")


def generalized_hamiltonian(params, F):
    """f+ + F(f-) for a :class:`SmoothFunction` ``F``."""
    fp = generator_plus(params).fn

    def h(q, p):
        return fp(q, p) + F(sum(x * x for x in q))

    return Observable(params.N, h, f"H_{F.name}(N={params.N})", params.centrifugal_sites())


def liouville_integral(params, i):
    """M_i: the i-th one-site SW energy minus H/N."""
    if not 1 <= i <= params.N:
        raise BadTowerIndex(f"site {i} outside 1..{params.N}")
    k = i - 1
    w2, bk, n = params.omega2, params.b[k], params.N
    h = sw_hamiltonian(params).fn

    def m(q, p):
        e = p[k] * p[k] + w2 * (q[k] * q[k])
        if bk != 0.0:
            e = e + bk / (q[k] * q[k])
        return e - h(q, p) / n

    return Observable(n, m, f"M{i}", params.centrifugal_sites())


def f_linear(omega2):
    return SmoothFunction(lambda u: omega2 * u, lambda u: omega2, "linear")


def f_quadratic(omega2=1.0):
    return SmoothFunction(lambda u: omega2 * u * u, lambda u: 2.0 * omega2 * u, "quadratic")


def f_exp2z(omega2, z):
    """omega^2 (exp(2 z u) - 1)/(2 z), equal to omega^2 u at z = 0."""
    return SmoothFunction(
        lambda u: omega2 * u * expm1c(2.0 * z * u),
        lambda u: omega2 * exp(2.0 * z * u),
        "exp2z",
    )


F_CHOICES = ("linear", "quadratic", "exp2z")


def f_family(choice, omega2=1.0, z=0.0):
    if choice == "linear":
        return f_linear(omega2)
    if choice == "quadratic":
        return f_quadratic(omega2)
    if choice == "exp2z":
        return f_exp2z(omega2, z)
    raise ValueError(f"unknown F choice {choice!r}; expected one of {F_CHOICES}")
