"""Non-standard sl_z(2) deformation of the SW family.

The deformed coproduct couples every site to all others through factors
exp(z K_i), where K_i is a signed partial sum of q_k^2 over a window of
sites.  Left towers use the window 1..m (K-functions), right towers the
window N-m+1..N (R-functions).  Both are computed here from running sums of
q^2, rather than through a shared helper, so that C_z^(N) == I_z^(N) is a
real cross-check.

All sinh(z q^2) factors go through :func:`~koalint.numkit.sinhc`, so every
observable is finite at z = 0 and reduces there to its undeformed twin with
identical floating-point operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BadTowerIndex
from .numkit import Observable, cosh, exp, sinhc
from .sl2_core import Sl2Params


@dataclass(frozen=True)
class DeformedParams:
    base: Sl2Params
    z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "z", float(self.z))

    @classmethod
    def make(cls, N, omega2=1.0, b=(), z=0.0):
        return cls(Sl2Params(N, omega2, tuple(b)), z)

    @property
    def N(self):
        return self.base.N

    @property
    def omega2(self):
        return self.base.omega2

    @property
    def b(self):
        return self.base.b


def _k_values(sq, m):
    """K_1..K_m on the leading window: -sum_{k<i} q_k^2 + sum_{i<l<=m} q_l^2."""
    total = sq[0]
    for v in sq[1:m]:
        total = total + v
    before = 0.0
    out = []
    for i in range(m):
        after = total - before - sq[i]
        out.append(after - before)
        before = before + sq[i]
    return out


def _r_values(sq, m):
    """R_{N-m+1}..R_N on the trailing window, accumulated from the right."""
    n = len(sq)
    lo = n - m
    after = 0.0
    rev = []
    # suffix sums from the right; the window prefix is rebuilt per site
    for i in range(n - 1, lo - 1, -1):
        before = 0.0
        for k in range(lo, i):
            before = before + sq[k]
        rev.append(after - before)
        after = after + sq[i]
    return rev[::-1]


def _check_k(n_sites, m, *idx):
    if not 1 <= m <= n_sites or not all(1 <= i <= m for i in idx):
        raise BadTowerIndex(f"K index {idx} outside window 1..{m} (N={n_sites})")
    if len(idx) == 2 and not idx[0] < idx[1]:
        raise BadTowerIndex(f"pair index needs i < j, got {idx}")


def _check_r(n_sites, m, *idx):
    lo = n_sites - m + 1
    if not 1 <= m <= n_sites or not all(lo <= i <= n_sites for i in idx):
        raise BadTowerIndex(f"R index {idx} outside window {lo}..{n_sites}")
    if len(idx) == 2 and not idx[0] < idx[1]:
        raise BadTowerIndex(f"pair index needs i < j, got {idx}")


def k_function(n_sites, m, i):
    _check_k(n_sites, m, i)
    return Observable(n_sites, lambda q, p: _k_values([x * x for x in q], m)[i - 1], f"K{i}^({m})")


def k_function_pair(n_sites, m, i, j):
    _check_k(n_sites, m, i, j)

    def f(q, p):
        k = _k_values([x * x for x in q], m)
        return k[i - 1] + k[j - 1]

    return Observable(n_sites, f, f"K{i}{j}^({m})")


def r_function(n_sites, m, i):
    _check_r(n_sites, m, i)
    lo = n_sites - m
    return Observable(n_sites, lambda q, p: _r_values([x * x for x in q], m)[i - 1 - lo], f"R{i}^({m})")


def r_function_pair(n_sites, m, i, j):
    _check_r(n_sites, m, i, j)
    lo = n_sites - m

    def f(q, p):
        r = _r_values([x * x for x in q], m)
        return r[i - 1 - lo] + r[j - 1 - lo]

    return Observable(n_sites, f, f"R{i}{j}^({m})")


def _plus_three(params):
    """Shared kernel returning (f~+, f~3) evaluators over all N sites."""
    z, b = params.z, params.b

    def terms(q, p):
        sq = [x * x for x in q]
        ks = _k_values(sq, len(q))
        fp, f3 = 0.0, 0.0
        for i in range(len(q)):
            s = sinhc(z, sq[i])
            e = exp(z * ks[i])
            t = s * (p[i] * p[i])
            if b[i] != 0.0:
                t = t + b[i] / (sq[i] * s)
            fp = fp + t * e
            f3 = f3 + s * (q[i] * p[i]) * e
        return fp, f3

    return terms


def deformed_generators(params):
    """(f~-, f~+, f~3), the deformed N-site images of J-, J+, J3.

    J- maps to sum q_i^2 and J3 to the deformed sum of q_i p_i; this is the
    only assignment that closes the deformed brackets.
    """
    n = params.N
    terms = _plus_three(params)
    sites = params.base.centrifugal_sites()
    fm = Observable(n, lambda q, p: sum(x * x for x in q), "f~-")
    fp = Observable(n, lambda q, p: terms(q, p)[0], "f~+", sites)
    f3 = Observable(n, lambda q, p: terms(q, p)[1], "f~3")
    return fm, fp, f3


def deformed_casimir_one_site(params):
    """f~3^2 - sinh(z f~-)/z f~+ for N = 1; equals -b_1 identically."""
    if params.N != 1:
        raise ValueError("the one-site deformed Casimir needs N = 1")
    fm, fp, f3 = deformed_generators(params)
    z = params.z

    def c(q, p):
        u = fm.fn(q, p)
        return f3.fn(q, p) ** 2 - u * sinhc(z, u) * fp.fn(q, p)

    return Observable(1, c, "Cz(1)", fp.singular_sites)


def deformed_bracket_targets(params):
    """Right-hand sides of the three deformed sl(2) brackets.

    Returns observables for 2 f~+ cosh(z f~-), -2 sinh(z f~-)/z and 4 f~3,
    the expected values of {f~3, f~+}, {f~3, f~-} and {f~-, f~+}.
    """
    fm, fp, f3 = deformed_generators(params)
    z = params.z
    n = params.N

    def r1(q, p):
        return 2.0 * fp.fn(q, p) * cosh(z * fm.fn(q, p))

    def r2(q, p):
        u = fm.fn(q, p)
        return -2.0 * u * sinhc(z, u)

    return (
        Observable(n, r1, "2 f~+ cosh(z f~-)", fp.singular_sites),
        Observable(n, r2, "-2 sinh(z f~-)/z"),
        Observable(n, lambda q, p: 4.0 * f3.fn(q, p), "4 f~3"),
    )


def deformed_sw_hamiltonian(params):
    """f~+ + omega^2 f~-."""
    w2 = params.omega2
    terms = _plus_three(params)

    def h(q, p):
        return terms(q, p)[0] + w2 * sum(x * x for x in q)

    return Observable(params.N, h, f"Hz(N={params.N}, z={params.z:g})", params.base.centrifugal_sites())


def deformed_generalized_hamiltonian(params, F):
    """f~+ + F(f~-)."""
    terms = _plus_three(params)

    def h(q, p):
        return terms(q, p)[0] + F(sum(x * x for x in q))

    return Observable(params.N, h, f"Hz_{F.name}(N={params.N})", params.base.centrifugal_sites())


def _iij_z(z, b, i, j):
    bi, bj = b[i], b[j]

    def term(q, p, sq, s):
        ang = q[i] * p[j] - q[j] * p[i]
        t = (s[i] * s[j]) * (ang * ang)
        # sinh(z q_j^2)/sinh(z q_i^2) written through sinhc stays finite at z = 0
        wi, wj = sq[i] * s[i], sq[j] * s[j]
        if bi != 0.0:
            t = t + bi * (wj / wi)
        if bj != 0.0:
            t = t + bj * (wi / wj)
        return t

    return term


def i_ij_z(params, i, j):
    if not 1 <= i < j <= params.N:
        raise BadTowerIndex(f"need 1 <= i < j <= {params.N}, got ({i}, {j})")
    z = params.z
    term = _iij_z(z, params.b, i - 1, j - 1)

    def f(q, p):
        sq = [x * x for x in q]
        return term(q, p, sq, [sinhc(z, v) for v in sq])

    return Observable(params.N, f, f"Iz{i}{j}", params.base.centrifugal_sites((i - 1, j - 1)))


def _deformed_tower(params, sites, window_values, label):
    z, b = params.z, params.b
    pairs = [(a, c, _iij_z(z, b, i, j)) for (a, i), (c, j) in combinations(enumerate(sites), 2)]
    bs = [(a, b[i]) for a, i in enumerate(sites) if b[i] != 0.0]

    def c(q, p):
        sq = [x * x for x in q]
        s = [sinhc(z, v) for v in sq]
        e = [exp(z * k) for k in window_values(sq)]
        out = 0.0
        for a, c_, term in pairs:
            out = out - term(q, p, sq, s) * (e[a] * e[c_])
        for a, v in bs:
            out = out - v * (e[a] * e[a])
        return out

    return Observable(params.N, c, label, params.base.centrifugal_sites(sites))


def deformed_left_integral(params, m):
    """C_z^(m) on sites 1..m."""
    if not 2 <= m <= params.N:
        raise BadTowerIndex(f"tower index m={m} outside 2..{params.N}")
    return _deformed_tower(params, list(range(m)), lambda sq: _k_values(sq, m), f"Cz({m})")


def deformed_right_integral(params, m):
    """I_z^(m) on sites N-m+1..N."""
    if not 2 <= m <= params.N:
        raise BadTowerIndex(f"tower index m={m} outside 2..{params.N}")
    n = params.N
    return _deformed_tower(params, list(range(n - m, n)), lambda sq: _r_values(sq, m), f"Iz({m})")
