"""Phase-space points, forward-mode dual numbers and the canonical bracket.

Every system in the package is written as a plain Python function of two
sequences ``q`` and ``p``.  The same function is evaluated on floats (values)
or on :class:`Dual` numbers (exact directional derivatives), so gradients
carry rounding error only.

A :class:`Dual` may carry several tangent directions at once: its ``der``
slot is either a float or a 1-D array with one entry per direction.  Seeding
with the identity matrix gives the full gradient in one sweep, which is the
same arithmetic as 2N single-direction passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, SingularPoint

TAU_SERIES = 1e-4
# sinhc'/expm1c' lose digits to cancellation near 0, so their series run wider.
_DERIV_SERIES = 0.5


class Dual:
    """Truncated first-order number ``val + der*eps`` with ``eps**2 == 0``."""

    __slots__ = ("val", "der")

    def __init__(self, val, der=0.0):
        self.val = float(val)
        self.der = der

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.der)

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.der + self.der * other.val)
        return Dual(self.val * other, self.der * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            v = self.val * inv
            return Dual(v, (self.der - v * other.der) * inv)
        return Dual(self.val / other, self.der / other)

    def __rtruediv__(self, other):
        v = other / self.val
        return Dual(v, -v / self.val * self.der)

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(n * log(self))
        if n == 2:
            return Dual(self.val * self.val, 2.0 * self.val * self.der)
        return Dual(self.val**n, n * self.val ** (n - 1) * self.der)

    def __abs__(self):
        return self if self.val >= 0 else -self

    # comparisons act on the value so that branch selection works unchanged
    def __lt__(self, other):
        return self.val < _value(other)

    def __le__(self, other):
        return self.val <= _value(other)

    def __gt__(self, other):
        return self.val > _value(other)

    def __ge__(self, other):
        return self.val >= _value(other)


def _value(x):
    return x.val if isinstance(x, Dual) else x


def _lift(x, f, df):
    if isinstance(x, Dual):
        return Dual(f(x.val), df(x.val) * x.der)
    return f(x)


def exp(x):
    if isinstance(x, Dual):
        e = math.exp(x.val)
        return Dual(e, e * x.der)
    return math.exp(x)


def expm1(x):
    return _lift(x, math.expm1, math.exp)


def log(x):
    return _lift(x, math.log, lambda v: 1.0 / v)


def sqrt(x):
    return _lift(x, math.sqrt, lambda v: 0.5 / math.sqrt(v))


def sinh(x):
    return _lift(x, math.sinh, math.cosh)


def cosh(x):
    return _lift(x, math.cosh, math.sinh)


def _sinhc_value(w):
    if abs(w) < TAU_SERIES:
        w2 = w * w
        return 1.0 + w2 / 6.0 + w2 * w2 / 120.0
    return math.sinh(w) / w


def _sinhc_slope(w):
    if abs(w) < _DERIV_SERIES:
        # d/dw sinh(w)/w = sum_k 2k w^(2k-1)/(2k+1)!
        w2 = w * w
        term, total = w / 3.0, 0.0
        for k in range(1, 12):
            total += term
            term *= w2 * (k + 1) / (k * (2 * k + 2) * (2 * k + 3))
        return total
    return (w * math.cosh(w) - math.sinh(w)) / (w * w)


def _expm1c_value(w):
    if abs(w) < TAU_SERIES:
        return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    return math.expm1(w) / w


def _expm1c_slope(w):
    if abs(w) < _DERIV_SERIES:
        # sum_k k w^(k-1)/(k+1)!
        term, total = 0.5, 0.0
        for k in range(1, 22):
            total += term
            term *= w * (k + 1) / (k * (k + 2))
        return total
    return (w * math.exp(w) - math.expm1(w)) / (w * w)


def sinhc(z, u):
    """sinh(z*u)/(z*u), finite and smooth through ``z*u == 0``.

    ``u`` may be a :class:`Dual`; ``z`` is a plain float.
    """
    return _lift(z * u, _sinhc_value, _sinhc_slope)


def expm1c(w):
    """(exp(w) - 1)/w with value 1 at ``w == 0``."""
    return _lift(w, _expm1c_value, _expm1c_slope)


@dataclass(frozen=True)
class SmoothFunction:
    """A real function together with its exact derivative."""

    f: Callable[[float], float]
    df: Callable[[float], float]
    name: str = "F"

    def __call__(self, u):
        return _lift(u, self.f, self.df)


@dataclass(frozen=True)
class PhasePoint:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if q.ndim != 1 or q.shape != p.shape:
            raise DimensionMismatch(f"q has shape {q.shape}, p has shape {p.shape}")
        if q.size == 0:
            raise DimensionMismatch("a phase point needs at least one site")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def N(self):
        return self.q.size

    @classmethod
    def from_array(cls, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size % 2:
            raise DimensionMismatch(f"expected a flat (q, p) vector of even length, got {x.shape}")
        n = x.size // 2
        return cls(x[:n], x[n:])

    def as_array(self):
        return np.concatenate([self.q, self.p])


def _as_array(x):
    if isinstance(x, PhasePoint):
        return x.as_array()
    return np.asarray(x, dtype=float)


class Observable:
    """A real function on the 2N-dimensional phase space.

    ``fn(q, p)`` receives two length-N lists of floats or duals.
    ``singular_sites`` lists the 0-based sites whose ``q`` must be nonzero;
    ``guard(q, p)`` may raise for any other excluded region.
    """

    __slots__ = ("n", "fn", "label", "singular_sites", "guard")

    def __init__(self, n, fn, label="", singular_sites=(), guard=None):
        if n < 1:
            raise DimensionMismatch("arity must be positive")
        self.n = int(n)
        self.fn = fn
        self.label = label
        self.singular_sites = tuple(sorted(set(singular_sites)))
        self.guard = guard

    def __repr__(self):
        return f"Observable({self.label or '?'}, N={self.n})"

    def _split(self, x):
        x = _as_array(x)
        if x.shape != (2 * self.n,):
            raise DimensionMismatch(f"{self.label or 'observable'} has N={self.n}, point has shape {x.shape}")
        return x

    def _check(self, q, p):
        for i in self.singular_sites:
            if q[i] == 0.0:
                raise SingularPoint(f"{self.label or 'observable'}: q{i + 1} = 0")
        if self.guard is not None:
            self.guard(q, p)

    def __call__(self, x):
        x = self._split(x)
        q = x[: self.n].tolist()
        p = x[self.n :].tolist()
        self._check(q, p)
        return float(_value(self.fn(q, p)))

    eval = __call__

    def eval_dual(self, x, tangent):
        """Value and derivative along ``tangent``.

        ``tangent`` has shape ``(2N,)`` for one direction or ``(2N, D)`` for D
        directions at once.
        """
        x = self._split(x)
        t = np.asarray(tangent, dtype=float)
        if t.shape[0] != 2 * self.n:
            raise DimensionMismatch(f"tangent has leading size {t.shape[0]}, expected {2 * self.n}")
        n = self.n
        qv, pv = x[:n].tolist(), x[n:].tolist()
        self._check(qv, pv)
        q = [Dual(qv[i], t[i]) for i in range(n)]
        p = [Dual(pv[i], t[n + i]) for i in range(n)]
        out = self.fn(q, p)
        if not isinstance(out, Dual):
            out = Dual(out, np.zeros(t.shape[1:]) if t.ndim > 1 else 0.0)
        return out

    def gradient(self, x):
        """(df/dq_1..df/dq_N, df/dp_1..df/dp_N) at ``x``."""
        d = self.eval_dual(x, np.eye(2 * self.n)).der
        return np.array(d, dtype=float).reshape(2 * self.n)

    def relabel(self, label):
        return Observable(self.n, self.fn, label, self.singular_sites, self.guard)

    # algebra of observables
    def _combine(self, other, op, symbol):
        if isinstance(other, Observable):
            if other.n != self.n:
                raise DimensionMismatch(f"cannot combine N={self.n} with N={other.n}")
            f, g = self.fn, other.fn
            guards = [h for h in (self.guard, other.guard) if h is not None]
            return Observable(
                self.n,
                lambda q, p: op(f(q, p), g(q, p)),
                f"({self.label} {symbol} {other.label})",
                self.singular_sites + other.singular_sites,
                _chain_guards(guards),
            )
        c = float(other)
        f = self.fn
        return Observable(
            self.n, lambda q, p: op(f(q, p), c), f"({self.label} {symbol} {c:g})", self.singular_sites, self.guard
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        f = self.fn
        return Observable(self.n, lambda q, p: -f(q, p), f"-{self.label}", self.singular_sites, self.guard)


def _chain_guards(guards):
    if not guards:
        return None
    if len(guards) == 1:
        return guards[0]

    def guard(q, p):
        for g in guards:
            g(q, p)

    return guard


def constant(n, c, label=None):
    return Observable(n, lambda q, p: float(c), label or f"{c:g}")


def position(n, i):
    """The coordinate q_i (1-based)."""
    k = i - 1
    return Observable(n, lambda q, p: q[k], f"q{i}")


def momentum(n, i):
    """The coordinate p_i (1-based)."""
    k = i - 1
    return Observable(n, lambda q, p: p[k], f"p{i}")


def gradient(f, x):
    return f.gradient(x)


def bracket_from_gradients(gf, gg):
    """Canonical bracket sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i from gradients."""
    n = gf.size // 2
    return float(gf[:n] @ gg[n:] - gf[n:] @ gg[:n])


def poisson_bracket(f, g, x):
    if f.n != g.n:
        raise DimensionMismatch(f"bracket of N={f.n} with N={g.n}")
    return bracket_from_gradients(f.gradient(x), g.gradient(x))


def random_point(rng, N, q_range=(0.5, 2.0), p_range=(-2.0, 2.0)):
    """Regular sampling point: |q_i| in q_range with random sign, p_i uniform."""
    q = rng.uniform(*q_range, size=N) * rng.choice((-1.0, 1.0), size=N)
    p = rng.uniform(*p_range, size=N)
    return np.concatenate([q, p])


def squares(xs: Sequence):
    return [x * x for x in xs]
