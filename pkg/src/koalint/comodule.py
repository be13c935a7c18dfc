"""Two-particle comodule-algebra deformation of the SW Hamiltonian.

Particle 1 carries the gl(2) realization T (with the centrifugal term b1),
particle 2 the Schrodinger-algebra realization S with constant lambda2.  The
sigma-deformed coaction glues them, and H = H + C together with the gl(2)
Casimir D^2/4 - H C give an integrable pair.

The generators P and K are not in gl(2), so T does not define them; their
images use the S-form lambda1 p1, lambda1 q1 on the first particle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateDenominator
from .numkit import Observable

GENERATORS = ("M", "H", "D", "C", "P", "K")


@dataclass(frozen=True)
class ComoduleParams:
    sigma: float
    lambda1: float = 1.0
    lambda2: float = 1.0
    b1: float = 1.0

    def __post_init__(self):
        for name in ("sigma", "lambda1", "lambda2", "b1"):
            object.__setattr__(self, name, float(getattr(self, name)))


def realization_t(q1, p1, lam, b1):
    """T: gl(2) on one particle with the centrifugal term; K and P in S-form."""
    H = 0.5 * p1 * p1
    if b1 != 0.0:
        H = H + b1 / (q1 * q1)
    return {"C": 0.5 * q1 * q1, "H": H, "D": -(p1 * q1), "M": lam * lam, "K": lam * q1, "P": lam * p1}


def realization_s(q, p, lam):
    """S: the one-particle Schrodinger-algebra realization."""
    return {"C": 0.5 * q * q, "H": 0.5 * p * p, "D": -(p * q), "M": lam * lam, "K": lam * q, "P": lam * p}


def _guard(params):
    sl = params.sigma * params.lambda2

    def guard(q, p):
        if 1.0 + sl * p[1] == 0.0:
            raise DegenerateDenominator("1 + sigma*lambda2*p2 = 0")

    return guard


def _images(params, q, p):
    """(T (x) S) applied to the coproducts of M, H, D, C, P, K."""
    s = params.sigma
    t = realization_t(q[0], p[0], params.lambda1, params.b1)
    r = realization_s(q[1], p[1], params.lambda2)
    inv = 1.0 / (1.0 + s * r["P"])
    d_prime = t["D"] + 0.5 * t["M"]
    return {
        "M": t["M"] + r["M"],
        "H": r["H"] + t["H"] * ((1.0 + s * r["P"]) * (1.0 + s * r["P"])),
        "D": r["D"] + t["D"] * inv - 0.5 * t["M"] * (s * r["P"] * inv),
        "C": r["C"]
        + t["C"] * (inv * inv)
        + s * d_prime * (inv * r["K"])
        + 0.5 * s * s * (d_prime * d_prime) * (r["M"] * inv * inv),
        "P": r["P"] + t["P"] + s * t["P"] * r["P"],
        "K": r["K"] + t["K"] * inv + s * d_prime * (r["M"] * inv),
    }


def _sites(params):
    return (0,) if params.b1 != 0.0 else ()


def coaction_images(params):
    """Map each generator name to its two-particle image observable."""
    out = {}
    guard = _guard(params)
    for name in GENERATORS:
        out[name] = Observable(
            2, (lambda key: lambda q, p: _images(params, q, p)[key])(name), f"phi({name})", _sites(params), guard
        )
    return out


def h_sigma_2(params):
    """Two-particle deformed Hamiltonian, transcribed in closed form."""
    s, l1, l2, b1 = params.sigma, params.lambda1, params.lambda2, params.b1

    def h(q, p):
        q1, q2 = q
        p1, p2 = p
        den = 1.0 + s * l2 * p2
        t_h = 0.5 * p1 * p1
        if b1 != 0.0:
            t_h = t_h + b1 / (q1 * q1)
        g = l1 * l1 - 2.0 * q1 * p1
        out = 0.5 * (p1 * p1 + p2 * p2) + q1 * q1 / (2.0 * den * den) + 0.5 * q2 * q2
        if b1 != 0.0:
            out = out + b1 / (q1 * q1)
        out = out + s * l2 * (2.0 * t_h * p2 + q2 * g / (2.0 * den))
        out = out + s * s * l2 * l2 * (t_h * p2 * p2 + g * g / (8.0 * den * den))
        return out

    return Observable(2, h, f"H_sigma(sigma={s:g})", _sites(params), _guard(params))


def h_sigma_2_coaction(params):
    """phi(H) + phi(C); agrees with :func:`h_sigma_2` by construction."""

    def h(q, p):
        im = _images(params, q, p)
        return im["H"] + im["C"]

    return Observable(2, h, "phi(H)+phi(C)", _sites(params), _guard(params))


def c_sigma_2(params):
    """phi(D)^2/4 - phi(H) phi(C): the image of the gl(2) Casimir."""

    def c(q, p):
        im = _images(params, q, p)
        return 0.25 * im["D"] * im["D"] - im["H"] * im["C"]

    return Observable(2, c, f"C_sigma(sigma={params.sigma:g})", _sites(params), _guard(params))


def c_sigma_2_printed(params):
    """phi(D)^2/4 - phi(H), the variant with the phi(C) factor dropped.

    Kept as a negative witness: it neither commutes with H_sigma nor has the
    correct sigma -> 0 limit.
    """

    def c(q, p):
        im = _images(params, q, p)
        return 0.25 * im["D"] * im["D"] - im["H"]

    return Observable(2, c, "phi(D)^2/4 - phi(H)", _sites(params), _guard(params))


def h_sigma_limit(params):
    """sigma -> 0 Hamiltonian: (p1^2+p2^2)/2 + b1/q1^2 + (q1^2+q2^2)/2."""
    b1 = params.b1

    def h(q, p):
        out = 0.5 * (p[0] * p[0] + p[1] * p[1]) + q[0] * q[0] / 2.0 + 0.5 * (q[1] * q[1])
        if b1 != 0.0:
            out = out + b1 / (q[0] * q[0])
        return out

    return Observable(2, h, "H_sigma(0)", _sites(params))


def c_sigma_limit(params):
    """sigma -> 0 integral: -(p2 q1 - p1 q2)^2/4 - (b1/2)(1 + q2^2/q1^2)."""
    b1 = params.b1

    def c(q, p):
        ang = p[1] * q[0] - p[0] * q[1]
        out = -0.25 * ang * ang
        if b1 != 0.0:
            out = out - 0.5 * b1 * (1.0 + q[1] * q[1] / (q[0] * q[0]))
        return out

    return Observable(2, c, "C_sigma(0)", _sites(params))


def casimir_expanded_sigma0(params):
    """(p1 q1 + p2 q2)^2/4 - (p1^2/2 + p2^2/2 + b1/q1^2)(q1^2/2 + q2^2/2).

    The sigma = 0 Casimir multiplied out by hand, independent of the coaction.
    """
    b1 = params.b1

    def c(q, p):
        d = p[0] * q[0] + p[1] * q[1]
        h = 0.5 * p[0] * p[0] + 0.5 * p[1] * p[1]
        if b1 != 0.0:
            h = h + b1 / (q[0] * q[0])
        return 0.25 * d * d - h * (0.5 * q[0] * q[0] + 0.5 * q[1] * q[1])

    return Observable(2, c, "D^2/4 - H C at sigma=0", _sites(params))


def sampling_accept(params, margin=0.3, max_shift=0.5):
    """Predicate for points away from the 1 + sigma*lambda2*p2 = 0 wall."""
    sl = params.sigma * params.lambda2

    def accept(x):
        shift = sl * x[3]
        return abs(1.0 + shift) >= margin and abs(shift) <= max_shift

    return accept
