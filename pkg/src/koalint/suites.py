"""Per-family verification suites and the report they produce.

:func:`build_family` turns a :class:`~koalint.config.SystemConfig` into the
Hamiltonian, its integrals and the checks that apply; :func:`run_verify`
executes them and returns a JSON-ready dict.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from . import comodule, sl2_core, sl2_deformed, stackel, verify
from .numkit import Observable

LIMIT_STEPS = (1e-2, 1e-3, 1e-4, 0.0)
LIMIT_POINTS = 10

NOTE_TOWERS = (
    "Left and right integrals whose site windows partially overlap do not Poisson-commute with each other; "
    "involution is checked within the left tower and within the right tower, and every integral is checked "
    "against the Hamiltonian."
)
NOTE_LABELS = (
    "Deformed generators: J- is realized as sum q_i^2 and J3 as the deformed sum of q_i p_i. "
    "The swapped labeling does not close the deformed brackets."
)
NOTE_DET = (
    "The separation matrix has det B = (-1)^(N+1) (1/2) prod_i (z q_i^2/sinh z q_i^2) exp(-z q_i^2); "
    "the closed form printed without the sign holds for odd N only. The certificate uses the signed product."
)
NOTE_OFFSET = (
    "The integrals obtained from the inverse separation matrix and the U_i exceed Z_j by the constant "
    "omega^2/(4z), which comes from the boundary term of U_1; Z_j is reported without it."
)
NOTE_COMODULE = (
    "The comodule integral is phi(D)^2/4 - phi(H) phi(C), the coaction image of the gl(2) Casimir. "
    "The form phi(D)^2/4 - phi(H) is neither conserved nor has the stated sigma -> 0 limit."
)
NOTE_COMODULE_PK = (
    "The gl(2) realization on particle 1 does not define P and K; their images use lambda1 p1 and lambda1 q1."
)


@dataclass
class Family:
    cfg: object
    H: Observable
    conserved: list
    involution_sets: list = field(default_factory=list)
    rank_sets: list = field(default_factory=list)
    left_right: list = field(default_factory=list)
    limits: list = field(default_factory=list)
    identities: list = field(default_factory=list)
    pointwise: list = field(default_factory=list)
    stackel: object = None
    accept: object = None
    limit_pairs: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def drift_set(self):
        return [self.H, *self.conserved]


def _sl2_params(cfg):
    return sl2_core.Sl2Params(cfg.N, cfg.omega2, cfg.b)


def _deformed_params(cfg, z=None):
    return sl2_deformed.DeformedParams(_sl2_params(cfg), cfg.z if z is None else z)


def _undeformed_identities(P):
    fm, fp, f3 = sl2_core.generators(P)
    n = P.N
    out = [
        (f3, fp, Observable(n, lambda q, p: 2.0 * fp.fn(q, p), "2 f+", fp.singular_sites)),
        (f3, fm, Observable(n, lambda q, p: -2.0 * fm.fn(q, p), "-2 f-")),
        (fm, fp, Observable(n, lambda q, p: 4.0 * f3.fn(q, p), "4 f3")),
    ]
    return out


def _undeformed_casimir(P):
    fm, fp, f3 = sl2_core.generators(P)
    c = Observable(1, lambda q, p: f3.fn(q, p) ** 2 - fm.fn(q, p) * fp.fn(q, p), "f3^2 - f- f+", fp.singular_sites)
    return (c, Observable(1, lambda q, p: -P.b[0], "-b1"))


def _deformed_identities(D):
    fm, fp, f3 = sl2_deformed.deformed_generators(D)
    t1, t2, t3 = sl2_deformed.deformed_bracket_targets(D)
    return [(f3, fp, t1), (f3, fm, t2), (fm, fp, t3)]


def _towers(P, left, right):
    N = P.N
    C = [left(P, m) for m in range(2, N + 1)]
    I = [right(P, m) for m in range(2, N + 1)]
    return C, I


def _chain(fam, C, I):
    """Fill the conservation, involution, rank and left/right entries shared by chain families."""
    H, N = fam.H, fam.cfg.N
    fam.conserved = [*C, *I[:-1]]
    if N >= 2:
        fam.involution_sets = [[H, *C], [H, *I]]
        fam.left_right = [(C[-1], I[-1])]
    qmax = [H, *C, *I[:-1]]
    fam.rank_sets = [(qmax, len(qmax))]
    if N >= 3:
        fam.notes.append(NOTE_TOWERS)


def _limit_entries(build_pairs, zero_tol=0.0):
    return [(lab, b, r, LIMIT_STEPS, zero_tol) for lab, b, r in build_pairs]


def build_family(cfg):
    fam_name = cfg.family
    N = cfg.N

    if fam_name in ("sw", "sw_general_f"):
        P = _sl2_params(cfg)
        if fam_name == "sw":
            H = sl2_core.sw_hamiltonian(P)
        else:
            H = sl2_core.generalized_hamiltonian(P, sl2_core.f_family(cfg.f_choice, cfg.omega2, cfg.z or 0.0))
        fam = Family(cfg, H, [])
        C, I = _towers(P, sl2_core.left_integral, sl2_core.right_integral)
        _chain(fam, C, I)
        fam.identities = _undeformed_identities(P)
        if N == 1:
            fam.pointwise.append(_undeformed_casimir(P))
        if fam_name == "sw" and N >= 2:
            M = [sl2_core.liouville_integral(P, i) for i in range(1, N + 1)]
            fam.conserved += M
            qmax = fam.rank_sets[0][0]
            fam.rank_sets.append(([*qmax, M[0]], len(qmax) + 1))
        if fam_name == "sw_general_f" and cfg.f_choice == "exp2z":
            ref = sl2_core.generalized_hamiltonian(P, sl2_core.f_linear(cfg.omega2))
            fam.limit_pairs = [(H, ref)]
        return fam

    if fam_name in ("sw_deformed", "sw_deformed_general_f"):
        D = _deformed_params(cfg)
        P = D.base
        if fam_name == "sw_deformed":
            H = sl2_deformed.deformed_sw_hamiltonian(D)
            H_of = lambda z: sl2_deformed.deformed_sw_hamiltonian(_deformed_params(cfg, z))
            H0 = sl2_core.sw_hamiltonian(P)
        else:
            F = sl2_core.f_family(cfg.f_choice, cfg.omega2, cfg.z)
            H = sl2_deformed.deformed_generalized_hamiltonian(D, F)
            H_of = None
            H0 = None
        fam = Family(cfg, H, [])
        C, I = _towers(D, sl2_deformed.deformed_left_integral, sl2_deformed.deformed_right_integral)
        _chain(fam, C, I)
        fam.identities = _deformed_identities(D)
        if N == 1:
            fam.pointwise.append((sl2_deformed.deformed_casimir_one_site(D), Observable(1, lambda q, p: -P.b[0], "-b1")))
        fam.notes.append(NOTE_LABELS)
        pairs = []
        for m in range(2, N + 1):
            pairs.append((f"Cz({m}) -> C({m})",
                          (lambda m: lambda z: sl2_deformed.deformed_left_integral(_deformed_params(cfg, z), m))(m),
                          sl2_core.left_integral(P, m)))
            pairs.append((f"Iz({m}) -> I({m})",
                          (lambda m: lambda z: sl2_deformed.deformed_right_integral(_deformed_params(cfg, z), m))(m),
                          sl2_core.right_integral(P, m)))
        if H_of is not None:
            pairs.append(("Hz -> H", H_of, H0))
            fam.limit_pairs.append((H, H0))
        fam.limits = _limit_entries(pairs)
        C0, I0 = _towers(P, sl2_core.left_integral, sl2_core.right_integral)
        fam.limit_pairs += list(zip(C, C0)) + list(zip(I, I0))
        return fam

    if fam_name == "stackel":
        S = stackel.StackelSystem(_deformed_params(cfg))
        D, P = S.params, S.params.base
        H = stackel.stackel_hamiltonian(S)
        fam = Family(cfg, H, [], stackel=S)
        C, I = _towers(D, sl2_deformed.deformed_left_integral, sl2_deformed.deformed_right_integral)
        Z = [stackel.z_integral(S, j) for j in range(2, N + 1)]
        _chain(fam, C, I)
        fam.conserved += Z
        fam.involution_sets.append([H, *Z])
        qmax = fam.rank_sets[0][0]
        fam.rank_sets.append(([*qmax, Z[0]], len(qmax) + 1))
        fam.identities = _deformed_identities(D)
        fam.notes += [NOTE_LABELS, NOTE_DET, NOTE_OFFSET]

        def S_of(z):
            return stackel.StackelSystem(_deformed_params(cfg, z))

        pairs = [(f"Z{j} -> Z{j}(0)", (lambda j: lambda z: stackel.z_integral(S_of(z), j))(j), stackel.z_integral_limit(S, j))
                 for j in range(2, N + 1)]
        pairs.append(("H_stackel -> H", lambda z: stackel.stackel_hamiltonian(S_of(z)), sl2_core.sw_hamiltonian(P)))
        fam.limits = _limit_entries(pairs)
        fam.limit_pairs = [(Zj, stackel.z_integral_limit(S, j)) for j, Zj in zip(range(2, N + 1), Z)]
        fam.pointwise.append((H, stackel.stackel_decomposition(S)))
        return fam

    if fam_name == "comodule":
        cp = comodule.ComoduleParams(cfg.sigma, cfg.lambda1, cfg.lambda2, cfg.b1)
        H = comodule.h_sigma_2(cp)
        Cs = comodule.c_sigma_2(cp)
        fam = Family(cfg, H, [Cs], accept=comodule.sampling_accept(cp))
        fam.involution_sets = [[H, Cs]]
        fam.rank_sets = [([H, Cs], 2)]
        fam.notes += [NOTE_COMODULE, NOTE_COMODULE_PK]
        zero = comodule.ComoduleParams(0.0, cfg.lambda1, cfg.lambda2, cfg.b1)

        def with_sigma(s):
            return comodule.ComoduleParams(s, cfg.lambda1, cfg.lambda2, cfg.b1)

        # C_sigma and C_0 are different algebraic forms of one function, so at
        # sigma = 0 they can only agree to rounding
        fam.limits = _limit_entries(
            [("H_sigma -> H_0", lambda s: comodule.h_sigma_2(with_sigma(s)), comodule.h_sigma_limit(zero))]
        ) + _limit_entries(
            [("C_sigma -> C_0", lambda s: comodule.c_sigma_2(with_sigma(s)), comodule.c_sigma_limit(zero))], 1e-12
        )
        fam.pointwise = [
            (H, comodule.h_sigma_2_coaction(cp)),
            (comodule.c_sigma_limit(zero), comodule.casimir_expanded_sigma0(zero)),
        ]
        fam.limit_pairs = [(H, comodule.h_sigma_limit(zero)), (Cs, comodule.c_sigma_limit(zero))]
        return fam

    raise ValueError(f"unknown family {fam_name!r}")


def _limit_accept(fam):
    if fam.cfg.family != "comodule":
        return None
    cfg = fam.cfg
    return comodule.sampling_accept(comodule.ComoduleParams(max(LIMIT_STEPS), cfg.lambda1, cfg.lambda2, cfg.b1))


def run_checks(fam):
    """All checks for ``fam``; returns (sections dict, passed)."""
    cfg = fam.cfg
    kw = dict(n_points=cfg.n_points, tol=cfg.tol, seed=cfg.seed, accept=fam.accept)
    cons = verify.check_conservation(fam.H, fam.conserved, **kw)
    inv = [verify.check_involution(s, **kw) for s in fam.involution_sets]
    ranks = [verify.independence_rank(s, seed=cfg.seed, expected=e, accept=fam.accept) for s, e in fam.rank_sets]
    lr = [verify.check_pointwise_equal(a, b, cfg.n_points, 1e-12, cfg.seed, fam.accept) for a, b in fam.left_right]
    limits = [
        verify.check_limit_order(b, r, z, LIMIT_POINTS, cfg.seed, _limit_accept(fam), zero_tol=zt, label=lab)
        for lab, b, r, z, zt in fam.limits
    ]
    ident = [verify.check_bracket_identity(f, g, t, **kw) for f, g, t in fam.identities]
    point = [verify.check_pointwise_equal(a, b, cfg.n_points, 1e-12, cfg.seed, fam.accept) for a, b in fam.pointwise]
    st = verify.check_stackel(fam.stackel, cfg.n_points, cfg.seed) if fam.stackel is not None else None

    groups = [cons, [p for r in inv for p in r.pairs], ranks, lr, limits, ident, point, [st] if st else []]
    passed = all(r.passed for g in groups for r in g)
    sections = {
        "conservation": [r.to_dict() for r in cons],
        "involution": [r.to_dict() for r in inv],
        "rank": [r.to_dict() for r in ranks],
        "left_right": [r.to_dict() for r in lr],
        "limits": [r.to_dict() for r in limits],
        "identities": [r.to_dict() for r in ident] + [r.to_dict() for r in point],
        "stackel": st.to_dict() if st else None,
    }
    return sections, passed, (cons, inv, ranks, ident)


def run_verify(cfg, timestamp=True):
    fam = build_family(cfg)
    sections, passed, _ = run_checks(fam)
    report = {"config": cfg.resolved(), **sections, "errata_notes": list(fam.notes), "seed": cfg.seed,
              "passed": passed}
    if timestamp:
        report["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return report


def limit_difference(fam, n_points=20):
    """Largest |Q(x) - Q_0(x)| over ``limit_pairs`` at shared random points, or None."""
    if not fam.limit_pairs:
        return None
    obs = [o for pair in fam.limit_pairs for o in pair]
    pts = verify.sample_points(fam.H.n, n_points, fam.cfg.seed, fam.accept, obs)
    return max(abs(a(x) - b(x)) for a, b in fam.limit_pairs for x in pts)


def scan_row(cfg, param, value):
    fam = build_family(cfg)
    _, passed, (cons, inv, ranks, ident) = run_checks(fam)
    residuals = [r.max_scaled for r in cons] + [p.max_scaled for r in inv for p in r.pairs] + [r.max_scaled for r in ident]
    return {
        param: value,
        "passed": passed,
        "max_residual": max(residuals) if residuals else 0.0,
        "rank": ranks[0].median_rank if ranks else None,
        "expected_rank": ranks[0].expected_rank if ranks else None,
        "limit_diff": limit_difference(fam),
    }


def initial_point(cfg):
    """x0 from the config, or a seeded random regular point."""
    if cfg.q0 is not None:
        return np.array([*cfg.q0, *cfg.p0], dtype=float)
    fam = build_family(cfg)
    return verify.sample_points(cfg.N, 1, cfg.seed, fam.accept, fam.drift_set)[0]


__all__ = ["Family", "build_family", "run_checks", "run_verify", "scan_row", "limit_difference", "initial_point"]
