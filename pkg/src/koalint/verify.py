"""Verification sweeps over random regular phase-space points.

Every check draws its points from a master seed: point ``k`` uses the k-th
child of ``SeedSequence(seed)``, so results do not depend on the number of
worker threads (``KOALINT_THREADS``).  A draw that lands on a singular or
excluded point is redrawn up to ``RETRIES`` times before giving up with
:class:`~koalint.errors.SamplingExhausted`.

Bracket residuals are reported relative to ``max(1, |grad f| |grad g|)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import sl2_core, sl2_deformed
from .errors import DegenerateDenominator, SamplingExhausted, SingularPoint
from .numkit import bracket_from_gradients, random_point

RETRIES = 10
DEFAULT_POINTS = 100
DEFAULT_TOL = 1e-10
RANK_TOL = 1e-8
RANK_PROBES = 5


def _workers():
    try:
        return max(1, int(os.environ.get("KOALINT_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    n = min(_workers(), len(items))
    if n <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _draw(N, rng, accept, probe):
    for _ in range(RETRIES + 1):
        x = random_point(rng, N)
        if accept is not None and not accept(x):
            continue
        try:
            return x, probe(x)
        except (SingularPoint, DegenerateDenominator, ZeroDivisionError):
            continue
    raise SamplingExhausted(f"no regular point after {RETRIES} retries")


def _sweep(observables, n_points, seed, accept=None, with_values=False):
    """Points and per-point gradient matrices (n_obs x 2N) for ``observables``."""
    N = observables[0].n
    children = np.random.SeedSequence(seed).spawn(n_points)

    def probe(x):
        G = np.array([f.gradient(x) for f in observables])
        if with_values:
            return G, np.array([f(x) for f in observables])
        return G

    def one(child):
        return _draw(N, np.random.default_rng(child), accept, probe)

    return _map(one, children)


def sample_points(N, n_points, seed, accept=None, observables=()):
    """Regular points where every observable in ``observables`` evaluates."""
    children = np.random.SeedSequence(seed).spawn(n_points)

    def probe(x):
        for f in observables:
            f(x)

    return [_draw(N, np.random.default_rng(c), accept, probe)[0] for c in children]


@dataclass
class BracketReport:
    labels: tuple
    max_abs: float
    max_scaled: float
    scale: float
    n_points: int
    seed: int
    tol: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["labels"] = list(self.labels)
        return d


def _bracket_report(labels, residuals, scales, seed, tol):
    residuals = np.abs(np.asarray(residuals))
    scaled = residuals / np.asarray(scales)
    k = int(np.argmax(scaled)) if scaled.size else 0
    worst = float(scaled[k]) if scaled.size else 0.0
    return BracketReport(
        tuple(labels),
        float(residuals.max()) if residuals.size else 0.0,
        worst,
        float(scales[k]) if scaled.size else 1.0,
        int(residuals.size),
        seed,
        tol,
        bool(worst <= tol),
    )


def _scale(gf, gg):
    return max(1.0, float(np.linalg.norm(gf) * np.linalg.norm(gg)))


def _check_arity(observables):
    ns = {f.n for f in observables}
    if len(ns) > 1:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"observables of mixed arity {sorted(ns)}")


def check_conservation(H, integrals, n_points=DEFAULT_POINTS, tol=DEFAULT_TOL, seed=0, accept=None):
    """One :class:`BracketReport` per integral for {H, F_k} at shared points."""
    obs = [H, *integrals]
    _check_arity(obs)
    if not integrals:
        return []
    sweep = _sweep(obs, n_points, seed, accept)
    reports = []
    for k, F in enumerate(integrals, start=1):
        res = [bracket_from_gradients(G[0], G[k]) for _, G in sweep]
        sc = [_scale(G[0], G[k]) for _, G in sweep]
        reports.append(_bracket_report((H.label, F.label), res, sc, seed, tol))
    return reports


@dataclass
class InvolutionReport:
    labels: tuple
    pairs: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.pairs)

    @property
    def matrix(self):
        """Symmetric matrix of max scaled residuals (zero diagonal)."""
        k = len(self.labels)
        M = np.zeros((k, k))
        idx = {lab: i for i, lab in enumerate(self.labels)}
        for r in self.pairs:
            i, j = idx[r.labels[0]], idx[r.labels[1]]
            M[i, j] = M[j, i] = r.max_scaled
        return M

    def to_dict(self):
        k = len(self.labels)
        cells = [[None] * k for _ in range(k)]
        idx = {lab: i for i, lab in enumerate(self.labels)}
        for r in self.pairs:
            i, j = idx[r.labels[0]], idx[r.labels[1]]
            cells[i][j] = cells[j][i] = r.to_dict()
        return {"labels": list(self.labels), "matrix": cells, "passed": self.passed}


def check_involution(integrals, n_points=DEFAULT_POINTS, tol=DEFAULT_TOL, seed=0, accept=None):
    """Brackets over all unordered pairs; a singleton set passes vacuously."""
    labels = tuple(f.label for f in integrals)
    if len(set(labels)) != len(labels):
        raise ValueError(f"integral labels must be distinct: {labels}")
    report = InvolutionReport(labels)
    if len(integrals) < 2:
        return report
    _check_arity(integrals)
    sweep = _sweep(list(integrals), n_points, seed, accept)
    for i, j in combinations(range(len(integrals)), 2):
        res = [bracket_from_gradients(G[i], G[j]) for _, G in sweep]
        sc = [_scale(G[i], G[j]) for _, G in sweep]
        report.pairs.append(_bracket_report((labels[i], labels[j]), res, sc, seed, tol))
    return report


def check_bracket_identity(f, g, target, n_points=DEFAULT_POINTS, tol=DEFAULT_TOL, seed=0, accept=None):
    """Residual of {f, g} - target, scaled like a bracket."""
    obs = [f, g, target]
    _check_arity(obs)
    sweep = _sweep(obs, n_points, seed, accept, with_values=True)
    res = [bracket_from_gradients(G[0], G[1]) - v[2] for _, (G, v) in sweep]
    sc = [_scale(G[0], G[1]) for _, (G, v) in sweep]
    return _bracket_report((f"{{{f.label}, {g.label}}}", target.label), res, sc, seed, tol)


@dataclass
class PointwiseReport:
    labels: tuple
    max_abs: float
    max_rel: float
    n_points: int
    seed: int
    tol: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["labels"] = list(self.labels)
        return d


def check_pointwise_equal(f, g, n_points=DEFAULT_POINTS, tol=1e-12, seed=0, accept=None):
    """|f - g| <= tol * max(1, |f|, |g|) at every sampled point."""
    _check_arity([f, g])
    pts = sample_points(f.n, n_points, seed, accept, (f, g))
    abs_d, rel_d = [], []
    for x in pts:
        a, c = f(x), g(x)
        d = abs(a - c)
        abs_d.append(d)
        rel_d.append(d / max(1.0, abs(a), abs(c)))
    worst = max(rel_d)
    return PointwiseReport((f.label, g.label), max(abs_d), worst, n_points, seed, tol, bool(worst <= tol))


def check_left_right(paramsets, m=None, n_points=DEFAULT_POINTS, tol=1e-12, seed=0):
    """Compare the left and right towers at index ``m`` (default N).

    At m = N both towers are the full-chain Casimir and must agree; for m < N
    they live on different site windows and the report simply says whether
    they coincide.
    """
    out = []
    for ps in paramsets:
        mm = ps.N if m is None else m
        if isinstance(ps, sl2_deformed.DeformedParams):
            left = sl2_deformed.deformed_left_integral(ps, mm)
            right = sl2_deformed.deformed_right_integral(ps, mm)
        else:
            left = sl2_core.left_integral(ps, mm)
            right = sl2_core.right_integral(ps, mm)
        out.append(check_pointwise_equal(left, right, n_points, tol, seed))
    return out


@dataclass
class RankReport:
    labels: tuple
    singular_values: list
    ranks: list
    median_rank: int
    expected_rank: int | None
    rank_tol: float
    seed: int
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["labels"] = list(self.labels)
        return d


def numerical_rank(J, rank_tol=RANK_TOL):
    sv = np.linalg.svd(np.atleast_2d(J), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0, sv
    return int(np.count_nonzero(sv > rank_tol * sv[0])), sv


def independence_rank(fns, n_probe=RANK_PROBES, seed=0, rank_tol=RANK_TOL, expected=None, accept=None):
    """Median numerical rank of the k x 2N Jacobian of ``fns`` over probe points."""
    fns = list(fns)
    _check_arity(fns)
    sweep = _sweep(fns, n_probe, seed, accept)
    ranks, svs = [], []
    for _, G in sweep:
        r, sv = numerical_rank(G, rank_tol)
        ranks.append(r)
        svs.append(sv.tolist())
    med = int(np.median(ranks))
    passed = True if expected is None else med == expected
    return RankReport(tuple(f.label for f in fns), svs, ranks, med, expected, rank_tol, seed, passed)


@dataclass
class LimitReport:
    label: str
    z_values: list
    max_diff: list
    order: float | None
    median_point_order: float | None
    zero_diff: float | None
    min_order: float
    n_points: int
    seed: int
    passed: bool

    def to_dict(self):
        return asdict(self)


def check_limit_order(build, reference, z_values=(1e-2, 1e-3, 1e-4), n_points=10, seed=0, accept=None,
                      min_order=0.9, zero_tol=0.0, label=None):
    """Empirical order of |Q_z - Q_0| -> 0 at fixed points.

    ``build(z)`` returns the deformed observable, ``reference`` its z = 0
    limit.  The order is the least-squares slope of log max_x |diff| against
    log z (the median of the per-point slopes is reported alongside).  A z of
    exactly 0 is compared separately and must agree to
    ``zero_tol * max(1, |reference|)``; the default demands equality.
    """
    zs = [float(v) for v in z_values]
    if any(a <= b for a, b in zip(zs, zs[1:])):
        raise ValueError(f"z values must be strictly decreasing, got {zs}")
    if zs and zs[-1] < 0.0:
        raise ValueError(f"z values must approach 0 from above, got {zs}")
    pos = [v for v in zs if v > 0.0]
    built = {v: build(v) for v in zs}
    pts = sample_points(reference.n, n_points, seed, accept, (reference, *built.values()))
    ref = np.array([reference(x) for x in pts])
    diffs = {v: np.abs(np.array([built[v](x) for x in pts]) - ref) for v in zs}
    zero = float(diffs[0.0].max()) if 0.0 in diffs else None

    sup = [float(diffs[v].max()) for v in pos]
    order = median_order = None
    if len(pos) >= 2 and all(d > 0.0 for d in sup):
        lz = np.log(np.array(pos))
        order = float(np.polyfit(lz, np.log(sup), 1)[0])
        per_point = []
        for k in range(len(pts)):
            d = np.array([diffs[v][k] for v in pos])
            if np.all(d > 0.0):
                per_point.append(float(np.polyfit(lz, np.log(d), 1)[0]))
        median_order = float(np.median(per_point)) if per_point else None
    elif len(pos) >= 2:
        order = math.inf
    zero_ok = zero is None or zero <= zero_tol * max(1.0, float(np.abs(ref).max()))
    passed = (order is None or order >= min_order) and zero_ok
    return LimitReport(
        label or reference.label,
        zs,
        [float(diffs[v].max()) for v in zs],
        None if order is None or math.isinf(order) else order,
        median_order,
        zero,
        min_order,
        n_points,
        seed,
        bool(passed),
    )


@dataclass
class StackelReport:
    N: int
    z: float
    condition_residual: float
    det_rel_err: float
    det_printed_rel_err: float
    min_abs_det: float
    inverse_residual: float
    decomposition_rel_err: float
    n_points: int
    seed: int
    passed: bool

    def to_dict(self):
        return asdict(self)


def check_stackel(sys, n_points=DEFAULT_POINTS, seed=0, tol_condition=1e-12, tol_det=1e-12,
                  tol_inverse=1e-10, tol_decomposition=1e-12, matrix=None):
    """Separability certificate at random points.

    ``det_printed_rel_err`` compares the LU determinant with the printed
    closed-form product; ``det_rel_err`` compares with the same product times
    (-1)**(N+1), the sign that the matrix actually has.  The verdict uses the
    signed comparison together with det != 0.  ``matrix(sys, x)`` replaces
    the separation matrix, e.g. to audit a candidate B.
    """
    from . import stackel

    matrix = matrix or stackel.stackel_matrix
    a_obs, _ = stackel.stackel_coefficients(sys)
    e1 = np.eye(sys.N)[0]
    H = stackel.stackel_hamiltonian(sys)
    dec = stackel.stackel_decomposition(sys)
    pts = sample_points(sys.N, n_points, seed, None, (H,))
    sign = (-1.0) ** (sys.N + 1)
    cond, det_e, det_p, inv_e, dec_e, dets = [], [], [], [], [], []
    for x in pts:
        B = matrix(sys, x)
        A = stackel.inverse_coefficients(sys, x)
        cond.append(float(np.abs(B @ np.array([ai(x) for ai in a_obs]) - e1).max()))
        d = stackel.lu_determinant(B)
        cf = stackel.closed_form_determinant(sys, x)
        dets.append(abs(d))
        det_e.append(abs(d - sign * cf) / abs(cf))
        det_p.append(abs(d - cf) / abs(cf))
        inv_e.append(float(np.abs(B @ A - np.eye(sys.N)).max()))
        h, g = H(x), dec(x)
        dec_e.append(abs(h - g) / max(1.0, abs(h)))
    rep = StackelReport(
        sys.N, sys.z, max(cond), max(det_e), max(det_p), min(dets), max(inv_e), max(dec_e), n_points, seed, False
    )
    rep.passed = bool(
        rep.condition_residual <= tol_condition
        and rep.det_rel_err <= tol_det
        and rep.min_abs_det > 0.0
        and rep.inverse_residual <= tol_inverse
        and rep.decomposition_rel_err <= tol_decomposition
    )
    return rep
