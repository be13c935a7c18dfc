"""Integration of Hamilton's equations with conservation-drift monitoring."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import SingularEncounter, SingularPoint, StepUnderflow
from .numkit import PhasePoint

METHODS = ("rk4", "adaptive")
MIN_STEP = 1e-14


def hamilton_rhs(H, x):
    """(dH/dp, -dH/dq) at ``x``."""
    g = H.gradient(x)
    n = H.n
    return np.concatenate([g[n:], -g[:n]])


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    label: str
    method: str
    dt: float | None
    rtol: float | None = None
    atol: float | None = None
    n_steps: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.states.shape[1] // 2

    @property
    def points(self):
        return [PhasePoint.from_array(s) for s in self.states]

    def __len__(self):
        return len(self.times)


def _rhs_or_raise(H, x, t):
    try:
        return hamilton_rhs(H, x)
    except (SingularPoint, ZeroDivisionError) as exc:
        raise SingularEncounter(f"right-hand side undefined at t={t:g}: {exc}", t=t) from exc


def _check_start(H, x0):
    for i in H.singular_sites:
        if x0[i] == 0.0:
            raise SingularEncounter(f"q{i + 1}(0) = 0 at a centrifugal site", t=0.0, site=i + 1)
    _rhs_or_raise(H, x0, 0.0)


def _rk4(H, x0, t_end, dt):
    n_steps = max(1, math.ceil(t_end / dt - 1e-12))
    h = t_end / n_steps
    sites = H.singular_sites
    times = np.linspace(0.0, t_end, n_steps + 1)
    states = np.empty((n_steps + 1, x0.size))
    states[0] = x = x0
    for k in range(n_steps):
        t = times[k]
        k1 = _rhs_or_raise(H, x, t)
        k2 = _rhs_or_raise(H, x + 0.5 * h * k1, t + 0.5 * h)
        k3 = _rhs_or_raise(H, x + 0.5 * h * k2, t + 0.5 * h)
        k4 = _rhs_or_raise(H, x + h * k3, t + h)
        nxt = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        for i in sites:
            if nxt[i] == 0.0 or (nxt[i] > 0.0) != (x[i] > 0.0):
                raise SingularEncounter(f"q{i + 1} changed sign in [{t:g}, {t + h:g}]", t=t, site=i + 1)
        states[k + 1] = x = nxt
    return Trajectory(times, states, H.label, "rk4", h, n_steps=n_steps)


def _crossing_event(i):
    def event(t, x):
        return x[i]

    event.terminal = True
    return event


def _adaptive(H, x0, t_end, dt, rtol, atol):
    events = [_crossing_event(i) for i in H.singular_sites]
    t_eval = None
    if dt is not None:
        n = max(1, math.ceil(t_end / dt - 1e-12))
        t_eval = np.linspace(0.0, t_end, n + 1)
    sol = solve_ivp(
        lambda t, x: _rhs_or_raise(H, x, t),
        (0.0, t_end),
        x0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
        events=events or None,
    )
    if sol.status == 1:
        for i, te in zip(H.singular_sites, sol.t_events):
            if te.size:
                raise SingularEncounter(f"q{i + 1} reached 0 at t={te[0]:g}", t=float(te[0]), site=i + 1)
    if sol.status == -1:
        raise StepUnderflow(sol.message)
    times, states = sol.t, sol.y.T.copy()
    if t_eval is None:
        n_steps = len(times) - 1
    else:
        n_steps = -1
    return Trajectory(
        times, states, H.label, "adaptive", dt, rtol, atol, n_steps, {"nfev": int(sol.nfev)}
    )


def integrate(H, x0, t_end, dt=1e-2, method="rk4", rtol=1e-10, atol=1e-12):
    """Integrate from ``x0`` over [0, t_end].

    ``rk4`` takes ceil(t_end/dt) equal steps.  ``adaptive`` uses an embedded
    8(5,3) Runge-Kutta pair; there ``dt`` only sets the output grid (pass None
    to record the accepted steps instead).  Crossing q_i = 0 at a centrifugal
    site raises :class:`SingularEncounter`.
    """
    x0 = x0.as_array() if isinstance(x0, PhasePoint) else np.asarray(x0, dtype=float)
    if x0.shape != (2 * H.n,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({2 * H.n},)")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if dt is not None and not dt > 0:
        raise ValueError("dt must be positive")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    _check_start(H, x0)
    if method == "rk4":
        if dt is None:
            raise ValueError("rk4 needs a step size")
        return _rk4(H, x0, float(t_end), float(dt))
    return _adaptive(H, x0, float(t_end), dt, rtol, atol)


def drift_report(traj, integrals):
    """label -> max_t |F(x(t)) - F(x(0))| / max(1, |F(x(0))|)."""
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    out = {}
    for F in integrals:
        vals = np.array([F(s) for s in traj.states])
        out[F.label] = float(np.max(np.abs(vals - vals[0])) / max(1.0, abs(vals[0])))
    return out
