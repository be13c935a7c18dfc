import re

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from koalint import config, suites
from koalint import numkit as nk
from koalint import sl2_deformed as d
from koalint import verify as v

CASES = [
    {"family": "sw", "N": 1, "b": [0.5]},
    {"family": "sw", "N": 2, "b": [1, 0]},
    {"family": "sw", "N": 5, "b": [1, 0.5, 0, 2, 1], "omega2": 0.7},
    {"family": "sw_general_f", "N": 3, "b": [1, 1, 1], "f_choice": "linear"},
    {"family": "sw_general_f", "N": 4, "b": [1, 0, 1, 2], "f_choice": "exp2z", "z": 0.1},
    {"family": "sw_deformed", "N": 1, "b": [1.5], "z": 0.3},
    {"family": "sw_deformed", "N": 4, "b": [1, 0.5, 0, 2], "z": -0.25},
    {"family": "sw_deformed_general_f", "N": 3, "b": [1, 1, 1], "z": 0.2, "f_choice": "quadratic"},
    {"family": "stackel", "N": 2, "b": [1, 1], "z": 0.25},
    {"family": "stackel", "N": 4, "b": [1, 0.5, 1, 2], "z": -0.2},
    {"family": "comodule", "sigma": 0.2, "lambda1": 1.3, "lambda2": 0.7, "b1": 0.5},
]


@pytest.mark.parametrize("raw", CASES, ids=lambda r: f"{r['family']}-{r.get('N', 2)}")
def test_family_suite_passes(raw):
    rep = suites.run_verify(config.validate({**raw, "n_points": 40}), timestamp=False)
    assert rep["passed"], [k for k in ("conservation", "rank", "limits", "identities") for r in rep[k] if not r["passed"]]
    assert rep["config"]["family"] == raw["family"]


def test_report_sections_and_notes():
    rep = suites.run_verify(config.validate({"family": "stackel", "N": 3, "b": [1, 1, 1], "z": 0.25, "n_points": 20}))
    assert rep["stackel"]["passed"] and "generated_at" in rep
    assert len(rep["errata_notes"]) == 4
    assert [r["expected_rank"] for r in rep["rank"]] == [4, 5]
    for note in rep["errata_notes"]:
        assert not re.search(r"\d+\.\d+", note)  # no numbered references


def test_initial_point_is_regular_and_seeded():
    cfg = config.validate({"family": "comodule", "sigma": 0.2, "seed": 3})
    a, b = suites.initial_point(cfg), suites.initial_point(cfg)
    np.testing.assert_array_equal(a, b)
    cfg2 = config.validate({"family": "sw", "N": 1, "b": [0], "q0": [1.0], "p0": [0.5]})
    np.testing.assert_array_equal(suites.initial_point(cfg2), [1.0, 0.5])


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    st.integers(2, 5),
    st.lists(st.floats(0.0, 3.0), min_size=5, max_size=5),
    st.floats(-0.5, 0.5),
    st.integers(0, 2**32),
)
def test_full_towers_always_coincide(N, b, z, seed):
    P = d.DeformedParams.make(N, 1.0, tuple(b[:N]), z)
    rep = v.check_pointwise_equal(d.deformed_left_integral(P, N), d.deformed_right_integral(P, N), 10, 1e-12, seed)
    assert rep.passed


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.floats(-0.5, 0.5), st.integers(0, 2**32))
def test_deformed_hamiltonian_conserves_full_casimir(N, z, seed):
    P = d.DeformedParams.make(N, 1.0, (1.0,) * N, z)
    H = d.deformed_sw_hamiltonian(P)
    rep = v.check_conservation(H, [d.deformed_left_integral(P, N)], n_points=5, seed=seed)[0]
    assert rep.passed


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_bracket_is_bilinear(N, seed):
    rng = np.random.default_rng(seed)
    x = nk.random_point(rng, N)
    f = nk.Observable(N, lambda q, p: q[0] * p[-1] ** 2 + nk.exp(0.1 * q[-1]))
    g = nk.Observable(N, lambda q, p: p[0] * q[0] ** 3)
    h = nk.Observable(N, lambda q, p: q[-1] * p[0])
    lhs = nk.poisson_bracket(f, 2.0 * g + h, x)
    rhs = 2.0 * nk.poisson_bracket(f, g, x) + nk.poisson_bracket(f, h, x)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
