import numpy as np
import pytest

from koalint import numkit as nk
from koalint import sl2_core as c
from koalint import sl2_deformed as d
from koalint.errors import BadTowerIndex

Q = np.array([1.0, 2.0, 0.5, 1.5])  # N = 4
Q2 = Q * Q


def point(q, p=None):
    p = np.zeros_like(q) if p is None else p
    return np.concatenate([q, p])


def test_k_functions_by_hand():
    x = point(Q)
    # K_i^(3) = -sum_{k<i} q_k^2 + sum_{i<l<=3} q_l^2
    assert d.k_function(4, 3, 1)(x) == pytest.approx(Q2[1] + Q2[2])
    assert d.k_function(4, 3, 2)(x) == pytest.approx(-Q2[0] + Q2[2])
    assert d.k_function(4, 3, 3)(x) == pytest.approx(-Q2[0] - Q2[1])
    assert d.k_function_pair(4, 3, 1, 3)(x) == pytest.approx(Q2[1] + Q2[2] - Q2[0] - Q2[1])


def test_r_functions_by_hand():
    x = point(Q)
    # R_i^(2) on sites 3..4
    assert d.r_function(4, 2, 3)(x) == pytest.approx(Q2[3])
    assert d.r_function(4, 2, 4)(x) == pytest.approx(-Q2[2])
    assert d.r_function_pair(4, 3, 2, 4)(x) == pytest.approx((Q2[2] + Q2[3]) + (-Q2[1] - Q2[2]))


def test_full_window_k_equals_r(rng):
    for _ in range(10):
        x = nk.random_point(rng, 4)
        for i in range(1, 5):
            assert d.k_function(4, 4, i)(x) == pytest.approx(d.r_function(4, 4, i)(x), rel=1e-14, abs=1e-14)


def test_index_validation():
    with pytest.raises(BadTowerIndex):
        d.k_function(4, 3, 4)
    with pytest.raises(BadTowerIndex):
        d.r_function(4, 2, 2)
    with pytest.raises(BadTowerIndex):
        d.k_function_pair(4, 3, 2, 2)
    P = d.DeformedParams.make(3, 1.0, (1, 1, 1), 0.2)
    with pytest.raises(BadTowerIndex):
        d.deformed_left_integral(P, 1)
    with pytest.raises(BadTowerIndex):
        d.i_ij_z(P, 3, 1)


def test_z_zero_reproduces_undeformed_bitwise(rng):
    P = d.DeformedParams.make(4, 1.2, (1.0, 0.0, 0.5, 2.0), 0.0)
    B = P.base
    pairs = [(d.deformed_sw_hamiltonian(P), c.sw_hamiltonian(B))]
    pairs += [(d.deformed_left_integral(P, m), c.left_integral(B, m)) for m in range(2, 5)]
    pairs += [(d.deformed_right_integral(P, m), c.right_integral(B, m)) for m in range(2, 5)]
    pairs += list(zip(d.deformed_generators(P), c.generators(B)))
    for _ in range(10):
        x = nk.random_point(rng, 4)
        for a, b in pairs:
            assert a(x) == b(x)


def test_one_site_deformed_casimir(rng):
    for z in (-0.3, 0.1, 0.45):
        P = d.DeformedParams.make(1, 1.0, (0.8,), z)
        C = d.deformed_casimir_one_site(P)
        for _ in range(10):
            assert C(nk.random_point(rng, 1)) == pytest.approx(-0.8, abs=1e-12)
    with pytest.raises(ValueError):
        d.deformed_casimir_one_site(d.DeformedParams.make(2, 1.0, (), 0.1))


def test_deformed_brackets_close(rng):
    P = d.DeformedParams.make(3, 1.0, (1.0, 0.5, 2.0), 0.3)
    fm, fp, f3 = d.deformed_generators(P)
    t1, t2, t3 = d.deformed_bracket_targets(P)
    for _ in range(10):
        x = nk.random_point(rng, 3)
        assert nk.poisson_bracket(f3, fp, x) == pytest.approx(t1(x), rel=1e-11)
        assert nk.poisson_bracket(f3, fm, x) == pytest.approx(t2(x), rel=1e-11)
        assert nk.poisson_bracket(fm, fp, x) == pytest.approx(t3(x), rel=1e-11)


def test_swapped_labels_do_not_close(rng):
    """Negative control: with J- and J3 exchanged, the first bracket fails."""
    P = d.DeformedParams.make(2, 1.0, (1.0, 1.0), 0.3)
    fm, fp, f3 = d.deformed_generators(P)
    x = nk.random_point(rng, 2)
    wrong = 2 * fp(x) * np.cosh(0.3 * f3(x))
    assert abs(nk.poisson_bracket(fm, fp, x) - wrong) > 1e-3


def test_deformed_casimir_conserved_and_towers_commute(rng):
    P = d.DeformedParams.make(3, 1.0, (1.0, 1.0, 1.0), 0.3)
    H = d.deformed_sw_hamiltonian(P)
    C2, C3, I2 = d.deformed_left_integral(P, 2), d.deformed_left_integral(P, 3), d.deformed_right_integral(P, 2)
    for _ in range(10):
        x = nk.random_point(rng, 3)
        for a, b in ((H, C2), (H, C3), (H, I2), (C2, C3), (C3, I2)):
            sc = max(1, np.linalg.norm(a.gradient(x)) * np.linalg.norm(b.gradient(x)))
            assert abs(nk.poisson_bracket(a, b, x)) <= 1e-10 * sc


def test_overlapping_left_and_right_do_not_commute(rng):
    """C_z^(2) lives on sites 1,2 and I_z^(2) on 2,3; they share site 2."""
    P = d.DeformedParams.make(3, 1.0, (1.0, 1.0, 1.0), 0.2)
    x = nk.random_point(rng, 3)
    assert abs(nk.poisson_bracket(d.deformed_left_integral(P, 2), d.deformed_right_integral(P, 2), x)) > 1e-3


def test_general_f_deformed_hamiltonian_conserves(rng):
    for choice in ("linear", "quadratic", "exp2z"):
        P = d.DeformedParams.make(3, 1.0, (1.0, 0.5, 1.0), 0.2)
        H = d.deformed_generalized_hamiltonian(P, c.f_family(choice, 1.0, 0.2))
        C3 = d.deformed_left_integral(P, 3)
        x = nk.random_point(rng, 3)
        sc = max(1, np.linalg.norm(H.gradient(x)) * np.linalg.norm(C3.gradient(x)))
        assert abs(nk.poisson_bracket(H, C3, x)) <= 1e-10 * sc


def test_gradient_matches_finite_differences(rng):
    P = d.DeformedParams.make(3, 1.0, (1.0, 0.5, 1.0), 0.25)
    I3 = d.deformed_right_integral(P, 3)
    x = nk.random_point(rng, 3)
    h = 1e-6
    fd = np.array([(I3(x + h * e) - I3(x - h * e)) / (2 * h) for e in np.eye(6)])
    np.testing.assert_allclose(I3.gradient(x), fd, rtol=1e-6, atol=1e-6)
