import numpy as np
import pytest

from koalint import numkit as nk
from koalint import sl2_core as c
from koalint import sl2_deformed as d
from koalint import stackel as s
from koalint.errors import BadTowerIndex, SingularPoint


def system(N, z=0.25, b=None, w2=1.0):
    return s.StackelSystem.make(N, w2, b if b is not None else (1.0,) * N, z)


def test_needs_two_sites():
    with pytest.raises(ValueError):
        system(1)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_decomposition_reproduces_hamiltonian(N, rng):
    S = system(N, 0.25, b=tuple(rng.uniform(0, 2, N)))
    H, G = s.stackel_hamiltonian(S), s.stackel_decomposition(S)
    for _ in range(20):
        x = nk.random_point(rng, N)
        assert G(x) == pytest.approx(H(x), rel=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_inverse_and_condition(N, rng):
    S = system(N, 0.3)
    for _ in range(10):
        x = nk.random_point(rng, N)
        B, A = s.stackel_matrix(S, x), s.inverse_coefficients(S, x)
        np.testing.assert_allclose(B @ A, np.eye(N), atol=1e-12)
        np.testing.assert_allclose(A, np.linalg.inv(B), rtol=1e-10)
        assert s.stackel_condition_residual(S, x) < 1e-12
        a, _ = s.stackel_coefficients(S)
        np.testing.assert_allclose(A[:, 0], [ai(x) for ai in a], rtol=1e-15)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_determinant_carries_alternating_sign(N, rng):
    S = system(N)
    x = nk.random_point(rng, N)
    B = s.stackel_matrix(S, x)
    lu = s.lu_determinant(B)
    assert lu == pytest.approx(np.linalg.det(B), rel=1e-12)
    assert lu == pytest.approx((-1) ** (N + 1) * s.closed_form_determinant(S, x), rel=1e-12)


def test_matrix_entries_by_hand():
    S = system(2, 0.5)
    x = np.array([1.0, 2.0, 0.0, 0.0])
    B = s.stackel_matrix(S, x)
    inv_s = lambda v: 0.5 * v / np.sinh(0.5 * v)
    assert B[0, 0] == 0.0
    assert B[0, 1] == pytest.approx(0.5 * inv_s(4.0) * np.exp(-2.0))
    assert B[1, 0] == pytest.approx(inv_s(1.0) * np.exp(-0.5))
    assert B[1, 1] == pytest.approx(-inv_s(4.0) * np.exp(2.0))


def test_hamiltonian_at_z_zero_is_sw(rng):
    S = system(3, 0.0, b=(1.0, 0.0, 2.0))
    H0 = c.sw_hamiltonian(S.params.base)
    for _ in range(5):
        x = nk.random_point(rng, 3)
        assert s.stackel_hamiltonian(S)(x) == pytest.approx(H0(x), rel=1e-15)


def test_boundary_potentials_diverge_at_z_zero():
    S = system(3, 0.0)
    _, U = s.stackel_coefficients(S)
    with pytest.raises(SingularPoint):
        U[0](1.0)
    with pytest.raises(SingularPoint):
        U[2](1.0)
    assert U[1](1.0) == 0.5  # b/(2 q^2) with q = 1


@pytest.mark.parametrize("N", [2, 3, 4])
def test_separated_integrals_differ_from_z_by_constant(N, rng):
    z, w2 = 0.25, 1.3
    S = system(N, z, w2=w2)
    for j in range(2, N + 1):
        Z = s.z_integral(S, j)
        for _ in range(5):
            x = nk.random_point(rng, N)
            assert s.separated_integral(S, j, x) - Z(x) == pytest.approx(w2 / (4 * z), rel=1e-9)


def test_z_integrals_commute_with_everything_relevant(rng):
    S = system(4, 0.2, b=(1.0, 0.5, 2.0, 1.0))
    H = s.stackel_hamiltonian(S)
    P = S.params
    obs = [H, *(s.z_integral(S, j) for j in range(2, 5))]
    towers = [d.deformed_left_integral(P, m) for m in range(2, 5)] + [d.deformed_right_integral(P, m) for m in range(2, 5)]
    for _ in range(5):
        x = nk.random_point(rng, 4)
        for i, a in enumerate(obs):
            for b in obs[i + 1 :] + ([] if i else towers):
                sc = max(1, np.linalg.norm(a.gradient(x)) * np.linalg.norm(b.gradient(x)))
                assert abs(nk.poisson_bracket(a, b, x)) <= 1e-10 * sc


def test_z_integral_limit_by_hand():
    S = system(3, 0.2, b=(1.0, 2.0, 3.0), w2=2.0)
    Z30 = s.z_integral_limit(S, 3)
    x = np.array([1.0, 2.0, 5.0, 1.0, -1.0, 7.0])
    assert Z30(x) == pytest.approx(0.5 * (1 + 1) + 0.5 * (1 + 2 / 4) + 0.5 * 2.0 * (1 + 4))
    with pytest.raises(BadTowerIndex):
        s.z_integral(S, 1)
    with pytest.raises(BadTowerIndex):
        s.z_integral_limit(S, 4)


def test_z_integral_at_z_zero_is_its_limit(rng):
    S = system(4, 0.0, b=(1.0, 0.0, 2.0, 0.5))
    for j in range(2, 5):
        x = nk.random_point(rng, 4)
        assert s.z_integral(S, j)(x) == s.z_integral_limit(S, j)(x)


def test_point_shape_is_checked():
    with pytest.raises(ValueError):
        s.stackel_matrix(system(3), np.zeros(4))
