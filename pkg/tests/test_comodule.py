import numpy as np
import pytest

from koalint import comodule as cm
from koalint import numkit as nk
from koalint.errors import DegenerateDenominator


def images_at(params, x):
    return {k: v(x) for k, v in cm.coaction_images(params).items()}


def test_primitive_m_image():
    for s in (0.0, 0.3):
        im = images_at(cm.ComoduleParams(s, 1.5, 0.5), np.array([1.0, 2.0, 0.3, 0.4]))
        assert im["M"] == 1.5**2 + 0.5**2


def test_p_image_by_hand():
    im = images_at(cm.ComoduleParams(0.5), np.array([0.7, -1.2, 1.0, 2.0]))
    assert im["P"] == 4.0


def test_h_image_at_sigma_zero():
    x = np.array([1.3, 0.4, 0.6, -0.2])
    im = images_at(cm.ComoduleParams(0.0, b1=2.0), x)
    assert im["H"] == pytest.approx(0.6**2 / 2 + 2.0 / 1.3**2 + 0.2**2 / 2)


def _accepted_points(p, rng, n=10):
    acc = cm.sampling_accept(p)
    out = []
    while len(out) < n:
        x = nk.random_point(rng, 2)
        if acc(x):
            out.append(x)
    return out


@pytest.mark.parametrize("b1", [0.0, 0.7])
def test_images_keep_gl2_brackets(b1, rng):
    """The coaction is a Poisson map on gl(2): {D, H} = -2H, {D, C} = 2C, {H, C} = D."""
    p = cm.ComoduleParams(0.2, 1.1, 0.9, b1)
    im = cm.coaction_images(p)
    H, D, C = im["H"], im["D"], im["C"]
    for x in _accepted_points(p, rng):
        assert nk.poisson_bracket(D, H, x) == pytest.approx(-2 * H(x), rel=1e-10)
        assert nk.poisson_bracket(D, C, x) == pytest.approx(2 * C(x), rel=1e-10)
        assert nk.poisson_bracket(H, C, x) == pytest.approx(D(x), rel=1e-10)


def test_images_keep_full_relations_without_centrifugal_term(rng):
    """With b1 = 0 the first particle carries S as well, so P and K relations hold too."""
    p = cm.ComoduleParams(0.2, 1.1, 0.9, 0.0)
    im = cm.coaction_images(p)
    H, D, C, P, K, M = (im[k] for k in ("H", "D", "C", "P", "K", "M"))
    for x in _accepted_points(p, rng):
        br = lambda f, g: nk.poisson_bracket(f, g, x)
        assert br(D, P) == pytest.approx(-P(x), rel=1e-10)
        assert br(D, K) == pytest.approx(K(x), rel=1e-10)
        assert br(K, P) == pytest.approx(M(x), rel=1e-10)
        assert br(K, H) == pytest.approx(P(x), rel=1e-10)
        assert br(P, C) == pytest.approx(-K(x), rel=1e-10)
        assert abs(br(H, P)) < 1e-10 and abs(br(K, C)) < 1e-10


def test_closed_form_matches_coaction(rng):
    p = cm.ComoduleParams(0.15, 1.2, 0.8, 0.5)
    a, b = cm.h_sigma_2(p), cm.h_sigma_2_coaction(p)
    for _ in range(20):
        x = nk.random_point(rng, 2)
        if cm.sampling_accept(p)(x):
            assert a(x) == pytest.approx(b(x), rel=1e-13)


def test_integral_commutes_and_printed_variant_does_not(rng):
    p = cm.ComoduleParams(0.1)
    H, C, Cp = cm.h_sigma_2(p), cm.c_sigma_2(p), cm.c_sigma_2_printed(p)
    x = np.array([1.2, -0.7, 0.4, 0.9])
    sc = max(1, np.linalg.norm(H.gradient(x)) * np.linalg.norm(C.gradient(x)))
    assert abs(nk.poisson_bracket(H, C, x)) <= 1e-10 * sc
    assert abs(nk.poisson_bracket(H, Cp, x)) > 1e-2


def test_limits_at_sigma_zero():
    p = cm.ComoduleParams(0.0, b1=1.5)
    x = np.array([1.2, -0.7, 0.4, 0.9])
    assert cm.h_sigma_2(p)(x) == cm.h_sigma_limit(p)(x)
    assert cm.c_sigma_2(p)(x) == pytest.approx(cm.c_sigma_limit(p)(x), rel=1e-14)
    assert cm.casimir_expanded_sigma0(p)(x) == pytest.approx(cm.c_sigma_limit(p)(x), rel=1e-14)


def test_hamiltonian_example_value():
    p = cm.ComoduleParams(0.1)
    x = np.array([1.0, 1.0, 0.5, 0.5])
    # hand expansion of the closed form at these values
    den = 1.05
    th = 0.125 + 1.0
    g = 1.0 - 1.0
    ref = 0.25 + 1 / (2 * den**2) + 0.5 + 1.0 + 0.1 * (2 * th * 0.5 + g) + 0.01 * (th * 0.25 + 0.0)
    assert cm.h_sigma_2(p)(x) == pytest.approx(ref)


def test_degenerate_denominator():
    p = cm.ComoduleParams(0.5, lambda2=2.0)
    x = np.array([1.0, 1.0, 0.0, -1.0])
    with pytest.raises(DegenerateDenominator):
        cm.h_sigma_2(p)(x)
    assert not cm.sampling_accept(p)(x)
    assert cm.sampling_accept(p)(np.array([1.0, 1.0, 0.0, 0.1]))
