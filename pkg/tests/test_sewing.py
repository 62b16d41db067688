import math

import numpy as np
import pytest

from oracles import left_riemann
from sewkit import (
    HoelderData,
    NonConvergence,
    Subdivision,
    WrongMode,
    compose_along,
    concat,
    constant_K,
    dyadic_refine,
    flow_law_defect,
    four_point_defect,
    inverse_defect,
    inverse_defect_bound,
    make_additive_sin,
    make_euler_linear,
    make_euler_sin,
    make_young,
    mesh_lemma_check,
    refinement_bound,
    regular,
    sew,
    zeta,
)
from sewkit.errors import NotARefinement
from sewkit.flows import MODE_KNITTING


# --- zeta oracle -------------------------------------------------------------

def test_zeta_against_closed_forms():
    assert zeta(2.0, 1e-10) == pytest.approx(math.pi**2 / 6.0, abs=1e-10)
    assert zeta(4.0, 1e-10) == pytest.approx(math.pi**4 / 90.0, abs=1e-10)


def test_zeta_tends_to_one():
    val = zeta(30.0, 1e-12)
    assert 1.0 < val < 1.0 + 1e-8


def test_zeta_rejects_divergent_arguments():
    with pytest.raises(ValueError):
        zeta(1.0)
    with pytest.raises(ValueError):
        zeta(0.5)


# --- constant K ---------------------------------------------------------------

def test_constant_K_examples():
    h = HoelderData(1.0, ((1.0, 1.0, 1.0),))
    assert constant_K(h) == pytest.approx(4.0 * zeta(2.0), abs=1e-12)
    assert constant_K(h) == pytest.approx(6.5797362674, abs=1e-8)

    h0 = HoelderData(1.0, ((1.0, 1.0, 0.0),))
    assert constant_K(h0) == 0.0

    h_half = HoelderData(0.5, ((0.75, 0.75, 2.0), (0.5, 1.0, 3.0)))
    expect = 2.0**1.5 * 5.0 * zeta(1.5, 1e-9)
    assert constant_K(h_half) == pytest.approx(expect, rel=1e-9)
    assert expect == pytest.approx(36.944, abs=2e-3)


def test_constant_K_rejects_knitting_mode():
    h = HoelderData(1.0, ((2.0, 1.0, 1.0),), mode=MODE_KNITTING)
    with pytest.raises(WrongMode):
        constant_K(h)


# --- compose_along -----------------------------------------------------------

def test_compose_along_trivial_returns_mu_exactly():
    m = make_euler_linear(1.0)
    trivial = Subdivision(0.0, 1.0)
    composed = compose_along(m, trivial)
    direct = m.mu(0.0, 1.0)
    assert all(composed.eval(p) == direct.eval(p) for p in composed.source.probes)


def test_compose_along_euler_two_steps():
    m = make_euler_linear(1.0)
    composed = compose_along(m, Subdivision(0.0, 1.0, (0.5,)))
    assert composed.eval(1.0) == pytest.approx(2.25)


def test_compose_along_additive_left_sum():
    m = make_additive_sin()
    composed = compose_along(m, regular(0.0, 1.0, 4))
    expect = left_riemann(math.sin, 0.0, 1.0, 4)
    assert composed.eval(0.0) == pytest.approx(expect, abs=1e-15)
    assert expect == pytest.approx(0.3521170644705151, abs=1e-13)


def test_splitting_consistency_is_exact():
    m = make_additive_sin()
    left = Subdivision(0.0, 0.4, (0.1, 0.3))
    right = Subdivision(0.4, 1.0, (0.7,))
    glued = compose_along(m, concat(left, right))
    a = compose_along(m, left)
    b = compose_along(m, right)
    for p in glued.source.probes:
        assert glued.eval(p) == a.eval(b.eval(p))


# --- sew ----------------------------------------------------------------------

def test_sew_identity_at_equal_endpoints():
    m = make_euler_linear(1.0)
    flow, cert = sew(m, 0.3, 0.3, 1e-10)
    assert all(flow.eval(p) == p for p in flow.source.probes)
    assert all((r.successive or 0.0) == 0.0 for r in cert.levels)


def test_sew_euler_reaches_the_exponential():
    m = make_euler_linear(1.0)
    flow, cert = sew(m, 0.0, 1.0, 1e-8)
    assert abs(flow.eval(1.0) - math.e) <= 1e-6
    assert cert.converged and cert.mu_bound_ok


def test_sew_additive_sin_reaches_the_integral():
    m = make_additive_sin()
    _, cert = sew(m, 0.0, 1.0, 1e-8, value_fn=m.summary)
    assert cert.limit_value == pytest.approx(1.0 - math.cos(1.0), abs=1e-8)


def test_sew_young_linear_reaches_half():
    m = make_young(lambda t: t, lambda t: t, 1.0, 1.0)
    _, cert = sew(m, 0.0, 1.0, 1e-8, value_fn=m.summary)
    assert cert.limit_value == pytest.approx(0.5, abs=1e-8)


def test_sew_is_deterministic():
    m = make_euler_sin()
    flow1, cert1 = sew(m, 0.0, 1.0, 1e-8)
    flow2, cert2 = sew(m, 0.0, 1.0, 1e-8)
    assert [r.successive for r in cert1.levels] == [r.successive for r in cert2.levels]
    assert all(flow1.eval(p) == flow2.eval(p) for p in flow1.source.probes)


def test_sew_successive_distances_respect_refinement_bound():
    for m in (make_euler_linear(1.0), make_additive_sin(), make_euler_sin()):
        _, cert = sew(m, 0.0, 1.0, 0.0, max_level=8)
        for rec in cert.levels[1:]:
            assert rec.successive <= rec.refine_bound + 1e-9


def test_sew_convergence_order_near_two():
    # successive distances shrink by a factor in [1.7, 2.3] once mesh < 0.1
    for m in (make_euler_linear(1.0), make_additive_sin()):
        _, cert = sew(m, 0.0, 1.0, 0.0, max_level=10)
        recs = [r for r in cert.levels[1:] if r.mesh < 0.1 and r.successive]
        for a, b in zip(recs, recs[1:]):
            assert 1.7 <= a.successive / b.successive <= 2.3


def test_sew_nonconvergence_carries_the_level_log():
    m = make_additive_sin()
    with pytest.raises(NonConvergence) as err:
        sew(m, 0.0, 1.0, 1e-13, max_level=3)
    cert = err.value.certificate
    assert cert is not None and len(cert.levels) == 4 and not cert.converged


# --- flow law and inverse ------------------------------------------------------

def test_flow_law_defect_zero_at_u_equal_s():
    m = make_additive_sin()
    assert flow_law_defect(m, 0.0, 0.0, 1.0, 1e-8) == 0.0


@pytest.mark.parametrize("s,u,t", [(0.0, 0.5, 1.0), (0.0, 0.3, 1.0)])
def test_flow_law_defect_within_three_tol(s, u, t):
    for m in (make_euler_linear(1.0), make_additive_sin()):
        assert flow_law_defect(m, s, u, t, 1e-8) <= 3e-8


def test_inverse_defect_examples():
    m = make_euler_linear(1.0)
    assert inverse_defect(m, 0.5, 0.5, 7) == 0.0
    measured = inverse_defect(m, 0.0, 1.0, 16)
    bound = inverse_defect_bound(m.hoelder, 1.0, 16)
    assert bound == pytest.approx(math.e / 16.0, rel=1e-12)
    # the exact round-trip factor is (1 - 1/k^2)^k
    assert measured == pytest.approx(1.0 - (1.0 - 1.0 / 256.0) ** 16, abs=1e-12)
    assert measured < bound
    for n in (4, 8, 16):
        assert inverse_defect(m, 0.0, 1.0, 2 * n) < inverse_defect(m, 0.0, 1.0, n)


# --- mesh lemma and four-point --------------------------------------------------

def test_mesh_lemma_check_examples():
    m = make_euler_linear(1.0)
    same = regular(0.0, 1.0, 4)
    lhs, rhs = mesh_lemma_check(m, same, same)
    assert lhs == 0.0 and rhs >= 0.0

    lhs, rhs = mesh_lemma_check(m, regular(0.0, 1.0, 4), regular(0.0, 1.0, 16))
    expected_rhs = 4.0 * zeta(2.0) * math.e * math.exp(0.25) * 0.25
    assert rhs == pytest.approx(expected_rhs, rel=1e-12)
    assert lhs <= rhs

    with pytest.raises(NotARefinement):
        mesh_lemma_check(m, regular(0.0, 1.0, 3), regular(0.0, 1.0, 4))


def test_mesh_lemma_property_additive_dyadic():
    m = make_additive_sin()
    rng = np.random.default_rng(5)
    for _ in range(50):
        interior = tuple(sorted(rng.uniform(0.0, 1.0, size=int(rng.integers(0, 4)))))
        coarse = Subdivision(0.0, 1.0, interior)
        lhs, rhs = mesh_lemma_check(m, coarse, dyadic_refine(coarse))
        assert lhs <= rhs + 1e-9


def test_four_point_defect_examples():
    m = make_euler_linear(1.0)
    assert four_point_defect(m, 0.0, 0.3, 0.3, 1.0) == (0.0, 0.0)
    lhs, rhs = four_point_defect(m, 0.0, 0.3, 0.6, 1.0)
    assert 0.0 < lhs <= rhs

    # v = t reduces the bound to the three-point estimate
    ad = make_additive_sin()
    _, rhs = four_point_defect(ad, 0.0, 0.25, 1.0, 1.0)
    assert rhs == pytest.approx(ad.hoelder.defect_bound(0.75, 0.25), rel=1e-12)


def test_four_point_bound_on_random_quadruples():
    rng = np.random.default_rng(11)
    models = [make_euler_linear(1.0), make_additive_sin(), make_euler_sin()]
    for _ in range(200):
        m = models[int(rng.integers(0, len(models)))]
        s, u, v, t = rng.uniform(0.0, 1.0, size=4)
        lhs, rhs = four_point_defect(m, s, u, v, t)
        assert lhs <= rhs + 1e-9


def test_refinement_bound_formula():
    h = HoelderData(1.0, ((1.0, 1.0, 1.0),), 1.0)
    got = refinement_bound(h, 1.0, 0.25)
    assert got == pytest.approx(constant_K(h) * math.e * math.exp(0.25) * 0.25, rel=1e-12)
