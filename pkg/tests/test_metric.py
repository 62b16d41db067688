import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sewkit import (
    INFINITE,
    DomainMismatch,
    ExtDistance,
    InsufficientProbes,
    MetricSpace,
    ProbedMap,
    chain_composition_bound,
    compose,
    composition_distance_bound,
    lipschitz_estimate,
    map_distance,
    map_distance_value,
    path_length,
    real_line,
)
from sewkit.metric import euclidean, metric_axiom_violations


def line(probes, name="line"):
    return MetricSpace(name, euclidean, tuple(probes))


def affine(space, a, b):
    return ProbedMap(space, space, lambda x: a * x + b)


# --- ExtDistance ------------------------------------------------------------

def test_ext_distance_orders_and_saturates():
    assert INFINITE > ExtDistance(1e300)
    assert ExtDistance(2.0) > ExtDistance(1.0)
    assert (ExtDistance(1.0) + ExtDistance(2.0)).as_float() == 3.0
    assert (ExtDistance(1.0) + INFINITE).infinite
    assert (INFINITE + INFINITE).infinite
    with pytest.raises(ValueError):
        ExtDistance(-0.5)


def test_infinite_distance_between_galaxies():
    # two-galaxy extended space: points on either side of 0 are infinitely far
    def two_galaxy(a, b):
        return abs(a - b) if (a >= 0) == (b >= 0) else math.inf

    space = MetricSpace("galaxies", two_galaxy, (-2.0, -1.0, 1.0, 2.0))
    assert space.distance(-1.0, 1.0).infinite
    assert path_length((-2.0, -1.0, 1.0), space).infinite
    f = ProbedMap(space, space, lambda x: x)
    g = ProbedMap(space, space, lambda x: -x)
    assert map_distance(f, g).infinite


# --- map_distance -----------------------------------------------------------

def test_map_distance_examples():
    space = line((0.0, 1.0))
    f = affine(space, 1.0, 0.0)
    assert map_distance(f, f).as_float() == 0.0
    g = affine(space, 1.0, 3.0)
    assert map_distance(f, g).as_float() == 3.0
    space3 = line((0.0, 0.5, 1.0))
    sq = ProbedMap(space3, space3, lambda x: x * x)
    ident = ProbedMap(space3, space3, lambda x: x)
    assert map_distance(sq, ident).as_float() == pytest.approx(0.25, abs=1e-15)


def test_map_distance_rejects_mismatched_spaces():
    f = affine(line((0.0, 1.0), "a"), 1.0, 0.0)
    g = affine(line((0.0, 1.0), "b"), 1.0, 0.0)
    with pytest.raises(DomainMismatch):
        map_distance(f, g)


@given(
    st.tuples(*[st.floats(-3, 3) for _ in range(6)]),
)
def test_map_distance_pseudo_metric(coeffs):
    a1, b1, a2, b2, a3, b3 = coeffs
    space = line((-1.0, -0.25, 0.5, 1.0))
    f, g, h = affine(space, a1, b1), affine(space, a2, b2), affine(space, a3, b3)
    dfg = map_distance_value(f, g)
    dgf = map_distance_value(g, f)
    assert dfg == pytest.approx(dgf, abs=1e-12)
    assert map_distance_value(f, f) == 0.0
    assert map_distance_value(f, h) <= dfg + map_distance_value(g, h) + 1e-12


# --- Lipschitz estimate and composition bounds -------------------------------

def test_lipschitz_estimate_examples():
    assert lipschitz_estimate(affine(line((0.0, 1.0, 2.0)), 1.0, 0.0)) == pytest.approx(1.0)
    assert lipschitz_estimate(affine(line((0.0, 1.0)), 3.0, 0.0)) == pytest.approx(3.0)
    space = line((0.0, math.pi / 2, math.pi))
    sin_map = ProbedMap(space, space, math.sin)
    assert lipschitz_estimate(sin_map) == pytest.approx(2.0 / math.pi, abs=1e-12)


def test_lipschitz_estimate_needs_two_probes():
    space = MetricSpace("pt", euclidean, (1.0,))
    with pytest.raises(InsufficientProbes):
        lipschitz_estimate(ProbedMap(space, space, lambda x: x))


def test_composition_distance_bound():
    assert composition_distance_bound(0.0, 1.0, 0.0) == 0.0
    assert composition_distance_bound(0.1, 2.0, 0.05) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        composition_distance_bound(-0.1, 1.0, 0.0)


def test_chain_composition_bound_unit_lipschitz():
    # three factors with unit Lipschitz constants: the gaps just add up
    assert chain_composition_bound([0.1, 0.2, 0.3], [1.0, 1.0, 1.0]) == pytest.approx(0.6)
    assert chain_composition_bound([1.0, 1.0], [2.0, 2.0]) == pytest.approx(3.0)


@given(
    st.tuples(*([st.floats(-0.5, 0.5) for _ in range(4)] + [st.floats(-2, 2) for _ in range(4)])),
)
@settings(max_examples=200)
def test_composition_bound_dominates_measured(coeffs):
    # inner maps keep the probe hull [-1,1] invariant, so the probed middle
    # sup distance (attained at the probes for affine gaps) is an honest sup
    a1, b1, a2, b2, c1, d1, c2, d2 = coeffs
    space = line((-1.0, 0.0, 0.5, 1.0))
    f, f2 = affine(space, a1, b1), affine(space, a2, b2)
    g, g2 = affine(space, c1, d1), affine(space, c2, d2)
    lhs = map_distance_value(compose(g, f), compose(g2, f2))
    # |c2| is the analytic Lipschitz constant of the primed outer map
    rhs = composition_distance_bound(
        map_distance_value(g, g2), abs(c2), map_distance_value(f, f2)
    )
    assert lhs <= rhs + 1e-9


# --- path length ------------------------------------------------------------

def test_path_length_examples():
    plane = MetricSpace("plane", euclidean, ((0.0, 0.0),))
    assert path_length([(0.0, 0.0)], plane).as_float() == 0.0
    l_shape = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]
    assert path_length(l_shape, plane).as_float() == pytest.approx(2.0)
    circle = [
        (math.cos(a), math.sin(a))
        for a in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi)
    ]
    assert path_length(circle, plane).as_float() == pytest.approx(4.0 * math.sqrt(2.0))
    with pytest.raises(ValueError):
        path_length([], plane)


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=8), st.integers(0, 6), st.floats(0, 1))
def test_path_length_monotone_under_refinement(samples, idx, w):
    space = line((0.0,), "r")
    base = path_length(samples, space).as_float()
    i = min(idx, len(samples) - 2)
    inserted = samples[: i + 1] + [samples[i] + w * (samples[i + 1] - samples[i])] + samples[i + 1 :]
    assert path_length(inserted, space).as_float() >= base - 1e-12


def test_builtin_spaces_satisfy_metric_axioms():
    assert metric_axiom_violations(real_line(-1, 1, 5)) == []
