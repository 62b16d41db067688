"""Extended metric spaces, probed map spaces and Lipschitz composition bounds.

Distances are allowed to be infinite (tagged, never a NaN sentinel).  Sup
distances between maps and Lipschitz constants are approximated from finite
probe sets, so every probed quantity is a lower bound for the true one;
analytic upper bounds always come from declared model data, never from here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .errors import DomainMismatch, InsufficientProbes

Point = Any  # a float, or a tuple of floats


# ---------------------------------------------------------------------------
# point helpers (floats and tuples share one code path)

def p_sub(a: Point, b: Point) -> Point:
    if isinstance(a, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return a - b


def p_add(a: Point, b: Point) -> Point:
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def p_scale(a: Point, c: float) -> Point:
    if isinstance(a, tuple):
        return tuple(c * x for x in a)
    return c * a


def p_lerp(a: Point, b: Point, w: float) -> Point:
    """(1-w)*a + w*b, componentwise."""
    if isinstance(a, tuple):
        return tuple((1.0 - w) * x + w * y for x, y in zip(a, b))
    return (1.0 - w) * a + w * b


def p_axpy(b: Point, a: Point, coef: float) -> Point:
    """b + coef*(b - a); geometric-tail extrapolation step."""
    if coef == 0.0:
        return b
    if isinstance(b, tuple):
        return tuple(x + coef * (x - y) for x, y in zip(b, a))
    return b + coef * (b - a)


def p_norm(a: Point) -> float:
    if isinstance(a, tuple):
        if len(a) == 2:
            return math.hypot(a[0], a[1])
        return math.sqrt(sum(x * x for x in a))
    return abs(a)


def euclidean(a: Point, b: Point) -> float:
    if isinstance(a, tuple):
        if len(a) == 2:
            return math.hypot(a[0] - b[0], a[1] - b[1])
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    return abs(a - b)


# ---------------------------------------------------------------------------
# extended distances

@dataclass(frozen=True)
class ExtDistance:
    """A non-negative distance value that may be the tagged value Infinite."""

    value: float = 0.0
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite:
            if not math.isfinite(self.value) or self.value < 0.0:
                raise ValueError(f"finite distance must be >= 0, got {self.value}")

    def as_float(self) -> float:
        return math.inf if self.infinite else self.value

    def __add__(self, other: "ExtDistance | float") -> "ExtDistance":
        o = other if isinstance(other, ExtDistance) else ExtDistance(float(other))
        if self.infinite or o.infinite:
            return INFINITE
        return ExtDistance(self.value + o.value)

    __radd__ = __add__

    def _cmp_key(self) -> float:
        return math.inf if self.infinite else self.value

    def __lt__(self, other):
        o = other._cmp_key() if isinstance(other, ExtDistance) else float(other)
        return self._cmp_key() < o

    def __le__(self, other):
        o = other._cmp_key() if isinstance(other, ExtDistance) else float(other)
        return self._cmp_key() <= o

    def __gt__(self, other):
        o = other._cmp_key() if isinstance(other, ExtDistance) else float(other)
        return self._cmp_key() > o

    def __ge__(self, other):
        o = other._cmp_key() if isinstance(other, ExtDistance) else float(other)
        return self._cmp_key() >= o


INFINITE = ExtDistance(0.0, infinite=True)


# ---------------------------------------------------------------------------
# spaces and probed maps

@dataclass(frozen=True)
class MetricSpace:
    """A metric space probed at finitely many points.

    ``metric`` returns a float and may return ``math.inf`` (extended metric);
    ``distance`` wraps it as an :class:`ExtDistance`.  Spaces are compared by
    name when maps are composed or measured against each other.
    """

    name: str
    metric: Callable[[Point, Point], float]
    probes: tuple[Point, ...]

    def __post_init__(self):
        if not self.probes:
            raise ValueError("probe set must be non-empty")

    def distance(self, a: Point, b: Point) -> ExtDistance:
        d = self.metric(a, b)
        return INFINITE if d == math.inf else ExtDistance(d)


@dataclass(frozen=True)
class ProbedMap:
    """A map between probed metric spaces, evaluated via ``eval``."""

    source: MetricSpace
    target: MetricSpace
    eval: Callable[[Point], Point]

    def __call__(self, p: Point) -> Point:
        return self.eval(p)


def identity_map(space: MetricSpace) -> ProbedMap:
    return ProbedMap(space, space, lambda p: p)


def compose(outer: ProbedMap, inner: ProbedMap) -> ProbedMap:
    """outer after inner (function composition)."""
    if inner.target.name != outer.source.name:
        raise DomainMismatch(
            f"cannot compose: inner target {inner.target.name!r} "
            f"!= outer source {outer.source.name!r}"
        )
    f, g = outer.eval, inner.eval
    return ProbedMap(inner.source, outer.target, lambda p: f(g(p)))


def compose_chain(maps: Sequence[ProbedMap]) -> ProbedMap:
    """Compose maps[0] o maps[1] o ... o maps[-1]; the last one acts first."""
    if not maps:
        raise ValueError("need at least one map")
    if len(maps) == 1:
        return maps[0]
    for left, right in zip(maps, maps[1:]):
        if right.target.name != left.source.name:
            raise DomainMismatch("chain is not composable")
    evals = tuple(m.eval for m in maps)

    def run(p: Point) -> Point:
        for e in reversed(evals):
            p = e(p)
        return p

    return ProbedMap(maps[-1].source, maps[0].target, run)


# ---------------------------------------------------------------------------
# probed sup distance and Lipschitz estimate

def map_distance(f: ProbedMap, g: ProbedMap) -> ExtDistance:
    """Sup distance of two maps over the source probe set (lower bound)."""
    if f.source.name != g.source.name or f.target.name != g.target.name:
        raise DomainMismatch(
            f"maps live in different spaces: ({f.source.name}->{f.target.name}) "
            f"vs ({g.source.name}->{g.target.name})"
        )
    metric = f.target.metric
    fe, ge = f.eval, g.eval
    worst = 0.0
    for p in f.source.probes:
        d = metric(fe(p), ge(p))
        if d == math.inf:
            return INFINITE
        if d > worst:
            worst = d
    return ExtDistance(worst)


def map_distance_value(f: ProbedMap, g: ProbedMap) -> float:
    return map_distance(f, g).as_float()


def lipschitz_estimate(f: ProbedMap) -> float:
    """Max slope over distinct probe pairs; a lower bound on Lip(f)."""
    probes = f.source.probes
    metric_s = f.source.metric
    metric_t = f.target.metric
    images = [f.eval(p) for p in probes]
    best = 0.0
    pairs = 0
    for i in range(len(probes)):
        for j in range(i + 1, len(probes)):
            ds = metric_s(probes[i], probes[j])
            if ds == 0.0:
                continue
            pairs += 1
            if ds == math.inf:
                continue
            q = metric_t(images[i], images[j]) / ds
            if q > best:
                best = q
    if pairs == 0:
        raise InsufficientProbes("need at least two distinct probe points")
    return best


def composition_distance_bound(d_gg: float, lip_gprime: float, d_ff: float) -> float:
    """Bound d(g o f, g' o f') <= d(g, g') + Lip(g') * d(f, f')."""
    if d_gg < 0 or lip_gprime < 0 or d_ff < 0:
        raise ValueError("composition bound inputs must be non-negative")
    return d_gg + lip_gprime * d_ff


def chain_composition_bound(gaps: Sequence[float], lips: Sequence[float]) -> float:
    """Bound for an r-fold composition gap.

    ``gaps[j]`` is the distance between the j-th factors, ``lips[j]`` an upper
    bound on the Lipschitz constant of the j-th primed factor.  Returns
    sum_j (prod_{i<j} lips[i]) * gaps[j].
    """
    if len(gaps) != len(lips):
        raise ValueError("gaps and lips must have equal length")
    if any(v < 0 for v in gaps) or any(v < 0 for v in lips):
        raise ValueError("chain bound inputs must be non-negative")
    total = 0.0
    prefix = 1.0
    for gap, lip in zip(gaps, lips):
        total += prefix * gap
        prefix *= lip
    return total


def path_length(samples: Sequence[Point], space: MetricSpace) -> ExtDistance:
    """Length of the sampled polygonal path (non-decreasing under refinement)."""
    if len(samples) == 0:
        raise ValueError("need at least one sample point")
    total = ExtDistance(0.0)
    for a, b in zip(samples, samples[1:]):
        total = total + space.distance(a, b)
    return total


def metric_axiom_violations(space: MetricSpace, tol: float = 1e-12) -> list[str]:
    """Check identity/symmetry/triangle on all probe triples; empty if clean."""
    out: list[str] = []
    pts = space.probes
    m = space.metric
    for p in pts:
        if m(p, p) > tol:
            out.append(f"d(x,x) != 0 at {p!r}")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(m(pts[i], pts[j]) - m(pts[j], pts[i])) > tol:
                out.append(f"asymmetric at probes {i},{j}")
    for i in range(len(pts)):
        for j in range(len(pts)):
            for k in range(len(pts)):
                if m(pts[i], pts[k]) > m(pts[i], pts[j]) + m(pts[j], pts[k]) + tol:
                    out.append(f"triangle fails at probes {i},{j},{k}")
    return out


# ---------------------------------------------------------------------------
# built-in spaces: uniform grids on intervals, boxes and circles

def real_line(lo: float = -1.0, hi: float = 1.0, n: int = 5, name: str | None = None) -> MetricSpace:
    if n < 1:
        raise ValueError("need n >= 1 probes")
    if n == 1:
        probes: tuple[Point, ...] = ((lo + hi) / 2.0,)
    else:
        step = (hi - lo) / (n - 1)
        probes = tuple(lo + i * step for i in range(n))
    return MetricSpace(name or f"real[{lo},{hi}]x{n}", euclidean, probes)


def plane_grid(radius: float = 1.0, n: int = 3, name: str | None = None) -> MetricSpace:
    """Euclidean plane probed on a uniform n-by-n grid of the centered box."""
    if n < 1:
        raise ValueError("need n >= 1 probes per axis")
    if n == 1:
        axis = [0.0]
    else:
        step = 2.0 * radius / (n - 1)
        axis = [-radius + i * step for i in range(n)]
    probes = tuple((x, y) for x in axis for y in axis)
    return MetricSpace(name or f"plane-grid{n}r{radius}", euclidean, probes)


def circle_fiber(n: int = 8, radius: float = 1.0, name: str | None = None) -> MetricSpace:
    """Euclidean plane probed on n equally spaced circle points."""
    if n < 2:
        raise ValueError("need n >= 2 probes")
    probes = tuple(
        (radius * math.cos(2.0 * math.pi * j / n), radius * math.sin(2.0 * math.pi * j / n))
        for j in range(n)
    )
    return MetricSpace(name or f"plane-circle{n}", euclidean, probes)
