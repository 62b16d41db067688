"""Piecewise-linear Lipschitz paths in a parameter space.

Reverse-order concatenation (g . g2 runs g2 first, then g), reversal,
subpaths, backtrack cancellation (a computable stand-in for thin
equivalence on PL data), pullback of parameter-space flows along a path,
and a groupoid-axiom report for sewn holonomies.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConcatMismatch, ModelDomainError
from .flows import ApproxFlowModel
from .metric import Point, ProbedMap, euclidean, p_lerp, p_sub


def _dot(a: Point, b: Point) -> float:
    if isinstance(a, tuple):
        return sum(x * y for x, y in zip(a, b))
    return a * b


def _cross2(a: Point, b: Point) -> float:
    if isinstance(a, tuple) and len(a) == 2:
        return a[0] * b[1] - a[1] * b[0]
    return 0.0


def _norm(a: Point) -> float:
    if isinstance(a, tuple):
        return math.sqrt(sum(x * x for x in a))
    return abs(a)


@dataclass(frozen=True)
class LipPath:
    """A PL path on [0,1]: breakpoints 0 = u_0 < ... < u_m = 1 and m+1 points."""

    breaks: tuple[float, ...]
    points: tuple[Point, ...]
    lip_norm: float = field(init=False)

    def __post_init__(self):
        if len(self.breaks) != len(self.points):
            raise ValueError("breaks and points must have equal length")
        if len(self.breaks) < 2:
            raise ValueError("need at least two breakpoints")
        if self.breaks[0] != 0.0 or self.breaks[-1] != 1.0:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        lip = 0.0
        for i in range(len(self.points) - 1):
            speed = euclidean(self.points[i], self.points[i + 1]) / (
                self.breaks[i + 1] - self.breaks[i]
            )
            if speed > lip:
                lip = speed
        object.__setattr__(self, "lip_norm", lip)

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    @property
    def length(self) -> float:
        return sum(euclidean(a, b) for a, b in zip(self.points, self.points[1:]))

    def at(self, u: float) -> Point:
        if u <= 0.0:
            return self.points[0]
        if u >= 1.0:
            return self.points[-1]
        i = bisect_right(self.breaks, u) - 1
        w = (u - self.breaks[i]) / (self.breaks[i + 1] - self.breaks[i])
        return p_lerp(self.points[i], self.points[i + 1], w)


def polyline(points: Sequence[Point], breaks: Sequence[float] | None = None) -> LipPath:
    if breaks is None:
        m = len(points) - 1
        breaks = tuple(j / m for j in range(m + 1))
    return LipPath(tuple(breaks), tuple(points))


def constant_path(p: Point) -> LipPath:
    return LipPath((0.0, 1.0), (p, p))


def segment_path(a: Point, b: Point) -> LipPath:
    return LipPath((0.0, 1.0), (a, b))


def arc_path(
    radius: float, angle0: float, angle1: float, segments: int = 64, center: Point = (0.0, 0.0)
) -> LipPath:
    """PL sampling of a circular arc."""
    pts = tuple(
        (
            center[0] + radius * math.cos(angle0 + (angle1 - angle0) * j / segments),
            center[1] + radius * math.sin(angle0 + (angle1 - angle0) * j / segments),
        )
        for j in range(segments + 1)
    )
    return polyline(pts)


def circle_path(radius: float = 1.0, turns: float = 1.0, segments: int = 64) -> LipPath:
    return arc_path(radius, 0.0, 2.0 * math.pi * turns, segments)


def ellipse_arc_path(
    rx: float, ry: float, angle0: float, angle1: float, segments: int = 64
) -> LipPath:
    """PL sampling of an elliptical arc at uniform arc length (constant speed)."""
    fine = max(segments * 32, 1024)
    ang = [angle0 + (angle1 - angle0) * j / fine for j in range(fine + 1)]
    pts = [(rx * math.cos(a), ry * math.sin(a)) for a in ang]
    cum = [0.0]
    for a, b in zip(pts, pts[1:]):
        cum.append(cum[-1] + euclidean(a, b))
    total = cum[-1]
    out: list[Point] = [pts[0]]
    i = 0
    for j in range(1, segments):
        target = total * j / segments
        while cum[i + 1] < target:
            i += 1
        w = (target - cum[i]) / (cum[i + 1] - cum[i])
        out.append(p_lerp(pts[i], pts[i + 1], w))
    out.append(pts[-1])
    return polyline(tuple(out))


def square_loop(center: Point = (2.0, 0.0), half_side: float = 0.5) -> LipPath:
    cx, cy = center
    h = half_side
    pts = (
        (cx + h, cy - h),
        (cx + h, cy + h),
        (cx - h, cy + h),
        (cx - h, cy - h),
        (cx + h, cy - h),
    )
    return polyline(pts)


def path_to_csv(g: LipPath, file_path: str) -> None:
    """Serialize a PL path as CSV with columns u, x0, x1, ..."""
    import csv
    from pathlib import Path as _P

    first = g.points[0]
    dim = len(first) if isinstance(first, tuple) else 1
    with _P(file_path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["u"] + [f"x{i}" for i in range(dim)])
        for u, p in zip(g.breaks, g.points):
            coords = p if isinstance(p, tuple) else (p,)
            writer.writerow([f"{u:.17g}"] + [f"{c:.17g}" for c in coords])


def path_from_csv(file_path: str) -> LipPath:
    """Read a PL path written by :func:`path_to_csv`."""
    import csv
    from pathlib import Path as _P

    with _P(file_path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    dim = len(rows[0]) - 1
    breaks = tuple(float(r[0]) for r in rows[1:])
    if dim == 1:
        points: tuple[Point, ...] = tuple(float(r[1]) for r in rows[1:])
    else:
        points = tuple(tuple(float(c) for c in r[1:]) for r in rows[1:])
    return LipPath(breaks, points)


# ---------------------------------------------------------------------------
# groupoid operations on paths

def concat_reverse_order(g: LipPath, g2: LipPath, tol: float = 1e-12) -> LipPath:
    """g . g2: run g2 on [0, 1/2], then g on [1/2, 1]; needs g(0) == g2(1)."""
    if euclidean(g.start, g2.end) > tol:
        raise ConcatMismatch(
            f"g starts at {g.start} but g2 ends at {g2.end}; cannot concatenate"
        )
    breaks = [0.5 * u for u in g2.breaks]
    points = list(g2.points)
    breaks.extend(0.5 + 0.5 * u for u in g.breaks[1:])
    points.extend(g.points[1:])
    return LipPath(tuple(breaks), tuple(points))


def subpath(g: LipPath, s: float, t: float) -> LipPath:
    """The path u -> g(s*u + t*(1-u)): runs from g(t) to g(s).

    subpath(g, 1, 0) is g itself and subpath(g, 0, 1) is g reversed;
    Lip(subpath) <= |t - s| * Lip(g).
    """
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise ValueError("s and t must lie in [0, 1]")
    if s == t:
        return constant_path(g.at(t))
    lo, hi = (t, s) if t < s else (s, t)
    inner = [u for u in g.breaks if lo < u < hi]
    params = [t, *inner, s] if t < s else [t, *reversed(inner), s]
    breaks = tuple((w - t) / (s - t) for w in params)
    points = tuple(g.at(w) for w in params)
    return LipPath(breaks, points)


def reverse_path(g: LipPath) -> LipPath:
    return subpath(g, 0.0, 1.0)


def reparametrize(g: LipPath, phi_breaks: Sequence[float], phi_values: Sequence[float]) -> LipPath:
    """g composed with a monotone PL reparametrization of [0,1]."""
    phi = LipPath(tuple(phi_breaks), tuple(float(v) for v in phi_values))
    if phi.points[0] != 0.0 or phi.points[-1] != 1.0:
        raise ValueError("reparametrization must fix the endpoints")
    pulled = [u for u in phi.breaks]
    for target in g.breaks[1:-1]:
        # invert the PL map on each monotone piece
        for i in range(len(phi.breaks) - 1):
            v0, v1 = phi.points[i], phi.points[i + 1]
            if v0 < target <= v1:
                u = phi.breaks[i] + (target - v0) / (v1 - v0) * (
                    phi.breaks[i + 1] - phi.breaks[i]
                )
                pulled.append(u)
    breaks = tuple(sorted(set(pulled)))
    points = tuple(g.at(phi.at(u)) for u in breaks)
    return LipPath(breaks, points)


# ---------------------------------------------------------------------------
# PL thin reduction: cancel exact backtracks

def _is_backtrack(p: Point, q: Point, r: Point, tol: float) -> bool:
    """True when the leg q -> r runs backward along the segment p -> q."""
    v = p_sub(q, p)
    w = p_sub(r, q)
    lv, lw = _norm(v), _norm(w)
    if lv <= tol or lw <= tol:
        return False
    if abs(_cross2(v, w)) > tol * max(lv, lw, 1.0):
        return False
    if _dot(v, w) >= 0.0:
        return False
    return lw <= lv + tol


def pl_thin_reduce(g: LipPath, tol: float = 1e-9) -> LipPath:
    """Cancel adjacent backtracking leg pairs until none remain.

    Preserves endpoints, never increases length or Lipschitz norm, and is
    idempotent.  Only exact PL backtracks (within tol) are cancelled.
    """
    breaks = list(g.breaks)
    points = list(g.points)
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 2 <= len(points) - 1:
            if _is_backtrack(points[i], points[i + 1], points[i + 2], tol):
                del points[i + 1]
                del breaks[i + 1]
                changed = True
                if i > 0:
                    i -= 1
            else:
                i += 1
        # merge repeated consecutive points (pauses are thin-trivial)
        j = 1
        while j < len(points) - 1:
            if euclidean(points[j], points[j - 1]) <= tol:
                del points[j]
                del breaks[j]
                changed = True
            else:
                j += 1
        if len(points) > 2 and euclidean(points[-1], points[-2]) <= tol:
            del points[-2]
            del breaks[-2]
            changed = True
    if len(points) == 1:
        return constant_path(points[0])
    breaks[0], breaks[-1] = 0.0, 1.0
    return LipPath(tuple(breaks), tuple(points))


# ---------------------------------------------------------------------------
# pullback of a parameter-space flow along a path

def pullback_flow(model: ApproxFlowModel, g: LipPath) -> ApproxFlowModel:
    """Interval-indexed flow (s,t) -> mu(g(s), g(t)).

    The Lipschitz slope rescales to L*Lip(g) and every defect term picks up
    Lip(g)**(a+b); knitting-mode data pulls back to sewing mode one order up.
    """
    lip = g.lip_norm
    mu = model.mu

    def pulled_mu(s: float, t: float) -> ProbedMap:
        try:
            return mu(g.at(s), g.at(t))
        except ModelDomainError as exc:
            raise ModelDomainError(f"pullback of {model.name} along path: {exc}") from exc

    angle = None
    if model.angle is not None:
        base_angle = model.angle
        angle = lambda s, t: base_angle(g.at(s), g.at(t))

    step = None
    if model.max_param_step is not None and lip > 0.0:
        step = model.max_param_step / lip

    return ApproxFlowModel(
        name=f"pullback({model.name})",
        space_at=lambda t: model.space_at(g.at(t)),
        mu=pulled_mu,
        hoelder=model.hoelder.pulled_back(lip),
        max_param_step=step,
        angle=angle,
    )


# ---------------------------------------------------------------------------
# groupoid-axiom report for sewn holonomies

@dataclass
class GroupoidCheck:
    axiom: str
    detail: str
    measured: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.measured <= self.budget


@dataclass
class GroupoidReport:
    checks: list[GroupoidCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list[GroupoidCheck]:
        return [c for c in self.checks if not c.ok]


def groupoid_axiom_check(
    model: ApproxFlowModel,
    paths: Sequence[LipPath],
    tol: float = 1e-8,
    budget: float | None = None,
) -> GroupoidReport:
    """Check identity, inverse, composition and associativity on sewn holonomies.

    Violations are reported, not raised.  ``budget`` defaults to 3*tol plus a
    rounding floor.
    """
    from .metric import identity_map, map_distance_value
    from .sewing import sew

    if budget is None:
        budget = 3.0 * tol + 1e-9
    checks: list[GroupoidCheck] = []

    def holonomy_map(p: LipPath) -> ProbedMap:
        flow, _ = sew(pullback_flow(model, p), 0.0, 1.0, tol)
        return flow

    maps = [holonomy_map(p) for p in paths]

    for idx, (p, m) in enumerate(zip(paths, maps)):
        padded = concat_reverse_order(p, constant_path(p.start))
        d = map_distance_value(holonomy_map(padded), m)
        checks.append(GroupoidCheck("identity", f"path {idx} . const", d, budget))

        inv = reverse_path(p)
        inv_map = holonomy_map(inv)
        ie, me = inv_map.eval, m.eval
        round_trip = ProbedMap(m.source, inv_map.target, lambda q, _a=ie, _b=me: _a(_b(q)))
        d = map_distance_value(round_trip, identity_map(m.source))
        checks.append(GroupoidCheck("inverse", f"path {idx}", d, budget))

    for i, gi in enumerate(paths):
        for j, gj in enumerate(paths):
            if euclidean(gi.start, gj.end) > 1e-12:
                continue
            combined = holonomy_map(concat_reverse_order(gi, gj))
            ge, he = maps[i].eval, maps[j].eval
            two_step = ProbedMap(
                maps[j].source, maps[i].target, lambda q, _a=ge, _b=he: _a(_b(q))
            )
            d = map_distance_value(combined, two_step)
            checks.append(GroupoidCheck("composition", f"paths {i}.{j}", d, budget))
            for k, gk in enumerate(paths):
                if euclidean(gj.start, gk.end) > 1e-12:
                    continue
                left = holonomy_map(concat_reverse_order(concat_reverse_order(gi, gj), gk))
                right = holonomy_map(concat_reverse_order(gi, concat_reverse_order(gj, gk)))
                d = map_distance_value(left, right)
                checks.append(
                    GroupoidCheck("associativity", f"paths ({i}.{j}).{k}", d, 2.0 * budget)
                )
    return GroupoidReport(checks)
