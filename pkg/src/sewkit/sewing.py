"""The sewing engine: composites over subdivisions, refinement to the limit
flow, explicit constants, and the flow-law / inverse / four-point checks.

``sew`` iterates dyadic refinement of a regular base subdivision.  Raw
successive distances obey the refinement (mesh) bound and decay like
mesh**epsilon; a geometric-tail extrapolation of the probe values supplies
the returned limit map and its error estimate, and raw and extrapolated
quantities are recorded separately in the certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BoundViolation, ModelDomainError, NonConvergence, NotARefinement
from .flows import MODE_SEWING, ApproxFlowModel, HoelderData
from .metric import Point, ProbedMap, compose_chain, identity_map, map_distance_value, p_axpy
from .subdivision import Subdivision, dyadic_refine, mesh, refines, regular, reverse

#: additive slack absorbing float rounding in certified inequalities
BOUND_SLACK = 1e-9

#: ratios above this are treated as stalled (no extrapolation)
MAX_CONTRACTION = 0.95


def within_bound(lhs: float, rhs: float, slack: float = BOUND_SLACK) -> bool:
    return lhs <= rhs + slack * (1.0 + rhs)


@lru_cache(maxsize=None)
def zeta(s: float, tol: float = 1e-12) -> float:
    """Riemann zeta via partial sums plus an integral tail correction.

    N is chosen so the bracket between the upper and lower integral tail
    bounds is below tol; the bracket midpoint is added, leaving an error
    below tol/2.
    """
    if s <= 1.0:
        raise ValueError("zeta partial sums diverge for s <= 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    n = max(8, int(math.ceil(tol ** (-1.0 / s))))
    while (n ** (1.0 - s) - (n + 1.0) ** (1.0 - s)) / (s - 1.0) >= tol:
        n *= 2
    total = 0.0
    chunk = 1 << 20
    for lo in range(1, n + 1, chunk):
        hi = min(n, lo + chunk - 1)
        block = np.arange(lo, hi + 1, dtype=np.float64)
        total += float(np.sum(block ** (-s)))
    tail = (n ** (1.0 - s) + (n + 1.0) ** (1.0 - s)) / (2.0 * (s - 1.0))
    return total + tail


def constant_K(h: HoelderData, zeta_tol: float = 1e-12) -> float:
    """K = 2**(1+eps) * (sum C_i) * zeta(1+eps), sewing mode only."""
    h.require_mode(MODE_SEWING, "constant_K (the degree 2+eps variant lives in knitting)")
    return 2.0 ** (1.0 + h.epsilon) * h.c_total * zeta(1.0 + h.epsilon, zeta_tol)


def c_prime(h: HoelderData, span: float) -> float:
    """C' = 2**(1+eps) * g(span) * (sum C_i) * zeta(1+eps)."""
    return constant_K(h) * h.g(span)


def refinement_bound(h: HoelderData, span: float, mesh_value: float) -> float:
    """Bound on d(mu^I, mu^J) for any J finer than I with mesh(I)=mesh_value."""
    if mesh_value == 0.0:
        return 0.0
    return constant_K(h) * h.g(span) * h.g(mesh_value) * mesh_value**h.epsilon * span


def corollary_bound(h: HoelderData, span: float) -> float:
    """Bound on d(mu_st, limit flow): K * g(span) * span**(1+eps)."""
    return constant_K(h) * h.g(span) * span ** (1.0 + h.epsilon)


# ---------------------------------------------------------------------------
# composites

def compose_along(model: ApproxFlowModel, subdiv: Subdivision) -> ProbedMap:
    """mu composed left to right along the subdivision points.

    The trivial subdivision returns mu(start, end) itself.
    """
    pts = subdiv.points
    if len(pts) <= 2:
        return model.mu(subdiv.start, subdiv.end)
    factors = [model.mu(a, b) for a, b in zip(pts, pts[1:])]
    return compose_chain(factors)


def _chain_evals(model: ApproxFlowModel, subdiv: Subdivision) -> list[Callable[[Point], Point]]:
    pts = subdiv.points
    if len(pts) == 1:
        return [model.mu(subdiv.start, subdiv.end).eval]
    return [model.mu(a, b).eval for a, b in zip(pts, pts[1:])]


def _run_chain(evals: Sequence[Callable[[Point], Point]], p: Point) -> Point:
    for e in reversed(evals):
        p = e(p)
    return p


# ---------------------------------------------------------------------------
# the sewing iteration

@dataclass(frozen=True)
class SewLevel:
    level: int
    intervals: int
    mesh: float
    successive: float | None          # raw distance to the previous level
    accel_successive: float | None    # distance between successive limit estimates
    refine_bound: float               # bound the raw successive distance must obey
    value: float | None               # optional scalar readout of the raw composite


@dataclass
class SewCertificate:
    """Record of one sewing run.

    ``claimed_bound`` is K*g(span)*span**(1+eps); ``mu_distance`` the probed
    distance from mu(s,t) to the finest composite, with ``tail_estimate`` the
    residual geometric tail beyond the finest level reported separately.
    ``mu_distance`` is None when the model cannot evaluate mu(s,t) directly.
    All g-dependent bounds are conditional on the declared growth function.
    """

    K: float
    C_prime: float
    epsilon: float
    levels: list[SewLevel]
    claimed_bound: float
    tail_estimate: float
    mu_distance: float | None
    mu_bound_ok: bool | None
    converged: bool
    stop_reason: str
    final_subdivision: Subdivision
    base_k: int
    ratio_estimate: float | None
    limit_value: float | None
    g_conditional: bool = True

    @property
    def level_log(self) -> list[tuple[int, float, float]]:
        return [(r.level, r.mesh, 0.0 if r.successive is None else r.successive) for r in self.levels]


def _auto_base_k(model: ApproxFlowModel, span: float, base_k: int) -> int:
    k = max(1, base_k)
    step = model.max_param_step
    if step is not None and step > 0.0 and span > 0.0:
        while span / k > step:
            k *= 2
    return k


def sew(
    model: ApproxFlowModel,
    s: float,
    t: float,
    tol: float,
    max_level: int = 24,
    base_k: int = 1,
    value_fn: Callable[[ProbedMap], float] | None = None,
    slack: float = BOUND_SLACK,
) -> tuple[ProbedMap, SewCertificate]:
    """Sew the approximate flow between s and t into its limit flow map.

    Starting from the regular subdivision with ``base_k`` intervals (grown
    automatically when the model caps its parameter step), composites over
    dyadic refinements are compared level to level.  Iteration stops when the
    extrapolated successive distance drops below tol, or when the a-priori
    refinement bound at the current mesh is already below tol.  With tol <= 0
    the full ladder up to max_level is run unconditionally.

    Returns the limit map (geometric-tail extrapolation of the finest two
    composites) and a :class:`SewCertificate`.  Raises
    :class:`NonConvergence` carrying the certificate when max_level is hit,
    and :class:`BoundViolation` if a recorded distance exceeds its bound.
    """
    h = model.hoelder
    h.require_mode(MODE_SEWING, "sew (pull knitting-mode models back along a path first)")
    span = abs(t - s)
    source = model.space_at(t)
    target = model.space_at(s)
    probes = source.probes
    metric = target.metric

    k0 = _auto_base_k(model, span, base_k)
    subdiv = regular(s, t, k0)
    evals = _chain_evals(model, subdiv)
    vals = tuple(_run_chain(evals, p) for p in probes)

    def level_value(chain) -> float | None:
        if value_fn is None:
            return None
        return value_fn(ProbedMap(source, target, lambda p, _c=tuple(chain): _run_chain(_c, p)))

    levels = [SewLevel(0, subdiv.k, mesh(subdiv), None, None, refinement_bound(h, span, mesh(subdiv)), level_value(evals))]

    prev_evals = evals
    prev_vals = vals
    prev_accel = vals
    prev_subdiv = subdiv
    d_prev: float | None = None
    rho: float | None = None
    coef = 0.0
    tail = math.inf
    converged = False
    reason = ""
    # data backing the returned limit map: coarser chain, finest chain,
    # extrapolation coefficient, and the extrapolated probe values
    final_chains: tuple[tuple, tuple] | None = None
    final_coef = 0.0
    final_vals = vals

    if tol > 0.0 and refinement_bound(h, span, mesh(subdiv)) < tol:
        converged = True
        reason = "a-priori refinement bound below tol at base level"
        tail = refinement_bound(h, span, mesh(subdiv))

    level = 0
    while not converged and level < max_level:
        level += 1
        subdiv = dyadic_refine(prev_subdiv)
        evals = _chain_evals(model, subdiv)
        vals = tuple(_run_chain(evals, p) for p in probes)
        d = max(metric(a, b) for a, b in zip(prev_vals, vals))

        bound_prev = refinement_bound(h, span, mesh(prev_subdiv))
        if not within_bound(d, bound_prev, slack):
            raise BoundViolation(
                f"successive distance {d:.3e} exceeds refinement bound {bound_prev:.3e} "
                f"at level {level} of {model.name}"
            )

        if d == 0.0:
            rho = 0.0
        elif d_prev is not None and d_prev > 0.0:
            r = d / d_prev
            rho = r if r < MAX_CONTRACTION else None
        else:
            rho = None
        coef = rho / (1.0 - rho) if rho else 0.0
        accel = tuple(p_axpy(v, pv, coef) for v, pv in zip(vals, prev_vals))
        d_accel = max(metric(a, b) for a, b in zip(prev_accel, accel))
        tail = d * coef if rho is not None else math.inf
        final_chains = (tuple(prev_evals), tuple(evals))
        final_coef = coef
        final_vals = accel

        levels.append(SewLevel(level, subdiv.k, mesh(subdiv), d, d_accel, bound_prev, level_value(evals)))

        if tol > 0.0:
            if rho is not None and d_accel < tol:
                converged = True
                reason = "extrapolated successive distance below tol"
            elif refinement_bound(h, span, mesh(subdiv)) < tol:
                converged = True
                reason = "a-priori refinement bound below tol"
                tail = min(tail, refinement_bound(h, span, mesh(subdiv)))

        if not converged:
            prev_evals = evals
            prev_vals = vals
            prev_accel = accel
            prev_subdiv = subdiv
            d_prev = d

    final_subdiv = subdiv
    if final_chains is not None and final_coef > 0.0:
        chain_a, chain_b = final_chains
        cf = final_coef

        def limit_eval(p: Point) -> Point:
            return p_axpy(_run_chain(chain_b, p), _run_chain(chain_a, p), cf)

        final_map = ProbedMap(source, target, limit_eval)
    else:
        chain_b = tuple(evals)
        final_map = ProbedMap(source, target, lambda p: _run_chain(chain_b, p))
    if level == 0:
        tail = min(tail, refinement_bound(h, span, mesh(subdiv)))

    if math.isinf(tail):
        tail = refinement_bound(h, span, mesh(final_subdiv))

    claimed = corollary_bound(h, span)
    done = converged or tol <= 0.0
    mu_distance: float | None
    mu_ok: bool | None
    try:
        direct = model.mu(s, t)
        mu_distance = max(metric(direct.eval(p), v) for p, v in zip(probes, final_vals))
        mu_ok = within_bound(mu_distance + tail, claimed, slack) if done else None
    except ModelDomainError:
        mu_distance = None
        mu_ok = None

    cert = SewCertificate(
        K=constant_K(h),
        C_prime=c_prime(h, span),
        epsilon=h.epsilon,
        levels=levels,
        claimed_bound=claimed,
        tail_estimate=tail,
        mu_distance=mu_distance,
        mu_bound_ok=mu_ok,
        converged=done,
        stop_reason=reason if converged else ("full ladder (tol <= 0)" if tol <= 0.0 else "max_level reached"),
        final_subdivision=final_subdiv,
        base_k=k0,
        ratio_estimate=rho,
        limit_value=value_fn(final_map) if value_fn is not None else None,
    )

    if mu_ok is False:
        raise BoundViolation(
            f"d(mu_st, limit) = {mu_distance:.3e} + tail {tail:.3e} exceeds "
            f"claimed bound {claimed:.3e} for {model.name}"
        )
    if tol > 0.0 and not converged:
        raise NonConvergence(
            f"sew of {model.name} did not meet tol {tol:.3e} within {max_level} levels",
            certificate=cert,
        )
    return final_map, cert


# ---------------------------------------------------------------------------
# flow-law, inverse, mesh-lemma and four-point checks

def flow_law_defect(model: ApproxFlowModel, s: float, u: float, t: float, tol: float) -> float:
    """d(sew(s,t), sew(s,u) o sew(u,t)); at most 3*tol for u between s and t."""
    whole, _ = sew(model, s, t, tol)
    left, _ = sew(model, s, u, tol)
    right, _ = sew(model, u, t, tol)
    lf, rf = left.eval, right.eval
    composed = ProbedMap(right.source, left.target, lambda p: lf(rf(p)))
    return map_distance_value(whole, composed)


def inverse_defect_bound(h: HoelderData, span: float, k: int) -> float:
    return h.g(span) * k * h.c_total * (span / k) ** (1.0 + h.epsilon) if k >= 1 else 0.0


def inverse_defect(model: ApproxFlowModel, s: float, t: float, k: int) -> float:
    """Distance of mu^I_k o mu^reversed(I_k) from the identity on the s-space.

    Asserts the measured value against g(span)*k*(sum C_i)*(span/k)**(1+eps).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    subdiv = regular(s, t, k)
    forward = compose_along(model, subdiv)
    backward = compose_along(model, reverse(subdiv))
    fe, be = forward.eval, backward.eval
    round_trip = ProbedMap(backward.source, forward.target, lambda p: fe(be(p)))
    measured = map_distance_value(round_trip, identity_map(model.space_at(s)))
    bound = inverse_defect_bound(model.hoelder, abs(t - s), k)
    if not within_bound(measured, bound):
        raise BoundViolation(
            f"inverse defect {measured:.3e} exceeds bound {bound:.3e} for {model.name}, k={k}"
        )
    return measured


def mesh_lemma_check(
    model: ApproxFlowModel, coarse: Subdivision, fine: Subdivision
) -> tuple[float, float]:
    """Measured d(mu^I, mu^J) for J finer than I, and its mesh bound."""
    if not refines(fine, coarse):
        raise NotARefinement("second subdivision must refine the first")
    lhs = map_distance_value(compose_along(model, coarse), compose_along(model, fine))
    span = coarse.span
    rhs = refinement_bound(model.hoelder, span, mesh(coarse))
    return lhs, rhs


def four_point_defect(
    model: ApproxFlowModel, s: Point, u: Point, v: Point, t: Point
) -> tuple[float, float]:
    """Measured d(mu_su o mu_ut, mu_sv o mu_vt) and its four-point bound.

    The bound is (1 + f(d(u,s))) * sum_i C_i d(t,v)**a_i d(u,v)**b_i
    + sum_i C_i d(s,u)**b_i d(u,v)**a_i; it degenerates to (0, 0) at u == v
    and to the three-point estimate at v == t.  Works for interval models and
    parameter-space models alike (d is the model's parameter metric).
    """
    h = model.hoelder
    d_p = model.param_metric
    via_u = compose_chain([model.mu(s, u), model.mu(u, t)])
    via_v = compose_chain([model.mu(s, v), model.mu(v, t)])
    lhs = map_distance_value(via_u, via_v)
    d_us, d_tv, d_uv = d_p(u, s), d_p(t, v), d_p(u, v)
    rhs = (1.0 + h.f(d_us)) * sum(c * d_tv**a * d_uv**b for a, b, c in h.terms)
    rhs += sum(c * d_us**b * d_uv**a for a, b, c in h.terms)
    return lhs, rhs
