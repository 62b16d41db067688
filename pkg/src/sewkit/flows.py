"""Defect data and the approximate-flow model interface.

A model supplies, for parameters a and b (real times, or points of a metric
parameter space), a probed map mu(a, b) from the space at b to the space at a,
together with declared defect data: exponents/constants of the three-point
(or strong four-point) estimate, a Lipschitz slope L with Lip(mu) <= 1 + L*d,
and a growth function g bounding Lipschitz constants of composites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .errors import WrongMode
from .metric import MetricSpace, ProbedMap

MODE_SEWING = "sewing"      # exponents satisfy a + b = 1 + epsilon
MODE_KNITTING = "knitting"  # exponents satisfy a + b = 2 + epsilon

Param = Any  # a real time, or a point of the parameter space


@dataclass(frozen=True)
class HoelderData:
    """Declared defect exponents/constants plus Lipschitz controls.

    ``terms`` is a tuple of (a_i, b_i, C_i).  In sewing mode each pair must
    satisfy a_i + b_i = 1 + epsilon, in knitting mode a_i + b_i = 2 + epsilon.
    ``lip_slope`` is the L of f(delta) = L*delta; when no explicit ``growth``
    is supplied the composite-Lipschitz bound defaults to g(delta) =
    exp(L*delta), which is what a linear slope gives.
    """

    epsilon: float
    terms: tuple[tuple[float, float, float], ...]
    lip_slope: float = 0.0
    mode: str = MODE_SEWING
    growth: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.mode not in (MODE_SEWING, MODE_KNITTING):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.terms:
            raise ValueError("need at least one defect term")
        if self.lip_slope < 0.0:
            raise ValueError("lip_slope must be >= 0")
        for a, b, c in self.terms:
            if a <= 0.0 or b <= 0.0 or c < 0.0:
                raise ValueError("terms need a,b > 0 and C >= 0")
            if abs(a + b - self.degree) > 1e-9:
                raise ValueError(
                    f"term exponents {a}+{b} != {self.degree} required by {self.mode} mode"
                )

    @property
    def degree(self) -> float:
        return (1.0 if self.mode == MODE_SEWING else 2.0) + self.epsilon

    @property
    def c_total(self) -> float:
        return sum(c for _, _, c in self.terms)

    def g(self, delta: float) -> float:
        """Growth bound for composite Lipschitz constants; g >= 1, non-decreasing."""
        if delta < 0.0:
            raise ValueError("growth argument must be >= 0")
        if self.growth is not None:
            return self.growth(delta)
        if self.lip_slope == 0.0:
            return 1.0
        return math.exp(self.lip_slope * delta)

    def f(self, delta: float) -> float:
        """Single-step Lipschitz excess, f(delta) = L*delta."""
        return self.lip_slope * abs(delta)

    def pulled_back(self, lip: float) -> "HoelderData":
        """Defect data of the flow pulled back along a path of Lipschitz norm lip.

        Constants rescale by lip**(a_i+b_i), the slope by lip.  Knitting-mode
        data turns into sewing-mode data one order higher (a+b = 2+eps reads
        as 1 + (eps+1)).
        """
        if lip < 0.0:
            raise ValueError("lip must be >= 0")
        terms = tuple((a, b, c * lip ** (a + b)) for a, b, c in self.terms)
        eps = self.epsilon + 1.0 if self.mode == MODE_KNITTING else self.epsilon
        growth = None
        if self.growth is not None:
            base = self.growth
            growth = lambda d, _g=base, _l=lip: _g(_l * d)
        return HoelderData(eps, terms, self.lip_slope * lip, MODE_SEWING, growth)

    def require_mode(self, mode: str, what: str) -> None:
        if self.mode != mode:
            raise WrongMode(f"{what} needs {mode}-mode defect data, got {self.mode}")

    def defect_bound(self, d_first: float, d_second: float) -> float:
        """Three-point bound: sum_i C_i * d_first**a_i * d_second**b_i."""
        return sum(c * d_first**a * d_second**b for a, b, c in self.terms)


def _abs_gap(a: float, b: float) -> float:
    return abs(b - a)


@dataclass(frozen=True)
class ApproxFlowModel:
    """A local approximate flow over an interval or a metric parameter space.

    ``mu(a, b)`` maps the space at b to the space at a and must be the exact
    identity when a == b.  ``param_metric`` measures parameter gaps (absolute
    difference on intervals).  ``max_param_step`` caps the parameter gap over
    which ``mu`` may be evaluated (models that are only locally defined);
    ``angle`` exposes a per-step rotation angle for holonomy summaries and
    ``summary`` a scalar readout of a flow map for logs.
    """

    name: str
    space_at: Callable[[Param], MetricSpace]
    mu: Callable[[Param, Param], ProbedMap]
    hoelder: HoelderData
    param_metric: Callable[[Param, Param], float] = _abs_gap
    max_param_step: float | None = None
    summary: Callable[[ProbedMap], float] | None = None
    angle: Callable[[Param, Param], float] | None = None
