"""
Wasserstein distance between energy measures and the Lipschitz metric
between conservative solutions.

Solutions with energies C₁, C₂ are compared after rescaling their transport
states to η ∈ [0, 1]:

    d = ‖𝒰̂₁ − 𝒰̂₂‖_∞ + ‖χ̂₁ − χ̂₂‖₁ + |C₁ − C₂|,

which grows at most by the factor 1 + t + t²/8 along the flow.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import MassMismatchError, NonIntegrableError
from ..utils.encoding import format_real
from .eulerian import EulerianState
from .measure import (
    RadonMeasure,
    cumulative,
    l1_distance,
    measure_integrability,
    pseudo_inverse,
)
from .piecewise import PiecewiseLinear, combine, rescale_domain, sup_abs
from .transport import TransportState, evolve, init_transport

logger = logging.getLogger(__name__)

SLACK = 1e-9
MASS_MATCH_TOL = 1e-12

REPORT_FIELDS = ("t", "d", "bound_factor", "d0", "satisfied", "uinf", "chi_l1", "mass")


def lipschitz_factor(t: float) -> float:
    """1 + t + t²/8."""
    return 1.0 + t + t * t / 8.0


def fixed_mass_bound_factor(C: float, t: float) -> float:
    """1 + C·t, the growth factor of the unscaled metric at fixed energy C."""
    return 1.0 + C * t


@dataclass(frozen=True, slots=True)
class MetricComponents:
    uinf: float
    chi_l1: float
    mass: float

    @property
    def total(self) -> float:
        return math.fsum((self.uinf, self.chi_l1, self.mass))


@dataclass(frozen=True)
class MetricReport:
    """Distance at time ``t`` compared with the bound from time 0."""

    t: float
    d: float
    bound_factor: float
    d0: float
    satisfied: bool
    components: MetricComponents

    @property
    def excess(self) -> float:
        """How far d exceeds the bound; negative when satisfied with room."""
        return self.d - self.bound_factor * self.d0

    def to_record(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "d": self.d,
            "bound_factor": self.bound_factor,
            "d0": self.d0,
            "satisfied": self.satisfied,
            "components": {
                "uinf": self.components.uinf,
                "chi_l1": self.components.chi_l1,
                "mass": self.components.mass,
            },
        }

    def to_row(self) -> list[str]:
        c = self.components
        return [
            format_real(self.t),
            format_real(self.d),
            format_real(self.bound_factor),
            format_real(self.d0),
            "true" if self.satisfied else "false",
            format_real(c.uinf),
            format_real(c.chi_l1),
            format_real(c.mass),
        ]


def _check_same_mass(C1: float, C2: float) -> None:
    if abs(C1 - C2) > MASS_MATCH_TOL * max(1.0, abs(C1), abs(C2)):
        raise MassMismatchError(f"total energies differ: {C1!r} vs {C2!r}")


def _require_integrable(mu: RadonMeasure, label: str | None) -> None:
    if not measure_integrability(mu):
        raise NonIntegrableError(
            "integrability condition fails: the tail integrals of the cumulative "
            "energy diverge, so χ is not in L¹",
            label,
        )


def wasserstein(mu1: RadonMeasure, mu2: RadonMeasure) -> float:
    """
    d_W(μ₁, μ₂) = ‖χ₁ − χ₂‖ in L¹([0, C]) for measures of equal mass.

    Raises:
        MassMismatchError: if the total masses differ.
        NonIntegrableError: if either measure violates the integrability condition.
    """
    C = mu1.total_mass
    _check_same_mass(C, mu2.total_mass)
    _require_integrable(mu1, "first measure")
    _require_integrable(mu2, "second measure")
    if C == 0:
        return 0.0
    chi1 = pseudo_inverse(cumulative(mu1), C)
    chi2 = pseudo_inverse(cumulative(mu2), C)
    return l1_distance(chi1, chi2)


def distance_fixed_mass(ts1: TransportState, ts2: TransportState) -> float:
    """
    ‖𝒰₁ − 𝒰₂‖_∞ + ‖χ₁ − χ₂‖₁ on [0, C] for two states of equal energy.

    Raises:
        MassMismatchError: if the energies differ.
    """
    _check_same_mass(ts1.energy, ts2.energy)
    if ts1.energy == 0:
        return abs(float(ts1.Ucal(0.0)) - float(ts2.Ucal(0.0)))
    chi2 = ts2.chi.replace(xs=_snap_end(ts2.chi.xs, ts1.energy), domain_hi=ts1.energy)
    ucal2 = ts2.Ucal.replace(xs=_snap_end(ts2.Ucal.xs, ts1.energy), domain_hi=ts1.energy)
    uinf = sup_abs(combine([(1.0, ts1.Ucal), (-1.0, ucal2)]))
    return math.fsum((uinf, l1_distance(ts1.chi, chi2)))


def _snap_end(xs: np.ndarray, end: float) -> np.ndarray:
    snapped = np.array(xs)
    snapped[-1] = end
    return snapped


def rescaled(ts: TransportState) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """
    (χ̂, 𝒰̂)(η) = (χ, 𝒰)(C·η) on [0, 1].

    Without energy both are constants: 𝒰̂ ≡ u and χ̂ ≡ t·u.
    """
    if ts.energy == 0:
        return (
            PiecewiseLinear.constant(float(ts.chi(0.0)), 0.0, 1.0),
            PiecewiseLinear.constant(float(ts.Ucal(0.0)), 0.0, 1.0),
        )
    out = []
    for f in (ts.chi, ts.Ucal):
        g = rescale_domain(f, ts.energy)
        out.append(g.replace(xs=_snap_end(g.xs, 1.0), domain_hi=1.0))
    return out[0], out[1]


def rescaled_components(ts1: TransportState, ts2: TransportState) -> MetricComponents:
    chi1, u1 = rescaled(ts1)
    chi2, u2 = rescaled(ts2)
    return MetricComponents(
        uinf=sup_abs(combine([(1.0, u1), (-1.0, u2)])),
        chi_l1=l1_distance(chi1, chi2),
        mass=abs(ts1.energy - ts2.energy),
    )


def _report(t: float, now: MetricComponents, start: MetricComponents) -> MetricReport:
    factor = lipschitz_factor(t)
    d, d0 = now.total, start.total
    return MetricReport(t, d, factor, d0, d <= factor * d0 + SLACK, now)


def _initial_pair(
    s1: EulerianState, s2: EulerianState, labels: tuple[str, str]
) -> tuple[TransportState, TransportState]:
    _require_integrable(s1.mu, labels[0])
    _require_integrable(s2.mu, labels[1])
    return init_transport(s1), init_transport(s2)


def distance(
    s1: EulerianState,
    s2: EulerianState,
    t: float,
    labels: tuple[str, str] = ("first state", "second state"),
) -> MetricReport:
    """
    The rescaled metric between the solutions from ``s1`` and ``s2`` at time
    ``t``, with the comparison against the bound from time 0.

    Raises:
        NonIntegrableError: naming the state that violates the integrability condition.
        ValueError: for negative ``t``.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    ts1, ts2 = _initial_pair(s1, s2, labels)
    start = rescaled_components(ts1, ts2)
    now = rescaled_components(evolve(ts1, t), evolve(ts2, t))
    return _report(t, now, start)


@dataclass(frozen=True)
class LipschitzSweep:
    reports: tuple[MetricReport, ...]

    @property
    def passed(self) -> bool:
        return all(r.satisfied for r in self.reports)


def verify_lipschitz(
    s1: EulerianState,
    s2: EulerianState,
    times: Iterable[float],
    labels: tuple[str, str] = ("first state", "second state"),
) -> LipschitzSweep:
    """One :class:`MetricReport` per time, in the order given."""
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("time must be non-negative")
    ts1, ts2 = _initial_pair(s1, s2, labels)
    start = rescaled_components(ts1, ts2)
    reports = tuple(
        _report(t, rescaled_components(evolve(ts1, t), evolve(ts2, t)), start) for t in times
    )
    failed = sum(not r.satisfied for r in reports)
    if failed:
        logger.info("%d of %d reports exceed the bound", failed, len(reports))
    return LipschitzSweep(reports)


@dataclass(frozen=True, slots=True)
class ComponentCheck:
    """Growth of each rescaled component against its own bound."""

    t: float
    uinf: float
    uinf_bound: float
    chi_l1: float
    chi_l1_bound: float

    @property
    def satisfied(self) -> bool:
        return self.uinf <= self.uinf_bound + SLACK and self.chi_l1 <= self.chi_l1_bound + SLACK

    @property
    def excess(self) -> float:
        return max(self.uinf - self.uinf_bound, self.chi_l1 - self.chi_l1_bound)


def component_bounds(ts1: TransportState, ts2: TransportState, t: float) -> ComponentCheck:
    """
    Check the componentwise growth from time 0:

        ‖Δ𝒰̂(t)‖_∞ ≤ ‖Δ𝒰̂(0)‖_∞ + (t/4)|ΔC|
        ‖Δχ̂(t)‖₁ ≤ ‖Δχ̂(0)‖₁ + t‖Δ𝒰̂(0)‖_∞ + (t²/8)|ΔC|
    """
    start = rescaled_components(ts1, ts2)
    now = rescaled_components(evolve(ts1, t), evolve(ts2, t))
    return ComponentCheck(
        t,
        now.uinf,
        start.uinf + t / 4.0 * start.mass,
        now.chi_l1,
        start.chi_l1 + t * start.uinf + t * t / 8.0 * start.mass,
    )


@dataclass(frozen=True, slots=True)
class FixedMassCheck:
    t: float
    d: float
    bound: float

    @property
    def satisfied(self) -> bool:
        return self.d <= self.bound + SLACK


def verify_fixed_mass(
    ts1: TransportState, ts2: TransportState, times: Iterable[float]
) -> list[FixedMassCheck]:
    """d(t) ≤ (1 + C·t)·d(0) for the unscaled metric of two equal-energy states."""
    d0 = distance_fixed_mass(ts1, ts2)
    checks = []
    for t in times:
        d = distance_fixed_mass(evolve(ts1, t), evolve(ts2, t))
        checks.append(FixedMassCheck(t, d, fixed_mass_bound_factor(ts1.energy, t) * d0))
    return checks
