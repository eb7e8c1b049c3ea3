"""
The pseudo-inverse flow (χ(t, ·), 𝒰(t, ·)) on [0, C].

In these variables the conservative Hunter–Saxton flow is χ_t = 𝒰 and
𝒰_t = η/2 − C/4, so every state at time t is an exact quadratic-in-t
combination of the initial data. The Eulerian solution, atoms at wave
breaking included, is recovered by inverting χ(t, ·).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from ..errors import InfiniteBoundaryError
from .eulerian import EulerianState
from .lagrangian import LagrangianState
from .measure import (
    RadonMeasure,
    cumulative,
    inverse_to_cumulative,
    measure_from_cumulative,
    pseudo_inverse,
)
from .piecewise import MonotoneFunction, PiecewiseLinear, combine, compose, merge_points

logger = logging.getLogger(__name__)

JUMP_TOL = 1e-12


class BoundaryCase(StrEnum):
    """Which of χ₀(0+) and χ₀(C−) are finite."""

    BOTH_FINITE = "both_finite"
    LEFT_INFINITE = "left_infinite"
    RIGHT_INFINITE = "right_infinite"
    BOTH_INFINITE = "both_infinite"

    @classmethod
    def from_limits(cls, lo: float, hi: float) -> BoundaryCase:
        return {
            (True, True): cls.BOTH_FINITE,
            (False, True): cls.LEFT_INFINITE,
            (True, False): cls.RIGHT_INFINITE,
            (False, False): cls.BOTH_INFINITE,
        }[(math.isfinite(lo), math.isfinite(hi))]

    @property
    def left_finite(self) -> bool:
        return self in (BoundaryCase.BOTH_FINITE, BoundaryCase.RIGHT_INFINITE)

    @property
    def right_finite(self) -> bool:
        return self in (BoundaryCase.BOTH_FINITE, BoundaryCase.LEFT_INFINITE)


@dataclass(frozen=True)
class TransportState:
    """χ(t, ·) and 𝒰(t, ·) on [0, C] at time ``t``."""

    t: float
    energy: float
    chi: MonotoneFunction
    Ucal: PiecewiseLinear
    boundary_case: BoundaryCase


def init_transport(state: EulerianState) -> TransportState:
    """
    χ₀ = pseudo-inverse of the cumulative energy and 𝒰₀ = u₀ ∘ χ₀.

    With no energy, χ₀ and 𝒰₀ are the constants 0 and u₀ on the single point
    η = 0.
    """
    C = state.energy
    if C == 0:
        value = float(state.u(0.0))
        return TransportState(
            0.0,
            0.0,
            MonotoneFunction.constant(0.0, 0.0, 0.0),
            PiecewiseLinear.constant(value, 0.0, 0.0),
            BoundaryCase.BOTH_FINITE,
        )
    chi = pseudo_inverse(cumulative(state.mu), C)
    Ucal = compose(state.u, chi)
    case = BoundaryCase.from_limits(chi.tail_lo, chi.tail_hi)
    logger.debug("initial transport state: C=%r, %d knots, %s", C, chi.xs.size, case)
    return TransportState(0.0, C, chi, Ucal, case)


def evolve(ts: TransportState, t: float) -> TransportState:
    """
    Advance to time ``t`` ≥ ts.t in closed form.

    χ ← (Δt²/4)(η − C/2) + Δt·𝒰 + χ and 𝒰 ← (Δt/2)(η − C/2) + 𝒰.

    Raises:
        NonMonotoneError: if χ(t, ·) fails to be non-decreasing, which only
            happens for corrupted input.
    """
    if t < 0 or t < ts.t:
        raise ValueError("time must be non-negative")
    dt = t - ts.t
    if dt == 0:
        return ts
    C = ts.energy
    if C == 0:
        value = float(ts.chi(0.0)) + dt * float(ts.Ucal(0.0))
        return TransportState(
            t, 0.0, MonotoneFunction.constant(value, 0.0, 0.0), ts.Ucal, ts.boundary_case
        )
    eta = PiecewiseLinear.identity(0.0, C)
    chi = combine([(dt * dt / 4.0, eta), (dt, ts.Ucal), (1.0, ts.chi)], -dt * dt * C / 8.0)
    chi = MonotoneFunction.of(chi.with_point_value_lo(-math.inf), open_ends=ts.chi.open_ends)
    Ucal = combine([(dt / 2.0, eta), (1.0, ts.Ucal)], -dt * C / 4.0)
    return TransportState(t, C, chi, Ucal, ts.boundary_case)


@dataclass(frozen=True)
class ExtendedTransport:
    """χ and 𝒰 continued affinely past η = 0 and/or η = C."""

    state: TransportState
    chi: MonotoneFunction
    Ucal: PiecewiseLinear
    left: bool
    right: bool


def extend_by_continuity(
    ts: TransportState, left: bool = True, right: bool = True
) -> ExtendedTransport:
    """
    Continue χ with unit slope and 𝒰 as a constant beyond the finite ends.

    For η < 0, χ = χ(t, 0+) + η and 𝒰 = 𝒰(t, 0+); for η > C, χ = χ(t, C) +
    (η − C) and 𝒰 = 𝒰(t, C).

    Raises:
        InfiniteBoundaryError: if a requested side has an infinite limit.
    """
    case = ts.boundary_case
    for wanted, finite, side in ((left, case.left_finite, "η = 0"), (right, case.right_finite, "η = C")):
        if wanted and not finite:
            raise InfiniteBoundaryError(f"χ has an infinite limit at {side}")
    if ts.energy == 0 or not (left or right):
        return ExtendedTransport(ts, ts.chi, ts.Ucal, False, False)
    chi, Ucal = ts.chi, ts.Ucal
    chi_lefts, u_lefts = np.array(chi.lefts), np.array(Ucal.lefts)
    chi_rights, u_rights = np.array(chi.rights), np.array(Ucal.rights)
    lo, hi = chi.domain_lo, chi.domain_hi
    if left:
        chi_lefts[0], u_lefts[0] = chi.rights[0], Ucal.rights[0]
        lo = -math.inf
    if right:
        chi_rights[-1], u_rights[-1] = chi.lefts[-1], Ucal.lefts[-1]
        hi = math.inf
    ext_chi = MonotoneFunction(
        chi.xs, chi_lefts, chi_rights, 1.0, 1.0, lo, hi, chi.open_ends
    )
    ext_u = PiecewiseLinear(Ucal.xs, u_lefts, u_rights, 0.0, 0.0, lo, hi)
    logger.debug("extended transport state at t=%r (left=%s, right=%s)", ts.t, left, right)
    return ExtendedTransport(ts, ext_chi, ext_u, left, right)


def extend_finite_sides(ts: TransportState) -> ExtendedTransport:
    """:func:`extend_by_continuity` on exactly the sides with finite limits."""
    return extend_by_continuity(
        ts, left=ts.boundary_case.left_finite, right=ts.boundary_case.right_finite
    )


def l_of_eta(X0bar: LagrangianState, eta: float) -> float:
    """
    l(η) = sup{ξ | H(ξ) < η}, the label carrying cumulative energy η.

    It does not depend on time since H is conserved along characteristics.
    """
    if X0bar.energy == 0:
        return -math.inf
    return float(X0bar.H.inverse()(eta))


def reconstruct_eulerian(ts: TransportState) -> EulerianState:
    """
    The Eulerian state (u, μ) at time ts.t.

    μ is the push-forward of Lebesgue measure on [0, C] under χ, so flat
    pieces of χ become atoms. u(x) = 𝒰(η) for χ(η) = x and takes the
    constant value 𝒰(η) across a jump of χ at η.
    """
    C = ts.energy
    if C == 0:
        return EulerianState(PiecewiseLinear.constant(float(ts.Ucal(0.0))), RadonMeasure.zero())
    F = inverse_to_cumulative(ts.chi, C)
    mu = measure_from_cumulative(F)
    ext = extend_finite_sides(ts)
    if ext.left or ext.right:
        u = compose(ext.Ucal, ext.chi.inverse())
    else:
        u = compose(ts.Ucal, F)
    return EulerianState(u, mu)


class ConservativeSolution:
    """
    The conservative solution issued from ``initial``, evaluated on demand.

    Calling the object with a time returns the Eulerian state at that time.
    """

    def __init__(self, initial: EulerianState):
        self.initial = initial
        self.transport0 = init_transport(initial)

    @property
    def energy(self) -> float:
        return self.transport0.energy

    def transport_at(self, t: float) -> TransportState:
        return evolve(self.transport0, t)

    def state_at(self, t: float) -> EulerianState:
        return reconstruct_eulerian(self.transport_at(t))

    def __call__(self, t: float) -> EulerianState:
        return self.state_at(t)


@dataclass(frozen=True, slots=True)
class SurfaceRow:
    """One sample (t, η, χ(t, η), 𝒰(t, η)) of the solution surface."""

    t: float
    eta: float
    chi: float
    U: float


def surface_etas(ts: TransportState, eta_samples: int) -> np.ndarray:
    """Equispaced η in (0, C) together with every knot of χ."""
    C = ts.energy
    if C == 0:
        return np.array([0.0])
    grid = C * np.arange(1, eta_samples + 1) / (eta_samples + 1)
    return merge_points([grid, ts.chi.xs], lo=0.0, hi=C)


def solution_surface(
    ts0: TransportState, times: Iterable[float], eta_samples: int
) -> list[SurfaceRow]:
    """
    Tabulate {(χ(t, η), t, 𝒰(t, η))} ordered by (t, η).

    Rows where χ is infinite are dropped, as is η = C when the right end of χ
    is open.
    """
    rows: list[SurfaceRow] = []
    for t in sorted(set(float(v) for v in times)):
        ts = evolve(ts0, t)
        etas = surface_etas(ts, eta_samples)
        chi = np.atleast_1d(ts.chi(etas))
        ucal = np.atleast_1d(ts.Ucal(etas))
        keep = np.isfinite(chi) & np.isfinite(ucal)
        if ts.energy > 0 and ts.chi.open_ends[0]:
            keep &= etas > 0
        if ts.energy > 0 and ts.chi.open_ends[1]:
            keep &= etas < ts.energy
        rows += [
            SurfaceRow(t, float(e), float(c), float(v))
            for e, c, v in zip(etas[keep], chi[keep], ucal[keep], strict=True)
        ]
    return rows


def chi_jumps(ts: TransportState) -> list[tuple[float, float]]:
    """Jumps ``(η, height)`` of χ(t, ·) strictly inside (0, C)."""
    chi = ts.chi
    if ts.energy == 0 or chi.xs.size < 3:
        return []
    heights = chi.rights[1:-1] - chi.lefts[1:-1]
    scale = np.maximum(1.0, np.abs(chi.rights[1:-1]))
    return [
        (float(e), float(h))
        for e, h, s in zip(chi.xs[1:-1], heights, scale, strict=True)
        if h > JUMP_TOL * s
    ]
