"""
Lagrangian coordinates X = (y, U, H) and the maps between them and
Eulerian states.

``map_L`` takes (u, μ) to the normalised slice y + H = id, ``map_M`` pushes
H_ξ dξ forward under y, ``semigroup_S`` integrates the linear characteristic
system in closed form and ``project_Pi`` removes the relabeling freedom.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from ..errors import InvalidStateError, NonMonotoneError
from ..utils.encoding import encode_real
from .eulerian import EulerianState, ValidationReport
from .measure import cumulative, measure_from_cumulative
from .piecewise import (
    MonotoneFunction,
    PiecewiseLinear,
    affine_on,
    combine,
    compose,
    max_deviation,
    merge_points,
    piece_bounds,
)

logger = logging.getLogger(__name__)

RELABEL_TOL = 1e-10
MIN_SPREAD = 1e-12


@dataclass(frozen=True)
class LagrangianState:
    """
    Characteristic position ``y``, velocity ``U`` and cumulative energy ``H``
    as functions of the label ξ.
    """

    y: MonotoneFunction
    U: PiecewiseLinear
    H: MonotoneFunction
    energy: float
    in_F0: bool = False
    open_tails: tuple[bool, bool] = (False, False)

    @property
    def xi_grid(self) -> np.ndarray:
        """All knots of y, U and H."""
        return merge_points([self.y.xs, self.U.xs, self.H.xs])

    def pieces(self) -> list[tuple[float, float, tuple[float, float], tuple[float, float], tuple[float, float]]]:
        """Affine coefficients of (y, U, H) on every piece of ``xi_grid``."""
        rows = []
        for a, b in piece_bounds(self.xi_grid, -math.inf, math.inf):
            rows.append(
                (a, b, affine_on(self.y, a, b), affine_on(self.U, a, b), affine_on(self.H, a, b))
            )
        return rows

    @property
    def c(self) -> float:
        """Smallest slope of y + H over all pieces."""
        return min(y[1] + h[1] for _, _, y, _, h in self.pieces())

    def to_record(self) -> dict[str, Any]:
        return {
            "pieces": [
                [encode_real(a), encode_real(b), list(y), list(U), list(H)]
                for a, b, y, U, H in self.pieces()
            ],
            "energy": self.energy,
            "in_F0": self.in_F0,
        }


def map_L(state: EulerianState) -> LagrangianState:
    """
    Lagrangian coordinates in the slice y + H = id.

    y(ξ) = sup{x | μ((−∞, x)) + x < ξ}, H = ξ − y and U = u ∘ y.
    """
    F = cumulative(state.mu)
    G = MonotoneFunction.of(combine([(1.0, PiecewiseLinear.identity()), (1.0, F)]))
    y = G.inverse()
    H = MonotoneFunction.of(combine([(1.0, PiecewiseLinear.identity()), (-1.0, y)]))
    U = compose(state.u, y)
    return LagrangianState(y, U, H, state.energy, True, state.mu.open_tails)


def _check_flat_velocity(X: LagrangianState, tol: float = RELABEL_TOL) -> None:
    points = merge_points([X.y.xs, X.U.xs])
    for a, b in zip(points[:-1], points[1:], strict=True):
        rise = X.y(b) - X.y.right_limit(a)
        if rise > MIN_SPREAD * max(1.0, abs(X.y(b))):
            continue
        change = abs(X.U(b) - X.U.right_limit(a))
        if change > tol * max(1.0, abs(X.U(b))):
            raise InvalidStateError(
                f"U varies by {change!r} on [{a!r}, {b!r}] where y is constant"
            )


def map_M(X: LagrangianState) -> EulerianState:
    """
    Eulerian state of a Lagrangian one: u ∘ y = U and μ = y#(H_ξ dξ).

    Raises:
        InvalidStateError: if U is not constant where y is flat.
    """
    _check_flat_velocity(X)
    yinv = X.y.inverse()
    F = MonotoneFunction.of(compose(X.H, yinv), open_ends=X.open_tails)
    u = compose(X.U, yinv)
    return EulerianState(u, measure_from_cumulative(F))


def semigroup_S(X: LagrangianState, t: float) -> LagrangianState:
    """
    Exact solution of the characteristic system after time ``t``.

    y ← (H/4 − C/8)t² + U·t + y, U ← (H/2 − C/4)t + U, H unchanged.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    if t == 0:
        return X
    C = X.energy
    y = combine([(t * t / 4.0, X.H), (t, X.U), (1.0, X.y)], -C * t * t / 8.0)
    U = combine([(t / 2.0, X.H), (1.0, X.U)], -C * t / 4.0)
    try:
        y = MonotoneFunction.of(y)
    except NonMonotoneError as exc:
        raise InvalidStateError(f"characteristics cross at t={t!r}") from exc
    return LagrangianState(y, U, X.H, C, False, X.open_tails)


def project_Pi(X: LagrangianState) -> LagrangianState:
    """The representative X ∘ (y + H)⁻¹ of X's relabeling class."""
    spread = MonotoneFunction.of(combine([(1.0, X.y), (1.0, X.H)]))
    g = spread.inverse()
    return LagrangianState(
        MonotoneFunction.of(compose(X.y, g)),
        compose(X.U, g),
        MonotoneFunction.of(compose(X.H, g)),
        X.energy,
        True,
        X.open_tails,
    )


def check_relabeling_function(g: PiecewiseLinear, tol: float = 1e-12) -> MonotoneFunction:
    """
    Validate g as a relabeling: continuous, strictly increasing with bounded
    slopes, unbounded on both sides with unit tail slopes.

    Raises:
        InvalidStateError: if any condition fails.
    """
    if g.bounded != (False, False):
        raise InvalidStateError("relabeling must be defined on the whole line")
    if np.any(np.abs(g.rights - g.lefts) > tol * np.maximum(1.0, np.abs(g.lefts))):
        raise InvalidStateError("relabeling must be continuous")
    if g.slope_lo != 1.0 or g.slope_hi != 1.0:
        raise InvalidStateError("relabeling must have unit slope on both tails")
    if g.xs.size > 1:
        slopes = g.segment_slopes()
        if np.any(slopes <= tol) or not np.all(np.isfinite(slopes)):
            raise InvalidStateError("relabeling slopes must be strictly positive and finite")
    return MonotoneFunction.of(g)


def interpolated_relabeling(func: Callable[[Any], Any], nodes: ArrayLike) -> MonotoneFunction:
    """Piecewise-affine relabeling through ``func`` at ``nodes`` with unit tails."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(func(nodes), dtype=float)
    g = PiecewiseLinear.interpolate(nodes, values, slope_lo=1.0, slope_hi=1.0)
    return check_relabeling_function(g)


def relabel(X: LagrangianState, g: PiecewiseLinear) -> LagrangianState:
    """X ∘ g for a relabeling function g."""
    g = check_relabeling_function(g)
    return LagrangianState(
        MonotoneFunction.of(compose(X.y, g)),
        compose(X.U, g),
        MonotoneFunction.of(compose(X.H, g)),
        X.energy,
        False,
        X.open_tails,
    )


def lagrangian_deviation(X1: LagrangianState, X2: LagrangianState) -> float:
    """Largest relative piecewise deviation between the components."""
    return max(
        max_deviation(X1.y, X2.y, relative=True),
        max_deviation(X1.U, X2.U, relative=True),
        max_deviation(X1.H, X2.H, relative=True),
        abs(X1.energy - X2.energy) / max(1.0, abs(X1.energy)),
    )


def is_relabeling_of(X1: LagrangianState, X2: LagrangianState, tol: float = RELABEL_TOL) -> bool:
    """True iff both states project onto the same representative."""
    return lagrangian_deviation(project_Pi(X1), project_Pi(X2)) <= tol


def validate_lagrangian(
    X: LagrangianState, tol: float = RELABEL_TOL, compat_as_warning: bool = False
) -> ValidationReport:
    """
    Check the structural conditions on (y, U, H) piece by piece.

    y_ξ ≥ 0, H_ξ ≥ 0, y_ξ + H_ξ ≥ c > 0, y_ξ·H_ξ = U_ξ², H ranging over
    [0, C] and, for states in the normalised slice, y + H = id.
    """
    violations: list[str] = []
    warnings: list[str] = []
    worst = 0.0
    for a, b, (_, y1), (_, u1), (_, h1) in X.pieces():
        if y1 < -tol or h1 < -tol:
            violations.append(f"negative slope of y or H on [{a!r}, {b!r}]")
        mismatch = abs(y1 * h1 - u1 * u1) / max(1.0, u1 * u1)
        worst = max(worst, mismatch)
    if worst > tol:
        message = f"y_ξ·H_ξ differs from U_ξ² by up to {worst:.3g}"
        (warnings if compat_as_warning else violations).append(message)
    c = X.c
    if c <= MIN_SPREAD:
        violations.append(f"y_ξ + H_ξ is not bounded below (c = {c!r})")
    scale = max(1.0, X.energy)
    if abs(X.H.tail_lo) > tol * scale or abs(X.H.tail_hi - X.energy) > tol * scale:
        violations.append("H does not range over [0, C]")
    if X.in_F0:
        diagonal = combine([(1.0, X.y), (1.0, X.H)])
        gap = max_deviation(diagonal, PiecewiseLinear.identity(), relative=True)
        if gap > tol:
            violations.append(f"y + H deviates from the identity by {gap:.3g}")
    return ValidationReport(tuple(violations), tuple(warnings))
