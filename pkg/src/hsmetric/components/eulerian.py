"""
Eulerian states (u, μ): validation, blow-up prediction and pointwise
residuals of the Hunter–Saxton equation.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from ..errors import SingularStencilError
from ..utils.encoding import encode_real
from .measure import Atom, RadonMeasure, cumulative
from .piecewise import PiecewiseLinear, affine_on, merge_points, piece_bounds

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4


@dataclass(frozen=True)
class ClosedFormVelocity:
    """Exact initial velocity kept next to its sampled interpolant."""

    name: str
    value: Callable[[Any], Any]
    slope: Callable[[Any], Any]
    min_slope: float = 0.0
    bounded: bool = True

    def shifted(self, h: float) -> ClosedFormVelocity:
        value, slope = self.value, self.slope
        return replace(
            self,
            value=lambda x: value(np.asarray(x) - h),
            slope=lambda x: slope(np.asarray(x) - h),
        )


@dataclass(frozen=True)
class EulerianState:
    """
    A pair (u, μ).

    ``u`` is piecewise affine. States sampled from a smooth scenario keep the
    exact velocity in ``closed_form`` and the grid size in ``resolution``.
    """

    u: PiecewiseLinear
    mu: RadonMeasure
    closed_form: ClosedFormVelocity | None = field(default=None, compare=False)
    resolution: int | None = None

    @property
    def energy(self) -> float:
        return self.mu.total_mass

    @property
    def sampled(self) -> bool:
        return self.closed_form is not None

    def velocity(self, x: Any) -> Any:
        return self.u(x)

    def translated(self, h: float) -> EulerianState:
        """Both u and μ shifted by h in space."""
        return EulerianState(
            self.u.shifted(h),
            self.mu.translated(h),
            self.closed_form.shifted(h) if self.closed_form else None,
            self.resolution,
        )

    def with_atoms(self, atoms: list[Atom]) -> EulerianState:
        return replace(self, mu=self.mu.with_atoms(atoms))

    def u_rows(self) -> list[list[Any]]:
        """The velocity as ``[a, b, "affine", c0, c1]`` rows (u = c0 + c1·x)."""
        return [
            [encode_real(a), encode_real(b), "affine", c0, c1]
            for a, b, c0, c1 in self.u.affine_pieces()
        ]

    def to_record(self) -> dict[str, Any]:
        rows = self.u_rows()
        if self.closed_form is not None:
            rows.append(["-inf", "inf", self.closed_form.name])
        return {"u": rows, "mu": self.mu.to_record(), "energy": self.energy}


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; the state is valid when nothing is violated."""

    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations


def _measure_violations(mu: RadonMeasure) -> list[str]:
    problems = [
        f"negative atom mass {a.mass!r} at x={a.location!r}" for a in mu.atoms if a.mass < 0
    ]
    problems += [
        f"negative density {p.value!r} on [{p.start!r}, {p.end!r})"
        for p in mu.density
        if p.value < 0
    ]
    if not math.isfinite(mu.total_mass):
        problems.append("total energy is not finite")
    return problems


def validate(state: EulerianState, tol: float = 1e-10) -> ValidationReport:
    """
    Check membership of (u, μ) in the space of admissible data.

    Checks nonnegativity of μ, finiteness of C, continuity of u, constancy of u
    where the cumulative energy is flat and the compatibility s² = v between
    the slope s of u and the density v of μ on every piece. For sampled states
    the compatibility holds only to grid accuracy and is reported as a
    warning; the sampled data are instead checked against their exact
    counterparts.
    """
    violations = _measure_violations(state.mu)
    warnings: list[str] = []
    if violations:
        return ValidationReport(tuple(violations), ())

    u = state.u
    F = cumulative(state.mu)
    jumps = np.abs(u.rights - u.lefts)
    if math.isfinite(u.domain_lo):
        jumps[0] = 0.0
    if np.any(jumps > tol * np.maximum(1.0, np.abs(u.rights))):
        violations.append(f"u jumps at x={float(u.xs[np.argmax(jumps)])!r}")

    points = merge_points([u.xs, F.xs])
    worst_compat = 0.0
    for a, b in piece_bounds(points, -math.inf, math.inf):
        _, s = affine_on(u, a, b)
        _, v = affine_on(F, a, b)
        if abs(v) <= tol:
            if abs(s) > tol:
                violations.append(
                    f"u is not constant on [{a!r}, {b!r}] where the energy vanishes"
                )
            continue
        mismatch = abs(s * s - v) / max(1.0, v)
        if mismatch > tol:
            if state.sampled:
                worst_compat = max(worst_compat, mismatch)
            else:
                violations.append(
                    f"slope² {s * s!r} differs from density {v!r} on [{a!r}, {b!r}]"
                )
    if worst_compat > 0:
        warnings.append(
            f"slope² matches the density only to grid accuracy (max {worst_compat:.3g})"
        )

    if state.sampled:
        violations += _sampled_violations(state, F, tol)
    notice = unbounded_warning(state)
    if notice:
        logger.warning(notice)
        warnings.append(notice)
    return ValidationReport(tuple(violations), tuple(warnings))


def _sampled_violations(state: EulerianState, F: PiecewiseLinear, tol: float) -> list[str]:
    problems = []
    closed = state.closed_form
    reference = state.mu.reference
    if state.mu.atoms:
        F = cumulative(state.mu.absolutely_continuous)
    if reference is not None and F.xs.size > 2:
        inner = F.xs[1:-1]
        gap = float(np.max(np.abs(F(inner) - reference.cdf(inner))))
        if gap > tol * max(1.0, reference.mass):
            problems.append(f"cell masses deviate from the exact measure by {gap:.3g}")
    if closed is not None:
        nodes = state.u.xs
        exact = np.asarray(closed.value(nodes), dtype=float)
        gap = float(np.max(np.abs(state.u(nodes) - exact) / np.maximum(1.0, np.abs(exact))))
        if gap > tol:
            problems.append(f"u deviates from the exact velocity by {gap:.3g}")
    return problems


def unbounded_warning(state: EulerianState) -> str | None:
    if state.closed_form is not None and not state.closed_form.bounded:
        return f"velocity {state.closed_form.name!r} is unbounded; admitted as is"
    return None


def blowup_time(state: EulerianState) -> float:
    """
    Wave-breaking time 2 / sup(−u′); +∞ for non-decreasing u.

    Examples:
        u₀ = −x on [0, 1] breaks at t = 2.
    """
    if state.closed_form is not None:
        steepest = state.closed_form.min_slope
    else:
        slopes = [state.u.slope_lo, state.u.slope_hi]
        if state.u.xs.size > 1:
            slopes += state.u.segment_slopes().tolist()
        steepest = min(slopes)
    if steepest >= 0:
        return math.inf
    return 2.0 / -steepest


EulerianProvider = Callable[[float], EulerianState]


def _singular_points(state: EulerianState) -> np.ndarray:
    return np.concatenate([state.u.kinks(), cumulative(state.mu).kinks()])


def hs_residual(
    solution: EulerianProvider, t: float, x: float, h: float = DEFAULT_STEP
) -> float:
    """
    Pointwise residual |u_t + u·u_x − (½F − ¼C)| by central differences.

    Args:
        solution: maps a time to the Eulerian state at that time.
        t: time, at least ``h``.
        x: position.
        h: step in both t and x.

    Raises:
        SingularStencilError: if a kink or atom lies inside the stencil.
    """
    if t - h < 0:
        raise ValueError("time must be non-negative")
    states = {tt: solution(tt) for tt in (t - h, t, t + h)}
    for tt, state in states.items():
        near = _singular_points(state)
        if np.any(np.abs(near - x) <= h * (1 + 1e-9)):
            raise SingularStencilError(
                f"stencil around (t={t!r}, x={x!r}) meets a singularity at t={tt!r}"
            )
    now = states[t]
    u_t = (states[t + h].velocity(x) - states[t - h].velocity(x)) / (2 * h)
    u_x = (now.velocity(x + h) - now.velocity(x - h)) / (2 * h)
    F = cumulative(now.mu)
    source = 0.5 * F(x) - 0.25 * now.energy
    return abs(u_t + now.velocity(x) * u_x - source)
