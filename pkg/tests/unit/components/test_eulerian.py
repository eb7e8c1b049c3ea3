"""
Unit tests for the eulerian component.
"""

import math

import numpy as np
import pytest

from hsmetric.components.eulerian import (
    EulerianState,
    blowup_time,
    hs_residual,
    unbounded_warning,
    validate,
)
from hsmetric.components.measure import RadonMeasure
from hsmetric.components.piecewise import PiecewiseLinear
from hsmetric.components.scenarios import build, build_from_string
from hsmetric.components.transport import ConservativeSolution
from hsmetric.errors import SingularStencilError

UNIT_DENSITY = RadonMeasure.build(density=[(0.0, 1.0, 1.0)])


@pytest.fixture(name="wavebreak")
def wavebreak_fixture() -> EulerianState:
    """u₀ = −x on [0, 1] with μ₀ = dx there."""
    return EulerianState(PiecewiseLinear.interpolate([0.0, 1.0], [0.0, -1.0]), UNIT_DENSITY)


class TestValidate:
    """Admissibility checks on (u, μ)."""

    def test_compatible_state(self, wavebreak: EulerianState):
        report = validate(wavebreak)
        assert report.valid
        assert report.warnings == ()

    def test_slope_does_not_match_density(self):
        state = EulerianState(PiecewiseLinear.interpolate([0.0, 1.0], [0.0, -2.0]), UNIT_DENSITY)
        report = validate(state)
        assert not report.valid
        assert "slope²" in report.violations[0]

    def test_u_varies_without_energy(self):
        state = EulerianState(PiecewiseLinear.interpolate([0.0, 1.0], [0.0, 1.0]), RadonMeasure.zero())
        report = validate(state)
        assert any("not constant" in v for v in report.violations)

    def test_u_jumps(self):
        state = EulerianState(PiecewiseLinear([0.0], [0.0], [1.0]), RadonMeasure.zero())
        assert any("jumps" in v for v in validate(state).violations)

    def test_negative_mass(self):
        state = EulerianState(PiecewiseLinear.constant(0.0), RadonMeasure.build([(0.0, -1.0)]))
        report = validate(state)
        assert report.violations == ("negative atom mass -1.0 at x=0.0",)

    def test_atoms_admit_constant_velocity(self):
        state = build("two_delta").initial
        assert validate(state).valid

    def test_sampled_state_reports_grid_compatibility_as_warning(self):
        state = build("erf", resolution=256).initial
        report = validate(state)
        assert report.valid, report.violations
        assert any("grid accuracy" in w for w in report.warnings)

    def test_unbounded_velocity_is_admitted_with_warning(self):
        report = validate(build("arcsinh", resolution=256).initial)
        assert report.valid, report.violations
        assert any("unbounded" in w for w in report.warnings)

    def test_atoms_added_to_sampled_state(self):
        state = build_from_string("custom:x0=0,m0=1,base=erf", 256).initial
        report = validate(state)
        assert report.valid, report.violations
        assert state.energy == pytest.approx(math.sqrt(math.pi) + 1.0)


class TestBlowupTime:
    """t* = 2 / sup(−u′)."""

    def test_wavebreak(self, wavebreak: EulerianState):
        assert blowup_time(wavebreak) == 2.0

    def test_constant_velocity_never_breaks(self):
        assert blowup_time(build("delta").initial) == math.inf

    def test_closed_form_slope(self):
        assert blowup_time(build("erf", resolution=64).initial) == math.inf


class TestEulerianState:
    """Transformations and records."""

    def test_translated(self, wavebreak: EulerianState):
        moved = wavebreak.translated(0.5)
        assert moved.velocity(1.0) == pytest.approx(-0.5)
        assert moved.mu.density[0].start == 0.5
        assert moved.energy == wavebreak.energy

    def test_record(self):
        record = build("delta").initial.to_record()
        assert record["energy"] == 1.0
        assert record["u"] == [
            ["-inf", 0.0, "affine", 0.0, 0.0],
            [0.0, "inf", "affine", 0.0, 0.0],
        ]
        assert record["mu"]["atoms"] == [[0.0, 1.0]]

    def test_record_names_closed_form(self):
        record = build("erf", resolution=16).initial.to_record()
        assert record["u"][-1] == ["-inf", "inf", "erf"]


class TestResidual:
    """Pointwise residual of the equation by central differences."""

    def test_smooth_region_has_small_residual(self, wavebreak: EulerianState):
        solution = ConservativeSolution(wavebreak)
        assert hs_residual(solution, 1.0, 0.0) <= 1e-6

    def test_stencil_across_a_kink(self, wavebreak: EulerianState):
        solution = ConservativeSolution(wavebreak)
        with pytest.raises(SingularStencilError):
            hs_residual(solution, 1.0, 0.125)

    def test_delta_rarefaction_center(self):
        h = 1e-3
        assert hs_residual(build("delta").solution(), 1.0, 0.0, h) <= 10 * h * h

    def test_wavebreak_center(self):
        h = 1e-3
        assert hs_residual(build("wavebreak").solution(), 1.0, 0.0, h) <= 10 * h * h

    def test_zero_solution(self):
        assert hs_residual(build("zero").solution(), 1.0, 0.7) == 0.0

    @pytest.mark.parametrize("name", ["delta", "wavebreak"])
    def test_second_order_under_refinement(self, name: str):
        rng = np.random.default_rng(11)
        solution = build(name).solution()
        steps = (1e-2, 5e-3, 2.5e-3)
        for _ in range(5):
            if name == "delta":
                t = rng.uniform(1.0, 2.0)
                x = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 0.7) * t * t / 8
            else:
                t = rng.uniform(0.5, 1.25)
                lo, hi = -t * t / 8, 1 - t + t * t / 8
                x = lo + rng.uniform(0.25, 0.75) * (hi - lo)
            residuals = [hs_residual(solution, t, x, h) for h in steps]
            assert residuals[-1] > 0
            order = math.log(residuals[0] / residuals[-1]) / math.log(4.0)
            assert order >= 1.8, (t, x, residuals)

    def test_stencil_before_time_zero(self, wavebreak: EulerianState):
        with pytest.raises(ValueError, match="non-negative"):
            hs_residual(ConservativeSolution(wavebreak), 0.0, 0.5)


@pytest.mark.parametrize(("name", "flagged"), [("arcsinh", True), ("erf", False), ("wavebreak", False)])
def test_unbounded_velocity_is_flagged(name: str, flagged: bool):
    warning = unbounded_warning(build(name, resolution=64).initial)
    assert (warning is not None) == flagged
    if flagged:
        assert "unbounded" in warning
