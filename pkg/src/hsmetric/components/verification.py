"""
Property suites run by ``hsmetric verify``.

Each suite returns a list of :class:`PropertyResult`; a suite passes when
every result passes. Randomised suites draw from ``numpy.random.default_rng``
seeded by the caller, so runs are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .eulerian import EulerianState
from .lagrangian import (
    lagrangian_deviation,
    map_L,
    map_M,
    project_Pi,
    semigroup_S,
)
from .measure import cumulative, inverse_to_cumulative, pseudo_inverse
from .metric import component_bounds, verify_lipschitz
from .piecewise import max_deviation
from .scenarios import CORE_SCENARIOS, DEFAULT_RESOLUTION, Scenario, build
from .transport import evolve, init_transport, reconstruct_eulerian

logger = logging.getLogger(__name__)

ROUNDTRIP_TOL = 1e-12
PIPELINE_TOL = 1e-10
ODE_TOL = 1e-10
CONSERVATION_TOL = 1e-12
ODE_STEP = 0.25
ODE_TIMES = (0.5, 1.0, 2.0, 2.5)
PIPELINE_TIMES = (0.5, 1.0, 2.0, 3.0)
LIPSCHITZ_TIMES = (0.5, 1.0, 2.0, 5.0, 10.0)
DELTA_PAIR_TIMES = (0.0, 1.0, 2.0, 4.0, 8.0)
ETA_POINTS = 64

SUITES = ("roundtrip", "ode", "conservation", "lipschitz")


@dataclass(frozen=True, slots=True)
class PropertyResult:
    name: str
    passed: bool
    max_error: float
    detail: str = ""


def _result(name: str, error: float, tol: float, detail: str = "") -> PropertyResult:
    return PropertyResult(name, bool(error <= tol), float(error), detail or f"tol {tol:g}")


def eulerian_deviation(s1: EulerianState, s2: EulerianState) -> float:
    """Relative deviation of velocities and cumulative energies."""
    return max(
        max_deviation(s1.u, s2.u, relative=True),
        max_deviation(cumulative(s1.mu), cumulative(s2.mu), relative=True),
    )


def core_scenarios(resolution: int = DEFAULT_RESOLUTION) -> list[Scenario]:
    return [build(name, resolution=resolution) for name in CORE_SCENARIOS]


def roundtrip_suite(resolution: int = DEFAULT_RESOLUTION) -> list[PropertyResult]:
    """M∘L = id, L∘M = id on the normalised slice, duality, pipeline equivalence."""
    results = []
    for scenario in core_scenarios(resolution):
        s = scenario.initial
        X = map_L(s)
        results.append(
            _result(f"M∘L = id [{scenario.label}]", eulerian_deviation(map_M(X), s), ROUNDTRIP_TOL)
        )
        projected = project_Pi(semigroup_S(X, 1.0))
        results.append(
            _result(
                f"L∘M = id on Π-states [{scenario.label}]",
                lagrangian_deviation(map_L(map_M(projected)), projected),
                ROUNDTRIP_TOL,
            )
        )
        C = s.energy
        F = cumulative(s.mu)
        if C > 0:
            back = inverse_to_cumulative(pseudo_inverse(F, C), C)
            results.append(
                _result(
                    f"duality F → χ → F [{scenario.label}]",
                    max_deviation(back, F, relative=True),
                    ROUNDTRIP_TOL,
                )
            )
        ts0 = init_transport(s)
        worst = 0.0
        for t in PIPELINE_TIMES:
            via_transport = reconstruct_eulerian(evolve(ts0, t))
            via_lagrangian = map_M(project_Pi(semigroup_S(X, t)))
            worst = max(worst, eulerian_deviation(via_transport, via_lagrangian))
        results.append(
            _result(f"transport = Lagrangian pipeline [{scenario.label}]", worst, PIPELINE_TOL)
        )
    return results


def ode_suite(resolution: int = DEFAULT_RESOLUTION) -> list[PropertyResult]:
    """χ_t = 𝒰 and 𝒰_t = η/2 − C/4 by symmetric differences."""
    results = []
    for scenario in core_scenarios(resolution):
        ts0 = init_transport(scenario.initial)
        C = ts0.energy
        etas = C * np.arange(1, ETA_POINTS + 1) / (ETA_POINTS + 1) if C > 0 else np.array([0.0])
        chi_err = ucal_err = 0.0
        for t in ODE_TIMES:
            before, now, after = (evolve(ts0, t + k * ODE_STEP) for k in (-1, 0, 1))
            ucal = np.atleast_1d(now.Ucal(etas))
            dchi = (np.atleast_1d(after.chi(etas)) - np.atleast_1d(before.chi(etas))) / (2 * ODE_STEP)
            chi_err = max(chi_err, float(np.max(np.abs(dchi - ucal) / np.maximum(1.0, np.abs(ucal)))))
            du = (np.atleast_1d(after.Ucal(etas)) - np.atleast_1d(before.Ucal(etas))) / (2 * ODE_STEP)
            ucal_err = max(ucal_err, float(np.max(np.abs(du - (etas / 2.0 - C / 4.0)))))
        results.append(_result(f"χ_t = 𝒰 [{scenario.label}]", chi_err, ODE_TOL))
        results.append(_result(f"𝒰_t = η/2 − C/4 [{scenario.label}]", ucal_err, ODE_TOL))
    return results


def conservation_suite(resolution: int = DEFAULT_RESOLUTION) -> list[PropertyResult]:
    """μ(t, ℝ) = C at 11 times in [0, 5]."""
    results = []
    for scenario in core_scenarios(resolution):
        ts0 = init_transport(scenario.initial)
        C = ts0.energy
        worst = max(
            abs(reconstruct_eulerian(evolve(ts0, t)).energy - C)
            for t in np.linspace(0.0, 5.0, 11)
        )
        results.append(
            _result(
                f"energy conservation [{scenario.label}]",
                worst / max(1.0, C),
                CONSERVATION_TOL,
            )
        )
    return results


def random_state(rng: np.random.Generator) -> Scenario:
    """
    A random integrable scenario: a translate of the wave-breaking or delta
    data, an atom mixture, or wave-breaking data with extra atoms.
    """
    kind = int(rng.integers(4))
    h = float(rng.uniform(-1.0, 1.0))
    if kind == 0:
        return build("translate", {"base": "wavebreak", "h": h})
    if kind == 1:
        return build("translate", {"base": "delta", "alpha": float(rng.uniform(0.5, 2.0)), "h": h})
    params: dict[str, float | str] = {}
    count = int(rng.integers(1, 4)) if kind == 2 else int(rng.integers(1, 3))
    for i in range(count):
        params[f"x{i}"] = float(rng.uniform(-2.0, 2.0))
        params[f"m{i}"] = float(rng.uniform(0.1, 2.0))
    if kind == 3:
        params["base"] = "wavebreak"
    return build("custom", params)


def lipschitz_suite(seed: int = 42, pairs: int = 100) -> list[PropertyResult]:
    """The 1 + t + t²/8 bound and the componentwise bounds on random pairs."""
    rng = np.random.default_rng(seed)
    violations = component_violations = 0
    worst = worst_component = 0.0
    for _ in range(pairs):
        a, b = random_state(rng), random_state(rng)
        sweep = verify_lipschitz(a.initial, b.initial, LIPSCHITZ_TIMES, (a.label, b.label))
        violations += sum(not r.satisfied for r in sweep.reports)
        worst = max([worst] + [r.excess for r in sweep.reports])
        ts1, ts2 = init_transport(a.initial), init_transport(b.initial)
        for t in LIPSCHITZ_TIMES:
            check = component_bounds(ts1, ts2, t)
            component_violations += not check.satisfied
            worst_component = max(worst_component, check.excess)
    results = [
        PropertyResult(
            "Lipschitz bound on random pairs",
            violations == 0,
            max(worst, 0.0),
            f"{pairs} pairs, {violations} violation(s)",
        ),
        PropertyResult(
            "componentwise bounds on random pairs",
            component_violations == 0,
            max(worst_component, 0.0),
            f"{pairs} pairs, {component_violations} violation(s)",
        ),
    ]
    delta1, delta2 = build("delta", {"alpha": 1.0}), build("delta", {"alpha": 2.0})
    sweep = verify_lipschitz(delta1.initial, delta2.initial, DELTA_PAIR_TIMES)
    d0_error = abs(sweep.reports[0].d0 - 1.0)
    results.append(
        PropertyResult(
            "delta pair: d(0) = |α₁ − α₂| and bound",
            sweep.passed and d0_error == 0.0,
            max(d0_error, max(r.excess for r in sweep.reports), 0.0),
            f"d(0) = {sweep.reports[0].d0!r}",
        )
    )
    return results


def run_suite(
    name: str, seed: int = 42, pairs: int = 100, resolution: int = DEFAULT_RESOLUTION
) -> list[PropertyResult]:
    """Run one suite by name, or every suite for ``all``."""
    if name == "all":
        results: list[PropertyResult] = []
        for suite in SUITES:
            results += run_suite(suite, seed, pairs, resolution)
        return results
    logger.info("running %s suite", name)
    if name == "roundtrip":
        return roundtrip_suite(resolution)
    if name == "ode":
        return ode_suite(resolution)
    if name == "conservation":
        return conservation_suite(resolution)
    if name == "lipschitz":
        return lipschitz_suite(seed, pairs)
    raise ValueError(f"Unknown suite {name!r}")


def all_passed(results: list[PropertyResult]) -> bool:
    return all(r.passed for r in results)
