"""
Named initial data with known exact solutions.

Scenario strings look like ``delta:alpha=1.5`` or
``translate:base=wavebreak,h=0.1``. Every builder returns a :class:`Scenario`
holding the initial Eulerian state and, where available, closed-form
evaluators for the transport variables and the Eulerian solution, which serve
as test oracles.
"""

from __future__ import annotations

import logging
import math
import re
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..errors import ScenarioError
from .eulerian import ClosedFormVelocity, EulerianState, blowup_time
from .measure import Atom, RadonMeasure, SmoothDensity, measure_integrability
from .piecewise import PiecewiseLinear
from .transport import BoundaryCase, ConservativeSolution

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 4096

ParamValue = float | str
Params = dict[str, ParamValue]
# (t, η) ↦ (χ, 𝒰) and (t, x) ↦ (u, F)
TransportOracle = Callable[[float, ArrayLike], tuple[np.ndarray, np.ndarray]]
EulerianOracle = Callable[[float, ArrayLike], tuple[np.ndarray, np.ndarray]]

_NAME_RE = re.compile(r"^[a-z_]+$")


@dataclass(frozen=True, slots=True)
class ScenarioNotes:
    integrable: bool
    boundary_case: BoundaryCase
    blowup_time: float
    closed_form_eulerian: bool


@dataclass(frozen=True)
class Scenario:
    """Initial data plus its exact oracles."""

    name: str
    params: Params
    initial: EulerianState
    exact_transport: TransportOracle | None = field(default=None, compare=False)
    exact_eulerian: EulerianOracle | None = field(default=None, compare=False)
    notes: ScenarioNotes | None = None

    @property
    def energy(self) -> float:
        return self.initial.energy

    @property
    def label(self) -> str:
        return format_scenario(self.name, self.params)

    def solution(self) -> ConservativeSolution:
        return ConservativeSolution(self.initial)


def parse_scenario(text: str) -> tuple[str, Params]:
    """
    Split ``name:key=value,...`` into a name and parameters.

    Values are floats except for ``base``, which names another scenario.

    Raises:
        ScenarioError: on malformed input.
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.strip()
    if not _NAME_RE.match(name):
        raise ScenarioError(f"Invalid scenario name: {name!r}")
    params: Params = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ScenarioError(f"Malformed scenario parameter {item!r} in {text!r}")
            if key in params:
                raise ScenarioError(f"Duplicate scenario parameter {key!r}")
            if key == "base":
                params[key] = value
                continue
            try:
                params[key] = float(value)
            except ValueError as exc:
                raise ScenarioError(f"Parameter {key!r} must be a number, got {value!r}") from exc
            if not math.isfinite(params[key]):
                raise ScenarioError(f"Parameter {key!r} must be finite")
    return name, params


def format_scenario(name: str, params: Params) -> str:
    if not params:
        return name
    return name + ":" + ",".join(f"{k}={v}" for k, v in params.items())


def _take(params: Params, allowed: dict[str, ParamValue], name: str) -> dict[str, Any]:
    unknown = set(params) - set(allowed)
    if unknown:
        raise ScenarioError(f"Unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    return {**allowed, **params}


def _notes(initial: EulerianState, case: BoundaryCase, closed: bool) -> ScenarioNotes:
    return ScenarioNotes(measure_integrability(initial.mu), case, blowup_time(initial), closed)


# delta: u₀ = 0, μ₀ = αδ₀


def delta_transport(alpha: float) -> TransportOracle:
    def oracle(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        eta = np.asarray(eta, dtype=float)
        return t * t / 4.0 * (eta - alpha / 2.0), t / 2.0 * (eta - alpha / 2.0)

    return oracle


def delta_eulerian(alpha: float) -> EulerianOracle:
    """u(t, x) = 2x/t on |x| ≤ αt²/8, ±αt/4 outside; F follows from μ = u_x² dx."""

    def oracle(t: float, x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if t == 0 or alpha == 0:
            return np.zeros_like(x), np.where(x > 0, alpha, 0.0)
        half = alpha * t * t / 8.0
        u = np.where(np.abs(x) <= half, 2.0 * x / t, np.sign(x) * alpha * t / 4.0)
        F = np.clip(4.0 * x / (t * t) + alpha / 2.0, 0.0, alpha)
        return u, F

    return oracle


def build_delta(params: Params, resolution: int) -> Scenario:
    del resolution
    p = _take(params, {"alpha": 1.0}, "delta")
    alpha = p["alpha"]
    if alpha <= 0:
        raise ScenarioError("delta requires alpha > 0")
    initial = EulerianState(PiecewiseLinear.constant(0.0), RadonMeasure.build([(0.0, alpha)]))
    return Scenario(
        "delta",
        {"alpha": alpha},
        initial,
        delta_transport(alpha),
        delta_eulerian(alpha),
        _notes(initial, BoundaryCase.BOTH_FINITE, True),
    )


# wavebreak: u₀ = −x on [0, 1], μ₀ = 𝕀_[0,1] dx, breaking at t = 2


def _wavebreak_transport(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    eta = np.asarray(eta, dtype=float)
    chi = t * t / 4.0 * (eta - 0.5) - t * eta + eta
    ucal = t / 2.0 * (eta - 0.5) - eta
    return chi, ucal


def _wavebreak_eulerian(t: float, x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if t == 2:
        return np.full_like(x, -0.5), np.where(x > -0.5, 1.0, 0.0)
    lo = -t * t / 8.0
    hi = t * t / 8.0 - t + 1.0
    middle = (2.0 * x + t / 2.0) / (t - 2.0)
    u = np.where(x <= lo, -t / 4.0, np.where(x >= hi, t / 4.0 - 1.0, middle))
    F = np.clip((4.0 * x + t * t / 2.0) / (t - 2.0) ** 2, 0.0, 1.0)
    return u, F


def build_wavebreak(params: Params, resolution: int) -> Scenario:
    del resolution
    _take(params, {}, "wavebreak")
    initial = EulerianState(
        PiecewiseLinear.interpolate([0.0, 1.0], [0.0, -1.0]),
        RadonMeasure.build(density=[(0.0, 1.0, 1.0)]),
    )
    return Scenario(
        "wavebreak",
        {},
        initial,
        _wavebreak_transport,
        _wavebreak_eulerian,
        _notes(initial, BoundaryCase.BOTH_FINITE, True),
    )


# two_delta: u₀ = 0, μ₀ = δ₀ + 2δ₁


def _two_delta_transport(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    eta = np.asarray(eta, dtype=float)
    chi0 = np.where(eta > 1.0, 1.0, 0.0)
    return t * t / 4.0 * (eta - 1.5) + chi0, t / 2.0 * (eta - 1.5)


def _two_delta_eulerian(t: float, x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.zeros_like(x), np.select([x <= 0, x <= 1], [0.0, 1.0], 3.0)
    s = t * t / 8.0
    conditions = [x <= -3 * s, x <= -s, x <= 1 - s, x <= 1 + 3 * s]
    u = np.select(
        conditions,
        [-3 * t / 4.0, 2.0 * x / t, -t / 4.0, 2.0 * (x - 1.0) / t],
        3 * t / 4.0,
    )
    F = np.select(
        conditions,
        [0.0, 4.0 * x / (t * t) + 1.5, 1.0, 4.0 * (x - 1.0) / (t * t) + 1.5],
        3.0,
    )
    return u, F


def build_two_delta(params: Params, resolution: int) -> Scenario:
    del resolution
    _take(params, {}, "two_delta")
    initial = EulerianState(
        PiecewiseLinear.constant(0.0), RadonMeasure.build([(0.0, 1.0), (1.0, 2.0)])
    )
    return Scenario(
        "two_delta",
        {},
        initial,
        _two_delta_transport,
        _two_delta_eulerian,
        _notes(initial, BoundaryCase.BOTH_FINITE, True),
    )


def build_zero(params: Params, resolution: int) -> Scenario:
    del resolution
    _take(params, {}, "zero")
    initial = EulerianState(PiecewiseLinear.constant(0.0), RadonMeasure.zero())

    def transport(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        zeros = np.zeros_like(np.asarray(eta, dtype=float))
        return zeros, zeros

    def eulerian(t: float, x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        zeros = np.zeros_like(np.asarray(x, dtype=float))
        return zeros, zeros

    return Scenario(
        "zero", {}, initial, transport, eulerian, _notes(initial, BoundaryCase.BOTH_FINITE, True)
    )


# smooth data, sampled on an η-grid


def _smooth_scenario(
    name: str,
    smooth: SmoothDensity,
    closed: ClosedFormVelocity,
    resolution: int,
) -> Scenario:
    mu = RadonMeasure.from_smooth(smooth, resolution)
    _, xs = smooth.discretize(resolution)
    u = PiecewiseLinear.interpolate(xs, closed.value(xs))
    initial = EulerianState(u, mu, closed, resolution)
    C = smooth.mass

    def transport(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        eta = np.asarray(eta, dtype=float)
        chi0 = smooth.quantile(eta)
        ucal0 = closed.value(chi0)
        return (
            t * t / 4.0 * (eta - C / 2.0) + t * ucal0 + chi0,
            t / 2.0 * (eta - C / 2.0) + ucal0,
        )

    return Scenario(
        name,
        {},
        initial,
        transport,
        None,
        _notes(initial, BoundaryCase.BOTH_INFINITE, False),
    )


def erf_density() -> tuple[SmoothDensity, ClosedFormVelocity]:
    """u₀ = (π/2)^½ erf(x/√2), μ₀ = e^{−x²} dx, C = √π."""
    C = math.sqrt(math.pi)
    smooth = SmoothDensity(
        "erf",
        C,
        cdf=lambda x: C / 2.0 * (1.0 + special.erf(x)),
        quantile=lambda eta: special.erfinv(2.0 * np.asarray(eta) / C - 1.0),
        density=lambda x: np.exp(-np.square(x)),
    )
    closed = ClosedFormVelocity(
        "erf",
        value=lambda x: math.sqrt(math.pi / 2.0) * special.erf(np.asarray(x) / math.sqrt(2.0)),
        slope=lambda x: np.exp(-np.square(x) / 2.0),
        min_slope=0.0,
        bounded=True,
    )
    return smooth, closed


def arcsinh_density() -> tuple[SmoothDensity, ClosedFormVelocity]:
    """u₀ = arcsinh x, μ₀ = dx/(1 + x²), C = π."""
    smooth = SmoothDensity(
        "arcsinh",
        math.pi,
        cdf=lambda x: np.arctan(x) + math.pi / 2.0,
        quantile=lambda eta: np.tan(np.asarray(eta) - math.pi / 2.0),
        density=lambda x: 1.0 / (1.0 + np.square(x)),
    )
    closed = ClosedFormVelocity(
        "arcsinh",
        value=np.arcsinh,
        slope=lambda x: 1.0 / np.sqrt(1.0 + np.square(x)),
        min_slope=0.0,
        bounded=False,
    )
    return smooth, closed


def build_erf(params: Params, resolution: int) -> Scenario:
    _take(params, {}, "erf")
    return _smooth_scenario("erf", *erf_density(), resolution)


def build_arcsinh(params: Params, resolution: int) -> Scenario:
    _take(params, {}, "arcsinh")
    return _smooth_scenario("arcsinh", *arcsinh_density(), resolution)


def _base_of(params: Params, name: str) -> tuple[str, Params, Params]:
    """Split off ``base`` and the parameters that belong to the base scenario."""
    base = params.get("base")
    if base is not None and not isinstance(base, str):
        raise ScenarioError(f"{name}: base must be a scenario name")
    own = {k: v for k, v in params.items() if k == "base" or _owned_by(name, k)}
    forwarded = {k: v for k, v in params.items() if k not in own}
    return str(base) if base is not None else "", own, forwarded


def _owned_by(name: str, key: str) -> bool:
    if name == "translate":
        return key == "h"
    return re.fullmatch(r"[xm]\d+", key) is not None


def build_translate(params: Params, resolution: int) -> Scenario:
    """The base scenario shifted in space by ``h``."""
    base_name, own, forwarded = _base_of(params, "translate")
    if not base_name:
        raise ScenarioError("translate requires base=<scenario>")
    h = float(own.get("h", 0.0))
    base = build(base_name, forwarded, resolution)
    initial = base.initial.translated(h)

    transport = None
    if base.exact_transport is not None:
        base_transport = base.exact_transport

        def transport(t: float, eta: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
            chi, ucal = base_transport(t, eta)
            return chi + h, ucal

    eulerian = None
    if base.exact_eulerian is not None:
        base_eulerian = base.exact_eulerian

        def eulerian(t: float, x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
            return base_eulerian(t, np.asarray(x, dtype=float) - h)

    return Scenario("translate", dict(params), initial, transport, eulerian, base.notes)


def build_custom(params: Params, resolution: int) -> Scenario:
    """
    Atoms ``x0, m0, x1, m1, ...`` added to the base scenario, or to u ≡ 0
    with no other energy.
    """
    base_name, own, forwarded = _base_of(params, "custom")
    indices = sorted({int(k[1:]) for k in own if k != "base"})
    atoms = []
    for i in indices:
        if f"x{i}" not in own or f"m{i}" not in own:
            raise ScenarioError(f"custom: atom {i} needs both x{i} and m{i}")
        mass = float(own[f"m{i}"])
        if mass <= 0:
            raise ScenarioError(f"custom: mass m{i} must be positive")
        atoms.append(Atom(float(own[f"x{i}"]), mass))
    if base_name:
        base = build(base_name, forwarded, resolution)
        initial = base.initial.with_atoms(atoms)
        case = base.notes.boundary_case if base.notes else BoundaryCase.BOTH_FINITE
    else:
        if forwarded:
            raise ScenarioError(f"Unknown parameter(s) for custom: {', '.join(sorted(forwarded))}")
        if not atoms:
            raise ScenarioError("custom requires at least one atom or a base scenario")
        initial = EulerianState(PiecewiseLinear.constant(0.0), RadonMeasure.build(atoms))
        case = BoundaryCase.BOTH_FINITE
    return Scenario("custom", dict(params), initial, None, None, _notes(initial, case, False))


BUILDERS: dict[str, Callable[[Params, int], Scenario]] = {
    "delta": build_delta,
    "wavebreak": build_wavebreak,
    "two_delta": build_two_delta,
    "zero": build_zero,
    "erf": build_erf,
    "arcsinh": build_arcsinh,
    "translate": build_translate,
    "custom": build_custom,
}

SCENARIO_NAMES = tuple(BUILDERS)
# Scenarios with exact transport oracles used by the verification suites.
CORE_SCENARIOS = ("delta", "wavebreak", "two_delta", "zero", "erf", "arcsinh")


def build(name: str, params: Params | None = None, resolution: int = DEFAULT_RESOLUTION) -> Scenario:
    """
    Build a scenario by name.

    Raises:
        ScenarioError: for unknown names or invalid parameters.
    """
    builder = BUILDERS.get(name)
    if builder is None:
        raise ScenarioError(
            f"Unknown scenario {name!r}; expected one of {', '.join(SCENARIO_NAMES)}"
        )
    scenario = builder(dict(params or {}), resolution)
    logger.debug("built scenario %s with energy %r", scenario.label, scenario.energy)
    return scenario


def build_from_string(text: str, resolution: int = DEFAULT_RESOLUTION) -> Scenario:
    name, params = parse_scenario(text)
    return build(name, params, resolution)


@dataclass(frozen=True)
class CounterexamplePair:
    """
    Two conservative solutions with the same initial velocity u₀ ≡ 0: the
    trivial one (μ₀ = 0) and the one with μ₀ = αδ₀.
    """

    alpha: float
    trivial: ConservativeSolution
    nontrivial: ConservativeSolution


def counterexample_velocity(alpha: float, t: float, x: ArrayLike) -> np.ndarray:
    """u(t, x) = 2x/t on |x| < αt²/8 and ±αt/4 outside."""
    u, _ = delta_eulerian(alpha)(t, x)
    return u


def counterexample_pair(alpha: float) -> CounterexamplePair:
    if alpha < 0:
        raise ScenarioError("alpha must be non-negative")
    trivial = build_zero({}, DEFAULT_RESOLUTION).initial
    nontrivial = trivial if alpha == 0 else build_delta({"alpha": alpha}, DEFAULT_RESOLUTION).initial
    return CounterexamplePair(alpha, ConservativeSolution(trivial), ConservativeSolution(nontrivial))
