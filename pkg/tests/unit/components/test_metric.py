"""
Unit tests for the metric component.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsmetric.components.measure import RadonMeasure
from hsmetric.components.metric import (
    REPORT_FIELDS,
    component_bounds,
    distance,
    distance_fixed_mass,
    fixed_mass_bound_factor,
    lipschitz_factor,
    rescaled,
    verify_fixed_mass,
    verify_lipschitz,
    wasserstein,
)
from hsmetric.components.scenarios import Scenario, build
from hsmetric.components.transport import init_transport
from hsmetric.errors import MassMismatchError, NonIntegrableError

atom_strategy = st.tuples(st.floats(-2.0, 2.0), st.floats(0.1, 2.0))


def _custom(atoms: list[tuple[float, float]]) -> Scenario:
    params: dict[str, float | str] = {}
    for i, (x, m) in enumerate(atoms):
        params[f"x{i}"] = x
        params[f"m{i}"] = m
    return build("custom", params)


@pytest.fixture(name="delta_pair")
def delta_pair_fixture() -> tuple[Scenario, Scenario]:
    return build("delta", {"alpha": 1.0}), build("delta", {"alpha": 2.0})


class TestFactors:
    """Growth factors of the bounds."""

    def test_lipschitz_factor(self):
        assert lipschitz_factor(0.0) == 1.0
        assert lipschitz_factor(4.0) == 7.0

    def test_fixed_mass_factor(self):
        assert fixed_mass_bound_factor(2.0, 1.5) == 4.0


class TestWasserstein:
    """d_W as the L¹ distance of pseudo-inverses."""

    def test_shifted_atom(self):
        mu = RadonMeasure.build([(0.0, 1.0)])
        assert wasserstein(mu, mu.translated(0.75)) == pytest.approx(0.75)

    def test_mass_mismatch(self):
        with pytest.raises(MassMismatchError):
            wasserstein(RadonMeasure.build([(0.0, 1.0)]), RadonMeasure.build([(0.0, 2.0)]))

    def test_non_integrable(self):
        mu = build("arcsinh", resolution=64).initial.mu
        with pytest.raises(NonIntegrableError, match="integrability condition fails") as info:
            wasserstein(mu, mu)
        assert info.value.label == "first measure"

    def test_zero_measures(self):
        assert wasserstein(RadonMeasure.zero(), RadonMeasure.zero()) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(st.lists(atom_strategy, min_size=1, max_size=3), st.floats(-3.0, 3.0))
    def test_translation_moves_every_quantile(self, atoms: list[tuple[float, float]], h: float):
        mu = RadonMeasure.build(atoms)
        assert wasserstein(mu, mu.translated(h)) == pytest.approx(
            abs(h) * mu.total_mass, rel=1e-9, abs=1e-12
        )


class TestDistance:
    """The rescaled metric between solutions."""

    def test_delta_pair_at_time_zero(self, delta_pair: tuple[Scenario, Scenario]):
        first, second = delta_pair
        report = distance(first.initial, second.initial, 0.0)
        assert report.d0 == 1.0
        assert report.d == 1.0
        assert report.satisfied
        assert report.to_row() == ["0", "1", "1", "1", "true", "0", "0", "1"]
        assert len(report.to_row()) == len(REPORT_FIELDS)

    def test_delta_pair_growth(self, delta_pair: tuple[Scenario, Scenario]):
        first, second = delta_pair
        report = distance(first.initial, second.initial, 2.0)
        # ‖Δ𝒰̂‖_∞ = t/4 and ‖Δχ̂‖₁ = t²/16
        assert report.components.uinf == pytest.approx(0.5)
        assert report.components.chi_l1 == pytest.approx(0.25)
        assert report.d == pytest.approx(1.75)
        assert report.bound_factor == 3.5
        assert report.satisfied
        assert report.excess < 0

    def test_record(self, delta_pair: tuple[Scenario, Scenario]):
        first, second = delta_pair
        record = distance(first.initial, second.initial, 1.0).to_record()
        assert set(record) == {"t", "d", "bound_factor", "d0", "satisfied", "components"}
        assert record["satisfied"] is True

    def test_negative_time(self, delta_pair: tuple[Scenario, Scenario]):
        first, second = delta_pair
        with pytest.raises(ValueError, match="non-negative"):
            distance(first.initial, second.initial, -0.5)

    def test_integrability_gate_names_state(self):
        erf = build("erf", resolution=64)
        arcsinh = build("arcsinh", resolution=64)
        with pytest.raises(NonIntegrableError, match="integrability") as info:
            distance(erf.initial, arcsinh.initial, 1.0, ("erf", "arcsinh"))
        assert info.value.label == "arcsinh"

    def test_zero_energy_rescaling(self):
        chi, ucal = rescaled(init_transport(build("zero").initial))
        assert (chi.domain_lo, chi.domain_hi) == (0.0, 1.0)
        assert chi(0.5) == 0.0
        assert ucal(0.5) == 0.0

    def test_sweep(self, delta_pair: tuple[Scenario, Scenario]):
        first, second = delta_pair
        times = [0.0, 1.0, 2.0, 4.0, 8.0]
        sweep = verify_lipschitz(first.initial, second.initial, times)
        assert [r.t for r in sweep.reports] == times
        assert sweep.passed
        with pytest.raises(ValueError):
            verify_lipschitz(first.initial, second.initial, [1.0, -1.0])

    @settings(max_examples=20, deadline=None)
    @given(
        st.lists(atom_strategy, min_size=1, max_size=2),
        st.lists(atom_strategy, min_size=1, max_size=2),
        st.lists(atom_strategy, min_size=1, max_size=2),
        st.sampled_from([0.0, 0.5, 2.0, 5.0]),
    )
    def test_metric_axioms(
        self,
        a: list[tuple[float, float]],
        b: list[tuple[float, float]],
        c: list[tuple[float, float]],
        t: float,
    ):
        sa, sb, sc = (_custom(atoms).initial for atoms in (a, b, c))
        ab = distance(sa, sb, t).d
        assert ab == pytest.approx(distance(sb, sa, t).d, rel=1e-12, abs=1e-12)
        assert distance(sa, sa, t).d == pytest.approx(0.0, abs=1e-12)
        assert distance(sa, sc, t).d <= ab + distance(sb, sc, t).d + 1e-9

    @settings(max_examples=20, deadline=None)
    @given(
        st.lists(atom_strategy, min_size=1, max_size=3),
        st.lists(atom_strategy, min_size=1, max_size=3),
    )
    def test_lipschitz_bound_on_atom_mixtures(
        self, a: list[tuple[float, float]], b: list[tuple[float, float]]
    ):
        sweep = verify_lipschitz(_custom(a).initial, _custom(b).initial, [0.5, 1.0, 2.0, 5.0, 10.0])
        assert sweep.passed


class TestComponentBounds:
    """The componentwise inequalities and the fixed-mass bound."""

    def test_delta_pair(self, delta_pair: tuple[Scenario, Scenario]):
        ts1, ts2 = (init_transport(s.initial) for s in delta_pair)
        for t in (0.5, 2.0, 10.0):
            check = component_bounds(ts1, ts2, t)
            assert check.satisfied
            assert check.uinf == pytest.approx(t / 4)

    def test_wavebreak_against_its_translate(self):
        ts1 = init_transport(build("wavebreak").initial)
        ts2 = init_transport(build("translate", {"base": "wavebreak", "h": 0.3}).initial)
        assert component_bounds(ts1, ts2, 3.0).satisfied

    def test_fixed_mass(self):
        ts1 = init_transport(build("delta").initial)
        ts2 = init_transport(build("translate", {"base": "delta", "h": 0.5}).initial)
        assert distance_fixed_mass(ts1, ts2) == pytest.approx(0.5)
        checks = verify_fixed_mass(ts1, ts2, [0.0, 1.0, 4.0])
        assert all(c.satisfied for c in checks)
        assert [c.d for c in checks] == pytest.approx([0.5, 0.5, 0.5])

    def test_fixed_mass_requires_equal_energy(self, delta_pair: tuple[Scenario, Scenario]):
        ts1, ts2 = (init_transport(s.initial) for s in delta_pair)
        with pytest.raises(MassMismatchError):
            distance_fixed_mass(ts1, ts2)
