"""
Finite Radon measures on the line, their cumulative energy functions and
pseudo-inverses.

A measure is a finite list of atoms plus a piecewise-constant density. Its
cumulative function F(x) = μ((−∞, x)) is left-continuous and its
pseudo-inverse χ(η) = sup{x | F(x) < η} lives on [0, C] with C = μ(ℝ).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy import integrate

from ..errors import MassMismatchError, NonIntegrableError
from ..utils.encoding import decode_real
from .piecewise import (
    MonotoneFunction,
    PiecewiseLinear,
    abs_integral,
    combine,
    merge_points,
)

logger = logging.getLogger(__name__)

ATOM_MERGE_TOL = 1e-14
MASS_TOL = 1e-10
DECADES = 8
TAIL_TOL = 1e-6


@dataclass(frozen=True, slots=True)
class Atom:
    """Point mass ``mass`` at ``location``."""

    location: float
    mass: float


@dataclass(frozen=True, slots=True)
class DensityPiece:
    """Constant density ``value`` on [start, end)."""

    start: float
    end: float
    value: float

    @property
    def mass(self) -> float:
        return (self.end - self.start) * self.value


@dataclass(frozen=True)
class SmoothDensity:
    """
    Exact description of an absolutely continuous measure.

    Attributes:
        name: closed-form tag, e.g. "erf".
        mass: total mass C.
        cdf: x ↦ μ((−∞, x)).
        quantile: η ↦ χ(η) on (0, C).
        density: x ↦ dμ/dx.
        unbounded: whether the support is unbounded on each side.
    """

    name: str
    mass: float
    cdf: Callable[[Any], Any]
    quantile: Callable[[Any], Any]
    density: Callable[[Any], Any]
    unbounded: tuple[bool, bool] = (True, True)

    def discretize(self, resolution: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Quantile nodes on the equispaced η-grid η_i = C·i/N.

        Interior nodes are exact quantiles; the two end nodes are linear
        extrapolations of their neighbours, since the exact quantile is
        infinite there.

        Returns:
            ``(etas, xs)``, both of length N + 1.
        """
        if resolution < 3:
            raise ValueError("resolution must be at least 3")
        etas = self.mass * np.arange(resolution + 1) / resolution
        xs = np.empty(resolution + 1)
        xs[1:-1] = self.quantile(etas[1:-1])
        xs[0] = 2.0 * xs[1] - xs[2]
        xs[-1] = 2.0 * xs[-2] - xs[-3]
        return etas, xs

    def shifted(self, h: float) -> SmoothDensity:
        cdf, quantile, density = self.cdf, self.quantile, self.density
        return replace(
            self,
            cdf=lambda x: cdf(np.asarray(x) - h),
            quantile=lambda eta: quantile(eta) + h,
            density=lambda x: density(np.asarray(x) - h),
        )


def _merge_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    ordered = sorted(atoms, key=lambda a: a.location)
    merged: list[Atom] = []
    for atom in ordered:
        if merged and abs(atom.location - merged[-1].location) <= ATOM_MERGE_TOL:
            last = merged[-1]
            merged[-1] = Atom(last.location, last.mass + atom.mass)
        else:
            merged.append(atom)
    return tuple(merged)


def _disjoint_pieces(pieces: list[DensityPiece]) -> list[DensityPiece]:
    """Sorted pieces; where pieces overlap their densities add up."""
    pieces = sorted((p for p in pieces if p.end > p.start), key=lambda p: p.start)
    if all(b.start >= a.end - ATOM_MERGE_TOL for a, b in zip(pieces, pieces[1:])):
        return pieces
    cuts = np.unique([x for p in pieces for x in (p.start, p.end)])
    split = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        covering = [p.value for p in pieces if p.start <= mid < p.end]
        if covering:
            split.append(DensityPiece(float(a), float(b), math.fsum(covering)))
    logger.debug("split %d overlapping density pieces into %d", len(pieces), len(split))
    return split


@dataclass(frozen=True)
class RadonMeasure:
    """
    Finite measure made of atoms and a piecewise-constant density.

    ``open_tails`` flags a discretised measure whose exact counterpart
    (``reference``) has unbounded support on that side.
    """

    atoms: tuple[Atom, ...] = ()
    density: tuple[DensityPiece, ...] = ()
    open_tails: tuple[bool, bool] = (False, False)
    reference: SmoothDensity | None = field(default=None, compare=False)

    @classmethod
    def build(
        cls,
        atoms: Iterable[Atom | tuple[float, float]] = (),
        density: Iterable[DensityPiece | tuple[float, float, float]] = (),
        open_tails: tuple[bool, bool] = (False, False),
        reference: SmoothDensity | None = None,
    ) -> RadonMeasure:
        """
        Normalise atoms (sorted, near-coincident ones merged) and pieces
        (sorted, overlaps split into disjoint pieces with summed density).
        """
        atom_list = [a if isinstance(a, Atom) else Atom(*map(float, a)) for a in atoms]
        pieces = [
            p if isinstance(p, DensityPiece) else DensityPiece(*map(float, p))
            for p in density
        ]
        return cls(_merge_atoms(atom_list), tuple(_disjoint_pieces(pieces)), open_tails, reference)

    @classmethod
    def zero(cls) -> RadonMeasure:
        return cls()

    @classmethod
    def from_smooth(cls, smooth: SmoothDensity, resolution: int) -> RadonMeasure:
        """Mass-exact discretisation: every η-cell of width C/N keeps mass C/N."""
        _, xs = smooth.discretize(resolution)
        cell = smooth.mass / resolution
        pieces = [
            DensityPiece(float(a), float(b), cell / (b - a))
            for a, b in zip(xs[:-1], xs[1:], strict=True)
        ]
        logger.debug("discretised %s measure on %d cells", smooth.name, resolution)
        return cls((), tuple(pieces), smooth.unbounded, smooth)

    @property
    def total_mass(self) -> float:
        return math.fsum([a.mass for a in self.atoms] + [p.mass for p in self.density])

    def translated(self, h: float) -> RadonMeasure:
        """The push-forward under x ↦ x + h."""
        return RadonMeasure(
            tuple(Atom(a.location + h, a.mass) for a in self.atoms),
            tuple(DensityPiece(p.start + h, p.end + h, p.value) for p in self.density),
            self.open_tails,
            self.reference.shifted(h) if self.reference else None,
        )

    @property
    def absolutely_continuous(self) -> RadonMeasure:
        """The density part alone; it is what ``reference`` describes."""
        return RadonMeasure((), self.density, self.open_tails, self.reference)

    def with_atoms(self, atoms: Iterable[Atom]) -> RadonMeasure:
        return RadonMeasure(
            _merge_atoms([*self.atoms, *atoms]), self.density, self.open_tails, self.reference
        )

    def to_record(self) -> dict[str, Any]:
        return {
            "atoms": [[a.location, a.mass] for a in self.atoms],
            "density": [[p.start, p.end, p.value] for p in self.density],
            "open_tails": list(self.open_tails),
        }

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> RadonMeasure:
        return cls.build(
            [(decode_real(x), decode_real(m)) for x, m in record.get("atoms", [])],
            [tuple(decode_real(v) for v in row) for row in record.get("density", [])],
            tuple(record.get("open_tails", (False, False))),
        )


def cumulative(mu: RadonMeasure) -> MonotoneFunction:
    """
    The left-continuous cumulative function F(x) = μ((−∞, x)).

    An atom at x contributes only to the right limit of F at x.
    """
    events = merge_points(
        [
            [a.location for a in mu.atoms],
            [p.start for p in mu.density],
            [p.end for p in mu.density],
        ],
        tol=ATOM_MERGE_TOL,
    )
    if events.size == 0:
        return MonotoneFunction.constant(0.0)
    atom_mass = np.zeros(events.size)
    for atom in mu.atoms:
        atom_mass[int(np.argmin(np.abs(events - atom.location)))] += atom.mass
    starts = np.array([p.start for p in mu.density])
    values = np.array([p.value for p in mu.density])
    ends = np.array([p.end for p in mu.density])
    lefts = np.empty(events.size)
    rights = np.empty(events.size)
    running = 0.0
    for i, x in enumerate(events):
        lefts[i] = running
        running += atom_mass[i]
        rights[i] = running
        if i + 1 < events.size and starts.size:
            mid = 0.5 * (x + events[i + 1])
            j = int(np.searchsorted(starts, mid, side="right")) - 1
            if j >= 0 and mid < ends[j]:
                running += values[j] * (events[i + 1] - x)
    return MonotoneFunction(
        events, lefts, rights, 0.0, 0.0, open_ends=mu.open_tails
    )


def _check_range(F: PiecewiseLinear, C: float) -> None:
    tol = MASS_TOL * max(1.0, abs(C))
    if not (math.isfinite(F.tail_lo) and math.isfinite(F.tail_hi)):
        raise MassMismatchError("cumulative function must have finite limits")
    if abs(F.tail_lo) > tol or abs(F.tail_hi - C) > tol:
        raise MassMismatchError(
            f"cumulative function ranges over [{F.tail_lo!r}, {F.tail_hi!r}], "
            f"expected [0, {C!r}]"
        )


def pseudo_inverse(F: MonotoneFunction, C: float) -> MonotoneFunction:
    """
    χ(η) = sup{x | F(x) < η} on [0, C].

    Jumps of F become flat pieces of χ and flat pieces of F become jumps.
    χ(0) is −∞ whenever F vanishes on a left half-line.

    Raises:
        MassMismatchError: if F does not range over [0, C].
    """
    if C == 0:
        return MonotoneFunction.constant(0.0, 0.0, 0.0)
    _check_range(F, C)
    chi = F.inverse()
    xs = np.array(chi.xs)
    xs[0], xs[-1] = 0.0, C
    return chi.replace(xs=xs, domain_lo=0.0, domain_hi=C)


def inverse_to_cumulative(chi: MonotoneFunction, C: float) -> MonotoneFunction:
    """F(x) = |{η ∈ (0, C) : χ(η) < x}|; flat pieces of χ become jumps of F."""
    if C == 0 or chi.xs.size == 1:
        return MonotoneFunction.constant(0.0)
    return chi.inverse()


def measure_from_cumulative(
    F: PiecewiseLinear, reference: SmoothDensity | None = None
) -> RadonMeasure:
    """Split a cumulative function into atoms (its jumps) and density (its slopes)."""
    scale = max(1.0, abs(F.tail_hi)) if math.isfinite(F.tail_hi) else 1.0
    jumps = F.rights - F.lefts
    atoms = [
        Atom(float(x), float(j))
        for x, j in zip(F.xs, jumps, strict=True)
        if j > ATOM_MERGE_TOL * scale
    ]
    pieces = []
    if F.xs.size > 1:
        for a, b, s in zip(F.xs[:-1], F.xs[1:], F.segment_slopes(), strict=True):
            if s * (b - a) > ATOM_MERGE_TOL * scale:
                pieces.append(DensityPiece(float(a), float(b), float(s)))
    if atoms:
        logger.debug("reconstructed %d atom(s)", len(atoms))
    return RadonMeasure(tuple(atoms), tuple(pieces), F.open_ends, reference)


def _tail_integrals(cdf: Callable[[float], float], C: float) -> tuple[float, float, bool]:
    """Decade-wise quadrature of ∫_{-∞}^0 F and ∫_0^∞ (C − F)."""

    def left(x: float) -> float:
        return float(cdf(x))

    def right(x: float) -> float:
        return C - float(cdf(x))

    totals = []
    converged = True
    for integrand, sign in ((left, -1.0), (right, 1.0)):
        pieces = [integrate.quad(lambda s: integrand(sign * s), 0.0, 1.0, limit=200)[0]]
        for k in range(DECADES):
            a, b = 10.0**k, 10.0 ** (k + 1)
            pieces.append(integrate.quad(lambda s: integrand(sign * s), a, b, limit=200)[0])
        total = math.fsum(pieces)
        if abs(pieces[-1]) > TAIL_TOL * max(1.0, abs(total)):
            converged = False
        totals.append(total)
    return totals[0], totals[1], converged


def check_integrability(F: PiecewiseLinear | Callable[[float], float], C: float) -> bool:
    """
    True iff ∫_{-∞}^0 F dx and ∫_0^∞ (C − F) dx are both finite.

    Piecewise functions are integrable exactly when their tails are flat at 0
    and C; exact callables are integrated decade by decade.
    """
    if isinstance(F, PiecewiseLinear):
        tol = MASS_TOL * max(1.0, abs(C))
        return (
            math.isfinite(F.tail_lo)
            and math.isfinite(F.tail_hi)
            and abs(F.tail_lo) <= tol
            and abs(F.tail_hi - C) <= tol
        )
    lower, upper, converged = _tail_integrals(F, C)
    logger.debug("tail integrals %.6g, %.6g (converged=%s)", lower, upper, converged)
    return converged


def measure_integrability(mu: RadonMeasure) -> bool:
    """:func:`check_integrability` of μ, using its exact tails when known."""
    C = mu.total_mass
    if mu.reference is not None:
        return check_integrability(mu.reference.cdf, mu.reference.mass)
    return check_integrability(cumulative(mu), C)


def _align(chi1: PiecewiseLinear, chi2: PiecewiseLinear) -> PiecewiseLinear:
    lo1, hi1, lo2, hi2 = chi1.domain_lo, chi1.domain_hi, chi2.domain_lo, chi2.domain_hi
    tol = 1e-12 * max(1.0, abs(hi1))
    if lo1 != lo2 or abs(hi1 - hi2) > tol:
        raise MassMismatchError(f"domains differ: [{lo1}, {hi1}] vs [{lo2}, {hi2}]")
    if hi1 == hi2:
        return chi2
    xs = np.array(chi2.xs)
    xs[-1] = hi1
    return chi2.replace(xs=xs, domain_hi=hi1)


def l1_distance(chi1: PiecewiseLinear, chi2: PiecewiseLinear) -> float:
    """
    Exact ∫ |χ₁ − χ₂| over the common interval [0, C].

    Raises:
        MassMismatchError: if the domains differ.
        NonIntegrableError: if the difference is infinite on a set of positive measure.
    """
    chi2 = _align(chi1, chi2)
    if chi1.xs.size == 1:
        return 0.0
    return abs_integral(combine([(1.0, chi1), (-1.0, chi2)]))


def quantile_l1_norm(chi: PiecewiseLinear) -> float:
    """‖χ‖ in L¹([0, C]); finite exactly when the integrability condition holds."""
    try:
        return abs_integral(chi)
    except NonIntegrableError:
        return math.inf

