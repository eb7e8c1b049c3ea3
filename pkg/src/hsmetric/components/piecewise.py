"""
Exact piecewise-affine functions with jumps.

Every function handled by hsmetric (cumulative energies, pseudo-inverses,
Lagrangian coordinates, velocities) is stored as a finite list of knots with
left and right limits, affine interpolation between knots and affine tails on
unbounded domain ends. Inversion, composition and linear combination are exact
on this representation, up to floating-point rounding.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import NonIntegrableError, NonMonotoneError
from ..utils.encoding import decode_real, encode_real

FloatArray = NDArray[np.float64]

# Relative distance under which two knot abscissae are treated as one point.
KNOT_TOL = 1e-12
MONOTONE_TOL = 1e-12


def _readonly(values: ArrayLike) -> FloatArray:
    arr = np.array(values, dtype=float).ravel()
    arr.flags.writeable = False
    return arr


def merge_points(
    values: ArrayLike | Iterable[ArrayLike],
    tol: float = KNOT_TOL,
    lo: float = -math.inf,
    hi: float = math.inf,
) -> FloatArray:
    """
    Sort finite abscissae and collapse near-duplicates.

    Args:
        values: one array or several arrays of abscissae.
        tol: relative merge distance, scaled by max(1, |x|).
        lo: optional finite lower end that must appear exactly.
        hi: optional finite upper end that must appear exactly.

    Returns:
        Strictly increasing array. Finite ``lo``/``hi`` replace any cluster
        that lies within ``tol`` of them.
    """
    if isinstance(values, (list, tuple)):
        parts = [np.asarray(v, dtype=float).ravel() for v in values]
        arr = np.concatenate(parts) if parts else np.empty(0)
    else:
        arr = np.asarray(values, dtype=float).ravel()
    extra = [v for v in (lo, hi) if math.isfinite(v)]
    arr = np.concatenate([arr, np.array(extra, dtype=float)])
    arr = arr[np.isfinite(arr)]
    arr = arr[(arr >= lo) & (arr <= hi)]
    arr = np.sort(arr)
    if arr.size == 0:
        return arr
    kept = [float(arr[0])]
    for value in arr[1:]:
        if value - kept[-1] > tol * max(1.0, abs(value)):
            kept.append(float(value))
    merged = np.array(kept)
    if math.isfinite(lo):
        merged[0] = lo
    if math.isfinite(hi):
        if merged.size > 1 and hi - merged[-1] <= tol * max(1.0, abs(hi)):
            merged[-1] = hi
    return merged


@dataclass(frozen=True, slots=True)
class Knot:
    """A breakpoint with its left and right limits."""

    x: float
    left: float
    right: float

    @property
    def jump(self) -> float:
        return self.right - self.left


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """
    Piecewise-affine function with jumps on ``[domain_lo, domain_hi]``.

    Values are left-continuous: ``f(x)`` at a knot returns the left value and
    ``f.right_limit(x)`` the right one. A finite ``domain_lo`` carries a knot
    whose left value is the point value there (it may be infinite, as for
    pseudo-inverses at η = 0); a finite ``domain_hi`` carries a knot whose
    right value equals its left value. Unbounded ends continue affinely with
    ``slope_lo``/``slope_hi``.

    ``open_ends`` marks a finite representation of a non-decreasing function
    whose true limit at that (bounded) end is infinite, e.g. the quantile
    function of a discretised Gaussian.
    """

    xs: FloatArray
    lefts: FloatArray
    rights: FloatArray
    slope_lo: float = 0.0
    slope_hi: float = 0.0
    domain_lo: float = -math.inf
    domain_hi: float = math.inf
    open_ends: tuple[bool, bool] = field(default=(False, False))

    def __post_init__(self) -> None:
        xs = np.array(self.xs, dtype=float).ravel()
        lefts = np.array(self.lefts, dtype=float).ravel()
        rights = np.array(self.rights, dtype=float).ravel()
        if xs.size == 0 or lefts.size != xs.size or rights.size != xs.size:
            raise ValueError("knot arrays must be non-empty and of equal length")
        if not np.all(np.isfinite(xs)):
            raise ValueError("knot abscissae must be finite")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("knot abscissae must be strictly increasing")
        lo, hi = float(self.domain_lo), float(self.domain_hi)
        if lo > hi:
            raise ValueError("empty domain")
        if math.isfinite(lo) and xs[0] != lo:
            raise ValueError("a finite domain_lo must be the first knot")
        if math.isfinite(hi) and xs[-1] != hi:
            raise ValueError("a finite domain_hi must be the last knot")
        if math.isfinite(hi) and (xs.size > 1 or math.isfinite(lefts[-1])):
            rights[-1] = lefts[-1]
        interior = np.concatenate(
            [lefts[1:] if math.isfinite(lo) else lefts, rights]
        )
        if xs.size == 1 and math.isfinite(lo) and math.isfinite(hi):
            interior = lefts
        if not np.all(np.isfinite(interior)):
            raise ValueError("only the point value at a finite domain_lo may be infinite")
        slope_lo = 0.0 if math.isfinite(lo) else float(self.slope_lo)
        slope_hi = 0.0 if math.isfinite(hi) else float(self.slope_hi)
        if not (math.isfinite(slope_lo) and math.isfinite(slope_hi)):
            raise ValueError("tail slopes must be finite")
        object.__setattr__(self, "xs", _readonly(xs))
        object.__setattr__(self, "lefts", _readonly(lefts))
        object.__setattr__(self, "rights", _readonly(rights))
        object.__setattr__(self, "slope_lo", slope_lo)
        object.__setattr__(self, "slope_hi", slope_hi)
        object.__setattr__(self, "domain_lo", lo)
        object.__setattr__(self, "domain_hi", hi)
        object.__setattr__(self, "open_ends", (bool(self.open_ends[0]), bool(self.open_ends[1])))

    # construction

    @staticmethod
    def _anchor_points(lo: float, hi: float) -> list[float]:
        if lo == hi:
            return [lo]
        points = [v for v in (lo, hi) if math.isfinite(v)]
        return points or [0.0]

    @classmethod
    def constant(cls, value: float, lo: float = -math.inf, hi: float = math.inf):
        """Constant function on the given domain."""
        xs = cls._anchor_points(lo, hi)
        values = [value] * len(xs)
        return cls(xs, values, values, 0.0, 0.0, lo, hi)

    @classmethod
    def identity(cls, lo: float = -math.inf, hi: float = math.inf):
        """The identity x ↦ x on the given domain."""
        xs = cls._anchor_points(lo, hi)
        return cls(xs, xs, xs, 1.0, 1.0, lo, hi)

    @classmethod
    def interpolate(
        cls,
        xs: ArrayLike,
        values: ArrayLike,
        *,
        slope_lo: float = 0.0,
        slope_hi: float = 0.0,
        lo: float = -math.inf,
        hi: float = math.inf,
    ):
        """Continuous interpolant through ``(xs, values)``."""
        values = np.asarray(values, dtype=float)
        return cls(xs, values, values, slope_lo, slope_hi, lo, hi)

    def replace(self, **changes: Any):
        """Copy with some fields replaced, re-validated as the same class."""
        fields = {
            "xs": self.xs,
            "lefts": self.lefts,
            "rights": self.rights,
            "slope_lo": self.slope_lo,
            "slope_hi": self.slope_hi,
            "domain_lo": self.domain_lo,
            "domain_hi": self.domain_hi,
            "open_ends": self.open_ends,
        }
        fields.update(changes)
        return type(self)(**fields)

    # inspection

    @property
    def knots(self) -> tuple[Knot, ...]:
        return tuple(
            Knot(float(x), float(l), float(r))
            for x, l, r in zip(self.xs, self.lefts, self.rights, strict=True)
        )

    @property
    def bounded(self) -> tuple[bool, bool]:
        return math.isfinite(self.domain_lo), math.isfinite(self.domain_hi)

    @property
    def tail_lo(self) -> float:
        """Limit of the function as x → domain_lo (from inside the domain)."""
        if math.isfinite(self.domain_lo):
            return -math.inf if self.open_ends[0] else float(self.rights[0])
        if self.slope_lo == 0:
            return float(self.lefts[0])
        return -math.inf if self.slope_lo > 0 else math.inf

    @property
    def tail_hi(self) -> float:
        """Limit of the function as x → domain_hi (from inside the domain)."""
        if math.isfinite(self.domain_hi):
            return math.inf if self.open_ends[1] else float(self.lefts[-1])
        if self.slope_hi == 0:
            return float(self.rights[-1])
        return math.inf if self.slope_hi > 0 else -math.inf

    def segment_slopes(self) -> FloatArray:
        """Slopes of the affine pieces between consecutive knots."""
        return (self.lefts[1:] - self.rights[:-1]) / np.diff(self.xs)

    def affine_pieces(self) -> list[tuple[float, float, float, float]]:
        """
        Affine pieces as ``(a, b, c0, c1)`` with value ``c0 + c1·x`` on (a, b).

        Unbounded tails appear as pieces with an infinite end.
        """
        pieces: list[tuple[float, float, float, float]] = []
        xs, lefts, rights = self.xs, self.lefts, self.rights
        if not math.isfinite(self.domain_lo):
            c1 = self.slope_lo
            pieces.append((-math.inf, float(xs[0]), float(lefts[0] - c1 * xs[0]), c1))
        for i, c1 in enumerate(self.segment_slopes()):
            c0 = rights[i] - c1 * xs[i]
            pieces.append((float(xs[i]), float(xs[i + 1]), float(c0), float(c1)))
        if not math.isfinite(self.domain_hi):
            c1 = self.slope_hi
            pieces.append((float(xs[-1]), math.inf, float(rights[-1] - c1 * xs[-1]), c1))
        return pieces

    def kinks(self, tol: float = 1e-9) -> FloatArray:
        """Knots where the function jumps or its slope changes."""
        n = self.xs.size
        slopes = np.empty(n + 1)
        slopes[0] = self.slope_lo if not math.isfinite(self.domain_lo) else np.nan
        slopes[-1] = self.slope_hi if not math.isfinite(self.domain_hi) else np.nan
        if n > 1:
            slopes[1:-1] = self.segment_slopes()
        before, after = slopes[:-1], slopes[1:]
        scale = np.maximum(1.0, np.maximum(np.abs(np.nan_to_num(before)), np.abs(np.nan_to_num(after))))
        with np.errstate(invalid="ignore"):
            bend = ~(np.abs(after - before) <= tol * scale)
            jump = ~(np.abs(self.rights - self.lefts) <= tol * np.maximum(1.0, np.abs(self.rights)))
        interior = np.ones(n, dtype=bool)
        if math.isfinite(self.domain_lo):
            interior[0] = False
        if math.isfinite(self.domain_hi):
            interior[-1] = False
        return self.xs[(bend | jump) & interior]

    # evaluation

    def _evaluate(self, points: ArrayLike, right: bool, snap: float = KNOT_TOL) -> FloatArray:
        x = np.asarray(points, dtype=float)
        shape = x.shape
        x = np.clip(x.ravel(), self.domain_lo, self.domain_hi)
        xs, lefts, rights = self.xs, self.lefts, self.rights
        n = xs.size
        out = np.empty_like(x)
        idx = np.searchsorted(xs, x, side="left")
        upper = np.minimum(idx, n - 1)
        lower = np.maximum(idx - 1, 0)
        tol = np.where(np.isfinite(x), snap * np.maximum(1.0, np.abs(x)), 0.0)
        with np.errstate(invalid="ignore"):
            hit_upper = np.abs(xs[upper] - x) <= tol
            hit_lower = ~hit_upper & (np.abs(xs[lower] - x) <= tol)
        hit = hit_upper | hit_lower
        hit_index = np.where(hit_upper, upper, lower)
        values = rights if right else lefts
        out[hit] = values[hit_index[hit]]
        below = ~hit & (idx == 0)
        above = ~hit & (idx == n)
        inside = ~(hit | below | above)
        if np.any(inside):
            i = idx[inside]
            x0, x1 = xs[i - 1], xs[i]
            v0, v1 = rights[i - 1], lefts[i]
            out[inside] = v0 + (x[inside] - x0) / (x1 - x0) * (v1 - v0)
        if np.any(below):
            out[below] = (
                lefts[0]
                if self.slope_lo == 0
                else lefts[0] + self.slope_lo * (x[below] - xs[0])
            )
        if np.any(above):
            out[above] = (
                rights[-1]
                if self.slope_hi == 0
                else rights[-1] + self.slope_hi * (x[above] - xs[-1])
            )
        return out.reshape(shape)

    def __call__(self, points: ArrayLike) -> Any:
        values = self._evaluate(points, right=False)
        return float(values) if np.ndim(points) == 0 else values

    def right_limit(self, points: ArrayLike) -> Any:
        values = self._evaluate(points, right=True)
        return float(values) if np.ndim(points) == 0 else values

    def interior(self, points: ArrayLike) -> FloatArray:
        """
        Values with finite domain ends replaced by the limits from inside.

        Infinite arguments map to the tail limits. Used when evaluating a
        continuous outer function in :func:`compose`.
        """
        x = np.asarray(points, dtype=float)
        out = self._evaluate(x, right=False)
        if math.isfinite(self.domain_lo):
            out = np.where(x <= self.domain_lo, self.rights[0], out)
        return out

    # transformations

    def shifted(self, h: float):
        """The function x ↦ f(x − h)."""
        return self.replace(
            xs=self.xs + h, domain_lo=self.domain_lo + h, domain_hi=self.domain_hi + h
        )

    def with_point_value_lo(self, value: float):
        """Copy whose point value at a finite domain_lo is ``value``."""
        lefts = np.array(self.lefts)
        lefts[0] = value
        return self.replace(lefts=lefts)

    # serialization

    def to_record(self) -> dict[str, Any]:
        return {
            "breakpoints": [
                [encode_real(x), encode_real(l), encode_real(r)]
                for x, l, r in zip(self.xs, self.lefts, self.rights, strict=True)
            ],
            "tail_lo": encode_real(self.tail_lo),
            "tail_hi": encode_real(self.tail_hi),
            "domain": [encode_real(self.domain_lo), encode_real(self.domain_hi)],
            "slopes": [self.slope_lo, self.slope_hi],
            "open_ends": list(self.open_ends),
        }

    @classmethod
    def from_record(cls, record: dict[str, Any]):
        rows = [[decode_real(v) for v in row] for row in record["breakpoints"]]
        lo, hi = (decode_real(v) for v in record.get("domain", ["-inf", "inf"]))
        slope_lo, slope_hi = record.get("slopes", [0.0, 0.0])
        return cls(
            [r[0] for r in rows],
            [r[1] for r in rows],
            [r[2] for r in rows],
            float(slope_lo),
            float(slope_hi),
            lo,
            hi,
            tuple(record.get("open_ends", (False, False))),
        )


def monotonicity_violation(f: PiecewiseLinear, tol: float = MONOTONE_TOL) -> str | None:
    """Describe the first place where ``f`` decreases, or None."""
    lefts, rights = f.lefts, f.rights
    if math.isfinite(f.domain_lo):
        lefts = lefts.copy()
        lefts[0] = -math.inf
    scale = np.maximum(1.0, np.abs(rights))
    with np.errstate(invalid="ignore"):
        drops = rights - lefts < -tol * scale
    if np.any(drops):
        return f"downward jump at x={float(f.xs[np.argmax(drops)])!r}"
    if f.xs.size > 1:
        step = f.lefts[1:] - f.rights[:-1]
        if np.any(step < -tol * np.maximum(1.0, np.abs(f.lefts[1:]))):
            i = int(np.argmax(step < -tol * np.maximum(1.0, np.abs(f.lefts[1:]))))
            return f"decreasing piece on [{f.xs[i]!r}, {f.xs[i + 1]!r}]"
    if f.slope_lo < 0 or f.slope_hi < 0:
        return "decreasing tail"
    return None


@dataclass(frozen=True, eq=False)
class MonotoneFunction(PiecewiseLinear):
    """A non-decreasing :class:`PiecewiseLinear` with a generalized inverse."""

    def __post_init__(self) -> None:
        super().__post_init__()
        problem = monotonicity_violation(self)
        if problem:
            raise NonMonotoneError(f"function is not non-decreasing: {problem}")

    @classmethod
    def of(cls, f: PiecewiseLinear, open_ends: tuple[bool, bool] | None = None):
        """Validate ``f`` as non-decreasing and rewrap it."""
        return cls(
            f.xs,
            f.lefts,
            f.rights,
            f.slope_lo,
            f.slope_hi,
            f.domain_lo,
            f.domain_hi,
            f.open_ends if open_ends is None else open_ends,
        )

    def inverse(self) -> MonotoneFunction:
        """
        Generalized inverse g(v) = sup{x | f(x) < v}.

        Jumps of ``f`` become flat pieces of ``g`` and flat pieces become
        jumps; slopes invert. A flat unbounded tail of ``f`` turns into a
        finite domain end of ``g`` (with point value ±∞ at the lower end) and
        a bounded end of ``f`` turns into a flat unbounded tail of ``g``.
        """
        lo_bounded, hi_bounded = self.bounded
        if lo_bounded and hi_bounded and self.xs.size == 1:
            raise ValueError("cannot invert a function on a single point")
        n = self.xs.size
        px = np.repeat(self.xs, 2)
        pv = np.empty(2 * n)
        pv[0::2] = self.lefts
        pv[1::2] = self.rights
        keep = np.ones(2 * n, dtype=bool)
        if lo_bounded:
            keep[0] = False
        if hi_bounded:
            keep[-1] = False
        px, pv = px[keep], pv[keep]
        flat_lo = not lo_bounded and self.slope_lo == 0
        flat_hi = not hi_bounded and self.slope_hi == 0
        if flat_lo:
            px = np.concatenate([[-math.inf], px])
            pv = np.concatenate([[self.lefts[0]], pv])
        if flat_hi:
            px = np.concatenate([px, [math.inf]])
            pv = np.concatenate([pv, [self.rights[-1]]])
        pv = np.maximum.accumulate(pv)

        tol = KNOT_TOL * np.maximum(1.0, np.abs(pv))
        starts = np.concatenate([[True], np.diff(pv) > tol[1:]])
        first = np.flatnonzero(starts)
        last = np.concatenate([first[1:] - 1, [pv.size - 1]])
        new_xs = pv[first]
        new_lefts = px[first]
        new_rights = px[last]

        if lo_bounded:
            new_lo, new_slope_lo = -math.inf, 0.0
        elif flat_lo:
            new_lo, new_slope_lo = float(new_xs[0]), 0.0
        else:
            new_lo, new_slope_lo = -math.inf, 1.0 / self.slope_lo
        if hi_bounded:
            new_hi, new_slope_hi = math.inf, 0.0
        elif flat_hi:
            new_hi, new_slope_hi = float(new_xs[-1]), 0.0
        else:
            new_hi, new_slope_hi = math.inf, 1.0 / self.slope_hi
        return MonotoneFunction(
            new_xs,
            new_lefts,
            new_rights,
            new_slope_lo,
            new_slope_hi,
            new_lo,
            new_hi,
            self.open_ends,
        )


def _same_domain(funcs: Sequence[PiecewiseLinear]) -> tuple[float, float]:
    lo, hi = funcs[0].domain_lo, funcs[0].domain_hi
    for f in funcs[1:]:
        if f.domain_lo != lo or f.domain_hi != hi:
            raise ValueError(
                f"domain mismatch: [{lo}, {hi}] vs [{f.domain_lo}, {f.domain_hi}]"
            )
    return lo, hi


def combine(
    terms: Sequence[tuple[float, PiecewiseLinear]], constant: float = 0.0
) -> PiecewiseLinear:
    """
    Exact linear combination ``constant + Σ c·f`` on a common domain.

    Terms with a zero coefficient are skipped, so infinite point values never
    produce NaN through ``0·∞``.
    """
    if not terms:
        raise ValueError("combine needs at least one term")
    funcs = [f for _, f in terms]
    lo, hi = _same_domain(funcs)
    xs = merge_points([f.xs for f in funcs], lo=lo, hi=hi)
    lefts = np.full(xs.size, float(constant))
    rights = np.full(xs.size, float(constant))
    slope_lo = slope_hi = 0.0
    with np.errstate(invalid="ignore"):
        for coef, f in terms:
            if coef == 0:
                continue
            lefts = lefts + coef * f(xs)
            rights = rights + coef * f.right_limit(xs)
            slope_lo += coef * f.slope_lo
            slope_hi += coef * f.slope_hi
    return PiecewiseLinear(xs, lefts, rights, slope_lo, slope_hi, lo, hi)


def compose(outer: PiecewiseLinear, inner: MonotoneFunction) -> PiecewiseLinear:
    """
    The composition ``outer ∘ inner`` for a non-decreasing ``inner``.

    ``outer`` is assumed continuous; it is evaluated through
    :meth:`PiecewiseLinear.interior`. Preimages of the knots of ``outer`` are
    inserted as knots, so the result is exact on affine pieces.
    """
    lo, hi = inner.domain_lo, inner.domain_hi
    if inner.xs.size == 1 and math.isfinite(lo) and math.isfinite(hi):
        value = float(outer.interior(np.array([inner(lo)]))[0])
        return PiecewiseLinear.constant(value, lo, hi)
    inv = inner.inverse()
    reachable = outer.xs[(outer.xs >= inv.domain_lo) & (outer.xs <= inv.domain_hi)]
    preimages = [inv(reachable), inv.right_limit(reachable)] if reachable.size else []
    points = merge_points([inner.xs, *preimages], lo=lo, hi=hi)
    lefts = outer.interior(inner(points))
    rights = outer.interior(inner.right_limit(points))

    def tail_slope(inner_bounded: bool, inner_slope: float, outer_bounded: bool, outer_slope: float) -> float:
        if inner_bounded or inner_slope == 0 or outer_bounded:
            return 0.0
        return inner_slope * outer_slope

    slope_lo = tail_slope(
        math.isfinite(lo), inner.slope_lo, math.isfinite(outer.domain_lo), outer.slope_lo
    )
    slope_hi = tail_slope(
        math.isfinite(hi), inner.slope_hi, math.isfinite(outer.domain_hi), outer.slope_hi
    )
    return PiecewiseLinear(points, lefts, rights, slope_lo, slope_hi, lo, hi)


def rescale_domain(f: PiecewiseLinear, factor: float) -> PiecewiseLinear:
    """The function η ↦ f(factor·η) for ``factor > 0``."""
    if factor <= 0:
        raise ValueError("rescaling factor must be positive")
    return f.replace(
        xs=f.xs / factor,
        slope_lo=f.slope_lo * factor,
        slope_hi=f.slope_hi * factor,
        domain_lo=f.domain_lo / factor,
        domain_hi=f.domain_hi / factor,
    )


def abs_integral(f: PiecewiseLinear) -> float:
    """
    Exact integral of |f| over its domain.

    Pieces whose end values differ in sign are split at the root. Point values
    at the domain ends never contribute.

    Raises:
        NonIntegrableError: if an unbounded tail does not vanish identically.
    """
    for bounded, slope, value in (
        (math.isfinite(f.domain_lo), f.slope_lo, f.lefts[0]),
        (math.isfinite(f.domain_hi), f.slope_hi, f.rights[-1]),
    ):
        if not bounded and (slope != 0 or value != 0):
            raise NonIntegrableError("integrand does not vanish on an unbounded tail")
    if f.xs.size < 2:
        return 0.0
    va, vb = f.rights[:-1], f.lefts[1:]
    width = np.diff(f.xs)
    if not (np.all(np.isfinite(va)) and np.all(np.isfinite(vb))):
        raise NonIntegrableError("integrand is infinite on a set of positive measure")
    same_sign = va * vb >= 0
    total = np.abs(va) + np.abs(vb)
    with np.errstate(invalid="ignore", divide="ignore"):
        split = np.where(total > 0, (va * va + vb * vb) / (2.0 * total), 0.0)
    areas = np.where(same_sign, 0.5 * total, split) * width
    return math.fsum(areas.tolist())


def sup_abs(f: PiecewiseLinear) -> float:
    """
    Supremum of |f| over the domain.

    Infinite point values at the domain ends are ignored; finite ones count.
    """
    if not math.isfinite(f.domain_lo) and f.slope_lo != 0:
        return math.inf
    if not math.isfinite(f.domain_hi) and f.slope_hi != 0:
        return math.inf
    values = np.concatenate([f.lefts, f.rights])
    values = values[np.isfinite(values)]
    return float(np.max(np.abs(values))) if values.size else 0.0


def max_deviation(
    f: PiecewiseLinear, g: PiecewiseLinear, xtol: float = 1e-10, relative: bool = False
) -> float:
    """
    Largest difference between two functions over their combined knots.

    Both one-sided limits are compared at every knot of either function, with
    knots closer than ``xtol`` (relative) treated as the same point, and the
    tail slopes are compared on unbounded ends. Returns ``inf`` when the
    domains differ. With ``relative`` the result is divided by
    max(1, largest finite |value|).
    """
    for a, b in ((f.domain_lo, g.domain_lo), (f.domain_hi, g.domain_hi)):
        if a != b and not (
            math.isfinite(a) and math.isfinite(b) and abs(a - b) <= xtol * max(1.0, abs(a))
        ):
            return math.inf
    lo = max(f.domain_lo, g.domain_lo)
    hi = min(f.domain_hi, g.domain_hi)
    points = merge_points([f.xs, g.xs], tol=xtol, lo=lo, hi=hi)
    deviation = 0.0
    scale = 1.0
    for right in (False, True):
        fv = f._evaluate(points, right, snap=xtol)  # pylint: disable=protected-access
        gv = g._evaluate(points, right, snap=xtol)  # pylint: disable=protected-access
        if math.isfinite(lo) and not right:
            fv, gv = fv[1:], gv[1:]
        both_inf = np.isinf(fv) & np.isinf(gv) & (np.sign(fv) == np.sign(gv))
        with np.errstate(invalid="ignore"):
            diff = np.where(both_inf, 0.0, np.abs(fv - gv))
        if diff.size:
            deviation = max(deviation, float(np.max(diff)))
        finite = np.concatenate([fv[np.isfinite(fv)], gv[np.isfinite(gv)]])
        if finite.size:
            scale = max(scale, float(np.max(np.abs(finite))))
    if not math.isfinite(lo):
        deviation = max(deviation, abs(f.slope_lo - g.slope_lo) * scale)
    if not math.isfinite(hi):
        deviation = max(deviation, abs(f.slope_hi - g.slope_hi) * scale)
    return deviation / scale if relative else deviation


def allclose(f: PiecewiseLinear, g: PiecewiseLinear, atol: float = 1e-10, xtol: float = 1e-10) -> bool:
    """True when :func:`max_deviation` is at most ``atol``."""
    return max_deviation(f, g, xtol=xtol) <= atol


def affine_on(f: PiecewiseLinear, a: float, b: float) -> tuple[float, float]:
    """
    Coefficients ``(c0, c1)`` of f = c0 + c1·x on the open piece (a, b).

    ``a``/``b`` must be consecutive points of a knot set containing f's knots;
    an infinite end selects the corresponding tail.
    """
    if not math.isfinite(a):
        c1 = f.slope_lo
        return f(b) - c1 * b, c1
    if not math.isfinite(b):
        c1 = f.slope_hi
        return f.right_limit(a) - c1 * a, c1
    start = f.right_limit(a)
    c1 = (f(b) - start) / (b - a)
    return start - c1 * a, c1


def piece_bounds(points: FloatArray, lo: float, hi: float) -> list[tuple[float, float]]:
    """Consecutive ``(a, b)`` pairs over ``points``, plus unbounded tails."""
    bounds = [(float(a), float(b)) for a, b in zip(points[:-1], points[1:], strict=True)]
    if not math.isfinite(lo):
        bounds.insert(0, (-math.inf, float(points[0])))
    if not math.isfinite(hi):
        bounds.append((float(points[-1]), math.inf))
    return bounds
