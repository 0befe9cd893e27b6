"""Distance distribution functions and the modified Levy metric.

A distance distribution function (DDF) is a nondecreasing, left-continuous
function f on [0, inf] with f(0) = 0 and f(inf) = 1.  The canonical
representation here is a finite knot list: each knot stores the time t, the
value f(t) (which equals the left limit, by left continuity) and the right
limit f(t+).  Between consecutive knots the function interpolates linearly
between the right value of the earlier knot and the left value of the later
one, so pure step functions (right value == next left value) and
piecewise-linear ramps share one representation.  The jump to 1 at infinity
is implicit and never stored as a knot coordinate.

The Levy distance d_L(f, g) is the infimum of all a in (0, 1] such that

    f(x - a) - a <= g(x) <= f(x + a) + a   and
    g(x - a) - a <= f(x) <= g(x + a) + a   for all x in (-1/a, 1/a),

with f and g extended by 0 on the negative half line.  For knot-based
functions the four inequalities can only fail at knot-induced breakpoints,
so feasibility of a given `a` is decided exactly by inspecting knot shifts
and one-sided limits; the infimum is then bracketed by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DDF",
    "LevyDistance",
    "unit_step",
    "levy_distance",
    "distance_to_eps0",
    "random_step_ddf",
]


class DDF:
    """A distance distribution function with finitely many knots.

    Immutable after construction; all operations are pure.
    """

    __slots__ = ("t", "vl", "vr")

    def __init__(self, knots: Iterable[tuple[float, float, float]]):
        rows = [(float(t), float(vl), float(vr)) for t, vl, vr in knots]
        if not rows:
            raise ValueError("DDF needs at least one knot")
        t = np.array([r[0] for r in rows], dtype=float)
        vl = np.array([r[1] for r in rows], dtype=float)
        vr = np.array([r[2] for r in rows], dtype=float)
        if t[0] != 0.0 or vl[0] != 0.0:
            raise ValueError("first knot must be (0, 0, .): f(0) = 0")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
            raise ValueError("knot times must be finite and strictly increasing")
        if np.any(vl < 0) or np.any(vr > 1) or np.any(vl > vr):
            raise ValueError("knot values must satisfy 0 <= left <= right <= 1")
        if np.any(vr[:-1] > vl[1:]):
            raise ValueError("DDF must be nondecreasing between knots")
        self.t = t
        self.vl = vl
        self.vr = vr
        # block accidental mutation of the backing arrays
        for a in (t, vl, vr):
            a.flags.writeable = False

    # -- constructors -------------------------------------------------

    @staticmethod
    def step(levels: Sequence[tuple[float, float]]) -> "DDF":
        """Build a step function from (jump time, new level) pairs.

        Levels must be increasing in both coordinates; the function is 0
        before the first jump and left-continuous at every jump.
        """
        knots = []
        prev = 0.0
        if not levels or levels[0][0] != 0.0:
            knots.append((0.0, 0.0, 0.0))
        for time, level in levels:
            knots.append((time, prev, level))
            prev = level
        return DDF(knots)

    @staticmethod
    def ramp(slope_end: float = 1.0) -> "DDF":
        """The ramp min(t / slope_end, 1): linear up to 1 at t = slope_end."""
        if slope_end <= 0:
            raise ValueError("slope_end must be positive")
        return DDF([(0.0, 0.0, 0.0), (slope_end, 1.0, 1.0)])

    # -- basic queries ------------------------------------------------

    @property
    def knot_times(self) -> np.ndarray:
        return self.t

    @property
    def sup_value(self) -> float:
        """Value on (last knot, inf); the jump to 1 happens at infinity."""
        return float(self.vr[-1])

    def is_step(self) -> bool:
        return bool(np.all(self.vr[:-1] == self.vl[1:]))

    def eval(self, x) -> np.ndarray | float:
        """f(x) with left-continuous values at knots.

        Accepts scalars or arrays; x = inf gives 1, x <= 0 gives 0 (the
        convention used when a DDF is read as a distribution function on
        the whole real line).
        """
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        out = np.zeros(arr.shape, dtype=float)
        out[np.isposinf(arr)] = 1.0
        mid = (arr > 0) & np.isfinite(arr)
        if mid.any():
            out[mid] = self._eval_interior(arr[mid])
        return float(out[0]) if scalar else out

    def eval_right(self, x) -> np.ndarray | float:
        """Right limit f(x+); differs from eval only at jump knots."""
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        out = np.zeros(arr.shape, dtype=float)
        out[np.isposinf(arr)] = 1.0
        mid = (arr >= 0) & np.isfinite(arr)
        if mid.any():
            out[mid] = self._eval_right_interior(arr[mid])
        return float(out[0]) if scalar else out

    def _eval_interior(self, xm: np.ndarray) -> np.ndarray:
        # xm > 0 and finite
        n = len(self.t)
        idx = np.searchsorted(self.t, xm, side="left")
        res = np.empty_like(xm)
        beyond = idx == n
        res[beyond] = self.vr[-1]
        inside = ~beyond
        if inside.any():
            ii = idx[inside]
            xi = xm[inside]
            t0 = self.t[ii - 1]
            t1 = self.t[ii]
            v0 = self.vr[ii - 1]
            v1 = self.vl[ii]
            interp = v0 + (xi - t0) * (v1 - v0) / (t1 - t0)
            res[inside] = np.where(self.t[ii] == xi, self.vl[ii], interp)
        return res

    def _eval_right_interior(self, xm: np.ndarray) -> np.ndarray:
        # xm >= 0 and finite
        n = len(self.t)
        idx = np.searchsorted(self.t, xm, side="right")
        res = np.empty_like(xm)
        beyond = idx == n
        res[beyond] = self.vr[-1]
        inside = ~beyond
        if inside.any():
            ii = idx[inside]  # >= 1 because t[0] = 0 <= xm
            xi = xm[inside]
            t0 = self.t[ii - 1]
            t1 = self.t[ii]
            v0 = self.vr[ii - 1]
            v1 = self.vl[ii]
            interp = v0 + (xi - t0) * (v1 - v0) / (t1 - t0)
            res[inside] = np.where(t0 == xi, v0, interp)
        return res

    # -- transforms ---------------------------------------------------

    def scale_time(self, factor: float) -> "DDF":
        """Stretch the time axis by `factor` > 0: result(t) = self(t / factor)."""
        if factor <= 0:
            raise ValueError("time scale factor must be positive")
        return DDF(zip(self.t * factor, self.vl, self.vr))

    def knotwise_max(self, other: "DDF") -> "DDF":
        """Smallest knot-based function dominating both operands.

        Exact pointwise maximum for step functions; for linear pieces it
        takes the chord through the knotwise maxima, which still dominates
        both operands because each is affine on the union knot grid.
        """
        times = np.union1d(self.t, other.t)
        vl = np.maximum(self.eval(times), other.eval(times))
        vr = np.maximum(self.eval_right(times), other.eval_right(times))
        vl[0] = 0.0
        return DDF(zip(times, vl, vr))

    # -- serialization / identity --------------------------------------

    def to_dict(self) -> dict:
        return {"knots": [[float(a), float(b), float(c)]
                          for a, b, c in zip(self.t, self.vl, self.vr)]}

    @staticmethod
    def from_dict(data: dict) -> "DDF":
        return DDF(tuple(k) for k in data["knots"])

    def key(self) -> bytes:
        """Stable hashable identity of the knot data (for caching)."""
        return self.t.tobytes() + self.vl.tobytes() + self.vr.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DDF):
            return NotImplemented
        return (len(self.t) == len(other.t)
                and bool(np.all(self.t == other.t))
                and bool(np.all(self.vl == other.vl))
                and bool(np.all(self.vr == other.vr)))

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        inner = ", ".join(f"({a:g}, {b:g}, {c:g})"
                          for a, b, c in zip(self.t, self.vl, self.vr))
        return f"DDF([{inner}])"


EPS0: DDF  # the unit step at 0, set below


def unit_step(q: float) -> DDF:
    """The unit step at q: 0 on [0, q], 1 on (q, inf]; q = inf allowed."""
    if math.isinf(q) and q > 0:
        return DDF([(0.0, 0.0, 0.0)])
    q = float(q)
    if q < 0:
        raise ValueError("unit step location must be nonnegative")
    if q == 0.0:
        return DDF([(0.0, 0.0, 1.0)])
    return DDF([(0.0, 0.0, 0.0), (q, 0.0, 1.0)])


EPS0 = unit_step(0.0)


@dataclass(frozen=True)
class LevyDistance:
    """A bracketed Levy-distance value: |value - d_L| <= tolerance."""

    value: float
    tolerance: float

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError("Levy distance must lie in [0, 1]")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def _sandwich_feasible(f: DDF, g: DDF, a: float) -> bool:
    """Do the four Levy sandwich inequalities hold at slack `a`?

    Checked at every knot of f and g shifted by 0 and +-a (clipped to the
    open interval (-1/a, 1/a)), using exact left-continuous values and
    exact right limits.  At the excluded interval endpoints only the
    one-sided limit pointing into the interval is relevant.
    """
    lo, hi = -1.0 / a, 1.0 / a
    base = np.concatenate([f.t, g.t])
    xs = np.concatenate([base, base + a, base - a])
    xs = np.unique(xs[(xs > lo) & (xs < hi)])

    def holds(xe: np.ndarray, fe, ge) -> bool:
        fm, fp = fe(xe - a), fe(xe + a)
        gm, gp = ge(xe - a), ge(xe + a)
        fx, gx = fe(xe), ge(xe)
        return bool(
            np.all(fm - a <= gx) and np.all(gx <= fp + a)
            and np.all(gm - a <= fx) and np.all(fx <= gp + a)
        )

    exact_pts = np.append(xs, hi)     # value at hi = left limit there
    right_pts = np.append(xs, lo)     # right limits cover open pieces
    return (holds(exact_pts, f.eval, g.eval)
            and holds(right_pts, f.eval_right, g.eval_right))


def levy_distance(f: DDF, g: DDF, tol: float = 1e-9) -> LevyDistance:
    """Levy distance between two DDFs, bracketed to within `tol` by bisection.

    a = 1 is always feasible, so d_L <= 1; feasibility is monotone in a,
    which makes the bisection bracket valid.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _sandwich_feasible(f, g, mid):
            hi = mid
        else:
            lo = mid
    return LevyDistance(value=0.5 * (lo + hi), tolerance=max(0.5 * (hi - lo), 5e-17))


def distance_to_eps0(f: DDF) -> float:
    """inf{t > 0 : f(t) > 1 - t}, which equals d_L(f, unit_step(0)).

    Exact for knot-based functions: phi(t) = f(t) + t - 1 is strictly
    increasing, so the infimum is the first zero crossing, found in closed
    form on the affine pieces and at jump knots.
    """
    t, vl, vr = f.t, f.vl, f.vr
    n = len(t)
    for i in range(n):
        # jump at the knot crossing 0: phi(t_i) <= 0 is guaranteed here
        # because the previous piece's endpoint check did not fire
        if vr[i] + t[i] - 1.0 > 0.0:
            return float(t[i])
        if i + 1 < n:
            l_next = vl[i + 1] + t[i + 1] - 1.0
            if l_next > 0.0:
                slope = (vl[i + 1] - vr[i]) / (t[i + 1] - t[i])
                root = t[i] + (1.0 - vr[i] - t[i]) / (slope + 1.0)
                return float(min(max(root, t[i]), t[i + 1]))
    # constant tail beyond the last knot: f = vr[-1]
    return float(1.0 - vr[-1])


def random_step_ddf(rng: np.random.Generator | np.random.RandomState,
                    max_jumps: int = 6, t_max: float = 2.0,
                    reach_one: bool | None = None) -> DDF:
    """A random step DDF: sorted jump times in (0, t_max], increasing levels.

    With reach_one left as None the final level hits 1 about half the time;
    used by the axiom checkers and the property-test suites.
    """
    k = int(rng.integers(1, max_jumps + 1)) if hasattr(rng, "integers") \
        else int(rng.randint(1, max_jumps + 1))
    uniform = rng.random if hasattr(rng, "random") else rng.rand
    times = np.sort(uniform(k)) * t_max
    times = np.unique(np.round(times, 12))
    times = times[times > 0]
    if len(times) == 0:
        times = np.array([t_max / 2])
    levels = np.sort(uniform(len(times)))
    if reach_one is None:
        reach_one = bool(uniform() < 0.5)
    if reach_one:
        levels[-1] = 1.0
    return DDF.step(list(zip(times, levels)))
