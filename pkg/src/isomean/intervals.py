"""Extended-real intervals with open/closed endpoint flags.

An interval is the basic carrier for domains of maps and evaluation windows.
Infinite endpoints are always open; degenerate (single-point) intervals are
allowed and closed by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._errors import PreconditionError


@dataclass(frozen=True)
class Interval:
    """An interval of the extended real line.

    Parameters
    ----------
    lo, hi : float
        Endpoints, ``lo <= hi``.  ``-inf``/``inf`` are permitted.
    lo_open, hi_open : bool
        Whether each endpoint is excluded.  Infinite endpoints are forced
        open regardless of the flag passed in.
    """

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise PreconditionError("interval endpoints must not be NaN")
        if lo > hi:
            raise PreconditionError(f"interval endpoints out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isinf(lo):
            object.__setattr__(self, "lo_open", True)
        if math.isinf(hi):
            object.__setattr__(self, "hi_open", True)
        if lo == hi and (self.lo_open or self.hi_open):
            raise PreconditionError("degenerate interval cannot have open endpoints")

    # -- predicates ---------------------------------------------------------

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        """Membership test with optional absolute slack at closed finite ends.

        The slack widens the interval slightly; it is used where numerically
        computed values must land inside a mathematically guaranteed hull.
        """
        if math.isnan(x):
            return False
        lo, hi = self.lo, self.hi
        if self.lo_open:
            if x <= lo:
                return False
        else:
            if x < lo - slack:
                return False
        if self.hi_open:
            if x >= hi:
                return False
        else:
            if x > hi + slack:
                return False
        return True

    def covers(self, other: "Interval") -> bool:
        """True when every point of `other` lies in `self`."""
        if other.lo < self.lo or (other.lo == self.lo and self.lo_open and not other.lo_open):
            return False
        if other.hi > self.hi or (other.hi == self.hi and self.hi_open and not other.hi_open):
            return False
        return True

    def intersects(self, other: "Interval") -> bool:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return False
        if lo == hi:
            # The single shared point must be closed on both sides.
            lo_ok = (self.lo < lo or not self.lo_open) and (other.lo < lo or not other.lo_open)
            hi_ok = (self.hi > hi or not self.hi_open) and (other.hi > hi or not other.hi_open)
            return lo_ok and hi_ok
        return True

    def intersection(self, other: "Interval") -> "Interval":
        """The common part of two overlapping intervals."""
        if not self.intersects(other):
            raise PreconditionError(f"intervals {self} and {other} do not overlap")
        if self.lo > other.lo:
            lo, lo_open = self.lo, self.lo_open
        elif self.lo < other.lo:
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or other.lo_open
        if self.hi < other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif self.hi > other.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or other.hi_open
        return Interval(lo, hi, lo_open, hi_open)

    # -- helpers ------------------------------------------------------------

    def interior_points(self, n: int) -> list[float]:
        """`n` points strictly inside the interval, suitable for sampling.

        For unbounded intervals the points are taken from a compactifying
        substitution so that they reach arbitrarily far out as `n` grows.
        """
        if n < 1:
            return []
        if self.degenerate:
            return [self.lo] * n
        lo, hi = self.lo, self.hi
        pts: list[float] = []
        if self.bounded:
            span = hi - lo
            for k in range(1, n + 1):
                pts.append(lo + span * k / (n + 1))
        elif math.isinf(lo) and math.isinf(hi):
            # Map t in (-1, 1) onto the whole line via t / (1 - t^2).
            for k in range(1, n + 1):
                t = -1.0 + 2.0 * k / (n + 1)
                pts.append(t / (1.0 - t * t))
        elif math.isinf(hi):
            # Map u in (0, 1) onto (lo, inf) via lo + u / (1 - u).
            for k in range(1, n + 1):
                u = k / (n + 1)
                pts.append(lo + u / (1.0 - u))
        else:
            # Mirror image for (-inf, hi).
            for k in range(1, n + 1):
                u = k / (n + 1)
                pts.append(hi - u / (1.0 - u))
        return pts

    def clamp_inward(self, eps: float) -> "Interval":
        """A closed bounded interval pulled inside `self` by `eps` at any
        open or infinite endpoint.  Handy for numeric probing."""
        lo, hi = self.lo, self.hi
        if math.isinf(lo):
            lo = min(-1.0 / eps, hi - 1.0)
        elif self.lo_open:
            lo = lo + eps
        if math.isinf(hi):
            hi = max(1.0 / eps, lo + 1.0)
        elif self.hi_open:
            hi = hi - eps
        if lo > hi:
            mid = 0.5 * (self.lo + self.hi)
            return Interval(mid, mid)
        return Interval(lo, hi)

    def __str__(self) -> str:
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{self.lo}, {self.hi}{rb}"


def hull(values) -> Interval:
    """Smallest closed interval containing all values."""
    vs = [float(v) for v in values]
    if not vs:
        raise PreconditionError("hull of an empty collection")
    return Interval(min(vs), max(vs))
