"""Two-argument means and the analytic bridges between mean families.

Contents:

* the quasi-Stolarsky family ``Q_{p,q}(a, b)`` with explicit closed forms
  on every degenerate parameter line,
* bivariate means generated by a map pair (the identity-function case of
  the general construction in :mod:`isomean.funmean`),
* Cauchy mean values ``(f'/g')⁻¹((f(b)−f(a))/(g(b)−g(a)))`` and the
  two-way conversion between Cauchy means and map-pair means, each
  conversion validated by an independently computed residual,
* slope-balance (necessary) and secant-slope (sufficient) comparison
  conditions for means of the same function under different map pairs,
* the geometric-versus-elastic gap analysis for power functions: the
  sign function ``S(r) = r^p − p·r·ln r − 1``, its nontrivial root, and
  the exact relative gap ``σ`` whose sign orders the two means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ._errors import (
    DomainError,
    NonMonotoneError,
    PreconditionError,
)
from .classify import DEFAULT_SAMPLES, classify_monotonicity, sample_grid
from .expr import (
    Expr,
    add,
    as_scalar_fn,
    as_vector_fn,
    compile_numpy,
    const,
    differentiate,
    div,
    mul,
    substitute,
    var,
)
from .frame import GeneratorMap, generator_map, make_frame
from .funmean import MeanProblem, _value_axis_window, dvi_mean
from .intervals import Interval
from .parse import parse
from .quadrature import integrate
from .verdict import EQ, GE, GT, LE, LT, UNDECIDED, Verdict

_PARAM_TOL = 1e-9


# ---------------------------------------------------------------------------
# quasi-Stolarsky means
# ---------------------------------------------------------------------------


def stolarsky_branch(p: float, q: float) -> str:
    """Which closed form evaluates ``Q_{p,q}``; thresholds at 1e-9."""
    if abs(p) < _PARAM_TOL and abs(q) < _PARAM_TOL:
        return "both-zero"
    if abs(p - q) < _PARAM_TOL:
        return "equal"
    if abs(p + q) < _PARAM_TOL:
        return "opposite"
    if abs(p) < _PARAM_TOL:
        return "first-zero"
    if abs(q) < _PARAM_TOL:
        return "second-zero"
    return "general"


@dataclass(frozen=True)
class QuasiStolarskyParams:
    """Exponent pair (p, q) and positive argument pair (a, b) for ``Q_{p,q}``."""

    p: float
    q: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("p", "q", "a", "b"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not math.isfinite(v):
                raise PreconditionError(f"{name} must be finite, got {v}")
        if self.a <= 0.0 or self.b <= 0.0:
            raise PreconditionError("arguments must be positive")

    @property
    def branch(self) -> str:
        return stolarsky_branch(self.p, self.q)


def quasi_stolarsky(params: QuasiStolarskyParams) -> float:
    """The two-parameter mean ``(p(b^{p+q}−a^{p+q}) / ((p+q)(b^p−a^p)))^{1/q}``.

    Parameter lines where the generic form degenerates are routed to their
    limits: ``p = q = 0`` gives the geometric mean, ``p = q ≠ 0`` the power
    mean of order p, ``p + q = 0`` and ``p = 0`` logarithmic-type means,
    and ``q = 0`` an identric-type mean.
    """
    p, q, a, b = params.p, params.q, params.a, params.b
    if a == b:
        return a
    branch = params.branch
    if branch == "both-zero":
        return math.sqrt(a * b)
    if branch == "equal":
        return ((a**p + b**p) / 2.0) ** (1.0 / p)
    if branch == "opposite":
        return ((b**p - a**p) / (p * math.log(b / a))) ** (1.0 / p)
    if branch == "first-zero":
        return ((b**q - a**q) / (q * math.log(b / a))) ** (1.0 / q)
    if branch == "second-zero":
        bp, ap = b**p, a**p
        return math.exp((bp * math.log(b) - ap * math.log(a)) / (bp - ap) - 1.0 / p)
    core = p * (b ** (p + q) - a ** (p + q)) / ((p + q) * (b**p - a**p))
    return core ** (1.0 / q)


# ---------------------------------------------------------------------------
# bivariate means from a map pair
# ---------------------------------------------------------------------------


def _as_map(source, domain: Interval) -> GeneratorMap:
    if isinstance(source, GeneratorMap):
        return source
    return generator_map(source, domain)


def classV_bivariate(g, h, a: float, b: float) -> float:
    """Mean of the identity under the pair (g, h): a mean of a and b."""
    a, b = float(a), float(b)
    if a == b:
        return a
    lo, hi = (a, b) if a <= b else (b, a)
    d = Interval(lo, hi)
    gm = _as_map(g, d)
    hm = _as_map(h, d)
    return dvi_mean(MeanProblem(var(), d, make_frame((gm, hm)))).value


# ---------------------------------------------------------------------------
# Cauchy mean values and conversions
# ---------------------------------------------------------------------------


def _as_expr(source, what: str) -> Expr:
    if isinstance(source, GeneratorMap):
        if source.expr is None:
            raise PreconditionError(f"{what} needs a symbolic expression")
        return source.expr
    if isinstance(source, str):
        return parse(source)
    if isinstance(source, Expr):
        return source
    raise PreconditionError(f"{what} must be an expression or a generator map")


@dataclass(frozen=True)
class CauchyMean:
    """The mean-value point of the Cauchy mean value theorem.

    ``value`` solves ``f'(t)/g'(t) = (f(b)−f(a))/(g(b)−g(a))``; the report
    records the secant slope and how the derivative ratio was inverted.
    """

    value: float
    secant: float
    ratio_monotonicity: str
    inverse_strategy: str


def cauchy_mean_report(f, g, a: float, b: float) -> CauchyMean:
    """Like :func:`cauchy_mean_value`, but with the inversion details kept."""
    a, b = float(a), float(b)
    if a == b:
        raise PreconditionError("the Cauchy mean value needs two distinct endpoints")
    lo, hi = (a, b) if a < b else (b, a)
    d = Interval(lo, hi)
    fe = _as_expr(f, "f")
    ge = _as_expr(g, "g")
    ratio = div(differentiate(fe), differentiate(ge))
    try:
        rm = generator_map(ratio, d)
    except NonMonotoneError as exc:
        raise NonMonotoneError(
            f"the derivative ratio is not strictly monotone on {d}, so the"
            f" Cauchy mean value does not exist uniquely: {exc}"
        ) from None
    fv = as_scalar_fn(fe)
    gv = as_scalar_fn(ge)
    dg = gv(b) - gv(a)
    if dg == 0.0 or not math.isfinite(dg):
        raise PreconditionError("g takes equal (or non-finite) endpoint values")
    secant = (fv(b) - fv(a)) / dg
    value = rm.invert(secant)
    return CauchyMean(
        value=value,
        secant=secant,
        ratio_monotonicity=rm.monotonicity.kind,
        inverse_strategy=rm.inverse_strategy,
    )


def cauchy_mean_value(f, g, a: float, b: float) -> float:
    """``(f'/g')⁻¹`` of the secant slope ``(f(b)−f(a))/(g(b)−g(a))``.

    The derivative ratio must be strictly monotone on the window — that is
    what makes the mean-value point unique and the inversion well posed.
    """
    return cauchy_mean_report(f, g, a, b).value


class Antiderivative:
    """A numeric antiderivative, frozen onto a cumulative knot grid.

    ``A(x) = ∫_base^x w`` with ``base`` the left end of the window.  Values
    are the stored cumulative sums plus one short local quadrature, so the
    evaluation path is independent of any single whole-interval adaptive
    run — which is what makes it usable as the second route of a
    cross-check.
    """

    def __init__(self, integrand, d: Interval, knots: int = 129):
        if not d.bounded or d.degenerate:
            raise PreconditionError("an antiderivative needs a bounded window")
        self.window = d
        self.base = d.lo
        self.integrand = parse(integrand) if isinstance(integrand, str) else integrand
        self._vec = as_vector_fn(self.integrand)
        self._scalar = as_scalar_fn(self.integrand)
        xs = np.linspace(d.lo, d.hi, knots)
        segs = []
        errs = []
        for x0, x1 in zip(xs[:-1], xs[1:]):
            v, e = integrate(self._vec, float(x0), float(x1))
            segs.append(v)
            errs.append(e)
        self._knots = xs
        self._cum = np.array([0.0] + [math.fsum(segs[: i + 1]) for i in range(len(segs))])
        self.abs_error_estimate = math.fsum(errs)

    def __call__(self, x: float) -> float:
        x = float(x)
        if not self.window.contains(x, slack=1e-12 * max(1.0, abs(x))):
            raise DomainError(f"{x} outside the antiderivative window {self.window}")
        j = int(np.searchsorted(self._knots, x, side="right")) - 1
        j = min(max(j, 0), len(self._knots) - 2)
        local, _ = integrate(self._vec, float(self._knots[j]), x)
        return float(self._cum[j]) + local

    def derivative_at(self, x: float) -> float:
        return self._scalar(float(x))


def cauchy_to_classV(f, g, d: Interval) -> Tuple[GeneratorMap, float]:
    """Express a Cauchy mean as a map-pair mean of the identity.

    Taking the y-axis map to be the derivative ratio ``f'/g'`` makes the
    pair mean of the identity coincide with the Cauchy mean value — the
    integrand ``(f'/g')·g'`` telescopes back to ``f'``.  Returns the
    constructed ratio map together with the residual between the two
    independently computed sides.
    """
    if not d.bounded or d.degenerate:
        raise PreconditionError("the conversion needs a bounded non-degenerate window")
    fe = _as_expr(f, "f")
    ge = _as_expr(g, "g")
    value_cauchy = cauchy_mean_value(fe, ge, d.lo, d.hi)
    gm = g if isinstance(g, GeneratorMap) else generator_map(ge, d)
    ratio = div(differentiate(fe), differentiate(ge))
    hm = generator_map(ratio, d)
    value_pair = classV_bivariate(gm, hm, d.lo, d.hi)
    return hm, abs(value_cauchy - value_pair)


def classV_to_cauchy(g, h, f, d: Interval) -> Tuple[Antiderivative, float]:
    """Express a map-pair mean of f as a Cauchy mean value.

    With ``L`` the running integral of ``(h∘f)·g'`` from the left endpoint,
    the Cauchy mean of the pair ``(L, g)`` equals ``f⁻¹`` of the mean of f
    under ``(g, h)``.  Pass ``f=None`` for the identity.  The left route
    runs L's cumulative grid and a secant inversion; the right route runs
    adaptive quadrature plus the usual h-pullback.  Returns L and the
    residual between the two routes, measured in the base variable.
    """
    if not d.bounded or d.degenerate:
        raise PreconditionError("the conversion needs a bounded non-degenerate window")
    gm = _as_map(g, d)
    fe = var() if f is None else _as_expr(f, "f")
    fm = generator_map(fe, d)
    fvec = as_vector_fn(fe)
    if isinstance(h, GeneratorMap):
        hm = h
    else:
        hm = generator_map(_as_expr(h, "h"), _value_axis_window(fe, d))

    if gm.expr is not None and hm.expr is not None:
        integrand = mul(substitute(hm.expr, fe), differentiate(gm.expr))
    else:

        def integrand(xs: np.ndarray) -> np.ndarray:
            xs = np.asarray(xs, dtype=float)
            return hm.value_many(fvec(xs)) * gm.derivative_many(xs)

    L = Antiderivative(integrand, d)
    dg = gm(d.hi) - gm(d.lo)
    secant = (L(d.hi) - L(d.lo)) / dg
    value_cauchy = fm.invert(hm.invert(secant))

    pair_mean = dvi_mean(MeanProblem(fe, d, make_frame((gm, hm)))).value
    value_pair = fm.invert(pair_mean)
    return L, abs(value_cauchy - value_pair)


# ---------------------------------------------------------------------------
# comparison conditions for two map pairs over the same function
# ---------------------------------------------------------------------------


def _strict_direction(fe: Expr, d: Interval) -> int:
    mono = classify_monotonicity(fe, d)
    if not mono.is_strictly_monotone:
        raise PreconditionError(
            f"the comparison conditions need strictly monotone f; got {mono.kind}"
        )
    return mono.direction


def _slope_balance(curve: Expr, base: Expr) -> Callable[[np.ndarray], np.ndarray]:
    c1 = differentiate(curve)
    c2 = differentiate(c1)
    b1 = differentiate(base)
    b2 = differentiate(b1)
    return compile_numpy(add(div(c2, c1), mul(const(2.0), div(b2, b1))))


def losonczi_necessary(f, g, h, G, H, d: Interval, samples: int = DEFAULT_SAMPLES) -> Verdict:
    """Pointwise slope-balance condition separating two map pairs.

    Comparing means of f under (g, h) against (G, H): with γ = h∘f and
    Γ = H∘f, the balance ``γ''/γ' + 2g''/g' ≤ Γ''/Γ' + 2G''/G'`` holding
    everywhere is *necessary* for the first mean to sit below the second
    (for increasing f; reversed for decreasing).  When the strict version
    holds it is also sufficient on sufficiently narrow windows, so the
    verdict is only decided when the window is narrow relative to its
    location; otherwise the sign pattern is reported as evidence.
    """
    if d.degenerate or not d.bounded:
        raise PreconditionError("comparison needs a bounded non-degenerate window")
    fe = _as_expr(f, "f")
    direction = _strict_direction(fe, d)
    gamma = substitute(_as_expr(h, "h"), fe)
    Gamma = substitute(_as_expr(H, "H"), fe)
    lhs_fn = _slope_balance(gamma, _as_expr(g, "g"))
    rhs_fn = _slope_balance(Gamma, _as_expr(G, "G"))
    xs = sample_grid(d, samples)
    with np.errstate(all="ignore"):
        lhs = lhs_fn(xs)
        rhs = rhs_fn(xs)
    ok = np.isfinite(lhs) & np.isfinite(rhs)
    if int(ok.sum()) < 32:
        raise DomainError("slope-balance terms are not evaluable on the window")
    gap = (rhs[ok] - lhs[ok]) * (1 if direction > 0 else -1)
    scale = max(1.0, float(np.max(np.abs(lhs[ok]))), float(np.max(np.abs(rhs[ok]))))
    tiny = 1e-9 * scale
    span = d.hi - d.lo
    predictive = span <= 1e-2 * max(1.0, abs(d.lo), abs(d.hi))
    evidence = {
        "window": str(d),
        "gap_min": float(np.min(gap)),
        "gap_max": float(np.max(gap)),
        "predictive": predictive,
        "resolution": samples,
    }
    if np.all(gap > tiny):
        evidence["condition_for_le"] = "holds strictly"
        if predictive:
            return Verdict(LE, "slope-balance-necessary", evidence)
    elif np.all(gap < -tiny):
        evidence["condition_for_le"] = "fails strictly (reverse holds)"
        if predictive:
            return Verdict(GE, "slope-balance-necessary", evidence)
    elif np.all(gap >= -tiny):
        evidence["condition_for_le"] = "holds non-strictly"
    elif np.all(gap <= tiny):
        evidence["condition_for_le"] = "fails non-strictly"
    else:
        evidence["condition_for_le"] = "mixed sign"
    return Verdict(UNDECIDED, "slope-balance-necessary", evidence)


def losonczi_sufficient(
    f, g, h, G, H, d: Interval, mesh: int = 64, random_pairs: int = 1000
) -> Verdict:
    """Two-point secant-slope condition; sufficient with no window restriction.

    For increasing f, the inequality

        (γ(u)−γ(v))/γ'(v) · g'(u)/g'(v)  ≤  (Γ(u)−Γ(v))/Γ'(v) · G'(u)/G'(v)

    for all u, v in the window forces the (g, h)-mean of f below the
    (G, H)-mean (reversed for decreasing f).  The condition is scanned on
    a structured mesh plus a seeded random cloud of point pairs.
    """
    if d.degenerate or not d.bounded:
        raise PreconditionError("comparison needs a bounded non-degenerate window")
    fe = _as_expr(f, "f")
    direction = _strict_direction(fe, d)
    gamma = substitute(_as_expr(h, "h"), fe)
    Gamma = substitute(_as_expr(H, "H"), fe)
    ge, Ge = _as_expr(g, "g"), _as_expr(G, "G")

    gam = compile_numpy(gamma)
    dgam = compile_numpy(differentiate(gamma))
    Gam = compile_numpy(Gamma)
    dGam = compile_numpy(differentiate(Gamma))
    dg = compile_numpy(differentiate(ge))
    dG = compile_numpy(differentiate(Ge))

    base = sample_grid(d, mesh)
    uu, vv = np.meshgrid(base, base)
    us, vs = uu.ravel(), vv.ravel()
    rng = np.random.default_rng(20260817)
    lo, hi = d.clamp_inward(1e-9).lo, d.clamp_inward(1e-9).hi
    us = np.concatenate([us, rng.uniform(lo, hi, random_pairs)])
    vs = np.concatenate([vs, rng.uniform(lo, hi, random_pairs)])

    with np.errstate(all="ignore"):
        lhs = (gam(us) - gam(vs)) / dgam(vs) * dg(us) / dg(vs)
        rhs = (Gam(us) - Gam(vs)) / dGam(vs) * dG(us) / dG(vs)
    ok = np.isfinite(lhs) & np.isfinite(rhs)
    if int(ok.sum()) < 32:
        raise DomainError("secant-slope terms are not evaluable on the window")
    gap = (rhs[ok] - lhs[ok]) * (1 if direction > 0 else -1)
    scale = max(1.0, float(np.max(np.abs(lhs[ok]))), float(np.max(np.abs(rhs[ok]))))
    tiny = 1e-9 * scale
    evidence = {
        "window": str(d),
        "pairs": int(ok.sum()),
        "gap_min": float(np.min(gap)),
        "gap_max": float(np.max(gap)),
    }
    if np.all(gap >= -tiny):
        return Verdict(LE, "secant-slope-sufficient", evidence)
    if np.all(gap <= tiny):
        return Verdict(GE, "secant-slope-sufficient", evidence)
    return Verdict(UNDECIDED, "secant-slope-sufficient", evidence)


# ---------------------------------------------------------------------------
# geometric versus elastic mean of a power function
# ---------------------------------------------------------------------------


def s_function(r: float, p: float) -> float:
    """``S(r) = r^p − p·r·ln r − 1``; its sign on [a/b, b/a] orders G and E."""
    r, p = float(r), float(p)
    if r <= 0.0:
        raise PreconditionError("S is defined for positive r")
    try:
        rp = math.exp(p * math.log(r))
    except OverflowError:
        return math.inf
    return rp - p * r * math.log(r) - 1.0


def s_second_root(p: float) -> Optional[float]:
    """The nontrivial root of S for the given exponent, when one exists.

    ``p > 2`` has a root α < 1 (S negative left of it); ``1 < p < 2`` has a
    root β > 1 (S positive right of it).  For ``p < 0``, ``0 < p ≤ 1`` and
    ``p = 2`` the sign of S never recrosses, so None is returned.
    """
    p = float(p)
    if p == 0.0:
        raise PreconditionError("the sign function needs a nonzero exponent")
    if p < 0.0 or 0.0 < p <= 1.0 or abs(p - 2.0) < 1e-12:
        return None
    if p > 2.0:
        lo = 0.5
        while s_function(lo, p) >= -1e-12:
            lo *= 0.5
            if lo < 1e-300:
                return None  # pragma: no cover - unreachable for p > 2
        hi = 1.0 - 1e-3
    else:  # 1 < p < 2
        lo = 1.0 + 1e-3
        hi = 2.0
        while s_function(hi, p) <= 1e-12:
            hi *= 2.0
            if hi > 1e300:
                return None  # pragma: no cover - unreachable for 1 < p < 2
    flo = s_function(lo, p)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-12 * max(1.0, abs(mid)):
            break
        fm = s_function(mid, p)
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sigma_GE(r: float, p: float) -> float:
    """Relative gap ``G/E − 1`` between the geometric and elastic means of
    ``x^p`` over a window with endpoint ratio r.

    Computed in log space so huge ratios stay meaningful: with ``z = p·ln r``,

        σ = expm1( ln(z/expm1(z)) + p·r·ln r/(r−1) − p ).

    Symmetric in r ↔ 1/r; negative exactly when the geometric mean is the
    smaller one.
    """
    r, p = float(r), float(p)
    if r <= 0.0:
        raise PreconditionError("the endpoint ratio must be positive")
    if p == 0.0:
        raise PreconditionError("the exponent must be nonzero")
    if abs(r - 1.0) < 1e-14:
        return 0.0
    z = p * math.log(r)
    if z > 1e-8:
        ln_first = math.log(z) - z - math.log1p(-math.exp(-z))
    elif z < -1e-8:
        ln_first = math.log(z / math.expm1(z))
    else:
        ln_first = -math.log1p(z / 2.0)
    t1 = p * r * math.log(r) / (r - 1.0)
    exponent = ln_first + t1 - p
    if exponent > 709.0:
        return math.inf
    return math.expm1(exponent)


def compare_G_E(a: float, b: float, p: float) -> Verdict:
    """Order the geometric mean of ``x^p`` on [a, b] against the elastic one.

    The verdict comes from the sign of the exact relative gap σ; the
    evidence records σ, the endpoint ratio, and where the nontrivial root
    of S sits for this exponent.
    """
    a, b, p = float(a), float(b), float(p)
    if not (0.0 < a < b):
        raise PreconditionError("needs 0 < a < b")
    if p == 0.0:
        raise PreconditionError("needs a nonzero exponent")
    r = b / a
    sigma = sigma_GE(r, p)
    evidence = {"sigma": sigma, "ratio": r, "s_root": s_second_root(p)}
    if abs(sigma) <= 1e-15:
        return Verdict(EQ, "relative-gap-sign", evidence)
    if sigma > 0.0:
        return Verdict(GT, "relative-gap-sign", evidence)
    return Verdict(LT, "relative-gap-sign", evidence)
