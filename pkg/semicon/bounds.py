"""
Closed-form capacity bounds for (0,k,p)-RLL semiconstrained systems.

The upper bounds come from Janson's inequality applied to the number S of
occurrences of 1^{k+1} in a uniform word: a word is admissible only if S is
at most pn, and Janson bounds that lower tail. A sharper, k-dependent form
integrates the generating function z(k, t) of the overlap count of a fixed
occurrence. The lower bound evaluates the rate function at an explicit
measure: probability p on 1^{k+1} and the remaining mass spread evenly.

As k grows along p = c·2^{-(k+1)} both gaps 1 − C scale like 2^{-k}, with
constants b_lo(c) (upper bound side, per 2^{k+2}) and b_up(c) (lower bound
side, per 2^{k+1}). D-dimensional arrays get the corresponding extensions.

Everything is evaluated in double precision in log space; factorials go
through the log-gamma function.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammaln

from .errors import InputError
from .formats import Report
from .measures import KTupleMeasure
from .words import Mode, check_budget, enumerate_count, parse_rational, rll_spec

LOG2E = math.log2(math.e)
T_MAX = 20.0


@dataclass(frozen=True)
class JansonParams:
    """Mean count and dependency sum of the 1^{k+1} occurrence indicators."""
    lam: float
    delta: float

    def __post_init__(self):
        if self.lam <= 0:
            raise InputError("lambda must be positive")
        if self.delta < 0:
            raise InputError("delta must be nonnegative")


@dataclass(frozen=True)
class AsymptoticConstants:
    c: float
    b_lo: float
    b_up: float


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")


def _check_dimensions(dimensions: int) -> None:
    if not isinstance(dimensions, (int, np.integer)) or dimensions < 1:
        raise InputError(f"dimensions must be a positive integer, got {dimensions!r}")


def janson_params(k: int, n: int, dimensions: int = 1) -> JansonParams:
    """λ = D·n^D/2^{k+1} and δ = 2 − 2^{-(k-1)} + (D−1)(k+1)²/2^k."""
    _check_k(k)
    _check_dimensions(dimensions)
    if n < 1:
        raise InputError("n must be positive")
    lam = dimensions * n ** dimensions / 2 ** (k + 1)
    delta = 2 - 2.0 ** (-(k - 1)) + (dimensions - 1) * (k + 1) ** 2 / 2 ** k
    return JansonParams(lam, delta)


def janson_tail(lam: float, delta: float, eta: int) -> float:
    """(sqrt(2π(η+1))·λ^η·e^{-λ}/η!)^{1/(1+δ)}, an upper bound on Pr[S <= η]."""
    if lam <= 0 or delta < 0:
        raise InputError("need lambda > 0 and delta >= 0")
    if eta < 0 or int(eta) != eta:
        raise InputError("eta must be a nonnegative integer")
    if eta > lam:
        raise InputError(f"eta={eta} exceeds lambda={lam}; the bound is vacuous")
    log_term = 0.5 * math.log(2 * math.pi * (eta + 1)) + eta * math.log(lam) - lam - gammaln(eta + 1)
    return math.exp(log_term / (1 + delta))


def _threshold(k: int) -> float:
    return 2.0 ** (-(k + 1))


def upper_bound_capacity(k: int, p: float) -> float:
    """Janson upper bound on C_{k,p}, valid for 0 < p <= 2^{-(k+1)}."""
    return upper_bound_capacity_ddim(k, p, 1)


def upper_bound_capacity_ddim(k: int, p: float, dimensions: int) -> float:
    """D-dimensional Janson bound, valid for 0 < p <= D·2^{-(k+1)}."""
    _check_k(k)
    _check_dimensions(dimensions)
    p = float(p)
    if not 0 < p <= dimensions * _threshold(k):
        raise InputError(f"p must lie in (0, {dimensions * _threshold(k)}], got {p}")
    numerator = dimensions * LOG2E / 2 ** (k + 1) + p * (k + 1) - p * math.log2(dimensions * math.e / p)
    denominator = 3 - 2.0 ** (-k + 1) + 2.0 ** (-k) * (dimensions - 1) * (k + 1) ** 2
    return 1 - numerator / denominator


def z_function(k: int, t: float) -> float:
    """E[e^{-tS'}] for the overlap count S' given an occurrence of 1^{k+1}."""
    _check_k(k)
    if t < 0:
        raise InputError("t must be nonnegative")
    x = math.exp(-t)
    return x * (1 + x ** k * (1 - x) / 2 ** k) ** 2 / (2 - x) ** 2


def overlap_distribution(k: int) -> list:
    """Exact (ℓ, Pr[S' = ℓ]) pairs, ℓ = 1..2k+1."""
    _check_k(k)
    pairs = [(ell, Fraction(ell, 2 ** (ell + 1))) for ell in range(1, k + 1)]
    pairs += [(ell, Fraction(2 * k + 4 - ell, 2 ** (ell + 1))) for ell in range(k + 1, 2 * k + 1)]
    pairs.append((2 * k + 1, Fraction(4, 2 ** (2 * k + 2))))
    return pairs


def z_limit(t: float) -> float:
    """Pointwise limit of z(k, t) as k → ∞: e^t/(1−2e^t)²."""
    return math.exp(t) / (1 - 2 * math.exp(t)) ** 2


def z_limit_primitive(t: float) -> float:
    """∫_0^t z_limit(u) du = (1/(1−2e^t) + 1)/2."""
    return 0.5 * (1 / (1 - 2 * math.exp(t)) + 1)


def b_lo(c: float) -> float:
    """Constant of the refined upper-bound gap (per 2^{k+2})."""
    if not 0 <= c <= 1:
        raise InputError("c must lie in [0, 1]")
    if c == 0:
        return LOG2E
    root = math.sqrt(1 + 8 * c)
    return (3 - root) / 2 * LOG2E - 2 * c * math.log2((1 + 4 * c + root) / (8 * c))


def binary_entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def b_up(c: float) -> float:
    """Constant of the lower-bound gap (per 2^{k+1}): (1+c)(1 − H(1/(1+c)))."""
    if not 0 <= c <= 1:
        raise InputError("c must lie in [0, 1]")
    return (1 + c) * (1 - binary_entropy(1 / (1 + c)))


def gap_ratio(c: float) -> float:
    """Lower-bound gap over upper-bound gap, (b_up/2^{k+1}) / (b_lo/2^{k+2}) = 2·b_up/b_lo.

    Equals 2·ln 2 at c = 0, peaks just above 1.5 and tends to 3/2 as c -> 1,
    so the lower bound is never more than about 1.5 times as far from 1 as
    the upper bound.
    """
    return 2 * b_up(c) / b_lo(c)


def asymptotic_constants(c: float) -> AsymptoticConstants:
    return AsymptoticConstants(c, b_lo(c), b_up(c))


def fully_constrained_gap(k: int) -> float:
    """log2(e)/(4·2^k), the c = 0 asymptotic gap of the (0,k)-RLL capacity."""
    _check_k(k)
    return LOG2E / (4 * 2 ** k)


def _optimal_t(k: int, c: float) -> float:
    if c >= 1:
        return 0.0
    if z_function(k, T_MAX) > c:
        return T_MAX
    return brentq(lambda t: z_function(k, t) - c, 0.0, T_MAX, xtol=1e-14)


def refined_upper_gap(k: int, p: float) -> float:
    """max_t (log2 e/2^{k+1})·∫_0^t z(k,u) du − t·p·log2 e, a lower bound on 1 − C_{k,p}.

    The maximizer solves z(k, t) = p·2^{k+1}; it is searched on [0, 20].
    """
    _check_k(k)
    p = float(p)
    if not 0 <= p <= _threshold(k):
        raise InputError(f"p must lie in [0, {_threshold(k)}], got {p}")
    t = _optimal_t(k, p * 2 ** (k + 1))
    if t == 0:
        return 0.0
    integral, _ = quad(lambda u: z_function(k, u), 0.0, t, epsabs=1e-10, epsrel=1e-10, limit=200)
    return max(LOG2E / 2 ** (k + 1) * integral - t * p * LOG2E, 0.0)


def refined_upper_bound(k: int, p: float) -> float:
    return 1 - refined_upper_gap(k, p)


def lower_bound_measure(k: int, p) -> KTupleMeasure:
    """The explicit (k+1)-tuple measure: p on 1^{k+1}, the rest uniform."""
    _check_k(k)
    p = parse_rational(p)
    if not 0 <= p <= Fraction(1, 2 ** (k + 1)):
        raise InputError(f"p must lie in [0, 2^-{k + 1}]")
    rest = (1 - p) / (2 ** (k + 1) - 1)
    return KTupleMeasure(2, k + 1, (rest,) * (2 ** (k + 1) - 1) + (p,))


def lower_bound_capacity(k: int, p) -> float:
    """1 − I(ν) for the explicit measure; exactly 1 at p = 2^{-(k+1)}."""
    _check_k(k)
    p = parse_rational(p)
    if not 0 <= p <= Fraction(1, 2 ** (k + 1)):
        raise InputError(f"p must lie in [0, 2^-{k + 1}], got {p}")
    spread = 1 + 2 * p * (2 ** k - 1)
    bulk = (1 - p) / (2 ** (k + 1) - 1) * math.log2((2 - 2 * p) / spread)
    peak = float(p) * math.log2(2 * p * (2 ** (k + 1) - 1) / spread) if p > 0 else 0.0
    return 1 - float(bulk) - peak


def lower_bound_capacity_ddim(k: int, p, dimensions: int,
                              one_dim_bound: Optional[Callable[[int, object], float]] = None) -> float:
    """1 + D·(C_{k,p/D} − 1) from any one-dimensional lower bound (default: the explicit measure)."""
    _check_dimensions(dimensions)
    p = parse_rational(p)
    if p / dimensions > Fraction(1, 2 ** (k + 1)):
        raise InputError(f"p/D must be at most 2^-{k + 1}")
    inner = (one_dim_bound or lower_bound_capacity)(k, p / dimensions)
    return 1 + dimensions * (inner - 1)


def cyclic_equivalence_check(k: int, p, n_max: int) -> Report:
    """Checks |B_{n-1}| <= |B^cyc_n| <= |B_{n+k}| for k+2 <= n <= n_max by enumeration."""
    _check_k(k)
    check_budget(2, n_max + k)
    spec = rll_spec(k, p)
    rows = []
    for n in range(k + 2, n_max + 1):
        shorter = enumerate_count(spec, n - 1, Mode.STRICT)
        cyclic = enumerate_count(spec, n, Mode.CYCLIC)
        longer = enumerate_count(spec, n + k, Mode.STRICT)
        rows.append([n, shorter, cyclic, longer, shorter <= cyclic <= longer])
    return Report(
        title="Cyclic versus linear counts",
        columns=["n", "linear_n_minus_1", "cyclic_n", "linear_n_plus_k", "holds"],
        rows=rows,
        metadata={"k": k, "p": parse_rational(p), "all_hold": all(r[-1] for r in rows)},
    )


def bounds_table(k: int, p_grid: Iterable, solve: bool = True, dimensions: int = 1,
                 solver: Optional[Callable[[int, object], float]] = None) -> Report:
    """Rows (k, p, lower, solved, upper, refined_upper_gap) over a grid of p.

    `solver` maps (k, p) to a capacity; it is only used in one dimension.
    Cells that do not apply (the upper bound at p = 0, the solver in D > 1)
    are left empty.
    """
    _check_k(k)
    rows = []
    for p in p_grid:
        p = parse_rational(p)
        if dimensions == 1:
            lower = lower_bound_capacity(k, p)
            upper = upper_bound_capacity(k, p) if p > 0 else None
            solved = solver(k, p) if (solve and solver is not None) else None
            refined = refined_upper_gap(k, p)
        else:
            lower = lower_bound_capacity_ddim(k, p, dimensions)
            upper = upper_bound_capacity_ddim(k, p, dimensions) if p > 0 else None
            solved = None
            refined = None
        rows.append([k, p, lower, solved, upper, refined])
    return Report(
        title="Capacity bounds",
        columns=["k", "p", "lower", "solved", "upper", "refined_upper_gap"],
        rows=rows,
        metadata={"dimensions": dimensions},
    )
