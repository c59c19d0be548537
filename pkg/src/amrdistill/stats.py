"""One-sample t-test screening of concept entropies.

Within a document every concept's entropy is compared with the document
mean through ``t = (H - mean) / (s / sqrt(n))`` and a two-sided p-value
from Student's t distribution with ``n - 1`` degrees of freedom. The t
CDF is evaluated through the regularized incomplete beta function, which
is computed here with a modified-Lentz continued fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .entropy import ConceptEntropy

HIGH_ONLY = "high-only"
TWO_SIDED = "two-sided"
SELECTION_MODES = (HIGH_ONLY, TWO_SIDED)

CF_MAX_ITER = 300
CF_EPS = 1e-15
_TINY = 1e-300


class DomainError(ValueError):
    pass


class EmptyPopulation(ValueError):
    pass


class DegeneratePopulation(ValueError):
    pass


@dataclass(frozen=True)
class EntropyPopulation:
    values: tuple
    mean: float
    sample_std: float
    n: int

    @property
    def degenerate(self) -> bool:
        return self.n < 2 or self.sample_std == 0.0


@dataclass(frozen=True)
class SignificanceResult:
    """Test outcome for one concept.

    For degenerate populations (fewer than two concepts, or zero spread)
    no test is possible: ``t_stat`` is 0, ``p_value`` is 1, and every
    concept is kept with ``degenerate`` set.
    """
    concept_label: str
    entropy: float
    t_stat: float
    p_value: float
    selected: bool
    degenerate: bool = False
    variable: Optional[str] = None
    sentence_index: int = 0


def population(values: Sequence[float], ddof: int = 1) -> EntropyPopulation:
    """Mean and standard deviation of ``values``.

    ``ddof=1`` gives the sample (n - 1) standard deviation; ``ddof=0``
    the population one. A single value has standard deviation 0.
    """
    values = tuple(float(v) for v in values)
    if not values:
        raise EmptyPopulation("cannot build a population from no values")
    if ddof not in (0, 1):
        raise ValueError("ddof must be 0 or 1")
    n = len(values)
    if min(values) == max(values):
        return EntropyPopulation(values, values[0], 0.0, n)
    mean = math.fsum(values) / n
    if n - ddof <= 0:
        return EntropyPopulation(values, mean, 0.0, n)
    var = math.fsum((v - mean) ** 2 for v in values) / (n - ddof)
    return EntropyPopulation(values, mean, math.sqrt(var), n)


def t_statistic(h: float, pop: EntropyPopulation) -> float:
    if pop.degenerate:
        raise DegeneratePopulation(f"n={pop.n}, s={pop.sample_std}")
    return (h - pop.mean) / (pop.sample_std / math.sqrt(pop.n))


def _beta_cf(x: float, a: float, b: float) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    The continued fraction converges fast for ``x < (a + 1) / (a + b + 2)``;
    above that the reflection ``I_x(a, b) = 1 - I_{1-x}(b, a)`` is used.
    """
    if not (0.0 <= x <= 1.0) or not (a > 0.0) or not (b > 0.0):
        raise DomainError(f"incomplete_beta undefined for x={x}, a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(x, a, b) / a
    return 1.0 - math.exp(log_front) * _beta_cf(1.0 - x, b, a) / b


def _check_df(df: float) -> None:
    if not (df > 0) or math.isinf(df):
        raise DomainError(f"degrees of freedom must be positive and finite, got {df}")


def _two_tail(t: float, df: float) -> float:
    # P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    if math.isnan(t):
        raise DomainError("t is NaN")
    if math.isinf(t):
        return 0.0
    t2 = t * t
    return incomplete_beta(df / (df + t2), df / 2.0, 0.5)


def student_t_cdf(t: float, df: float) -> float:
    """CDF of Student's t distribution with ``df`` degrees of freedom."""
    _check_df(df)
    if t == 0.0:
        return 0.5
    tail = 0.5 * _two_tail(t, df)
    return 1.0 - tail if t > 0 else tail


def p_value(t: float, df: float) -> float:
    """Two-sided p-value, ``2 * (1 - F(|t|))``."""
    _check_df(df)
    if t == 0.0:
        return 1.0
    return min(1.0, max(0.0, _two_tail(t, df)))


def select_significant(entropies: Sequence[ConceptEntropy], alpha: float = 0.3,
                       mode: str = HIGH_ONLY, ddof: int = 1) -> List[SignificanceResult]:
    """Test each concept against the pooled population of ``entropies``.

    A concept is selected when ``p < alpha``; in ``high-only`` mode it must
    also lie above the mean (``t > 0``), so unusually predictable concepts
    are dropped rather than kept.
    """
    if not entropies:
        raise EmptyPopulation("no concept entropies to test")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if mode not in SELECTION_MODES:
        raise ValueError(f"mode must be one of {SELECTION_MODES}, got {mode!r}")

    pop = population([e.entropy for e in entropies], ddof=ddof)
    if pop.degenerate:
        return [SignificanceResult(e.concept_label, e.entropy, 0.0, 1.0, True, True,
                                   e.variable, e.sentence_index)
                for e in entropies]

    df = pop.n - 1
    results = []
    for e in entropies:
        t = t_statistic(e.entropy, pop)
        p = p_value(t, df)
        selected = p < alpha and (mode == TWO_SIDED or t > 0)
        results.append(SignificanceResult(e.concept_label, e.entropy, t, p, selected, False,
                                          e.variable, e.sentence_index))
    return results
