"""Group-level statistics: Welch's t-test over per-epoch features.

The t-distribution tail probability is evaluated through the regularized
incomplete beta function, computed with the modified Lentz continued
fraction; no statistics library is involved so the p-values are
reproducible to the last bit across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EPS = 1e-300
_CF_TOL = 1e-12
_CF_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _EPS:
        d = _EPS
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _EPS:
            d = _EPS
        c = 1.0 + aa / c
        if abs(c) < _EPS:
            c = _EPS
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _EPS:
            d = _EPS
        c = 1.0 + aa / c
        if abs(c) < _EPS:
            c = _EPS
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise RuntimeError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_pvalue(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(0.5 * df, 0.5, x)


@dataclass
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    medians: tuple

    def __iter__(self):
        return iter((self.t_statistic, self.degrees_of_freedom, self.p_value))


def welch_ttest(a, b) -> TTestResult:
    """Two-sided Welch (unequal variance) t-test.

    Group sizes may differ; the Welch-Satterthwaite approximation supplies
    the degrees of freedom.  When both groups have zero variance the p-value
    is 1 if the means agree and 0 otherwise (degenerate convention).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError(
            f"insufficient samples: need >= 2 per group, got {a.size} and {b.size}"
        )
    mean_a, mean_b = a.mean(), b.mean()
    var_a = a.var(ddof=1)
    var_b = b.var(ddof=1)
    medians = (float(np.median(a)), float(np.median(b)))

    if var_a == 0.0 and var_b == 0.0:
        equal = mean_a == mean_b
        return TTestResult(
            t_statistic=0.0 if equal else math.copysign(math.inf, mean_a - mean_b),
            degrees_of_freedom=float(a.size + b.size - 2),
            p_value=1.0 if equal else 0.0,
            medians=medians,
        )

    se_a = var_a / a.size
    se_b = var_b / b.size
    t = (mean_a - mean_b) / math.sqrt(se_a + se_b)
    df = (se_a + se_b) ** 2 / (
        se_a ** 2 / (a.size - 1) + se_b ** 2 / (b.size - 1)
    )
    return TTestResult(
        t_statistic=float(t),
        degrees_of_freedom=float(df),
        p_value=t_two_sided_pvalue(float(t), float(df)),
        medians=medians,
    )


@dataclass
class GroupSummary:
    """Per-feature comparison of the two groups."""

    feature: str
    median_a: float
    median_b: float
    t_statistic: float
    degrees_of_freedom: float
    p_value: float


def group_summary(table, feature: str, per_subject_means: bool = False) -> GroupSummary:
    """Compare one feature column (or a measure's node average) across groups.

    Parameters
    ----------
    table : FeatureTable
        Must contain rows from both groups.
    feature : str
        Either a column name (e.g. ``"CC_ch03"``) or a measure name
        (``"CC"``/``"SC"``/``"EC"``); a measure name averages its node
        columns per row.
    per_subject_means : bool
        When set, epochs are collapsed to one mean value per subject before
        testing.  The default (epoch-level) treats every epoch as an
        independent observation even though within-subject epochs are
        correlated; see the docs for why both modes exist.
    """
    values = table.feature_values(feature)
    labels = table.labels
    a = values[labels == 0]
    b = values[labels == 1]
    if a.size == 0 or b.size == 0:
        raise ValueError("both groups must be present in the feature table")
    if per_subject_means:
        subjects = np.asarray(table.subject_ids)
        a = np.array([values[(subjects == s) & (labels == 0)].mean()
                      for s in sorted(set(subjects[labels == 0]))])
        b = np.array([values[(subjects == s) & (labels == 1)].mean()
                      for s in sorted(set(subjects[labels == 1]))])
    res = welch_ttest(a, b)
    return GroupSummary(
        feature=feature,
        median_a=res.medians[0],
        median_b=res.medians[1],
        t_statistic=res.t_statistic,
        degrees_of_freedom=res.degrees_of_freedom,
        p_value=res.p_value,
    )
