"""Significance tests for comparing property distributions and growth trajectories.

Distribution functions come from the regularised incomplete gamma and beta
functions implemented here (series and continued fractions), so the tests
have no dependency beyond numpy. All p-values are two-sided.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


# ------------------------------------------------------- special functions


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) by its power series, valid for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    # Q(a, x) by Lentz's continued fraction, valid for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammainc_lower(a: float, x: float) -> float:
    """Regularised lower incomplete gamma P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x <= 0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cf(a, x)


def gammainc_upper(a: float, x: float) -> float:
    """Regularised upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def _beta_cf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularised incomplete beta I_x(a, b)."""
    return _betainc_tails(a, b, x)[0]


def _betainc_upper(a: float, b: float, x: float) -> float:
    # 1 - I_x(a, b) without cancellation
    return _betainc_tails(a, b, x)[1]


def _betainc_tails(a: float, b: float, x: float) -> tuple[float, float]:
    """(I_x(a, b), 1 - I_x(a, b)), each from its own continued fraction where it is small."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0:
        return 0.0, 1.0
    if x >= 1:
        return 1.0, 0.0
    log_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        lower = front * _beta_cf(a, b, x) / a
        return lower, 1.0 - lower
    upper = front * _beta_cf(b, a, 1.0 - x) / b
    return 1.0 - upper, upper


def kolmogorov_sf(lam: float) -> float:
    """P(K > lam) for the limiting Kolmogorov distribution."""
    if lam <= 0:
        return 1.0
    if lam < 1.18:
        # small-lambda series for the CDF
        y = math.exp(-math.pi**2 / (8.0 * lam * lam))
        total = 0.0
        k = 1
        while True:
            term = y ** (k * k)
            total += term
            if term < 1e-17:
                break
            k += 2
        return 1.0 - math.sqrt(2.0 * math.pi) / lam * total
    total = 0.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-17:
            break
    return min(1.0, max(0.0, 2.0 * total))


def special_cdf(kind: str, x: float, **params) -> float:
    """CDF of ``normal`` (mu, sigma), ``chi2`` (df), ``f`` (dfn, dfd), ``t`` (df) or ``kolmogorov``."""
    return _dist(kind, x, params, upper=False)


def special_sf(kind: str, x: float, **params) -> float:
    """Survival function 1 - CDF, computed without cancellation."""
    return _dist(kind, x, params, upper=True)


def _positive(params: dict, name: str) -> float:
    value = float(params[name])
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def _dist(kind: str, x: float, params: dict, upper: bool) -> float:
    x = float(x)
    if kind == "normal":
        mu = float(params.get("mu", 0.0))
        sigma = float(params.get("sigma", 1.0))
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        z = (x - mu) / (sigma * math.sqrt(2.0))
        return 0.5 * math.erfc(z) if upper else 0.5 * math.erfc(-z)
    if kind == "chi2":
        k = _positive(params, "df")
        return gammainc_upper(k / 2.0, x / 2.0) if upper else gammainc_lower(k / 2.0, x / 2.0)
    if kind == "f":
        d1, d2 = _positive(params, "dfn"), _positive(params, "dfd")
        if x <= 0:
            return 1.0 if upper else 0.0
        if math.isinf(x):
            return 0.0 if upper else 1.0
        y = d1 * x / (d1 * x + d2)
        return _betainc_upper(d1 / 2.0, d2 / 2.0, y) if upper else betainc(d1 / 2.0, d2 / 2.0, y)
    if kind == "t":
        nu = _positive(params, "df")
        if math.isinf(x):
            tail = 0.0
        else:
            z = x * x / (nu + x * x)
            if z < 0.5:
                # Near zero nu / (nu + x^2) rounds to 1; use the central mass instead.
                tail = 0.5 - 0.5 * betainc(0.5, nu / 2.0, z)
            else:
                tail = 0.5 * betainc(nu / 2.0, 0.5, nu / (nu + x * x))
        # tail = P(T > |x|)
        if x >= 0:
            return tail if upper else 1.0 - tail
        return 1.0 - tail if upper else tail
    if kind == "kolmogorov":
        sf = kolmogorov_sf(x)
        return sf if upper else 1.0 - sf
    raise ValueError(f"unknown distribution {kind!r}")


# ------------------------------------------------------------- test results


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    test_name: str
    statistic: float
    p_value: float
    group_sizes: list[int]
    notes: list[str] = field(default_factory=list)
    extra: dict[str, float] = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return any(n in ("constant data", "degenerate") for n in self.notes)


def midranks(values) -> np.ndarray:
    """1-based ranks with ties given their average rank."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x))
    sorted_x = x[order]
    i = 0
    n = len(x)
    while i < n:
        j = i
        while j + 1 < n and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _tie_sizes(values) -> np.ndarray:
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return counts[counts > 1].astype(float)


def _two_sided_normal(z: float) -> float:
    return min(1.0, 2.0 * special_sf("normal", abs(z)))


def _check_groups(groups: Sequence[Sequence[float]], min_size: int) -> list[np.ndarray]:
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ValueError("need at least two groups")
    for g in arrays:
        if len(g) < min_size:
            raise ValueError(f"every group needs at least {min_size} values, got {len(g)}")
        if not np.all(np.isfinite(g)):
            raise ValueError("groups must contain finite values only")
    return arrays


# ------------------------------------------------------------ omnibus tests


def one_way_anova(groups: Sequence[Sequence[float]]) -> TestResult:
    arrays = _check_groups(groups, 2)
    k = len(arrays)
    sizes = [len(g) for g in arrays]
    n = sum(sizes)
    grand = math.fsum(np.concatenate(arrays)) / n
    ssb = math.fsum(len(g) * (g.mean() - grand) ** 2 for g in arrays)
    ssw = math.fsum(math.fsum((g - g.mean()) ** 2) for g in arrays)
    df_b, df_w = k - 1, n - k
    extra = {"df_between": df_b, "df_within": df_w, "ss_between": ssb, "ss_within": ssw}
    if ssw == 0:
        if ssb == 0:
            return TestResult("anova", math.nan, 1.0, sizes, ["constant data"], extra)
        return TestResult("anova", math.inf, 0.0, sizes, ["infinite F"], extra)
    f = (ssb / df_b) / (ssw / df_w)
    return TestResult("anova", f, special_sf("f", f, dfn=df_b, dfd=df_w), sizes, [], extra)


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    arrays = _check_groups(groups, 2)
    sizes = [len(g) for g in arrays]
    n = sum(sizes)
    pooled = np.concatenate(arrays)
    ranks = midranks(pooled)
    bounds = np.cumsum([0] + sizes)
    h = 12.0 / (n * (n + 1)) * math.fsum(
        ranks[lo:hi].sum() ** 2 / (hi - lo) for lo, hi in zip(bounds[:-1], bounds[1:])
    ) - 3.0 * (n + 1)
    ties = _tie_sizes(pooled)
    correction = float(1.0 - np.sum(ties**3 - ties) / (n**3 - n))
    df = len(arrays) - 1
    if correction <= 0:
        return TestResult("kruskal_wallis", math.nan, 1.0, sizes, ["constant data"], {"df": df})
    h = max(float(h / correction), 0.0)
    notes = ["ties corrected"] if len(ties) else []
    return TestResult("kruskal_wallis", h, special_sf("chi2", h, df=df), sizes, notes, {"df": df})


# -------------------------------------------------------------- pairwise tests


def t_test(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Welch's unequal-variance t-test."""
    xa, xb = _check_groups([a, b], 2)
    na, nb = len(xa), len(xb)
    va, vb = xa.var(ddof=1), xb.var(ddof=1)
    diff = xa.mean() - xb.mean()
    se2 = va / na + vb / nb
    sizes = [na, nb]
    if se2 == 0:
        if diff == 0:
            return TestResult("t_test", 0.0, 1.0, sizes, ["zero variance"])
        return TestResult("t_test", math.copysign(math.inf, diff), 0.0, sizes, ["zero variance"])
    t = float(diff / math.sqrt(se2))
    # Variance shares keep the Welch-Satterthwaite ratio finite when se2 underflows when squared.
    ra, rb = (va / na) / se2, (vb / nb) / se2
    df = float(1.0 / (ra**2 / (na - 1) + rb**2 / (nb - 1)))
    p = min(1.0, 2.0 * special_sf("t", abs(t), df=df))
    return TestResult("t_test", t, p, sizes, [], {"df": df})


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sided U-test, normal approximation with tie and continuity correction.

    ``statistic`` is min(U_a, U_b); the signed z is in ``extra``.
    """
    xa, xb = _check_groups([a, b], 2)
    na, nb = len(xa), len(xb)
    n = na + nb
    pooled = np.concatenate([xa, xb])
    ranks = midranks(pooled)
    u_a = float(ranks[:na].sum() - na * (na + 1) / 2.0)
    u = min(u_a, na * nb - u_a)
    mu = na * nb / 2.0
    ties = _tie_sizes(pooled)
    var = float(na * nb / 12.0 * ((n + 1) - np.sum(ties**3 - ties) / (n * (n - 1))))
    sizes = [na, nb]
    notes = ["ties corrected"] if len(ties) else []
    if var <= 0:
        return TestResult("mann_whitney_u", u, 1.0, sizes, notes + ["constant data"], {"u_a": u_a})
    z = max(abs(u_a - mu) - 0.5, 0.0) / math.sqrt(var)
    z = math.copysign(z, u_a - mu)
    return TestResult("mann_whitney_u", u, _two_sided_normal(z), sizes, notes, {"u_a": u_a, "z": z})


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value."""
    xa, xb = _check_groups([a, b], 1)
    xa, xb = np.sort(xa), np.sort(xb)
    na, nb = len(xa), len(xb)
    pooled = np.concatenate([xa, xb])
    cdf_a = np.searchsorted(xa, pooled, side="right") / na
    cdf_b = np.searchsorted(xb, pooled, side="right") / nb
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    en = na * nb / (na + nb)
    p = kolmogorov_sf(math.sqrt(en) * d)
    return TestResult("ks_two_sample", d, p, [na, nb], [], {"lambda": math.sqrt(en) * d})


def bonferroni(p_values: Sequence[float], m: int) -> list[float]:
    if m < len(p_values):
        raise ValueError(f"family size {m} smaller than number of p-values {len(p_values)}")
    return [min(1.0, m * p) for p in p_values]


# --------------------------------------------------- randomness and trend


def _series(series: Sequence[float]) -> tuple[np.ndarray, list[str]]:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("series needs at least two values")
    notes = ["short series"] if len(x) < 10 else []
    return x, notes


def runs_test(series: Sequence[float]) -> TestResult:
    """Wald-Wolfowitz runs above/below the median; values equal to the median are dropped."""
    x, notes = _series(series)
    med = np.median(x)
    signs = np.sign(x[x != med] - med)
    n1 = int(np.sum(signs > 0))
    n2 = int(np.sum(signs < 0))
    if n1 == 0 or n2 == 0:
        return TestResult("runs", math.nan, math.nan, [len(x)], notes + ["constant data"])
    runs = 1 + int(np.sum(signs[1:] != signs[:-1]))
    n = n1 + n2
    mean = 2.0 * n1 * n2 / n + 1.0
    var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0))
    extra = {"runs": runs, "expected": mean, "n_above": n1, "n_below": n2}
    if var <= 0:
        return TestResult("runs", math.nan, math.nan, [len(x)], notes + ["degenerate"], extra)
    z = (runs - mean) / math.sqrt(var)
    extra["z"] = z
    return TestResult("runs", z, _two_sided_normal(z), [len(x)], notes, extra)


def bartels_test(series: Sequence[float]) -> TestResult:
    """Bartels rank version of the von Neumann ratio; RVN < 2 suggests positive autocorrelation."""
    x, notes = _series(series)
    n = len(x)
    r = midranks(x)
    denom = float(np.sum((r - r.mean()) ** 2))
    if denom == 0:
        return TestResult("bartels", math.nan, math.nan, [n], notes + ["constant data"])
    rvn = float(np.sum(np.diff(r) ** 2) / denom)
    if n < 3:
        return TestResult("bartels", rvn, math.nan, [n], notes + ["degenerate"])
    var = 4.0 * (n - 2) * (5.0 * n * n - 2.0 * n - 9.0) / (5.0 * n * (n + 1.0) * (n - 1.0) ** 2)
    z = (rvn - 2.0) / math.sqrt(var)
    return TestResult("bartels", rvn, _two_sided_normal(z), [n], notes, {"z": z})


def mann_kendall(series: Sequence[float]) -> TestResult:
    """Mann-Kendall trend test. ``statistic`` is S; tau = S / (n(n-1)/2) is in ``extra``."""
    x, notes = _series(series)
    n = len(x)
    diffs = np.sign(x[None, :] - x[:, None])
    s = int(np.sum(np.triu(diffs, k=1)))
    ties = _tie_sizes(x)
    var = float((n * (n - 1) * (2 * n + 5) - np.sum(ties * (ties - 1) * (2 * ties + 5))) / 18.0)
    tau = s / (n * (n - 1) / 2.0)
    if var <= 0:
        return TestResult("mann_kendall", float(s), math.nan, [n], notes + ["constant data"], {"tau": tau})
    if s > 0:
        z = (s - 1) / math.sqrt(var)
    elif s < 0:
        z = (s + 1) / math.sqrt(var)
    else:
        z = 0.0
    return TestResult("mann_kendall", float(s), _two_sided_normal(z), [n], notes, {"tau": tau, "z": z, "var_s": var})
