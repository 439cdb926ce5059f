"""Discrete power-law fitting with KS-based xmin selection and bootstrap p-values.

The model is P(x) = x**-alpha / zeta(alpha, xmin) for integers x >= xmin.
alpha is the exact discrete maximum-likelihood estimate (golden-section
search on the log-likelihood), xmin minimises the Kolmogorov-Smirnov
distance between the tail and the fitted model, and the goodness-of-fit
p-value comes from a semi-parametric bootstrap that refits every replicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from collocnet.errors import UndefinedProperty
from collocnet.netbuild import CollocationNetwork

ALPHA_LOW = 1.0 + 1e-6
ALPHA_HIGH = 20.0
GOLDEN_TOL = 1e-6

# B_2j / (2j)! for j = 1..9
_EM_COEFFS = np.array([
    1 / 6 / 2,
    -1 / 30 / 24,
    1 / 42 / 720,
    -1 / 30 / 40320,
    5 / 66 / 3628800,
    -691 / 2730 / 479001600,
    7 / 6 / 87178291200,
    -3617 / 510 / 20922789888000,
    43867 / 798 / 6402373705728000,
])
_EM_DIRECT_TERMS = 10


def hurwitz_zeta(s, q):
    """Hurwitz zeta(s, q) = sum_{k>=0} (q + k)**-s for s > 1, q > 0.

    Direct summation of the first terms plus an Euler-Maclaurin tail.
    Broadcasts over numpy arrays.
    """
    s = np.asarray(s, dtype=float)
    q = np.asarray(q, dtype=float)
    s, q = np.broadcast_arrays(s, q)
    total = np.zeros(s.shape)
    for k in range(_EM_DIRECT_TERMS):
        total += (q + k) ** -s
    a = q + _EM_DIRECT_TERMS
    total += a ** (1.0 - s) / (s - 1.0) + 0.5 * a ** -s
    term = s * a ** (-s - 1.0)
    inv_a2 = 1.0 / (a * a)
    for j, coeff in enumerate(_EM_COEFFS, start=1):
        total += coeff * term
        term = term * (s + 2 * j - 1) * (s + 2 * j) * inv_a2
    return total[()] if total.ndim == 0 else total


# ------------------------------------------------------------ degree input


@dataclass(frozen=True)
class DegreeSequence:
    mode: str
    counts: np.ndarray

    @property
    def positive(self) -> np.ndarray:
        return self.counts[self.counts > 0]

    @property
    def n_zero(self) -> int:
        return int(np.sum(self.counts == 0))


def degree_sequence(net: CollocationNetwork, mode: Literal["all", "in", "out"] = "all") -> DegreeSequence:
    """Per-vertex degrees. A self-loop adds 1 to in and out, or 2 to an undirected degree."""
    if mode not in ("all", "in", "out"):
        raise ValueError(f"unknown degree mode {mode!r}")
    if mode != "all" and not net.directed:
        raise UndefinedProperty("not applicable", f"{mode}-degree of an undirected network")
    edges = net.edge_array()
    n = net.n_vertices
    out_deg = np.bincount(edges[:, 0], minlength=n) if len(edges) else np.zeros(n, np.int64)
    in_deg = np.bincount(edges[:, 1], minlength=n) if len(edges) else np.zeros(n, np.int64)
    counts = {"all": in_deg + out_deg, "in": in_deg, "out": out_deg}[mode]
    return DegreeSequence(mode, counts.astype(np.int64))


# ------------------------------------------------------------------ fitting


@dataclass(frozen=True)
class PowerLawFit:
    xmin: int
    alpha: float
    ks_distance: float
    n_tail: int
    n: int
    degenerate: bool = False


def _clean(samples) -> np.ndarray:
    x = np.asarray(samples)
    if x.size and np.any(x != np.floor(x)):
        raise ValueError("power-law samples must be integers")
    x = np.sort(x.astype(np.int64))
    if x.size and x[0] < 1:
        raise ValueError("power-law samples must be positive")
    return x


def _golden_alpha(n: np.ndarray, log_sum: np.ndarray, xmin: np.ndarray) -> np.ndarray:
    """Vectorised golden-section maximisation of the discrete log-likelihood."""
    n = np.asarray(n, dtype=float)
    log_sum = np.asarray(log_sum, dtype=float)
    xmin = np.asarray(xmin, dtype=float)

    def loglik(alpha):
        return -n * np.log(hurwitz_zeta(alpha, xmin)) - alpha * log_sum

    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    lo = np.full(n.shape, ALPHA_LOW)
    hi = np.full(n.shape, ALPHA_HIGH)
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = loglik(c), loglik(d)
    while np.max(hi - lo) > GOLDEN_TOL:
        left = fc > fd  # maximum lies in [lo, d]
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = np.where(left, hi - inv_phi * (hi - lo), d)
        new_d = np.where(left, c, lo + inv_phi * (hi - lo))
        f_new = loglik(np.where(left, new_c, new_d))
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
        c, d = new_c, new_d
    return (lo + hi) / 2.0


def mle_alpha(samples, xmin: int, method: Literal["exact", "approx"] = "exact") -> float:
    """Discrete power-law exponent for the tail ``samples >= xmin``.

    ``approx`` is the closed form ``1 + n / sum(ln(x / (xmin - 0.5))))``.
    """
    x = _clean(samples)
    tail = x[x >= xmin]
    if len(tail) < 2:
        raise UndefinedProperty("too few tail samples", f"{len(tail)} samples >= {xmin}")
    if tail[0] == tail[-1]:
        raise UndefinedProperty("zero variance tail")
    if method == "approx":
        return float(1.0 + len(tail) / np.sum(np.log(tail / (xmin - 0.5))))
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    return float(_golden_alpha(len(tail), np.sum(np.log(tail)), xmin))


def _approx_alpha(n, log_sum_shift):
    return 1.0 + n / log_sum_shift


def ks_distance(samples, xmin: int, alpha: float) -> float:
    """Sup distance between the empirical tail CDF and the fitted discrete CDF.

    Taken over every integer >= xmin, not only the observed values.
    """
    x = _clean(samples)
    tail = x[x >= xmin]
    if len(tail) == 0:
        raise UndefinedProperty("empty tail")
    values, counts = np.unique(tail, return_counts=True)
    d = _ks_matrix(values, np.cumsum(counts), np.array([0]), np.array([float(alpha)]), np.array([xmin]))
    return float(d[0])


def _ks_matrix(values, cum_counts, starts, alphas, xmin_values=None):
    """KS distances for several candidate tails of one sorted distinct-value array.

    Candidate i uses the tail ``values[starts[i]:]`` with exponent ``alphas[i]``.
    ``xmin_values`` defaults to ``values[starts]``.
    """
    m = len(values)
    total = cum_counts[-1]
    if xmin_values is None:
        xmin_values = values[starts]
    out = np.empty(len(starts))
    cols = np.arange(m)
    chunk = max(1, 2_000_000 // max(m, 1))
    vals = values.astype(float)
    for lo in range(0, len(starts), chunk):
        st = starts[lo:lo + chunk]
        al = alphas[lo:lo + chunk][:, None]
        xm = xmin_values[lo:lo + chunk].astype(float)[:, None]
        before = np.where(st > 0, cum_counts[st - 1], 0)[:, None]
        n_tail = (total - before).astype(float)
        active = cols[None, :] >= st[:, None]
        emp = np.where(active, (cum_counts[None, :] - before) / n_tail, 0.0)
        emp_prev = np.concatenate([np.zeros((len(st), 1)), emp[:, :-1]], axis=1)
        emp_prev = np.where(active, emp_prev, 0.0)
        z0 = hurwitz_zeta(al[:, 0], xm[:, 0])[:, None]
        zu = hurwitz_zeta(al, np.broadcast_to(vals[None, :], active.shape))
        model_before = 1.0 - zu / z0  # model CDF at value - 1
        model_at = model_before + vals[None, :] ** -al / z0  # model CDF at value
        gap_at = np.abs(emp - model_at)
        gap_before = np.abs(emp_prev - model_before)
        # the point value - 1 exists in the support only when it is >= xmin
        before_ok = active & (vals[None, :] - 1 >= xm)
        d = np.maximum(
            np.max(np.where(active, gap_at, 0.0), axis=1),
            np.max(np.where(before_ok, gap_before, 0.0), axis=1),
        )
        out[lo:lo + chunk] = d
    return out


def fit_powerlaw(
    samples,
    xmin: int | None = None,
    method: Literal["exact", "approx"] = "exact",
) -> PowerLawFit:
    """Fit with a fixed ``xmin``, or scan for the KS-minimising one when ``xmin`` is None."""
    if xmin is None:
        return select_xmin(samples, method)
    x = _clean(samples)
    alpha = mle_alpha(x, xmin, method)
    tail = x[x >= xmin]
    return PowerLawFit(int(xmin), alpha, ks_distance(tail, xmin, alpha), len(tail), len(x))


def select_xmin(samples, method: Literal["exact", "approx"] = "exact") -> PowerLawFit:
    """Scan every distinct sample value as xmin and keep the KS minimiser.

    The largest distinct value is never a candidate (its tail is constant).
    Ties go to the smaller xmin. ``degenerate`` marks fits where only one
    candidate was available.
    """
    x = _clean(samples)
    values, counts = np.unique(x, return_counts=True)
    if len(values) < 2:
        raise UndefinedProperty("too few distinct values", f"{len(values)} distinct")
    cum = np.cumsum(counts)
    starts = np.arange(len(values) - 1)
    n_tail = len(x) - np.concatenate([[0], cum[:-1]])[starts]
    logs = np.log(values) * counts
    suffix_log = np.cumsum(logs[::-1])[::-1][starts]
    xmins = values[starts]
    if method == "exact":
        alphas = _golden_alpha(n_tail, suffix_log, xmins)
    elif method == "approx":
        shift = suffix_log - n_tail * np.log(xmins - 0.5)
        alphas = _approx_alpha(n_tail, shift)
    else:
        raise ValueError(f"unknown method {method!r}")
    ks = _ks_matrix(values, cum, starts, alphas)
    best = int(np.argmin(ks))
    return PowerLawFit(
        int(xmins[best]),
        float(alphas[best]),
        float(ks[best]),
        int(n_tail[best]),
        len(x),
        degenerate=len(starts) == 1,
    )


# ----------------------------------------------------------------- sampling


_MAX_DRAW = 2**62


def sample_powerlaw(alpha: float, xmin: int, n: int, seed=None) -> np.ndarray:
    """``n`` exact draws from the discrete power law by inverse-CDF search.

    ``seed`` may be an int or a numpy ``Generator``.
    """
    if not alpha > 1 or xmin < 1 or n < 0:
        raise ValueError(f"invalid power-law parameters alpha={alpha}, xmin={xmin}, n={n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = rng.random(n)
    target = (1.0 - u) * hurwitz_zeta(alpha, xmin)
    # smallest x >= xmin with zeta(alpha, x + 1) <= target
    lo = np.full(n, xmin - 1, dtype=np.int64)
    hi = np.full(n, xmin, dtype=np.int64)
    pending = hurwitz_zeta(alpha, hi + 1.0) > target
    while pending.any():
        lo = np.where(pending, hi, lo)
        hi = np.where(pending, np.minimum(2 * hi + 1, _MAX_DRAW), hi)
        pending &= hi < _MAX_DRAW
        pending &= hurwitz_zeta(alpha, hi + 1.0) > target
    while True:
        gap = hi - lo
        open_ = gap > 1
        if not open_.any():
            break
        mid = lo + gap // 2
        ok = hurwitz_zeta(alpha, mid + 1.0) <= target
        hi = np.where(open_ & ok, mid, hi)
        lo = np.where(open_ & ~ok, mid, lo)
    return hi


# ---------------------------------------------------------------- bootstrap


def bootstrap_ks(
    samples,
    fit: PowerLawFit,
    B: int,
    seed: int,
    xmin_fixed: int | None = None,
    method: Literal["exact", "approx"] = "exact",
) -> np.ndarray:
    """KS distances of ``B`` semi-parametric bootstrap replicates, each refitted.

    Replicate r draws from its own stream seeded by ``(seed, r)``; replicates
    whose refit is undefined come back as NaN.
    """
    if B < 1:
        raise ValueError("bootstrap count B must be >= 1")
    x = _clean(samples)
    n = len(x)
    body = x[x < fit.xmin]
    p_tail = fit.n_tail / n
    out = np.empty(B)
    for r in range(B):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        k_tail = rng.binomial(n, p_tail) if len(body) else n
        draw_tail = sample_powerlaw(fit.alpha, fit.xmin, k_tail, rng)
        draw_body = body[rng.integers(0, len(body), n - k_tail)] if len(body) else body[:0]
        rep = np.concatenate([draw_body, draw_tail])
        try:
            out[r] = fit_powerlaw(rep, xmin_fixed, method).ks_distance
        except UndefinedProperty:
            out[r] = np.nan
    return out


def pvalue_from_replicates(replicate_ks: np.ndarray, observed_ks: float) -> float:
    valid = replicate_ks[~np.isnan(replicate_ks)]
    if len(valid) == 0:
        raise UndefinedProperty("no valid bootstrap replicate")
    return float(np.mean(valid >= observed_ks))


def gof_pvalue(
    samples,
    fit: PowerLawFit,
    B: int = 100,
    seed: int = 0,
    xmin_fixed: int | None = None,
    method: Literal["exact", "approx"] = "exact",
) -> float:
    """Fraction of bootstrap replicates whose KS distance is at least the observed one.

    Small values (< 0.05) reject the power-law hypothesis.
    """
    if fit.degenerate:
        raise UndefinedProperty("degenerate fit")
    return pvalue_from_replicates(bootstrap_ks(samples, fit, B, seed, xmin_fixed, method), fit.ks_distance)
