"""Bayes-factor-based credibility analysis: minimum Bayes factors,
sufficiently sceptical prior variances via Lambert W, advocacy priors with
fixed coefficient of variation, and the Bayes factor for intrinsic
credibility.

All Bayes factors are oriented as BF01 (null over alternative); display
layers may invert to "1/x" strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonexistenceError
from .model import DEFAULT_LEVEL, EffectEstimate, NormalPrior
from .statfn import Branch, find_root, lambert_w, norm_quantile


@dataclass(frozen=True)
class BfScepticalSolution:
    """Both relative prior variances g at which BF01 equals the cut-off."""

    g_small: float
    g_large: float
    gamma: float
    # 95% prior credible interval of the small-g (sceptical) prior, OR scale;
    # only available when the estimate's standard error is known.
    prior_interval_or: tuple[float, float] | None = None


@dataclass(frozen=True)
class BfAdvocacySolution:
    """Both advocacy priors (fixed CV) at which BF01 equals the cut-off."""

    m_small: float
    tau_small: float
    m_large: float
    tau_large: float
    gamma: float
    cv: float

    @property
    def recommended_m(self) -> float:
        """The root closer to zero: the more conservative choice."""
        return self.m_small


def bf01_sceptical(z: float, g: float) -> float:
    """BF01 for the point null against a mean-zero normal prior with
    relative variance g."""
    if g <= 0.0:
        raise ValueError(f"relative prior variance must be positive, got {g!r}")
    return math.sqrt(1.0 + g) * math.exp(-(g / (1.0 + g)) * z ** 2 / 2.0)


def min_bf_local(z: float) -> float:
    """Minimum BF01 over all mean-zero normal alternatives."""
    if not math.isfinite(z):
        raise ValueError(f"z must be finite, got {z!r}")
    if abs(z) <= 1.0:
        return 1.0
    return abs(z) * math.exp(-z ** 2 / 2.0) * math.sqrt(math.e)


def min_bf_els(z: float) -> float:
    """Minimum BF01 over all possible priors (simple alternative at the MLE)."""
    if not math.isfinite(z):
        raise ValueError(f"z must be finite, got {z!r}")
    return math.exp(-z ** 2 / 2.0)


def sceptical_g_for_gamma(z: float, gamma: float,
                          se: float | None = None) -> BfScepticalSolution:
    """Both relative prior variances making the finding just non-compelling
    at the cut-off gamma.

    The small solution (secondary Lambert branch) is the sceptical prior;
    the large one (principal branch) represents ignorance. A prior interval
    on the OR scale is attached when the standard error is supplied.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must be in (0,1), got {gamma!r}")
    floor = min_bf_local(z)
    if floor > gamma:
        raise NonexistenceError(
            f"no sceptical prior reaches BF01 = {gamma:.4g}: the attainable "
            f"minimum is {floor:.4g}")
    arg = -(z ** 2 / gamma ** 2) * math.exp(-z ** 2)
    q_small = lambert_w(arg, Branch.SECONDARY)
    q_large = lambert_w(arg, Branch.PRINCIPAL)
    g_small = -z ** 2 / q_small - 1.0
    g_large = -z ** 2 / q_large - 1.0
    # Branch-point roundoff can leave g marginally below the tangency value.
    g_small = max(g_small, 1e-15)
    g_large = max(g_large, g_small)
    interval = None
    if se is not None:
        tau = math.sqrt(g_small) * se
        half = norm_quantile(1.0 - (1.0 - DEFAULT_LEVEL) / 2.0) * tau
        interval = (math.exp(-half), math.exp(half))
    return BfScepticalSolution(g_small=g_small, g_large=g_large, gamma=gamma,
                               prior_interval_or=interval)


def bf01_normal_prior(estimate: EffectEstimate, prior: NormalPrior) -> float:
    """BF01 for the point null against a general normal prior."""
    if not (prior.variance > 0.0 and math.isfinite(prior.variance)):
        raise ValueError("prior variance must be positive and finite")
    s2 = estimate.se ** 2
    t2 = prior.variance
    quad = (estimate.theta_hat ** 2 / s2
            - (estimate.theta_hat - prior.mean) ** 2 / (s2 + t2))
    return math.sqrt(1.0 + t2 / s2) * math.exp(-0.5 * quad)


def z_gamma(gamma: float) -> float:
    """Evidential weight z(gamma) of data whose all-priors minimum BF01
    equals gamma."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must be in (0,1], got {gamma!r}")
    return math.sqrt(-2.0 * math.log(gamma))


def _advocacy_bf(estimate: EffectEstimate, m: float, cv: float) -> float:
    mu = m * estimate.theta_hat
    tau = cv * abs(mu)
    s2 = estimate.se ** 2
    t2 = tau ** 2
    quad = (estimate.theta_hat ** 2 / s2
            - (estimate.theta_hat - mu) ** 2 / (s2 + t2))
    return math.sqrt(1.0 + t2 / s2) * math.exp(-0.5 * quad)


def advocacy_for_gamma(estimate: EffectEstimate, gamma: float) -> BfAdvocacySolution:
    """Both advocacy priors (relative mean m, sd = |mu|/z(gamma)) at which
    BF01 equals the cut-off gamma.

    The family fixes the coefficient of variation to 1/z(gamma), leaving m
    as the only free parameter; BF01(m) is bracketed around its minimum and
    both roots are returned, ordered by |m|.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must be in (0,1), got {gamma!r}")
    if estimate.theta_hat == 0.0:
        raise NonexistenceError("advocacy prior undefined for a zero point estimate")
    cv = 1.0 / z_gamma(gamma)

    # locate the family's minimum on a log grid over m > 0
    grid = [10.0 ** (k / 40.0) for k in range(-240, 161)]  # 1e-6 .. 1e4
    values = [_advocacy_bf(estimate, m, cv) for m in grid]
    i_min = min(range(len(grid)), key=values.__getitem__)
    if values[i_min] > gamma:
        raise NonexistenceError(
            f"no advocacy prior reaches BF01 = {gamma:.4g}: the family's "
            f"minimum is {values[i_min]:.4g} (at m = {grid[i_min]:.4g})")

    def h(m: float) -> float:
        return _advocacy_bf(estimate, m, cv) - gamma

    # left root: BF -> 1 as m -> 0+, so bracket below the minimum
    lo = grid[0]
    while h(lo) < 0.0:
        lo /= 10.0
    m_small = find_root(h, lo, grid[i_min])
    # right root: BF -> infinity as m -> infinity
    hi = grid[i_min]
    while h(hi) < 0.0:
        hi *= 2.0
    m_large = find_root(h, grid[i_min], hi)

    theta = abs(estimate.theta_hat)
    return BfAdvocacySolution(
        m_small=m_small, tau_small=cv * m_small * theta,
        m_large=m_large, tau_large=cv * m_large * theta,
        gamma=gamma, cv=cv)


def advocacy_prior_interval_or(estimate: EffectEstimate, m: float,
                               gamma: float) -> tuple[float, float]:
    """Prior credible interval on the OR scale for an advocacy solution,
    taken at the level whose critical value is z(gamma); one endpoint is
    exactly 1 by construction."""
    mu = m * estimate.theta_hat
    half = z_gamma(gamma) * (abs(mu) / z_gamma(gamma))
    return (math.exp(mu - half), math.exp(mu + half))


def bf12_sceptical_vs_optimistic(z: float, g: float) -> float:
    """BF contrasting the sceptical prior with relative variance g to the
    optimistic prior centred at the estimate with its own variance."""
    if g <= 0.0:
        raise ValueError(f"relative prior variance must be positive, got {g!r}")
    return math.sqrt(2.0 / (1.0 + g)) * math.exp(-z ** 2 / (2.0 * (1.0 + g)))


def bf_intrinsic(estimate: EffectEstimate) -> float:
    """Smallest cut-off gamma at which the finding is intrinsically credible
    under the sceptical-vs-optimistic contrast."""
    z = estimate.z
    floor = min_bf_local(z)
    if floor >= 1.0:
        raise NonexistenceError(
            "no cut-off admits a sceptical prior: |z| does not exceed 1")

    def h(gamma: float) -> float:
        sol = sceptical_g_for_gamma(z, gamma)
        return bf12_sceptical_vs_optimistic(z, sol.g_small) - gamma

    lo = floor * (1.0 + 1e-9)
    hi = 1.0 - 1e-9
    # scan for the first sign change so the smallest root is returned
    n_grid = 400
    log_lo, log_hi = math.log(lo), math.log(hi)
    prev_gamma, prev_h = lo, h(lo)
    for k in range(1, n_grid + 1):
        gamma = math.exp(log_lo + (log_hi - log_lo) * k / n_grid)
        cur_h = h(gamma)
        if prev_h == 0.0:
            return prev_gamma
        if prev_h * cur_h < 0.0:
            return find_root(h, prev_gamma, gamma)
        prev_gamma, prev_h = gamma, cur_h
    raise NonexistenceError("no admissible cut-off for intrinsic credibility")
