"""Covert throughput planning: power budget, two-layer rates, and oracles.

All quantities are leading-order evaluations of the covert coding
scheme's guarantees; the little-o corrections are attached as order
strings rather than silently estimated.  The exact classical evaluators
(relent_exact, willie_tv_mc) exploit the fact that every per-slot state
of the sparse layer is diagonal in the photon-number basis.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, erfcinv
from scipy.stats import binom

from . import fock
from .channel import MacParams
from .errors import ConfigError, DomainError, InfeasibleError
from .gaussian import g_entropy

__all__ = [
    "q_func",
    "q_inv",
    "covert_budget",
    "Layer1Rates",
    "Layer2Rates",
    "CovertPlan",
    "layer1_throughput",
    "layer2_throughput",
    "build_plan",
    "ScalingLimits",
    "scaling_limits",
    "scaling_plan",
    "RelEntStats",
    "relent_leading",
    "relent_exact",
    "willie_tv_leading",
    "McEstimate",
    "willie_tv_mc",
    "chernoff_truncation",
    "binomial_tail_exact",
    "second_order_rate",
]


def q_func(z: float) -> float:
    """Standard normal upper-tail probability Q(z)."""
    return 0.5 * erfc(z / math.sqrt(2.0))


def q_inv(p: float) -> float:
    """Inverse of the Q function, to |Q(q_inv(p)) - p| <= 1e-12.

    Bracketed root finding on Q(z) - p around an erfcinv seed, so the
    round trip is pinned by the erfc evaluation itself.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"q_inv requires p in (0, 1), got {p}")
    seed = math.sqrt(2.0) * erfcinv(2.0 * p)
    lo, hi = seed - 0.5, seed + 0.5
    f_lo, f_hi = q_func(lo) - p, q_func(hi) - p
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo < 0.0 or f_hi > 0.0:  # seed off target; widen conservatively
        lo, hi = -40.0, 40.0
    return float(brentq(lambda z: q_func(z) - p, lo, hi, xtol=1e-14, rtol=8.9e-16))


def covert_budget(n: int, delta: float, p: MacParams) -> float:
    """Largest admissible weighted power (alpha tau + beta (1-tau)) s at
    block length n and detection budget delta."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"delta must lie in [0, 1), got {delta}")
    if delta == 0.0:
        return 0.0
    coeff = 2.0 * math.sqrt(p.kappa * p.n_b * (1.0 + p.kappa * p.n_b)) / (1.0 - p.kappa)
    return coeff * q_inv((1.0 - delta) / 2.0) / math.sqrt(n)


def weighted_power(alpha: float, beta: float, s: float, p: MacParams) -> float:
    """The quantity the warden's test responds to: (alpha tau + beta (1-tau)) s."""
    return (alpha * p.tau + beta * (1.0 - p.tau)) * s


def _check_budget(n, alpha, beta, s, p, delta):
    power = weighted_power(alpha, beta, s, p)
    budget = covert_budget(n, delta, p)
    if power > budget * (1.0 + 1e-12):
        raise InfeasibleError(
            f"covert power budget violated: (alpha*tau + beta*(1-tau))*s = {power:.6g} "
            f"> budget {budget:.6g} at n={n}, delta={delta}",
            binding="covert-budget",
        )
    return power, budget


@dataclass(frozen=True)
class Layer1Rates:
    """Leading-order sparse-layer rates, message and key-stuffed, in nats."""

    log_m_x1: float
    log_m_y1: float
    log_m_xy1: float
    log_m_x1_keys: float
    log_m_y1_keys: float
    log_m_keys_total: float

    ORDERS = {
        "log_m_x1": "o(n*alpha*s^2)",
        "log_m_y1": "o(n*beta*s^2)",
        "log_m_xy1": "o(n*(alpha+beta)*s^2)",
        "log_m_x1_keys": "o(n*alpha*s^2)",
        "log_m_y1_keys": "o(n*beta*s^2)",
        "log_m_keys_total": "o(n*(alpha+beta)*s^2)",
    }


@dataclass(frozen=True)
class Layer2Rates:
    """Leading-order modulation-layer rates plus the entanglement ledger."""

    log_m_x2: float
    log_m_y2: float
    log_m_xy2: float
    l_x: int
    l_y: int
    ent_nats_x: float
    ent_nats_y: float

    ORDERS = {
        "log_m_x2": "O(n*alpha*s)",
        "log_m_y2": "O(n*beta*s)",
        "log_m_xy2": "O(n*(alpha+beta)*s)",
    }


def layer1_throughput(n: int, alpha: float, beta: float, s: float, p: MacParams, delta: float) -> Layer1Rates:
    """Sparse-layer message and key budgets at leading order.

    Message rates carry the receiver-side coefficient
    kappa^2 s^2 / (2 (1-kappa) n_b (1 + (1-kappa) n_b)); the key-stuffed
    ceilings swap kappa <-> 1-kappa.
    """
    _check_budget(n, alpha, beta, s, p, delta)
    bob_den = 2.0 * (1.0 - p.kappa) * p.n_b * (1.0 + (1.0 - p.kappa) * p.n_b)
    willie_den = 2.0 * p.kappa * p.n_b * (1.0 + p.kappa * p.n_b)
    x_weight = n * alpha * p.tau**2 * s**2
    y_weight = n * beta * (1.0 - p.tau) ** 2 * s**2
    return Layer1Rates(
        log_m_x1=x_weight * p.kappa**2 / bob_den,
        log_m_y1=y_weight * p.kappa**2 / bob_den,
        log_m_xy1=(x_weight + y_weight) * p.kappa**2 / bob_den,
        log_m_x1_keys=x_weight * (1.0 - p.kappa) ** 2 / willie_den,
        log_m_y1_keys=y_weight * (1.0 - p.kappa) ** 2 / willie_den,
        log_m_keys_total=(x_weight + y_weight) * (1.0 - p.kappa) ** 2 / willie_den,
    )


def layer2_throughput(
    n: int, alpha: float, beta: float, s: float, p: MacParams, mu_bar: float, delta: float
) -> Layer2Rates:
    """Modulation-layer rates (1-mu_bar) scaled, plus TMSV pair counts."""
    if not 0.0 < mu_bar < 1.0:
        raise DomainError(f"mu_bar must lie in (0, 1), got {mu_bar}")
    _check_budget(n, alpha, beta, s, p, delta)
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1) for the -s log s expansion, got {s}")
    scale = (1.0 - mu_bar) * n * p.kappa * (-s * math.log(s)) / (1.0 + p.n_t)
    l_x = math.ceil(n * alpha * (1.0 - mu_bar))
    l_y = math.ceil(n * beta * (1.0 - mu_bar))
    ent_per_pair = g_entropy(s)
    return Layer2Rates(
        log_m_x2=scale * p.tau * alpha,
        log_m_y2=scale * (1.0 - p.tau) * beta,
        log_m_xy2=scale * (p.tau * alpha + (1.0 - p.tau) * beta),
        l_x=l_x,
        l_y=l_y,
        ent_nats_x=l_x * ent_per_pair,
        ent_nats_y=l_y * ent_per_pair,
    )


@dataclass(frozen=True)
class CovertPlan:
    """A fully resolved covert transmission plan."""

    n: int
    alpha: float
    beta: float
    s: float
    mu_bar: float
    delta: float
    epsilon: float
    power: float
    budget: float
    layer1: Layer1Rates
    layer2: Layer2Rates

    def rates(self):
        """The nine rate outputs as (name, value) pairs, in nats."""
        l1, l2 = self.layer1, self.layer2
        return [
            ("log_m_x1", l1.log_m_x1),
            ("log_m_y1", l1.log_m_y1),
            ("log_m_xy1", l1.log_m_xy1),
            ("log_m_x1_keys", l1.log_m_x1_keys),
            ("log_m_y1_keys", l1.log_m_y1_keys),
            ("log_m_keys_total", l1.log_m_keys_total),
            ("log_m_x2", l2.log_m_x2),
            ("log_m_y2", l2.log_m_y2),
            ("log_m_xy2", l2.log_m_xy2),
        ]


def build_plan(
    n: int,
    alpha: float,
    beta: float,
    s: float,
    p: MacParams,
    delta: float,
    epsilon: float = 0.05,
    mu_bar: float = 0.1,
) -> CovertPlan:
    """Resolve a full plan; raises InfeasibleError when the budget fails."""
    for name, value in (("alpha", alpha), ("beta", beta), ("s", s), ("mu_bar", mu_bar)):
        if not 0.0 < value < 1.0:
            raise DomainError(f"{name} must lie in (0, 1), got {value}")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    power, budget = _check_budget(n, alpha, beta, s, p, delta)
    return CovertPlan(
        n=n,
        alpha=alpha,
        beta=beta,
        s=s,
        mu_bar=mu_bar,
        delta=delta,
        epsilon=epsilon,
        power=power,
        budget=budget,
        layer1=layer1_throughput(n, alpha, beta, s, p, delta),
        layer2=layer2_throughput(n, alpha, beta, s, p, mu_bar, delta),
    )


def scaling_plan(
    n: int, gamma: float, alpha: float, beta: float, s: float, p: MacParams, delta: float, mu_bar=None
) -> CovertPlan:
    """Plan at the equal-sparsity-order schedule alpha_n = alpha n^(gamma-1/2),
    beta_n likewise, s_n = s n^(-gamma).

    ``mu_bar`` defaults to 1/log n, which vanishes while keeping the
    light-codeword probability negligible (mu_bar^2 n alpha_n -> infinity).
    """
    if not 0.0 < gamma < 0.5:
        raise DomainError(f"gamma must lie in (0, 1/2), got {gamma}")
    alpha_n = alpha * n ** (gamma - 0.5)
    beta_n = beta * n ** (gamma - 0.5)
    s_n = s * n ** (-gamma)
    if mu_bar is None:
        mu_bar = 1.0 / math.log(n)
    return build_plan(n, alpha_n, beta_n, s_n, p, delta=delta, mu_bar=mu_bar)


@dataclass(frozen=True)
class ScalingLimits:
    """Limit constants of the equal-sparsity-order scaling regime."""

    layer1_x: float
    layer1_y: float
    layer2_x: float
    layer2_y: float
    ent_nats_x: float
    ent_nats_y: float
    implied_delta: float


def scaling_limits(
    gamma: float, alpha: float, beta: float, s: float, p: MacParams, delta=None
) -> ScalingLimits:
    """The five limit constants of the n^(gamma - 1/2) sparsity schedule.

    Layer 1 rates are normalized by n^(1/2 - gamma); Layer 2 rates and
    entangled-nats consumption by sqrt(n) log n.  When ``delta`` is
    given, (alpha tau + beta (1-tau)) s must equal the covert budget
    constant for that delta; otherwise the implied delta is derived from
    exact equality.
    """
    if not 0.0 < gamma < 0.5:
        raise DomainError(f"gamma must lie in (0, 1/2), got {gamma}")
    power = weighted_power(alpha, beta, s, p)
    coeff = 2.0 * math.sqrt(p.kappa * p.n_b * (1.0 + p.kappa * p.n_b)) / (1.0 - p.kappa)
    if delta is not None:
        target = coeff * q_inv((1.0 - delta) / 2.0)
        if not math.isclose(power, target, rel_tol=1e-9, abs_tol=0.0):
            raise InfeasibleError(
                f"(alpha*tau + beta*(1-tau))*s = {power:.9g} does not match the budget "
                f"constant {target:.9g} for delta={delta}",
                binding="budget-constant",
            )
        implied = delta
    else:
        implied = 1.0 - 2.0 * q_func(power / coeff)
        if not 0.0 < implied < 1.0:
            raise InfeasibleError(
                f"power {power:.6g} implies no detection budget in (0, 1)", binding="budget-constant"
            )
    bob_den = 2.0 * (1.0 - p.kappa) * p.n_b * (1.0 + (1.0 - p.kappa) * p.n_b)
    return ScalingLimits(
        layer1_x=alpha * p.tau**2 * p.kappa**2 * s**2 / bob_den,
        layer1_y=beta * (1.0 - p.tau) ** 2 * p.kappa**2 * s**2 / bob_den,
        layer2_x=gamma * p.kappa * p.tau * alpha * s / (1.0 + p.n_t),
        layer2_y=gamma * p.kappa * (1.0 - p.tau) * beta * s / (1.0 + p.n_t),
        ent_nats_x=gamma * alpha * s,
        ent_nats_y=gamma * beta * s,
        implied_delta=float(implied),
    )


@dataclass(frozen=True)
class RelEntStats:
    """Relative entropy, its variance, and the declared remainder order."""

    d: float
    v: float
    r_order: str


_MARGINALS = ("joint", "x", "y")


def relent_leading(p: MacParams, alpha: float, beta: float, s: float, receiver: str, marginal: str) -> RelEntStats:
    """Leading-order D and V of the sparse layer's per-slot divergences.

    V equals 2 D at this order.  Valid as an approximation only for
    small alpha, beta, s.
    """
    if marginal not in _MARGINALS:
        raise DomainError(f"marginal must be one of {_MARGINALS}, got {marginal!r}")
    if receiver == "bob":
        den = 2.0 * (1.0 - p.kappa) * p.n_b * (1.0 + (1.0 - p.kappa) * p.n_b)
        coupling = p.kappa**2
    elif receiver == "willie":
        den = 2.0 * p.kappa * p.n_b * (1.0 + p.kappa * p.n_b)
        coupling = (1.0 - p.kappa) ** 2
    else:
        raise DomainError(f"receiver must be 'bob' or 'willie', got {receiver!r}")
    if marginal == "joint":
        weight, order = alpha * p.tau**2 + beta * (1.0 - p.tau) ** 2, "O((alpha+beta)*s^4)"
    elif marginal == "x":
        weight, order = alpha * p.tau**2, "O(alpha*s^4)"
    else:
        weight, order = beta * (1.0 - p.tau) ** 2, "O(beta*s^4)"
    d = weight * coupling * s**2 / den
    return RelEntStats(d=d, v=2.0 * d, r_order=order)


def relent_exact(
    p: MacParams, alpha: float, beta: float, s: float, receiver: str, marginal: str, cutoff=None
) -> RelEntStats:
    """Exact classical D and V over the per-slot photon distributions.

    The per-slot states are simultaneously Fock-diagonal, so the quantum
    divergences reduce to classical ones over the four weighted thermal
    laws.
    """
    if marginal not in _MARGINALS:
        raise DomainError(f"marginal must be one of {_MARGINALS}, got {marginal!r}")
    entries = fock.layer1_mode_distributions(p, alpha, beta, s, receiver, cutoff=cutoff)
    laws = {key: dist.probs for key, _, dist in entries}
    weights = {key: w for key, w, _ in entries}
    p_x = {0: 1.0 - alpha, 1: alpha}
    p_y = {0: 1.0 - beta, 1: beta}

    if marginal == "joint":
        ref = {key: sum(weights[k2] * laws[k2] for k2 in weights) for key in weights}
    elif marginal == "x":
        by_y = {y: p_x[0] * laws[0, y] + p_x[1] * laws[1, y] for y in (0, 1)}
        ref = {(x, y): by_y[y] for (x, y) in weights}
    else:
        by_x = {x: p_y[0] * laws[x, 0] + p_y[1] * laws[x, 1] for x in (0, 1)}
        ref = {(x, y): by_x[x] for (x, y) in weights}

    d = 0.0
    for key, w in weights.items():
        if w == 0.0:
            continue
        llr = np.log(laws[key]) - np.log(ref[key])
        d += w * float(np.sum(laws[key] * llr))
    v = 0.0
    for key, w in weights.items():
        if w == 0.0:
            continue
        llr = np.log(laws[key]) - np.log(ref[key])
        v += w * float(np.sum(laws[key] * (llr - d) ** 2))
    return RelEntStats(d=d, v=v, r_order="exact")


def willie_tv_leading(n: int, alpha: float, beta: float, s: float, p: MacParams) -> float:
    """Leading term of the warden's detection advantage (trace distance)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    arg = (
        math.sqrt(n)
        * (alpha * p.tau + beta * (1.0 - p.tau))
        * (1.0 - p.kappa)
        * s
        / (2.0 * math.sqrt(p.kappa * p.n_b * (1.0 + p.kappa * p.n_b)))
    )
    return 1.0 - 2.0 * q_func(arg)


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate with its standard error."""

    value: float
    stderr: float
    samples: int


_MC_CHUNK = 1 << 16


def willie_tv_mc(
    n: int,
    alpha: float,
    beta: float,
    s: float,
    p: MacParams,
    samples: int,
    seed=None,
    workers: int = 1,
) -> McEstimate:
    """Monte Carlo estimate of the warden's n-slot total variation.

    Uses TV = P(A) - Q(A) on the likelihood-ratio event A = {LLR > 0}.
    Slots are i.i.d., so each n-slot sample reduces to a multinomial
    count vector over photon numbers; sampling counts is exactly
    equivalent to sampling slots.  Chunk seeds are spawned from ``seed``
    independently of the worker count, and aggregation is a plain sum,
    so results are reproducible for any ``workers``.
    """
    if seed is None:
        raise ConfigError("willie_tv_mc requires an explicit seed for reproducibility")
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    # cutoff sized so the chance of any draw beyond it over all n*samples
    # slots is negligible
    max_mean = p.kappa * p.n_b + (1.0 - p.kappa) * s
    cutoff = max(fock.required_cutoff(max_mean, 1e-18) + 16, 32)
    entries = fock.layer1_mode_distributions(p, alpha, beta, s, "willie", cutoff=cutoff)
    q1 = sum(w * dist.probs for _, w, dist in entries)
    q0 = fock.photon_distribution_thermal(p.kappa * p.n_b, cutoff).probs
    q1 = q1 / q1.sum()
    q0 = q0 / q0.sum()
    llr = np.log(q1) - np.log(q0)

    chunk_sizes = [min(_MC_CHUNK, samples - start) for start in range(0, samples, _MC_CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(chunk_sizes))

    def run_chunk(args):
        chunk_seed, size = args
        rng = np.random.default_rng(chunk_seed)
        hits_p = int(np.count_nonzero(rng.multinomial(n, q1, size=size) @ llr > 0.0))
        hits_q = int(np.count_nonzero(rng.multinomial(n, q0, size=size) @ llr > 0.0))
        return hits_p, hits_q

    jobs = list(zip(seeds, chunk_sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_chunk, jobs))
    else:
        results = [run_chunk(job) for job in jobs]
    hits_p = sum(r[0] for r in results)
    hits_q = sum(r[1] for r in results)
    p_hat = hits_p / samples
    q_hat = hits_q / samples
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / samples + q_hat * (1.0 - q_hat) / samples)
    return McEstimate(value=p_hat - q_hat, stderr=stderr, samples=samples)


def chernoff_truncation(n: int, alpha: float, beta: float, mu_bar: float) -> float:
    """Chernoff bound on the probability either sender's codeword is atypically light."""
    if not 0.0 < mu_bar < 1.0:
        raise DomainError(f"mu_bar must lie in (0, 1), got {mu_bar}")
    return 2.0 * math.exp(-0.5 * mu_bar**2 * n * alpha) + 2.0 * math.exp(-0.5 * mu_bar**2 * n * beta)


def binomial_tail_exact(n: int, prob: float, mu_bar: float) -> float:
    """Exact lower binomial tail P(Bin(n, prob) < (1 - mu_bar) n prob)."""
    threshold = (1.0 - mu_bar) * n * prob
    return float(binom.cdf(math.ceil(threshold) - 1, n, prob))


def second_order_rate(n: int, stats: RelEntStats, eps: float, direction: str = "lower") -> float:
    """Gaussian-approximation rate n D -/+ sqrt(n V) Q^{-1}(eps^2).

    ``direction="lower"`` is the achievability sign (minus);
    ``direction="upper"`` the resolvability ceiling (plus).
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if direction not in ("lower", "upper"):
        raise DomainError(f"direction must be 'lower' or 'upper', got {direction!r}")
    sign = -1.0 if direction == "lower" else 1.0
    return n * stats.d + sign * math.sqrt(n * stats.v) * q_inv(eps**2)
