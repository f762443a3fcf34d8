"""
Closed-form and quadrature-based performance metrics.

All expressions assume the LoS path-loss exponent alpha = 2 and a single
representative antenna. Probabilities are clamped to [0, 1]; a clamp is
reported on the returned :class:`BlockageResult` rather than kept in any
global counter, so every function here is pure.
"""

from dataclasses import dataclass
import enum
import logging
import math

import numpy as np

from .errors import ConfigError, InfeasibleError, TruncatedToZero
from .model import ChannelCondition, SicMode, derive
from .numerics import (chebyshev_nodes, exp_integral_ei, exp_integral_ei_scaled,
                       gc_integrate)

__all__ = [
    "Branch",
    "BlockageResult",
    "DEFAULT_QUAD_ORDER",
    "NLOS_NODE_MAPPING",
    "RateMethod",
    "RateResult",
    "asym_blockage_f_nlos",
    "asym_blockage_n_nisic",
    "asym_rate_f_los",
    "asym_rate_f_nlos",
    "blockage_f_los",
    "blockage_f_nlos",
    "blockage_n_isic",
    "blockage_n_nisic",
    "ccdf_sinr_n_nisic",
    "default_rule",
    "diversity_gain_numeric",
    "ergodic_rate_f_los",
    "ergodic_rate_f_nlos",
    "ergodic_rate_n_isic",
    "ergodic_rate_n_nisic",
    "ergodic_rate_n_nisic_printed",
    "rate_upper_n_isic_asym",
    "slope_numeric",
    "throughput_delay_constrained",
    "throughput_latency_tolerant",
]

logger = logging.getLogger(__name__)

DEFAULT_QUAD_ORDER = 1000

# Gauss-Chebyshev abscissa map used for the far-node NLoS rate: x = x_max (t_k + 1) / 2.
NLOS_NODE_MAPPING = "t_k+1"

_LN2 = math.log(2.0)


def default_rule():
    return chebyshev_nodes(DEFAULT_QUAD_ORDER)


class Branch(enum.Enum):
    """Arm of a piecewise blockage expression, keyed on the distance budget C."""

    BELOW_D2 = "below_d2"   # C <= d^2: always blocked
    MID = "mid"             # d^2 < C < R^2 + d^2
    ABOVE_R2 = "above_r2"   # C >= R^2 + d^2


@dataclass(frozen=True)
class BlockageResult:
    probability: float
    branch: Branch | None = None
    clamped: bool = False

    def __float__(self):
        return self.probability


class RateMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class RateResult:
    rate: float
    method: RateMethod
    order: int | None = None

    def __float__(self):
        return self.rate


def _require_alpha2(cfg):
    if cfg.alpha != 2:
        raise ConfigError("closed-form metrics require alpha = 2 (got %r); use the simulator" % cfg.alpha)


def _require_cf(p, cfg):
    if p.c_f is None:
        raise InfeasibleError(
            "far node cannot decode: requires a_f > gamma_thf * a_n (a_f=%r, gamma_thf=%r, a_n=%r)"
            % (cfg.a_f, p.gamma_thf, cfg.a_n))
    return p.c_f


def _branch(c, d2, R2):
    # Outer arms are closed: equality at a knee selects the outer branch.
    if c <= d2:
        return Branch.BELOW_D2
    if c >= R2 + d2:
        return Branch.ABOVE_R2
    return Branch.MID


def _clamped(value, what):
    if 0.0 <= value <= 1.0:
        return value, False
    logger.debug("%s evaluated to %.3e, clamped to [0, 1]", what, value)
    return min(max(value, 0.0), 1.0), True


def _linear_blockage(c, d2, R2, what):
    branch = _branch(c, d2, R2)
    if branch is Branch.BELOW_D2:
        return BlockageResult(1.0, branch)
    if branch is Branch.ABOVE_R2:
        return BlockageResult(0.0, branch)
    value, clamped = _clamped(1.0 - (c - d2) / R2, what)
    return BlockageResult(value, branch, clamped)


# -- near node -----------------------------------------------------------------

def _nisic_blockage_values(gamma, rho, eta, cfg):
    """Near-node NISIC blockage for an array of SINR thresholds ``gamma``.

    Averaging the uniform-disk CDF over the exponential residual power gives
    three arms. With a = 1/(Omega_I rho), xi1 = eta a_n / (Omega_I gamma),
    b1 = xi1/d^2 and b2 = xi1/(R_n^2 + d^2), every exp(a) Ei(-b) product is
    evaluated as exp(a - b) * [exp(b) Ei(-b)] so low SNR cannot overflow.
    """
    gamma = np.asarray(gamma, dtype=float)
    d2 = cfg.d_m ** 2
    R2 = cfg.R_n_m ** 2
    xi4 = d2 / R2
    a = 1.0 / (cfg.omega_I * rho)
    c = eta * rho * cfg.a_n / gamma
    xi1 = eta * cfg.a_n / (cfg.omega_I * gamma)

    out = np.ones_like(c)
    mid = (c > d2) & (c < R2 + d2)
    above = c >= R2 + d2
    if mid.any():
        x1 = xi1[mid]
        b1 = x1 / d2
        e1 = np.exp(a - b1)
        ei_term = exp_integral_ei_scaled(-b1) * e1 - exp_integral_ei_scaled(-a)
        out[mid] = 1.0 + xi4 - xi4 * e1 - x1 / R2 * ei_term
    if above.any():
        x1 = xi1[above]
        b1 = x1 / d2
        b2 = x1 / (R2 + d2)
        e1 = np.exp(a - b1)
        e2 = np.exp(a - b2)
        ei_term = exp_integral_ei_scaled(-b1) * e1 - exp_integral_ei_scaled(-b2) * e2
        out[above] = (1.0 + xi4) * e2 - xi4 * e1 - x1 / R2 * ei_term
    return out


def blockage_n_nisic(p, cfg):
    """Near-node blockage under non-ideal SIC over LoS links."""
    _require_alpha2(cfg)
    d2 = cfg.d_m ** 2
    branch = _branch(p.c_n, d2, cfg.R_n_m ** 2)
    value = float(_nisic_blockage_values(np.array([p.gamma_thn]), p.rho, p.eta, cfg)[0])
    value, clamped = _clamped(value, "NISIC near-node blockage")
    return BlockageResult(value, branch, clamped)


def blockage_n_isic(p, cfg):
    """Near-node blockage under ideal SIC: 1, 1 - (C_n - d^2)/R_n^2, or 0."""
    _require_alpha2(cfg)
    return _linear_blockage(p.c_n, cfg.d_m ** 2, cfg.R_n_m ** 2, "ISIC near-node blockage")


def asym_blockage_n_nisic(p, cfg):
    """High-SNR error floor of the NISIC near-node blockage (independent of rho)."""
    _require_alpha2(cfg)
    d2 = cfg.d_m ** 2
    R2 = cfg.R_n_m ** 2
    xi4 = d2 / R2
    xi1 = p.eta * cfg.a_n / (cfg.omega_I * p.gamma_thn)
    b1 = xi1 / d2
    b2 = xi1 / (R2 + d2)
    value = ((1.0 + xi4) * math.exp(-b2) - xi4 * math.exp(-b1)
             - xi1 / R2 * (exp_integral_ei(-b1) - exp_integral_ei(-b2)))
    return _clamped(value, "NISIC error floor")[0]


def ccdf_sinr_n_nisic(x, p, cfg):
    """P(gamma_n > x) under NISIC: the blockage formula with the threshold set to x."""
    _require_alpha2(cfg)
    x = np.asarray(x, dtype=float)
    out = 1.0 - _nisic_blockage_values(np.atleast_1d(x), p.rho, p.eta, cfg)
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def ergodic_rate_n_nisic(p, cfg, rule=None):
    """Near-node NISIC ergodic rate by Gauss-Chebyshev quadrature.

    Integrates P(gamma_n > x) / (1 + x) over the two arms where it is not
    identically zero: [0, rho eta a_n/(R_n^2 + d^2)] (outer arm) and
    [rho eta a_n/(R_n^2 + d^2), rho eta a_n/d^2] (middle arm).
    """
    _require_alpha2(cfg)
    rule = rule or default_rule()
    s = p.rho * p.eta * cfg.a_n
    x1 = s / (cfg.R_n_m ** 2 + cfg.d_m ** 2)
    x2 = s / cfg.d_m ** 2

    def integrand(x):
        return ccdf_sinr_n_nisic(x, p, cfg) / (1.0 + x)

    total = gc_integrate(integrand, 0.0, x1, rule) + gc_integrate(integrand, x1, x2, rule)
    return RateResult(max(total / _LN2, 0.0), RateMethod.QUADRATURE, rule.order)


def ergodic_rate_n_nisic_printed(p, cfg, rule=None):
    """Literal transcription of the published double-sum for the NISIC rate.

    Kept as an independent cross-check of :func:`ergodic_rate_n_nisic`; uses
    unscaled exponentials, so it overflows once 1/(Omega_I rho) exceeds ~700.
    """
    _require_alpha2(cfg)
    rule = rule or default_rule()
    t = rule.nodes
    sq = rule.root_weights
    rho, eta, an, Om = p.rho, p.eta, cfg.a_n, cfg.omega_I
    d2 = cfg.d_m ** 2
    R2 = cfg.R_n_m ** 2
    Ei = exp_integral_ei
    ea = math.exp(1.0 / (Om * rho))
    z3 = rho * eta * an * (t + 1.0) / (2.0 * (R2 + d2))
    z4 = rho * eta * an * R2 * (t + 1.0) / (2.0 * d2 * (R2 + d2)) + rho * eta * an / (R2 + d2)
    z1 = Ei(-eta * an / (z3 * Om * d2)) - Ei(-eta * an / (z3 * Om * (R2 + d2)))
    z2 = Ei(-eta * an / (z4 * Om * d2)) - Ei(-1.0 / (Om * rho))
    first = (rho * eta * an * sq / (2.0 * (R2 + d2) * (1.0 + z3))
             * (1.0 - ea * ((1.0 + d2 / R2) * np.exp(-eta * an / (z3 * Om * (R2 + d2)))
                            - d2 / R2 * np.exp(-eta * an / (z3 * Om * d2))
                            - eta * an * z1 / (z3 * Om * R2))))
    second = (rho * eta * an * R2 * sq / (2.0 * d2 * (R2 + d2) * (1.0 + z4))
              * (-d2 / R2 * (1.0 - np.exp(-eta * an / (z4 * Om * d2) + 1.0 / (Om * rho)))
                 + eta * an * z2 / (z4 * Om * R2) * ea))
    return RateResult(float(rule.weight / _LN2 * np.sum(first + second)),
                      RateMethod.QUADRATURE, rule.order)


def ergodic_rate_n_isic(p, cfg):
    """Near-node ergodic rate under ideal SIC (exact)."""
    _require_alpha2(cfg)
    s = p.eta * p.rho * cfg.a_n
    d2 = cfg.d_m ** 2
    R2 = cfg.R_n_m ** 2
    nats = (s / R2 * math.log((R2 + d2) / d2)
            - (s + d2) / R2 * math.log1p(s / d2)
            + ((s + d2) / R2 + 1.0) * math.log1p(s / (R2 + d2)))
    return RateResult(max(nats / _LN2, 0.0), RateMethod.CLOSED_FORM)


def rate_upper_n_isic_asym(p, cfg):
    """Jensen upper bound log2(1 + E[gamma_n]) on the ISIC near-node rate.

    E[gamma_n] = (eta rho a_n / R_n^2) ln((R_n^2 + d^2)/d^2); base 2 keeps the
    high-SNR slope at one bit per doubling of rho.
    """
    _require_alpha2(cfg)
    d2 = cfg.d_m ** 2
    R2 = cfg.R_n_m ** 2
    mean_sinr = p.eta * p.rho * cfg.a_n / R2 * math.log((R2 + d2) / d2)
    return math.log2(1.0 + mean_sinr)


# -- far node ------------------------------------------------------------------

def blockage_f_los(p, cfg):
    """Far-node blockage over LoS links: 1, 1 - (C_f - d^2)/R_f^2, or 0."""
    _require_alpha2(cfg)
    c_f = _require_cf(p, cfg)
    return _linear_blockage(c_f, cfg.d_m ** 2, cfg.R_f_m ** 2, "far-node LoS blockage")


def _nlos_success(kappa, d2, R2):
    # (kappa / R^2) (exp(-d^2/kappa) - exp(-(R^2+d^2)/kappa)), stable for large kappa
    kappa = np.asarray(kappa, dtype=float)
    return kappa / R2 * np.exp(-d2 / kappa) * -np.expm1(-R2 / kappa)


def blockage_f_nlos(p, cfg):
    """Far-node blockage over Rayleigh NLoS links."""
    _require_alpha2(cfg)
    c_f = _require_cf(p, cfg)
    value = 1.0 - float(_nlos_success(cfg.omega_f * c_f, cfg.d_m ** 2, cfg.R_f_m ** 2))
    value, clamped = _clamped(value, "far-node NLoS blockage")
    return BlockageResult(value, None, clamped)


def asym_blockage_f_nlos(p, cfg):
    """First-order high-SNR NLoS blockage (2 d^2 + R_f^2) / (2 Omega_f C_f)."""
    _require_alpha2(cfg)
    c_f = _require_cf(p, cfg)
    return (2.0 * cfg.d_m ** 2 + cfg.R_f_m ** 2) / (2.0 * cfg.omega_f * c_f)


def ergodic_rate_f_los(p, cfg):
    """Far-node ergodic rate over LoS links (exact).

    The published arrangement uses eta rho = eta rho (a_n + a_f); the config
    guarantees a_n + a_f = 1.
    """
    _require_alpha2(cfg)
    d2 = cfg.d_m ** 2
    R2 = cfg.R_f_m ** 2
    A = p.eta * p.rho * cfg.a_f
    N = p.eta * p.rho * cfg.a_n
    t1 = math.log1p(A / (R2 + d2 + N))
    t2 = A / R2 * math.log1p(R2 / (d2 + N))
    log_q = math.log1p(A / (d2 + N)) - math.log1p(A / (R2 + d2 + N))
    t3 = (A + N + d2) / R2 * log_q
    return RateResult(max((t1 + t2 - t3) / _LN2, 0.0), RateMethod.CLOSED_FORM)


def _nlos_rate_sum(p, cfg, rule, squared_nodes=False):
    # squared_nodes=True reproduces the (t_k^2 + 1) variant as typeset; it is
    # only kept so the tests can show that it disagrees with the integral.
    t = rule.nodes
    u = t * t + 1.0 if squared_nodes else t + 1.0
    ratio = cfg.a_f / (2.0 * cfg.a_n)
    kappa = cfg.omega_f * p.rho * p.eta * cfg.a_n * (2.0 / u - 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        success = np.where(kappa > 0, _nlos_success(np.where(kappa > 0, kappa, 1.0),
                                                     cfg.d_m ** 2, cfg.R_f_m ** 2), 0.0)
    # a_f kappa / (2 a_n R_f^2) (...) = ratio * (kappa / R_f^2)(...)
    terms = ratio * success * rule.root_weights / (1.0 + ratio * u)
    return float(rule.weight / _LN2 * np.sum(terms))


def ergodic_rate_f_nlos(p, cfg, rule=None):
    """Far-node NLoS ergodic rate by Gauss-Chebyshev quadrature on x in (0, a_f/a_n)."""
    _require_alpha2(cfg)
    rule = rule or default_rule()
    return RateResult(max(_nlos_rate_sum(p, cfg, rule), 0.0), RateMethod.QUADRATURE, rule.order)


def asym_rate_f_los(cfg):
    """Interference-limited ceiling log2(1 + a_f/a_n)."""
    if not cfg.a_n > 0:
        raise ConfigError("a_n must be positive")
    return math.log2(1.0 + cfg.a_f / cfg.a_n)


def asym_rate_f_nlos(cfg, rule=None):
    """High-SNR NLoS ceiling as a Gauss-Chebyshev sum.

    Analytically the ceiling equals :func:`asym_rate_f_los`; the sum
    approaches it from above at rate O(M^-2).
    """
    rule = rule or default_rule()
    t = rule.nodes
    terms = cfg.a_f * rule.root_weights / (2.0 * cfg.a_n + cfg.a_f * (t + 1.0))
    return float(rule.weight / _LN2 * np.sum(terms))


# -- curve-level estimators ------------------------------------------------------

def diversity_gain_numeric(metric, rho_db_pair):
    """Finite-difference diversity -d log10 P / d log10 rho between two SNRs.

    ``metric`` maps rho in dB to a blockage probability.

    Raises
    ------
    TruncatedToZero
        If either probability is exactly zero (infinite-diversity regime).
    """
    r1, r2 = (float(r) for r in rho_db_pair)
    if r1 == r2:
        raise ValueError("rho_db_pair must contain two distinct SNRs")
    p1, p2 = float(metric(r1)), float(metric(r2))
    if p1 == 0.0 or p2 == 0.0:
        raise TruncatedToZero((r1, r2))
    if p1 < 0 or p2 < 0:
        raise ValueError("probabilities must be non-negative")
    return -(math.log10(p2) - math.log10(p1)) / ((r2 - r1) / 10.0)


def slope_numeric(metric, rho_db_pair):
    """Finite-difference high-SNR slope dR / d log2(rho) between two SNRs."""
    r1, r2 = (float(r) for r in rho_db_pair)
    if r1 == r2:
        raise ValueError("rho_db_pair must contain two distinct SNRs")
    dlog2 = (r2 - r1) / 10.0 * math.log2(10.0)
    return (float(metric(r2)) - float(metric(r1))) / dlog2


# -- system throughput -----------------------------------------------------------

def blockage_n(p, cfg, mode):
    mode = SicMode(mode)
    return blockage_n_isic(p, cfg) if mode is SicMode.ISIC else blockage_n_nisic(p, cfg)


def blockage_f(p, cfg, cond):
    cond = ChannelCondition(cond)
    return blockage_f_los(p, cfg) if cond is ChannelCondition.LOS else blockage_f_nlos(p, cfg)


def ergodic_rate_n(p, cfg, mode, rule=None):
    mode = SicMode(mode)
    if mode is SicMode.ISIC:
        return ergodic_rate_n_isic(p, cfg)
    return ergodic_rate_n_nisic(p, cfg, rule)


def ergodic_rate_f(p, cfg, cond, rule=None):
    cond = ChannelCondition(cond)
    if cond is ChannelCondition.LOS:
        return ergodic_rate_f_los(p, cfg)
    return ergodic_rate_f_nlos(p, cfg, rule)


def throughput_delay_constrained(p, cfg, mode, cond):
    """Delay-constrained throughput (1 - P_n) R_n + (1 - P_f) R_f in BPCU."""
    pn = blockage_n(p, cfg, mode).probability
    pf = blockage_f(p, cfg, cond).probability
    return (1.0 - pn) * cfg.rate_n_bpcu + (1.0 - pf) * cfg.rate_f_bpcu


def throughput_latency_tolerant(p, cfg, mode, cond, rule=None):
    """Latency-tolerant throughput: sum of the two ergodic rates."""
    return ergodic_rate_n(p, cfg, mode, rule).rate + ergodic_rate_f(p, cfg, cond, rule).rate


def at_rho(func, cfg, *args, **kwargs):
    """Adapt ``func(p, cfg, ...)`` into a function of rho in dB (for the estimators)."""
    def curve(rho_db):
        return float(func(derive(cfg, rho_db), cfg, *args, **kwargs))
    return curve
