"""
Monte Carlo oracle for the PASS-NOMA metrics.

Random numbers come from numpy's Philox4x32-10, a counter-based generator.
Trials are processed in fixed-size chunks; chunk ``i`` of an estimate with
master seed ``s`` draws from ``Philox(SeedSequence(s, spawn_key=(i,)))``.
Within a chunk the draw order is: node-n radius uniforms, node-n angle
uniforms, node-f radius uniforms, node-f angle uniforms, residual
interference uniforms, far-node fading uniforms. The estimate therefore
depends only on (seed, trials, config, rho), never on worker count.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import UnsupportedCombinationError
from .model import ChannelCondition, SicMode, derive, sinr_f, sinr_n, sinr_n_to_f

__all__ = [
    "CHUNK_SIZE",
    "DEFAULT_TRIALS",
    "MetricEstimate",
    "Node",
    "OmaScheme",
    "TrialDraw",
    "draw_trials",
    "make_rng",
    "mc_blockage",
    "mc_ergodic_rate",
    "mc_oma_baseline",
    "mc_oma_system",
    "mc_throughput",
    "sample_disk",
    "sample_exp_power",
]

DEFAULT_TRIALS = 1_000_000
CHUNK_SIZE = 1 << 18


class Node(enum.Enum):
    N = "n"
    F = "f"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ValueError("unknown node %r (expected 'n' or 'f')" % (text,)) from None


class OmaScheme(enum.Enum):
    """OMA benchmark variants.

    TDMA_HALF: each node owns half the channel uses at full SNR rho.
    FULL_RESOURCE: each node is evaluated as if it owned every channel use.
    """

    TDMA_HALF = "tdma-half"
    FULL_RESOURCE = "full-resource"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ValueError("unknown OMA scheme %r (expected one of %s)"
                             % (text, ", ".join(m.value for m in cls))) from None


@dataclass(frozen=True)
class MetricEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int

    def __float__(self):
        return self.mean


@dataclass(frozen=True)
class TrialDraw:
    """One chunk of i.i.d. trials; every field is an array of equal length."""

    pos_n: np.ndarray          # shape (m, 2), inside the R_n disk
    pos_f: np.ndarray          # shape (m, 2), inside the R_f disk
    residual_power: np.ndarray  # |h_I|^2 ~ Exp(mean omega_I)
    nlos_power_f: np.ndarray    # |h_f|^2 ~ Exp(mean omega_f)

    def __len__(self):
        return len(self.residual_power)


def make_rng(seed, chunk=0):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def sample_disk(R, rng, size=None):
    """Uniform point(s) in a disk of radius R via r = R sqrt(u), theta = 2 pi v.

    Returns an array of shape ``(2,)`` for ``size=None`` or ``(size, 2)``.
    """
    if not R > 0:
        raise ValueError("disk radius must be positive, got %r" % (R,))
    u = rng.random(size)
    v = rng.random(size)
    r = R * np.sqrt(u)
    theta = 2.0 * math.pi * v
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def sample_exp_power(omega, rng, size=None):
    """|CN(0, omega)|^2 draws by inversion: -omega ln(1 - u)."""
    if not omega > 0:
        raise ValueError("mean power must be positive, got %r" % (omega,))
    u = rng.random(size)
    return -omega * np.log1p(-u)


def draw_trials(cfg, rng, size):
    pos_n = sample_disk(cfg.R_n_m, rng, size)
    pos_f = sample_disk(cfg.R_f_m, rng, size)
    residual = sample_exp_power(cfg.omega_I, rng, size)
    fading = sample_exp_power(cfg.omega_f, rng, size)
    return TrialDraw(pos_n, pos_f, residual, fading)


@dataclass(frozen=True)
class _RadialDraw:
    """What the estimators need from a chunk: squared radii instead of points.

    Consumes the generator exactly like :func:`draw_trials` (the angle
    uniforms are drawn and discarded), so r_sq_n equals |pos_n|^2 of the
    matching TrialDraw up to rounding.
    """

    r_sq_n: np.ndarray
    r_sq_f: np.ndarray
    residual_power: np.ndarray
    nlos_power_f: np.ndarray


def _radial_draw(cfg, rng, size):
    r_sq_n = cfg.R_n_m ** 2 * rng.random(size)
    rng.random(size)
    r_sq_f = cfg.R_f_m ** 2 * rng.random(size)
    rng.random(size)
    residual = sample_exp_power(cfg.omega_I, rng, size)
    fading = sample_exp_power(cfg.omega_f, rng, size)
    return _RadialDraw(r_sq_n, r_sq_f, residual, fading)


def _gain(r_sq, fading, eta, cfg):
    if cfg.alpha == 2:
        return eta * fading / (r_sq + cfg.d_m ** 2)
    return eta * fading / (r_sq + cfg.d_m ** 2) ** (cfg.alpha / 2.0)


def _chunks(trials):
    start = 0
    i = 0
    while start < trials:
        m = min(CHUNK_SIZE, trials - start)
        yield i, m
        start += m
        i += 1


class _Accumulator:
    """Mean and variance merged chunk by chunk (Chan et al.)."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, values):
        m = len(values)
        if m == 0:
            return
        mean_b = float(np.mean(values))
        m2_b = float(np.sum((values - mean_b) ** 2))
        delta = mean_b - self.mean
        total = self.n + m
        self.mean += delta * m / total
        self.m2 += m2_b + delta * delta * self.n * m / total
        self.n = total

    def std_error(self):
        if self.n < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


def _check_args(node, cond, trials):
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer, got %r" % (trials,))
    if node is Node.N and cond is ChannelCondition.NLOS:
        raise UnsupportedCombinationError("node n is only modelled over LoS links")


def _node_gain(draw, node, cond, eta, cfg):
    if node is Node.N:
        return _gain(draw.r_sq_n, 1.0, eta, cfg)
    fading = draw.nlos_power_f if cond is ChannelCondition.NLOS else 1.0
    return _gain(draw.r_sq_f, fading, eta, cfg)


def _run(cfg, rho_db, trials, seed, per_trial):
    """Accumulate one or more per-trial statistics over all chunks.

    ``per_trial(draw, p)`` returns a tuple of equal-length arrays; one
    accumulator is kept per array.
    """
    p = derive(cfg, rho_db)
    accs = None
    for chunk, m in _chunks(int(trials)):
        draw = _radial_draw(cfg, make_rng(seed, chunk), m)
        values = per_trial(draw, p)
        if accs is None:
            accs = [_Accumulator() for _ in values]
        for acc, v in zip(accs, values):
            acc.add(v)
    return accs


def _binomial(acc, seed):
    phat = acc.mean
    se = math.sqrt(max(phat * (1.0 - phat), 0.0) / acc.n)
    return MetricEstimate(phat, se, acc.n, int(seed))


def _sample_mean(acc, seed):
    return MetricEstimate(acc.mean, acc.std_error(), acc.n, int(seed))


def _blocked(draw, p, cfg, node, mode, cond):
    g = _node_gain(draw, node, cond, p.eta, cfg)
    if node is Node.F:
        return sinr_f(g, p, cfg) < p.gamma_thf
    # node n decodes s_f over its own link, so both gains are g
    fails_f = sinr_n_to_f(g, g, p, cfg) < p.gamma_thf
    fails_n = sinr_n(g, draw.residual_power, mode, p, cfg) < p.gamma_thn
    return fails_f | (~fails_f & fails_n)


def _rate(draw, p, cfg, node, mode, cond):
    g = _node_gain(draw, node, cond, p.eta, cfg)
    if node is Node.F:
        return np.log2(1.0 + sinr_f(g, p, cfg))
    return np.log2(1.0 + sinr_n(g, draw.residual_power, mode, p, cfg))


def _oma(draw, p, cfg, node, cond, scheme):
    share = 0.5 if scheme is OmaScheme.TDMA_HALF else 1.0
    target = cfg.rate_n_bpcu if node is Node.N else cfg.rate_f_bpcu
    threshold = 2.0 ** (target / share) - 1.0
    snr = p.rho * _node_gain(draw, node, cond, p.eta, cfg)
    return snr < threshold, share * np.log2(1.0 + snr), share


def mc_blockage(cfg, rho_db, mode=SicMode.ISIC, node=Node.N, cond=ChannelCondition.LOS,
                trials=DEFAULT_TRIALS, seed=0):
    """Monte Carlo blockage probability.

    Node n is blocked if it fails to decode s_f, or decodes s_f but then
    fails on s_n. Node f is blocked if its SINR is below gamma_thf.
    ``std_error`` is the binomial sqrt(p(1-p)/trials).
    """
    mode = SicMode(mode)
    node = Node.parse(node)
    cond = ChannelCondition(cond)
    _check_args(node, cond, trials)
    (acc,) = _run(cfg, rho_db, trials, seed,
                  lambda draw, p: (_blocked(draw, p, cfg, node, mode, cond).astype(float),))
    return _binomial(acc, seed)


def mc_ergodic_rate(cfg, rho_db, mode=SicMode.ISIC, node=Node.N, cond=ChannelCondition.LOS,
                    trials=DEFAULT_TRIALS, seed=0):
    """Monte Carlo ergodic rate: sample mean of log2(1 + SINR)."""
    mode = SicMode(mode)
    node = Node.parse(node)
    cond = ChannelCondition(cond)
    _check_args(node, cond, trials)
    (acc,) = _run(cfg, rho_db, trials, seed, lambda draw, p: (_rate(draw, p, cfg, node, mode, cond),))
    return _sample_mean(acc, seed)


def mc_throughput(cfg, rho_db, mode=SicMode.ISIC, cond=ChannelCondition.LOS,
                  trials=DEFAULT_TRIALS, seed=0):
    """System throughput of the NOMA pair from one set of draws.

    Returns ``(delay_constrained, latency_tolerant)``. Per trial these are
    R_n 1[n decodes] + R_f 1[f decodes] and log2(1 + gamma_n) + log2(1 + gamma_f);
    node n is always on LoS and ``cond`` applies to node f.
    """
    mode = SicMode(mode)
    cond = ChannelCondition(cond)
    _check_args(Node.F, cond, trials)

    def per_trial(draw, p):
        ok_n = ~_blocked(draw, p, cfg, Node.N, mode, ChannelCondition.LOS)
        ok_f = ~_blocked(draw, p, cfg, Node.F, mode, cond)
        dl = cfg.rate_n_bpcu * ok_n + cfg.rate_f_bpcu * ok_f
        lt = _rate(draw, p, cfg, Node.N, mode, ChannelCondition.LOS) + _rate(draw, p, cfg, Node.F, mode, cond)
        return dl, lt

    dl, lt = _run(cfg, rho_db, trials, seed, per_trial)
    return _sample_mean(dl, seed), _sample_mean(lt, seed)


def mc_oma_baseline(cfg, rho_db, node=Node.N, cond=ChannelCondition.LOS,
                    trials=DEFAULT_TRIALS, seed=0, scheme=OmaScheme.TDMA_HALF):
    """OMA benchmark for one node: returns ``(blockage, rate)`` estimates.

    The node receives at full SNR rho with no co-channel interference. Under
    TDMA_HALF its rate is halved and the SNR threshold is 2^(2R) - 1.
    """
    node = Node.parse(node)
    cond = ChannelCondition(cond)
    scheme = OmaScheme.parse(scheme)
    _check_args(node, cond, trials)

    def per_trial(draw, p):
        blocked, rate, _ = _oma(draw, p, cfg, node, cond, scheme)
        return blocked.astype(float), rate

    blk, rate = _run(cfg, rho_db, trials, seed, per_trial)
    return _binomial(blk, seed), _sample_mean(rate, seed)


def mc_oma_system(cfg, rho_db, cond=ChannelCondition.LOS, trials=DEFAULT_TRIALS, seed=0,
                  scheme=OmaScheme.TDMA_HALF):
    """OMA counterpart of :func:`mc_throughput`: ``(delay_constrained, sum_rate)``.

    Each node delivers its target rate on its own resource share when it is
    not blocked, so under TDMA_HALF a fully served pair carries
    (R_n + R_f) / 2.
    """
    cond = ChannelCondition(cond)
    scheme = OmaScheme.parse(scheme)
    _check_args(Node.F, cond, trials)

    def per_trial(draw, p):
        bn, rn, share = _oma(draw, p, cfg, Node.N, ChannelCondition.LOS, scheme)
        bf, rf, _ = _oma(draw, p, cfg, Node.F, cond, scheme)
        dl = share * (cfg.rate_n_bpcu * ~bn + cfg.rate_f_bpcu * ~bf)
        return dl, rn + rf

    dl, rate = _run(cfg, rho_db, trials, seed, per_trial)
    return _sample_mean(dl, seed), _sample_mean(rate, seed)
