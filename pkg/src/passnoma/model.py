"""
System model: configuration, derived link-budget constants and SINR evaluators.

One representative pinching antenna sits at (0, 0, d) above the cell centre.
The near node n is uniform in a disk of radius R_n, the far node f uniform in
a disk of radius R_f. A LoS link has power gain eta / (r^2 + d^2); phases are
unit-modulus and drop out of every magnitude used here.
"""

from dataclasses import dataclass, fields, replace
import enum
import logging
import math

import numpy as np

from .errors import ConfigError

__all__ = [
    "SPEED_OF_LIGHT",
    "ChannelCondition",
    "DerivedParams",
    "NetworkConfig",
    "SicMode",
    "cdf_squared_distance",
    "channel_power_los",
    "derive",
    "dump_config",
    "load_config",
    "parse_config",
    "rho_db_from_pb",
    "sinr_f",
    "sinr_n",
    "sinr_n_to_f",
]

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact


class SicMode(enum.Enum):
    """SIC quality at the near node; the value is the residual-interference switch."""

    ISIC = 0
    NISIC = 1

    @classmethod
    def parse(cls, text):
        return _parse_enum(cls, text)


class ChannelCondition(enum.Enum):
    LOS = "LoS"
    NLOS = "NLoS"

    @classmethod
    def parse(cls, text):
        return _parse_enum(cls, text)


def _parse_enum(cls, text):
    if isinstance(text, cls):
        return text
    key = str(text).strip().lower()
    for member in cls:
        if key in (member.name.lower(), str(member.value).lower()):
            return member
    raise ValueError("unknown %s %r (expected one of %s)"
                     % (cls.__name__, text, ", ".join(m.name for m in cls)))


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and protocol parameters of a two-node PASS-NOMA downlink.

    Field names double as the keys of the ``key=value`` config file. Defaults
    reproduce the reference scenario; ``omega_I`` and ``omega_f`` are not
    part of it and default to -20 dB and 0 dB respectively.
    """

    a_n: float = 0.3
    a_f: float = 0.7
    rate_n_bpcu: float = 1.0
    rate_f_bpcu: float = 1.0
    fc_hz: float = 1e9
    bw_hz: float = 1e9
    alpha: float = 2.0
    K: int = 10
    d_m: float = 5.0
    R_D_m: float = 10.0
    R_n_m: float = 6.0
    R_f_m: float = 10.0
    omega_I: float = 0.01
    omega_f: float = 1.0
    noise_power_db: float | None = None

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise ConfigError(problems)

    def violations(self):
        """Return a list of human-readable invariant violations (empty if valid)."""
        out = []
        if not (0 < self.a_n < self.a_f):
            out.append("power split must satisfy 0 < a_n < a_f (a_n=%r, a_f=%r)" % (self.a_n, self.a_f))
        if not math.isclose(self.a_n + self.a_f, 1.0, rel_tol=0, abs_tol=1e-12):
            out.append("a_n + a_f must equal 1 (got %r)" % (self.a_n + self.a_f))
        if not (self.rate_n_bpcu > 0 and self.rate_f_bpcu > 0):
            out.append("target rates must be positive")
        if not (self.fc_hz > 0):
            out.append("fc_hz must be positive")
        if not (self.bw_hz > 0):
            out.append("bw_hz must be positive")
        if not (self.alpha > 0):
            out.append("alpha must be positive")
        if isinstance(self.K, bool) or int(self.K) != self.K or self.K < 1:
            out.append("K must be an integer >= 1 (got %r)" % (self.K,))
        if not (self.d_m > 0):
            out.append("d_m must be positive")
        if not (0 < self.R_n_m < self.R_f_m <= self.R_D_m):
            out.append("radii must satisfy 0 < R_n < R_f <= R_D (R_n=%r, R_f=%r, R_D=%r)"
                       % (self.R_n_m, self.R_f_m, self.R_D_m))
        if not (self.omega_I > 0):
            out.append("omega_I must be positive")
        if not (self.omega_f > 0):
            out.append("omega_f must be positive")
        if self.noise_power_db is not None and not math.isfinite(self.noise_power_db):
            out.append("noise_power_db must be finite")
        return out

    @property
    def noise_db(self):
        """Noise power in dB: -140 + 10 log10(B) unless overridden."""
        if self.noise_power_db is not None:
            return float(self.noise_power_db)
        return -140.0 + 10.0 * math.log10(self.bw_hz)

    def with_cell_radius(self, R_D):
        """Copy with R_D changed and R_n = 0.6 R_D, R_f = R_D."""
        return replace(self, R_D_m=float(R_D), R_n_m=0.6 * R_D, R_f_m=float(R_D))

    def replace(self, **changes):
        return replace(self, **changes)


_FIELD_TYPES = {f.name: f.type for f in fields(NetworkConfig)}


def parse_config(text, source="<string>"):
    """Parse ``key=value`` lines into a :class:`NetworkConfig`.

    Blank lines and ``#`` comments are ignored. Unknown or duplicate keys and
    unparseable values raise :class:`ConfigError`; missing keys fall back to
    the defaults and are logged.
    """
    values = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append("%s:%d: expected key=value, got %r" % (source, lineno, raw))
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            errors.append("%s:%d: unknown key %r" % (source, lineno, key))
            continue
        if key in values:
            errors.append("%s:%d: duplicate key %r" % (source, lineno, key))
            continue
        try:
            values[key] = int(value) if key == "K" else float(value)
        except ValueError:
            errors.append("%s:%d: cannot parse %s=%r" % (source, lineno, key, value))
    if errors:
        raise ConfigError(errors)
    missing = [k for k in _FIELD_TYPES if k not in values and k != "noise_power_db"]
    if missing:
        logger.info("%s: using defaults for %s", source, ", ".join(missing))
    return NetworkConfig(**values)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def dump_config(cfg):
    """Serialise a config as ``key=value`` lines that :func:`parse_config` reads back."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        lines.append("%s=%r" % (f.name, value))
    return lines


@dataclass(frozen=True)
class DerivedParams:
    """Per-evaluation constants.

    ``c_n = eta rho a_n / gamma_thn`` and
    ``c_f = eta rho (a_f / gamma_thf - a_n)`` are the squared-distance budgets
    (in m^2) that decide decoding success on a LoS link; ``c_f`` is ``None``
    when a_f <= gamma_thf a_n, i.e. the far node can never decode.
    """

    rho_db: float
    eta: float
    rho: float
    gamma_thn: float
    gamma_thf: float
    c_n: float
    c_f: float | None

    @property
    def c_f_defined(self):
        return self.c_f is not None


def rho_db_from_pb(cfg, pb_db):
    """Per-antenna transmit SNR rho = P_b / (K sigma^2) in dB."""
    return float(pb_db) - 10.0 * math.log10(cfg.K) - cfg.noise_db


def derive(cfg, rho_db=None, *, pb_db=None):
    """Compute :class:`DerivedParams` from exactly one of ``rho_db`` or ``pb_db``."""
    if (rho_db is None) == (pb_db is None):
        raise ValueError("give exactly one of rho_db or pb_db")
    if pb_db is not None:
        rho_db = rho_db_from_pb(cfg, pb_db)
    rho_db = float(rho_db)
    if not math.isfinite(rho_db):
        raise ValueError("rho_db must be finite, got %r" % rho_db)
    eta = SPEED_OF_LIGHT ** 2 / (16.0 * math.pi ** 2 * cfg.fc_hz ** 2)
    rho = 10.0 ** (rho_db / 10.0)
    gamma_thn = 2.0 ** cfg.rate_n_bpcu - 1.0
    gamma_thf = 2.0 ** cfg.rate_f_bpcu - 1.0
    c_n = eta * rho * cfg.a_n / gamma_thn
    c_f = None
    if cfg.a_f > gamma_thf * cfg.a_n:
        c_f = eta * rho * (cfg.a_f / gamma_thf - cfg.a_n)
    return DerivedParams(rho_db=rho_db, eta=eta, rho=rho, gamma_thn=gamma_thn,
                         gamma_thf=gamma_thf, c_n=c_n, c_f=c_f)


def cdf_squared_distance(y, R):
    """CDF of r^2 for a point uniform in a disk of radius R: clip(y / R^2, 0, 1)."""
    if not R > 0:
        raise ValueError("disk radius must be positive, got %r" % (R,))
    out = np.clip(np.asarray(y, dtype=float) / (R * R), 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def channel_power_los(r_sq, d, eta):
    """LoS power gain eta / (r^2 + d^2) for a node at horizontal distance r."""
    return eta / (np.asarray(r_sq, dtype=float) + d * d)


# The SINR helpers take channel power gains |h|^2 (path loss and fading
# folded in) and broadcast over numpy arrays.

def sinr_n_to_f(g_n, g_f, p, cfg):
    """SINR for decoding the far node's symbol in the first SIC stage.

    ``g_f`` is the gain of the link carrying s_f to the decoder and ``g_n``
    the gain carrying the interfering s_n. At the near node both symbols
    share one link, so callers evaluating node n pass its own gain twice.
    """
    return p.rho * g_f * cfg.a_f / (p.rho * g_n * cfg.a_n + 1.0)


def sinr_n(g_n, residual_power, mode, p, cfg):
    """Near-node SINR for its own symbol after SIC.

    Under NISIC the residual-interference power ``residual_power`` (|h_I|^2)
    is scaled by rho; under ISIC it is ignored.
    """
    w = float(SicMode(mode).value)
    return p.rho * g_n * cfg.a_n / (w * p.rho * residual_power + 1.0)


def sinr_f(g_f, p, cfg):
    """Far-node SINR treating s_n as noise; bounded above by a_f / a_n."""
    return p.rho * g_f * cfg.a_f / (p.rho * g_f * cfg.a_n + 1.0)
