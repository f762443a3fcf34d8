"""Exception hierarchy shared by every passnoma module."""


class PassNomaError(Exception):
    """Base class for all package errors."""


class ConfigError(PassNomaError, ValueError):
    """Invalid network configuration; ``violations`` lists every broken invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DomainError(PassNomaError, ValueError):
    """Argument outside the supported domain of a special function."""


class NumericError(PassNomaError, ArithmeticError):
    """Non-finite integrand value encountered during quadrature."""

    def __init__(self, message, abscissa=None):
        self.abscissa = abscissa
        super().__init__(message)


class InfeasibleError(PassNomaError, ValueError):
    """Far-node decoding is impossible at any SNR (a_f <= gamma_thf * a_n)."""


class UnsupportedCombinationError(PassNomaError, ValueError):
    """Requested node/channel/SIC combination is not modelled."""


class TruncatedToZero(PassNomaError, ArithmeticError):
    """A blockage probability is exactly zero, so its log-log slope is unbounded."""

    def __init__(self, rho_db_pair):
        self.rho_db_pair = tuple(rho_db_pair)
        super().__init__(
            "blockage probability truncated to zero within rho = %s dB "
            "(infinite diversity regime)" % (self.rho_db_pair,)
        )
