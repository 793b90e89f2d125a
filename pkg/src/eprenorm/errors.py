"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit-specific errors."""


class ConfigError(ToolkitError):
    """Invalid or unreadable configuration input."""


class PolePseudomode(ToolkitError):
    """Evaluation requested at the eliminated pseudomode pole lambda = -Omega_c."""


class DegenerateDenominator(ToolkitError):
    """g(lambda)^2 + g_c^2 vanished; the double-root parametrization is singular."""


class NoMarkovianEp(ToolkitError):
    """kappa <= gamma: the memoryless system admits no exceptional point."""


class NoConvergence(ToolkitError):
    """Newton iteration failed to converge after all restarts."""


class NonPhysicalEp(ToolkitError):
    """Solver converged, but no root satisfies g^2 > 0 and -delta > 0."""


class OrderCheckFailed(ToolkitError):
    """Double-root certificate violated.  Carries the measured magnitudes."""

    def __init__(self, p_mag, dp_mag, ddp_mag, message=""):
        self.p_mag = p_mag
        self.dp_mag = dp_mag
        self.ddp_mag = ddp_mag
        detail = f"|p|={p_mag:.3e}, |p'|={dp_mag:.3e}, |p''|={ddp_mag:.3e}"
        super().__init__(message + detail if message else detail)


class SingularDenominator(ToolkitError):
    """Response denominator D(omega) vanished (instability or pole)."""


class StepTooLarge(ToolkitError):
    """Integrator step exceeds the stability/accuracy bound."""
