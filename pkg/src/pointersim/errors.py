"""Exception types shared across the simulator modules."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


# -- model ------------------------------------------------------------------

class ModelInvalid(SimulationError):
    """The model description is malformed or violates an invariant."""


class LevelOutsideContinuum(ModelInvalid):
    """A discrete level does not lie strictly inside (0, omega_max)."""


class DegenerateLevels(ModelInvalid):
    """Two discrete levels coincide; the perturbative formulas need them distinct."""


class NegativeScale(ModelInvalid):
    """coupling_scale must be >= 0."""


class OutOfSupport(SimulationError):
    """Requested a coupling value outside [0, omega_max]."""


# -- continuum --------------------------------------------------------------

class TooFewNodes(SimulationError):
    """Grid size below the minimum needed for the quadrature contracts."""


class NonFiniteValue(SimulationError):
    """Integrand produced NaN or infinity on the grid."""


class SingularityOutsideSupport(SimulationError):
    """Principal-value singularity must lie strictly inside (0, omega_max)."""


class DiscontinuousAtSingularity(SimulationError):
    """Integrand appears discontinuous at the singularity; the PV does not exist."""


# -- evolution --------------------------------------------------------------

class TraceViolation(SimulationError):
    """State components do not sum to unit trace within tolerance."""


class NegativeTime(SimulationError):
    """Evolution times must be >= 0."""


# -- oracle -----------------------------------------------------------------

class EigensolverFailure(SimulationError):
    """Dense eigendecomposition of the discretized Hamiltonian failed."""


class RecurrenceWindowExceeded(UserWarning):
    """Evolution time beyond half the recurrence time; finite-grid artifacts likely.

    Warning, not an error: the result is still returned, but it must not be
    treated as an approximation of the true irreversible dynamics.
    """


# -- measurement ------------------------------------------------------------

class NotNormalized(SimulationError):
    """Measurement amplitudes must satisfy sum |a_i|^2 = 1."""


class NonHermitianBlock(SimulationError):
    """Block matrices to diagonalize must be Hermitian."""


# -- cli --------------------------------------------------------------------

class ConfigParse(SimulationError):
    """Run configuration file is missing, malformed, or incomplete."""
