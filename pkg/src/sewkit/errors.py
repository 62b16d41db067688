"""Exception types shared across the package."""


class SewkitError(Exception):
    """Base class for package errors."""


class DomainMismatch(SewkitError):
    """Maps or spaces do not share the required source/target."""


class ModelDomainError(SewkitError):
    """A flow model was evaluated outside its admissible region."""


class InsufficientProbes(SewkitError):
    """An operation needs more distinct probe points than the space carries."""


class EndpointMismatch(SewkitError):
    """Endpoints of subdivisions, paths or homotopies do not line up."""


class CannotCoarsen(SewkitError):
    """The trivial subdivision has no interior point to remove."""


class NotARefinement(SewkitError):
    """The allegedly finer subdivision does not contain the coarser one."""


class ConcatMismatch(SewkitError):
    """Path concatenation endpoints differ beyond tolerance."""


class InadmissibleRegularity(SewkitError):
    """Declared regularity constants are inconsistent (e.g. alpha+beta <= 1)."""


class WrongMode(SewkitError):
    """An operation received defect data of the wrong mode (sewing vs knitting)."""


class DeclaredLipschitzViolated(SewkitError):
    """Sampled increments exceed the declared Lipschitz norm."""


class BoundViolation(SewkitError):
    """A certified inequality failed on measured data."""


class NonConvergence(SewkitError):
    """Refinement hit the level cap before meeting the tolerance."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class ConfigError(SewkitError):
    """An experiment configuration is missing or malformed."""
