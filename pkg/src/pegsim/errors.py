"""Exception types shared across the package."""


class PegsimError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrixError(PegsimError):
    """Matrix inversion failed because a pivot fell below the singularity threshold."""


class NotSymmetricError(PegsimError):
    """An operation requiring a symmetric matrix received an asymmetric one."""


class NotTriangularError(PegsimError):
    """An operation requiring a triangular matrix received a non-triangular one."""


class DesignInfeasibleError(PegsimError):
    """A stiffness design request cannot produce a stable matrix."""


class WrongFrameError(PegsimError):
    """A wrench arrived in a different reference frame than required."""


class InvalidPoseError(PegsimError):
    """A peg pose violates the small-angle or finiteness requirements."""


class ConfigError(PegsimError):
    """A configuration file or parameter set failed validation."""
