"""Exception types shared across the simulator and control stack."""


class CoaxvaneError(Exception):
    """Base class for all coaxvane-specific failures."""


class ConfigError(CoaxvaneError):
    """A scenario/vehicle configuration is missing, unparseable, or invalid.

    The message names the offending key path (e.g. ``vehicle.mass``) where
    one exists. Mapped to CLI exit code 2.
    """


class DivergenceError(CoaxvaneError):
    """The integrator produced a non-finite state or a matrix left SO(3).

    Mapped to CLI exit code 3.
    """


class AllocationError(CoaxvaneError):
    """The wrench-to-actuator inversion is singular or produced an invalid
    command (non-positive collective thrust, upper rotor below its mixing
    floor, thrust outside actuator range).

    Mapped to CLI exit code 4.
    """


class ReferenceSingularityError(CoaxvaneError):
    """A reference attitude cannot be constructed from the trajectory
    (free-fall acceleration demand or thrust axis parallel to the heading
    vector). Treated as a control failure: CLI exit code 4.
    """
