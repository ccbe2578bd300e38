"""Exception types shared across the package."""


class CfnFormatError(ValueError):
    """Raised when a CFN file or in-memory CFN violates the schema.

    The message names the offending field or table.
    """


class CapacityError(ValueError):
    """Raised when an instance exceeds a documented size cap.

    Caps are explicit (64 qubits for coupling bitmasks, 2^24 states for
    exhaustive enumeration, 26 coordinates per Walsh transform) rather
    than silent truncation points.
    """
