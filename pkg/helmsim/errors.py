# helmsim/errors.py
"""Exception types raised by the simulator, the measures and the voyage tooling.

Everything derives from HelmsimError, which the CLI maps to exit code 2.
"""


class HelmsimError(ValueError):
    """Base class for input and validation failures."""


class ConfigError(HelmsimError):
    """Vessel configuration or harness settings are malformed or invalid."""

    def __init__(self, message, field=None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class TableError(HelmsimError):
    """A sampled coefficient table is empty or malformed."""


class SeriesError(HelmsimError):
    """An environment or control series is empty or not strictly increasing."""


class ForceModelError(HelmsimError):
    """A force sub-model was called outside its domain."""


class SingularInertiaError(HelmsimError):
    """The sway/yaw inertia matrix cannot be inverted."""


class SimulationError(HelmsimError):
    """Integration produced a non-finite derivative."""

    def __init__(self, message, submodel=None, step=None):
        where = []
        if submodel:
            where.append(f"submodel={submodel}")
        if step is not None:
            where.append(f"step={step}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.message = message
        self.submodel = submodel
        self.step = step


class AlignmentError(HelmsimError):
    """Truth and prediction trajectories cannot be compared knot by knot."""


class DegenerateDenominatorError(HelmsimError):
    """Every knot of a percentage measure has a vanishing denominator."""


class DegenerateContextError(HelmsimError):
    """The cVDM normalisation context has a vanishing normaliser."""


class VoyageDataError(HelmsimError):
    """A voyage or weather log violates its CSV schema."""

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column:
            where.append(f"column '{column}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")
        self.row = row
        self.column = column


class ProjectionError(HelmsimError):
    """A position is too far from the projection anchor."""
