"""Exception taxonomy for the toolkit.

Every failure mode raised by the package derives from ToolkitError, so
callers can catch one type at the CLI boundary.  The subclasses mirror the
distinct ways a construction or a certificate can fail: data-integrity
problems, geometric degeneracies, infeasible solves, and bookkeeping
violations discovered during assembly.
"""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


# --- data / representation -------------------------------------------------

class IntegrityError(ToolkitError):
    """Stored value and derivative channels of a curve disagree."""


class DomainError(ToolkitError):
    """Operands live on mismatched or invalid parameter intervals."""


class ResolutionError(ToolkitError):
    """Sampling too coarse for a guarded quantity (e.g. angle gaps >= pi/2)."""


class MatrixError(ToolkitError):
    """A torus coordinate change is not unimodular."""


# --- geometric predicates ---------------------------------------------------

class ImmersionError(ToolkitError):
    """A velocity vanishes where an immersion is required."""


class DegeneracyError(ToolkitError):
    """The area coefficient E = <g, ih'> fell below the positivity floor."""


class ContactError(ToolkitError):
    """A curve fails the contact inequality where it is required to hold."""


class PositivityError(ToolkitError):
    """A field or margin required to be positive is not."""


class GermError(ToolkitError):
    """Boundary or axis germ does not match the required model jet."""


# --- constructive operations ------------------------------------------------

class PreconditionError(ToolkitError):
    """A documented hypothesis of a constructive operation is violated."""


class InfeasibleError(ToolkitError):
    """No object with the requested properties exists for these inputs."""


class SolverError(ToolkitError):
    """A feasible-looking solve failed to produce a certified output."""


class ObstructionError(ToolkitError):
    """Boundary turning numbers obstruct closing a curve family."""


class ModeError(ToolkitError):
    """Requested cap mode is incompatible with the boundary data."""


class ChoiceError(ToolkitError):
    """Requested rotation choice is not on the menu for this boundary."""


# --- assembly bookkeeping ---------------------------------------------------

class SignError(ToolkitError):
    """Mixed contact signs meet across an integrable region."""


class ClassError(ToolkitError):
    """Fibration classes fail to match under the declared gluings."""


class TopologyError(ToolkitError):
    """The region graph does not describe a closed oriented chain."""


class SubdivisionError(ToolkitError):
    """No admissible subdividing slope exists within the search bounds."""


class ExactnessError(ToolkitError):
    """A period or overlap check of the exactness audit failed."""


class IncompleteError(ToolkitError):
    """Global verification invoked with missing per-region artifacts."""
