"""Exception types shared by all subpackages."""


class MCTwistError(Exception):
    """Base class for every error raised by the package."""


class CompositionNotZero(MCTwistError):
    """Two composable differentials have a nonzero product."""


class WeightZeroGaugeInput(MCTwistError):
    """A gauge parameter has a component of filtration weight 0."""


class NoUnit(MCTwistError):
    """The algebra has no unit but the operation needs one."""


class NotGroupLike(MCTwistError):
    """An element is not of the form 1 + b with b of positive weight."""


class FormulaMismatch(MCTwistError):
    """Two independent evaluations of the same quantity disagree."""


class NotMaurerCartan(MCTwistError):
    """An element fails the Maurer-Cartan equation."""


class NotACycle(MCTwistError):
    """An element expected to be a cycle is not closed."""


class InvalidDeformation(MCTwistError):
    """A formal series is not a formal deformation."""


class InvalidAlgebra(MCTwistError):
    """Structure constants violate a declared invariant."""


class WeightZeroTwist(MCTwistError):
    """A twisting element has a component of filtration weight 0."""


class CurvatureNotUnital(MCTwistError):
    """The supplied functional does not send the curvature to 1."""


class SourceTargetMismatch(MCTwistError):
    """Two morphisms are not composable."""


class IndexOutOfRange(MCTwistError):
    """A partial composition index is outside 1..arity."""


class InfiniteSliceWithoutCap(MCTwistError):
    """A chain slice is infinite and no truncation cap was given."""


class NotClosed(MCTwistError):
    """A subspace is not closed under an operation."""


class UnknownComplex(MCTwistError):
    """A complex or operad identifier is not registered."""
