"""Exception hierarchy shared by all opmodel modules."""


class OpModelError(Exception):
    """Base class for all errors raised by opmodel."""


class NotHermitian(OpModelError):
    """Matrix deviates from its adjoint beyond tolerance."""


class NotPsd(OpModelError):
    """Hermitian matrix has an eigenvalue below the negative tolerance."""


class OrderViolation(OpModelError):
    """The operator order 0 <= F <= G fails within tolerance."""


class ZeroAtom(OpModelError):
    """A nonzero atom weight received zero control-measure mass."""


class InclusionViolation(OpModelError):
    """ker(T) is not annihilated by every atom weight."""


class BlockViolation(OpModelError):
    """Off-diagonal blocks of a measure in the kernel frame do not vanish."""


class DimensionMismatch(OpModelError):
    """Vector or matrix dimensions do not conform."""


class IdentityViolation(OpModelError):
    """A verified matrix identity exceeds its tolerance."""


class UniquenessViolation(OpModelError):
    """Un-normalized fiber Grams disagree between two constructions."""


class RealShift(OpModelError):
    """Spectral parameter z lies on the real axis."""


class LowerHalfPlane(OpModelError):
    """Spectral parameter z lies outside the open upper half plane."""


class NonConvergent(OpModelError):
    """Extrapolated limit failed its convergence check."""


class DegenerateCoupling(OpModelError):
    """Coupling map K vanishes; the induced measure has no mass."""


class AxiomViolation(OpModelError):
    """A semi-metric axiom fails; message names the axiom and witness."""


class IsometryFailure(OpModelError):
    """The two completion routes could not be matched isometrically."""


class UnsortedSamples(OpModelError):
    """Density samples are not strictly increasing in lambda."""
