"""Exception hierarchy shared by every module."""


class InertiaLabError(Exception):
    """Base class for library errors."""


class NonConvergence(InertiaLabError, ArithmeticError):
    """The Jacobi eigensolver exhausted its sweep budget."""


class NotExact(InertiaLabError, TypeError):
    """An exact-only routine received floating-point entries."""


class NotHermitian(InertiaLabError, ValueError):
    pass


class Singular(InertiaLabError, ValueError):
    pass


class ShapeMismatch(InertiaLabError, ValueError):
    pass


class BadSubset(InertiaLabError, ValueError):
    pass


class NotAState(InertiaLabError, ValueError):
    """The matrix has a negative eigenvalue where a state was required."""


class NotPSD(NotAState):
    pass


class NotNPT(InertiaLabError, ValueError):
    """A routine that needs a negative partial transpose got a PPT state."""


class BadSpec(InertiaLabError, ValueError):
    pass


class ConstraintViolated(InertiaLabError, ValueError):
    pass


class TooManyProducts(InertiaLabError, ValueError):
    pass


class Unsorted(InertiaLabError, ValueError):
    pass


class NoKernel(InertiaLabError, ValueError):
    pass


class NoKernelProduct(InertiaLabError, ValueError):
    pass


class CertificateMismatch(InertiaLabError, AssertionError):
    """A construction did not reproduce the inertia it claims."""


class NotAWitness(InertiaLabError, ValueError):
    """An operation that needs an entanglement witness got something else."""


class SearchIncomplete(UserWarning):
    """Fewer kernel product vectors were found than the dimension count guarantees."""
