"""Exception hierarchy shared by every module of the package."""


class HaarError(ValueError):
    """Base class for precondition violations."""

    code = "haar_error"


class InvalidModulus(HaarError):
    code = "invalid_modulus"


class NonUnit(HaarError):
    code = "non_unit"


class ModulusMismatch(HaarError):
    code = "modulus_mismatch"


class BadValency(HaarError):
    code = "bad_valency"


class Disconnected(HaarError):
    code = "disconnected"


class OddModulusNoException(HaarError):
    """An odd modulus cannot carry the {0, u, v, v+m} normal form."""

    code = "odd_modulus"


class OutOfRegime(HaarError):
    """Parameters fall outside the range where a structural formula applies."""

    code = "out_of_regime"


class NotTransitive(HaarError):
    code = "not_transitive"


class ResourceExceeded(RuntimeError):
    """A computation would enumerate more group elements than the configured cap."""

    code = "resource_exceeded"

    def __init__(self, needed: int, cap: int, what: str = "group elements"):
        super().__init__(f"{what}: {needed} exceeds cap {cap}")
        self.needed = needed
        self.cap = cap
