"""Exception hierarchy shared by the kernels, the oracle and the CLI."""


class KerrError(Exception):
    """Base class for every error raised by kerrlaw.

    ``context`` names the device file or system being processed, when known.
    """

    context = None


class DomainError(KerrError, ValueError):
    """Input outside the domain where a formula is defined."""


class NumericalError(KerrError, RuntimeError):
    """A numerical procedure failed to converge or bracket."""


class NoKerrFreePoint(NumericalError):
    """The SNAIL quartic coefficient keeps one sign over the flux interval."""


class NoEnzPoint(NumericalError):
    """Re eps(omega) has no zero crossing on the search interval."""


class SingularityError(NumericalError):
    """A closed form is evaluated at (or numerically at) its pole."""


class StrongMixing(NumericalError):
    """Dressed eigenstates no longer map one-to-one onto bare Fock labels."""

    def __init__(self, label, fidelity):
        self.label = label
        self.fidelity = fidelity
        super().__init__(
            f"state {label} has assignment fidelity {fidelity:.4f} <= 0.5; "
            "the perturbative labeling has broken down"
        )


class DeviceFileError(KerrError):
    """Malformed or invalid device file. Carries the path and line when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class UnsupportedPlatform(KerrError):
    """Operation not defined for the requested platform."""
