"""Exception hierarchy for the elliptic spectra library."""

from typing import Optional


class EllipticError(Exception):
    """Base class for all library errors."""


class DomainError(EllipticError, ValueError):
    """Raised when an argument lies outside the supported range."""


class MissingCumulantError(EllipticError, KeyError):
    """Raised when a cumulant of a required block size was not supplied."""

    def __init__(self, sizes):
        self.sizes = tuple(sizes)
        super().__init__(f"missing cumulants for block sizes {list(self.sizes)}")

    def __str__(self) -> str:
        return self.args[0]


class BranchCutError(EllipticError):
    """Raised when the R-transform is evaluated on the principal branch cut."""

    def __init__(self, z: complex, rho: float):
        self.z = z
        self.rho = rho
        super().__init__(f"square-root argument on the branch cut at z={z!r}, rho={rho}")


class ContinuationError(EllipticError):
    """Raised when root tracking cannot separate the physical branch."""

    def __init__(self, z: complex, rho: float, detail: str = "root collision"):
        self.z = z
        self.rho = rho
        super().__init__(f"continuation failed at z={z!r}, rho={rho}: {detail}")


class EigenSolverError(EllipticError):
    """Raised when the eigensolver does not converge for a sample."""

    def __init__(
        self,
        n: int,
        rho: float,
        seed: int,
        trial: int = 0,
        detail: Optional[str] = None,
    ):
        self.n = n
        self.rho = rho
        self.seed = seed
        self.trial = trial
        message = f"eigensolver failed for n={n}, rho={rho}, seed={seed}, trial={trial}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class ConfigurationError(EllipticError):
    """Raised for invalid environment settings or unusable output locations."""
