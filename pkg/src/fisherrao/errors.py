"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


class NotPositiveDefinite(ValueError):
    """A matrix required to be positive definite fails the eigenvalue floor."""

    def __init__(self, min_eigenvalue: float, max_eigenvalue: float, context: str = ""):
        self.min_eigenvalue = float(min_eigenvalue)
        self.max_eigenvalue = float(max_eigenvalue)
        msg = (
            f"matrix is not positive definite: min eigenvalue {self.min_eigenvalue!r}"
            f" (max eigenvalue {self.max_eigenvalue!r})"
        )
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class ConvergenceFailure(RuntimeError):
    """The iterative eigensolver did not converge within its sweep budget."""


class LeftCone(RuntimeError):
    """An ODE trajectory left the SPD cone (step size too large)."""

    def __init__(self, time: float, min_eigenvalue: float):
        self.time = float(time)
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            f"trajectory left the SPD cone at t={self.time!r}"
            f" (min eigenvalue {self.min_eigenvalue!r}); reduce the step size"
        )


class MatrixFormatError(ValueError):
    """A matrix text file failed to parse."""

    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = int(line)
        super().__init__(f"{source}:{line}: {message}")
