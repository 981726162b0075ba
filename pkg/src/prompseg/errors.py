"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Input has the wrong shape, ordering or contains non-finite values."""


class NumericalError(ArithmeticError):
    """A factorization or decomposition could not be computed."""


class InsufficientPeaksError(ValueError):
    """Fewer significant peaks were found than clusters requested."""

    def __init__(self, n_peaks, n_clusters):
        self.n_peaks = n_peaks
        self.n_clusters = n_clusters
        super().__init__(
            f"found {n_peaks} significant peaks, need at least {n_clusters} "
            f"for {n_clusters} clusters")


class DegenerateScaleError(ValueError):
    """Kernel scale cannot be inferred because all features coincide."""
