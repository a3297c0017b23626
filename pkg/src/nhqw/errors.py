"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Malformed input: non-unitary matrix, bad permutation, bad config key."""


class RangeError(ValidationError):
    """An index, site or memory word outside its allowed range."""


class SizeLimitError(ValidationError):
    """A dense construction was requested beyond its memory bound."""


class SeamCrossingError(ValidationError):
    """The requested QCA run would scatter across the cyclic index seam."""


class SectorLeakageError(ValueError):
    """A QCA state carries weight outside the single-particle sector."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"out-of-sector residual norm {residual:.3e} exceeds tolerance {tolerance:.1e}"
        )
