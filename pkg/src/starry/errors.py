"""Exception types raised across the package."""


class StarryError(Exception):
    """Base class for all package errors."""


class InvalidArgument(StarryError, ValueError):
    pass


class InvalidExcursion(InvalidArgument):
    """A sampled path violates the excursion invariants."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ResolutionError(StarryError):
    """A window is too coarse for the requested construction."""


class SubsetError(StarryError, KeyError):
    """A grid index was requested that is not part of a sampled subset."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InvalidProfile(InvalidArgument):
    """A distortion profile is not monotone where it was queried."""


class InvalidInputFile(StarryError):
    pass
