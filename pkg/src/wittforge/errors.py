"""Exception hierarchy shared by all wittforge layers."""


class WittForgeError(Exception):
    """Base class for all errors raised by this package."""


class SpecMismatchError(WittForgeError):
    """Operands belong to different tower specifications."""


class RepresentationError(WittForgeError):
    """Operands use incompatible representations or moduli."""


class NotDivisibleError(WittForgeError):
    """Exact division failed: some monomial lacks the required x-power."""


class InsufficientDepthError(WittForgeError):
    """The reliable-depth ledger does not cover the requested coordinate."""


class NonRepresentableError(WittForgeError):
    """A value exists in the completed ring but not in this finite presentation."""


class ResourceLimitError(WittForgeError):
    """A universal polynomial exceeded the configured monomial cap."""


class CacheCorruptError(WittForgeError):
    """A disk-cached universal polynomial failed validation."""

    def __init__(self, path, message="cache file failed validation"):
        super().__init__(f"{message}: {path}")
        self.path = str(path)


class ConfigError(WittForgeError):
    """Invalid run configuration (bad prime, scenario, or parameter combination)."""
