"""Exception types mapped to CLI exit codes."""


class PosnerSpinError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(PosnerSpinError):
    """Invalid or unknown configuration input (unknown key, bad value, bad label)."""


class UnknownPresetError(PosnerSpinError):
    """A preset name that is not registered."""


class DimensionGuardError(PosnerSpinError):
    """A requested computation exceeds the desk-scale dimension guard."""
