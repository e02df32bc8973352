"""Exception types shared across the package."""


class OwnVoiceError(Exception):
    """Base class for all errors raised by this package."""


class DataError(OwnVoiceError, ValueError):
    """Invalid data or arguments: shape/rate mismatches, contract violations."""


class FileFormatError(OwnVoiceError):
    """A binary container or manifest file is corrupt or malformed."""


class UnsupportedVersionError(FileFormatError):
    """A container file declares a version this build does not understand."""
