"""Exception hierarchy shared across the package."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPath(EngineError):
    """Path string is not an acceptable normalized absolute path."""


class NotFound(EngineError):
    """A path component does not exist."""


class NotADirectory(EngineError):
    """Operation requires a directory but the node is a file."""


class AlreadyExists(EngineError):
    """Sibling name already in use."""


class PermissionDenied(EngineError):
    """Traversal permission missing on an ancestor directory."""


class Unsupported(EngineError):
    """Structurally valid request the model deliberately refuses (e.g. renaming the root)."""


class SpecInvalid(EngineError):
    """Tree specification failed validation."""


class TraceMalformed(EngineError):
    """Trace file or event failed validation."""


class ConfigError(EngineError):
    """Run configuration failed validation."""


class ContractViolation(EngineError):
    """Internal protocol misuse: double token release, use after reclaim, unpublished pool."""
