"""Shared exception base so the CLI can map domain failures to one exit code."""


class EngineError(Exception):
    """Base class for every domain error raised by this package."""
