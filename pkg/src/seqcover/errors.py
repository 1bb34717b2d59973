class ResourceGuardError(RuntimeError):
    """A configured size guard would be exceeded."""
