class PreconditionError(ValueError):
    """An operation was called outside its domain (e.g. even n for a Sun identity)."""
