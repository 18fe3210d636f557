class DomainError(ValueError):
    """Input outside an operation's mathematical domain (CLI exit status 1)."""
