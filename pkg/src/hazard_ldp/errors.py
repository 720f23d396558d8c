"""Exception types shared by the library and the command line."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class SizeError(DomainError):
    """A size parameter exceeds a supported cap."""


class InputError(ValueError):
    """Malformed user-supplied data file."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
