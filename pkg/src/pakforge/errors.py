"""Exception hierarchy shared by every pakforge module.

Each exception carries the process exit code the command line maps it to.
"""

EXIT_FAILURE = 1
EXIT_UNAUTHORIZED = 2
EXIT_INVALID_INPUT = 3
EXIT_PRECONDITION = 4
EXIT_USAGE = 64


class PakforgeError(Exception):
    exit_code = EXIT_FAILURE


class InvalidInput(PakforgeError):
    exit_code = EXIT_INVALID_INPUT


class PreconditionFailed(PakforgeError):
    exit_code = EXIT_PRECONDITION


class InvalidName(InvalidInput):
    pass


class UnknownLevel(InvalidInput):
    def __init__(self, level):
        super().__init__(f"unknown level {level!r}; expected one of workspace, system, public")
        self.level = level


class ConfigParseError(InvalidInput):
    def __init__(self, path, line, reason):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason


class MissingAnswer(InvalidInput):
    def __init__(self, key):
        super().__init__(f"no value available for {key!r}")
        self.key = key


class ValidationFailed(InvalidInput):
    def __init__(self, key, reason):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


class UnknownPlaceholder(InvalidInput):
    def __init__(self, key, location):
        super().__init__(f"unknown placeholder {key!r} at {location}")
        self.key = key
        self.location = location


class IoFailure(PakforgeError):
    def __init__(self, path, cause):
        super().__init__(f"{path}: {cause}")
        self.path = path
        self.cause = cause


class RootExists(PreconditionFailed):
    def __init__(self, path):
        super().__init__(f"{path} already exists")
        self.path = path


class InvalidSection(InvalidInput):
    pass


class AlreadyExists(PreconditionFailed):
    pass


class FragmentParseError(InvalidInput):
    def __init__(self, file, line, reason):
        super().__init__(f"{file}:{line}: {reason}")
        self.file = file
        self.line = line


class DuplicateVersion(PreconditionFailed):
    pass


class InvalidTag(InvalidInput):
    pass


class Unauthorized(PakforgeError):
    exit_code = EXIT_UNAUTHORIZED


class NonMonotonicTag(PreconditionFailed):
    def __init__(self, tag, existing_max):
        super().__init__(f"tag {tag} does not exceed existing tag {existing_max}")
        self.tag = tag
        self.existing_max = existing_max


class UnknownPath(InvalidInput):
    pass


class InvalidAction(InvalidInput):
    pass
