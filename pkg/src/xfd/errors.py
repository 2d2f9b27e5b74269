"""Exception hierarchy shared by every module of the package."""


class XfdError(Exception):
    """Base class; the CLI maps any subclass to exit status 2."""


class UnknownNode(XfdError, KeyError):
    pass


class NotAnEndNode(XfdError, ValueError):
    pass


class PathSyntaxError(XfdError, ValueError):
    pass


class InconsistentInput(XfdError, ValueError):
    def __init__(self, message, problems=()):
        super().__init__(message)
        self.problems = list(problems)


class PathNotDeclared(XfdError, ValueError):
    pass


class NonUnaryInput(XfdError, ValueError):
    pass


class IncompleteInput(XfdError, ValueError):
    pass


class WrongKind(XfdError, ValueError):
    pass


class UnsupportedConstruction(XfdError, ValueError):
    """A canonical witness tree cannot be built (e.g. duplicated root attribute)."""


class ActuallyImplied(XfdError, ValueError):
    pass


class ConstructionFailed(XfdError, RuntimeError):
    pass


class ParseError(XfdError, ValueError):
    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


class UnsupportedConstruct(ParseError):
    pass


class KindConflict(ParseError):
    pass
