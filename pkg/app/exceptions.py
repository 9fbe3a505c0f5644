class WstarError(Exception):
    """Base class of every error raised by the wstar library."""

    exit_code = 3
    status_code = 422

    def __init__(self, message=None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class DocumentError(WstarError):
    """A set, config, trace or vector document could not be parsed."""

    exit_code = 2
    status_code = 400


class PreconditionError(WstarError):
    exit_code = 3
    status_code = 422


class UnboundedInput(PreconditionError):
    pass


class NotInNormalizingSet(PreconditionError):
    pass


class NotAVertex(PreconditionError):
    pass


class BadParameter(PreconditionError):
    pass


class TargetOutsidePolar(PreconditionError):
    pass


class VariantPreconditionViolated(PreconditionError):
    pass


class NotNested(PreconditionError):
    pass


class NonConvexInput(PreconditionError):
    pass
