"""Exception hierarchy shared by all submodules."""


class FieldnetError(Exception):
    pass


class ConfigurationError(FieldnetError, ValueError):
    """Invalid profile, preset file, plan or mission configuration.

    ``keys`` lists the offending configuration keys when known.
    """

    def __init__(self, message, keys=()):
        super().__init__(message)
        self.keys = tuple(keys)


class DomainError(FieldnetError, ValueError):
    """Argument outside the domain of a numeric operation."""


class StatisticsError(FieldnetError, ValueError):
    """No present samples to compute statistics from."""


class SessionError(FieldnetError, RuntimeError):
    """Transport closed or unusable during a measurement session."""


class ProtocolError(FieldnetError, RuntimeError):
    """A run inside a repeated protocol failed.

    Carries the records completed before the failure in ``partial``.
    """

    def __init__(self, message, run_index, partial):
        super().__init__(message)
        self.run_index = run_index
        self.partial = list(partial)
