# -*- coding: utf-8 -*-


class TSGError(Exception):
    pass


class InstanceFormatError(TSGError):
    """Instance document could not be read.

    :param str message: Description of the problem
    :param int line: Line number in the source document, if known
    :param str path: JSON path of the offending field, if known

    """
    def __init__(self, message, line=None, path=None):
        self.reason = message
        self.line = line
        self.path = path
        where = []
        if line is not None:
            where.append('line {0}'.format(line))
        if path:
            where.append(path)
        if where:
            message = '{0}: {1}'.format(', '.join(where), message)
        super(InstanceFormatError, self).__init__(message)

    def __reduce__(self):
        return self.__class__, (self.reason, self.line, self.path)


class ValidationError(TSGError):

    def __init__(self, report):
        self.report = report
        super(ValidationError, self).__init__(str(report))

    def __reduce__(self):
        return self.__class__, (self.report,)


class ConfigError(TSGError, ValueError):
    pass


class CapExceededError(TSGError):

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super(CapExceededError, self).__init__(
            '{0} of size {1} exceeds cap {2}; use heuristic mode'.format(what, size, cap)
        )

    # Workers raise these; the pool pickles them back to the parent
    def __reduce__(self):
        return self.__class__, (self.what, self.size, self.cap)


class NotEquilibriumError(TSGError):
    pass
