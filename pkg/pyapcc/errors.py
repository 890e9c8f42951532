# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

from . import enums


class APCCException(enums.APCCGlobalErrors, Exception):
    """
    Generic pyapcc exception."""

    def __init__(self, code, detail=None):
        """
        Generates an exception by coercing the given ``code`` to an error
        string if is a number, otherwise assumes it is the message.

        :param code: message or error code
        :param detail: optional text appended to the coded message
        """
        message = code

        self.code = None
        if isinstance(code, int):
            message = self.to_string(code)
            self.code = code

        if detail:
            message = '%s %s' % (message, detail)

        super(APCCException, self).__init__(message)
        self.message = message

    @property
    def infeasible(self):
        """
        Returns whether the exception reports an infeasible or invalid configuration.

        :return: ``True`` for configuration errors, otherwise ``False``.
        """
        return self.code in enums.CONFIGURATION_ERRORS


class APCCInterpException(enums.APCCInterpErrors, APCCException):
    """
    Interpolation exception.
    """
    pass


class APCCCodecException(enums.APCCCodecErrors, APCCException):
    """
    Codec exception.
    """
    pass


class APCCInsufficientResults(APCCCodecException):
    """
    Raised when a set is decoded with fewer results than its recovery threshold.
    """

    def __init__(self, deficit):
        """
        :param deficit: number of missing results
        """
        super(APCCInsufficientResults, self).__init__(enums.APCCCodecErrors.INSUFFICIENT_RESULTS,
                                                      '(%d missing)' % deficit)
        self.deficit = deficit


class APCCPartitionException(enums.APCCPartitionErrors, APCCException):
    """
    Partition optimizer exception.
    """
    pass


class APCCSimulationException(enums.APCCSimulationErrors, APCCException):
    """
    Straggler simulator exception.
    """
    pass
