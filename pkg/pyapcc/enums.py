# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT


class APCCGlobalErrors(object):
    """
    Enumeration for the error codes which any pyapcc operation can raise.
    """
    UNSPECIFIED_ERROR = -1
    INVALID_ARGUMENT = -256

    @classmethod
    def to_string(cls, error_code: int):
        """
        Returns the string message for the given ``error_code``.

        :param error_code: error code to convert

        :return:
          An error string corresponding to the error code.

        :raise:
          ValueError: if the error code is invalid.
        """
        if error_code == cls.INVALID_ARGUMENT:
            return 'Invalid argument.'
        elif error_code == cls.UNSPECIFIED_ERROR:
            return 'Unspecified error.'
        raise ValueError('Invalid error code: %d' % error_code)


class APCCInterpErrors(APCCGlobalErrors):
    """
    Enumeration for the error codes generated by the interpolation kernels.
    """

    DEGENERATE_NODES = -2

    @classmethod
    def to_string(cls, error_code: int):
        """
        Returns the string message for the given ``error_code``.

        :param error_code: error code to convert

        :return:
          An error string corresponding to the error code.

        :raise:
          ValueError: if the error code is invalid.
        """
        if error_code == cls.DEGENERATE_NODES:
            return 'Interpolation nodes are not pairwise distinct.'
        return super(APCCInterpErrors, cls).to_string(error_code)


class APCCCodecErrors(APCCGlobalErrors):
    """
    Enumeration for the error codes generated while encoding or decoding.
    """

    PARTITION_SUM = -3
    INFEASIBLE_THRESHOLD = -4
    INSUFFICIENT_RESULTS = -5
    COMPLEXITY_GUARD = -6

    @classmethod
    def to_string(cls, error_code: int):
        """
        Returns the string message for the given ``error_code``.

        :param error_code: error code to convert

        :return:
          An error string corresponding to the error code.

        :raise:
          ValueError: if the error code is invalid.
        """
        if error_code == cls.PARTITION_SUM:
            return 'Set sizes do not sum to the number of subtasks.'
        elif error_code == cls.INFEASIBLE_THRESHOLD:
            return 'Recovery threshold exceeds the number of workers.'
        elif error_code == cls.INSUFFICIENT_RESULTS:
            return 'Not enough results to decode the set.'
        elif error_code == cls.COMPLEXITY_GUARD:
            return 'Requested construction needs too many evaluations.'
        return super(APCCCodecErrors, cls).to_string(error_code)


class APCCPartitionErrors(APCCGlobalErrors):
    """
    Enumeration for the error codes generated by the partition optimizer.
    """

    INFEASIBLE_SET = -7
    INFEASIBLE_MODEL = -8
    NUMERIC_ERROR = -9
    TOO_LARGE = -10

    @classmethod
    def to_string(cls, error_code: int):
        """
        Returns the string message for the given ``error_code``.

        :param error_code: error code to convert

        :return:
          An error string corresponding to the error code.

        :raise:
          ValueError: if the error code is invalid.
        """
        if error_code == cls.INFEASIBLE_SET:
            return 'Set cannot be recovered with the available workers.'
        elif error_code == cls.INFEASIBLE_MODEL:
            return 'No feasible partition exists for the model.'
        elif error_code == cls.NUMERIC_ERROR:
            return 'Root bracketing failed.'
        elif error_code == cls.TOO_LARGE:
            return 'Exhaustive search space is too large.'
        return super(APCCPartitionErrors, cls).to_string(error_code)


class APCCSimulationErrors(APCCGlobalErrors):
    """
    Enumeration for the error codes generated by the straggler simulator.
    """

    INFEASIBLE_THRESHOLD = -11

    @classmethod
    def to_string(cls, error_code: int):
        """
        Returns the string message for the given ``error_code``.

        :param error_code: error code to convert

        :return:
          An error string corresponding to the error code.

        :raise:
          ValueError: if the error code is invalid.
        """
        if error_code == cls.INFEASIBLE_THRESHOLD:
            return 'Strategy threshold exceeds the number of results a trial can return.'
        return super(APCCSimulationErrors, cls).to_string(error_code)


# Codes reported by the command-line front end as a configuration problem.
CONFIGURATION_ERRORS = frozenset([
    APCCGlobalErrors.INVALID_ARGUMENT,
    APCCCodecErrors.PARTITION_SUM,
    APCCCodecErrors.INFEASIBLE_THRESHOLD,
    APCCPartitionErrors.INFEASIBLE_SET,
    APCCPartitionErrors.INFEASIBLE_MODEL,
    APCCSimulationErrors.INFEASIBLE_THRESHOLD,
])


class NodeKind(object):
    """
    Enumeration for the families of interpolation nodes.
    """
    CHEBYSHEV_FIRST = 'chebyshev-first'
    CHEBYSHEV_SECOND = 'chebyshev-second'
    ARBITRARY = 'arbitrary'

    ALL = (CHEBYSHEV_FIRST, CHEBYSHEV_SECOND, ARBITRARY)


class DecodeMode(object):
    """
    Enumeration for the codec modes.

    ``ACCURATE`` decodes with barycentric polynomial interpolation,
    ``APPROXIMATE`` with Berrut's rational interpolant and ``UNCODED`` reads
    results computed directly on the data nodes.
    """
    ACCURATE = 'accurate'
    APPROXIMATE = 'approximate'
    UNCODED = 'uncoded'

    ALL = (ACCURATE, APPROXIMATE, UNCODED)


class SamplingMode(object):
    """
    Enumeration for the way a worker's subtask delays are drawn.
    """
    PERSISTENT = 'persistent'
    IID = 'iid'

    ALL = (PERSISTENT, IID)


class StrategyKind(object):
    """
    Enumeration for the simulated coding strategies.
    """
    APCC = 'apcc'
    LCC = 'lcc'
    LCC_MMC = 'lcc-mmc'
    BACC = 'bacc'

    ALL = (APCC, LCC, LCC_MMC, BACC)


class ThresholdKind(object):
    """
    Enumeration for recovery threshold formulas used by the partition optimizer.
    """
    CODED = 'coded'
    UNCODED = 'uncoded'

    ALL = (CODED, UNCODED)
