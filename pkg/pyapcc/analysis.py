# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Closed-form figures of merit: encoding rate, capacity, division bound,
approximation error bound, multilinear construction and cost terms.
"""

import itertools
import math

import numpy as np

from . import enums
from . import errors
from . import interp

# Largest degree accepted by ``multilinearize`` (2^d evaluations per call).
MAX_MULTILINEAR_DEGREE = 20


def _check_stragglers(n, s):
    if n < 1 or s < 0 or s >= n:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Need 0 <= S < N.')


def encoding_rate(k, n, s):
    """
    Returns the encoding rate ``K / (N - S)``.

    :param k: number of subtasks
    :param n: number of workers
    :param s: number of tolerated stragglers

    :return: rate as a float.

    :raise:
      APCCException: if ``S >= N``.
    """
    _check_stragglers(n, s)
    return k / float(n - s)


def capacity(n, s, l, d):
    """
    Returns the supremum of the encoding rate over linear schemes.

    :param n: number of workers
    :param s: number of tolerated stragglers
    :param l: collusion tolerance
    :param d: polynomial degree

    :return: tuple ``(capacity, feasible)``; an infeasible system yields ``(0.0, False)``.

    :raise:
      APCCException: if ``S >= N``.
    """
    _check_stragglers(n, s)
    if l > 0:
        numerator = n - s - d * (l - 1) - 1
        if numerator <= 0:
            return 0.0, False
        return numerator / float(d * (n - s)), True
    return max((n - s + d - 1) / float(d * (n - s)), n / float((n - s) * (s + 1))), True


def max_divisions(n, s, l, d):
    """
    Returns the largest number of task divisions the system supports.

    :param n: number of workers
    :param s: number of tolerated stragglers
    :param l: collusion tolerance
    :param d: polynomial degree

    :return: tuple ``(divisions, feasible)``, feasible when at least one division fits.

    :raise:
      APCCException: if ``S >= N``.
    """
    _check_stragglers(n, s)
    if l > 0:
        divisions = (n - s - 1) // d - l + 1
    else:
        divisions = max((n - s + d - 1) // d, n // (s + 1))
    return divisions, divisions >= 1


def approx_error_bound(n, received, second_deriv_norm, first_deriv_norm):
    """
    Returns the upper bound on the approximate-decoding error.

    ``Gamma = (N-R+1)(N-R+3) pi^2 / 4``; the bound is
    ``2 (1 + Gamma) sin((N-R+1) pi / (2(N-1)))`` times ``||h''||`` for even ``R``
    and times ``||h''|| + ||h'||`` for odd ``R``.

    :param n: number of workers
    :param received: number of received results ``R``, ``3 < R <= N``
    :param second_deriv_norm: sup norm of ``h''`` on ``[-1, 1]``
    :param first_deriv_norm: sup norm of ``h'`` on ``[-1, 1]``

    :return: bound as a float.

    :raise:
      APCCException: on ``R <= 3``, ``R > N`` or a negative norm.
    """
    if received <= 3 or received > n:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Need 3 < R <= N.')
    if second_deriv_norm < 0 or first_deriv_norm < 0:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Norms must be non-negative.')

    missing = n - received
    gamma = (missing + 1) * (missing + 3) * math.pi ** 2 / 4.0
    factor = 2.0 * (1.0 + gamma) * math.sin((missing + 1) * math.pi / (2.0 * (n - 1)))
    if received % 2 == 0:
        return factor * second_deriv_norm
    return factor * (second_deriv_norm + first_deriv_norm)


def multilinearize(f, d):
    """
    Builds the multilinear function of ``d`` blocks derived from ``f``.

    ``f'(D_1..D_d) = sum_{T subset [1:d]} (-1)^|T| f(sum_{k in T} D_k)``

    The empty subset contributes ``f`` of the zero block.  For ``f`` of
    degree ``d`` every term of lower degree cancels, leaving ``(-1)^d d!``
    times the top multilinear coefficient.

    :param f: function of one block
    :param d: number of arguments

    :return: function of ``d`` blocks.

    :raise:
      APCCException: if ``d < 1``.
      APCCCodecException: if ``d`` exceeds ``MAX_MULTILINEAR_DEGREE``.
    """
    if d < 1:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Degree must be positive.')
    if d > MAX_MULTILINEAR_DEGREE:
        raise errors.APCCCodecException(enums.APCCCodecErrors.COMPLEXITY_GUARD, '(2^%d evaluations)' % d)

    def multilinear(*blocks):
        if len(blocks) != d:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Expected %d arguments, got %d.' % (d, len(blocks)))
        stacked = interp.stack_blocks(blocks)
        total = np.zeros_like(interp.as_block(f(np.zeros_like(stacked[0]))))
        for size in range(d + 1):
            sign = -1.0 if size % 2 else 1.0
            for subset in itertools.combinations(range(d), size):
                argument = np.sum(stacked[list(subset)], axis=0) if subset else np.zeros_like(stacked[0])
                total = total + sign * interp.as_block(f(argument))
        return total

    return multilinear


def communication_costs(k, r, kdiv, n, l, d):
    """
    Returns the communication cost terms of APCC and LCC.

    Input sizes are expressed in units of the entire input ``x``.

    :param k: number of APCC subtasks
    :param r: number of APCC sets
    :param kdiv: number of LCC divisions ``K'``
    :param n: number of workers
    :param l: collusion tolerance
    :param d: polynomial degree

    :return: dictionary of cost terms.
    """
    lcc_feedback = d * (kdiv + l - 1) + 1
    return {
        'apcc_input': r * n / float(k),
        'lcc_input': n / float(kdiv),
        'apcc_feedback': d * (k + r * l - r) + r,
        'lcc_feedback': lcc_feedback,
        'lcc_feedback_equivalent': r * lcc_feedback,
    }


def operation_counts(k, r, kdiv, n):
    """
    Returns the number of encode and decode operations of APCC and LCC.

    :param k: number of APCC subtasks
    :param r: number of APCC sets
    :param kdiv: number of LCC divisions ``K'``
    :param n: number of workers

    :return: dictionary of operation counts.
    """
    return {
        'apcc_encode': n * r,
        'lcc_encode': n,
        'apcc_decode': k,
        'lcc_decode': kdiv,
    }
