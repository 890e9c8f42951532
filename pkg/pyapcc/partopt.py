# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Hierarchical task partitioning.

Set ``i`` is processed by every worker after its ``i`` earlier sets, so with a
persistent per-subtask delay ``T`` its results arrive at ``(i+1) T``.  The
optimizer chooses the set sizes ``K_i`` that minimize the largest per-set
completion time ``z = max_i t_i``.
"""

import copy
import itertools
import logging
import math

import numpy as np
from scipy import optimize as sciopt
from scipy.special import comb

from . import enums
from . import errors
from .structs import PartitionSolution

logger = logging.getLogger(__name__)

# Largest number of compositions ``brute_force`` enumerates.
BRUTE_FORCE_LIMIT = int(1e7)

# Bisection settings of ``solve_relaxed``.
BISECT_XTOL = 1e-15
BISECT_MAXITER = 200
BRACKET_EXPANSION = 1e6


def coded_threshold(k_i, model):
    """
    Returns ``ceil(degree (K_i + L - 1)) + 1``.

    :param k_i: set size
    :param model: ``OptimModel``

    :return: integer threshold.
    """
    return int(math.ceil(model.degree * (k_i + model.l - 1) - 1e-9)) + 1


def uncoded_threshold(k_i, model):
    """
    Returns ``N - floor(N / K_i) + 1``.

    :param k_i: set size
    :param model: ``OptimModel``

    :return: integer threshold.
    """
    return model.n - model.n // k_i + 1


def threshold(k_i, model):
    """
    Returns the recovery threshold of a set of ``k_i`` subtasks under ``model``.

    :param k_i: set size
    :param model: ``OptimModel``

    :return: integer threshold.
    """
    if model.threshold_kind == enums.ThresholdKind.UNCODED:
        return uncoded_threshold(k_i, model)
    return coded_threshold(k_i, model)


def _nocancel_time(h, i, model):
    if h >= model.n:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_SET,
                                            '(set %d needs %s of %d results)' % (i, h, model.n))
    return (i + 1) * (model.a - math.log1p(-h / float(model.n)) / model.mu)


def _cancel_time(h, i, model):
    remaining = model.n - h + 1
    if remaining <= 0:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_SET,
                                            '(set %d needs %s of %d results)' % (i, h, model.n))
    return (i + 1) / (model.mu * remaining) + model.a * (i + 1)


def set_time_nocancel(k_i, i, model):
    """
    Returns the smallest time at which set ``i`` is expected to hold its
    threshold of results when no set is cancelled.

    ``t_i = (i+1) (a - ln(1 - H_i/N) / mu)``

    :param k_i: set size
    :param i: set index
    :param model: ``OptimModel``

    :return: time in seconds.

    :raise:
      APCCPartitionException: if ``H_i >= N``.
    """
    return _nocancel_time(threshold(k_i, model), i, model)


def set_time_cancel(k_i, i, model):
    """
    Returns the expected completion time of set ``i`` with cancellation.

    ``t_i = (i+1) / (mu (N - H_i + 1)) + a (i+1)``

    :param k_i: set size
    :param i: set index
    :param model: ``OptimModel``

    :return: time in seconds.

    :raise:
      APCCPartitionException: if ``H_i > N``.
    """
    return _cancel_time(threshold(k_i, model), i, model)


def set_time(k_i, i, model):
    """
    Returns the per-set time matching ``model.cancellation``.
    """
    if model.cancellation:
        return set_time_cancel(k_i, i, model)
    return set_time_nocancel(k_i, i, model)


def set_cap(model):
    """
    Returns the largest set size with a finite set time.

    :param model: ``OptimModel``

    :return: cap in ``[0, model.k]``; zero when not even a single subtask fits.
    """
    cap = 0
    for k_i in range(1, model.k + 1):
        h = threshold(k_i, model)
        if h > model.n or (h == model.n and not model.cancellation):
            break
        cap = k_i
    return cap


def per_set_times(sizes, model, time_fn=None):
    """
    Returns the per-set times of an integer partition.

    :param sizes: set sizes
    :param model: ``OptimModel``
    :param time_fn: optional ``(k_i, i, model) -> t`` replacing ``set_time``

    :return: list of times.
    """
    time_fn = set_time if time_fn is None else time_fn
    return [time_fn(k_i, i, model) for i, k_i in enumerate(sizes)]


def _relaxed_threshold(k_i, model):
    return model.degree * (k_i + model.l - 1) + 1


def relaxed_set_times(sizes, model):
    """
    Returns the per-set times of real-valued set sizes, without rounding the
    thresholds.

    :param sizes: real set sizes
    :param model: ``OptimModel``

    :return: list of times.
    """
    time_fn = _cancel_time if model.cancellation else _nocancel_time
    return [time_fn(_relaxed_threshold(k_i, model), i, model) for i, k_i in enumerate(sizes)]


def _relaxed_rhs(model):
    n, k, l, r, degree = model.n, model.k, model.l, model.r, model.degree
    if model.cancellation:
        return model.mu * (r * n - degree * (k + r * l - r))
    return r - (degree * (k + r * l - r) + r) / float(n)


def relaxed_lhs(z, model):
    """
    Returns the left-hand side of the implicit equation solved by ``solve_relaxed``.

    :param z: candidate objective
    :param model: ``OptimModel``

    :return: ``sum_i exp(-mu (z/(i+1) - a))`` without cancellation,
             ``sum_i (i+1) / (z - a (i+1))`` with cancellation.
    """
    index = np.arange(1, model.r + 1, dtype=np.float64)
    if model.cancellation:
        return float(np.sum(index / (z - model.a * index)))
    return float(np.sum(np.exp(-model.mu * (z / index - model.a))))


def relaxed_sizes(z, model):
    """
    Returns the real set sizes that make every per-set time equal to ``z``.

    :param z: objective value
    :param model: ``OptimModel``

    :return: numpy array of ``r`` real sizes.
    """
    index = np.arange(1, model.r + 1, dtype=np.float64)
    if model.cancellation:
        remaining = index / (model.mu * (z - model.a * index))
        return (model.n - remaining) / model.degree - model.l + 1
    expected = model.n * (1.0 - np.exp(-model.mu * (z / index - model.a)))
    return (expected - 1.0) / model.degree - model.l + 1


def solve_relaxed(model):
    """
    Solves the continuous relaxation of the partitioning problem.

    All per-set times are equal at the optimum, which reduces the problem to
    one monotone scalar equation in ``z`` solved by bisection.

    :param model: ``OptimModel`` with coded thresholds

    :return: tuple ``(z_star, real_sizes)``.

    :raise:
      APCCException: for uncoded thresholds.
      APCCPartitionException: if the relaxation is infeasible or the root cannot be bracketed.
    """
    if model.threshold_kind != enums.ThresholdKind.CODED:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'The relaxation needs coded thresholds.')

    r = model.r
    rhs = _relaxed_rhs(model)
    if model.cancellation:
        if rhs <= 0:
            raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL,
                                                '(relaxed right-hand side %g <= 0)' % rhs)
        # The last term alone exceeds rhs at lo; the sum is at most rhs/2 at hi.
        lo = model.a * r + r / (2.0 * rhs)
        hi = model.a * r + r * (r + 1) / rhs
    else:
        if not 0 < rhs < r:
            raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL,
                                                '(relaxed right-hand side %g outside (0, %d))' % (rhs, r))
        lo = model.a * r
        if relaxed_lhs(lo, model) < rhs:
            raise errors.APCCPartitionException(enums.APCCPartitionErrors.NUMERIC_ERROR,
                                                '(root below z = %g)' % lo)
        step = r / model.mu
        limit = lo + BRACKET_EXPANSION * max(model.a, step)
        hi = lo + step
        while relaxed_lhs(hi, model) > rhs:
            if hi >= limit:
                raise errors.APCCPartitionException(enums.APCCPartitionErrors.NUMERIC_ERROR,
                                                    '(no bracket up to z = %g)' % limit)
            hi = min(limit, lo + 2.0 * (hi - lo))

    logger.debug('Bisection bracket [%g, %g], rhs %g.', lo, hi, rhs)
    z_star = sciopt.bisect(lambda z: relaxed_lhs(z, model) - rhs, lo, hi,
                           xtol=BISECT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=BISECT_MAXITER)
    return z_star, relaxed_sizes(z_star, model)


def kkt_residuals(model, z, sizes):
    """
    Rebuilds the multipliers of the relaxed problem at ``(z, sizes)`` and
    returns the optimality residuals.

    Without cancellation the constraints read ``H_i - N (1 - e_i) <= 0`` with
    ``e_i = exp(-mu (z/(i+1) - a))`` and all multipliers are equal.  With
    cancellation they read ``t_i - z <= 0`` and the multipliers are
    proportional to ``mu m_i^2 / (d (i+1))`` where ``m_i = N - H_i + 1``.

    :param model: ``OptimModel``
    :param z: objective value
    :param sizes: real set sizes

    :return: dictionary with ``stationarity``, ``primal``, ``slackness`` residuals and the ``multipliers``.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    index = np.arange(1, model.r + 1, dtype=np.float64)
    h = model.degree * (sizes + model.l - 1) + 1

    if model.cancellation:
        remaining = model.n - h + 1
        slope = index * model.degree / (model.mu * remaining ** 2)
        weights = 1.0 / slope
        multipliers = weights / np.sum(weights)
        constraints = index / (model.mu * remaining) + model.a * index - z
        stationarity_z = abs(1.0 - np.sum(multipliers))
        per_set = multipliers * slope
    else:
        e = np.exp(-model.mu * (z / index - model.a))
        dz = model.n * model.mu * e / index
        multipliers = np.full(model.r, 1.0 / np.sum(dz))
        constraints = h - model.n * (1.0 - e)
        stationarity_z = abs(1.0 - np.sum(multipliers * dz))
        per_set = multipliers * model.degree

    nu = -np.mean(per_set)
    return {
        'stationarity': float(stationarity_z + np.max(np.abs(per_set + nu))),
        'primal': float(max(np.max(constraints), 0.0) + abs(np.sum(sizes) - model.k)),
        'slackness': float(np.max(np.abs(multipliers * constraints))),
        'multipliers': multipliers,
    }


def round_and_repair(real_sizes, k, model):
    """
    Rounds real set sizes to a feasible integer partition.

    Largest-remainder rounding with a floor of one; ties go to the lower set
    index.  Sizes above the per-set cap are clamped and the excess moves, one
    unit at a time, to the least-loaded set with room.

    :param real_sizes: ``r`` real sizes
    :param k: total number of subtasks
    :param model: ``OptimModel``

    :return: list of ``r`` integers summing to ``k``.

    :raise:
      APCCPartitionException: if no partition satisfies the caps.
    """
    values = [float(v) for v in real_sizes]
    r = len(values)
    cap = set_cap(model)
    if r < 1 or k < r or cap < 1 or k > r * cap:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL,
                                            '(K = %d, r = %d, cap = %d)' % (k, r, cap))

    sizes = [max(1, int(math.floor(v))) for v in values]
    remainders = [v - s for v, s in zip(values, sizes)]

    deficit = k - sum(sizes)
    while deficit > 0:
        for j in sorted(range(r), key=lambda m: (-remainders[m], m))[:deficit]:
            sizes[j] += 1
            remainders[j] -= 1.0
            deficit -= 1
    while deficit < 0:
        shrinkable = [m for m in range(r) if sizes[m] > 1]
        for j in sorted(shrinkable, key=lambda m: (remainders[m], m))[:-deficit]:
            sizes[j] -= 1
            remainders[j] += 1.0
            deficit += 1

    excess = 0
    for j in range(r):
        if sizes[j] > cap:
            excess += sizes[j] - cap
            sizes[j] = cap
    while excess > 0:
        j = min((m for m in range(r) if sizes[m] < cap), key=lambda m: (sizes[m], m))
        sizes[j] += 1
        excess -= 1
    return sizes


def _check_partition(sizes, model):
    cap = set_cap(model)
    if len(sizes) != model.r or sum(sizes) != model.k or any(not 1 <= s <= cap for s in sizes):
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL,
                                            '(partition %s, cap %d)' % (list(sizes), cap))
    return cap


def mvd(model, initial):
    """
    Maximum value descent over integer partitions.

    Each round moves one subtask out of the slowest set (smallest index on
    ties) into the set whose transfer yields the smallest sorted time
    profile (smallest index on ties).  Rounds stop when no transfer improves
    the profile, at which point no partition has a smaller maximum.

    Every round strictly lowers the sorted profile, but when several sets
    share the maximum a round lowers only one of them, so ``z`` in
    ``history`` may repeat between rounds; it never increases.

    :param model: ``OptimModel``
    :param initial: feasible integer partition

    :return: ``PartitionSolution`` with the objectives of every round in ``history``.

    :raise:
      APCCPartitionException: if ``initial`` is not feasible.
    """
    sizes = [int(k) for k in initial]
    cap = _check_partition(sizes, model)

    times = per_set_times(sizes, model)
    history = [max(times)]
    while True:
        profile = sorted(times, reverse=True)
        j = times.index(profile[0])
        best = None
        if sizes[j] > 1:
            for l in range(model.r):
                if l == j or sizes[l] >= cap:
                    continue
                candidate = list(times)
                candidate[j] = set_time(sizes[j] - 1, j, model)
                candidate[l] = set_time(sizes[l] + 1, l, model)
                candidate_profile = sorted(candidate, reverse=True)
                if best is None or candidate_profile < best[0]:
                    best = (candidate_profile, l, candidate)
        if best is None or not best[0] < profile:
            break

        _, l, times = best
        sizes[j] -= 1
        sizes[l] += 1
        history.append(max(times))
        logger.debug('MVD moved one subtask from set %d to set %d, z = %.6g.', j, l, history[-1])

    return PartitionSolution(sizes, times, history)


def brute_force(model, time_fn=None):
    """
    Exhaustive search over all compositions of ``K`` into ``r`` positive parts.

    :param model: ``OptimModel``
    :param time_fn: optional ``(k_i, i, model) -> t`` replacing ``set_time``

    :return: ``PartitionSolution`` of the first optimal composition in lexicographic order.

    :raise:
      APCCPartitionException: if the search space exceeds ``BRUTE_FORCE_LIMIT`` or nothing is feasible.
    """
    k, r = model.k, model.r
    if r > k:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL, '(r > K)')
    count = comb(k - 1, r - 1, exact=True)
    if count > BRUTE_FORCE_LIMIT:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.TOO_LARGE, '(%d compositions)' % count)

    time_fn = set_time if time_fn is None else time_fn
    table = np.full((r, k + 1), np.inf)
    for i in range(r):
        for k_i in range(1, k - r + 2):
            try:
                table[i, k_i] = time_fn(k_i, i, model)
            except errors.APCCPartitionException:
                break

    best, best_sizes = np.inf, None
    rows = np.arange(r)
    for cuts in itertools.combinations(range(1, k), r - 1):
        sizes = np.diff((0,) + cuts + (k,))
        z = np.max(table[rows, sizes])
        if z < best:
            best, best_sizes = z, sizes

    if best_sizes is None:
        raise errors.APCCPartitionException(enums.APCCPartitionErrors.INFEASIBLE_MODEL)
    return PartitionSolution(best_sizes, table[rows, best_sizes])


def even_split(model):
    """
    Returns the most balanced partition that satisfies the per-set cap.

    :param model: ``OptimModel``

    :return: list of ``r`` integers.
    """
    return round_and_repair([model.k / float(model.r)] * model.r, model.k, model)


def optimize(model):
    """
    Default partitioning pipeline: relaxed solution, rounding, then MVD.

    Falls back to an even split when the relaxation cannot be solved.

    :param model: ``OptimModel``

    :return: ``PartitionSolution``

    :raise:
      APCCPartitionException: if the model admits no feasible partition.
    """
    try:
        _, real_sizes = solve_relaxed(model)
        initial = round_and_repair(real_sizes, model.k, model)
    except errors.APCCException as e:
        if e.code == enums.APCCPartitionErrors.INFEASIBLE_MODEL:
            raise
        logger.warning('Relaxed start unavailable (%s), starting from an even split.', e.message)
        initial = even_split(model)
    solution = mvd(model, initial)
    logger.info('Partition for %s: %s', model, solution)
    return solution


def _rating(sizes, model):
    try:
        return max(per_set_times(sizes, model))
    except errors.APCCPartitionException:
        return math.inf


def select_partition(model):
    """
    Returns the partition a simulation of ``model`` should run.

    Without cancellation this is ``optimize(model)``.  With cancellation the
    expected-delay model of a set only counts the first of the workers still
    racing for its last result, which rates large early sets too cheaply.
    Cancellation never delays a set on the same draws, so the partition is
    also rated by the times without cancellation and the optimum without
    cancellation replaces the cancellation optimum unless the latter rates
    strictly faster.

    :param model: ``OptimModel``

    :return: ``PartitionSolution`` with per-set times under ``model``.

    :raise:
      APCCPartitionException: if the model admits no feasible partition.
    """
    solution = optimize(model)
    if not model.cancellation:
        return solution

    plain = copy.copy(model)
    plain.cancellation = False
    try:
        fallback = optimize(plain)
    except errors.APCCPartitionException as e:
        logger.debug('No partition without cancellation (%s).', e.message)
        return solution

    if _rating(fallback.set_sizes, plain) <= _rating(solution.set_sizes, plain):
        logger.info('Running %s instead of %s with cancellation.', list(fallback.set_sizes),
                    list(solution.set_sizes))
        return PartitionSolution(fallback.set_sizes, per_set_times(fallback.set_sizes, model))
    return solution
