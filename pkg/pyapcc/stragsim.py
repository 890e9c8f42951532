# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Monte Carlo straggler simulator.

Every worker executes its subtasks back to back.  A subtask takes
``a + Exp(mu)`` seconds; in persistent mode a worker draws once and keeps
that duration for all its subtasks, in iid mode every subtask is drawn
afresh.  Completion instants are order statistics of the per-worker finish
times, which the kernels below evaluate on whole chunks of trials at once.
"""

import logging
import math
import multiprocessing

import numpy as np
import psutil

from . import enums
from . import errors
from . import partopt
from .codec import make_plan
from .structs import DelayModel, OptimModel, SimOutcome, StrategyConfig

logger = logging.getLogger(__name__)

# Trials simulated per work unit; fixed so results do not depend on ``jobs``.
CHUNK_SIZE = 1000


def trial_rng(master_seed, trial):
    """
    Returns the random generator of one trial.

    :param master_seed: non-negative master seed
    :param trial: trial index

    :return: ``numpy.random.Generator`` seeded from ``(master_seed, trial)``.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def sample_subtask_delay(model, rng):
    """
    Draws one subtask delay ``a + Exp(mu)``.

    :param model: ``DelayModel``
    :param rng: ``numpy.random.Generator``

    :return: delay in seconds.
    """
    return model.a + rng.exponential(1.0 / model.mu)


def draw_durations(model, n, r, rng):
    """
    Draws the subtask durations of ``n`` workers running ``r`` subtasks each.

    :param model: ``DelayModel``
    :param n: number of workers
    :param r: subtasks per worker
    :param rng: ``numpy.random.Generator``

    :return: ``(n, r)`` array of durations.
    """
    if model.sampling_mode == enums.SamplingMode.PERSISTENT:
        base = model.a + rng.exponential(1.0 / model.mu, size=n)
        return np.repeat(base[:, None], r, axis=1)
    return model.a + rng.exponential(1.0 / model.mu, size=(n, r))


def _kth_smallest(values, k):
    return np.partition(values, k - 1, axis=-1)[..., k - 1]


def apcc_completion(durations, thresholds, cancellation, counts=False):
    """
    Returns the per-set completion times of APCC.

    Without cancellation set ``i`` completes at the ``H_i``-th smallest
    cumulative finish time.  With cancellation a worker still busy with a
    completed set abandons it at the completion instant and skips any later
    subtask of a set that is already complete.

    :param durations: ``(trials, N, r)`` array of subtask durations
    :param thresholds: ``r`` recovery thresholds
    :param cancellation: whether completed sets are cancelled
    :param counts: also return the per-worker result counts

    :return: ``(trials, r)`` array of set completion times, and with ``counts``
      a ``(trials, N)`` array of the results each worker returned before its
      set completed.
    """
    trials, n, r = durations.shape
    completion = np.empty((trials, r))
    returned = np.zeros((trials, n), dtype=np.int64)
    if not cancellation:
        finish = np.cumsum(durations, axis=2)
        for i, h in enumerate(thresholds):
            completion[:, i] = _kth_smallest(finish[:, :, i], h)
            returned += finish[:, :, i] <= completion[:, i, None]
    else:
        start = np.zeros((trials, n))
        for i, h in enumerate(thresholds):
            finish = start + durations[:, :, i]
            done = _kth_smallest(finish, h)
            completion[:, i] = done
            returned += finish <= done[:, None]
            start = np.minimum(finish, np.maximum(start, done[:, None]))
    return (completion, returned) if counts else completion


def baseline_completion(durations, threshold, counts=False):
    """
    Returns the instant the ``threshold``-th result of any worker and position arrives.

    :param durations: ``(trials, N, m)`` array of subtask durations
    :param threshold: number of results awaited
    :param counts: also return the per-worker result counts

    :return: ``(trials,)`` array of completion times, and with ``counts`` a
      ``(trials, N)`` array of the results each worker returned by then.
    """
    finish = np.cumsum(durations, axis=2)
    completion = _kth_smallest(finish.reshape(finish.shape[0], -1), threshold)
    if not counts:
        return completion
    returned = np.sum(finish <= completion[:, None, None], axis=2)
    return completion, returned


def _validate(cfg, model):
    if model.divisions != cfg.divisions:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Delay model has %d divisions, strategy needs %d.'
                                   % (model.divisions, cfg.divisions))
    if cfg.kind == enums.StrategyKind.LCC_MMC and cfg.l > 0:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'LCC-MMC cannot pad (L must be 0).')

    capacity = cfg.n * (cfg.r if cfg.kind == enums.StrategyKind.LCC_MMC else 1)
    thresholds = cfg.thresholds()
    if any(h > capacity or h < 1 for h in thresholds):
        raise errors.APCCSimulationException(enums.APCCSimulationErrors.INFEASIBLE_THRESHOLD,
                                             '(%s with thresholds %s)' % (cfg, thresholds))
    return thresholds


def _simulate(cfg, model, rngs):
    """
    Simulates one trial per generator.

    :return: tuple of ``(trials,)`` delays, ``(trials, r)`` set completions or
      ``None``, and ``(trials, N)`` per-worker result counts.
    """
    thresholds = _validate(cfg, model)
    durations = np.stack([draw_durations(model, cfg.n, cfg.r, rng) for rng in rngs])
    if cfg.kind == enums.StrategyKind.APCC:
        completion, returned = apcc_completion(durations, thresholds, cfg.cancellation, counts=True)
        return np.max(completion, axis=1), completion, returned
    delays, returned = baseline_completion(durations, thresholds[0], counts=True)
    return delays, None, returned


def run_apcc_trial(cfg, model, rng):
    """
    Simulates one APCC trial.

    :param cfg: APCC ``StrategyConfig``
    :param model: ``DelayModel``
    :param rng: ``numpy.random.Generator``

    :return: tuple ``(entire_delay, per_set_completion)``.

    :raise:
      APCCSimulationException: if a threshold exceeds ``N``.
    """
    if cfg.kind != enums.StrategyKind.APCC:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Expected an APCC strategy.')
    delays, completion, _ = _simulate(cfg, model, [rng])
    return float(delays[0]), completion[0].tolist()


def run_baseline_trial(cfg, model, rng):
    """
    Simulates one LCC, LCC-MMC or BACC trial.

    :param cfg: baseline ``StrategyConfig``
    :param model: ``DelayModel``
    :param rng: ``numpy.random.Generator``

    :return: entire-task delay.

    :raise:
      APCCException: for APCC, or LCC-MMC with ``L > 0``.
      APCCSimulationException: if the threshold exceeds the results a trial can return.
    """
    if cfg.kind == enums.StrategyKind.APCC:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Expected a baseline strategy.')
    delays, _, _ = _simulate(cfg, model, [rng])
    return float(delays[0])


def _simulate_chunk(job):
    cfg, model, master_seed, first, last = job
    return _simulate(cfg, model, [trial_rng(master_seed, t) for t in range(first, last)])


def resolve_jobs(jobs):
    """
    Returns the number of worker processes to use.

    :param jobs: requested processes, ``0`` for one per physical core

    :return: positive integer.
    """
    if jobs and jobs > 0:
        return int(jobs)
    return psutil.cpu_count(logical=False) or 1


def monte_carlo(cfg, model, trials, master_seed, jobs=1):
    """
    Estimates the mean entire-task delay.

    Trial ``t`` draws from ``trial_rng(master_seed, t)``, so the outcome does
    not depend on ``jobs``.

    :param cfg: ``StrategyConfig``
    :param model: ``DelayModel``
    :param trials: number of trials
    :param master_seed: non-negative integer seed
    :param jobs: worker processes, ``0`` for one per physical core

    :return: ``SimOutcome``

    :raise:
      APCCException: if ``trials < 1`` or the configuration is invalid.
    """
    if trials < 1 or master_seed < 0:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Need at least one trial and a non-negative seed.')
    _validate(cfg, model)

    chunks = [(cfg, model, master_seed, first, min(trials, first + CHUNK_SIZE))
              for first in range(0, trials, CHUNK_SIZE)]
    jobs = min(resolve_jobs(jobs), len(chunks))
    if jobs > 1:
        logger.debug('Simulating %d chunks on %d processes.', len(chunks), jobs)
        with multiprocessing.Pool(jobs) as pool:
            parts = pool.map(_simulate_chunk, chunks)
    else:
        parts = [_simulate_chunk(chunk) for chunk in chunks]

    delays = np.concatenate([p[0] for p in parts])
    completion = None if parts[0][1] is None else np.concatenate([p[1] for p in parts])
    returned = np.concatenate([p[2] for p in parts])
    mean = math.fsum(delays) / trials
    stderr = float(np.std(delays, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return SimOutcome(delays, completion, mean, stderr, worker_results=returned)


def empirical_expected_results(cfg, model, t, set_index, trials, seed):
    """
    Estimates the expected number of set ``set_index`` results returned by time ``t``.

    :param cfg: APCC ``StrategyConfig`` without cancellation
    :param model: persistent ``DelayModel``
    :param t: time in seconds
    :param set_index: set index ``i``
    :param trials: number of trials
    :param seed: master seed

    :return: Monte Carlo mean of the result count.

    :raise:
      APCCException: with cancellation, iid sampling or a bad set index.
    """
    if cfg.kind != enums.StrategyKind.APCC or cfg.cancellation:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Result counts need APCC without cancellation.')
    if model.sampling_mode != enums.SamplingMode.PERSISTENT:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Result counts need persistent sampling.')
    if not 0 <= set_index < cfg.r:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Set index out of range.')

    counts = np.empty(trials)
    for trial in range(trials):
        durations = draw_durations(model, cfg.n, cfg.r, trial_rng(seed, trial))
        finish = np.cumsum(durations, axis=1)[:, set_index]
        counts[trial] = np.count_nonzero(finish <= t)
    return math.fsum(counts) / trials


def empirical_success_probability(cfg, model, deadlines, trials, seed):
    """
    Estimates the probability that every set holds its threshold of results by its deadline.

    :param cfg: APCC ``StrategyConfig``
    :param model: ``DelayModel``
    :param deadlines: ``r`` per-set deadlines in seconds
    :param trials: number of trials
    :param seed: master seed

    :return: fraction of trials meeting every deadline.
    """
    if cfg.kind != enums.StrategyKind.APCC or len(deadlines) != cfg.r:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Expected one deadline per set.')
    outcome = monte_carlo(cfg, model, trials, seed)
    met = np.all(outcome.per_set_completion <= np.asarray(deadlines, dtype=np.float64)[None, :], axis=1)
    return float(np.count_nonzero(met)) / trials


def parity_configs(kdiv, n, l, d, r, set_sizes=None, cancellation=False, bacc_threshold=None,
                   threshold_scale=1.0, kinds=enums.StrategyKind.ALL):
    """
    Builds strategies that give every worker the same computation load.

    APCC splits ``K = r K'`` subtasks into ``r`` sets, LCC and BACC split the
    task into ``K'`` subtasks and LCC-MMC into ``r K'`` subtasks run ``r`` per
    worker.

    :param kdiv: divisions ``K'`` of LCC and BACC
    :param n: number of workers
    :param l: collusion tolerance
    :param d: polynomial degree
    :param r: number of APCC sets
    :param set_sizes: APCC partition, even split by default
    :param cancellation: APCC cancellation
    :param bacc_threshold: BACC threshold, LCC's scaled threshold by default
    :param threshold_scale: multiplier on ``d`` inside coded thresholds
    :param kinds: strategies to build; LCC-MMC is skipped when ``L > 0``

    :return: dictionary from strategy kind to ``StrategyConfig``.
    """
    k = kdiv * r
    configs = {}
    for kind in kinds:
        if kind == enums.StrategyKind.APCC:
            sizes = set_sizes if set_sizes is not None else [len(part) for part in np.array_split(np.arange(k), r)]
            configs[kind] = StrategyConfig(kind, n, l, d, plan=make_plan(k, sizes), cancellation=cancellation,
                                           threshold_scale=threshold_scale)
        elif kind == enums.StrategyKind.LCC_MMC:
            if l > 0:
                continue
            configs[kind] = StrategyConfig(kind, n, l, d, divisions=k, r=r, threshold_scale=threshold_scale)
        elif kind == enums.StrategyKind.BACC:
            lcc = StrategyConfig(enums.StrategyKind.LCC, n, l, d, divisions=kdiv, threshold_scale=threshold_scale)
            threshold = lcc.thresholds()[0] if bacc_threshold is None else bacc_threshold
            configs[kind] = StrategyConfig(kind, n, l, d, divisions=kdiv, bacc_threshold=threshold)
        else:
            configs[kind] = StrategyConfig(kind, n, l, d, divisions=kdiv, threshold_scale=threshold_scale)
    return configs


def delay_model_for(cfg, mu0, a0, sampling_mode=enums.SamplingMode.PERSISTENT):
    """
    Returns the delay model matching the divisions of ``cfg``.
    """
    return DelayModel(mu0, a0, cfg.divisions, sampling_mode)


def sweep(kinds, kdivs, n, l, d, r, mu0, a0, trials, seed, cancellations=(False, True),
          sampling_mode=enums.SamplingMode.PERSISTENT, threshold_scale=1.0, jobs=1, on_progress=None):
    """
    Simulates every strategy for every division count.

    APCC partitions come from ``partopt.select_partition``.  Points where a strategy
    is infeasible are skipped.

    :param kinds: strategy kinds
    :param kdivs: division counts ``K'``
    :param n: number of workers
    :param l: collusion tolerance
    :param d: polynomial degree
    :param r: number of APCC sets
    :param mu0: entire-task rate
    :param a0: entire-task shift
    :param trials: Monte Carlo trials per point
    :param seed: master seed, shared by every point
    :param cancellations: APCC cancellation settings to simulate
    :param sampling_mode: one of ``enums.SamplingMode``
    :param threshold_scale: multiplier on ``d`` inside coded thresholds
    :param jobs: worker processes
    :param on_progress: optional callable ``(done, total)``

    :return: list of row dictionaries keyed like the CSV columns.
    """
    points = []
    for kdiv in kdivs:
        for kind in kinds:
            if kind == enums.StrategyKind.APCC:
                points.extend((kind, kdiv, c) for c in cancellations)
            else:
                points.append((kind, kdiv, False))

    rows = []
    for done, (kind, kdiv, cancellation) in enumerate(points, 1):
        try:
            cfg = _point_config(kind, kdiv, n, l, d, r, mu0, a0, cancellation, threshold_scale)
            if cfg is None:
                continue
            outcome = monte_carlo(cfg, delay_model_for(cfg, mu0, a0, sampling_mode), trials, seed, jobs)
        except errors.APCCException as e:
            if not e.infeasible:
                raise
            logger.info('Skipping %s at K\' = %d: %s', kind, kdiv, e.message)
            continue
        finally:
            if on_progress is not None:
                on_progress(done, len(points))

        rows.append({
            'strategy': kind, 'N': n, 'L': l, 'd': d, 'r': r, 'kdiv': kdiv, 'trials': trials, 'seed': seed,
            'cancellation': cfg.cancellation, 'mean_delay_s': outcome.mean, 'stderr_s': outcome.stderr,
            'min_delay_s': outcome.min_delay,
        })
        logger.info('%s K\' = %d cancellation = %s: mean %.6f s', kind, kdiv, cfg.cancellation, outcome.mean)
    return rows


def _point_config(kind, kdiv, n, l, d, r, mu0, a0, cancellation, threshold_scale):
    sizes = None
    if kind == enums.StrategyKind.APCC:
        k = kdiv * r
        model = OptimModel(n, k, l, d, r, k * mu0, a0 / k, cancellation, degree=d * threshold_scale)
        sizes = partopt.select_partition(model).set_sizes
    configs = parity_configs(kdiv, n, l, d, r, sizes, cancellation, threshold_scale=threshold_scale,
                             kinds=(kind,))
    return configs.get(kind)
