# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Plain data holders shared by the codec, the partition optimizer and the
straggler simulator.
"""

import math

import numpy as np

from . import enums
from . import errors

# Minimum distance between two interpolation nodes.
NODE_GAP = 1e-12


class NodeSet(object):
    """
    Ordered set of interpolation nodes on ``[-1, 1]``.

    Attributes:
        nodes: read-only ``float64`` array of node positions.
        kind: one of ``enums.NodeKind``.
    """

    def __init__(self, nodes, kind=enums.NodeKind.ARBITRARY, distinct=True):
        """
        Validates and stores the nodes.

        :param nodes: sequence of real numbers
        :param kind: node family
        :param distinct: reject nodes closer than ``NODE_GAP`` when ``True``

        :raise:
          APCCException: if a node lies outside ``[-1, 1]`` or the node set is empty.
          APCCInterpException: if ``distinct`` is set and two nodes coincide.
        """
        values = np.array(nodes, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Node set is empty.')
        if kind not in enums.NodeKind.ALL:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Unknown node kind %r.' % kind)
        if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1.0 + 1e-12):
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Nodes must lie on [-1, 1].')
        if distinct and values.size > 1:
            ordered = np.sort(values)
            if np.min(np.diff(ordered)) <= NODE_GAP:
                raise errors.APCCInterpException(enums.APCCInterpErrors.DEGENERATE_NODES)

        values.setflags(write=False)
        self.nodes = values
        self.kind = kind

    def __len__(self):
        return self.nodes.size

    def __getitem__(self, index):
        return float(self.nodes[index])

    def __iter__(self):
        return iter(self.nodes.tolist())

    def __repr__(self):
        """
        Returns a representation of this class.

        :return: String representation of the class.
        """
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        """
        Returns a string representation of the node set.

        :return: String specifying the node kind and count.
        """
        return '%s, %d nodes' % (self.kind, len(self))


class BaryWeights(object):
    """
    Barycentric weights attached to a ``NodeSet``.

    Attributes:
        weights: read-only ``float64`` array.
    """

    def __init__(self, weights):
        values = np.array(weights, dtype=np.float64).reshape(-1)
        values.setflags(write=False)
        self.weights = values

    def __len__(self):
        return self.weights.size

    def __getitem__(self, index):
        return float(self.weights[index])

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.weights.tolist())


class PartitionPlan(object):
    """
    Hierarchical layout of ``total_k`` subtasks into ``r`` ordered sets.

    Attributes:
        r: number of sets.
        set_sizes: tuple of per-set subtask counts ``K_i``.
        total_k: total number of subtasks ``K``.
    """

    def __init__(self, total_k, set_sizes):
        self.total_k = int(total_k)
        self.set_sizes = tuple(int(k) for k in set_sizes)
        self.r = len(self.set_sizes)

    def offsets(self):
        """
        Returns the index of the first subtask of every set.

        :return: list of ``r`` offsets into the flat subtask sequence.
        """
        return [int(v) for v in np.concatenate(([0], np.cumsum(self.set_sizes)[:-1]))]

    def __eq__(self, other):
        return isinstance(other, PartitionPlan) and \
            (self.total_k, self.set_sizes) == (other.total_k, other.set_sizes)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'K = %d, sets = %s' % (self.total_k, list(self.set_sizes))


class CodecContext(object):
    """
    Everything needed to encode and decode one set.

    Attributes:
        set_index: set index ``i``.
        k_i: number of data blocks in the set.
        l: collusion tolerance ``L`` (number of pad blocks).
        n: number of workers ``N``.
        d: degree of the computed polynomial.
        mode: one of ``enums.DecodeMode``.
        alpha_nodes: ``NodeSet`` of size ``k_i + l`` holding data and pad nodes.
        beta_nodes: ``NodeSet`` of size ``n``, one evaluation point per worker.
        encode_weights: ``BaryWeights`` over ``alpha_nodes``.
        approx_threshold: number of results the caller waits for in approximate mode.
    """

    def __init__(self, set_index, k_i, l, n, d, mode, alpha_nodes, beta_nodes, encode_weights,
                 approx_threshold=None):
        self.set_index = set_index
        self.k_i = k_i
        self.l = l
        self.n = n
        self.d = d
        self.mode = mode
        self.alpha_nodes = alpha_nodes
        self.beta_nodes = beta_nodes
        self.encode_weights = encode_weights
        if approx_threshold is None:
            approx_threshold = min(n, int(math.ceil(n / 2.0)) + 1)
        self.approx_threshold = approx_threshold

    @property
    def data_nodes(self):
        """
        Returns the interpolation nodes carrying data blocks.

        :return: array of the first ``k_i`` alpha nodes.
        """
        return self.alpha_nodes.nodes[:self.k_i]

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'set %d, K_i = %d, L = %d, N = %d, d = %d, %s' % \
            (self.set_index, self.k_i, self.l, self.n, self.d, self.mode)


class _Record(object):
    """
    Base for the share and result records exchanged with workers.
    """

    def __init__(self, set_index, worker_index, eval_point, payload):
        self.set_index = int(set_index)
        self.worker_index = int(worker_index)
        self.eval_point = float(eval_point)
        self.payload = np.asarray(payload, dtype=np.float64)

    def to_dict(self):
        """
        Converts the record to its JSON shape.

        :return: dictionary with keys ``set``, ``worker``, ``x``, ``rows``, ``cols`` and ``data``.
        """
        rows, cols = self.payload.shape
        return {
            'set': self.set_index,
            'worker': self.worker_index,
            'x': self.eval_point,
            'rows': int(rows),
            'cols': int(cols),
            'data': self.payload.reshape(-1).tolist(),
        }

    @classmethod
    def from_dict(cls, value):
        """
        Builds a record from its JSON shape.

        :param value: dictionary as produced by ``to_dict``

        :return: a new record.

        :raise:
          APCCException: if a key is missing or ``data`` does not match ``rows`` x ``cols``.
        """
        try:
            rows, cols = int(value['rows']), int(value['cols'])
            data = np.array(value['data'], dtype=np.float64)
            if rows < 1 or cols < 1 or data.size != rows * cols:
                raise ValueError('payload holds %d entries for a %dx%d block' % (data.size, rows, cols))
            return cls(value['set'], value['worker'], value['x'], data.reshape(rows, cols))
        except (KeyError, TypeError, ValueError) as e:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Bad record: %s.' % e)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'set %d, worker %d, x = %.6f, %dx%d' % \
            ((self.set_index, self.worker_index, self.eval_point) + self.payload.shape)


class EncodedShare(_Record):
    """
    Encoded block ``g_i(beta_n)`` sent to worker ``n``.
    """
    pass


class ReturnedResult(_Record):
    """
    Result ``f(g_i(x))`` returned by a worker.
    """
    pass


class OptimModel(object):
    """
    Problem data of the partition optimizer.

    Attributes:
        n: number of workers.
        k: number of subtasks to partition.
        l: collusion tolerance.
        d: polynomial degree.
        r: number of sets.
        mu: per-subtask rate (1/s).
        a: per-subtask shift (s).
        cancellation: whether completed sets are cancelled on slower workers.
        threshold_kind: one of ``enums.ThresholdKind``.
        degree: effective degree in the coded threshold, ``d`` unless scaled.
    """

    def __init__(self, n, k, l, d, r, mu, a, cancellation=False,
                 threshold_kind=enums.ThresholdKind.CODED, degree=None):
        self.n = n
        self.k = k
        self.l = l
        self.d = d
        self.r = r
        self.mu = mu
        self.a = a
        self.cancellation = cancellation
        self.threshold_kind = threshold_kind
        self.degree = d if degree is None else degree

        if n < 1 or k < 1 or r < 1 or d < 1 or l < 0 or self.degree <= 0:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Model sizes must be positive.')
        if not mu > 0 or a < 0:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Delay parameters need mu > 0 and a >= 0.')
        if threshold_kind not in enums.ThresholdKind.ALL:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Unknown threshold kind %r.' % threshold_kind)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'N = %d, K = %d, L = %d, d = %s, r = %d, mu = %g, a = %g, cancellation = %s' % \
            (self.n, self.k, self.l, self.degree, self.r, self.mu, self.a, self.cancellation)


class PartitionSolution(object):
    """
    Integer partition together with its per-set times.

    Attributes:
        set_sizes: tuple of ``K_i``.
        objective: maximum of ``per_set_times`` in seconds.
        per_set_times: tuple of per-set times in seconds.
        history: objectives visited by an iterative solver, oldest first.
    """

    def __init__(self, set_sizes, per_set_times, history=None):
        self.set_sizes = tuple(int(k) for k in set_sizes)
        self.per_set_times = tuple(float(t) for t in per_set_times)
        self.objective = max(self.per_set_times)
        self.history = list(history) if history is not None else [self.objective]

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'sizes = %s, z = %.6f' % (list(self.set_sizes), self.objective)


class DelayModel(object):
    """
    Shifted-exponential worker delay at subtask granularity.

    The entire task takes ``a0 + Exp(mu0)`` on one worker; splitting it into
    ``divisions`` subtasks scales the shift down and the rate up.

    Attributes:
        mu0: entire-task rate (1/s).
        a0: entire-task shift (s).
        divisions: number of subtasks the task is split into.
        sampling_mode: one of ``enums.SamplingMode``.
    """

    def __init__(self, mu0, a0, divisions, sampling_mode=enums.SamplingMode.PERSISTENT):
        if not mu0 > 0 or a0 < 0 or divisions < 1:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Delay model needs mu0 > 0, a0 >= 0 and divisions >= 1.')
        if sampling_mode not in enums.SamplingMode.ALL:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Unknown sampling mode %r.' % sampling_mode)
        self.mu0 = mu0
        self.a0 = a0
        self.divisions = divisions
        self.sampling_mode = sampling_mode

    @property
    def mu(self):
        """
        Per-subtask rate.
        """
        return self.divisions * self.mu0

    @property
    def a(self):
        """
        Per-subtask shift.
        """
        return self.a0 / self.divisions

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'mu0 = %g, a0 = %g, divisions = %d, %s' % (self.mu0, self.a0, self.divisions, self.sampling_mode)


class StrategyConfig(object):
    """
    One simulated coding strategy.

    Attributes:
        kind: one of ``enums.StrategyKind``.
        n: number of workers.
        l: collusion tolerance.
        d: polynomial degree.
        plan: ``PartitionPlan`` (APCC only).
        r: number of subtasks each worker executes.
        cancellation: cancel completed sets (APCC only).
        bacc_threshold: number of results BACC waits for.
        threshold_scale: multiplier on ``d`` inside coded thresholds.
    """

    def __init__(self, kind, n, l, d, plan=None, divisions=None, r=1, cancellation=False,
                 bacc_threshold=None, threshold_scale=1.0):
        if kind not in enums.StrategyKind.ALL:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Unknown strategy %r.' % kind)
        if kind == enums.StrategyKind.APCC:
            if plan is None:
                raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'APCC needs a partition plan.')
            r = plan.r
        elif divisions is None or divisions < 1:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       '%s needs a positive number of divisions.' % kind)
        if kind == enums.StrategyKind.BACC and bacc_threshold is None:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'BACC needs a threshold.')
        if kind in (enums.StrategyKind.LCC, enums.StrategyKind.BACC):
            r = 1

        self.kind = kind
        self.n = n
        self.l = l
        self.d = d
        self.plan = plan
        self.r = r
        self._divisions = divisions
        self.cancellation = bool(cancellation) and kind == enums.StrategyKind.APCC
        self.bacc_threshold = bacc_threshold
        self.threshold_scale = threshold_scale

    @property
    def divisions(self):
        """
        Number of subtasks the entire task is split into.

        :return: ``K`` for APCC, ``K'`` for LCC and BACC, ``K^LM`` for LCC-MMC.
        """
        if self.kind == enums.StrategyKind.APCC:
            return self.plan.total_k
        return self._divisions

    def coded_threshold(self, k):
        """
        Returns the coded recovery threshold for ``k`` data blocks.

        :param k: number of data blocks encoded together

        :return: ``ceil(scale * d * (k + L - 1)) + 1``.
        """
        return int(math.ceil(self.threshold_scale * self.d * (k + self.l - 1) - 1e-9)) + 1

    def thresholds(self):
        """
        Returns the recovery thresholds of the strategy.

        :return: one threshold per APCC set, otherwise a single-element list.
        """
        if self.kind == enums.StrategyKind.APCC:
            return [self.coded_threshold(k) for k in self.plan.set_sizes]
        elif self.kind == enums.StrategyKind.BACC:
            return [int(self.bacc_threshold)]
        return [self.coded_threshold(self.divisions)]

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return '%s, N = %d, L = %d, d = %d, divisions = %d, r = %d' % \
            (self.kind, self.n, self.l, self.d, self.divisions, self.r)


class SimOutcome(object):
    """
    Monte Carlo estimate of the entire-task completion delay.

    Attributes:
        trial_delays: ``float64`` array of per-trial delays (s).
        per_set_completion: ``(trials, r)`` array of set completion times, ``None`` for baselines.
        mean: arithmetic mean of ``trial_delays``.
        stderr: sample standard deviation over the square root of the trial count.
        worker_results: ``(trials, N)`` integer array of the results each worker
            returned before the set they belong to completed, ``None`` when not recorded.
    """

    def __init__(self, trial_delays, per_set_completion, mean, stderr, worker_results=None):
        self.trial_delays = trial_delays
        self.per_set_completion = per_set_completion
        self.mean = mean
        self.stderr = stderr
        self.worker_results = worker_results

    @property
    def min_delay(self):
        """
        Smallest simulated delay.
        """
        return float(np.min(self.trial_delays))

    @property
    def trials(self):
        return int(self.trial_delays.size)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return 'mean = %.6f s, stderr = %.6f s, %d trials' % (self.mean, self.stderr, self.trials)
