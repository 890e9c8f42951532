# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Privacy-padded encoding and decoding of a hierarchically partitioned task.

The ``K`` subtasks are split into ``r`` sets.  The ``K_i`` data blocks of set
``i`` and ``L`` uniform pad blocks sit on first-kind Chebyshev nodes; their
barycentric interpolant is evaluated at ``N`` second-kind nodes, one per
worker.  Workers apply ``f`` and the master interpolates the returned values
back at the data nodes.
"""

import itertools
import json
import logging

import numpy as np

from . import enums
from . import errors
from . import interp
from .structs import CodecContext, EncodedShare, NodeSet, PartitionPlan, ReturnedResult

logger = logging.getLogger(__name__)


def make_plan(total_k, set_sizes):
    """
    Builds a partition plan.

    :param total_k: total number of subtasks ``K``
    :param set_sizes: per-set sizes ``K_0 .. K_{r-1}``

    :return: ``PartitionPlan``

    :raise:
      APCCException: if ``set_sizes`` is empty or holds a size below one.
      APCCCodecException: if the sizes do not sum to ``total_k``.
    """
    sizes = list(set_sizes)
    if not sizes or any(int(k) != k or k < 1 for k in sizes):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Set sizes must be positive integers.')
    if sum(sizes) != total_k:
        raise errors.APCCCodecException(enums.APCCCodecErrors.PARTITION_SUM,
                                        '(%d != %d)' % (sum(sizes), total_k))
    return PartitionPlan(total_k, sizes)


def make_context(set_index, k_i, n, l, d, mode=enums.DecodeMode.ACCURATE, approx_threshold=None):
    """
    Builds the encoding context of one set.

    In uncoded mode the worker nodes are taken from the data nodes,
    ``beta_n = alpha_{n mod K_i}``.

    :param set_index: set index ``i``
    :param k_i: number of data blocks in the set
    :param n: number of workers
    :param l: collusion tolerance
    :param d: degree of the computed polynomial
    :param mode: one of ``enums.DecodeMode``
    :param approx_threshold: results awaited in approximate mode, ``ceil(N/2)+1`` by default

    :return: ``CodecContext``

    :raise:
      APCCException: on invalid sizes or mode.
      APCCCodecException: if the recovery threshold exceeds ``n``.
    """
    if k_i < 1 or n < 1 or l < 0 or d < 1:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Need K_i >= 1, N >= 1, L >= 0 and d >= 1.')
    if mode not in enums.DecodeMode.ALL:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Unknown decode mode %r.' % mode)

    alpha = interp.chebyshev_nodes(k_i + l, enums.NodeKind.CHEBYSHEV_FIRST)
    weights = interp.polynomial_weights(alpha)

    if mode == enums.DecodeMode.UNCODED:
        if l != 0:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Uncoded mode cannot pad (L must be 0).')
        beta = NodeSet([alpha[m % k_i] for m in range(n)], enums.NodeKind.ARBITRARY, distinct=False)
    else:
        beta = interp.chebyshev_nodes(n, enums.NodeKind.CHEBYSHEV_SECOND)

    if approx_threshold is not None and not 1 <= approx_threshold <= n:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Approximate threshold must lie in [1, N].')

    ctx = CodecContext(set_index, k_i, l, n, d, mode, alpha, beta, weights, approx_threshold)
    recovery_threshold(ctx)

    if mode != enums.DecodeMode.UNCODED:
        exposed = exposed_workers(ctx)
        if exposed:
            logger.warning('Set %d: workers %s receive an unmasked data block.', set_index, exposed)
    return ctx


def recovery_threshold(ctx):
    """
    Returns the number of results needed to decode the set.

    :param ctx: ``CodecContext``

    :return: ``d(K_i+L-1)+1`` (accurate), ``N - floor(N/K_i) + 1`` (uncoded) or the
             caller-chosen threshold (approximate).

    :raise:
      APCCCodecException: if the threshold exceeds ``N``.
    """
    if ctx.mode == enums.DecodeMode.ACCURATE:
        threshold = ctx.d * (ctx.k_i + ctx.l - 1) + 1
    elif ctx.mode == enums.DecodeMode.UNCODED:
        threshold = ctx.n - ctx.n // ctx.k_i + 1
    else:
        threshold = ctx.approx_threshold

    if threshold > ctx.n:
        raise errors.APCCCodecException(enums.APCCCodecErrors.INFEASIBLE_THRESHOLD,
                                        '(%d > %d)' % (threshold, ctx.n))
    return threshold


def exposed_workers(ctx):
    """
    Returns the workers whose evaluation point coincides with a data node.

    Such a worker receives ``D_{i,j}`` itself since every pad coefficient vanishes.

    :param ctx: ``CodecContext``

    :return: sorted list of worker indices.
    """
    data = ctx.data_nodes
    return [m for m, x in enumerate(ctx.beta_nodes.nodes)
            if np.any(np.abs(data - x) < interp.POLE_TOLERANCE)]


def encoding_coefficients(ctx):
    """
    Returns the ``N x (K_i+L)`` matrix mapping data and pad blocks to shares.

    :param ctx: ``CodecContext``

    :return: numpy array, row ``n`` holds the barycentric coefficients at ``beta_n``.
    """
    return interp.coefficient_matrix(ctx.alpha_nodes, ctx.encode_weights, ctx.beta_nodes.nodes)


def encode_set(ctx, data, rng):
    """
    Encodes the data blocks of one set into one share per worker.

    :param ctx: ``CodecContext``
    :param data: sequence of ``K_i`` equally shaped blocks
    :param rng: ``numpy.random.Generator`` drawing the pad blocks

    :return: list of ``N`` ``EncodedShare``.

    :raise:
      APCCException: if the number or shapes of the blocks are wrong.
    """
    blocks = interp.stack_blocks(data)
    if blocks.shape[0] != ctx.k_i:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Set %d expects %d blocks, got %d.' % (ctx.set_index, ctx.k_i, blocks.shape[0]))

    pads = rng.uniform(-1.0, 1.0, size=(ctx.l,) + blocks.shape[1:])
    stacked = np.concatenate((blocks, pads), axis=0)
    payloads = np.tensordot(encoding_coefficients(ctx), stacked, axes=1)

    return [EncodedShare(ctx.set_index, m, ctx.beta_nodes[m], payloads[m]) for m in range(ctx.n)]


def decode_set(ctx, results, mode=None):
    """
    Recovers ``f(D_{i,j})`` for every data block of the set.

    Accurate mode keeps the first threshold-many results in arrival order.
    Approximate mode uses every result, sorted by decreasing evaluation point
    so the alternating Berrut weights follow the node order.  Uncoded mode
    reads, for every data node, the first result computed on it.

    :param ctx: ``CodecContext``
    :param results: sequence of ``ReturnedResult`` in arrival order
    :param mode: decode mode, ``ctx.mode`` by default

    :return: list of ``K_i`` blocks.

    :raise:
      APCCInsufficientResults: if too few results were supplied.
      APCCInterpException: if two results share an evaluation point.
    """
    mode = ctx.mode if mode is None else mode
    results = [r for r in results if r.set_index == ctx.set_index]

    if mode == enums.DecodeMode.UNCODED:
        decoded = [None] * ctx.k_i
        for result in results:
            hits = np.flatnonzero(np.abs(ctx.data_nodes - result.eval_point) < interp.POLE_TOLERANCE)
            if hits.size and decoded[hits[0]] is None:
                decoded[hits[0]] = interp.as_block(result.payload).copy()
        missing = sum(1 for block in decoded if block is None)
        if missing:
            raise errors.APCCInsufficientResults(missing)
        return decoded

    if mode == enums.DecodeMode.ACCURATE:
        threshold = ctx.d * (ctx.k_i + ctx.l - 1) + 1
        if len(results) < threshold:
            raise errors.APCCInsufficientResults(threshold - len(results))
        used = results[:threshold]
        nodes = NodeSet([r.eval_point for r in used])
        weights = interp.polynomial_weights(nodes)
    else:
        if not results:
            raise errors.APCCInsufficientResults(1)
        used = sorted(results, key=lambda r: r.eval_point, reverse=True)
        nodes = NodeSet([r.eval_point for r in used])
        weights = interp.berrut_weights(len(used))

    values = interp.stack_blocks([r.payload for r in used])
    coefficients = interp.coefficient_matrix(nodes, weights, ctx.data_nodes)
    decoded = np.tensordot(coefficients, values, axes=1)
    return [decoded[j] for j in range(ctx.k_i)]


def padding_coefficient_matrix(ctx, worker_subset, normalize=False):
    """
    Returns the coefficients multiplying the pad blocks in the shares of
    ``worker_subset``.

    Entry ``(s, j)`` is the coefficient of ``Z_{i,K_i+j}`` in ``g_i(beta_{worker_subset[s]})``.
    A nonsingular matrix means the colluding workers' shares stay masked.

    :param ctx: ``CodecContext``
    :param worker_subset: ``L`` distinct worker indices
    :param normalize: scale every row to unit maximum magnitude

    :return: ``L x L`` numpy array.

    :raise:
      APCCException: if ``L`` is zero, the subset has the wrong size, repeats or leaves ``[0, N)``.
    """
    subset = list(worker_subset)
    if ctx.l < 1:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'No pad blocks without L >= 1.')
    if len(subset) != ctx.l or len(set(subset)) != len(subset):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Expected %d distinct workers.' % ctx.l)
    if any(not 0 <= m < ctx.n for m in subset):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Worker index out of range.')

    points = [ctx.beta_nodes[m] for m in subset]
    matrix = interp.coefficient_matrix(ctx.alpha_nodes, ctx.encode_weights, points)[:, ctx.k_i:]
    if normalize:
        scale = np.max(np.abs(matrix), axis=1, keepdims=True)
        matrix = np.divide(matrix, scale, out=np.zeros_like(matrix), where=scale > 0)
    return matrix


def apply_function(f, shares):
    """
    Simulates the workers: applies ``f`` to every share payload.

    :param f: function of one block
    :param shares: sequence of ``EncodedShare``

    :return: list of ``ReturnedResult`` in the order of ``shares``.
    """
    return [ReturnedResult(s.set_index, s.worker_index, s.eval_point, interp.as_block(f(s.payload)))
            for s in shares]


def encode_task(plan, data, n, l, d, rng, mode=enums.DecodeMode.ACCURATE, approx_threshold=None):
    """
    Encodes every set of a partitioned task.

    :param plan: ``PartitionPlan``
    :param data: flat sequence of ``K`` blocks, set 0 first
    :param n: number of workers
    :param l: collusion tolerance
    :param d: degree of the computed polynomial
    :param rng: ``numpy.random.Generator``
    :param mode: decode mode of every set
    :param approx_threshold: results awaited per set in approximate mode

    :return: tuple of the ``r`` contexts and the ``r`` lists of shares.

    :raise:
      APCCException: if ``len(data) != plan.total_k``.
    """
    data = list(data)
    if len(data) != plan.total_k:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Expected %d blocks, got %d.' % (plan.total_k, len(data)))

    contexts, shares = [], []
    for i, (offset, k_i) in enumerate(zip(plan.offsets(), plan.set_sizes)):
        ctx = make_context(i, k_i, n, l, d, mode, approx_threshold)
        contexts.append(ctx)
        shares.append(encode_set(ctx, data[offset:offset + k_i], rng))
    return contexts, shares


def worker_shares(shares, worker_index):
    """
    Returns the ``r`` shares of one worker in set order.

    :param shares: per-set share lists as returned by ``encode_task``
    :param worker_index: worker ``n``

    :return: list of ``EncodedShare``.
    """
    return [set_shares[worker_index] for set_shares in shares]


def decode_task(contexts, results):
    """
    Decodes every set and flattens the outputs back into subtask order.

    :param contexts: per-set contexts
    :param results: returned results of any set, in arrival order

    :return: list of ``K`` blocks.
    """
    results = list(results)
    return list(itertools.chain.from_iterable(decode_set(ctx, results) for ctx in contexts))


def dump_shares(records):
    """
    Serializes shares or results to JSON text.

    :param records: sequence of ``EncodedShare`` or ``ReturnedResult``

    :return: JSON string holding a list of records.
    """
    return json.dumps([r.to_dict() for r in records])


def load_shares(text, record_type=EncodedShare):
    """
    Parses JSON text produced by ``dump_shares``.

    :param text: JSON string
    :param record_type: ``EncodedShare`` or ``ReturnedResult``

    :return: list of records.

    :raise:
      APCCException: if the text is not a list of records.
    """
    try:
        values = json.loads(text)
    except ValueError as e:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Bad JSON: %s.' % e)
    if not isinstance(values, list):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Expected a list of records.')
    return [record_type.from_dict(v) for v in values]

