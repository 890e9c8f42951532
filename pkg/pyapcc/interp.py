# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Node generation and barycentric interpolation kernels.

All routines work on ``float64`` numpy arrays.  A matrix block is a 2-D array;
scalars are promoted to 1x1 blocks by ``as_block``.
"""

import logging

import numpy as np

from . import enums
from . import errors
from .structs import BaryWeights, NodeSet, NODE_GAP

logger = logging.getLogger(__name__)

# Distance under which an evaluation point is treated as the node itself.
POLE_TOLERANCE = 1e-13


def as_block(value):
    """
    Converts ``value`` to a finite 2-D ``float64`` block.

    :param value: scalar, vector or matrix

    :return: 2-D numpy array (scalars become 1x1, vectors become columns).

    :raise:
      APCCException: if the value is empty, has more than two dimensions or non-finite entries.
    """
    block = np.array(value, dtype=np.float64)
    if block.ndim == 0:
        block = block.reshape(1, 1)
    elif block.ndim == 1:
        block = block.reshape(-1, 1)
    if block.ndim != 2 or block.size == 0:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Blocks must be non-empty matrices.')
    if not np.all(np.isfinite(block)):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Blocks must be finite.')
    return block


def stack_blocks(values):
    """
    Stacks equally shaped blocks along a new leading axis.

    :param values: sequence of blocks

    :return: array of shape ``(len(values), rows, cols)``.

    :raise:
      APCCException: if the sequence is empty or the shapes differ.
    """
    blocks = [as_block(v) for v in values]
    if not blocks:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'No blocks given.')
    shape = blocks[0].shape
    if any(b.shape != shape for b in blocks):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Blocks differ in shape.')
    return np.stack(blocks)


def chebyshev_nodes(count, kind):
    """
    Returns Chebyshev nodes in strictly decreasing order.

    First kind: ``cos((2j+1)pi/(2M))``; second kind: ``cos(j pi/(M-1))``.

    :param count: number of nodes ``M``
    :param kind: ``NodeKind.CHEBYSHEV_FIRST`` or ``NodeKind.CHEBYSHEV_SECOND``

    :return: ``NodeSet`` of the requested kind.

    :raise:
      APCCException: if ``count`` is zero, or one for the second kind.
    """
    if count < 1:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Node count must be positive.')

    j = np.arange(count, dtype=np.float64)
    if kind == enums.NodeKind.CHEBYSHEV_FIRST:
        nodes = np.cos((2.0 * j + 1.0) * np.pi / (2.0 * count))
    elif kind == enums.NodeKind.CHEBYSHEV_SECOND:
        if count < 2:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Second-kind nodes need at least two points.')
        nodes = np.cos(j * np.pi / (count - 1.0))
    else:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Unknown node kind %r.' % kind)
    return NodeSet(nodes, kind)


def polynomial_weights(nodes):
    """
    Returns the barycentric weights of polynomial interpolation.

    ``w_j = 1 / prod_{k != j} (x_j - x_k)``

    :param nodes: ``NodeSet`` or sequence of reals

    :return: ``BaryWeights``

    :raise:
      APCCInterpException: if two nodes are closer than ``NODE_GAP``.
    """
    x = nodes.nodes if isinstance(nodes, NodeSet) else np.asarray(nodes, dtype=np.float64)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(np.abs(diff) <= NODE_GAP):
        raise errors.APCCInterpException(enums.APCCInterpErrors.DEGENERATE_NODES)
    return BaryWeights(1.0 / np.prod(diff, axis=1))


def berrut_weights(count):
    """
    Returns Berrut's weights ``(-1)^j``.

    :param count: number of nodes

    :return: ``BaryWeights``
    """
    return BaryWeights(np.where(np.arange(count) % 2 == 0, 1.0, -1.0))


def bary_coefficients(nodes, weights, x):
    """
    Returns the coefficients ``c_j(x)`` of the barycentric form so that the
    interpolant at ``x`` is ``sum_j c_j(x) values_j``.

    :param nodes: ``NodeSet``
    :param weights: ``BaryWeights`` of the same length
    :param x: evaluation point

    :return: array of ``len(nodes)`` coefficients summing to one.

    :raise:
      APCCException: on a length mismatch.
    """
    xs = nodes.nodes
    w = weights.weights
    if xs.size != w.size:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Nodes and weights differ in length.')

    delta = x - xs
    hit = np.flatnonzero(np.abs(delta) < POLE_TOLERANCE)
    if hit.size:
        coefficients = np.zeros(xs.size)
        coefficients[hit[0]] = 1.0
        return coefficients

    terms = w / delta
    return terms / np.sum(terms)


def coefficient_matrix(nodes, weights, points):
    """
    Returns the barycentric coefficients for several evaluation points.

    :param nodes: ``NodeSet``
    :param weights: ``BaryWeights``
    :param points: sequence of evaluation points

    :return: array of shape ``(len(points), len(nodes))``.
    """
    return np.array([bary_coefficients(nodes, weights, float(x)) for x in points]).reshape(-1, len(nodes))


def bary_eval(nodes, weights, values, x):
    """
    Evaluates the barycentric interpolant of ``values`` at ``x``.

    :param nodes: ``NodeSet``
    :param weights: ``BaryWeights``
    :param values: sequence of equally shaped blocks, one per node
    :param x: evaluation point

    :return: 2-D block.  At a node (within ``POLE_TOLERANCE``) the node's value is returned as is.

    :raise:
      APCCException: on a length or shape mismatch.
    """
    stacked = stack_blocks(values)
    if stacked.shape[0] != len(nodes):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                   'Expected %d values, got %d.' % (len(nodes), stacked.shape[0]))
    coefficients = bary_coefficients(nodes, weights, x)
    hit = np.flatnonzero(coefficients == 1.0)
    if hit.size == 1 and np.count_nonzero(coefficients) == 1:
        return stacked[hit[0]].copy()
    return np.tensordot(coefficients, stacked, axes=1)
