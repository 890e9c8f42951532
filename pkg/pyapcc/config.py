# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
Experiment configuration.

Values are resolved from, lowest priority first, the built-in defaults, a
named preset, a JSON file and the command-line flags.
"""

import copy
import json
import logging

from . import analysis
from . import enums
from . import errors
from .utils import Utils

logger = logging.getLogger(__name__)

DEFAULTS = {
    'strategies': [enums.StrategyKind.APCC, enums.StrategyKind.LCC],
    'n': 100,
    'l': 10,
    'd': 2,
    'r': 16,
    'k': None,
    'kdiv_min': 1,
    'kdiv_max': None,
    'a0': 0.5,
    'mu0': 0.2,
    'trials': 10000,
    'seed': 0,
    'cancellation': [False, True],
    'mode': enums.SamplingMode.PERSISTENT,
    'out': '-',
    'jobs': 1,
    'threshold_scale': 1.0,
    'samples': 240,
    'features': 8,
    'iterations': 20,
    'eta': 0.001,
}

# Settings of the published delay comparisons.
PRESETS = {
    'fig4': {'n': 200, 'l': 20, 'd': 4, 'r': 6,
             'strategies': [enums.StrategyKind.APCC, enums.StrategyKind.LCC]},
    'accurate-l10': {'n': 100, 'l': 10, 'd': 2, 'r': 16,
                     'strategies': [enums.StrategyKind.APCC, enums.StrategyKind.LCC]},
    'accurate-l0': {'n': 100, 'l': 0, 'd': 2, 'r': 16,
                    'strategies': [enums.StrategyKind.APCC, enums.StrategyKind.LCC, enums.StrategyKind.LCC_MMC]},
    'approximate': {'n': 100, 'l': 10, 'd': 2, 'r': 16, 'threshold_scale': 0.5, 'cancellation': [True],
                    'strategies': [enums.StrategyKind.APCC, enums.StrategyKind.BACC]},
    'r-impact': {'n': 100, 'l': 10, 'd': 2, 'strategies': [enums.StrategyKind.APCC]},
    'l-impact': {'n': 100, 'd': 2, 'r': 16, 'strategies': [enums.StrategyKind.APCC]},
}


class ExperimentConfig(object):
    """
    Resolved experiment settings.

    Every key of ``DEFAULTS`` is an attribute.
    """

    def __init__(self, **values):
        settings = copy.deepcopy(DEFAULTS)
        unknown = set(values) - set(settings)
        if unknown:
            raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'Unknown settings: %s.' % ', '.join(sorted(unknown)))
        settings.update(values)
        self.__dict__.update(settings)

    @classmethod
    def from_sources(cls, args=None, preset=None, path=None):
        """
        Resolves the configuration of one invocation.

        :param args: ``argparse.Namespace``; attributes that are ``None`` are ignored
        :param preset: name of an entry of ``PRESETS``
        :param path: JSON file holding a flat object of settings

        :return: validated ``ExperimentConfig``.

        :raise:
          APCCException: if the preset, file or any value is invalid.
        """
        values = {}
        if preset is not None:
            if preset not in PRESETS:
                raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Unknown preset %r.' % preset)
            values.update(PRESETS[preset])
        if path is not None:
            values.update(load_file(path))
        if args is not None:
            values.update({key: value for key, value in vars(args).items()
                           if key in DEFAULTS and value is not None})

        config = cls(**values)
        config.validate()
        logger.debug('Resolved configuration: %s', config)
        return config

    def validate(self):
        """
        Checks every setting.

        :raise:
          APCCException: on the first invalid value.
        """
        for key in ('n', 'd', 'r', 'trials', 'kdiv_min', 'samples', 'features'):
            if not Utils.is_positive(getattr(self, key)):
                _invalid('%s must be a positive integer' % key)
        for key in ('l', 'seed', 'jobs', 'iterations'):
            if not Utils.is_natural(getattr(self, key)):
                _invalid('%s must be a non-negative integer' % key)
        if self.k is not None and not Utils.is_positive(self.k):
            _invalid('k must be a positive integer')
        if not self.a0 > 0 or not self.mu0 > 0:
            _invalid('a0 and mu0 must be positive')
        if not self.threshold_scale > 0 or self.eta < 0:
            _invalid('threshold_scale must be positive and eta non-negative')
        if self.mode not in enums.SamplingMode.ALL:
            _invalid('unknown sampling mode %r' % self.mode)
        if not self.strategies or any(s not in enums.StrategyKind.ALL for s in self.strategies):
            _invalid('strategies must be taken from %s' % ', '.join(enums.StrategyKind.ALL))
        if not self.cancellation or any(not isinstance(c, bool) for c in self.cancellation):
            _invalid('cancellation must be a list of booleans')
        if self.samples > 512 or self.features > 32:
            _invalid('demo instances are limited to 512 samples and 32 features')

        limit = self.division_limit()
        if self.kdiv_max is None:
            self.kdiv_max = limit
        if not Utils.is_positive(self.kdiv_max) or not 1 <= self.kdiv_min <= self.kdiv_max <= limit:
            _invalid('division sweep must lie within [1, %d]' % limit)

    def division_limit(self):
        """
        Returns the largest division count any configured strategy can use.

        :return: ``max_divisions(N, 0, L, d)``.

        :raise:
          APCCException: if no division fits.
        """
        limit, feasible = analysis.max_divisions(self.n, 0, self.l, self.d)
        if not feasible:
            _invalid('no task division fits N = %d, L = %d, d = %d' % (self.n, self.l, self.d))
        return limit

    def kdivs(self):
        """
        Returns the division counts of the sweep.
        """
        return list(range(self.kdiv_min, self.kdiv_max + 1))

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__, self.__str__())

    def __str__(self):
        return ', '.join('%s=%r' % (key, getattr(self, key)) for key in DEFAULTS)


def load_file(path):
    """
    Reads a JSON settings file.

    :param path: file path

    :return: dictionary of settings.

    :raise:
      APCCException: if the file cannot be read or is not a JSON object.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            values = json.load(f)
    except (OSError, ValueError) as e:
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Cannot read %s: %s.' % (path, e))
    if not isinstance(values, dict):
        raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, '%s must hold a JSON object.' % path)
    if isinstance(values.get('cancellation'), bool):
        values['cancellation'] = [values['cancellation']]
    if isinstance(values.get('strategies'), str):
        values['strategies'] = [values['strategies']]
    return values


def _invalid(message):
    raise errors.APCCException(enums.APCCGlobalErrors.INVALID_ARGUMENT, 'Invalid configuration: %s.' % message)
