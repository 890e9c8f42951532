# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

import pyapcc
import argparse
import contextlib
import csv
import logging
import os
import six
import sys

import numpy as np

from pyapcc import analysis
from pyapcc import codec
from pyapcc import partopt
from pyapcc import stragsim
from pyapcc.config import ExperimentConfig, PRESETS
from pyapcc.utils import Utils

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['strategy', 'N', 'L', 'd', 'r', 'kdiv', 'trials', 'seed', 'cancellation',
               'mean_delay_s', 'stderr_s', 'min_delay_s']


class CommandMeta(type):
    """
    Metaclass for a command.
    """

    registry = {}

    def __new__(cls, name, parents, dct):
        """
        Creates a new Command class and validates it.

        :param name: the name of the class being created
        :param parents: list of parent classes
        :param dct: class attributes

        :return: ``Class``
        """
        new_class = super(CommandMeta, cls).__new__(cls, name, parents, dct)

        if name != 'Command':
            for attribute in ['name', 'description', 'help']:
                if attribute not in dct or dct[attribute] is None:
                    raise ValueError('%s cannot be None.' % attribute)
            CommandMeta.registry[name] = new_class

        return new_class


class Command(six.with_metaclass(CommandMeta)):
    """
    Base command-class.

    All commands should inherit from this class.

    Attributes:
      name: name of the command, should be unique.
      description: command description string.
      help: command help string.
    """
    name = None
    description = None
    help = None

    @staticmethod
    def create_config(args):
        """
        Resolves the experiment configuration from the given arguments.

        :param args: arguments passed on the command-line

        :return: validated ``ExperimentConfig``.
        """
        return ExperimentConfig.from_sources(args, args.preset, args.config)

    @staticmethod
    def total_subtasks(config):
        """
        Returns ``K``: ``--k`` when given, otherwise ``r`` times the first division count of the sweep.
        """
        return config.k if config.k is not None else config.r * config.kdiv_min

    @staticmethod
    @contextlib.contextmanager
    def open_output(path):
        """
        Opens the output stream; ``-`` is the standard output.

        :param path: output path
        """
        if path == '-':
            yield sys.stdout
        else:
            with open(path, 'w', newline='', encoding='utf-8') as f:
                yield f

    @staticmethod
    def add_common_arguments(parser):
        """
        Adds the experiment arguments shared by every command.

        Defaults live in ``pyapcc.config.DEFAULTS`` so that unset flags never
        override a preset or a configuration file.

        :param parser: the parser to add the arguments to
        """
        parser.add_argument('--config', help='JSON file of settings')
        parser.add_argument('--preset', choices=sorted(PRESETS), help='named experiment settings')
        parser.add_argument('--n', type=int, help='number of workers')
        parser.add_argument('--l', type=int, help='number of colluding workers tolerated')
        parser.add_argument('--d', type=int, help='degree of the computed polynomial')
        parser.add_argument('--r', type=int, help='number of APCC sets')
        parser.add_argument('--k', type=int, help='total number of APCC subtasks')
        parser.add_argument('--kdiv-min', dest='kdiv_min', type=int, help='first task division number of the sweep')
        parser.add_argument('--kdiv-max', dest='kdiv_max', type=int, help='last task division number of the sweep')
        parser.add_argument('--a0', type=float, help='delay shift of the entire task in seconds')
        parser.add_argument('--mu0', type=float, help='delay rate of the entire task')
        parser.add_argument('--trials', type=int, help='Monte Carlo trials per point')
        parser.add_argument('--seed', type=int, help='master seed')
        group = parser.add_mutually_exclusive_group(required=False)
        group.add_argument('--cancel', dest='cancellation', action='store_const', const=[True],
                           help='cancel the remaining subtasks of a set once it is decodable')
        group.add_argument('--no-cancel', dest='cancellation', action='store_const', const=[False],
                           help='never cancel subtasks')
        parser.add_argument('--strategy', dest='strategies', action='append',
                            choices=list(pyapcc.StrategyKind.ALL), help='strategy to run, repeatable')
        parser.add_argument('--mode', choices=list(pyapcc.SamplingMode.ALL), help='worker delay sampling')
        parser.add_argument('--out', help='output path, - for the standard output')
        parser.add_argument('--jobs', type=int, help='Monte Carlo processes, 0 for one per physical core')
        parser.add_argument('--threshold-scale', dest='threshold_scale', type=float,
                            help='multiplier on d inside coded thresholds')
        return None

    def add_arguments(self, parser):
        """
        Adds arguments to the given parser.

        Not implemented.  The derived class must implement this.

        :param parser: the parser to add the arguments to

        :raise:
          NotImplementedError: always.
        """
        raise NotImplementedError('%s not implemented.' % self.__class__.__name__)

    def run(self, args):
        """
        Runs the command.

        Not implemented.  The derived class must implement this.

        :param args: the arguments passed on the command-line

        :raise:
          NotImplementedError: always.
        """
        raise NotImplementedError('%s not implemented.' % self.__class__.__name__)


class OptimizeCommand(Command):
    """Command for partitioning a task into sets."""
    name = 'optimize'
    description = 'Partitions K subtasks into r sets minimizing the largest expected set time.'
    help = 'optimize the task partition'

    def add_arguments(self, parser):
        """
        Adds the optimize command arguments to the parser.

        :param parser: the parser to add the arguments to
        """
        return self.add_common_arguments(parser)

    def run(self, args):
        """
        Writes the partition found by every method with its objective.

        Brute force is only attempted below ``partopt.BRUTE_FORCE_LIMIT`` compositions.

        :param args: the arguments passed on the command-line
        """
        config = self.create_config(args)
        k = self.total_subtasks(config)
        rows = []
        for cancellation in config.cancellation:
            model = pyapcc.OptimModel(config.n, k, config.l, config.d, config.r, k * config.mu0, config.a0 / k,
                                      cancellation, degree=config.d * config.threshold_scale)
            rows.extend(self.solve(model))

        with self.open_output(config.out) as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['method', 'cancellation', 'set_sizes', 'objective_s'])
            for method, cancellation, sizes, objective in rows:
                writer.writerow([method, str(cancellation).lower(), ' '.join(sizes), '%.9g' % objective])

    @staticmethod
    def solve(model):
        """
        Runs every partitioning method on one model.

        :param model: ``OptimModel``

        :return: list of ``(method, cancellation, sizes, objective)`` rows.
        """
        rows = []
        try:
            z_star, real_sizes = partopt.solve_relaxed(model)
            rows.append(('relaxed', model.cancellation, ['%.6f' % s for s in real_sizes], z_star))
            initial = partopt.round_and_repair(real_sizes, model.k, model)
        except pyapcc.APCCException as e:
            if e.code == pyapcc.APCCPartitionErrors.INFEASIBLE_MODEL:
                raise
            logger.warning('Relaxed solution unavailable (%s), starting from an even split.', e.message)
            initial = partopt.even_split(model)
        rows.append(('rounded', model.cancellation, [str(s) for s in initial],
                     max(partopt.per_set_times(initial, model))))

        solution = partopt.mvd(model, initial)
        rows.append(('mvd', model.cancellation, [str(s) for s in solution.set_sizes], solution.objective))

        try:
            exact = partopt.brute_force(model)
            rows.append(('brute_force', model.cancellation, [str(s) for s in exact.set_sizes], exact.objective))
        except pyapcc.APCCPartitionException as e:
            if e.code != pyapcc.APCCPartitionErrors.TOO_LARGE:
                raise
            logger.info('Skipping brute force: %s', e.message)
        return rows


class SimulateCommand(Command):
    """Command for simulating the completion delay of the strategies."""
    name = 'simulate'
    description = 'Simulates the mean completion delay of every strategy over the task division sweep.'
    help = 'simulate completion delays'

    def add_arguments(self, parser):
        """
        Adds the simulate command arguments to the parser.

        :param parser: the parser to add the arguments to
        """
        return self.add_common_arguments(parser)

    def run(self, args):
        """
        Writes one CSV row per strategy, division count and cancellation setting.

        :param args: the arguments passed on the command-line
        """
        config = self.create_config(args)
        on_progress = Utils.sweep_progress_callback if args.verbose else None
        rows = stragsim.sweep(config.strategies, config.kdivs(), config.n, config.l, config.d, config.r,
                              config.mu0, config.a0, config.trials, config.seed, config.cancellation,
                              config.mode, config.threshold_scale, config.jobs, on_progress)

        with self.open_output(config.out) as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator='\n')
            writer.writeheader()
            for row in rows:
                row = dict(row, cancellation=str(row['cancellation']).lower())
                for key in ('mean_delay_s', 'stderr_s', 'min_delay_s'):
                    row[key] = '%.9g' % row[key]
                writer.writerow(row)


class DemoCommand(Command):
    """Command for running coded gradient descent on a linear regression."""
    name = 'demo'
    description = (
        'Runs gradient descent on a synthetic linear regression, computing every '
        'gradient through the coded workers.'
    )
    help = 'run the coded linear regression demo'

    def add_arguments(self, parser):
        """
        Adds the demo command arguments to the parser.

        :param parser: the parser to add the arguments to
        """
        parser.add_argument('--samples', type=int, help='number of samples p')
        parser.add_argument('--features', type=int, help='number of features q')
        parser.add_argument('--iterations', type=int, help='gradient descent iterations')
        parser.add_argument('--eta', type=float, help='learning rate')
        parser.add_argument('--dump-shares', dest='dump_shares',
                            help='write the first encoded shares to this JSON file')
        return self.add_common_arguments(parser)

    def run(self, args):
        """
        Runs the demo and writes its report.

        Each worker computes ``D^T D w`` on its shares; results reach the
        master in the order of the simulated worker delays.  With ``L = 0``
        the data blocks are replicated uncoded.

        :param args: the arguments passed on the command-line

        :raise:
          APCCException: if ``p`` is not a multiple of ``K`` or ``d != 2``.
        """
        config = self.create_config(args)
        k = self.total_subtasks(config)
        if config.d != 2:
            raise pyapcc.APCCException(pyapcc.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'The regression gradient has degree 2, got d = %d.' % config.d)
        if config.samples % k:
            raise pyapcc.APCCException(pyapcc.APCCGlobalErrors.INVALID_ARGUMENT,
                                       '%d samples cannot be split into %d subtasks.' % (config.samples, k))

        uncoded = config.l == 0
        mode = pyapcc.DecodeMode.UNCODED if uncoded else pyapcc.DecodeMode.ACCURATE
        threshold_kind = pyapcc.ThresholdKind.UNCODED if uncoded else pyapcc.ThresholdKind.CODED
        model = pyapcc.OptimModel(config.n, k, config.l, config.d, config.r, k * config.mu0, config.a0 / k,
                                  threshold_kind=threshold_kind)
        plan = codec.make_plan(k, partopt.optimize(model).set_sizes)
        delay_model = pyapcc.DelayModel(config.mu0, config.a0, k, config.mode)

        rng = np.random.default_rng(config.seed)
        x = rng.standard_normal((config.samples, config.features))
        y = x @ rng.standard_normal(config.features) + 0.1 * rng.standard_normal(config.samples)
        blocks = np.split(x, k)
        xty = x.T @ y

        w = np.zeros(config.features)
        deviation = 0.0
        for iteration in range(config.iterations):
            contexts, shares = codec.encode_task(plan, blocks, config.n, config.l, config.d, rng, mode)
            if iteration == 0 and args.dump_shares is not None:
                with open(args.dump_shares, 'w', encoding='utf-8') as f:
                    f.write(codec.dump_shares([s for set_shares in shares for s in set_shares]))

            weights = w.copy()
            results = [codec.apply_function(lambda block: block.T @ (block @ weights), set_shares)
                       for set_shares in shares]
            arrivals = np.cumsum(stragsim.draw_durations(delay_model, config.n, plan.r, rng), axis=1)
            ordered = [results[i][n] for i in range(plan.r) for n in np.argsort(arrivals[:, i], kind='stable')]

            coded = np.sum(codec.decode_task(contexts, ordered), axis=0)[:, 0] - xty
            direct = x.T @ (x @ w) - xty
            scale = max(np.max(np.abs(direct)), np.finfo(float).tiny)
            deviation = max(deviation, float(np.max(np.abs(coded - direct)) / scale))
            w = w - config.eta * coded
            logger.debug('Iteration %d: relative gradient deviation %.3e.', iteration, deviation)

        loss = 0.5 * float(np.mean((x @ w - y) ** 2))
        with self.open_output(config.out) as f:
            f.write('Partition: %s%s' % (list(plan.set_sizes), os.linesep))
            f.write('Mode: %s%s' % (mode, os.linesep))
            f.write('Iterations: %d%s' % (config.iterations, os.linesep))
            f.write('Max relative gradient deviation: %.3e%s' % (deviation, os.linesep))
            f.write('Final loss: %.6f%s' % (loss, os.linesep))


class ReportCostsCommand(Command):
    """Command for comparing the costs of APCC and LCC."""
    name = 'report-costs'
    description = 'Reports the communication and operation counts of APCC and LCC at equal worker load.'
    help = 'report APCC and LCC costs'

    def add_arguments(self, parser):
        """
        Adds the report-costs command arguments to the parser.

        :param parser: the parser to add the arguments to
        """
        return self.add_common_arguments(parser)

    def run(self, args):
        """
        Writes the cost terms with ``K' = K / r``.

        :param args: the arguments passed on the command-line

        :raise:
          APCCException: if ``K`` is not a multiple of ``r``.
        """
        config = self.create_config(args)
        k = self.total_subtasks(config)
        if k % config.r:
            raise pyapcc.APCCException(pyapcc.APCCGlobalErrors.INVALID_ARGUMENT,
                                       'K = %d is not a multiple of r = %d.' % (k, config.r))
        kdiv = k // config.r
        costs = analysis.communication_costs(k, config.r, kdiv, config.n, config.l, config.d)
        counts = analysis.operation_counts(k, config.r, kdiv, config.n)

        with self.open_output(config.out) as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['term', 'apcc', 'lcc'])
            writer.writerow(['input_per_worker', '%.6g' % costs['apcc_input'], '%.6g' % costs['lcc_input']])
            writer.writerow(['feedback_per_round', costs['apcc_feedback'], costs['lcc_feedback']])
            writer.writerow(['feedback_equivalent', costs['apcc_feedback'], costs['lcc_feedback_equivalent']])
            writer.writerow(['encode_operations', counts['apcc_encode'], counts['lcc_encode']])
            writer.writerow(['decode_operations', counts['apcc_decode'], counts['lcc_decode']])


def commands():
    """
    Returns the program commands.

    :return:
      A list of commands.
    """
    return map(lambda c: c(), CommandMeta.registry.values())


def create_parser():
    """Builds the command parser.

    This needs to be exported in order for Sphinx to document it correctly.

    :return:
      An instance of an ``argparse.ArgumentParser`` that parses all the commands supported by the pyapcc CLI.
    """
    parser = argparse.ArgumentParser(prog=pyapcc.__title__,
                                     description=pyapcc.__description__,
                                     epilog=pyapcc.__copyright__)
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + pyapcc.__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='increase output verbosity')

    kwargs = {'title': 'command', 'description': 'specify subcommand to run', 'help': 'subcommands'}
    subparsers = parser.add_subparsers(**kwargs)

    for command in commands():
        kwargs = {'name': command.name, 'description': command.description, 'help': command.help}
        subparser = subparsers.add_parser(**kwargs)
        subparser.set_defaults(command=command.run)
        command.add_arguments(subparser)

    return parser


def main(args=None):
    """
    Main command-line interface entrypoint.

    Runs the given subcommand or argument that were specified.  If not given a ``args`` parameter, assumes the
    arguments are passed on the command-line.

    :param args: list of command-line arguments

    :return:
      Zero on success, two on an infeasible configuration, one otherwise.
    """
    if args is None:
        args = sys.argv[1:]

    parser = create_parser()
    args = parser.parse_args(args)

    if args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose >= 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(level=level)

    try:
        if hasattr(args, 'command'):
            args.command(args)
        else:
            parser.error('too few arguments')
    except pyapcc.APCCException as e:
        sys.stderr.write('Error: %s%s' % (str(e), os.linesep))
        return 2 if e.infeasible else 1

    return 0


if __name__ == '__main__':
    exit(main())
