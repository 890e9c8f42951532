# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT
"""
utils module
"""

import numbers
import sys


class Utils:
    """
    Utils class
    """
    @staticmethod
    def is_integer(val):
        """
        Returns whether the given value is an integer.

        :param val : value to check

        :return:
          ``True`` if the given value is an integer, otherwise ``False``.
        """
        return isinstance(val, numbers.Integral) and not isinstance(val, bool)

    @staticmethod
    def is_natural(val) -> bool:
        """
        Returns whether the given value is a natural number.

        :param val : value to check

        :return:
          ``True`` if the given value is a natural number, otherwise ``False``.
        """
        return Utils.is_integer(val) and (val >= 0)

    @staticmethod
    def is_positive(val) -> bool:
        """
        Returns whether the given value is a strictly positive integer.

        :param val : value to check

        :return:
          ``True`` if the given value is an integer above zero, otherwise ``False``.
        """
        return Utils.is_integer(val) and (val > 0)

    @staticmethod
    def progress_bar(iteration: int,
                     total: int,
                     prefix=None,
                     suffix=None,
                     decs=1,
                     length=50,
                     stream=None):
        """
        Creates a console progress bar.

        This should be called in a loop to create a progress bar.

        :param iteration: current iteration
        :param total: total iterations
        :param prefix: prefix string
        :param suffix: suffix string
        :param decs: positive number of decimals in percent complete
        :param length: character length of the bar
        :param stream: output stream, standard error by default

        :note:
          This function assumes that nothing else is printed to the stream in the interim.
        """
        stream = sys.stderr if stream is None else stream

        if prefix is None:
            prefix = ''

        if suffix is None:
            suffix = ''

        format_str = '{0:.' + str(decs) + 'f}'
        percents = format_str.format(100 * (iteration / float(total)))
        filled_length = int(round(length * iteration / float(total)))
        bar = '█' * filled_length + '-' * (length - filled_length)

        prefix, suffix = prefix.strip(), suffix.strip()

        stream.write('\r%s |%s| %s%s %s' % (prefix, bar, percents, '%', suffix))
        stream.flush()

        if iteration == total:
            stream.write('\n')
            stream.flush()

    @staticmethod
    def sweep_progress_callback(done: int, total: int):
        """
        Callback that can be used with ``stragsim.sweep()``.

        Draws a progress bar on standard error while the sweep points are simulated.

        :param done: number of points simulated so far
        :param total: number of points in the sweep
        """
        Utils.progress_bar(done, total, prefix='sweep', suffix='%d/%d' % (done, total))
