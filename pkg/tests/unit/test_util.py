# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

from pyapcc.utils import Utils
try:
    import StringIO
except ImportError:
    import io as StringIO
import numpy as np
import unittest
from unittest.mock import patch


class TestUtil(unittest.TestCase):
    """
    Unit test for the `util` submodule.
    """

    def setUp(self):
        """
        Called before each test.

        Performs setup.
        """
        pass

    def tearDown(self):
        """
        Called after each test.

        Performs teardown.
        """
        pass

    def test_is_integer(self):
        """
        Tests that the `is_integer()` method returns correctly.
        """
        self.assertTrue(Utils.is_integer(4))
        self.assertTrue(Utils.is_integer(0))
        self.assertTrue(Utils.is_integer(-1))
        self.assertTrue(Utils.is_integer(np.int64(7)))

        self.assertFalse(Utils.is_integer('4'))
        self.assertFalse(Utils.is_integer(4.0))
        self.assertFalse(Utils.is_integer(True))

    def test_is_natural(self):
        """
        Tests that the `is_natural()` method returns correctly.
        """
        self.assertTrue(Utils.is_natural(4))
        self.assertTrue(Utils.is_natural(0))

        self.assertFalse(Utils.is_natural(-1))
        self.assertFalse(Utils.is_natural('4'))
        self.assertFalse(Utils.is_natural(None))

    def test_is_positive(self):
        """
        Tests that the `is_positive()` method rejects zero.
        """
        self.assertTrue(Utils.is_positive(1))
        self.assertTrue(Utils.is_positive(np.int32(12)))

        self.assertFalse(Utils.is_positive(0))
        self.assertFalse(Utils.is_positive(2.5))

    def test_progress_bar(self):
        """
        Tests the progress bar writes to the given stream.

        When percent is full, the `progress_bar()` should append a newline to
        the stream, otherwise not.
        """
        stream = StringIO.StringIO()
        self.assertEqual(None, Utils.progress_bar(0, 100, stream=stream))
        self.assertFalse(stream.getvalue().endswith('\n'))

        self.assertEqual(None, Utils.progress_bar(100, 100, prefix='sweep', stream=stream))

        messages = stream.getvalue().split('\n')
        self.assertEqual(2, len(messages))
        self.assertIn('sweep |' + '█' * 50 + '| 100.0%', messages.pop(0))
        self.assertTrue(messages.pop(0) == '')

    @patch('sys.stderr', new_callable=StringIO.StringIO)
    def test_sweep_progress_callback(self, stream):
        """
        Tests that the callback draws a progress bar on standard error.
        """
        self.assertEqual(None, Utils.sweep_progress_callback(1, 4))
        self.assertIn('1/4', stream.getvalue())
        self.assertFalse(stream.getvalue().endswith('\n'))

        Utils.sweep_progress_callback(4, 4)
        self.assertTrue(stream.getvalue().endswith('\n'))


if __name__ == '__main__':
    unittest.main()
