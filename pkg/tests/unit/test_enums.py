# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

import pyapcc.enums as enums
import unittest


class TestEnums(unittest.TestCase):
    """
    Unit test for the `enums` submodule.
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

    def test_global_errors(self):
        """
        Tests the global error codes can be converted to strings.
        """
        for code in (enums.APCCGlobalErrors.UNSPECIFIED_ERROR, enums.APCCGlobalErrors.INVALID_ARGUMENT):
            self.assertTrue(isinstance(enums.APCCGlobalErrors.to_string(code), str))

        with self.assertRaises(ValueError):
            enums.APCCGlobalErrors.to_string(1)

    def test_module_errors(self):
        """
        Tests every module error code has its own message and falls back on
        the global codes.
        """
        classes = {
            enums.APCCInterpErrors: ['DEGENERATE_NODES'],
            enums.APCCCodecErrors: ['PARTITION_SUM', 'INFEASIBLE_THRESHOLD', 'INSUFFICIENT_RESULTS',
                                    'COMPLEXITY_GUARD'],
            enums.APCCPartitionErrors: ['INFEASIBLE_SET', 'INFEASIBLE_MODEL', 'NUMERIC_ERROR', 'TOO_LARGE'],
            enums.APCCSimulationErrors: ['INFEASIBLE_THRESHOLD'],
        }
        global_message = enums.APCCGlobalErrors.to_string(enums.APCCGlobalErrors.INVALID_ARGUMENT)
        for cls, names in classes.items():
            messages = set()
            for name in names:
                message = cls.to_string(getattr(cls, name))
                self.assertTrue(isinstance(message, str))
                self.assertNotEqual(global_message, message)
                messages.add(message)
            self.assertEqual(len(names), len(messages))
            self.assertEqual(global_message, cls.to_string(cls.INVALID_ARGUMENT))
            with self.assertRaises(ValueError):
                cls.to_string(0)

    def test_codes_are_unique(self):
        """
        Tests that no two error codes share a value.
        """
        codes = [
            enums.APCCGlobalErrors.UNSPECIFIED_ERROR,
            enums.APCCGlobalErrors.INVALID_ARGUMENT,
            enums.APCCInterpErrors.DEGENERATE_NODES,
            enums.APCCCodecErrors.PARTITION_SUM,
            enums.APCCCodecErrors.INFEASIBLE_THRESHOLD,
            enums.APCCCodecErrors.INSUFFICIENT_RESULTS,
            enums.APCCCodecErrors.COMPLEXITY_GUARD,
            enums.APCCPartitionErrors.INFEASIBLE_SET,
            enums.APCCPartitionErrors.INFEASIBLE_MODEL,
            enums.APCCPartitionErrors.NUMERIC_ERROR,
            enums.APCCPartitionErrors.TOO_LARGE,
            enums.APCCSimulationErrors.INFEASIBLE_THRESHOLD,
        ]
        self.assertEqual(len(codes), len(set(codes)))

    def test_configuration_errors(self):
        """
        Tests which codes the command-line front end treats as configuration problems.
        """
        self.assertIn(enums.APCCGlobalErrors.INVALID_ARGUMENT, enums.CONFIGURATION_ERRORS)
        self.assertIn(enums.APCCPartitionErrors.INFEASIBLE_MODEL, enums.CONFIGURATION_ERRORS)
        self.assertIn(enums.APCCSimulationErrors.INFEASIBLE_THRESHOLD, enums.CONFIGURATION_ERRORS)
        self.assertNotIn(enums.APCCPartitionErrors.NUMERIC_ERROR, enums.CONFIGURATION_ERRORS)
        self.assertNotIn(enums.APCCCodecErrors.INSUFFICIENT_RESULTS, enums.CONFIGURATION_ERRORS)
        self.assertNotIn(enums.APCCGlobalErrors.UNSPECIFIED_ERROR, enums.CONFIGURATION_ERRORS)

    def test_string_enumerations(self):
        """
        Tests the string enumerations list all their members.
        """
        self.assertEqual(('accurate', 'approximate', 'uncoded'), enums.DecodeMode.ALL)
        self.assertEqual(('persistent', 'iid'), enums.SamplingMode.ALL)
        self.assertEqual(('apcc', 'lcc', 'lcc-mmc', 'bacc'), enums.StrategyKind.ALL)
        self.assertEqual(3, len(enums.NodeKind.ALL))
        self.assertEqual(2, len(enums.ThresholdKind.ALL))


if __name__ == '__main__':
    unittest.main()
