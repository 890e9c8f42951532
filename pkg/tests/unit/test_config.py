# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

import pyapcc
import pyapcc.config as config

import argparse
import json
import os
import tempfile
import unittest


class TestConfig(unittest.TestCase):
    """
    Unit test for the `config` submodule.
    """

    def setUp(self):
        """
        Called before each test.

        Performs setup.
        """
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        """
        Called after each test.

        Performs teardown.
        """
        self.directory.cleanup()

    def write_json(self, value):
        """
        Writes ``value`` to a JSON file in the test directory and returns its path.
        """
        path = os.path.join(self.directory.name, 'settings.json')
        with open(path, 'w', encoding='utf-8') as f:
            if isinstance(value, str):
                f.write(value)
            else:
                json.dump(value, f)
        return path

    def test_defaults(self):
        """
        Tests the built-in defaults and the derived division limit.
        """
        cfg = config.ExperimentConfig.from_sources()
        self.assertEqual(100, cfg.n)
        self.assertEqual(10, cfg.l)
        self.assertEqual(16, cfg.r)
        self.assertEqual([False, True], cfg.cancellation)
        self.assertEqual(pyapcc.SamplingMode.PERSISTENT, cfg.mode)
        self.assertEqual(40, cfg.kdiv_max)
        self.assertEqual(list(range(1, 41)), cfg.kdivs())

    def test_defaults_are_copied(self):
        """
        Tests that changing one configuration leaves the defaults untouched.
        """
        cfg = config.ExperimentConfig()
        cfg.strategies.append(pyapcc.StrategyKind.BACC)
        self.assertEqual([pyapcc.StrategyKind.APCC, pyapcc.StrategyKind.LCC], config.DEFAULTS['strategies'])

    def test_preset(self):
        """
        Tests a preset overrides the defaults.
        """
        cfg = config.ExperimentConfig.from_sources(preset='fig4')
        self.assertEqual((200, 20, 4, 6), (cfg.n, cfg.l, cfg.d, cfg.r))
        self.assertEqual(30, cfg.kdiv_max)

        cfg = config.ExperimentConfig.from_sources(preset='approximate')
        self.assertEqual(0.5, cfg.threshold_scale)
        self.assertEqual([True], cfg.cancellation)
        self.assertIn(pyapcc.StrategyKind.BACC, cfg.strategies)

        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig.from_sources(preset='fig9')

    def test_priority(self):
        """
        Tests flags override the file, which overrides the preset.
        """
        path = self.write_json({'n': 60, 'l': 2, 'trials': 500, 'cancellation': True, 'strategies': 'lcc'})
        cfg = config.ExperimentConfig.from_sources(preset='fig4', path=path)
        self.assertEqual((60, 2, 4, 6), (cfg.n, cfg.l, cfg.d, cfg.r))
        self.assertEqual([True], cfg.cancellation)
        self.assertEqual(['lcc'], cfg.strategies)

        args = argparse.Namespace(n=None, l=3, trials=None, preset='fig4', config=path, verbose=2)
        cfg = config.ExperimentConfig.from_sources(args, preset='fig4', path=path)
        self.assertEqual((60, 3, 500), (cfg.n, cfg.l, cfg.trials))

    def test_kdiv_range(self):
        """
        Tests the division sweep must fit the division limit.
        """
        cfg = config.ExperimentConfig.from_sources(argparse.Namespace(kdiv_min=3, kdiv_max=5))
        self.assertEqual([3, 4, 5], cfg.kdivs())

        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig.from_sources(argparse.Namespace(kdiv_max=41))

        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig.from_sources(argparse.Namespace(kdiv_min=6, kdiv_max=5))

        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig.from_sources(argparse.Namespace(n=5, l=3))

    def test_invalid_values(self):
        """
        Tests that invalid settings are rejected.
        """
        invalid = [{'n': 0}, {'n': 10.5}, {'l': -1}, {'d': True}, {'k': 0}, {'a0': 0.0}, {'mu0': -1.0},
                   {'mode': 'bursty'}, {'strategies': ['mds']}, {'strategies': []}, {'cancellation': []},
                   {'cancellation': ['yes']}, {'threshold_scale': 0.0}, {'eta': -0.1}, {'samples': 1024},
                   {'features': 64}, {'jobs': -2}]
        for values in invalid:
            with self.assertRaises(pyapcc.APCCException, msg=str(values)) as context:
                config.ExperimentConfig(**values).validate()
            self.assertTrue(context.exception.infeasible)

    def test_unknown_key(self):
        """
        Tests that settings outside the defaults are rejected.
        """
        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig(workers=10)

        path = self.write_json({'workers': 10})
        with self.assertRaises(pyapcc.APCCException):
            config.ExperimentConfig.from_sources(path=path)

    def test_bad_file(self):
        """
        Tests that unreadable or malformed files are reported.
        """
        with self.assertRaises(pyapcc.APCCException):
            config.load_file(os.path.join(self.directory.name, 'missing.json'))

        with self.assertRaises(pyapcc.APCCException):
            config.load_file(self.write_json('{"n": '))

        with self.assertRaises(pyapcc.APCCException):
            config.load_file(self.write_json([1, 2]))

    def test_str(self):
        """
        Tests the printable form lists every setting.
        """
        text = str(config.ExperimentConfig())
        self.assertTrue(text.startswith("strategies=['apcc', 'lcc'], n=100"))
        self.assertIn('kdiv_max=None', text)
        self.assertTrue(repr(config.ExperimentConfig()).startswith('ExperimentConfig('))


if __name__ == '__main__':
    unittest.main()
