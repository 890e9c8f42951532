# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

import pyapcc
import pyapcc.structs as structs

import numpy as np
import unittest


class TestStructs(unittest.TestCase):
    """
    Unit test for the `structs` submodule.
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

    def test_node_set(self):
        """
        Tests a node set stores its nodes read-only.
        """
        nodes = structs.NodeSet([0.5, -0.5, 1.0])
        self.assertEqual(3, len(nodes))
        self.assertEqual(-0.5, nodes[1])
        self.assertEqual([0.5, -0.5, 1.0], list(nodes))
        self.assertEqual(pyapcc.NodeKind.ARBITRARY, nodes.kind)
        self.assertEqual('NodeSet(arbitrary, 3 nodes)', repr(nodes))
        with self.assertRaises(ValueError):
            nodes.nodes[0] = 0.0

    def test_node_set_invalid(self):
        """
        Tests that empty, out of range or repeated nodes are rejected.
        """
        with self.assertRaises(pyapcc.APCCException):
            structs.NodeSet([])

        with self.assertRaises(pyapcc.APCCException):
            structs.NodeSet([0.0, 1.5])

        with self.assertRaises(pyapcc.APCCException):
            structs.NodeSet([0.0, float('nan')])

        with self.assertRaises(pyapcc.APCCException):
            structs.NodeSet([0.0], kind='legendre')

        with self.assertRaises(pyapcc.APCCInterpException) as context:
            structs.NodeSet([0.25, 0.0, 0.25])
        self.assertEqual(pyapcc.APCCInterpErrors.DEGENERATE_NODES, context.exception.code)

    def test_node_set_repeated_allowed(self):
        """
        Tests that repeated nodes are kept when distinctness is not required.
        """
        nodes = structs.NodeSet([0.25, 0.0, 0.25], distinct=False)
        self.assertEqual(3, len(nodes))

    def test_partition_plan(self):
        """
        Tests the offsets and equality of partition plans.
        """
        plan = structs.PartitionPlan(12, [5, 4, 3])
        self.assertEqual(3, plan.r)
        self.assertEqual([0, 5, 9], plan.offsets())
        self.assertEqual(structs.PartitionPlan(12, (5, 4, 3)), plan)
        self.assertNotEqual(structs.PartitionPlan(12, [4, 4, 4]), plan)
        self.assertEqual('K = 12, sets = [5, 4, 3]', str(plan))

    def test_codec_context_default_threshold(self):
        """
        Tests the default approximate threshold is ``min(N, ceil(N/2) + 1)``.
        """
        nodes = structs.NodeSet([0.5, -0.5])
        weights = structs.BaryWeights([1.0, -1.0])
        ctx = structs.CodecContext(0, 1, 1, 10, 2, pyapcc.DecodeMode.APPROXIMATE, nodes, nodes, weights)
        self.assertEqual(6, ctx.approx_threshold)
        self.assertEqual([0.5], ctx.data_nodes.tolist())

        ctx = structs.CodecContext(0, 1, 1, 1, 2, pyapcc.DecodeMode.APPROXIMATE, nodes, nodes, weights)
        self.assertEqual(1, ctx.approx_threshold)

        ctx = structs.CodecContext(0, 1, 1, 9, 2, pyapcc.DecodeMode.APPROXIMATE, nodes, nodes, weights, 3)
        self.assertEqual(3, ctx.approx_threshold)

    def test_record_dict(self):
        """
        Tests the JSON shape of share records.
        """
        share = structs.EncodedShare(1, 7, 0.25, [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        value = share.to_dict()
        self.assertEqual({'set': 1, 'worker': 7, 'x': 0.25, 'rows': 3, 'cols': 2,
                          'data': [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]}, value)

        result = structs.ReturnedResult.from_dict(value)
        self.assertTrue(isinstance(result, structs.ReturnedResult))
        self.assertEqual((1, 7, 0.25), (result.set_index, result.worker_index, result.eval_point))
        self.assertTrue(np.array_equal(share.payload, result.payload))

    def test_record_dict_invalid(self):
        """
        Tests that malformed records are rejected.
        """
        value = {'set': 0, 'worker': 0, 'x': 0.0, 'rows': 2, 'cols': 2, 'data': [1.0, 2.0, 3.0]}
        with self.assertRaises(pyapcc.APCCException):
            structs.EncodedShare.from_dict(value)

        del value['rows']
        with self.assertRaises(pyapcc.APCCException):
            structs.EncodedShare.from_dict(value)

        with self.assertRaises(pyapcc.APCCException):
            structs.EncodedShare.from_dict(None)

    def test_optim_model(self):
        """
        Tests the validation of the optimizer model.
        """
        model = structs.OptimModel(10, 12, 1, 2, 3, 2.4, 0.5 / 12)
        self.assertEqual(2, model.degree)
        self.assertFalse(model.cancellation)
        self.assertEqual(pyapcc.ThresholdKind.CODED, model.threshold_kind)

        model = structs.OptimModel(10, 12, 1, 2, 3, 2.4, 0.0, True, degree=1.0)
        self.assertEqual(1.0, model.degree)

        with self.assertRaises(pyapcc.APCCException):
            structs.OptimModel(10, 0, 1, 2, 3, 2.4, 0.1)

        with self.assertRaises(pyapcc.APCCException):
            structs.OptimModel(10, 12, 1, 2, 3, 0.0, 0.1)

        with self.assertRaises(pyapcc.APCCException):
            structs.OptimModel(10, 12, 1, 2, 3, 1.0, -0.1)

        with self.assertRaises(pyapcc.APCCException):
            structs.OptimModel(10, 12, 1, 2, 3, 1.0, 0.1, threshold_kind='exact')

    def test_partition_solution(self):
        """
        Tests the objective of a partition solution is its largest set time.
        """
        solution = structs.PartitionSolution(np.array([3, 2]), [1.5, 2.5])
        self.assertEqual((3, 2), solution.set_sizes)
        self.assertEqual(2.5, solution.objective)
        self.assertEqual([2.5], solution.history)

    def test_delay_model(self):
        """
        Tests the subtask-level parameters of the delay model.
        """
        model = structs.DelayModel(0.2, 0.5, 10)
        self.assertAlmostEqual(2.0, model.mu)
        self.assertAlmostEqual(0.05, model.a)
        self.assertEqual(pyapcc.SamplingMode.PERSISTENT, model.sampling_mode)

        with self.assertRaises(pyapcc.APCCException):
            structs.DelayModel(0.0, 0.5, 10)

        with self.assertRaises(pyapcc.APCCException):
            structs.DelayModel(0.2, 0.5, 0)

        with self.assertRaises(pyapcc.APCCException):
            structs.DelayModel(0.2, 0.5, 10, 'bursty')

    def test_strategy_config_thresholds(self):
        """
        Tests the recovery thresholds of every strategy.
        """
        plan = structs.PartitionPlan(12, [4, 4, 4])
        apcc = structs.StrategyConfig(pyapcc.StrategyKind.APCC, 10, 1, 2, plan=plan, cancellation=True)
        self.assertEqual(3, apcc.r)
        self.assertEqual(12, apcc.divisions)
        self.assertTrue(apcc.cancellation)
        self.assertEqual([9, 9, 9], apcc.thresholds())

        lcc = structs.StrategyConfig(pyapcc.StrategyKind.LCC, 10, 1, 2, divisions=4, r=3, cancellation=True)
        self.assertEqual(1, lcc.r)
        self.assertFalse(lcc.cancellation)
        self.assertEqual([9], lcc.thresholds())

        mmc = structs.StrategyConfig(pyapcc.StrategyKind.LCC_MMC, 10, 0, 2, divisions=12, r=3)
        self.assertEqual(3, mmc.r)
        self.assertEqual([23], mmc.thresholds())

        bacc = structs.StrategyConfig(pyapcc.StrategyKind.BACC, 10, 1, 2, divisions=4, bacc_threshold=6)
        self.assertEqual([6], bacc.thresholds())

        scaled = structs.StrategyConfig(pyapcc.StrategyKind.LCC, 10, 1, 2, divisions=4, threshold_scale=0.5)
        self.assertEqual([5], scaled.thresholds())
        self.assertEqual(4, scaled.coded_threshold(3))

    def test_strategy_config_invalid(self):
        """
        Tests that incomplete strategies are rejected.
        """
        with self.assertRaises(pyapcc.APCCException):
            structs.StrategyConfig('mds', 10, 1, 2, divisions=4)

        with self.assertRaises(pyapcc.APCCException):
            structs.StrategyConfig(pyapcc.StrategyKind.APCC, 10, 1, 2)

        with self.assertRaises(pyapcc.APCCException):
            structs.StrategyConfig(pyapcc.StrategyKind.LCC, 10, 1, 2)

        with self.assertRaises(pyapcc.APCCException):
            structs.StrategyConfig(pyapcc.StrategyKind.BACC, 10, 1, 2, divisions=4)

    def test_sim_outcome(self):
        """
        Tests the derived statistics of a simulation outcome.
        """
        outcome = structs.SimOutcome(np.array([3.0, 1.0, 2.0]), None, 2.0, 0.5)
        self.assertEqual(1.0, outcome.min_delay)
        self.assertEqual(3, outcome.trials)
        self.assertEqual('mean = 2.000000 s, stderr = 0.500000 s, 3 trials', str(outcome))


if __name__ == '__main__':
    unittest.main()
