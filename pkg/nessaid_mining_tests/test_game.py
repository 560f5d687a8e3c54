# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import inspect
import unittest
from fractions import Fraction

import numpy as np

from nessaid_mining.game import Game, apply_move, to_rational
from nessaid_mining.utils import INFINITY, PreconditionError

from nessaid_mining_tests.test_utils import random_game, random_configuration


class GameBasicsTest(unittest.TestCase):

    def setUp(self):
        self.game = Game([2, 1], [1, 1])

    def test_defaults(self):
        game = self.game
        assert [m.id for m in game.miners] == ['p1', 'p2']
        assert [c.id for c in game.coins] == ['c1', 'c2']
        assert game.n == 2 and game.k == 2
        assert game.total_power == 3
        assert game.total_reward == 2
        assert game.is_symmetric
        assert game.configuration_count == 4

    def test_quantities(self):
        game = Game(["3/2", Fraction(5, 2), 4], [7, "1/3"], miner_ids=["a", "b", "c"], coin_ids=["x", "y"])
        assert game.powers == (Fraction(3, 2), Fraction(5, 2), Fraction(4))
        assert game.rewards == (Fraction(7), Fraction(1, 3))
        assert game.miner_index("b") == 1
        assert game.coin_index("y") == 1
        assert not game.is_symmetric

    def test_rejected_games(self):
        bad = [
            ([], [1]),
            ([1], []),
            ([0], [1]),
            ([-1], [1]),
            ([1], [0]),
            ([1], [-2]),
            ([1.5], [1]),
            ([True], [1]),
            ([1], ["1/0"]),
        ]
        for powers, rewards in bad:
            with self.assertRaises(PreconditionError, msg="powers={} rewards={}".format(powers, rewards)):
                Game(powers, rewards)

        with self.assertRaises(PreconditionError):
            Game([1, 2], [1], miner_ids=["a", "a"])
        with self.assertRaises(PreconditionError):
            Game([1], [1, 2], coin_ids=["x", "x"])
        with self.assertRaises(PreconditionError):
            Game([1, 2], [1], miner_ids=["a"])

    def test_zero_rewards(self):
        game = self.game.with_rewards([0, 5], allow_zero=True)
        assert game.rewards == (0, 5)
        assert game.miners == self.game.miners
        with self.assertRaises(PreconditionError):
            self.game.with_rewards([0, 5])

    def test_to_rational(self):
        assert to_rational(3) == 3
        assert to_rational("6/8") == Fraction(3, 4)
        for value in [0.5, True, None, [1]]:
            with self.assertRaises(PreconditionError, msg=repr(value)):
                to_rational(value)

    def test_payoffs(self):
        game = self.game
        expected = {
            (0, 0): [Fraction(2, 3), Fraction(1, 3)],
            (0, 1): [Fraction(1), Fraction(1)],
            (1, 1): [Fraction(2, 3), Fraction(1, 3)],
            (1, 0): [Fraction(1), Fraction(1)],
        }
        for s, payoffs in expected.items():
            info = "\nconfiguration: {}".format(s)
            assert game.payoffs(s) == payoffs, info
            assert [game.payoff(s, p) for p in range(game.n)] == payoffs, info
            assert game.welfare(s) == sum(payoffs), info

    def test_rpu(self):
        game = Game([2, 1], [3, 1])
        assert game.rpu((0, 0), 0) == 1
        assert game.rpu((0, 0), 1) is INFINITY
        assert game.rpus((0, 1)) == [Fraction(3, 2), Fraction(1)]
        assert game.coin_powers((0, 0)) == [3, 0]
        assert game.coin_power((1, 0), 1) == 2
        assert game.miner_set((0, 0), 0) == frozenset([0, 1])
        assert game.miner_set((0, 0), 1) == frozenset()

    def test_better_responses(self):
        game = self.game
        assert game.better_response_steps((0, 0)) == [(0, 1), (1, 1)]
        assert game.is_better_response((0, 0), 1, 1)
        assert not game.is_better_response((0, 0), 1, 0)
        assert game.better_response_targets((0, 0), 0) == (1,)
        assert game.is_stable((0, 1))
        assert game.is_stable((1, 0))
        assert not game.is_stable((0, 0))
        assert not game.is_stable((1, 1))
        assert game.is_stable_miner((0, 0), 0) is False

    def test_best_deviation(self):
        game = Game([1], [1, 3, 2])
        assert game.better_response_targets((0,), 0) == (1, 2)
        assert game.best_deviation((0,), 0) == 1
        assert game.best_deviation((1,), 0) is None

    def test_deviation_payoff(self):
        game = self.game
        assert game.deviation_payoff((0, 0), 1, 1) == 1
        assert game.deviation_payoff((0, 1), 0, 1) == Fraction(2, 3)
        assert game.deviation_payoff((0, 1), 0, 0) == game.payoff((0, 1), 0)

    def test_configurations(self):
        game = Game([3, 2, 1], [1, 2])
        configurations = list(game.configurations())
        assert len(configurations) == game.configuration_count == 8
        assert configurations[0] == (0, 0, 0)
        assert configurations[1] == (0, 0, 1)
        for i, s in enumerate(configurations):
            assert game.configuration_at(i) == s, "index {}: {} != {}".format(i, game.configuration_at(i), s)

    def test_validate_configuration(self):
        game = self.game
        assert game.validate_configuration([0, 1]) == (0, 1)
        for s in [(0,), (0, 1, 0), (0, 2), (-1, 0), ("x", 0), None]:
            with self.assertRaises(PreconditionError, msg=repr(s)):
                game.validate_configuration(s)

    def test_apply_move(self):
        s = (0, 0)
        assert apply_move(s, 1, 1) == (0, 1)
        assert s == (0, 0)
        assert apply_move(s, 0, 0) == s

    def test_occupied_reward(self):
        game = Game([2, 1], [3, 1])
        assert game.occupied_reward((0, 0)) == 3
        assert game.occupied_reward((0, 1)) == 4

    def test_equality(self):
        assert Game([2, 1], [1, 1]) == self.game
        assert hash(Game([2, 1], [1, 1])) == hash(self.game)
        assert Game([2, 1], [1, 2]) != self.game


class GameCampaignTest(unittest.TestCase):

    def test_better_response_matches_payoffs(self):
        rng = np.random.default_rng(7)
        for run in range(200):
            game = random_game(rng, int(rng.integers(1, 6)), int(rng.integers(1, 4)))
            s = random_configuration(rng, game)
            for p in range(game.n):
                for c in range(game.k):
                    expected = c != s[p] and game.deviation_payoff(s, p, c) > game.payoff(s, p)

                    info = "\n\nFunction: {}".format(inspect.stack()[0][3])
                    info += "\nrun: {}".format(run)
                    info += "\ngame: {}".format(game)
                    info += "\nconfiguration: {}".format(s)
                    info += "\nmove: p={} c={}".format(p, c)

                    assert game.is_better_response(s, p, c) == expected, info

            stable = not game.better_response_steps(s)
            assert game.is_stable(s) == stable
            assert all(game.is_stable_miner(s, p) for p in range(game.n)) == stable


testcase1 = unittest.TestLoader().loadTestsFromTestCase(GameBasicsTest)
testcase2 = unittest.TestLoader().loadTestsFromTestCase(GameCampaignTest)

game_test = unittest.TestSuite([testcase1, testcase2])
