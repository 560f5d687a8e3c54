# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import unittest


from nessaid_mining_tests.test_tokenizer import tokenizer_test
from nessaid_mining_tests.test_game import game_test
from nessaid_mining_tests.test_dynamics import dynamics_test
from nessaid_mining_tests.test_equilibria import equilibria_test
from nessaid_mining_tests.test_reward_design import reward_design_test
from nessaid_mining_tests.test_scenario import scenario_test
from nessaid_mining_tests.test_cmd import cmd_test


def doTests():
    print('Started Nessaid Mining Game testing.\n')
    unittest.TextTestRunner(verbosity=2).run(tokenizer_test)
    unittest.TextTestRunner(verbosity=2).run(game_test)
    unittest.TextTestRunner(verbosity=2).run(dynamics_test)
    unittest.TextTestRunner(verbosity=2).run(equilibria_test)
    unittest.TextTestRunner(verbosity=2).run(reward_design_test)
    unittest.TextTestRunner(verbosity=2).run(scenario_test)
    unittest.TextTestRunner(verbosity=2).run(cmd_test)
