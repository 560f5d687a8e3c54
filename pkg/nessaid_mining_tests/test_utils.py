# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import sys
from io import StringIO
from contextlib import contextmanager

from nessaid_mining.game import Game


@contextmanager
def captured_output():
    new_out, new_err = StringIO(), StringIO()
    old_out, old_err = sys.stdout, sys.stderr
    try:
        sys.stdout, sys.stderr = new_out, new_err
        yield sys.stdout, sys.stderr
    finally:
        sys.stdout, sys.stderr = old_out, old_err


def random_game(rng, n, k, symmetric=False, low=1, high=1000):
    """A game with pairwise distinct integer powers and rewards drawn from rng.

    Symmetric games give every coin the same reward.
    """
    powers = [int(x) for x in rng.choice(high - low + 1, size=n, replace=False) + low]
    if symmetric:
        rewards = [int(rng.integers(low, high + 1))] * k
    else:
        rewards = [int(x) for x in rng.choice(high - low + 1, size=k, replace=False) + low]
    return Game(powers, rewards)


def random_configuration(rng, game):
    return tuple(int(c) for c in rng.integers(0, game.k, size=game.n))
