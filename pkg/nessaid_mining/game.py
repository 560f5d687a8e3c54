# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import itertools
from fractions import Fraction
from numbers import Rational as _RationalNumber

from nessaid_mining.tokenizer.tokenizer import parse_quantity, LiteralException
from nessaid_mining.utils import INFINITY, PreconditionError


Rational = Fraction


def to_rational(value):
    """Converts an int, Fraction or "n/d" text to a Fraction.

    Floats are refused, every quantity of the game is exact.
    """
    if isinstance(value, bool):
        raise PreconditionError("Boolean is not a quantity: {!r}".format(value))
    if isinstance(value, _RationalNumber):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_quantity(value)
        except LiteralException as e:
            raise PreconditionError("Not an exact quantity: {!r}: {}".format(value, e))
    raise PreconditionError("Not an exact quantity: {!r}".format(value))


class Miner():

    def __init__(self, id, index, power):
        self._id = id
        self._index = index
        self._power = power

    @property
    def id(self):
        return self._id

    @property
    def index(self):
        return self._index

    @property
    def power(self):
        return self._power

    def __eq__(self, other):
        return (isinstance(other, Miner) and
                (self._id, self._index, self._power) == (other._id, other._index, other._power))

    def __hash__(self):
        return hash((self._id, self._index, self._power))

    def __repr__(self):
        return "Miner({}, index={}, power={})".format(self._id, self._index, self._power)


class Coin():

    def __init__(self, id, index):
        self._id = id
        self._index = index

    @property
    def id(self):
        return self._id

    @property
    def index(self):
        return self._index

    def __eq__(self, other):
        return isinstance(other, Coin) and (self._id, self._index) == (other._id, other._index)

    def __hash__(self):
        return hash((self._id, self._index))

    def __repr__(self):
        return "Coin({}, index={})".format(self._id, self._index)


class Game():
    """A mining game: miners with fixed powers, coins and a reward per coin.

    Configurations are tuples of coin indices, one entry per miner in
    declaration order. Games are immutable; with_rewards() derives a new
    game over the same system.
    """

    def __init__(self, powers, rewards, miner_ids=None, coin_ids=None, allow_zero_rewards=False):
        powers = [to_rational(m) for m in powers]
        rewards = [to_rational(r) for r in rewards]

        if not powers:
            raise PreconditionError("A game needs at least one miner")
        if not rewards:
            raise PreconditionError("A game needs at least one coin")

        miner_ids = list(miner_ids) if miner_ids is not None else ["p{}".format(i + 1) for i in range(len(powers))]
        coin_ids = list(coin_ids) if coin_ids is not None else ["c{}".format(i + 1) for i in range(len(rewards))]

        if len(miner_ids) != len(powers):
            raise PreconditionError("Miner ids and powers differ in length")
        if len(coin_ids) != len(rewards):
            raise PreconditionError("Coin ids and rewards differ in length")
        if len(set(miner_ids)) != len(miner_ids):
            raise PreconditionError("Duplicate miner id")
        if len(set(coin_ids)) != len(coin_ids):
            raise PreconditionError("Duplicate coin id")

        for miner_id, power in zip(miner_ids, powers):
            if power <= 0:
                raise PreconditionError("Power of {} must be positive: {}".format(miner_id, power))

        for coin_id, reward in zip(coin_ids, rewards):
            if reward < 0 or (reward == 0 and not allow_zero_rewards):
                raise PreconditionError("Reward of {} must be positive: {}".format(coin_id, reward))

        self._miners = tuple(Miner(miner_id, i, power) for i, (miner_id, power) in enumerate(zip(miner_ids, powers)))
        self._coins = tuple(Coin(coin_id, i) for i, coin_id in enumerate(coin_ids))
        self._powers = tuple(powers)
        self._rewards = tuple(rewards)

    @property
    def miners(self):
        return self._miners

    @property
    def coins(self):
        return self._coins

    @property
    def powers(self):
        return self._powers

    @property
    def rewards(self):
        return self._rewards

    @property
    def n(self):
        return len(self._miners)

    @property
    def k(self):
        return len(self._coins)

    @property
    def total_power(self):
        return sum(self._powers)

    @property
    def total_reward(self):
        return sum(self._rewards)

    @property
    def is_symmetric(self):
        return len(set(self._rewards)) == 1

    @property
    def configuration_count(self):
        return self.k ** self.n

    def with_rewards(self, rewards, allow_zero=False):
        return Game(self._powers, rewards,
                    miner_ids=[m.id for m in self._miners],
                    coin_ids=[c.id for c in self._coins],
                    allow_zero_rewards=allow_zero)

    def miner_index(self, miner_id):
        for miner in self._miners:
            if miner.id == miner_id:
                return miner.index
        raise PreconditionError("Unknown miner: {}".format(miner_id))

    def coin_index(self, coin_id):
        for coin in self._coins:
            if coin.id == coin_id:
                return coin.index
        raise PreconditionError("Unknown coin: {}".format(coin_id))

    def validate_configuration(self, s):
        try:
            s = tuple(int(c) for c in s)
        except (TypeError, ValueError):
            raise PreconditionError("Invalid configuration: {!r}".format(s))
        if len(s) != self.n:
            raise PreconditionError("Configuration assigns {} miners, the game has {}".format(len(s), self.n))
        for p, c in enumerate(s):
            if c < 0 or c >= self.k:
                raise PreconditionError("Miner {} is assigned to unknown coin index {}".format(self._miners[p].id, c))
        return s

    def configurations(self):
        """All |C|^n configurations, miner 0 being the most significant digit."""
        return itertools.product(range(self.k), repeat=self.n)

    def configuration_at(self, index):
        s = []
        for _ in range(self.n):
            index, c = divmod(index, self.k)
            s.append(c)
        return tuple(reversed(s))

    def coin_powers(self, s):
        loads = [Fraction(0)] * self.k
        for p, c in enumerate(s):
            loads[c] += self._powers[p]
        return loads

    def coin_power(self, s, c):
        return sum((self._powers[p] for p, coin in enumerate(s) if coin == c), Fraction(0))

    def miner_set(self, s, c):
        return frozenset(p for p, coin in enumerate(s) if coin == c)

    def rpu(self, s, c):
        load = self.coin_power(s, c)
        if load == 0:
            return INFINITY
        return self._rewards[c] / load

    def rpus(self, s):
        return [INFINITY if load == 0 else self._rewards[c] / load for c, load in enumerate(self.coin_powers(s))]

    def payoff(self, s, p):
        c = s[p]
        return self._powers[p] * self._rewards[c] / self.coin_power(s, c)

    def payoffs(self, s):
        loads = self.coin_powers(s)
        return [self._powers[p] * self._rewards[c] / loads[c] for p, c in enumerate(s)]

    def deviation_payoff(self, s, p, c):
        """Payoff of p in (s_-p, c)."""
        if s[p] == c:
            return self.payoff(s, p)
        return self._powers[p] * self._rewards[c] / (self.coin_power(s, c) + self._powers[p])

    def _improves(self, loads, s, p, c):
        # F(c) / (M_c + m_p) > F(s.p) / M_s.p, cross multiplied
        own = s[p]
        if c == own:
            return False
        return self._rewards[c] * loads[own] > self._rewards[own] * (loads[c] + self._powers[p])

    def is_better_response(self, s, p, c):
        return self._improves(self.coin_powers(s), s, p, c)

    def better_response_targets(self, s, p):
        loads = self.coin_powers(s)
        return tuple(c for c in range(self.k) if self._improves(loads, s, p, c))

    def better_response_steps(self, s):
        loads = self.coin_powers(s)
        return [(p, c) for p in range(self.n) for c in range(self.k) if self._improves(loads, s, p, c)]

    def best_deviation(self, s, p):
        """Target with the highest deviation payoff among the better responses of p, or None."""
        best, best_payoff = None, None
        for c in self.better_response_targets(s, p):
            payoff = self.deviation_payoff(s, p, c)
            if best_payoff is None or payoff > best_payoff:
                best, best_payoff = c, payoff
        return best

    def is_stable_miner(self, s, p):
        loads = self.coin_powers(s)
        return not any(self._improves(loads, s, p, c) for c in range(self.k))

    def is_stable(self, s):
        loads = self.coin_powers(s)
        for p in range(self.n):
            for c in range(self.k):
                if self._improves(loads, s, p, c):
                    return False
        return True

    def welfare(self, s):
        return sum(self.payoffs(s), Fraction(0))

    def occupied_reward(self, s):
        return sum((self._rewards[c] for c in set(s)), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, Game) and
                self._miners == other._miners and
                self._coins == other._coins and
                self._rewards == other._rewards)

    def __hash__(self):
        return hash((self._miners, self._coins, self._rewards))

    def __repr__(self):
        return "Game(miners={}, coins={}, rewards={})".format(
            [(m.id, str(m.power)) for m in self._miners],
            [c.id for c in self._coins],
            [str(r) for r in self._rewards])


def apply_move(s, p, c):
    """The configuration (s_-p, c). s itself is left as it is."""
    if s[p] == c:
        return tuple(s)
    moved = list(s)
    moved[p] = c
    return tuple(moved)
