# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import logging
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from nessaid_mining.utils import (
    PreconditionError,
    NotApplicableError,
    AssumptionError,
    InvariantViolation,
    BudgetExceeded,
    format_configuration,
)


log = logging.getLogger(__name__)


ENUMERATION_BUDGET = 10 ** 7

GENERICITY_SAMPLED = 'sampled'
GENERICITY_EXHAUSTIVE = 'exhaustive'
GENERICITY_MODES = (GENERICITY_SAMPLED, GENERICITY_EXHAUSTIVE)

GENERICITY_SAMPLES = 10 ** 5
EXHAUSTIVE_GENERICITY_MAX_MINERS = 12
SAMPLED_GENERICITY_MAX_MINERS = 62


class StableSet():

    def __init__(self, game, configurations, complete=True):
        self._game = game
        self._configurations = tuple(tuple(s) for s in configurations)
        self._members = frozenset(self._configurations)
        self._complete = complete

    @property
    def game(self):
        return self._game

    @property
    def configurations(self):
        return self._configurations

    @property
    def complete(self):
        return self._complete

    def __len__(self):
        return len(self._configurations)

    def __iter__(self):
        return iter(self._configurations)

    def __contains__(self, s):
        return tuple(s) in self._members

    def __repr__(self):
        return "StableSet({})".format(", ".join(format_configuration(self._game, s) for s in self._configurations))


class AssumptionReport():
    """Outcome of the never-alone and genericity checks.

    A check that was not run is None. A failed check carries its witness:
    (configuration, coin) for never-alone, ((c, P), (c', P')) for
    genericity where P, P' are tuples of miner indices.
    """

    def __init__(self, never_alone=None, never_alone_witness=None,
                 generic=None, generic_witness=None, method=None):
        self._never_alone = never_alone
        self._never_alone_witness = never_alone_witness
        self._generic = generic
        self._generic_witness = generic_witness
        self._method = method

    @property
    def never_alone(self):
        return self._never_alone

    @property
    def never_alone_witness(self):
        return self._never_alone_witness

    @property
    def generic(self):
        return self._generic

    @property
    def generic_witness(self):
        return self._generic_witness

    @property
    def method(self):
        return self._method

    @property
    def holds(self):
        return self._never_alone is not False and self._generic is not False

    def merge(self, other):
        return AssumptionReport(
            never_alone=self._never_alone if other.never_alone is None else other.never_alone,
            never_alone_witness=self._never_alone_witness or other.never_alone_witness,
            generic=self._generic if other.generic is None else other.generic,
            generic_witness=self._generic_witness or other.generic_witness,
            method=self._method or other.method)

    def to_dict(self, game):
        never_alone_witness = None
        if self._never_alone_witness:
            s, c = self._never_alone_witness
            never_alone_witness = {"configuration": format_configuration(game, s), "coin": game.coins[c].id}

        generic_witness = None
        if self._generic_witness:
            generic_witness = [
                {"coin": game.coins[c].id, "miners": [game.miners[p].id for p in miners]}
                for c, miners in self._generic_witness
            ]

        return {
            "never_alone": self._never_alone,
            "never_alone_witness": never_alone_witness,
            "generic": self._generic,
            "generic_witness": generic_witness,
            "method": self._method,
        }

    def __repr__(self):
        return "AssumptionReport(never_alone={}, generic={}, method={})".format(
            self._never_alone, self._generic, self._method)


def power_order(game):
    """Miner indices by non-increasing power, equal powers by index."""
    return sorted(range(game.n), key=lambda p: (-game.powers[p], p))


def _argmax_coin(game, loads, power):
    best, best_value = None, None
    for c in range(game.k):
        value = game.rewards[c] * power / (loads[c] + power)
        if best_value is None or value > best_value:
            best, best_value = c, value
    return best


def construct_equilibrium(game):
    """Places miners one by one, biggest first, each on its best coin so far."""
    s = [None] * game.n
    loads = [Fraction(0)] * game.k
    for p in power_order(game):
        c = _argmax_coin(game, loads, game.powers[p])
        s[p] = c
        loads[c] += game.powers[p]

    s = tuple(s)
    if not game.is_stable(s):
        raise InvariantViolation("Constructed configuration {} is not stable".format(format_configuration(game, s)),
                                 configuration=s)
    return s


def _scan_range(game, start, stop):
    stable = []
    for index in range(start, stop):
        s = game.configuration_at(index)
        if game.is_stable(s):
            stable.append(s)
    return stable


def _check_budget(game, budget):
    required = game.configuration_count
    if required > budget:
        raise BudgetExceeded("Scanning {} configurations exceeds the budget of {}".format(required, budget),
                             required=required, budget=budget)


def enumerate_stable(game, budget=ENUMERATION_BUDGET, workers=1):
    """Every stable configuration, found by scanning the whole space.

    With workers > 1 the index range is cut into disjoint chunks scanned by
    a process pool. Results keep the configuration index order.
    """
    _check_budget(game, budget)
    total = game.configuration_count

    if workers <= 1 or total < 2 * workers:
        stable = [s for s in game.configurations() if game.is_stable(s)]
    else:
        chunks = workers * 4
        bounds = [total * i // chunks for i in range(chunks + 1)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = executor.map(_scan_range, [game] * chunks, bounds[:-1], bounds[1:])
            stable = [s for part in parts for s in part]

    log.debug("%d of %d configurations are stable", len(stable), total)
    return StableSet(game, stable)


def never_alone_witness(game, s):
    """First coin with at most one miner that attracts no better response, or None."""
    counts = [0] * game.k
    for c in s:
        counts[c] += 1
    attracting = {c for _, c in game.better_response_steps(s)}
    for c in range(game.k):
        if counts[c] <= 1 and c not in attracting:
            return c
    return None


def check_never_alone(game, s):
    return never_alone_witness(game, s) is None


def check_never_alone_all(game, budget=ENUMERATION_BUDGET):
    _check_budget(game, budget)
    for s in game.configurations():
        c = never_alone_witness(game, s)
        if c is not None:
            return AssumptionReport(never_alone=False, never_alone_witness=(s, c))
    return AssumptionReport(never_alone=True)


def _subset(mask):
    miners = []
    p = 0
    while mask:
        if mask & 1:
            miners.append(p)
        mask >>= 1
        p += 1
    return tuple(miners)


def _subset_sums(powers):
    sums = [Fraction(0)] * (1 << len(powers))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + powers[low.bit_length() - 1]
    return sums


def _check_generic_exhaustive(game):
    if game.n > EXHAUSTIVE_GENERICITY_MAX_MINERS:
        raise BudgetExceeded(
            "Exhaustive genericity check supports up to {} miners, the game has {}".format(
                EXHAUSTIVE_GENERICITY_MAX_MINERS, game.n),
            required=game.k * (1 << game.n), budget=game.k * (1 << EXHAUSTIVE_GENERICITY_MAX_MINERS))

    sums = _subset_sums(game.powers)
    seen = {}
    for c in range(game.k):
        for mask in range(1, len(sums)):
            ratio = game.rewards[c] / sums[mask]
            other = seen.get(ratio)
            if other is None:
                seen[ratio] = (c, mask)
            elif other[0] != c:
                witness = ((other[0], _subset(other[1])), (c, _subset(mask)))
                return AssumptionReport(generic=False, generic_witness=witness, method=GENERICITY_EXHAUSTIVE)
    return AssumptionReport(generic=True, method=GENERICITY_EXHAUSTIVE)


def _check_generic_sampled(game, samples, seed):
    if game.k < 2:
        return AssumptionReport(generic=True, method=GENERICITY_SAMPLED)

    if game.n > SAMPLED_GENERICITY_MAX_MINERS:
        raise PreconditionError("Sampled genericity check supports up to {} miners".format(SAMPLED_GENERICITY_MAX_MINERS))

    rng = np.random.default_rng(seed)
    full = 1 << game.n
    first_coins = rng.integers(0, game.k, size=samples)
    second_coins = rng.integers(0, game.k - 1, size=samples)
    second_coins = np.where(second_coins >= first_coins, second_coins + 1, second_coins)
    first_masks = rng.integers(1, full, size=samples, dtype=np.int64)
    second_masks = rng.integers(1, full, size=samples, dtype=np.int64)

    sums = {}

    def subset_sum(mask):
        if mask not in sums:
            sums[mask] = sum((game.powers[p] for p in _subset(mask)), Fraction(0))
        return sums[mask]

    for c, c2, mask, mask2 in zip(first_coins, second_coins, first_masks, second_masks):
        c, c2, mask, mask2 = int(c), int(c2), int(mask), int(mask2)
        if game.rewards[c] * subset_sum(mask2) == game.rewards[c2] * subset_sum(mask):
            witness = ((c, _subset(mask)), (c2, _subset(mask2)))
            return AssumptionReport(generic=False, generic_witness=witness, method=GENERICITY_SAMPLED)
    return AssumptionReport(generic=True, method=GENERICITY_SAMPLED)


def check_generic(game, mode=GENERICITY_SAMPLED, samples=GENERICITY_SAMPLES, seed=0):
    """Looks for two coins and miner sets with equal reward to power ratios.

    exhaustive: every coin against every non-empty subset, n <= 12.
    sampled: `samples` random (c, P), (c', P') pairs drawn with `seed`.
    """
    if mode == GENERICITY_EXHAUSTIVE:
        return _check_generic_exhaustive(game)
    if mode == GENERICITY_SAMPLED:
        return _check_generic_sampled(game, samples, seed)
    raise PreconditionError("Unknown genericity mode: {}".format(mode))


def is_globally_optimal(game, s):
    return game.welfare(s) == game.total_reward


def find_better_equilibrium(game, s, budget=ENUMERATION_BUDGET, genericity=GENERICITY_SAMPLED,
                            samples=GENERICITY_SAMPLES, seed=0):
    """A miner p and a stable s' != s where p earns strictly more than in s."""
    s = game.validate_configuration(s)
    if not game.is_stable(s):
        raise PreconditionError("Configuration {} is not stable".format(format_configuration(game, s)))

    report = check_generic(game, mode=genericity, samples=samples, seed=seed)
    if not report.generic:
        raise AssumptionError("The game is not generic", report=report)

    return better_equilibrium_in(game, s, enumerate_stable(game, budget=budget))


def better_equilibrium_in(game, s, stable):
    """Searches an already enumerated stable set for a miner doing better than in s."""
    others = [t for t in stable if t != s]
    if not others:
        raise NotApplicableError("{} is the only stable configuration".format(format_configuration(game, s)))

    payoffs = game.payoffs(s)
    for t in others:
        for p, payoff in enumerate(game.payoffs(t)):
            if payoff > payoffs[p]:
                return p, t

    raise InvariantViolation(
        "No miner earns more in another stable configuration than in {}".format(format_configuration(game, s)),
        configuration=s)


def _stable_members(game, placement):
    loads = [Fraction(0)] * game.k
    for p, c in placement.items():
        loads[c] += game.powers[p]

    stable = set()
    for p, own in placement.items():
        m = game.powers[p]
        if all(game.rewards[c] * loads[own] <= game.rewards[own] * (loads[c] + m)
               for c in range(game.k) if c != own):
            stable.add(p)
    return stable


def _extend(game, placement, p):
    loads = [Fraction(0)] * game.k
    for q, c in placement.items():
        loads[c] += game.powers[q]

    stable_before = _stable_members(game, placement)
    placement[p] = _argmax_coin(game, loads, game.powers[p])
    stable_after = _stable_members(game, placement)

    if p not in stable_after or not stable_before <= stable_after:
        lost = sorted(stable_before - stable_after)
        raise InvariantViolation(
            "Adding {} at {} left it or earlier miners unstable: {}".format(
                game.miners[p].id, game.coins[placement[p]].id, [game.miners[q].id for q in lost]),
            placement=dict(placement))


def two_equilibria(game, budget=ENUMERATION_BUDGET, genericity=GENERICITY_SAMPLED,
                   samples=GENERICITY_SAMPLES, seed=0):
    """Two distinct stable configurations built from the two top miners.

    The two biggest miners start split over the two richest coins in both
    orders, then every other miner joins its best coin, biggest first.
    Needs the never-alone and genericity assumptions, which are checked.
    """
    if game.n < 2 or game.k < 2:
        raise AssumptionError("Two equilibria need at least two miners and two coins")

    report = check_never_alone_all(game, budget=budget).merge(
        check_generic(game, mode=genericity, samples=samples, seed=seed))
    if not report.holds:
        raise AssumptionError("The game does not satisfy the never-alone and genericity assumptions", report=report)

    miners = power_order(game)
    coins = sorted(range(game.k), key=lambda c: (-game.rewards[c], c))

    configurations = []
    for first, second in ((coins[0], coins[1]), (coins[1], coins[0])):
        placement = {miners[0]: first, miners[1]: second}
        unstable = set(placement) - _stable_members(game, placement)
        if unstable:
            log.debug("Starting pair leaves %s unstable", [game.miners[p].id for p in unstable])
        for p in miners[2:]:
            _extend(game, placement, p)
        s = tuple(placement[p] for p in range(game.n))
        if not game.is_stable(s):
            raise InvariantViolation(
                "Extended configuration {} is not stable".format(format_configuration(game, s)),
                configuration=s, report=report)
        configurations.append(s)

    return configurations[0], configurations[1]
