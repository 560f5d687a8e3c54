# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import logging
from fractions import Fraction

import numpy as np

from nessaid_mining.game import Game, apply_move
from nessaid_mining.utils import (
    UsageError,
    PreconditionError,
    PotentialLengthError,
    NotSymmetricError,
    InvariantViolation,
    format_rational,
    format_configuration,
)


log = logging.getLogger(__name__)


POTENTIAL_LESS = 'less'
POTENTIAL_EQUAL = 'equal'
POTENTIAL_GREATER = 'greater'

SCHEDULER_FIRST_INDEX = 'first-index'
SCHEDULER_RANDOM = 'random'
SCHEDULER_BEST_IMPROVEMENT = 'best-improvement'
SCHEDULER_ADVERSARIAL = 'adversarial'

SCHEDULER_KINDS = (
    SCHEDULER_FIRST_INDEX,
    SCHEDULER_RANDOM,
    SCHEDULER_BEST_IMPROVEMENT,
    SCHEDULER_ADVERSARIAL,
)

MAX_STEPS_CAP = 10 ** 6

OBSERVATION_ORDER = 'moves-up-the-list'
OBSERVATION_RPU = 'source-rpu-below-both'
ORDINAL_POTENTIAL = 'ordinal-potential'


class PotentialList():
    """The (rpu, coin-index) pairs of a configuration in ascending lex order.

    Unoccupied coins carry +inf. Lists of the same game compare
    lexicographically, which is the order the better-response steps climb.
    """

    def __init__(self, pairs):
        self._pairs = tuple(pairs)
        self._positions = {c: i for i, (_, c) in enumerate(self._pairs)}

    @property
    def pairs(self):
        return self._pairs

    def position(self, c):
        return self._positions[c]

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __getitem__(self, index):
        return self._pairs[index]

    def __eq__(self, other):
        if not isinstance(other, PotentialList):
            return NotImplemented
        return compare_potential(self, other) == POTENTIAL_EQUAL

    def __lt__(self, other):
        return compare_potential(self, other) == POTENTIAL_LESS

    def __le__(self, other):
        return compare_potential(self, other) != POTENTIAL_GREATER

    def __gt__(self, other):
        return compare_potential(self, other) == POTENTIAL_GREATER

    def __ge__(self, other):
        return compare_potential(self, other) != POTENTIAL_LESS

    def __hash__(self):
        return hash(self._pairs)

    def to_list(self):
        return [[format_rational(rpu), c] for rpu, c in self._pairs]

    def __repr__(self):
        return "PotentialList({})".format(", ".join("({}, {})".format(format_rational(r), c) for r, c in self._pairs))


def potential_list(game, s):
    return PotentialList(sorted(zip(game.rpus(s), range(game.k))))


def compare_potential(a, b):
    if len(a) != len(b):
        raise PotentialLengthError("Potential lists differ in length: {} and {}".format(len(a), len(b)))
    if a.pairs == b.pairs:
        return POTENTIAL_EQUAL
    if a.pairs < b.pairs:
        return POTENTIAL_LESS
    return POTENTIAL_GREATER


class StepRecord():

    def __init__(self, number, miner, source, target, payoff_before, payoff_after,
                 potential_before, potential_after):
        self._number = number
        self._miner = miner
        self._source = source
        self._target = target
        self._payoff_before = payoff_before
        self._payoff_after = payoff_after
        self._potential_before = potential_before
        self._potential_after = potential_after

    @property
    def number(self):
        return self._number

    @property
    def miner(self):
        return self._miner

    @property
    def source(self):
        return self._source

    @property
    def target(self):
        return self._target

    @property
    def payoff_before(self):
        return self._payoff_before

    @property
    def payoff_after(self):
        return self._payoff_after

    @property
    def gain(self):
        return self._payoff_after - self._payoff_before

    @property
    def potential_before(self):
        return self._potential_before

    @property
    def potential_after(self):
        return self._potential_after

    def to_dict(self, game):
        return {
            "step": self._number,
            "miner": game.miners[self._miner].id,
            "from": game.coins[self._source].id,
            "to": game.coins[self._target].id,
            "payoff_before": format_rational(self._payoff_before),
            "payoff_after": format_rational(self._payoff_after),
        }

    def __repr__(self):
        return "StepRecord(#{}: p{} c{} -> c{}, {} -> {})".format(
            self._number, self._miner, self._source, self._target,
            format_rational(self._payoff_before), format_rational(self._payoff_after))


class Trace():

    def __init__(self, initial, records, final, converged):
        self._initial = tuple(initial)
        self._records = list(records)
        self._final = tuple(final)
        self._converged = converged

    @property
    def initial(self):
        return self._initial

    @property
    def records(self):
        return self._records

    @property
    def final(self):
        return self._final

    @property
    def converged(self):
        return self._converged

    @property
    def steps(self):
        return len(self._records)

    def configurations(self):
        """Every configuration visited, the initial and final ones included."""
        s = self._initial
        yield s
        for record in self._records:
            s = apply_move(s, record.miner, record.target)
            yield s

    def __repr__(self):
        return "Trace(steps={}, converged={}, final={})".format(len(self._records), self._converged, self._final)


class SchedulerBase():
    """Picks one better-response step out of the available ones.

    select() receives the steps as (miner, coin) pairs sorted by miner then
    coin index and must return one of them.
    """

    kind = None

    def __init__(self, seed=0):
        self._seed = seed

    @property
    def seed(self):
        return self._seed

    def select(self, game, s, steps):
        raise NotImplementedError

    def __repr__(self):
        return "{}(seed={})".format(self.__class__.__name__, self._seed)


class FirstIndexScheduler(SchedulerBase):

    kind = SCHEDULER_FIRST_INDEX

    def select(self, game, s, steps):
        return steps[0]


class RandomScheduler(SchedulerBase):

    kind = SCHEDULER_RANDOM

    def __init__(self, seed=0):
        super().__init__(seed)
        self._rng = np.random.default_rng(seed)

    def select(self, game, s, steps):
        return steps[int(self._rng.integers(0, len(steps)))]


class BestImprovementScheduler(SchedulerBase):

    kind = SCHEDULER_BEST_IMPROVEMENT

    def select(self, game, s, steps):
        loads = game.coin_powers(s)
        best, best_gain = None, None
        for p, c in steps:
            m = game.powers[p]
            gain = m * game.rewards[c] / (loads[c] + m) - m * game.rewards[s[p]] / loads[s[p]]
            if best_gain is None or gain > best_gain:
                best, best_gain = (p, c), gain
        return best


class AdversarialScheduler(SchedulerBase):
    """Takes the step whose resulting potential list is the smallest."""

    kind = SCHEDULER_ADVERSARIAL

    def select(self, game, s, steps):
        best, best_list = None, None
        for p, c in steps:
            candidate = potential_list(game, apply_move(s, p, c))
            if best_list is None or candidate < best_list:
                best, best_list = (p, c), candidate
        return best


_scheduler_classes = {
    SCHEDULER_FIRST_INDEX: FirstIndexScheduler,
    SCHEDULER_RANDOM: RandomScheduler,
    SCHEDULER_BEST_IMPROVEMENT: BestImprovementScheduler,
    SCHEDULER_ADVERSARIAL: AdversarialScheduler,
}


def make_scheduler(kind, seed=0):
    try:
        scheduler_class = _scheduler_classes[kind]
    except KeyError:
        raise UsageError("Unknown scheduler: {}. Use one of: {}".format(kind, ", ".join(SCHEDULER_KINDS)))
    return scheduler_class(seed if seed is not None else 0)


def default_max_steps(game):
    return min(game.configuration_count, MAX_STEPS_CAP)


def step(game, s, scheduler, number=1):
    """One better-response step chosen by the scheduler, or None when s is stable."""
    steps = game.better_response_steps(s)
    if not steps:
        return None

    p, c = scheduler.select(game, s, steps)
    s_after = apply_move(s, p, c)
    record = StepRecord(
        number, p, s[p], c,
        game.payoff(s, p), game.payoff(s_after, p),
        potential_list(game, s), potential_list(game, s_after))
    log.debug("step %d: %s %s -> %s", number, game.miners[p].id, game.coins[s[p]].id, game.coins[c].id)
    return s_after, record


def audit_step(game, s, s_after, record):
    """Names of the step properties that failed on this step, empty when all hold."""
    violations = []
    before, after = record.potential_before, record.potential_after

    if not before.position(record.source) < before.position(record.target):
        violations.append(OBSERVATION_ORDER)

    source_rpu = game.rpu(s, record.source)
    if not source_rpu < min(game.rpu(s_after, record.source), game.rpu(s_after, record.target)):
        violations.append(OBSERVATION_RPU)

    if compare_potential(before, after) != POTENTIAL_LESS:
        violations.append(ORDINAL_POTENTIAL)

    return violations


def converge(game, s0, scheduler, max_steps=None, audit=False, on_step=None):
    """Runs better-response learning from s0 until a stable configuration.

    Exhausting max_steps is reported through the converged flag. With
    audit set, every step is checked and the first failing one raises
    InvariantViolation. on_step(record, configuration) runs after each step.
    """
    s = game.validate_configuration(s0)
    initial = s
    if max_steps is None:
        max_steps = default_max_steps(game)
    if max_steps <= 0:
        raise PreconditionError("max_steps must be positive: {}".format(max_steps))

    records = []
    while len(records) < max_steps:
        result = step(game, s, scheduler, number=len(records) + 1)
        if result is None:
            return Trace(initial, records, s, True)

        s_after, record = result
        if audit:
            violations = audit_step(game, s, s_after, record)
            if violations:
                raise InvariantViolation(
                    "Step {} of {} violates: {}".format(record.number, scheduler.kind, ", ".join(violations)),
                    configuration=s, step=record, violations=violations)
        records.append(record)
        if on_step:
            on_step(record, s_after)
        s = s_after

    converged = game.is_stable(s)
    if not converged:
        log.warning("Learning stopped at the %d step cap without converging, suspected bug", max_steps)
    return Trace(initial, records, s, converged)


def symmetric_potential(game, s):
    """Sum of 1/M_c over the occupied coins of a game with equal rewards."""
    if not game.is_symmetric:
        raise NotSymmetricError("Rewards differ, the game is not symmetric")
    return sum((Fraction(1) / load for load in game.coin_powers(s) if load > 0), Fraction(0))


def symmetric_potential_key(game, s):
    """(empty coins, symmetric_potential) compared lexicographically.

    An empty coin counts 1/0 = +inf. A step onto an empty coin raises the
    occupied sum but removes one +inf term, so only the pair decreases on
    every better-response step.
    """
    empty = sum(1 for load in game.coin_powers(s) if load == 0)
    return empty, symmetric_potential(game, s)


class CounterexampleReport():

    def __init__(self, game, cycle, payoffs, movers, deltas):
        self._game = game
        self._cycle = cycle
        self._payoffs = payoffs
        self._movers = movers
        self._deltas = deltas

    @property
    def game(self):
        return self._game

    @property
    def cycle(self):
        return self._cycle

    @property
    def payoffs(self):
        return self._payoffs

    @property
    def movers(self):
        return self._movers

    @property
    def deltas(self):
        return self._deltas

    @property
    def cycle_sum(self):
        return sum(self._deltas, Fraction(0))

    def to_dict(self):
        game = self._game
        return {
            "cycle": [format_configuration(game, s) for s in self._cycle],
            "payoffs": [[format_rational(u) for u in row] for row in self._payoffs],
            "movers": [game.miners[p].id for p in self._movers],
            "deltas": [format_rational(d) for d in self._deltas],
            "cycle_sum": format_rational(self.cycle_sum),
        }


def exact_potential_counterexample():
    """Walks the closed four-configuration cycle of the two-miner game.

    Along the cycle the movers' payoff changes add up to 2/3. An exact
    potential would telescope to 0 over a closed cycle, so none exists.
    """
    game = Game([2, 1], [1, 1])
    cycle = [(0, 0), (0, 1), (1, 1), (1, 0)]
    payoffs = [tuple(game.payoffs(s)) for s in cycle]

    movers, deltas = [], []
    for i, s in enumerate(cycle):
        s_next = cycle[(i + 1) % len(cycle)]
        mover = next(p for p in range(game.n) if s[p] != s_next[p])
        movers.append(mover)
        deltas.append(game.payoff(s_next, mover) - game.payoff(s, mover))

    return CounterexampleReport(game, cycle, payoffs, movers, deltas)
