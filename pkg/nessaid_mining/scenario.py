# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import json
import hashlib
import logging
from fractions import Fraction

import numpy as np

from nessaid_mining.game import Game
from nessaid_mining.dynamics import SCHEDULER_KINDS, SCHEDULER_FIRST_INDEX, make_scheduler
from nessaid_mining.equilibria import (
    ENUMERATION_BUDGET,
    GENERICITY_MODES,
    GENERICITY_SAMPLED,
    GENERICITY_SAMPLES,
    enumerate_stable,
    construct_equilibrium,
)
from nessaid_mining.tokenizer.tokenizer import parse_quantity, parse_assignments, LiteralException
from nessaid_mining.utils import (
    UsageError,
    ScenarioError,
    PreconditionError,
    BudgetExceeded,
)


log = logging.getLogger(__name__)


MODE_LEARN = 'learn'
MODE_DESIGN = 'design'
MODE_ENUMERATE = 'enumerate'
MODE_CONSTRUCT = 'construct'
MODE_CHECK = 'check'
MODE_COUNTEREXAMPLE = 'counterexample'

MODES = (
    MODE_LEARN,
    MODE_DESIGN,
    MODE_ENUMERATE,
    MODE_CONSTRUCT,
    MODE_CHECK,
    MODE_COUNTEREXAMPLE,
)

SEED_MAX = 2 ** 64 - 1

POWER_LOW = 10 ** 6
POWER_HIGH = 10 ** 9

OPTION_DEFAULTS = {
    "max_steps": None,
    "budget": ENUMERATION_BUDGET,
    "strict_protocol": False,
    "genericity": GENERICITY_SAMPLED,
    "samples": GENERICITY_SAMPLES,
    "genericity_seed": 0,
    "workers": 1,
}

_SCENARIO_KEYS = ("miners", "coins", "initial", "target", "scheduler", "mode", "options")


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _check_option(name, value, path):
    if name == "max_steps":
        if value is not None and (not _is_int(value) or value <= 0):
            raise ScenarioError("max_steps must be a positive integer or null", path=path)
    elif name in ("budget", "samples", "workers"):
        if not _is_int(value) or value <= 0:
            raise ScenarioError("{} must be a positive integer".format(name), path=path)
    elif name == "strict_protocol":
        if not isinstance(value, bool):
            raise ScenarioError("strict_protocol must be true or false", path=path)
    elif name == "genericity":
        if value not in GENERICITY_MODES:
            raise ScenarioError("genericity must be one of: {}".format(", ".join(GENERICITY_MODES)), path=path)
    elif name == "genericity_seed":
        if not _is_int(value) or not 0 <= value <= SEED_MAX:
            raise ScenarioError("genericity_seed must be an integer in 0..2^64-1", path=path)
    else:
        raise ScenarioError("Unknown option: {}".format(name), path=path)
    return value


def _quantity_value(q):
    """JSON form of a quantity: a plain integer when whole, "num/den" text otherwise."""
    if q.denominator == 1:
        return q.numerator
    return "{}/{}".format(q.numerator, q.denominator)


class Scenario():
    """A game plus everything needed to run one experiment on it."""

    def __init__(self, game, initial=None, target=None, scheduler_kind=SCHEDULER_FIRST_INDEX, scheduler_seed=0,
                 mode=MODE_LEARN, options=None):
        if mode not in MODES:
            raise ScenarioError("Unknown mode: {}. Use one of: {}".format(mode, ", ".join(MODES)), path="mode")
        if scheduler_kind not in SCHEDULER_KINDS:
            raise ScenarioError("Unknown scheduler: {}".format(scheduler_kind), path="scheduler.kind")
        if not _is_int(scheduler_seed) or not 0 <= scheduler_seed <= SEED_MAX:
            raise ScenarioError("Seed must be an integer in 0..2^64-1", path="scheduler.seed")

        self._game = game
        self._initial = game.validate_configuration(initial) if initial is not None else None
        self._target = game.validate_configuration(target) if target is not None else None
        self._scheduler_kind = scheduler_kind
        self._scheduler_seed = scheduler_seed
        self._mode = mode

        self._options = dict(OPTION_DEFAULTS)
        for name, value in (options or {}).items():
            self._options[name] = _check_option(name, value, "options." + name)

        if mode == MODE_DESIGN and self._target is None:
            raise ScenarioError("Mode design needs a target configuration", path="target")

    @property
    def game(self):
        return self._game

    @property
    def initial(self):
        return self._initial

    @property
    def target(self):
        return self._target

    @property
    def scheduler_kind(self):
        return self._scheduler_kind

    @property
    def scheduler_seed(self):
        return self._scheduler_seed

    @property
    def mode(self):
        return self._mode

    @property
    def options(self):
        return dict(self._options)

    def option(self, name):
        return self._options[name]

    def build_scheduler(self):
        return make_scheduler(self._scheduler_kind, self._scheduler_seed)

    def with_overrides(self, mode=None, scheduler_kind=None, scheduler_seed=None, **options):
        merged = dict(self._options)
        merged.update({name: value for name, value in options.items() if value is not None})
        return Scenario(
            self._game, self._initial, self._target,
            scheduler_kind=scheduler_kind or self._scheduler_kind,
            scheduler_seed=self._scheduler_seed if scheduler_seed is None else scheduler_seed,
            mode=mode or self._mode,
            options=merged)

    def _assignment_dict(self, s):
        game = self._game
        return {miner.id: game.coins[c].id for miner, c in zip(game.miners, s)}

    def to_dict(self):
        game = self._game
        data = {
            "miners": [{"id": m.id, "power": _quantity_value(m.power)} for m in game.miners],
            "coins": [{"id": c.id, "reward": _quantity_value(r)} for c, r in zip(game.coins, game.rewards)],
            "scheduler": {"kind": self._scheduler_kind, "seed": self._scheduler_seed},
            "mode": self._mode,
            "options": dict(self._options),
        }
        if self._initial is not None:
            data["initial"] = self._assignment_dict(self._initial)
        if self._target is not None:
            data["target"] = self._assignment_dict(self._target)
        return data

    def digest(self):
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        return "Scenario(mode={}, miners={}, coins={}, scheduler={})".format(
            self._mode, self._game.n, self._game.k, self._scheduler_kind)


def _parse_quantity_field(value, path):
    if _is_int(value):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_quantity(value)
        except LiteralException as e:
            raise ScenarioError("Invalid quantity {!r}: {}".format(value, e), path=path)
    raise ScenarioError("Quantity must be an integer or \"num/den\" text, got {!r}".format(value), path=path)


def _parse_roster(data, key, quantity_key):
    entries = data.get(key)
    if not isinstance(entries, list) or not entries:
        raise ScenarioError("{} must be a non-empty list".format(key), path=key)

    ids, quantities, seen = [], [], set()
    for i, entry in enumerate(entries):
        path = "{}[{}]".format(key, i)
        if not isinstance(entry, dict):
            raise ScenarioError("Entry must be an object", path=path)
        for name in entry:
            if name not in ("id", quantity_key):
                raise ScenarioError("Unknown field: {}".format(name), path=path + "." + name)

        entry_id = entry.get("id")
        if not isinstance(entry_id, str) or not entry_id:
            raise ScenarioError("id must be a non-empty string", path=path + ".id")
        if entry_id in seen:
            raise ScenarioError("Duplicate id: {}".format(entry_id), path=path + ".id")
        seen.add(entry_id)

        if quantity_key not in entry:
            raise ScenarioError("Missing {}".format(quantity_key), path=path + "." + quantity_key)
        quantity = _parse_quantity_field(entry[quantity_key], path + "." + quantity_key)
        if quantity <= 0:
            raise ScenarioError("{} must be positive: {}".format(quantity_key, entry[quantity_key]),
                                path=path + "." + quantity_key)
        ids.append(entry_id)
        quantities.append(quantity)
    return ids, quantities


def _parse_assignment(game, value, key):
    if isinstance(value, str):
        try:
            pairs = parse_assignments(value)
        except LiteralException as e:
            raise ScenarioError("Invalid assignment list: {}".format(e), path=key)
    elif isinstance(value, dict):
        pairs = list(value.items())
    else:
        raise ScenarioError("Assignment must be an object or \"miner=coin, ...\" text", path=key)

    s = [None] * game.n
    for miner_id, coin_id in pairs:
        path = "{}.{}".format(key, miner_id)
        try:
            p = game.miner_index(miner_id)
        except PreconditionError:
            raise ScenarioError("Unknown miner: {}".format(miner_id), path=path)
        if not isinstance(coin_id, str):
            raise ScenarioError("Coin id must be a string", path=path)
        try:
            c = game.coin_index(coin_id)
        except PreconditionError:
            raise ScenarioError("Unknown coin: {}".format(coin_id), path=path)
        if s[p] is not None:
            raise ScenarioError("Miner {} is assigned twice".format(miner_id), path=path)
        s[p] = c

    for p, c in enumerate(s):
        if c is None:
            raise ScenarioError("Miner {} is not assigned".format(game.miners[p].id), path=key)
    return tuple(s)


def parse_scenario(data):
    """Builds a Scenario from JSON text or bytes.

    Every failure is a ScenarioError whose path names the offending field,
    "$" for the document itself.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ScenarioError("Scenario is not UTF-8: {}".format(e), path="$")
    try:
        document = json.loads(data)
    except ValueError as e:
        raise ScenarioError("Malformed scenario: {}".format(e), path="$")

    if not isinstance(document, dict):
        raise ScenarioError("Scenario must be an object", path="$")
    for key in document:
        if key not in _SCENARIO_KEYS:
            raise ScenarioError("Unknown field: {}".format(key), path=key)

    miner_ids, powers = _parse_roster(document, "miners", "power")
    coin_ids, rewards = _parse_roster(document, "coins", "reward")
    game = Game(powers, rewards, miner_ids=miner_ids, coin_ids=coin_ids)

    initial = target = None
    if document.get("initial") is not None:
        initial = _parse_assignment(game, document["initial"], "initial")
    if document.get("target") is not None:
        target = _parse_assignment(game, document["target"], "target")

    scheduler = document.get("scheduler", {})
    if not isinstance(scheduler, dict):
        raise ScenarioError("scheduler must be an object", path="scheduler")
    for key in scheduler:
        if key not in ("kind", "seed"):
            raise ScenarioError("Unknown field: {}".format(key), path="scheduler." + key)

    options = document.get("options", {})
    if not isinstance(options, dict):
        raise ScenarioError("options must be an object", path="options")

    mode = document.get("mode", MODE_LEARN)
    if not isinstance(mode, str):
        raise ScenarioError("mode must be a string", path="mode")

    return Scenario(
        game, initial, target,
        scheduler_kind=scheduler.get("kind", SCHEDULER_FIRST_INDEX),
        scheduler_seed=scheduler.get("seed", 0),
        mode=mode,
        options=options)


def load_scenario(path):
    try:
        with open(path, "rb") as fd:
            data = fd.read()
    except OSError as e:
        raise UsageError("Cannot read scenario {}: {}".format(path, e.strerror or e), path=path)
    try:
        return parse_scenario(data)
    except ScenarioError as e:
        raise ScenarioError(str(e), path=path, field=e.path)


def dump_scenario(scenario):
    return json.dumps(scenario.to_dict(), sort_keys=True, indent=2) + "\n"


def _distinct_integers(rng, size):
    drawn = rng.choice(POWER_HIGH - POWER_LOW + 1, size=size, replace=False) + POWER_LOW
    return [int(x) for x in drawn]


def generate_instance(n, k, seed=0, mode=MODE_LEARN, budget=ENUMERATION_BUDGET):
    """A random scenario with n miners and k coins, fully determined by seed.

    Powers and rewards are pairwise distinct integers in [10^6, 10^9].
    Design instances take s0 and sf from the enumerated stable set, or
    from the greedy construction when |C|^n does not fit the budget.
    """
    if n < 1 or k < 1:
        raise PreconditionError("An instance needs at least one miner and one coin: n={}, k={}".format(n, k))
    if not 0 <= seed <= SEED_MAX:
        raise PreconditionError("Seed must be in 0..2^64-1: {}".format(seed))

    rng = np.random.default_rng(seed)
    powers = _distinct_integers(rng, n)
    rewards = _distinct_integers(rng, k)
    game = Game(powers, rewards)

    initial = target = None
    if mode == MODE_LEARN:
        initial = tuple(int(c) for c in rng.integers(0, k, size=n))
    elif mode == MODE_DESIGN:
        try:
            stable = list(enumerate_stable(game, budget=budget))
        except BudgetExceeded:
            log.info("Instance %dx%d is too large to enumerate, using the constructed equilibrium", n, k)
            stable = [construct_equilibrium(game)]
        first = int(rng.integers(0, len(stable)))
        second = first
        if len(stable) > 1:
            second = (first + 1 + int(rng.integers(0, len(stable) - 1))) % len(stable)
        initial, target = stable[first], stable[second]

    return Scenario(game, initial, target, scheduler_seed=seed, mode=mode)


def counterexample_scenario():
    return Scenario(Game([2, 1], [1, 1]), mode=MODE_COUNTEREXAMPLE)
