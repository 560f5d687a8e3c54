# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import os
import json
import inspect
import tempfile
import unittest
from io import StringIO
from fractions import Fraction

from nessaid_mining.game import Game
from nessaid_mining.dynamics import SCHEDULER_RANDOM, StepRecord, potential_list
from nessaid_mining.equilibria import GENERICITY_EXHAUSTIVE, check_generic
from nessaid_mining.report import run, TraceWriter
from nessaid_mining.scenario import (
    MODE_LEARN,
    MODE_DESIGN,
    MODE_ENUMERATE,
    MODE_CONSTRUCT,
    MODE_CHECK,
    POWER_LOW,
    POWER_HIGH,
    Scenario,
    parse_scenario,
    load_scenario,
    dump_scenario,
    generate_instance,
    counterexample_scenario,
)
from nessaid_mining.utils import (
    EXIT_SUCCESS,
    EXIT_PRECONDITION,
    UsageError,
    ScenarioError,
    InvariantViolation,
    PreconditionError,
)


MINIMAL = """
{
    "miners": [{"id": "p1", "power": 2}, {"id": "p2", "power": "1"}],
    "coins": [{"id": "c1", "reward": 1}, {"id": "c2", "reward": "1/1"}],
    "initial": {"p1": "c1", "p2": "c1"}
}
"""


def scenario_text(**fields):
    document = json.loads(MINIMAL)
    for key, value in fields.items():
        if value is None:
            document.pop(key, None)
        else:
            document[key] = value
    return json.dumps(document)


class ScenarioParseTest(unittest.TestCase):

    def test_minimal(self):
        scenario = parse_scenario(MINIMAL)
        assert scenario.game == Game([2, 1], [1, 1])
        assert scenario.initial == (0, 0)
        assert scenario.target is None
        assert scenario.mode == MODE_LEARN
        assert scenario.scheduler_kind == "first-index"
        assert scenario.scheduler_seed == 0
        assert scenario.option("max_steps") is None
        assert parse_scenario(MINIMAL.encode("utf-8")) == scenario

    def test_single_miner_without_initial(self):
        scenario = parse_scenario('{"miners": [{"id": "a", "power": 1}], "coins": [{"id": "x", "reward": 1}]}')
        assert scenario.game.n == 1 and scenario.game.k == 1
        assert scenario.mode == MODE_LEARN
        assert scenario.initial is None
        assert "initial" not in scenario.to_dict()
        assert parse_scenario(dump_scenario(scenario)) == scenario

    def test_assignment_text(self):
        scenario = parse_scenario(scenario_text(initial="p1=c2, p2=c1"))
        assert scenario.initial == (1, 0)

    def test_fractions(self):
        text = scenario_text(miners=[{"id": "a", "power": "3/2"}, {"id": "b", "power": 1}],
                             initial={"a": "c1", "b": "c2"})
        scenario = parse_scenario(text)
        assert list(scenario.game.powers) == [Fraction(3, 2), Fraction(1)]
        assert scenario.to_dict()["miners"][0]["power"] == "3/2"

    def test_errors(self):
        cases = [
            ("{", "$"),
            ("[]", "$"),
            (scenario_text(colour="red"), "colour"),
            (scenario_text(miners=[]), "miners"),
            (scenario_text(miners=[{"id": "p1", "power": "0"}, {"id": "p2", "power": 1}]), "miners[0].power"),
            (scenario_text(miners=[{"id": "p1", "power": 1.5}, {"id": "p2", "power": 1}]), "miners[0].power"),
            (scenario_text(miners=[{"id": "p1", "power": 2}, {"id": "p1", "power": 1}]), "miners[1].id"),
            (scenario_text(coins=[{"id": "c1", "reward": "1/0"}]), "coins[0].reward"),
            (scenario_text(coins=[{"id": "c1", "reward": 1, "size": 3}]), "coins[0].size"),
            (scenario_text(initial={"p1": "c1", "p9": "c1"}), "initial.p9"),
            (scenario_text(initial={"p1": "c1", "p2": "c7"}), "initial.p2"),
            (scenario_text(initial={"p1": "c1"}), "initial"),
            (scenario_text(initial="p1=c1 p2"), "initial"),
            (scenario_text(mode="design"), "target"),
            (scenario_text(mode="juggle"), "mode"),
            (scenario_text(scheduler={"kind": "fastest"}), "scheduler.kind"),
            (scenario_text(scheduler={"kind": "random", "seed": -1}), "scheduler.seed"),
            (scenario_text(scheduler={"order": 1}), "scheduler.order"),
            (scenario_text(options={"max_steps": 0}), "options.max_steps"),
            (scenario_text(options={"genericity": "guess"}), "options.genericity"),
            (scenario_text(options={"colour": 1}), "options.colour"),
        ]
        for text, path in cases:
            info = "\n\nFunction: {}".format(inspect.stack()[0][3])
            info += "\nscenario: {}".format(text)
            info += "\nexpected path: {}".format(path)
            with self.assertRaises(ScenarioError) as context:
                parse_scenario(text)
            assert context.exception.path == path, info + "\ngot: {}".format(context.exception.path)

    def test_round_trip(self):
        scenario = parse_scenario(scenario_text(
            scheduler={"kind": "random", "seed": 12}, options={"max_steps": 50, "genericity": "exhaustive"}))
        text = dump_scenario(scenario)
        assert text.endswith("\n")
        assert parse_scenario(text) == scenario
        assert parse_scenario(text).digest() == scenario.digest()

    def test_overrides(self):
        scenario = parse_scenario(MINIMAL)
        changed = scenario.with_overrides(scheduler_kind=SCHEDULER_RANDOM, scheduler_seed=0, max_steps=None,
                                          samples=10)
        assert changed.scheduler_kind == SCHEDULER_RANDOM
        assert changed.option("samples") == 10
        assert changed.option("max_steps") is None
        assert scenario.scheduler_kind == "first-index"
        assert changed.digest() != scenario.digest()
        with self.assertRaises(ScenarioError):
            scenario.with_overrides(mode=MODE_DESIGN)

    def test_load(self):
        with tempfile.TemporaryDirectory() as folder:
            good = os.path.join(folder, "good.json")
            bad = os.path.join(folder, "bad.json")
            with open(good, "w") as fd:
                fd.write(MINIMAL)
            with open(bad, "w") as fd:
                fd.write(scenario_text(mode="juggle"))

            assert load_scenario(good) == parse_scenario(MINIMAL)
            with self.assertRaises(ScenarioError) as context:
                load_scenario(bad)
            assert context.exception.path == bad
            assert context.exception.context["field"] == "mode"
            with self.assertRaises(UsageError):
                load_scenario(os.path.join(folder, "missing.json"))


class GenerateTest(unittest.TestCase):

    def test_deterministic(self):
        first = generate_instance(6, 3, seed=5)
        assert first == generate_instance(6, 3, seed=5)
        assert dump_scenario(first) == dump_scenario(generate_instance(6, 3, seed=5))
        assert first != generate_instance(6, 3, seed=6)
        assert first.scheduler_seed == 5

    def test_ranges(self):
        scenario = generate_instance(6, 3, seed=9)
        game = scenario.game
        assert len(set(game.powers)) == 6 and len(set(game.rewards)) == 3
        for value in list(game.powers) + list(game.rewards):
            assert POWER_LOW <= value <= POWER_HIGH
            assert value.denominator == 1
        assert len(scenario.initial) == 6
        assert check_generic(game, samples=2000).generic

    def test_design_instance(self):
        scenario = generate_instance(4, 2, seed=3, mode=MODE_DESIGN)
        game = scenario.game
        assert game.is_stable(scenario.initial) and game.is_stable(scenario.target)


class RunTest(unittest.TestCase):

    def test_counterexample(self):
        report = run(counterexample_scenario())
        assert report.succeeded and report.exit_code == EXIT_SUCCESS
        assert report.details["cycle_sum"] == "2/3"
        assert report.details["deltas"] == ["2/3", "-1/3", "2/3", "-1/3"]
        assert "Cycle sum: 2/3" in report.render()

    def test_learn(self):
        report = run(parse_scenario(MINIMAL))
        assert report.succeeded
        assert report.steps == 1
        assert report.final == "<c2,c1>"
        assert report.details["converged"] is True
        assert report.details["payoffs"] == {"p1": "1", "p2": "1"}
        assert "Steps: 1" in report.render()

    def test_learn_needs_initial(self):
        scenario = parse_scenario(scenario_text(initial=None))
        with self.assertRaises(PreconditionError):
            run(scenario)
        with self.assertRaises(PreconditionError):
            run(parse_scenario(scenario_text(initial=None, mode="design", target={"p1": "c1", "p2": "c2"})))
        report = run(scenario.with_overrides(mode=MODE_ENUMERATE))
        assert report.succeeded

    def test_trace(self):
        stream = StringIO()
        run(parse_scenario(MINIMAL), trace=stream)
        lines = stream.getvalue().splitlines()
        assert len(lines) == 1
        event = json.loads(lines[0])
        assert event == {"step": 1, "miner": "p1", "from": "c1", "to": "c2",
                         "payoff_before": "2/3", "payoff_after": "1"}

    def test_trace_refuses_flat_steps(self):
        game = Game([2, 1], [1, 1])
        s = (0, 1)
        record = StepRecord(1, 0, 0, 1, Fraction(1), Fraction(1), potential_list(game, s), potential_list(game, s))
        writer = TraceWriter(StringIO())
        with self.assertRaises(InvariantViolation):
            writer.write(game, record)
        assert writer.count == 0

    def test_design(self):
        scenario = generate_instance(4, 2, seed=3, mode=MODE_DESIGN)
        stream = StringIO()
        report = run(scenario, trace=stream)
        game = scenario.game
        assert report.succeeded, report.render()
        assert report.final == "<" + ",".join(game.coins[c].id for c in scenario.target) + ">"
        assert report.details["invariants"]["violations"] == []
        assert len(report.details["stages"]) == 4
        assert len(stream.getvalue().splitlines()) == report.steps
        for line in stream.getvalue().splitlines():
            event = json.loads(line)
            assert "stage" in event and "phase" in event

    def test_enumerate(self):
        scenario = Scenario(Game([2, 1], [1, 1]), mode=MODE_ENUMERATE)
        report = run(scenario)
        stable = report.details["stable"]
        assert [entry["configuration"] for entry in stable] == ["<c1,c2>", "<c2,c1>"]
        assert all(entry["globally_optimal"] for entry in stable)
        assert not any(entry["never_alone"] for entry in stable)

    def test_construct(self):
        report = run(Scenario(Game([2, 1], [1, 1]), mode=MODE_CONSTRUCT))
        assert report.final == "<c1,c2>"

    def test_check(self):
        scenario = Scenario(Game([8, 7, 6, 5], [100, 101]), mode=MODE_CHECK,
                            options={"genericity": GENERICITY_EXHAUSTIVE})
        report = run(scenario)
        assert report.succeeded and report.exit_code == EXIT_SUCCESS
        assert report.details["two_equilibria"] == ["<c2,c1,c1,c2>", "<c1,c2,c2,c1>"]
        assert len(report.details["better"]) == report.details["stable"]

        report = run(Scenario(Game([2, 1], [1, 1]), mode=MODE_CHECK))
        assert not report.succeeded
        assert report.exit_code == EXIT_PRECONDITION
        assert report.details["assumptions"]["never_alone"] is False

    def test_reports_are_reproducible(self):
        scenario = parse_scenario(scenario_text(scheduler={"kind": "random", "seed": 99}))
        first, second = run(scenario), run(scenario)
        assert first.to_json() == second.to_json()
        assert first.scenario_digest == scenario.digest()
        assert json.loads(first.to_json())["seed"] == 99


testcase1 = unittest.TestLoader().loadTestsFromTestCase(ScenarioParseTest)
testcase2 = unittest.TestLoader().loadTestsFromTestCase(GenerateTest)
testcase3 = unittest.TestLoader().loadTestsFromTestCase(RunTest)

scenario_test = unittest.TestSuite([testcase1, testcase2, testcase3])
