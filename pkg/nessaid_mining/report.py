# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import json
import logging

from nessaid_mining.dynamics import converge, potential_list, exact_potential_counterexample
from nessaid_mining.equilibria import (
    enumerate_stable,
    construct_equilibrium,
    check_never_alone,
    check_never_alone_all,
    check_generic,
    is_globally_optimal,
    better_equilibrium_in,
    two_equilibria,
)
from nessaid_mining.reward_design import DesignProblem, run_design, design_gains
from nessaid_mining.scenario import (
    MODE_LEARN,
    MODE_DESIGN,
    MODE_ENUMERATE,
    MODE_CONSTRUCT,
    MODE_CHECK,
    MODE_COUNTEREXAMPLE,
)
from nessaid_mining.utils import (
    EXIT_SUCCESS,
    EXIT_PRECONDITION,
    EXIT_FINDING,
    EXIT_BUDGET,
    InvariantViolation,
    NotApplicableError,
    PreconditionError,
    format_rational,
    format_configuration,
)


log = logging.getLogger(__name__)


class RunReport():
    """Outcome of one scenario run.

    to_json() is the machine form, fully determined by the scenario. render()
    is the text printed on the shell.
    """

    def __init__(self, mode, succeeded, scenario_digest, seed, steps=0, final=None, details=None,
                 exit_code=EXIT_SUCCESS):
        self._mode = mode
        self._succeeded = succeeded
        self._scenario_digest = scenario_digest
        self._seed = seed
        self._steps = steps
        self._final = final
        self._details = details or {}
        self._exit_code = exit_code

    @property
    def mode(self):
        return self._mode

    @property
    def succeeded(self):
        return self._succeeded

    @property
    def scenario_digest(self):
        return self._scenario_digest

    @property
    def seed(self):
        return self._seed

    @property
    def steps(self):
        return self._steps

    @property
    def final(self):
        return self._final

    @property
    def details(self):
        return self._details

    @property
    def exit_code(self):
        return self._exit_code

    def to_dict(self):
        return {
            "mode": self._mode,
            "succeeded": self._succeeded,
            "exit_code": self._exit_code,
            "scenario_digest": self._scenario_digest,
            "seed": self._seed,
            "steps": self._steps,
            "final": self._final,
            "details": self._details,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render(self):
        lines = [
            "Mode: {}".format(self._mode),
            "Result: {}".format("success" if self._succeeded else "failure"),
        ]
        if self._final is not None:
            lines.append("Final configuration: {}".format(self._final))
        if self._mode in (MODE_LEARN, MODE_DESIGN):
            lines.append("Steps: {}".format(self._steps))

        details = self._details
        if self._mode == MODE_DESIGN:
            for stage in details["stages"]:
                lines.append("  Stage {}: {} iterations, cost {}".format(
                    stage["stage"], stage["iterations"], stage["cost"]))
            lines.append("Total cost: {}".format(details["cost"]["total"]))
        elif self._mode == MODE_ENUMERATE:
            lines.append("Stable configurations: {}".format(len(details["stable"])))
            for entry in details["stable"]:
                lines.append("  {}  welfare {}{}".format(
                    entry["configuration"], entry["welfare"], "  optimal" if entry["globally_optimal"] else ""))
        elif self._mode == MODE_CHECK:
            assumptions = details["assumptions"]
            lines.append("Never alone: {}".format(assumptions["never_alone"]))
            lines.append("Generic: {} ({})".format(assumptions["generic"], assumptions["method"]))
            if "stable" in details:
                lines.append("Stable configurations: {}".format(details["stable"]))
            for entry in details.get("better", []):
                lines.append("  {}: {} earns more in {}".format(entry["from"], entry["miner"], entry["to"]))
            if details.get("two_equilibria"):
                lines.append("Two equilibria: {}".format(", ".join(details["two_equilibria"])))
        elif self._mode == MODE_COUNTEREXAMPLE:
            for configuration, payoffs, mover, delta in zip(details["cycle"], details["payoffs"],
                                                            details["movers"], details["deltas"]):
                lines.append("  {}  payoffs ({})  {} moves, delta {}".format(
                    configuration, ", ".join(payoffs), mover, delta))
            lines.append("Cycle sum: {}".format(details["cycle_sum"]))
        return "\n".join(lines)

    def __repr__(self):
        return "RunReport(mode={}, succeeded={}, exit_code={})".format(self._mode, self._succeeded, self._exit_code)


class TraceWriter():
    """Writes better-response steps as one compact JSON object per line.

    A step that does not strictly raise the mover's payoff is never written.
    """

    def __init__(self, stream):
        self._stream = stream
        self._count = 0

    @property
    def count(self):
        return self._count

    def write(self, game, record, **fields):
        if record.gain <= 0:
            raise InvariantViolation("Step {} of {} does not raise its payoff: {} -> {}".format(
                record.number, game.miners[record.miner].id,
                format_rational(record.payoff_before), format_rational(record.payoff_after)), step=record)
        event = record.to_dict(game)
        event.update(fields)
        self._stream.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
        self._count += 1


def _payoff_list(game, s):
    return {miner.id: format_rational(u) for miner, u in zip(game.miners, game.payoffs(s))}


def _run_learn(scenario, trace):
    game = scenario.game
    result = converge(game, scenario.initial, scenario.build_scheduler(),
                      max_steps=scenario.option("max_steps"), audit=True)
    if trace:
        for record in result.records:
            trace.write(game, record)

    details = {
        "initial": format_configuration(game, result.initial),
        "converged": result.converged,
        "payoffs": _payoff_list(game, result.final),
        "potential": potential_list(game, result.final).to_list(),
    }
    exit_code = EXIT_SUCCESS if result.converged else EXIT_BUDGET
    return result.converged, result.steps, result.final, details, exit_code


def _run_design(scenario, trace):
    game = scenario.game
    problem = DesignProblem(game, scenario.initial, scenario.target,
                            scheduler=scenario.build_scheduler(),
                            max_steps=scenario.option("max_steps"),
                            strict_protocol=scenario.option("strict_protocol"))
    result = run_design(problem)

    stages = []
    for stage in result.stages:
        if trace:
            for phase in stage.phases:
                for record in phase.trace.records:
                    trace.write(phase.designed.game, record, stage=stage.stage, phase=phase.phase)
        stages.append({
            "stage": stage.stage,
            "entry": format_configuration(game, stage.entry),
            "final": format_configuration(game, stage.final),
            "iterations": stage.iterations,
            "progress": stage.progress,
            "cost": format_rational(stage.cost),
            "phases": [phase.designed.to_dict(problem) for phase in stage.phases],
        })

    details = {
        "initial": format_configuration(game, problem.s0),
        "target": format_configuration(game, problem.sf),
        "stages": stages,
        "cost": result.ledger.to_dict(),
        "gains": {miner.id: format_rational(g) for miner, g in zip(game.miners, design_gains(problem))},
        "invariants": result.report.to_dict(game),
    }
    return result.final == problem.sf, result.steps, result.final, details, EXIT_SUCCESS


def _run_enumerate(scenario, trace):
    game = scenario.game
    stable = enumerate_stable(game, budget=scenario.option("budget"), workers=scenario.option("workers"))
    entries = []
    for s in stable:
        entries.append({
            "configuration": format_configuration(game, s),
            "payoffs": _payoff_list(game, s),
            "welfare": format_rational(game.welfare(s)),
            "never_alone": check_never_alone(game, s),
            "globally_optimal": is_globally_optimal(game, s),
        })
    return True, 0, None, {"stable": entries}, EXIT_SUCCESS


def _run_construct(scenario, trace):
    game = scenario.game
    s = construct_equilibrium(game)
    details = {"payoffs": _payoff_list(game, s), "welfare": format_rational(game.welfare(s))}
    return True, 0, s, details, EXIT_SUCCESS


def _run_check(scenario, trace):
    game = scenario.game
    budget = scenario.option("budget")
    assumptions = check_never_alone_all(game, budget=budget).merge(
        check_generic(game, mode=scenario.option("genericity"), samples=scenario.option("samples"),
                      seed=scenario.option("genericity_seed")))
    details = {"assumptions": assumptions.to_dict(game)}
    if not assumptions.holds:
        return False, 0, None, details, EXIT_PRECONDITION
    if game.n < 2 or game.k < 2:
        details["reason"] = "two equilibria need at least two miners and two coins"
        return False, 0, None, details, EXIT_PRECONDITION

    stable = enumerate_stable(game, budget=budget, workers=scenario.option("workers"))
    details["stable"] = len(stable)

    better = []
    for s in stable:
        try:
            p, t = better_equilibrium_in(game, s, stable)
        except NotApplicableError:
            break
        better.append({
            "from": format_configuration(game, s),
            "miner": game.miners[p].id,
            "to": format_configuration(game, t),
        })
    details["better"] = better

    pair = two_equilibria(game, budget=budget, genericity=scenario.option("genericity"),
                          samples=scenario.option("samples"), seed=scenario.option("genericity_seed"))
    for s in pair:
        if s not in stable:
            raise InvariantViolation("{} is not in the enumerated stable set".format(format_configuration(game, s)),
                                     configuration=s)
    if pair[0] == pair[1]:
        raise InvariantViolation("Both equilibria are {}".format(format_configuration(game, pair[0])),
                                 configuration=pair[0])
    details["two_equilibria"] = [format_configuration(game, s) for s in pair]
    return True, 0, None, details, EXIT_SUCCESS


def _run_counterexample(scenario, trace):
    report = exact_potential_counterexample()
    details = report.to_dict()
    succeeded = report.cycle_sum != 0
    return succeeded, 0, None, details, EXIT_SUCCESS if succeeded else EXIT_FINDING


_runners = {
    MODE_LEARN: _run_learn,
    MODE_DESIGN: _run_design,
    MODE_ENUMERATE: _run_enumerate,
    MODE_CONSTRUCT: _run_construct,
    MODE_CHECK: _run_check,
    MODE_COUNTEREXAMPLE: _run_counterexample,
}


def run(scenario, trace=None):
    """Runs the scenario in its mode and reports the outcome.

    trace, when given, is a text stream receiving the better-response steps.
    Errors of the underlying modules propagate with their exit codes.
    """
    try:
        runner = _runners[scenario.mode]
    except KeyError:
        raise PreconditionError("Unknown mode: {}".format(scenario.mode))
    if scenario.mode in (MODE_LEARN, MODE_DESIGN) and scenario.initial is None:
        raise PreconditionError("Mode {} needs an initial configuration".format(scenario.mode))

    writer = TraceWriter(trace) if trace is not None else None
    log.info("Running %s on %d miners and %d coins", scenario.mode, scenario.game.n, scenario.game.k)
    succeeded, steps, final, details, exit_code = runner(scenario, writer)

    if final is not None:
        final = format_configuration(scenario.game, final)
    return RunReport(scenario.mode, succeeded, scenario.digest(), scenario.scheduler_seed,
                     steps=steps, final=final, details=details, exit_code=exit_code)
