# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import asyncio

from nessaid_cli.cmd import NessaidCmd
from nessaid_cli.tokens import RangedIntToken

from nessaid_mining.report import run
from nessaid_mining.scenario import (
    MODE_LEARN,
    load_scenario,
    dump_scenario,
    generate_instance,
    counterexample_scenario,
)
from nessaid_mining.tokens import SchedulerToken, ModeToken, SeedToken, ScenarioFileToken
from nessaid_mining.utils import EXIT_SUCCESS, EXIT_USAGE, MiningGameError, UsageError


class MiningGameCmd(NessaidCmd):
    r"""
    token SCENARIO_FILE ScenarioFileToken();
    token OUTPUT_FILE ScenarioFileToken();
    token SCHEDULER SchedulerToken();
    token MODE ModeToken();
    token SEED SeedToken();
    token MAX_STEPS RangedIntToken(1, 1000000000);
    token SAMPLES RangedIntToken(1, 100000000);
    token MINERS RangedIntToken(1, 64);
    token COINS RangedIntToken(1, 64);

    RUN_OPTIONS[$scheduler, $seed, $max_steps, $strict, $out, $trace, $samples, $genericity]:
        (
            (
                "--scheduler": "Policy choosing among the available better-response steps"
                SCHEDULER
                << $scheduler = $2; >>
            )
            |
            (
                "--seed": "Seed of the random scheduler"
                SEED
                << $seed = $2; >>
            )
            |
            (
                "--max-steps": "Step cap of every learning run"
                MAX_STEPS
                << $max_steps = $2; >>
            )
            |
            (
                "--strict-protocol": "Fail when a designed reward falls below the base reward"
                << $strict = True; >>
            )
            |
            (
                "--out": "Write the machine readable report to a file"
                OUTPUT_FILE
                << $out = $2; >>
            )
            |
            (
                "--trace": "Write the better-response steps to a file, one JSON object per line"
                OUTPUT_FILE
                << $trace = $2; >>
            )
            |
            (
                "--samples": "Sample count of the genericity check"
                SAMPLES
                << $samples = $2; >>
            )
            |
            (
                "--exhaustive": "Check genericity over every miner subset"
                << $genericity = "exhaustive"; >>
            )
        ) * (1:8)
        ;
    """

    def __init__(self, *args, loop=None, **kwargs):
        self._exit_code = EXIT_SUCCESS
        if loop is None:
            loop = asyncio.new_event_loop()
        super().__init__(*args, loop=loop, **kwargs)

    def get_token_classes(self):
        return [
            ScenarioFileToken,
            SchedulerToken,
            ModeToken,
            SeedToken,
            RangedIntToken,
        ]

    @property
    def exit_code(self):
        return self._exit_code

    @exit_code.setter
    def exit_code(self, code):
        self._exit_code = code

    def fail(self, e):
        self.error("Error:", e)
        self._exit_code = e.exit_code

    def write_file(self, path, text):
        try:
            with open(path, "w") as fd:
                fd.write(text)
        except OSError as e:
            raise UsageError("Cannot write {}: {}".format(path, e.strerror or e), path=path)

    def run_scenario(self, scenario, out=None, trace=None):
        if trace:
            try:
                with open(trace, "w") as fd:
                    report = run(scenario, trace=fd)
            except OSError as e:
                raise UsageError("Cannot write {}: {}".format(trace, e.strerror or e), path=trace)
        else:
            report = run(scenario)

        self.print(report.render())
        if out:
            self.write_file(out, report.to_json())
        self._exit_code = report.exit_code

    def do_run(self, mode, path, scheduler, seed, max_steps, strict, out, trace, samples, genericity):
        r"""
        <<
            $scheduler = None; $seed = None; $max_steps = None; $strict = None;
            $out = None; $trace = None; $samples = None; $genericity = None;
        >>
        (
            ("run": "Run a scenario in the mode it declares" << $mode = None; >>)
            |
            ("learn": "Better-response learning from the initial configuration" << $mode = "learn"; >>)
            |
            ("design": "Steer learning from the initial to the target equilibrium" << $mode = "design"; >>)
            |
            ("equilibria": "Enumerate every stable configuration" << $mode = "enumerate"; >>)
            |
            ("construct": "Build one stable configuration, biggest miner first" << $mode = "construct"; >>)
            |
            ("check": "Check the assumptions and look for better equilibria" << $mode = "check"; >>)
        )
        SCENARIO_FILE: "Scenario file"
        << $path = $2; >>
        {
            RUN_OPTIONS[$scheduler, $seed, $max_steps, $strict, $out, $trace, $samples, $genericity]
        }
        """
        try:
            scenario = load_scenario(path).with_overrides(
                mode=mode, scheduler_kind=scheduler, scheduler_seed=seed,
                max_steps=max_steps, strict_protocol=strict, samples=samples, genericity=genericity)
            self.run_scenario(scenario, out=out, trace=trace)
        except MiningGameError as e:
            self.fail(e)

    def do_counterexample(self, out):
        r"""
        << $out = None; >>
        "counterexample": "Walk the payoff cycle that rules out an exact potential"
        {
            "--out": "Write the machine readable report to a file"
            OUTPUT_FILE
            << $out = $2; >>
        }
        """
        try:
            self.run_scenario(counterexample_scenario(), out=out)
        except MiningGameError as e:
            self.fail(e)

    def do_gen(self, miners, coins, seed, mode, out):
        r"""
        << $seed = 0; $mode = "learn"; $out = None; >>
        "gen": "Generate a random scenario"
        MINERS: "Number of miners"
        << $miners = $2; >>
        COINS: "Number of coins"
        << $coins = $3; >>
        {
            (
                (
                    "--seed": "Seed of the instance"
                    SEED
                    << $seed = $2; >>
                )
                |
                (
                    "--mode": "Mode of the generated scenario"
                    MODE
                    << $mode = $2; >>
                )
                |
                (
                    "--out": "Write the scenario to a file"
                    OUTPUT_FILE
                    << $out = $2; >>
                )
            ) * (1:3)
        }
        """
        try:
            scenario = generate_instance(miners, coins, seed=seed, mode=mode or MODE_LEARN)
            text = dump_scenario(scenario)
            if out:
                self.write_file(out, text)
            else:
                self.print(text, end="")
            self._exit_code = EXIT_SUCCESS
        except MiningGameError as e:
            self.fail(e)

    async def exec_file(self, filename):
        """Executes every command of a file, stopping at the first failure.

        Lines starting with # are skipped, a trailing backslash joins the
        next line. Returns the exit code of the failing command or 0.
        """
        try:
            with open(filename) as fd:
                lines = [l.rstrip() for l in fd.readlines()]
        except OSError as e:
            self.error("Error: cannot read {}: {}".format(filename, e.strerror or e))
            return EXIT_USAGE

        pending = ""
        for line in lines:
            partial, line = await self.is_partial_line(pending + line)
            if partial:
                pending = line
                continue
            pending = ""
            if not line.strip() or await self.commented_line(line):
                continue

            self._exit_code = EXIT_SUCCESS
            if await self.exec_line(line) != 0:
                return EXIT_USAGE
            if self._exit_code != EXIT_SUCCESS:
                return self._exit_code
        return EXIT_SUCCESS

    def exec_file_sync(self, filename):
        return self.loop.run_until_complete(self.exec_file(filename))
