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

from nessaid_mining.cmd import MiningGameCmd
from nessaid_mining.scenario import parse_scenario, generate_instance
from nessaid_mining.utils import EXIT_SUCCESS, EXIT_USAGE, EXIT_PRECONDITION

from nessaid_mining_tests.test_utils import captured_output
from nessaid_mining_tests.test_scenario import MINIMAL


SYMMETRIC_CHECK = """
{
    "miners": [{"id": "p1", "power": 2}, {"id": "p2", "power": 1}],
    "coins": [{"id": "c1", "reward": 1}, {"id": "c2", "reward": 1}],
    "mode": "check"
}
"""


def new_cmd():
    return MiningGameCmd(prompt="# ", disable_default_hooks=True, use_base_grammar=False)


class CmdTest(unittest.TestCase):

    def setUp(self):
        self._folder = tempfile.TemporaryDirectory()
        self.folder = self._folder.name
        self.minimal = self.write("minimal.json", MINIMAL)
        self.symmetric = self.write("symmetric.json", SYMMETRIC_CHECK)

    def tearDown(self):
        self._folder.cleanup()

    def write(self, name, text):
        path = os.path.join(self.folder, name)
        with open(path, "w") as fd:
            fd.write(text)
        return path

    def execute(self, *args):
        cmd = new_cmd()
        with captured_output() as (stdout, stderr):
            result = cmd.exec_args(*args)

        info = "\n\nFunction: {}".format(inspect.stack()[1][3])
        info += "\ninput: {}".format(" ".join(args))
        info += "\nstdout: {}".format(stdout.getvalue())
        info += "\nstderr: {}".format(stderr.getvalue())
        return cmd, result, stdout.getvalue(), stderr.getvalue(), info

    def test_counterexample(self):
        cmd, result, stdout, stderr, info = self.execute("counterexample")
        assert result == 0, info
        assert cmd.exit_code == EXIT_SUCCESS, info
        assert "Cycle sum: 2/3" in stdout, info

    def test_learn(self):
        out = os.path.join(self.folder, "report.json")
        cmd, result, stdout, stderr, info = self.execute("learn", self.minimal, "--out", out)
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert "Final configuration: <c2,c1>" in stdout, info
        with open(out) as fd:
            report = json.load(fd)
        assert report["final"] == "<c2,c1>", info
        assert report["steps"] == 1, info

    def test_options(self):
        trace = os.path.join(self.folder, "trace.jsonl")
        cmd, result, stdout, stderr, info = self.execute(
            "run", self.minimal, "--scheduler", "best-improvement", "--trace", trace, "--max-steps", "10")
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert "Final configuration: <c1,c2>" in stdout, info
        with open(trace) as fd:
            events = [json.loads(line) for line in fd]
        assert [event["miner"] for event in events] == ["p2"], info

    def test_equilibria(self):
        cmd, result, stdout, stderr, info = self.execute("equilibria", self.minimal)
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert "Stable configurations: 2" in stdout, info

    def test_check_fails_assumptions(self):
        cmd, result, stdout, stderr, info = self.execute("run", self.symmetric, "--exhaustive")
        assert result == 0, info
        assert cmd.exit_code == EXIT_PRECONDITION, info
        assert "Never alone: False" in stdout, info

    def test_bad_scenario(self):
        bad = self.write("bad.json", '{"miners": []}')
        cmd, result, stdout, stderr, info = self.execute("learn", bad)
        assert result == 0, info
        assert cmd.exit_code == EXIT_USAGE, info
        assert "Error:" in stderr and "miners" in stderr, info

        cmd, result, stdout, stderr, info = self.execute("learn", os.path.join(self.folder, "missing.json"))
        assert cmd.exit_code == EXIT_USAGE, info

    def test_learn_without_initial(self):
        lone = self.write("lone.json", '{"miners": [{"id": "a", "power": 1}], "coins": [{"id": "x", "reward": 1}]}')
        cmd, result, stdout, stderr, info = self.execute("learn", lone)
        assert result == 0, info
        assert cmd.exit_code == EXIT_PRECONDITION, info
        assert "Error:" in stderr and "initial" in stderr, info

        cmd, result, stdout, stderr, info = self.execute("equilibria", lone)
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert "Stable configurations: 1" in stdout, info

    def test_unknown_command(self):
        cmd, result, stdout, stderr, info = self.execute("juggle", self.minimal)
        assert result != 0, info

    def test_gen(self):
        cmd, result, stdout, stderr, info = self.execute("gen", "3", "2", "--seed", "4")
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert parse_scenario(stdout) == generate_instance(3, 2, seed=4), info

        out = os.path.join(self.folder, "design.json")
        cmd, result, stdout, stderr, info = self.execute("gen", "4", "2", "--mode", "design", "--out", out)
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info

        cmd, result, stdout, stderr, info = self.execute("design", out)
        assert result == 0 and cmd.exit_code == EXIT_SUCCESS, info
        assert "Result: success" in stdout, info

    def test_exec_file(self):
        commands = self.write("commands.cfg", "\n".join([
            "# learn then show the cycle",
            "",
            "learn {} \\".format(self.minimal),
            "    --scheduler first-index",
            "counterexample",
        ]) + "\n")
        cmd = new_cmd()
        with captured_output() as (stdout, stderr):
            code = cmd.exec_file_sync(commands)
        info = "\nstdout: {}\nstderr: {}".format(stdout.getvalue(), stderr.getvalue())
        assert code == EXIT_SUCCESS, info
        assert "Final configuration: <c2,c1>" in stdout.getvalue(), info
        assert "Cycle sum: 2/3" in stdout.getvalue(), info

    def test_exec_file_stops_on_failure(self):
        commands = self.write("commands.cfg", "check {}\ncounterexample\n".format(self.symmetric))
        cmd = new_cmd()
        with captured_output() as (stdout, stderr):
            code = cmd.exec_file_sync(commands)
        assert code == EXIT_PRECONDITION
        assert "Cycle sum" not in stdout.getvalue()

        cmd = new_cmd()
        with captured_output() as (stdout, stderr):
            code = cmd.exec_file_sync(os.path.join(self.folder, "missing.cfg"))
        assert code == EXIT_USAGE


testcase1 = unittest.TestLoader().loadTestsFromTestCase(CmdTest)

cmd_test = unittest.TestSuite([testcase1])
