# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

# Timed property campaigns over generated games. Every campaign prints its
# run count, its findings and the time taken. Exits with 3 on any finding.

import sys
import time
import argparse
from fractions import Fraction

import numpy as np

from nessaid_mining.dynamics import (
    SCHEDULER_KINDS,
    make_scheduler,
    converge,
    exact_potential_counterexample,
    symmetric_potential_key,
)
from nessaid_mining.equilibria import (
    GENERICITY_SAMPLED,
    enumerate_stable,
    construct_equilibrium,
    check_never_alone,
    check_never_alone_all,
    check_generic,
    is_globally_optimal,
    find_better_equilibrium,
    two_equilibria,
)
from nessaid_mining.reward_design import DesignProblem, run_design
from nessaid_mining.report import run
from nessaid_mining.scenario import generate_instance
from nessaid_mining.utils import EXIT_SUCCESS, EXIT_FINDING, InvariantViolation

from nessaid_mining_tests.test_utils import random_game, random_configuration


def counterexample(rng, scale):
    report = exact_potential_counterexample()
    return 1, [] if report.cycle_sum == Fraction(2, 3) else [report.to_dict()]


def ordinal_potential(rng, scale):
    runs, findings = 0, []
    for _ in range(1000 * scale):
        game = random_game(rng, int(rng.integers(1, 9)), int(rng.integers(1, 5)))
        s0 = random_configuration(rng, game)
        for kind in SCHEDULER_KINDS:
            runs += 1
            try:
                result = converge(game, s0, make_scheduler(kind, seed=runs), audit=True)
            except InvariantViolation as e:
                findings.append(str(e))
                continue
            if not result.converged or not game.is_stable(result.final):
                findings.append("{} did not converge from {} with {}".format(game, s0, kind))
    return runs, findings


def construction(rng, scale):
    runs, findings = 0, []
    for _ in range(200 * scale):
        game = random_game(rng, int(rng.integers(1, 7)), int(rng.integers(1, 4)))
        runs += 1
        s = construct_equilibrium(game)
        if s not in enumerate_stable(game):
            findings.append("{} constructed {}".format(game, s))
    return runs, findings


def symmetric_potential(rng, scale):
    runs, findings = 0, []
    for _ in range(200 * scale):
        game = random_game(rng, int(rng.integers(1, 8)), int(rng.integers(1, 5)), symmetric=True)
        runs += 1
        result = converge(game, random_configuration(rng, game), make_scheduler("random", seed=runs))
        keys = [symmetric_potential_key(game, s) for s in result.configurations()]
        if any(a <= b for a, b in zip(keys, keys[1:])):
            findings.append("{} from {}".format(game, result.initial))
    return runs, findings


def welfare(rng, scale):
    runs, findings = 0, []
    for _ in range(200 * scale):
        game = random_game(rng, int(rng.integers(1, 7)), int(rng.integers(1, 4)))
        for s in enumerate_stable(game):
            if check_never_alone(game, s):
                runs += 1
                if not is_globally_optimal(game, s):
                    findings.append("{} at {}".format(game, s))
    return runs, findings


def better_equilibrium(rng, scale):
    runs, findings, never_alone = 0, [], 0
    while runs < 50 * scale:
        k = int(rng.integers(2, 4))
        game = random_game(rng, int(rng.integers(2 * k, 2 * k + 3)), k, low=500, high=1000)
        stable = enumerate_stable(game)
        if len(stable) < 2 or not check_generic(game, mode=GENERICITY_SAMPLED, samples=10000).generic:
            continue
        runs += 1
        assumptions = check_never_alone_all(game)
        if assumptions.never_alone:
            never_alone += 1
        for s in stable:
            try:
                find_better_equilibrium(game, s, samples=10000)
            except InvariantViolation as e:
                if assumptions.never_alone:
                    findings.append(str(e))
                else:
                    print("    outside never-alone:", e)
        if assumptions.never_alone:
            first, second = two_equilibria(game, samples=10000)
            if first == second or first not in stable or second not in stable:
                findings.append("{} two equilibria {} {}".format(game, first, second))
    print("    games satisfying never-alone:", never_alone)
    return runs, findings


def reward_design(rng, scale):
    runs, findings = 0, []
    for _ in range(100 * scale):
        game = random_game(rng, int(rng.integers(1, 8)), int(rng.integers(1, 4)))
        stable = list(enumerate_stable(game))
        s0 = stable[int(rng.integers(0, len(stable)))]
        sf = stable[int(rng.integers(0, len(stable)))]
        for kind in SCHEDULER_KINDS:
            runs += 1
            try:
                result = run_design(DesignProblem(game, s0, sf, scheduler=make_scheduler(kind, seed=runs)))
            except InvariantViolation as e:
                findings.append(str(e))
                continue
            if result.final != sf or not result.report.ok:
                findings.append("{}: {} -> {} ended at {}".format(game, s0, sf, result.final))
    return runs, findings


def determinism(rng, scale):
    runs, findings = 0, []
    for seed in range(20 * scale):
        scenario = generate_instance(5, 3, seed=seed, mode="design")
        runs += 1
        if run(scenario).to_json() != run(scenario).to_json():
            findings.append("seed {}".format(seed))
    return runs, findings


campaigns = [
    ("exact potential counterexample", counterexample),
    ("ordinal potential", ordinal_potential),
    ("equilibrium construction", construction),
    ("symmetric potential", symmetric_potential),
    ("never-alone welfare", welfare),
    ("better equilibrium", better_equilibrium),
    ("reward design", reward_design),
    ("determinism", determinism),
]


def main():
    parser = argparse.ArgumentParser(description="Timed property campaigns")
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--scale', type=int, default=1, help="Multiplies every campaign size")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    failed = False
    for name, campaign in campaigns:
        print("{}:".format(name))
        start = time.time()
        runs, findings = campaign(rng, args.scale)
        print("    runs: {}, findings: {}, time: {:.3f}s".format(runs, len(findings), time.time() - start))
        for finding in findings[:10]:
            print("    finding:", finding)
        failed = failed or bool(findings)
    return EXIT_FINDING if failed else EXIT_SUCCESS


if __name__ == '__main__':
    sys.exit(main())
