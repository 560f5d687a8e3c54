# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import logging
from fractions import Fraction

from nessaid_mining.dynamics import FirstIndexScheduler, converge, default_max_steps
from nessaid_mining.utils import (
    PreconditionError,
    InvariantViolation,
    ProtocolViolation,
    BudgetExceeded,
    format_rational,
    format_configuration,
)


log = logging.getLogger(__name__)


STAGE_ONE_BOOST = 2


class DesignProblem():
    """Moving a game from one stable configuration to another.

    Ranks are 1-based positions in the order of strictly decreasing power:
    rank 1 is the biggest miner. The game itself keeps its declaration
    order, problem.miner(rank) gives the miner index of a rank.
    """

    def __init__(self, game, s0, sf, scheduler=None, max_steps=None, strict_protocol=False):
        s0 = game.validate_configuration(s0)
        sf = game.validate_configuration(sf)

        if len(set(game.powers)) != game.n:
            raise PreconditionError("Miner powers must be pairwise distinct")
        if not game.is_stable(s0):
            raise PreconditionError("Initial configuration {} is not stable".format(format_configuration(game, s0)))
        if not game.is_stable(sf):
            raise PreconditionError("Target configuration {} is not stable".format(format_configuration(game, sf)))
        if max_steps is not None and max_steps <= 0:
            raise PreconditionError("max_steps must be positive: {}".format(max_steps))

        self._game = game
        self._s0 = s0
        self._sf = sf
        self._scheduler = scheduler if scheduler is not None else FirstIndexScheduler()
        self._max_steps = max_steps if max_steps is not None else default_max_steps(game)
        self._strict_protocol = strict_protocol
        self._order = tuple(sorted(range(game.n), key=lambda p: -game.powers[p]))

    @property
    def game(self):
        return self._game

    @property
    def s0(self):
        return self._s0

    @property
    def sf(self):
        return self._sf

    @property
    def scheduler(self):
        return self._scheduler

    @property
    def max_steps(self):
        return self._max_steps

    @property
    def strict_protocol(self):
        return self._strict_protocol

    @property
    def order(self):
        return self._order

    @property
    def n(self):
        return self._game.n

    def miner(self, rank):
        return self._order[rank - 1]

    def final_coin(self, rank):
        return self._sf[self._order[rank - 1]]

    def rank_of(self, p):
        return self._order.index(p) + 1

    def __repr__(self):
        return "DesignProblem({} -> {}, scheduler={})".format(
            format_configuration(self._game, self._s0), format_configuration(self._game, self._sf),
            self._scheduler.kind)


def _check_stage(problem, i, first=1):
    if not first <= i <= problem.n:
        raise PreconditionError("Stage {} is outside {}..{}".format(i, first, problem.n))


def stage_target(problem, i):
    """s_i: ranks 1..i on their final coins, every smaller miner on the final coin of rank i."""
    _check_stage(problem, i)
    s = [None] * problem.n
    for rank in range(1, problem.n + 1):
        s[problem.miner(rank)] = problem.final_coin(min(rank, i))
    return tuple(s)


def in_T_i(problem, i, s):
    """Ranks below i are at their final coins, the rest on one of the two stage coins."""
    _check_stage(problem, i, first=2)
    for rank in range(1, i):
        if s[problem.miner(rank)] != problem.final_coin(rank):
            return False
    allowed = (problem.final_coin(i), problem.final_coin(i - 1))
    return all(s[problem.miner(rank)] in allowed for rank in range(i, problem.n + 1))


def mover_index(problem, i, s):
    """Rank of the next miner to move onto the stage coin.

    It is the highest rank not yet on that coin. Raises PreconditionError
    for s_i itself and for configurations outside T_i.
    """
    if not in_T_i(problem, i, s):
        raise PreconditionError("{} is not a stage {} configuration".format(format_configuration(problem.game, s), i))
    if tuple(s) == stage_target(problem, i):
        raise PreconditionError("Stage {} target reached, there is no mover".format(i))

    target = problem.final_coin(i)
    rank = problem.n
    while s[problem.miner(rank)] == target:
        rank -= 1
    return rank


def max_rpu(game, s):
    """R(s): the highest RPU over the occupied coins."""
    loads = game.coin_powers(s)
    return max(game.rewards[c] / load for c, load in enumerate(loads) if load > 0)


class DesignedRewards():

    def __init__(self, base, configuration, stage, rewards, mover=None, anchor=None, max_rpu=None):
        self._base = base
        self._configuration = tuple(configuration)
        self._stage = stage
        self._rewards = tuple(rewards)
        self._mover = mover
        self._anchor = anchor
        self._max_rpu = max_rpu
        self._game = base.with_rewards(self._rewards, allow_zero=True)

    @property
    def configuration(self):
        return self._configuration

    @property
    def stage(self):
        return self._stage

    @property
    def rewards(self):
        return self._rewards

    @property
    def mover(self):
        return self._mover

    @property
    def anchor(self):
        return self._anchor

    @property
    def max_rpu(self):
        return self._max_rpu

    @property
    def game(self):
        return self._game

    @property
    def shortfalls(self):
        """Coins whose designed reward is below the base reward."""
        return [c for c, reward in enumerate(self._rewards) if reward < self._base.rewards[c]]

    @property
    def extra(self):
        return sum((max(Fraction(0), reward - base) for reward, base in zip(self._rewards, self._base.rewards)),
                   Fraction(0))

    def to_dict(self, problem):
        game = self._base
        return {
            "stage": self._stage,
            "configuration": format_configuration(game, self._configuration),
            "rewards": {coin.id: format_rational(r) for coin, r in zip(game.coins, self._rewards)},
            "mover": game.miners[problem.miner(self._mover)].id if self._mover else None,
            "anchor": game.miners[problem.miner(self._anchor)].id if self._anchor else None,
            "max_rpu": format_rational(self._max_rpu) if self._max_rpu is not None else None,
            "shortfalls": [game.coins[c].id for c in self.shortfalls],
            "extra": format_rational(self.extra),
        }

    def __repr__(self):
        return "DesignedRewards(stage={}, rewards=[{}])".format(
            self._stage, ", ".join(format_rational(r) for r in self._rewards))


def design_rewards(problem, i, s):
    """The reward function used for one learning phase of stage i started at s.

    Stage 1 raises the final coin of rank 1 to maxF * (sum m / min m) * 2,
    which every miner off that coin strictly prefers. Later stages level
    the RPU of every coin except the stage coin c' at R(s) and lift c' by
    the anchor's power:

        H(c') = R(s) * (M_c'(s) + m_anchor),   H(c) = R(s) * M_c(s)

    so only the mover has a better response, onto c'.
    """
    _check_stage(problem, i)
    game = problem.game
    s = tuple(s)

    if i == 1:
        boost = max(game.rewards) * (game.total_power / min(game.powers)) * STAGE_ONE_BOOST
        rewards = list(game.rewards)
        rewards[problem.final_coin(1)] = boost
        return DesignedRewards(game, s, 1, rewards, max_rpu=max_rpu(game, s))

    mover = mover_index(problem, i, s)
    anchor = mover - 1
    r = max_rpu(game, s)
    loads = game.coin_powers(s)
    target = problem.final_coin(i)

    rewards = [r * load for load in loads]
    rewards[target] = r * (loads[target] + game.powers[problem.miner(anchor)])
    return DesignedRewards(game, s, i, rewards, mover=mover, anchor=anchor, max_rpu=r)


class ProgressVector():
    """One bit per rank i..n, set when the miner sits on the stage coin.

    rank is the position of the bits in lexicographic order, 1-based.
    """

    def __init__(self, problem, i, s):
        target = problem.final_coin(i)
        self._stage = i
        self._bits = tuple(1 if s[problem.miner(rank)] == target else 0 for rank in range(i, problem.n + 1))

    @property
    def stage(self):
        return self._stage

    @property
    def bits(self):
        return self._bits

    @property
    def rank(self):
        return int("".join(str(b) for b in self._bits), 2) + 1

    def __lt__(self, other):
        return self._bits < other._bits

    def __eq__(self, other):
        return isinstance(other, ProgressVector) and self._bits == other._bits

    def __hash__(self):
        return hash(self._bits)

    def __repr__(self):
        return "ProgressVector({})".format("".join(str(b) for b in self._bits))


PSI_NAMES = (
    'larger-miners-frozen',
    'mover-on-stage-coin',
    'smaller-miners-confined',
    'source-mass-bracketed',
    'target-mass-bracketed',
)


class InvariantCheck():

    def __init__(self, stage, phase, step, configuration, psi, in_stage_set):
        self._stage = stage
        self._phase = phase
        self._step = step
        self._configuration = tuple(configuration)
        self._psi = tuple(psi)
        self._in_stage_set = in_stage_set

    @property
    def stage(self):
        return self._stage

    @property
    def phase(self):
        return self._phase

    @property
    def step(self):
        return self._step

    @property
    def configuration(self):
        return self._configuration

    @property
    def psi(self):
        return self._psi

    @property
    def in_stage_set(self):
        return self._in_stage_set

    @property
    def ok(self):
        return all(self._psi) and self._in_stage_set

    @property
    def failed(self):
        failed = [name for name, holds in zip(PSI_NAMES, self._psi) if not holds]
        if not self._in_stage_set:
            failed.append('stage-set')
        return failed

    def __repr__(self):
        return "InvariantCheck(stage={}, phase={}, step={}, failed={})".format(
            self._stage, self._phase, self._step, self.failed)


class InvariantReport():

    def __init__(self):
        self._checks = []
        self._violations = []

    @property
    def checks(self):
        return self._checks

    @property
    def violations(self):
        return self._violations

    @property
    def ok(self):
        return not self._violations

    def add(self, check):
        self._checks.append(check)
        if not check.ok:
            self.violate("Step {} of phase {} in stage {} breaks: {}".format(
                check.step, check.phase, check.stage, ", ".join(check.failed)),
                stage=check.stage, phase=check.phase, step=check.step, configuration=check.configuration)

    def violate(self, message, **context):
        self._violations.append((message, context))
        log.error(message)

    def to_dict(self, game):
        return {
            "checked_steps": len(self._checks),
            "violations": [
                {
                    "message": message,
                    "stage": context.get("stage"),
                    "phase": context.get("phase"),
                    "configuration": format_configuration(game, context["configuration"])
                    if context.get("configuration") is not None else None,
                }
                for message, context in self._violations
            ],
        }

    def __repr__(self):
        return "InvariantReport(checks={}, violations={})".format(len(self._checks), len(self._violations))


class CostLedger():
    """Extra reward paid per learning phase: sum over coins of max(0, H(c) - F(c))."""

    def __init__(self):
        self._phases = []

    @property
    def phases(self):
        return self._phases

    @property
    def phase_count(self):
        return len(self._phases)

    @property
    def total(self):
        return sum((extra for _, _, extra in self._phases), Fraction(0))

    def add(self, stage, phase, extra):
        self._phases.append((stage, phase, extra))

    def stage_total(self, stage):
        return sum((extra for i, _, extra in self._phases if i == stage), Fraction(0))

    def to_dict(self):
        return {
            "phases": [{"stage": i, "phase": phase, "extra": format_rational(extra)} for i, phase, extra in self._phases],
            "phase_count": self.phase_count,
            "total": format_rational(self.total),
        }

    def __repr__(self):
        return "CostLedger(phases={}, total={})".format(len(self._phases), format_rational(self.total))


class PhaseRecord():

    def __init__(self, stage, phase, designed, trace):
        self._stage = stage
        self._phase = phase
        self._designed = designed
        self._trace = trace

    @property
    def stage(self):
        return self._stage

    @property
    def phase(self):
        return self._phase

    @property
    def designed(self):
        return self._designed

    @property
    def trace(self):
        return self._trace


class StageResult():

    def __init__(self, stage, entry, final, phases, progress, report, cost):
        self._stage = stage
        self._entry = tuple(entry)
        self._final = tuple(final)
        self._phases = phases
        self._progress = progress
        self._report = report
        self._cost = cost

    @property
    def stage(self):
        return self._stage

    @property
    def entry(self):
        return self._entry

    @property
    def final(self):
        return self._final

    @property
    def phases(self):
        return self._phases

    @property
    def iterations(self):
        return len(self._phases)

    @property
    def progress(self):
        """Progress ranks at the stage entry and after each iteration; empty for stage 1."""
        return self._progress

    @property
    def report(self):
        return self._report

    @property
    def cost(self):
        return self._cost

    def __iter__(self):
        return iter((self._final, self._report, self._cost))

    def __repr__(self):
        return "StageResult(stage={}, iterations={}, cost={})".format(
            self._stage, len(self._phases), format_rational(self._cost))


class DesignResult():

    def __init__(self, problem, stages, ledger, report):
        self._problem = problem
        self._stages = stages
        self._ledger = ledger
        self._report = report

    @property
    def problem(self):
        return self._problem

    @property
    def stages(self):
        return self._stages

    @property
    def ledger(self):
        return self._ledger

    @property
    def report(self):
        return self._report

    @property
    def final(self):
        return self._stages[-1].final if self._stages else self._problem.s0

    @property
    def steps(self):
        return sum(phase.trace.steps for stage in self._stages for phase in stage.phases)

    def __iter__(self):
        return iter((self._stages, self._ledger))


class _PhaseAuditor():
    """Checks every configuration reached in one stage i >= 2 learning phase."""

    def __init__(self, problem, i, phase, start, mover, report):
        game = problem.game
        self._problem = problem
        self._stage = i
        self._phase = phase
        self._start = tuple(start)
        self._mover = mover
        self._report = report
        self._source = problem.final_coin(i - 1)
        self._target = problem.final_coin(i)
        self._after_first = None

        loads = game.coin_powers(start)
        self._source_start = loads[self._source]
        self._target_start = loads[self._target]

    def __call__(self, record, s):
        problem = self._problem
        if self._after_first is None:
            if record.miner != problem.miner(self._mover) or record.target != self._target:
                self._report.violate(
                    "Stage {} phase {} opened with {} -> {} instead of the mover".format(
                        self._stage, self._phase, problem.game.miners[record.miner].id,
                        problem.game.coins[record.target].id),
                    stage=self._stage, phase=self._phase, configuration=s)
                raise InvariantViolation(self._report.violations[-1][0], report=self._report)
            self._after_first = tuple(s)

        check = InvariantCheck(self._stage, self._phase, record.number, s, self.psi(s), in_T_i(problem, self._stage, s))
        self._report.add(check)
        if not check.ok:
            raise InvariantViolation(self._report.violations[-1][0], report=self._report)

    def psi(self, s):
        problem = self._problem
        loads = problem.game.coin_powers(s)
        first = problem.game.coin_powers(self._after_first)
        mover = self._mover
        return (
            all(s[problem.miner(rank)] == self._start[problem.miner(rank)] for rank in range(1, mover)),
            s[problem.miner(mover)] == self._target,
            all(s[problem.miner(rank)] in (self._source, self._target) for rank in range(mover + 1, problem.n + 1)),
            first[self._source] <= loads[self._source] <= self._source_start,
            self._target_start <= loads[self._target] <= first[self._target],
        )


def _check_protocol(problem, designed, phase):
    shortfalls = designed.shortfalls
    if not shortfalls:
        return
    game = problem.game
    message = "Stage {} phase {} designs rewards below the base reward on {}".format(
        designed.stage, phase, ", ".join(game.coins[c].id for c in shortfalls))
    if problem.strict_protocol:
        raise ProtocolViolation(message, stage=designed.stage, phase=phase, shortfalls=shortfalls)
    log.warning(message)


def _violation(report, message, **context):
    report.violate(message, **context)
    raise InvariantViolation(message, report=report)


def run_stage(problem, i, s_entry, ledger=None, report=None):
    """Repeats design and learning phases until the stage target is reached.

    Stage i >= 2 audits the first step of every phase, every configuration
    the learning reaches, the end of every phase and the growth of the
    progress rank. Any failure stops the run with InvariantViolation.
    """
    _check_stage(problem, i)
    game = problem.game
    ledger = ledger if ledger is not None else CostLedger()
    report = report if report is not None else InvariantReport()

    s = game.validate_configuration(s_entry)
    entry = s
    target = stage_target(problem, i)
    if i >= 2 and not in_T_i(problem, i, s):
        raise PreconditionError("Stage {} cannot start at {}".format(i, format_configuration(game, s)))

    bound = 2 ** (problem.n - i + 1)
    progress = [ProgressVector(problem, i, s).rank] if i >= 2 else []
    phases = []
    cost = Fraction(0)

    log.info("Stage %d starts at %s, target %s", i, format_configuration(game, s), format_configuration(game, target))

    while s != target:
        phase = len(phases) + 1
        if i >= 2 and phase > bound:
            _violation(report, "Stage {} needs more than {} iterations".format(i, bound), stage=i, phase=phase,
                       configuration=s)

        designed = design_rewards(problem, i, s)
        _check_protocol(problem, designed, phase)
        designed_game = designed.game

        auditor = None
        if i >= 2:
            mover = designed.mover
            expected = [(problem.miner(mover), problem.final_coin(i))]
            if designed_game.better_response_steps(s) != expected:
                _violation(report, "Stage {} phase {}: the mover is not the only miner with a better response".format(
                    i, phase), stage=i, phase=phase, configuration=s)
            auditor = _PhaseAuditor(problem, i, phase, s, mover, report)

        trace = converge(designed_game, s, problem.scheduler, max_steps=problem.max_steps, on_step=auditor)
        if not trace.converged:
            raise BudgetExceeded("Stage {} phase {} did not converge within {} steps".format(
                i, phase, problem.max_steps), required=None, budget=problem.max_steps, stage=i, phase=phase)

        s_next = trace.final
        if i >= 2:
            mover = designed.mover
            settled = (in_T_i(problem, i, s_next) and
                       s_next[problem.miner(mover)] == problem.final_coin(i) and
                       all(s_next[problem.miner(rank)] == s[problem.miner(rank)] for rank in range(1, mover)))
            if not settled:
                _violation(report, "Stage {} phase {} ended outside the expected set".format(i, phase),
                           stage=i, phase=phase, configuration=s_next)
            rank = ProgressVector(problem, i, s_next).rank
            if rank <= progress[-1]:
                _violation(report, "Stage {} phase {} did not increase the progress rank".format(i, phase),
                           stage=i, phase=phase, configuration=s_next)
            progress.append(rank)
        else:
            coin = problem.final_coin(1)
            if s_next != target and s_next.count(coin) <= s.count(coin):
                _violation(report, "Stage 1 phase {} made no progress".format(phase),
                           stage=1, phase=phase, configuration=s_next)

        extra = designed.extra
        ledger.add(i, phase, extra)
        cost += extra
        phases.append(PhaseRecord(i, phase, designed, trace))
        log.debug("Stage %d phase %d: %d steps to %s", i, phase, trace.steps, format_configuration(game, s_next))
        s = s_next

    log.info("Stage %d done in %d iterations", i, len(phases))
    return StageResult(i, entry, s, phases, progress, report, cost)


def run_design(problem):
    """Moves the game from s0 to sf, stage by stage, then checks sf under the base rewards."""
    game = problem.game
    ledger = CostLedger()
    report = InvariantReport()
    stages = []

    s = problem.s0
    for i in range(1, problem.n + 1):
        result = run_stage(problem, i, s, ledger=ledger, report=report)
        stages.append(result)
        s = result.final

    if s != problem.sf:
        _violation(report, "Design ended at {} instead of {}".format(
            format_configuration(game, s), format_configuration(game, problem.sf)), configuration=s)
    if not game.is_stable(s):
        _violation(report, "Target {} is not stable under the base rewards".format(format_configuration(game, s)),
                   configuration=s)

    log.info("Design reached %s with total cost %s over %d phases",
             format_configuration(game, s), format_rational(ledger.total), ledger.phase_count)
    return DesignResult(problem, stages, ledger, report)


def design_gains(problem):
    """Payoff change of each miner between s0 and sf under the base rewards."""
    game = problem.game
    before = game.payoffs(problem.s0)
    after = game.payoffs(problem.sf)
    return [a - b for a, b in zip(after, before)]
