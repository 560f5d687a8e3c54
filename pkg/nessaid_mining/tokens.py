# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

from nessaid_cli.tokens import (
    StringToken,
    RangedIntToken,
    AlternativeStringsToken,
    NullTokenValue,
)

from nessaid_mining.dynamics import SCHEDULER_KINDS
from nessaid_mining.scenario import MODES, SEED_MAX


class SchedulerToken(AlternativeStringsToken):

    def __init__(self, name, cli=None, helpstring=None):
        super().__init__(name, list(SCHEDULER_KINDS), cli=cli, helpstring=helpstring)

    async def get_helpstring(self, match_string=None, cli=None): # noqa
        if not self._helpstring:
            return "Step selection policy: {}".format(", ".join(SCHEDULER_KINDS))
        return self.helpstring


class ModeToken(AlternativeStringsToken):

    def __init__(self, name, cli=None, helpstring=None):
        super().__init__(name, list(MODES), cli=cli, helpstring=helpstring)


class SeedToken(RangedIntToken):

    def __init__(self, name, cli=None, helpstring=None):
        super().__init__(name, 0, SEED_MAX, cli=cli, helpstring=helpstring)

    @property
    def helpstring(self):
        return self._helpstring or "A seed between 0 and 2^64-1"


class ScenarioFileToken(StringToken):
    """Path of a scenario or output file, quoted when it has spaces."""

    def __init__(self, name, cli=None, helpstring=None):
        super().__init__(name, cli=cli, helpstring=helpstring)

    async def get_value(self, match_string=None, cli=None):
        value = await super().get_value(match_string, cli=cli)
        if value is NullTokenValue or not value:
            return NullTokenValue
        return value

    async def get_helpstring(self, match_str, cli=None): # noqa
        if not self._helpstring:
            return "Path of a JSON file"
        return self.helpstring
