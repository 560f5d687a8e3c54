# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import sys
import logging
import argparse

from nessaid_mining.cmd import MiningGameCmd
from nessaid_mining.utils import EXIT_USAGE


def main(argv=None):
    parser = argparse.ArgumentParser(prog="nessaid_mining", description="Mining game experiments")
    parser.add_argument('-f', '--file', default=None, help="Execute the commands of a file")
    parser.add_argument('-v', '--verbose', action='store_true', help="Enable debug logging")
    parser.add_argument('command', nargs=argparse.REMAINDER, help="One command, e.g. learn scenario.json")
    args = parser.parse_args(argv)

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)

    if args.command:
        cmd = MiningGameCmd(prompt="# ", disable_default_hooks=True, use_base_grammar=False)
        if cmd.exec_args(*args.command) != 0:
            return EXIT_USAGE
        return cmd.exit_code

    if args.file:
        cmd = MiningGameCmd(prompt="# ", disable_default_hooks=True, use_base_grammar=False)
        return cmd.exec_file_sync(args.file)

    try:
        MiningGameCmd(prompt="nessaid-mining # ").run(intro="Mining game shell. Type exit to leave.")
    except Exception as e:
        print("Exception in CLI:", type(e), e)
        return EXIT_USAGE
    return 0


if __name__ == '__main__':
    sys.exit(main())
