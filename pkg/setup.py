# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import os
import sys
import shutil
from setuptools import setup

VERSION = "1.0.0"

pkg_name = 'nessaid_mining'
test_pkg_name = 'nessaid_mining_tests'
sub_packages = ['tokenizer']

install_packages = [pkg_name, test_pkg_name] + [pkg_name + "." + sub_pkg for sub_pkg in sub_packages]

clanup_dirs = ['build', 'dist', '.pytest_cache', pkg_name + '.egg-info']


def rm_pycache(directory):
    for item in os.listdir(directory):
        cdir = os.path.join(directory, item)
        if os.path.isdir(cdir):
            if item == '__pycache__':
                print("removing dir:", cdir)
                shutil.rmtree(cdir)
            else:
                rm_pycache(cdir)


def do_cleanup_fixes():
    rm_pycache(".")
    dir_content = os.listdir()
    for d in clanup_dirs:
        if d in dir_content:
            try:
                print("removing dir:", str(d))
                shutil.rmtree(d)
            except Exception:
                pass


long_description = """Nessaid Mining Game

Simulates miners choosing among several proof-of-work coins. Each coin pays
its reward to the miners mining it, split in proportion to their power.

The package computes with exact rationals throughout and provides

Better-response learning with pluggable schedulers, audited against the
ordinal potential of the game.

Enumeration and greedy construction of stable configurations, the
never-alone and genericity checks and the search for a better equilibrium.

Reward design: a staged controller that moves the game from one stable
configuration to another by temporarily changing the coin rewards, with a
cost ledger and per-step invariant audits.

A command shell built on nessaid_cli, scenario files in JSON, trace and
report output and a random instance generator.

Requirements

nessaid_cli: The async command shell, its tokens and grammar

ply: Parses rational literals and compact assignment lists

numpy: Seeded random generators for schedulers, instances and sampling
"""

install_requires = [
    "nessaid_cli>=4.1.0",
    "ply",
    "numpy",
]


if __name__ == '__main__':

    setup(
        name=pkg_name,
        version=VERSION,
        description="Mining game dynamics, equilibria and reward design",
        long_description=long_description,
        author='Saithalavi M',
        author_email='saithalavi@gmail.com',
        packages=install_packages,
        include_package_data=True,
        install_requires=install_requires,
        python_requires='>=3.6',
        keywords='game-theory potential-game blockchain mining',
        license='MIT',
        classifiers=[
            'Development Status :: 4 - Beta',
            'Intended Audience :: Science/Research',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Programming Language :: Python :: 3',
            'License :: OSI Approved :: MIT License',
        ],
        entry_points={
            'console_scripts': [
                'nessaid-mining=nessaid_mining.__main__:main',
            ],
        },
        test_suite="nessaid_mining_tests",
    )

    if 'clean' in sys.argv and 'install' not in sys.argv:
        do_cleanup_fixes()
