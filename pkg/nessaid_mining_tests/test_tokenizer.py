# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

import inspect
import unittest
from fractions import Fraction

from nessaid_mining.tokenizer.tokenizer import parse_quantity, parse_assignments, LiteralException
from nessaid_mining.utils import UsageError


class LiteralTest(unittest.TestCase):

    def test_quantities(self):

        input_and_values = [
            ('7', Fraction(7)),
            ('0', Fraction(0)),
            ('-3', Fraction(-3)),
            ('+5', Fraction(5)),
            ('15/4', Fraction(15, 4)),
            ('6/4', Fraction(3, 2)),
            (' 2 / 3 ', Fraction(2, 3)),
            ('1000000000000000000000/3', Fraction(10 ** 21, 3)),
        ]

        for inp, out in input_and_values:
            value = parse_quantity(inp)

            info = "\n\nFunction: {}".format(inspect.stack()[0][3])
            info += "\ninput: {}".format(repr(inp))
            info += "\nvalue: {}".format(value)
            info += "\nExpected value: {}".format(out)

            assert out == value, "Quantity mismatch:" + info
            assert isinstance(value, Fraction), "Quantity is not a Fraction:" + info

    def test_bad_quantities(self):

        inputs = ['', '/', '3/', '/4', '1/0', '1.5', 'abc', '3 4', '1/2/3', '2e3']

        for inp in inputs:
            info = "\n\nFunction: {}".format(inspect.stack()[0][3])
            info += "\ninput: {}".format(repr(inp))
            try:
                value = parse_quantity(inp)
            except LiteralException as e:
                assert isinstance(e, UsageError), "Literal errors must be usage errors:" + info
                continue
            assert False, "Parsed an invalid quantity to {}:".format(value) + info

    def test_assignments(self):

        input_and_pairs = [
            ('p1=c1', [('p1', 'c1')]),
            ('p1=c1, p2=c2', [('p1', 'c1'), ('p2', 'c2')]),
            ('p1 = c2 ,p2= c1', [('p1', 'c2'), ('p2', 'c1')]),
            ('alice=btc, bob=eth-classic', [('alice', 'btc'), ('bob', 'eth-classic')]),
        ]

        for inp, out in input_and_pairs:
            pairs = parse_assignments(inp)

            info = "\n\nFunction: {}".format(inspect.stack()[0][3])
            info += "\ninput: {}".format(repr(inp))
            info += "\npairs: {}".format(pairs)
            info += "\nExpected pairs: {}".format(out)

            assert out == pairs, "Assignment mismatch:" + info

    def test_bad_assignments(self):

        for inp in ['', 'p1', 'p1=', 'p1=c1,', '=c1', 'p1=c1 p2=c2', 'p1:c1']:
            with self.assertRaises(LiteralException, msg="input: {}".format(repr(inp))):
                parse_assignments(inp)


testcase1 = unittest.TestLoader().loadTestsFromTestCase(LiteralTest)
tokenizer_test = unittest.TestSuite([testcase1])
