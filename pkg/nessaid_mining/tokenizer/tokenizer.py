# Copyright 2021 by Saithalavi M, saithalavi@gmail.com
# All rights reserved.
# This file is part of the Nessaid Mining Game, nessaid_mining python package
# and is released under the "MIT License Agreement". Please see the LICENSE
# file included as part of this package.
#

from fractions import Fraction

import ply.lex as lex
import ply.yacc as yacc

from nessaid_cli.utils import StdStreamsHolder

from nessaid_mining.utils import UsageError


class LiteralIllegalCharError(Exception):

    def __init__(self, msg, token=None):
        self.token = token
        super().__init__(msg)


class LiteralSyntaxError(Exception):

    def __init__(self, msg, token=None):
        self.token = token
        super().__init__(msg)


class LiteralException(UsageError):

    def __init__(self, msg, token=None):
        self.token = token
        super().__init__(msg, token=token)


class LiteralLexer(StdStreamsHolder):
    """Lexer for the two literal forms of scenario files.

    Quantities are "7" or "15/4". Assignments are "p1=c1, p2=c2".
    """

    tokens = (
        'INTEGER',
        'IDENTIFIER',
        'SLASH',
        'ASSIGN',
        'COMMA',
    )

    t_SLASH = r'/'
    t_ASSIGN = r'='
    t_COMMA = r','
    t_IDENTIFIER = r'[A-Za-z_][-.a-zA-Z0-9_]*'

    def t_INTEGER(self, t):
        r'[\+-]?[0-9]+'
        t.value = int(t.value)
        return t

    t_ignore = ' \t'

    @property
    def lexer(self):
        return self._lexer

    def __init__(self, stdin=None, stdout=None, stderr=None):
        self._lexer = None
        self.init_streams(stdin=stdin, stdout=stdout, stderr=stderr)
        self._lexer = lex.lex(module=self)

    def t_error(self, t):
        raise LiteralIllegalCharError("Illegal character: '{}'".format(t.value[0]), token=t.value[0])


class LiteralParserCommon(StdStreamsHolder):

    tokens = LiteralLexer.tokens

    @property
    def lexer(self):
        return self._lexer

    @property
    def parser(self):
        return self._parser

    def __init__(self, stdin=None, stdout=None, stderr=None):
        self._lexer = None
        self._parser = None
        self.init_streams(stdin=stdin, stdout=stdout, stderr=stderr)

        self._lexer = LiteralLexer(stdin=stdin, stdout=stdout, stderr=stderr)
        self._parser = yacc.yacc(module=self, debug=False, write_tables=False, errorlog=yacc.NullLogger())

    def parse(self, input_str):
        try:
            return self.parser.parse(input_str, lexer=self.lexer.lexer)
        except LiteralIllegalCharError as e:
            raise LiteralException("Illegal character in {!r}: {}".format(input_str, e.token), token=e.token)
        except LiteralSyntaxError as e:
            raise LiteralException("Syntax error in {!r} at: {}".format(input_str, e.token), token=e.token)

    def p_error(self, t):
        if t is None:
            raise LiteralSyntaxError("Unexpected end of input", token="<end>")
        raise LiteralSyntaxError("Syntax error", token=t.value)


class QuantityParser(LiteralParserCommon):

    start = 'quantity'

    def p_quantity(self, t):
        """quantity : INTEGER
                    | INTEGER SLASH INTEGER"""
        if len(t) == 2:
            t[0] = Fraction(t[1])
        else:
            if t[3] == 0:
                raise LiteralSyntaxError("Zero denominator", token=t[3])
            t[0] = Fraction(t[1], t[3])


class AssignmentParser(LiteralParserCommon):

    start = 'assignments'

    def p_assignments(self, t):
        """assignments : assignments COMMA assignment
                       | assignment"""
        if len(t) == 2:
            t[0] = [t[1]]
        else:
            assignments = t[1]
            assignments.append(t[3])
            t[0] = assignments

    def p_assignment(self, t):
        'assignment : IDENTIFIER ASSIGN IDENTIFIER'
        t[0] = (t[1], t[3])


_parsers = {}


def _get_parser(parser_class):
    parser = _parsers.get(parser_class)
    if parser is None:
        parser = parser_class()
        _parsers[parser_class] = parser
    return parser


def parse_quantity(text):
    """Parses "n" or "n/d" into a Fraction. The sign is not checked here."""
    return _get_parser(QuantityParser).parse(str(text))


def parse_assignments(text):
    """Parses "p1=c1, p2=c2" into a list of (miner-id, coin-id) pairs."""
    return _get_parser(AssignmentParser).parse(str(text))
