"""Text format for graded Lie expressions.

Grammar (whitespace-insensitive):

    expr    := term (('+' | '-') term)*
    term    := ['-'] [INT '*'] atom
    atom    := VAR | bracket | '(' expr ')'
    bracket := '[' expr (',' slot)* ']'
    slot    := sterm (('+' | '-') sterm)*      -- inside optional parentheses
    sterm   := [INT '*'] satom ['^' INT]
    satom   := VAR | bracket | '(' expr ')'
    VAR     := [yzx] digits        INT := digits

Brackets are left-normed chains: [a, s1, s2, ...] applies the slot operators
to a in order.  A slot w^k is the k-fold ad of w; a parenthesized sum of
powers of one common base, like (x2^27 - x2^3), is an operator polynomial in
ad of that base.  print_expr and parse_expr round-trip exactly.
"""

from __future__ import annotations

import re

from .errors import GlieError
from .freelie import (
    AdPolyDiff,
    AdPower,
    BracketChain,
    Scale,
    Sum,
    Var,
    Variable,
)


class ParseError(GlieError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:([yzx])(\d+)|(\d+)|([\[\](),+\-^*]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1):
            tokens.append(("var", Variable(m.group(1), int(m.group(2))), m.start()))
        elif m.group(3):
            tokens.append(("int", int(m.group(3)), m.start()))
        else:
            tokens.append((m.group(4), None, m.start()))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return tok

    # -- expressions ---------------------------------------------------------

    def parse_expr(self):
        terms = [self.parse_term()]
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            term = self.parse_term()
            terms.append(Scale(-1, term) if op == "-" else term)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_term(self):
        negative = False
        if self.peek() == "-":
            self.next()
            negative = True
        coeff = 1
        if self.peek() == "int":
            coeff = self.next()[1]
            self.expect("*")
        atom = self.parse_atom()
        coeff = -coeff if negative else coeff
        if coeff == 1:
            return atom
        return Scale(coeff, atom)

    def parse_atom(self):
        kind = self.peek()
        if kind == "var":
            return Var(self.next()[1])
        if kind == "[":
            return self.parse_bracket()
        if kind == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        tok = self.next()
        raise ParseError(f"expected a variable, bracket or parenthesis, found {tok[0]!r}", tok[2])

    def parse_bracket(self):
        self.expect("[")
        head = self.parse_expr()
        slots = []
        while self.peek() == ",":
            self.next()
            slots.append(self.parse_slot())
        self.expect("]")
        if not slots:
            tok = self.tokens[self.i - 1]
            raise ParseError("a bracket needs at least two entries", tok[2])
        return BracketChain(head, tuple(slots))

    # -- slots ----------------------------------------------------------------

    def parse_slot(self):
        if self.peek() == "(":
            # tentatively an operator sum; reparse as plain atom on failure
            mark = self.i
            self.next()
            try:
                slot = self.parse_slot_sum(closing=")")
                self.expect(")")
            except ParseError:
                self.i = mark
                base = self.parse_atom()
                return self._powered(base)
            if self.peek() == "^" and isinstance(slot, AdPower) and slot.exponent == 1:
                # "(expr)^k": the parentheses only grouped the base
                self.next()
                k = self.expect("int")[1]
                return AdPower(slot.base, k)
            return slot
        base = self.parse_atom()
        return self._powered(base)

    def _powered(self, base):
        if self.peek() == "^":
            self.next()
            k = self.expect("int")[1]
            return AdPower(base, k)
        return AdPower(base, 1)

    def parse_slot_sum(self, closing: str):
        terms = []
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        terms.append(self.parse_slot_term(sign))
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            terms.append(self.parse_slot_term(-1 if op == "-" else 1))
        if len(terms) == 1:
            coeff, base, exp = terms[0]
            if coeff == 1:
                return AdPower(base, exp)
            return AdPolyDiff(base, ((coeff, exp),))
        base = terms[0][1]
        for _, other, _ in terms[1:]:
            if other != base:
                raise ParseError("operator slot terms must share one base",
                                 self.tokens[self.i][2])
        return AdPolyDiff(base, tuple((c, e) for c, _, e in terms))

    def parse_slot_term(self, sign: int):
        coeff = 1
        if self.peek() == "int":
            coeff = self.next()[1]
            self.expect("*")
        base = self.parse_atom()
        exp = 1
        if self.peek() == "^":
            self.next()
            exp = self.expect("int")[1]
        return (sign * coeff, base, exp)


def parse_expr(text: str):
    parser = _Parser(text)
    expr = parser.parse_expr()
    tok = parser.next()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[0]!r}", tok[2])
    return expr


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _print_atom(e) -> str:
    if isinstance(e, Var):
        return str(e.var)
    if isinstance(e, BracketChain):
        return print_expr(e)
    return "(" + print_expr(e) + ")"


def _print_slot(slot) -> str:
    if isinstance(slot, AdPower):
        base = _print_atom(slot.base)
        return base if slot.exponent == 1 else f"{base}^{slot.exponent}"
    parts = []
    for i, (coeff, exp) in enumerate(slot.terms):
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        body = _print_atom(slot.base) + (f"^{exp}" if exp != 1 else "")
        if mag != 1:
            body = f"{mag}*{body}"
        if i == 0:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "(" + "".join(parts) + ")"


def print_expr(e) -> str:
    if isinstance(e, Var):
        return str(e.var)
    if isinstance(e, Scale):
        inner = _print_atom(e.expr) if isinstance(e.expr, Sum) else print_expr(e.expr)
        if e.coeff == -1:
            return f"-{inner}"
        if e.coeff < 0:
            return f"-{abs(e.coeff)}*{inner}"
        return f"{e.coeff}*{inner}"
    if isinstance(e, Sum):
        parts = [print_expr(e.terms[0])]
        for t in e.terms[1:]:
            text = print_expr(t)
            if text.startswith("-"):
                parts.append(f" - {text[1:]}")
            else:
                parts.append(f" + {text}")
        return "".join(parts)
    if isinstance(e, BracketChain):
        inner = [print_expr(e.head)] + [_print_slot(s) for s in e.slots]
        return "[" + ", ".join(inner) + "]"
    raise TypeError(f"not a LieExpr node: {e!r}")
