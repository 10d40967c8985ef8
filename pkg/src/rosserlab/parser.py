"""Surface syntax: a backtracking recursive-descent parser and a printer.

Grammar (whitespace between tokens is ignored)::

    term := "0" | "x"NAT | "S(" term ")" | "(" term "+" term ")" | "(" term "*" term ")"
    atom := "(" term "=" term ")" | "(" term "<=" term ")" | "R(" term ")"
    fml  := atom | "~" fml | "(" fml "&" fml ")" | "all x"NAT" " fml

plus the sugar ``(A -> B)``, ``(A | B)``, ``ex xN A`` and ``(all xN <= t) A``,
which is expanded at parse time.  The printer emits core connectives only.
"""

from __future__ import annotations

from rosserlab.syntax import (
    And, Box, Eq, Forall, Formula, Leq, Not, Prod, Succ, Sum, Term, Var, Zero,
    bounded_all, disj, exists, implies,
)

__all__ = ["ParseError", "parse_formula", "parse_term", "print_formula", "print_term"]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = "") -> None:
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class _Parser:
    def __init__(self, text: str) -> None:
        self.s = text
        self.n = len(text)
        self._term_memo: dict[int, tuple[Term, int] | ParseError] = {}

    def error(self, message: str, pos: int) -> ParseError:
        return ParseError(message, pos, self.s)

    def ws(self, i: int) -> int:
        while i < self.n and self.s[i].isspace():
            i += 1
        return i

    def lit(self, i: int, token: str) -> int:
        i = self.ws(i)
        if not self.s.startswith(token, i):
            raise self.error(f"expected {token!r}", i)
        return i + len(token)

    def peek(self, i: int, token: str) -> bool:
        return self.s.startswith(token, self.ws(i))

    def nat(self, i: int) -> tuple[int, int]:
        j = i
        while j < self.n and self.s[j].isdigit():
            j += 1
        if j == i:
            raise self.error("expected a natural number", i)
        return int(self.s[i:j]), j

    def var(self, i: int) -> tuple[int, int]:
        i = self.lit(i, "x")
        return self.nat(i)

    # terms

    def term(self, i: int) -> tuple[Term, int]:
        i = self.ws(i)
        hit = self._term_memo.get(i)
        if hit is None:
            try:
                hit = self._term(i)
            except ParseError as exc:
                hit = exc
            self._term_memo[i] = hit
        if isinstance(hit, ParseError):
            raise hit
        return hit

    def _term(self, i: int) -> tuple[Term, int]:
        s = self.s
        if s.startswith("S(", i):
            depth = 0
            while s.startswith("S(", i):
                depth += 1
                i = self.ws(i + 2)
            inner, i = self.term(i)
            for _ in range(depth):
                i = self.lit(i, ")")
            return Succ(inner, depth), i
        if s.startswith("0", i):
            return Zero(), i + 1
        if s.startswith("x", i):
            idx, i = self.var(i)
            return Var(idx), i
        if s.startswith("(", i):
            left, j = self.term(i + 1)
            j = self.ws(j)
            if s.startswith("+", j):
                ctor = Sum
            elif s.startswith("*", j):
                ctor = Prod
            else:
                raise self.error("expected '+' or '*'", j)
            right, j = self.term(j + 1)
            return ctor(left, right), self.lit(j, ")")
        raise self.error("expected a term", i)

    # formulas

    def fml(self, i: int) -> tuple[Formula, int]:
        negs = 0
        i = self.ws(i)
        while self.s.startswith("~", i):
            negs += 1
            i = self.ws(i + 1)
        f, i = self._fml(i)
        for _ in range(negs):
            f = Not(f)
        return f, i

    def _fml(self, i: int) -> tuple[Formula, int]:
        s = self.s
        if s.startswith("all", i):
            v, j = self.var(self.ws(i + 3))
            body, j = self.fml(j)
            return Forall(v, body), j
        if s.startswith("ex", i):
            v, j = self.var(self.ws(i + 2))
            body, j = self.fml(j)
            return exists(v, body), j
        if s.startswith("R(", i):
            t, j = self.term(i + 2)
            return Box(t), self.lit(j, ")")
        if s.startswith("(", i):
            return self._paren(i)
        raise self.error("expected a formula", i)

    def _paren(self, i: int) -> tuple[Formula, int]:
        j = self.ws(i + 1)
        if self.s.startswith("all", j):
            k = self.ws(j + 3)
            try:
                v, k = self.var(k)
            except ParseError:
                pass
            else:
                if self.peek(k, "<="):
                    bound, k = self.term(self.lit(k, "<="))
                    body, k = self.fml(self.lit(k, ")"))
                    return bounded_all(v, bound, body), k
        try:
            left, k = self.term(j)
            k = self.ws(k)
            if self.s.startswith("<=", k):
                ctor, k = Leq, k + 2
            elif self.s.startswith("=", k):
                ctor, k = Eq, k + 1
            else:
                raise self.error("expected '=' or '<='", k)
            right, k = self.term(k)
            return ctor(left, right), self.lit(k, ")")
        except ParseError as atom_err:
            try:
                return self._binary(j)
            except ParseError as fml_err:
                raise max(atom_err, fml_err, key=lambda e: e.pos) from None

    def _binary(self, j: int) -> tuple[Formula, int]:
        left, k = self.fml(j)
        k = self.ws(k)
        s = self.s
        if s.startswith("&", k):
            op, k = And, k + 1
        elif s.startswith("->", k):
            op, k = implies, k + 2
        elif s.startswith("|", k):
            op, k = disj, k + 1
        else:
            raise self.error("expected '&', '->' or '|'", k)
        right, k = self.fml(k)
        return op(left, right), self.lit(k, ")")


def _finish(p: _Parser, node, end: int):
    end = p.ws(end)
    if end != p.n:
        raise p.error("unexpected trailing input", end)
    return node


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f, end = p.fml(0)
    return _finish(p, f, end)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t, end = p.term(0)
    return _finish(p, t, end)


def print_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Succ):
        return "S(" * t.times + print_term(t.arg) + ")" * t.times
    op = "+" if isinstance(t, Sum) else "*"
    return f"({print_term(t.left)}{op}{print_term(t.right)})"


def print_formula(f: Formula) -> str:
    out: list[str] = []
    _emit(f, out)
    return "".join(out)


def _emit(f: Formula, out: list[str]) -> None:
    while isinstance(f, (Not, Forall)):
        if isinstance(f, Not):
            out.append("~")
        else:
            out.append(f"all x{f.var} ")
        f = f.body
    if isinstance(f, Eq):
        out.append(f"({print_term(f.left)}={print_term(f.right)})")
    elif isinstance(f, Leq):
        out.append(f"({print_term(f.left)}<={print_term(f.right)})")
    elif isinstance(f, Box):
        out.append(f"R({print_term(f.arg)})")
    elif isinstance(f, And):
        out.append("(")
        _emit(f.left, out)
        out.append("&")
        _emit(f.right, out)
        out.append(")")
    else:
        raise TypeError(f"not a formula: {f!r}")
