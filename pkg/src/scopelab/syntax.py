"""Lexer, recursive-descent parser and expression renderer for SLX.

SLX is a tiny statement language::

    let x = 3;            # bind (rules depend on the scoping discipline)
    local y;              # declare in the current routine frame
    global cfg = 42;      # declare in the global frame
    count <<= count + 1;  # super-assignment (lexical discipline only)
    def h(x = 1) { let a = 2; return x + a; }
    h(1);
    print(x, y);
    inspect;

Only integer literals exist. ``#`` starts a comment that runs to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from .errors import LexError, ParseError

# keeps the recursive parser, evaluator and renderer well inside the host stack
MAX_NESTING = 200

KEYWORDS = frozenset({"let", "local", "global", "def", "return", "print", "inspect"})


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<INT>[0-9]+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<SYMBOL><<=|[=;,(){}+\-*/])
  | (?P<bad>.)
    """,
    re.VERBOSE | re.DOTALL,
)


class Token(NamedTuple):
    kind: str  # IDENT | INT | KEYWORD | SYMBOL
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return f"{self.kind} {self.text!r}"


def tokenize(source: str) -> list[Token]:
    tokens = []
    line = 1
    line_start = 0
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        if kind == "ws" or kind == "comment":
            continue
        start = m.start()
        if kind == "nl":
            line += 1
            line_start = start + 1
            continue
        text = m.group()
        if kind == "bad":
            raise LexError(line, start - line_start + 1, text)
        if kind == "IDENT" and text in KEYWORDS:
            kind = "KEYWORD"
        tokens.append(Token(kind, text, line, start - line_start + 1))
    return tokens


# --------------------------------------------------------------------------
# AST.  `line` never takes part in equality, so structural comparison works
# across re-parses of rendered text.


@dataclass(frozen=True)
class IntLit:
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class VarRef:
    name: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "Expr"
    rhs: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple = ()
    line: int = field(default=0, compare=False)


Expr = Union[IntLit, VarRef, BinOp, Neg, Call]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LocalDecl:
    name: str
    init: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GlobalDecl:
    name: str
    init: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SuperAssign:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Param:
    name: str
    default: Optional[Expr] = None


@dataclass(frozen=True)
class RoutineDef:
    name: str
    params: tuple = ()
    body: tuple = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CallStmt:
    call: Call
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Print:
    args: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Inspect:
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    expr: Optional[Expr] = None
    line: int = field(default=0, compare=False)


Stmt = Union[Let, LocalDecl, GlobalDecl, SuperAssign, RoutineDef, CallStmt, Print, Inspect, Return]


@dataclass(frozen=True)
class Program:
    body: tuple = ()


# --------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        if tokens:
            last = tokens[-1]
            eof = Token("EOF", "", last.line, last.col + len(last.text))
        else:
            eof = Token("EOF", "", 1, 1)
        # two sentinels so one-token lookahead never runs off the end
        self.tokens = list(tokens) + [eof, eof]
        self.pos = 0
        self.routine_depth = 0
        self.nesting = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[self.pos + offset]

    def at(self, kind: str, text: str | None = None, offset: int = 0) -> bool:
        tok = self.tokens[self.pos + offset]
        return tok.kind == kind and (text is None or tok.text == text)

    def fail(self, expected, message: str | None = None):
        tok = self.peek()
        found = "end of input" if tok.kind == "EOF" else tok.describe()
        raise ParseError(tok.line, tok.col, expected, found, message)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            self.fail([repr(text) if text else kind])
        tok = self.peek()
        self.pos += 1
        return tok

    def accept(self, kind: str, text: str) -> bool:
        if self.at(kind, text):
            self.pos += 1
            return True
        return False

    # statements -----------------------------------------------------------

    def program(self) -> Program:
        body = []
        while self.peek().kind != "EOF":
            body.append(self.statement())
        return Program(tuple(body))

    def statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "KEYWORD":
            handler = getattr(self, f"stmt_{tok.text}")
            self.pos += 1
            return handler(tok)
        if tok.kind == "IDENT":
            if self.at("SYMBOL", "<<=", 1):
                self.pos += 2
                expr = self.expr()
                self.expect("SYMBOL", ";")
                return SuperAssign(tok.text, expr, tok.line)
            if self.at("SYMBOL", "(", 1):
                call = self.call()
                self.expect("SYMBOL", ";")
                return CallStmt(call, tok.line)
            self.pos += 1
            self.fail(["'<<='", "'('"])
        self.fail(["statement"])

    def stmt_let(self, kw: Token) -> Let:
        name = self.expect("IDENT").text
        self.expect("SYMBOL", "=")
        expr = self.expr()
        self.expect("SYMBOL", ";")
        return Let(name, expr, kw.line)

    def _decl(self, cls, kw: Token):
        name = self.expect("IDENT").text
        init = self.expr() if self.accept("SYMBOL", "=") else None
        self.expect("SYMBOL", ";")
        return cls(name, init, kw.line)

    def stmt_local(self, kw: Token) -> LocalDecl:
        return self._decl(LocalDecl, kw)

    def stmt_global(self, kw: Token) -> GlobalDecl:
        return self._decl(GlobalDecl, kw)

    def stmt_def(self, kw: Token) -> RoutineDef:
        name = self.expect("IDENT").text
        self.expect("SYMBOL", "(")
        params = []
        seen = set()
        if not self.at("SYMBOL", ")"):
            while True:
                ptok = self.expect("IDENT")
                if ptok.text in seen:
                    raise ParseError(ptok.line, ptok.col, ["distinct parameter name"], ptok.describe(),
                                     f"duplicate parameter {ptok.text!r} in routine {name!r}")
                seen.add(ptok.text)
                default = self.expr() if self.accept("SYMBOL", "=") else None
                params.append(Param(ptok.text, default))
                if not self.accept("SYMBOL", ","):
                    break
        self.expect("SYMBOL", ")")
        self.expect("SYMBOL", "{")
        if self.routine_depth >= MAX_NESTING:
            raise ParseError(kw.line, kw.col, ["statement"], kw.describe(),
                             f"routines nested deeper than {MAX_NESTING} levels")
        self.routine_depth += 1
        body = []
        while not self.at("SYMBOL", "}"):
            if self.peek().kind == "EOF":
                self.fail(["'}'"])
            body.append(self.statement())
        self.routine_depth -= 1
        self.pos += 1
        return RoutineDef(name, tuple(params), tuple(body), kw.line)

    def stmt_print(self, kw: Token) -> Print:
        self.expect("SYMBOL", "(")
        args = [self.expr()]
        while self.accept("SYMBOL", ","):
            args.append(self.expr())
        self.expect("SYMBOL", ")")
        self.expect("SYMBOL", ";")
        return Print(tuple(args), kw.line)

    def stmt_inspect(self, kw: Token) -> Inspect:
        self.expect("SYMBOL", ";")
        return Inspect(kw.line)

    def stmt_return(self, kw: Token) -> Return:
        if self.routine_depth == 0:
            raise ParseError(kw.line, kw.col, ["statement"], kw.describe(), "return outside routine")
        expr = None if self.at("SYMBOL", ";") else self.expr()
        self.expect("SYMBOL", ";")
        return Return(expr, kw.line)

    # expressions ----------------------------------------------------------

    def expr(self) -> Expr:
        start = self.peek()
        self.nest(start)
        node = self._sum()
        self.nesting -= 1
        if self.nesting == 0 and _depth(node) > MAX_NESTING:
            raise ParseError(start.line, start.col, ["shallower expression"], start.describe(),
                             f"expression deeper than {MAX_NESTING} levels")
        return node

    def _sum(self) -> Expr:
        node = self.term()
        while self.at("SYMBOL", "+") or self.at("SYMBOL", "-"):
            op = self.peek()
            self.pos += 1
            node = BinOp(op.text, node, self.term(), op.line)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("SYMBOL", "*") or self.at("SYMBOL", "/"):
            op = self.peek()
            self.pos += 1
            node = BinOp(op.text, node, self.factor(), op.line)
        return node

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.pos += 1
            return IntLit(int(tok.text), tok.line)
        if tok.kind == "IDENT":
            if self.at("SYMBOL", "(", 1):
                return self.call()
            self.pos += 1
            return VarRef(tok.text, tok.line)
        if self.accept("SYMBOL", "-"):
            self.nest(tok)
            node = Neg(self.factor(), tok.line)
            self.nesting -= 1
            return node
        if self.accept("SYMBOL", "("):
            self.nest(tok)
            node = self.expr()
            self.expect("SYMBOL", ")")
            self.nesting -= 1
            return node
        self.fail(["INT", "IDENT", "'-'", "'('"])

    def nest(self, tok: Token):
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise ParseError(tok.line, tok.col, ["shallower expression"], tok.describe(),
                             f"nesting deeper than {MAX_NESTING} levels")

    def call(self) -> Call:
        name = self.expect("IDENT")
        self.expect("SYMBOL", "(")
        args = []
        if not self.at("SYMBOL", ")"):
            args.append(self.expr())
            while self.accept("SYMBOL", ","):
                args.append(self.expr())
        self.expect("SYMBOL", ")")
        return Call(name.text, tuple(args), name.line)


def _depth(node: Expr) -> int:
    """Height of an expression tree, computed without recursion."""
    best = 0
    stack = [(node, 1)]
    while stack:
        n, d = stack.pop()
        best = max(best, d)
        if isinstance(n, BinOp):
            stack.append((n.lhs, d + 1))
            stack.append((n.rhs, d + 1))
        elif isinstance(n, Neg):
            stack.append((n.operand, d + 1))
        elif isinstance(n, Call):
            stack.extend((a, d + 1) for a in n.args)
    return best


def parse(tokens: list[Token]) -> Program:
    return _Parser(tokens).program()


def parse_source(source: str) -> Program:
    return parse(tokenize(source))


def parse_expr(source: str) -> Expr:
    """Parse a single expression; used for round-trip checks."""
    p = _Parser(tokenize(source))
    node = p.expr()
    if p.peek().kind != "EOF":
        p.fail(["end of input"])
    return node


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def render_expr(expr: Expr) -> str:
    """Render an expression as canonical SLX text with minimal parentheses."""
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(render_expr(a) for a in expr.args)})"
    if isinstance(expr, Neg):
        inner = render_expr(expr.operand)
        if isinstance(expr.operand, BinOp):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, BinOp):
        prec = _PRECEDENCE[expr.op]
        lhs = render_expr(expr.lhs)
        rhs = render_expr(expr.rhs)
        if isinstance(expr.lhs, BinOp) and _PRECEDENCE[expr.lhs.op] < prec:
            lhs = f"({lhs})"
        # left-associative: an equal-precedence right operand needs parens
        if isinstance(expr.rhs, BinOp) and _PRECEDENCE[expr.rhs.op] <= prec:
            rhs = f"({rhs})"
        return f"{lhs} {expr.op} {rhs}"
    raise TypeError(f"not an expression node: {expr!r}")
