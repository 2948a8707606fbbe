"""A small expression language over relations, subspaces and scalars.

    stmt    := ident "=" expr | "print" expr | expr
    expr    := term (("+" | "-" | "(+)") term)*
    term    := unary ("*" unary)*
    unary   := "-" unary | scalar unary | postfix
    postfix := atom ("^*" | "^-1")*
    atom    := ident | number | "(" expr ")" | func "(" args ")"

Statements are separated by newlines or ';'.  "+" is the operatorwise sum
and "(+)" the componentwise sum; "*" is the product (or scaling when the
left factor is a scalar).  On subspaces "^*" is the orthogonal complement
and "+"/"(+)" the subspace sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .. import decompose as dec
from .. import relation as rel
from .. import subspace as ss
from ..relation import Relation
from ..subspace import Subspace
from .fileio import Environment

MAX_DEPTH = 200


class DSLError(Exception):
    kind = "error"

    def __init__(self, message: str, line: int, col: int):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"{self.kind} at line {line}, column {col}: {message}")


class LexError(DSLError):
    kind = "lexical error"


class ParseError(DSLError):
    kind = "syntax error"


class EvalError(DSLError):
    kind = "type error"


class UnknownName(EvalError):
    kind = "unknown name"


# -- lexer ---------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"(?P<cnum>{_NUM}[+-](?:{_NUM})?i(?![A-Za-z0-9_]))"
    rf"|(?P<num>{_NUM}i?(?![A-Za-z0-9_]))"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\(\+\)|\^\*|\^-1|[-+*()=,;])"
    r"|(?P<nl>\n)"
    r"|(?P<ws>[ \t\r]+)"
)


@dataclass
class Token:
    kind: str  # num, ident, op, sep, eof
    text: str
    line: int
    col: int
    value: complex | None = None


def _number(text: str, line: int, col: int) -> complex:
    m = re.fullmatch(rf"({_NUM})([+-])({_NUM})?i", text)
    if m:
        im = float(m.group(3)) if m.group(3) else 1.0
        z = complex(float(m.group(1)), im * (1 if m.group(2) == "+" else -1))
    elif text.endswith("i"):
        z = complex(0.0, float(text[:-1]))
    else:
        z = complex(float(text), 0.0)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise LexError(f"number out of range: {text}", line, col)
    return z


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        col = pos - line_start + 1
        if not m:
            raise LexError(f"unexpected character {source[pos]!r}", line, col)
        kind, text = m.lastgroup, m.group()
        if kind in ("num", "cnum"):
            toks.append(Token("num", text, line, col, _number(text, line, col)))
        elif kind == "ident":
            toks.append(Token("ident", text, line, col))
        elif kind == "op":
            toks.append(Token("sep" if text == ";" else "op", text, line, col))
        elif kind == "nl":
            toks.append(Token("sep", "\n", line, col))
            line, line_start = line + 1, m.end()
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


# -- syntax tree -----------------------------------------------------------------

@dataclass
class Node:
    line: int
    col: int


@dataclass
class Ident(Node):
    name: str


@dataclass
class Num(Node):
    value: complex


@dataclass
class Unary(Node):
    op: str  # "^*", "^-1", "neg"
    arg: Node


@dataclass
class Scale(Node):
    scalar: Node
    arg: Node


@dataclass
class BinOp(Node):
    op: str  # "+", "-", "(+)", "*"
    left: Node
    right: Node


@dataclass
class Call(Node):
    name: str
    args: list


@dataclass
class Assign(Node):
    name: str
    expr: Node


@dataclass
class Print(Node):
    expr: Node


FUNCTIONS = ("re", "im", "reg", "sing", "op", "mulrel", "minf", "dom", "ran", "ker",
             "mul", "graph", "cross", "id", "zero", "shift")


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            raise self.error(f"expected {text or kind}")
        return self.advance()

    def error(self, msg: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"{msg}, found {found}", t.line, t.col)

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            t = self.tok
            raise ParseError("expression nested too deeply", t.line, t.col)

    def checked(self, node: Node) -> Node:
        if tree_depth(node) > MAX_DEPTH:
            raise ParseError("expression nested too deeply", node.line, node.col)
        return node

    # program := stmt? (sep stmt?)*
    def program(self) -> list[Node]:
        stmts = []
        while not self.at("eof"):
            if self.at("sep"):
                self.advance()
                continue
            stmts.append(self.statement())
            if not (self.at("sep") or self.at("eof")):
                raise self.error("expected end of statement")
        return stmts

    def statement(self) -> Node:
        t = self.tok
        if t.kind == "ident" and t.text == "print" and not self._next_is("op", "="):
            self.advance()
            return Print(t.line, t.col, self.checked(self.expr()))
        if t.kind == "ident" and self._next_is("op", "="):
            if t.text in FUNCTIONS or t.text == "print":
                raise ParseError(f"cannot assign to reserved name {t.text!r}", t.line, t.col)
            self.advance()
            self.advance()
            return Assign(t.line, t.col, t.text, self.checked(self.expr()))
        return Print(t.line, t.col, self.checked(self.expr()))

    def _next_is(self, kind: str, text: str) -> bool:
        t = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        return t is not None and t.kind == kind and t.text == text

    def expr(self) -> Node:
        self.enter()
        node = self.term()
        while self.at("op") and self.tok.text in ("+", "-", "(+)"):
            t = self.advance()
            node = BinOp(t.line, t.col, t.text, node, self.term())
        self.depth -= 1
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at("op", "*"):
            t = self.advance()
            node = BinOp(t.line, t.col, "*", node, self.unary())
        return node

    def _starts_unary(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "num") or (t.kind == "op" and t.text in ("(", "-"))

    def unary(self) -> Node:
        self.enter()
        t = self.tok
        if self.at("op", "-"):
            self.advance()
            node = Unary(t.line, t.col, "neg", self.unary())
        else:
            node = self.postfix()
            # juxtaposition "2 A", "(1+i) A"; the left factor must be a scalar
            if self._starts_unary() and not self.at("op", "-"):
                node = Scale(t.line, t.col, node, self.unary())
        self.depth -= 1
        return node

    def postfix(self) -> Node:
        node = self.atom()
        while self.at("op") and self.tok.text in ("^*", "^-1"):
            t = self.advance()
            node = Unary(t.line, t.col, t.text, node)
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(t.line, t.col, t.value)
        if t.kind == "ident":
            self.advance()
            if self.at("op", "("):
                if t.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {t.text!r}", t.line, t.col)
                self.advance()
                args = []
                if not self.at("op", ")"):
                    args.append(self.expr())
                    while self.at("op", ","):
                        self.advance()
                        args.append(self.expr())
                self.expect("op", ")")
                return Call(t.line, t.col, t.text, args)
            if t.text in FUNCTIONS or t.text == "print":
                raise ParseError(f"{t.text!r} is a reserved name", t.line, t.col)
            return Ident(t.line, t.col, t.text)
        if self.at("op", "("):
            self.advance()
            node = self.expr()
            self.expect("op", ")")
            return node
        raise self.error("expected an expression")


def tree_depth(node: Node) -> int:
    """Depth of a syntax tree, computed without recursion."""
    best, stack = 0, [(node, 1)]
    while stack:
        cur, d = stack.pop()
        best = max(best, d)
        if isinstance(cur, Unary):
            stack.append((cur.arg, d + 1))
        elif isinstance(cur, Scale):
            stack += [(cur.scalar, d + 1), (cur.arg, d + 1)]
        elif isinstance(cur, BinOp):
            stack += [(cur.left, d + 1), (cur.right, d + 1)]
        elif isinstance(cur, Call):
            stack += [(a, d + 1) for a in cur.args]
    return best


def parse(source: str) -> list[Node]:
    """Parse a program into a list of statements."""
    return Parser(source).program()


def parse_expr(source: str) -> Node:
    """Parse a single expression."""
    p = Parser(source)
    node = p.checked(p.expr())
    if not p.at("eof"):
        raise p.error("unexpected trailing input")
    return node


# -- evaluation -------------------------------------------------------------------

def _kind(v) -> str:
    if isinstance(v, Relation):
        return "relation"
    if isinstance(v, Subspace):
        return "subspace"
    return "scalar"


def _finite(z: complex, node: Node) -> complex:
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise EvalError("scalar overflow", node.line, node.col)
    return z


class Evaluator:
    def __init__(self, env: Environment):
        self.env = env
        self.n = env.hilbert_dim

    def run(self, stmts: list[Node]) -> list:
        """Execute statements; returns the values of print statements."""
        out = []
        for st in stmts:
            if isinstance(st, Assign):
                self.env.bindings[st.name] = self.eval(st.expr)
            else:
                out.append(self.eval(st.expr))
        return out

    def eval(self, node: Node):
        try:
            return self._eval(node)
        except DSLError:
            raise
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            raise EvalError(f"evaluation failed: {exc}", node.line, node.col) from None

    def _want(self, v, kind: str, node: Node, what: str):
        if _kind(v) != kind:
            raise EvalError(f"{what} expects a {kind}, got a {_kind(v)}", node.line, node.col)
        return v

    def _eval(self, node: Node):
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Ident):
            try:
                return self.env.bindings[node.name]
            except KeyError:
                raise UnknownName(node.name, node.line, node.col) from None
        if isinstance(node, Unary):
            v = self.eval(node.arg)
            k = _kind(v)
            if node.op == "neg":
                if k == "subspace":
                    raise EvalError("cannot negate a subspace", node.line, node.col)
                return -v if k == "scalar" else rel.scalar_mul(-1.0, v)
            if node.op == "^*":
                if k == "relation":
                    return rel.adjoint(v)
                if k == "subspace":
                    return ss.complement(v)
                return complex(np.conj(v))
            if k == "relation":
                return rel.inverse(v)
            if k == "scalar":
                if v == 0:
                    raise EvalError("division by zero", node.line, node.col)
                return _finite(1 / v, node)
            raise EvalError("^-1 is not defined for a subspace", node.line, node.col)
        if isinstance(node, Scale):
            s = self.eval(node.scalar)
            if _kind(s) != "scalar":
                raise EvalError(f"juxtaposition needs a scalar on the left, got a {_kind(s)}",
                                node.line, node.col)
            return self._mul(s, self.eval(node.arg), node)
        if isinstance(node, BinOp):
            a, b = self.eval(node.left), self.eval(node.right)
            if node.op == "*":
                return self._mul(a, b, node)
            return self._add(node.op, a, b, node)
        if isinstance(node, Call):
            return self._call(node)
        raise EvalError("not an expression", node.line, node.col)

    def _mul(self, a, b, node):
        ka, kb = _kind(a), _kind(b)
        if ka == "scalar" and kb == "scalar":
            return _finite(a * b, node)
        if ka == "scalar" and kb == "relation":
            return rel.scalar_mul(_finite(a, node), b)
        if ka == "relation" and kb == "relation":
            return rel.product(a, b)
        raise EvalError(f"'*' is not defined for {ka} and {kb}", node.line, node.col)

    def _add(self, op, a, b, node):
        ka, kb = _kind(a), _kind(b)
        if ka != kb:
            raise EvalError(f"'{op}' between a {ka} and a {kb}", node.line, node.col)
        if ka == "scalar":
            if op == "(+)":
                raise EvalError("'(+)' is not defined for scalars", node.line, node.col)
            return _finite(a + b if op == "+" else a - b, node)
        if ka == "subspace":
            if op == "-":
                raise EvalError("'-' is not defined for subspaces", node.line, node.col)
            if a.ambient_dim != b.ambient_dim:
                raise EvalError("subspaces of different spaces", node.line, node.col)
            return ss.sum(a, b)
        if op == "+":
            return rel.op_sum(a, b)
        if op == "-":
            return rel.op_diff(a, b)
        return rel.cw_sum(a, b)

    def _call(self, node: Call):
        args = [self.eval(a) for a in node.args]
        kinds = [_kind(a) for a in args]
        name = node.name

        def arity(*allowed):
            if tuple(kinds) not in allowed:
                want = " or ".join("(" + ", ".join(k) + ")" for k in allowed)
                got = "(" + ", ".join(kinds) + ")"
                raise EvalError(f"{name} expects {want}, got {got}", node.line, node.col)

        if name in ("re", "im", "reg", "sing", "op", "mulrel", "minf"):
            arity(("relation",))
            A = args[0]
            return {"re": dec.real_part, "im": dec.imag_part, "reg": dec.regular_part,
                    "sing": dec.singular_part, "op": dec.operator_part,
                    "mulrel": dec.mul_part, "minf": rel.infinity_ext}[name](A)
        if name in ("dom", "ran", "ker", "mul"):
            arity(("relation",))
            return getattr(args[0], name)
        if name == "graph":
            arity(("relation",))
            return args[0].graph
        if name == "cross":
            arity(("subspace", "subspace"))
            S, T = args
            if S.ambient_dim != self.n or T.ambient_dim != self.n:
                raise EvalError(f"cross needs subspaces of C^{self.n}", node.line, node.col)
            return rel.cross(S, T)
        if name in ("id", "zero"):
            arity((), ("subspace",))
            if not args:
                return rel.identity_on(Subspace.full(self.n)) if name == "id" \
                    else Subspace.zero(self.n)
            S = args[0]
            if S.ambient_dim != self.n:
                raise EvalError(f"{name} needs a subspace of C^{self.n}", node.line, node.col)
            return rel.identity_on(S) if name == "id" else rel.zero_on(S)
        if name == "shift":
            arity(("relation", "scalar"))
            return rel.shift(args[0], args[1])
        raise EvalError(f"unknown function {name!r}", node.line, node.col)


def evaluate(source: str, env: Environment) -> list:
    """Parse and run a program; returns the printed values."""
    return Evaluator(env).run(parse(source))
