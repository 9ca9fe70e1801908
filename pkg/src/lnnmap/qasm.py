"""Reader and writer for the OpenQASM 2.0 subset the router understands.

Only one quantum register is allowed. Single-qubit gates from ``qelib1.inc``,
``cx``, ``swap``, ``measure`` and ``barrier`` are accepted; any other gate is
rejected with :class:`UnsupportedGate` rather than decomposed.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .circuit import (
    ONE_QUBIT_ARITY,
    Barrier,
    Cnot,
    Gate,
    LogicalProgram,
    Measure,
    OneQubitGate,
    Swap,
)
from .errors import (
    IndexOutOfRange,
    InvalidCnot,
    MultipleQregs,
    QasmSyntaxError,
    UndeclaredRegister,
    UnsupportedGate,
)

if TYPE_CHECKING:
    from .router import RoutedCircuit

__all__ = ["parse_program", "emit_program", "eval_param", "SWAP_DEFINITION"]

SWAP_DEFINITION = "gate swap a,b { cx a,b; cx b,a; cx a,b; }"

_ALIASES = {"U": "u3", "CX": "cx"}

_TOKEN_RE = re.compile(
    r"""
    (?P<nl>\n)
  | (?P<ws>[ \t\r\f\v]+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<sym>[;,\[\](){}+\-*/^])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ws", "comment"):
            continue
        elif kind == "bad":
            raise QasmSyntaxError(f"unexpected character {m.group()!r}", line, col)
        else:
            toks.append(_Tok(kind, m.group(), line, col))
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


def eval_param(text: str) -> float:
    """Evaluate a gate-parameter expression such as ``-pi/4`` or ``2*sin(0.3)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")

    return ev(ast.parse(text.replace("^", "**"), mode="eval"))


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.qreg: tuple[str, int] | None = None
        self.cregs: dict[str, int] = {}
        self.gates: list[Gate] = []

    # -- token helpers
    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, msg: str, tok: _Tok | None = None) -> QasmSyntaxError:
        tok = tok or self.peek()
        return QasmSyntaxError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text or tok.kind == "str":
            found = tok.text or "end of input"
            raise self.error(f"expected '{text}', found '{found}'", tok)
        return tok

    def expect_kind(self, kind: str, what: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found '{tok.text or 'end of input'}'", tok)
        return tok

    # -- grammar
    def parse(self) -> LogicalProgram:
        if self.peek().text == "OPENQASM":
            self.next()
            ver = self.next()
            if ver.kind not in ("real", "int") or not ver.text.startswith("2"):
                raise self.error(f"unsupported OpenQASM version '{ver.text}'", ver)
            self.expect(";")
        while self.peek().kind != "eof":
            self.statement()
        if self.qreg is None:
            raise UndeclaredRegister("program declares no quantum register")
        name, size = self.qreg
        return LogicalProgram(size, tuple(self.gates), name, tuple(self.cregs.items()))

    def statement(self):
        tok = self.peek()
        if tok.kind != "id":
            raise self.error(f"unexpected '{tok.text}'")
        word = tok.text
        if word == "include":
            self.next()
            self.expect_kind("str", "file name")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.declaration()
        elif word == "gate":
            self.gate_definition()
        elif word == "measure":
            self.measure()
        elif word == "barrier":
            self.next()
            qubits = []
            for arg in self.arglist():
                qubits.extend(self.resolve_qubits(arg))
            self.expect(";")
            self.gates.append(Barrier(tuple(dict.fromkeys(qubits))))
        elif word in ("opaque", "reset", "if"):
            raise UnsupportedGate(word, tok.line, tok.col)
        else:
            self.gate_call()

    def declaration(self):
        kw = self.next()
        name = self.expect_kind("id", "register name")
        self.expect("[")
        size = int(self.expect_kind("int", "register size").text)
        self.expect("]")
        self.expect(";")
        if size < 1:
            raise self.error("register size must be positive", name)
        if kw.text == "qreg":
            if self.qreg is not None:
                raise MultipleQregs(
                    f"second quantum register '{name.text}' (only one is supported)",
                    kw.line,
                    kw.col,
                )
            self.qreg = (name.text, size)
        else:
            self.cregs[name.text] = size

    def gate_definition(self):
        # Definitions are skipped; calls are still checked against the supported set.
        self.next()
        self.expect_kind("id", "gate name")
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                raise self.error("unterminated gate definition", tok)
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
                if depth == 0:
                    return

    def arg(self) -> tuple[_Tok, int | None]:
        name = self.expect_kind("id", "register name")
        index = None
        if self.peek().text == "[":
            self.next()
            index = int(self.expect_kind("int", "index").text)
            self.expect("]")
        return name, index

    def arglist(self) -> list[tuple[_Tok, int | None]]:
        args = [self.arg()]
        while self.peek().text == ",":
            self.next()
            args.append(self.arg())
        return args

    def resolve_qubits(self, arg: tuple[_Tok, int | None]) -> list[int]:
        name, index = arg
        if self.qreg is None or name.text != self.qreg[0]:
            raise UndeclaredRegister(f"undeclared quantum register '{name.text}'", name.line, name.col)
        size = self.qreg[1]
        if index is None:
            return list(range(size))
        if index >= size:
            raise IndexOutOfRange(f"{name.text}[{index}] out of range (size {size})", name.line, name.col)
        return [index]

    def resolve_bits(self, arg: tuple[_Tok, int | None]) -> list[tuple[str, int]]:
        name, index = arg
        if name.text not in self.cregs:
            raise UndeclaredRegister(f"undeclared classical register '{name.text}'", name.line, name.col)
        size = self.cregs[name.text]
        if index is None:
            return [(name.text, i) for i in range(size)]
        if index >= size:
            raise IndexOutOfRange(f"{name.text}[{index}] out of range (size {size})", name.line, name.col)
        return [(name.text, index)]

    def measure(self):
        kw = self.next()
        qubits = self.resolve_qubits(self.arg())
        self.expect("->")
        bits = self.resolve_bits(self.arg())
        self.expect(";")
        if len(qubits) != len(bits):
            raise QasmSyntaxError("measure operands differ in size", kw.line, kw.col)
        for q, (creg, b) in zip(qubits, bits):
            self.gates.append(Measure(q, creg, b))

    def params(self) -> list[str]:
        params: list[str] = []
        current: list[str] = []
        open_tok = self.expect("(")
        depth = 1
        while True:
            tok = self.next()
            if tok.kind == "eof":
                raise self.error("unbalanced parentheses", open_tok)
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
                if depth == 0:
                    break
            elif tok.text == "," and depth == 1:
                params.append("".join(current))
                current = []
                continue
            current.append(tok.text)
        if current or params:
            params.append("".join(current))
        for text in params:
            try:
                eval_param(text)
            except (ValueError, SyntaxError, ZeroDivisionError, OverflowError):
                raise self.error(f"bad parameter expression '{text}'", open_tok) from None
        return params

    def gate_call(self):
        tok = self.next()
        name = _ALIASES.get(tok.text, tok.text)
        params = self.params() if self.peek().text == "(" else []
        args = self.arglist()
        self.expect(";")

        if name in ONE_QUBIT_ARITY:
            arity = ONE_QUBIT_ARITY[name]
            if len(params) != arity:
                raise QasmSyntaxError(
                    f"'{tok.text}' expects {arity} parameter(s), got {len(params)}", tok.line, tok.col
                )
            if len(args) != 1:
                raise QasmSyntaxError(f"'{tok.text}' acts on one qubit", tok.line, tok.col)
            for q in self.resolve_qubits(args[0]):
                self.gates.append(OneQubitGate(name, tuple(params), q))
        elif name in ("cx", "swap"):
            if params or len(args) != 2:
                raise QasmSyntaxError(f"'{tok.text}' takes two qubits and no parameters", tok.line, tok.col)
            a, b = (self.resolve_qubits(arg) for arg in args)
            if len(a) != 1 or len(b) != 1 or a[0] == b[0]:
                raise InvalidCnot(f"'{tok.text}' operands must be two distinct qubits", tok.line, tok.col)
            self.gates.append(Cnot(a[0], b[0]) if name == "cx" else Swap(a[0], b[0]))
        else:
            raise UnsupportedGate(tok.text, tok.line, tok.col)


def parse_program(text: str) -> LogicalProgram:
    """Parse OpenQASM 2.0 source into a :class:`LogicalProgram`.

    Raises:
        QasmSyntaxError: malformed input (carries ``line`` and ``col``).
        UnsupportedGate: any gate outside the supported set, including every
            two-qubit gate other than ``cx``/``swap``.
        MultipleQregs, UndeclaredRegister, IndexOutOfRange, InvalidCnot.
    """
    return _Parser(text).parse()


def _format_gate(g: Gate, reg: str) -> list[str]:
    if isinstance(g, OneQubitGate):
        p = f"({','.join(g.params)})" if g.params else ""
        return [f"{g.name}{p} {reg}[{g.qubit}];"]
    if isinstance(g, Cnot):
        return [f"cx {reg}[{g.control}],{reg}[{g.target}];"]
    if isinstance(g, Swap):
        return [f"swap {reg}[{g.a}],{reg}[{g.b}];"]
    if isinstance(g, Measure):
        return [f"measure {reg}[{g.qubit}] -> {g.creg}[{g.bit}];"]
    if isinstance(g, Barrier):
        return ["barrier " + ",".join(f"{reg}[{q}]" for q in g.qubits) + ";"]
    raise TypeError(f"cannot emit {g!r}")


def emit_program(
    circuit: Union[RoutedCircuit, LogicalProgram], decompose_swaps: bool = False
) -> str:
    """Render a routed circuit (or a plain program) as OpenQASM 2.0 text.

    SWAPs are written as ``swap`` with an inline definition, or as three
    ``cx`` when ``decompose_swaps`` is set.
    """
    reg = circuit.register_name
    gates = list(circuit.gates)
    if decompose_swaps:
        expanded: list[Gate] = []
        for g in gates:
            if isinstance(g, Swap):
                expanded += [Cnot(g.a, g.b), Cnot(g.b, g.a), Cnot(g.a, g.b)]
            else:
                expanded.append(g)
        gates = expanded
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if any(isinstance(g, Swap) for g in gates):
        lines.append(SWAP_DEFINITION)
    lines.append(f"qreg {reg}[{circuit.num_qubits}];")
    lines += [f"creg {name}[{size}];" for name, size in circuit.cregs]
    for g in gates:
        lines += _format_gate(g, reg)
    return "\n".join(lines) + "\n"
