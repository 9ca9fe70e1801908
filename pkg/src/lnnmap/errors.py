"""Exception types raised across the package."""

from __future__ import annotations


class LnnmapError(Exception):
    """Base class for every error raised by lnnmap."""


class QasmError(LnnmapError, ValueError):
    """A problem with OpenQASM input, located at ``line``/``col`` when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


class QasmSyntaxError(QasmError):
    pass


class UnsupportedGate(QasmError):
    def __init__(self, name: str, line: int | None = None, col: int | None = None):
        self.name = name
        super().__init__(f"unsupported gate or statement '{name}'", line, col)


class MultipleQregs(QasmError):
    pass


class UndeclaredRegister(QasmError):
    pass


class IndexOutOfRange(QasmError):
    pass


class InvalidCnot(QasmError):
    """Two-qubit gate whose operands coincide."""


class ParamOutOfRange(LnnmapError, ValueError):
    pass


class EmptyCircuit(LnnmapError):
    pass


class NotInFrontLayer(LnnmapError):
    pass


class OverlappingPairs(LnnmapError, ValueError):
    pass


class ConvergenceFailure(LnnmapError):
    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"eigensolver did not converge after {iterations} iterations")


class AllTokensPlaced(LnnmapError):
    pass


class StateSpaceTooLarge(LnnmapError):
    pass


class TooManyQubits(LnnmapError):
    pass
