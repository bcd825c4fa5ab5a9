"""Exception types shared by the whole package.

Every error that carries a witness (a port, an orbit, a cell) exposes it as
an attribute so callers and tests can assert on the exact failure point.
"""


class PermNetError(Exception):
    """Base class for all library errors."""


class IllTyped(PermNetError):
    """An operation was applied to arguments violating its typing discipline."""

    def __init__(self, message, port=None):
        super().__init__(message if port is None else f"{message} (port {port})")
        self.port = port


class DisjointnessViolation(PermNetError):
    """Two objects that must not share ports do share one."""

    def __init__(self, port):
        super().__init__(f"port {port} occurs on both sides")
        self.port = port


class SizeMismatch(PermNetError):
    """Two interfaces expected to have equal size do not."""


class NotTotal(PermNetError):
    """A renaming is missing a port of the carrier."""

    def __init__(self, port):
        super().__init__(f"renaming undefined on port {port}")
        self.port = port


class ValidationError(PermNetError):
    """Base for net well-formedness failures."""


class UnknownSymbol(ValidationError):
    def __init__(self, symbol):
        super().__init__(f"symbol {symbol!r} is not declared")
        self.symbol = symbol


class ArityMismatch(ValidationError):
    def __init__(self, cell):
        super().__init__(
            f"cell {cell} has {len(cell.ports) - 1} auxiliary ports, "
            "which does not match its symbol's arity"
        )
        self.cell = cell


class PortReuse(ValidationError):
    def __init__(self, port):
        super().__init__(f"port {port} occurs more than once")
        self.port = port


class CellPortIsLoop(ValidationError):
    def __init__(self, port):
        super().__init__(f"cell port {port} is not a proper port of the wiring")
        self.port = port


class CutIsFixedPoint(ValidationError):
    def __init__(self, port):
        super().__init__(f"cut permutation has fixed point {port}")
        self.port = port


class CutNotBetweenAxioms(ValidationError):
    def __init__(self, orbit):
        super().__init__(f"cut {set(orbit)} does not link two distinct axiom wires")
        self.orbit = orbit


class MorphismError(PermNetError):
    """Base for the four morphism condition failures."""

    def __init__(self, message, witness):
        super().__init__(f"{message} (witness {witness})")
        self.witness = witness


class WiringNotEquivariant(MorphismError):
    def __init__(self, port):
        super().__init__("map does not commute with the wiring", port)


class CellPortNotPreserved(MorphismError):
    def __init__(self, port):
        super().__init__("cell port mapped to a non-cell port", port)


class CellNotEquivariant(MorphismError):
    def __init__(self, port):
        super().__init__("map does not commute with the cell permutation", port)


class PrincipalNotPreserved(MorphismError):
    def __init__(self, port):
        super().__init__("principal port not mapped to a principal port", port)


class LabelNotPreserved(MorphismError):
    def __init__(self, orbit):
        super().__init__("cell symbol not preserved", orbit)


class Mismatch(PermNetError):
    """A cutting witness does not reassemble into the expected net."""

    def __init__(self, detail):
        super().__init__(f"reassembled net differs: {detail}")
        self.detail = detail


class SymbolMismatch(PermNetError):
    """An active pair was applied to a rule for different symbols."""


class StaleRedex(PermNetError):
    """An active pair is no longer present in the net."""


class DuplicateName(PermNetError):
    def __init__(self, kind, name):
        super().__init__(f"duplicate {kind} {name!r}")
        self.kind = kind
        self.name = name


class NetSyntaxError(PermNetError):
    """Textual format error, with 1-based position information."""

    def __init__(self, message, line, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
