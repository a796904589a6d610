"""Exception hierarchy shared by every module."""


class PhiVertexError(Exception):
    pass


class StructuralError(PhiVertexError, ValueError):
    """Operands are not shaped compatibly (variables, orders, dimensions)."""


class TruncationMismatch(StructuralError):
    """Two truncated objects were compared or combined at different orders/windows."""


class NotAUnit(PhiVertexError, ArithmeticError):
    pass


class WindowOverflow(PhiVertexError):
    """A result would need exponents outside the declared window."""

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class SubstitutionError(PhiVertexError, ValueError):
    pass


class DomainError(PhiVertexError, ValueError):
    """A mathematical precondition (derivation, Novikov identity, ...) fails."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class LocalityError(PhiVertexError):
    """A pair of fields failed the locality assertion made before substitution."""


class SpecSyntaxError(PhiVertexError, ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.column = column
        self.path = path
