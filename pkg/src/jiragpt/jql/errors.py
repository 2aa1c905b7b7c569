class JqlError(Exception):
    """Base class for JQL parsing and evaluation errors."""


class ParseError(JqlError):
    """Malformed JQL text.

    Carries the byte offset of the offending token and the set of token
    descriptions that would have been accepted at that point.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.expected = expected


class UnknownField(ParseError):
    """Identifier used as a field name is not in the field vocabulary."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown field {name!r}", offset, frozenset({"field name"}))
        self.field_name = name


class UnknownFunction(ParseError):
    """Call syntax with a function name outside the supported date functions."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function {name!r}", offset, frozenset({"date function"}))
        self.function_name = name


class TypeMismatch(JqlError):
    """Operator applied to a field whose value domain does not support it."""

    def __init__(self, field: str, op: str, domain: str):
        super().__init__(f"operator {op} not valid for {domain} field {field!r}")
        self.field = field
        self.op = op
        self.domain = domain
