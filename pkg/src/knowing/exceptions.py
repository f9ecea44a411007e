from difflib import get_close_matches
from typing import Iterable


def _suggest(name: str, valid_values: Iterable[str] | None) -> str:
    if valid_values and (close_matches := get_close_matches(name, list(valid_values))):
        close_matches_in_quotes = [f"'{cm}'" for cm in close_matches]
        return f"; did you mean {', '.join(close_matches_in_quotes)}?"

    return ""


#######################################################################################
# FORMULA EXCEPTIONS


class ParseError(ValueError):
    def __init__(self, text: str, line: int, column: int, expected: Iterable[str] = ()):
        message = f"Cannot parse '{text}' at line {line}, column {column}"

        if expected := sorted(expected):
            message += f"; expected one of {', '.join(expected)}"

        super().__init__(message)

        self.line = line
        self.column = column


class UnknownSymbolError(ValueError):
    def __init__(self, symbol: str, line: int, column: int):
        message = f"Unknown symbol '{symbol}' at line {line}, column {column}"

        if symbol == "_":
            message += "; names starting with '_' are reserved"

        super().__init__(message)

        self.line = line
        self.column = column


class CaptureError(ValueError):
    def __init__(self, variable: str, binder: str, term: str):
        message = (
            f"'{term}' is not substitutable for '{variable}'"
            f"; binder '{binder}' would capture it"
        )

        super().__init__(message)

        self.binder = binder


class NotASentenceError(ValueError):
    def __init__(self, formula: str, free: Iterable[str]):
        message = (
            f"'{formula}' is not a sentence"
            f"; free variables {', '.join(sorted(free))}"
        )

        super().__init__(message)


class FreeVariableError(ValueError):
    def __init__(self, formula: str, free: Iterable[str], allowed: Iterable[str]):
        message = (
            f"'{formula}' has free variables {', '.join(sorted(free))}"
            f"; only {', '.join(sorted(allowed)) or 'none'} allowed"
        )

        super().__init__(message)


class NotPurelyModalError(TypeError):
    def __init__(self, formula: str):
        super().__init__(f"'{formula}' is not of the form K(...)")


#######################################################################################
# CODING EXCEPTIONS


class NotACodeError(ValueError):
    def __init__(self, code: int, reason: str):
        shown = str(code) if code < 10**12 else f"{str(code)[:12]}..."
        super().__init__(f"{shown} is not a code; {reason}")


class NotABlueprintError(ValueError):
    def __init__(self, index: int, reason: str):
        shown = str(index) if index < 10**12 else f"{str(index)[:12]}..."
        super().__init__(f"{shown} is not a blueprint index; {reason}")


class UnknownPrimitiveError(ValueError):
    def __init__(self, name: str, valid_values: Iterable[str] | None = None):
        super().__init__(f"'{name}'" + _suggest(name, valid_values))


#######################################################################################
# SCHEMA EXCEPTIONS


class UnknownSchemaError(ValueError):
    def __init__(self, schema: str, valid_values: Iterable[str] | None = None):
        super().__init__(f"'{schema}'" + _suggest(schema, valid_values))


#######################################################################################
# PROOF AND CERTIFICATE EXCEPTIONS


class ProofFormatError(ValueError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"Proof line {line_number}: {reason}")


class CertificateFormatError(ValueError):
    def __init__(self, reason: str):
        super().__init__(f"Malformed certificate: {reason}")


#######################################################################################
# CONFIG EXCEPTIONS


class ConfigError(ValueError):
    def __init__(
        self, name: str, value: str, valid_values: Iterable[str] | None = None
    ):
        message = f"'{value}' for setting '{name}'"

        if valid_values:
            message += _suggest(value, valid_values) or (
                f"; expected one of {', '.join(sorted(valid_values))}"
            )

        super().__init__(message)
