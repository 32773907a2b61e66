"""Contract frontend: lexing, parsing, checking and temporal well-formedness."""

from c2o.frontend.ast import Contract
from c2o.frontend.checker import check_contract
from c2o.frontend.parser import parse_expr, parse_syntax
from c2o.frontend.printer import format_contract, format_expr
from c2o.frontend.wellformed import check_temporal_wellformedness, require_wellformed


def parse(source: str) -> Contract:
    """Parse and type-check contract source text."""
    return check_contract(parse_syntax(source))


__all__ = [
    "Contract",
    "check_contract",
    "check_temporal_wellformedness",
    "format_contract",
    "format_expr",
    "parse",
    "parse_expr",
    "parse_syntax",
    "require_wellformed",
]
