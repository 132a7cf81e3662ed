"""Cayley tables, Bol-Moufang identities and finite model search."""

from ._core import (
    ConfigError,
    ParseError,
    TableParseError,
    analyze,
    canonical_form,
    codes,
    decode,
    dual,
    format_table,
    holds,
    parse_table,
    reproduce_fixtures,
    search,
)

__all__ = [
    "ConfigError",
    "ParseError",
    "TableParseError",
    "analyze",
    "canonical_form",
    "codes",
    "decode",
    "dual",
    "format_table",
    "holds",
    "parse_table",
    "reproduce_fixtures",
    "search",
]
