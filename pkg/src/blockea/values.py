"""Runtime values and their canonical text rendering.

Numbers are double precision throughout; integer-required places convert
explicitly. The text rendering here is the single formatting rule shared
by print output, XML number fields, CSV export, and the emitted
standalone bundles, so all of them agree byte-for-byte.
"""

from __future__ import annotations

import math
from typing import Union

from .blocks import ValueType
from .ea import Individual, Population

RuntimeValue = Union[float, bool, str, Individual, Population, tuple]


def format_number(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(float(v))


def runtime_type_of(value: RuntimeValue) -> ValueType:
    # bool before float: bool is a float-compatible int in Python
    if isinstance(value, bool):
        return ValueType.BOOLEAN
    if isinstance(value, (int, float)):
        return ValueType.NUMBER
    if isinstance(value, str):
        return ValueType.TEXT
    if isinstance(value, Individual):
        return ValueType.INDIVIDUAL
    if isinstance(value, Population):
        return ValueType.POPULATION
    if isinstance(value, tuple):
        return ValueType.LIST_OF_NUMBER
    raise TypeError(f"not a runtime value: {value!r}")


def value_to_text(value: RuntimeValue) -> str:
    vt = runtime_type_of(value)
    if vt is ValueType.NUMBER:
        return format_number(float(value))
    if vt is ValueType.BOOLEAN:
        return "true" if value else "false"
    if vt is ValueType.TEXT:
        return str(value)
    if vt is ValueType.INDIVIDUAL:
        return value.text
    if vt is ValueType.POPULATION:
        return "[" + ", ".join(m.text for m in value.members) + "]"
    return "[" + ", ".join(format_number(x) for x in value) + "]"
