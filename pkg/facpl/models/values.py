"""
Literal values, attribute names and the two special evaluation outcomes
(absent attribute and evaluation error).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
from typing import FrozenSet, Union

from pydantic import BaseModel, ConfigDict, Field

# -----------------------------------------------------
# ✅ Values
# -----------------------------------------------------
Value = Union[bool, float, str, date]
ValueSet = FrozenSet[Value]
Binding = Union[bool, float, str, date, FrozenSet[Value]]

IDENTIFIER = r"[A-Za-z](?:[A-Za-z0-9_.]|-(?!>))*"
IDENTIFIER_RE = re.compile(rf"^{IDENTIFIER}$")


class ValueKind(str, Enum):
    BOOLEAN = "boolean"
    DOUBLE = "double"
    STRING = "string"
    DATE = "date"


def value_kind(value: object) -> ValueKind:
    """Kind of a literal value; raises TypeError for anything that is not a Value"""
    if type(value) is bool:
        return ValueKind.BOOLEAN
    if type(value) is float:
        return ValueKind.DOUBLE
    if isinstance(value, str):
        return ValueKind.STRING
    if isinstance(value, date) and not isinstance(value, datetime):
        return ValueKind.DATE
    raise TypeError(f"not a policy value: {value!r}")


def set_kind(values: FrozenSet[Value]) -> ValueKind:
    """Uniform kind of a non-empty value set"""
    kinds = {value_kind(v) for v in values}
    if len(kinds) != 1:
        raise ValueError("a value set must be non-empty and hold values of one kind")
    return kinds.pop()


def check_value(value: Value) -> Value:
    if type(value) is float and not math.isfinite(value):
        raise ValueError(f"non-finite double {value!r}")
    value_kind(value)
    return value


def sort_key(value: Value) -> tuple:
    """Total order over values of mixed kinds (kind first), for canonical output"""
    kind = value_kind(value)
    if kind is ValueKind.DATE:
        return (kind.value, value.isoformat())
    return (kind.value, value)


# -----------------------------------------------------
# ✅ Special outcomes
# -----------------------------------------------------
class _Absent:
    """The missing-attribute outcome (⊥)"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ABSENT"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return "ABSENT"


ABSENT = _Absent()


@dataclass(frozen=True)
class ExprError:
    """An evaluation error, carried in-band"""
    message: str


# -----------------------------------------------------
# ✅ Attribute names
# -----------------------------------------------------
class AttrName(BaseModel):
    """Structured attribute name `category/attribute`"""
    model_config = ConfigDict(frozen=True, regex_engine="python-re")

    category: str = Field(pattern=IDENTIFIER_RE.pattern)
    attribute: str = Field(pattern=IDENTIFIER_RE.pattern)

    @classmethod
    def parse(cls, text: str) -> "AttrName":
        category, sep, attribute = text.partition("/")
        if not sep:
            raise ValueError(f"attribute name {text!r} is not of the form category/attribute")
        return cls(category=category, attribute=attribute)

    def __str__(self) -> str:
        return f"{self.category}/{self.attribute}"

    def __lt__(self, other: "AttrName") -> bool:
        return (self.category, self.attribute) < (other.category, other.attribute)
