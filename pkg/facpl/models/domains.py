"""
Finite attribute domains (the enumerable request space) and request-set
specifications over them.
"""
from __future__ import annotations

from enum import Enum
from functools import reduce
from itertools import combinations
from operator import mul
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from facpl.models.policies import Expr
from facpl.models.values import ABSENT, AttrName, Value, ValueKind, check_value, value_kind


class AttrKind(str, Enum):
    BOOLEAN = "boolean"
    DOUBLE = "double"
    STRING = "string"
    DATE = "date"
    SET_OF_STRING = "set-of-string"

    @property
    def element_kind(self) -> ValueKind:
        if self is AttrKind.SET_OF_STRING:
            return ValueKind.STRING
        return ValueKind(self.value)

    @property
    def is_set(self) -> bool:
        return self is AttrKind.SET_OF_STRING

    def __str__(self) -> str:
        return self.value


class AttributeDomain(BaseModel):
    """Declared kind and finite universe of one attribute"""
    model_config = ConfigDict(frozen=True)

    name: AttrName
    kind: AttrKind
    universe: Tuple[Value, ...] = Field(min_length=1)
    allow_absent: bool = True

    @model_validator(mode="after")
    def _universe(self) -> "AttributeDomain":
        for value in self.universe:
            check_value(value)
            if value_kind(value) is not self.kind.element_kind:
                raise ValueError(f"{self.name}: value {value!r} is not of kind {self.kind.element_kind.value}")
        if len(set(self.universe)) != len(self.universe):
            raise ValueError(f"{self.name}: universe has duplicate values")
        return self

    def options(self) -> list:
        """Every binding this attribute can take, in enumeration order (ABSENT last)"""
        if self.kind.is_set:
            found: list = []
            for size in range(1, len(self.universe) + 1):
                found.extend(frozenset(subset) for subset in combinations(self.universe, size))
        else:
            found = list(self.universe)
        if self.allow_absent:
            found.append(ABSENT)
        return found

    @property
    def option_count(self) -> int:
        count = 2 ** len(self.universe) - 1 if self.kind.is_set else len(self.universe)
        return count + (1 if self.allow_absent else 0)


class DomainSpec(BaseModel):
    """Finite universe per attribute; realises the set of all requests"""
    model_config = ConfigDict(frozen=True)

    attributes: Tuple[AttributeDomain, ...] = ()

    @model_validator(mode="after")
    def _unique(self) -> "DomainSpec":
        seen = set()
        for attribute in self.attributes:
            if attribute.name in seen:
                raise ValueError(f"attribute {attribute.name} declared twice")
            seen.add(attribute.name)
        return self

    @property
    def by_name(self) -> Dict[AttrName, AttributeDomain]:
        return {attribute.name: attribute for attribute in self.attributes}

    def get(self, name: AttrName) -> Optional[AttributeDomain]:
        for attribute in self.attributes:
            if attribute.name == name:
                return attribute
        return None

    def names(self) -> List[AttrName]:
        return [attribute.name for attribute in self.attributes]

    def request_count(self) -> int:
        """Analytic size of the request space"""
        return reduce(mul, (attribute.option_count for attribute in self.attributes), 1)


class RequestSetSpec(BaseModel):
    """A set of requests: the domain members whose constraint evaluates to true"""
    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    constraint: Expr
    label: str = ""
