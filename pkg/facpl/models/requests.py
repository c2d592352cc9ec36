"""
Access requests in functional form: total maps from attribute names to a
value, a set of values, or ABSENT.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from facpl.models.values import ABSENT, AttrName, Binding, Value, check_value, set_kind


class Request(BaseModel):
    model_config = ConfigDict(frozen=True)

    bindings: Dict[AttrName, Binding] = Field(default_factory=dict)

    @field_validator("bindings")
    @classmethod
    def _well_formed(cls, bindings: Dict[AttrName, Binding]) -> Dict[AttrName, Binding]:
        for name, bound in bindings.items():
            if isinstance(bound, frozenset):
                for value in bound:
                    check_value(value)
                try:
                    set_kind(bound)
                except ValueError as exc:
                    raise ValueError(f"{name}: {exc}") from None
            else:
                check_value(bound)
        return bindings

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[AttrName, Union[Value, frozenset]]]) -> "Request":
        """
        Build a request from (name, value) entries. A name given once keeps its
        value; a name given repeatedly is bound to the set of its distinct values.
        """
        collected: Dict[AttrName, List[Union[Value, frozenset]]] = {}
        for name, value in entries:
            collected.setdefault(name, []).append(value)

        bindings: Dict[AttrName, Binding] = {}
        for name, values in collected.items():
            if len(values) == 1:
                bindings[name] = values[0]
                continue
            merged = set()
            for value in values:
                if isinstance(value, frozenset):
                    merged |= value
                else:
                    merged.add(value)
            bindings[name] = frozenset(merged)
        return cls(bindings=bindings)

    def lookup(self, name: AttrName):
        """Total lookup: unbound names yield ABSENT"""
        return self.bindings.get(name, ABSENT)

    def entries(self) -> List[Tuple[AttrName, Binding]]:
        """Bindings in canonical (name) order"""
        return sorted(self.bindings.items(), key=lambda item: (item[0].category, item[0].attribute))

    def __str__(self) -> str:
        from facpl.parsing.printer import format_request
        return format_request(self)
