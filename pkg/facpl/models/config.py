"""
Engine configuration: the partial order over security levels and the role
hierarchy behind the `leq` and `sub-role` extension functions.
"""
from __future__ import annotations

from typing import FrozenSet, Iterable, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

Pair = Tuple[str, str]


def reflexive_transitive_closure(nodes: Iterable[str], pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    """Smallest reflexive, transitive relation over `nodes` containing `pairs`"""
    carrier = set(nodes)
    successors = {node: set() for node in carrier}
    for low, high in pairs:
        carrier.update((low, high))
        successors.setdefault(low, set()).add(high)
        successors.setdefault(high, set())

    closure: Set[Pair] = set()
    for start in carrier:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in successors.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closure.update((start, reached) for reached in seen)
    return frozenset(closure)


class EngineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    levels: FrozenSet[str] = frozenset()
    # (a, b) means a <= b; reflexive and transitive over `levels`
    level_order: FrozenSet[Pair] = frozenset()
    roles: FrozenSet[str] = frozenset()
    # child -> parent edges; `role_reach` is their reflexive-transitive closure
    role_edges: FrozenSet[Pair] = frozenset()
    role_reach: FrozenSet[Pair] = frozenset()

    @model_validator(mode="after")
    def _well_formed(self) -> "EngineConfig":
        for low, high in self.level_order:
            if low not in self.levels or high not in self.levels:
                raise ValueError(f"level pair ({low}, {high}) uses an undeclared level")
            if low != high and (high, low) in self.level_order:
                raise ValueError(f"level order is not antisymmetric: {low} <= {high} <= {low}")
        for level in self.levels:
            if (level, level) not in self.level_order:
                raise ValueError(f"level order is not reflexive at {level}")
        for low, mid in self.level_order:
            for other, high in self.level_order:
                if mid == other and (low, high) not in self.level_order:
                    raise ValueError(f"level order is not transitive: {low} <= {mid} <= {high}")

        for child, parent in self.role_edges:
            if child not in self.roles or parent not in self.roles:
                raise ValueError(f"role edge {child} -> {parent} uses an undeclared role")
        expected = reflexive_transitive_closure(self.roles, self.role_edges)
        if expected != self.role_reach:
            raise ValueError("role reachability does not match the role edges")
        for child, parent in self.role_edges:
            if child == parent or (parent, child) in self.role_reach:
                raise ValueError(f"role cycle through {child} -> {parent}")
        return self

    @classmethod
    def from_relations(
        cls,
        level_pairs: Iterable[Pair] = (),
        role_edges: Iterable[Pair] = (),
        levels: Iterable[str] = (),
        roles: Iterable[str] = (),
    ) -> "EngineConfig":
        """Build a configuration from base pairs, computing both closures"""
        level_pairs = list(level_pairs)
        role_edges = list(role_edges)
        level_set = set(levels) | {name for pair in level_pairs for name in pair}
        role_set = set(roles) | {name for edge in role_edges for name in edge}
        return cls(
            levels=frozenset(level_set),
            level_order=reflexive_transitive_closure(level_set, level_pairs),
            roles=frozenset(role_set),
            role_edges=frozenset(role_edges),
            role_reach=reflexive_transitive_closure(role_set, role_edges),
        )

    def leq(self, low: str, high: str) -> Optional[bool]:
        """low <= high in the level order; None when a level is unknown"""
        if low not in self.levels or high not in self.levels:
            return None
        return (low, high) in self.level_order

    def is_sub_role(self, role: str, ancestor: str) -> Optional[bool]:
        """role reaches (or is) ancestor; None when a role is unknown"""
        if role not in self.roles or ancestor not in self.roles:
            return None
        return (role, ancestor) in self.role_reach


EMPTY_CONFIG = EngineConfig()
