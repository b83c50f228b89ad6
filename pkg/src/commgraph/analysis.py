"""Structural analysis of the person link graph.

Both operations here treat links as undirected: connectivity and cluster
structure do not care who initiated a connection.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping

from .core import CommunityState, EntityId
from .errors import EmptyCommunity


class _UnionFind:
    def __init__(self, items):
        self._parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra


def _dense_labeling(groups: List[List[EntityId]]) -> Dict[EntityId, int]:
    """Number groups 0..k-1 by their smallest member; map members to indices."""
    assignment: Dict[EntityId, int] = {}
    for index, members in enumerate(sorted(groups, key=min)):
        for member in members:
            assignment[member] = index
    return assignment


@dataclass(frozen=True)
class ComponentLabeling:
    """Dense component index per person.

    Components are numbered by their smallest member, so equal states
    always produce the identical labeling.
    """

    assignment: Mapping[EntityId, int]
    component_count: int


def connected_components(state: CommunityState) -> ComponentLabeling:
    """Components of the undirected link graph; isolated people form
    singleton components."""
    uf = _UnionFind(state.people)
    for a, b in state.links:
        uf.union(a, b)
    groups: Dict[EntityId, List[EntityId]] = {}
    for person in state.people:
        groups.setdefault(uf.find(person), []).append(person)
    assignment = _dense_labeling(list(groups.values()))
    return ComponentLabeling(assignment=assignment, component_count=len(groups))


def is_cop_connected(state: CommunityState) -> bool:
    """Whether every person can reach every other through links,
    ignoring direction."""
    if not state.people:
        raise EmptyCommunity("no people in the community")
    return connected_components(state).component_count == 1


@dataclass(frozen=True)
class ClusterLabeling:
    """Dense cluster index per person, plus the parameters that produced it."""

    assignment: Mapping[EntityId, int]
    cluster_count: int
    seed: int
    max_iterations: int


def detect_clusters(
    state: CommunityState, seed: int = 0, max_iterations: int = 100
) -> ClusterLabeling:
    """Group people by synchronous neighbor-majority label spreading.

    Every person starts labeled by itself. Each round, all people
    simultaneously adopt the most frequent label among their neighbors in
    the undirected link graph, ties going to the smallest label; people
    without neighbors keep their own. The rounds stop at a fixpoint or
    after ``max_iterations``. The procedure is fully deterministic;
    ``seed`` is recorded for interface stability only.
    """
    neighbors: Dict[EntityId, set] = {p: set() for p in state.people}
    for a, b in state.links:
        neighbors[a].add(b)
        neighbors[b].add(a)

    labels = {p: p for p in state.people}
    for _ in range(max_iterations):
        updated = {}
        for person, adjacent in neighbors.items():
            if not adjacent:
                updated[person] = labels[person]
                continue
            counts = Counter(labels[n] for n in adjacent)
            top = max(counts.values())
            updated[person] = min(l for l, c in counts.items() if c == top)
        if updated == labels:
            break
        labels = updated

    groups: Dict[EntityId, List[EntityId]] = {}
    for person, label in labels.items():
        groups.setdefault(label, []).append(person)
    assignment = _dense_labeling(list(groups.values()))
    return ClusterLabeling(
        assignment=assignment,
        cluster_count=len(groups),
        seed=seed,
        max_iterations=max_iterations,
    )
