"""Read-only lookups over a community state.

None of these touch the state they are given; they only derive sets from
the links and memberships relations.
"""

from __future__ import annotations

from typing import FrozenSet, NamedTuple

from .core import CommunityState, EntityId, Kind
from .errors import UnknownCommunity, UnknownPerson


def _require_person(state: CommunityState, person: EntityId) -> None:
    if person not in state.people:
        raise UnknownPerson(f"unknown person: {person}", [person])


def linked_people(state: CommunityState, person: EntityId) -> FrozenSet[EntityId]:
    """People the given person links to."""
    _require_person(state, person)
    return state.links.image({person})


def common_people(
    state: CommunityState, first: EntityId, second: EntityId
) -> FrozenSet[EntityId]:
    """People linked to by both arguments."""
    _require_person(state, first)
    _require_person(state, second)
    return state.links.image({first}) & state.links.image({second})


def community_membership(state: CommunityState, person: EntityId) -> FrozenSet[EntityId]:
    """Every community the person belongs to, directly or through any
    chain of enclosing communities."""
    _require_person(state, person)
    return state.memberships.transitive_closure().image({person})


class Members(NamedTuple):
    persons: FrozenSet[EntityId]
    subcommunities: FrozenSet[EntityId]


def community_members(
    state: CommunityState, community: EntityId, transitive: bool = False
) -> Members:
    """Members of a community, split into people and sub-communities.

    With ``transitive`` set, members reachable through nested
    sub-communities are included as well.
    """
    if community not in state.communities:
        raise UnknownCommunity(f"unknown community: {community}", [community])
    rel = state.memberships
    if transitive:
        rel = rel.transitive_closure()
    members = rel.inverse().image({community})
    return Members(
        persons=frozenset(m for m in members if m.kind is Kind.PERSON),
        subcommunities=frozenset(m for m in members if m.kind is Kind.COMMUNITY),
    )
