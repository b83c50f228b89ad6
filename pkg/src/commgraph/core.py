"""Community state, derived diagnostics, validation profiles, and editing.

The state holds four components: a set of people, a set of communities, a
links relation between people, and a memberships relation from entities to
communities. Construction enforces the referential invariants (every link
endpoint is a known person, every membership source is a known entity and
every target a known community); everything stricter is a validation
profile applied on demand.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, replace
from functools import total_ordering
from typing import Callable, FrozenSet, Iterable, List, Tuple

from .errors import (
    DanglingLink,
    DanglingMembership,
    DanglingReference,
    DuplicateElement,
    KindMismatch,
    UnknownElement,
)
from .relation import FinRelation


class Kind(enum.Enum):
    PERSON = "person"
    COMMUNITY = "community"


def check_entity_name(name) -> None:
    """Reject names that are empty, non-string, or contain control characters."""
    if not isinstance(name, str) or not name:
        raise ValueError("entity name must be a non-empty string")
    if any(unicodedata.category(ch) == "Cc" for ch in name):
        raise ValueError(f"entity name contains control characters: {name!r}")


@total_ordering
@dataclass(frozen=True)
class EntityId:
    """A named entity tagged as a person or a community.

    The tag keeps the two name spaces disjoint by construction: "alice"
    the person and "alice" the community are different entities. Ordering
    is lexicographic on (kind, name) and fixes every sorted output in the
    package.
    """

    kind: Kind
    name: str

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            raise ValueError(f"kind must be a Kind, got {self.kind!r}")
        check_entity_name(self.name)

    @classmethod
    def person(cls, name: str) -> "EntityId":
        return cls(Kind.PERSON, name)

    @classmethod
    def community(cls, name: str) -> "EntityId":
        return cls(Kind.COMMUNITY, name)

    def sort_key(self) -> Tuple[str, str]:
        return (self.kind.value, self.name)

    def __lt__(self, other) -> bool:
        if not isinstance(other, EntityId):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.name}"


def _fmt(elements) -> str:
    parts = []
    for el in elements:
        if isinstance(el, tuple):
            parts.append(f"{el[0]} -> {el[1]}")
        else:
            parts.append(str(el))
    return ", ".join(parts)


@dataclass(frozen=True)
class CommunityState:
    """People, communities, person-to-person links, and memberships.

    Instances are immutable and validated on construction; the editing
    functions below return new states. Prefer :func:`build`, which also
    coerces plain iterables.
    """

    people: FrozenSet[EntityId]
    communities: FrozenSet[EntityId]
    links: FinRelation
    memberships: FinRelation

    def __post_init__(self):
        wrong = sorted(e for e in self.people if e.kind is not Kind.PERSON)
        wrong += sorted(e for e in self.communities if e.kind is not Kind.COMMUNITY)
        if wrong:
            raise KindMismatch(
                f"wrong-kind entities in people/communities: {_fmt(wrong)}", wrong
            )
        bad_links = sorted(
            pair
            for pair in self.links
            if pair[0] not in self.people or pair[1] not in self.people
        )
        if bad_links:
            raise DanglingLink(
                f"links must relate known people: {_fmt(bad_links)}", bad_links
            )
        entities = self.people | self.communities
        bad_members = sorted(
            pair
            for pair in self.memberships
            if pair[0] not in entities or pair[1] not in self.communities
        )
        if bad_members:
            raise DanglingMembership(
                "memberships must relate known entities to known communities: "
                + _fmt(bad_members),
                bad_members,
            )

    @property
    def entities(self) -> FrozenSet[EntityId]:
        return self.people | self.communities


def build(people, communities, links, memberships) -> CommunityState:
    """Construct a validated state from raw collections.

    ``links`` and ``memberships`` accept any iterable of pairs or a
    FinRelation. Raises KindMismatch, DanglingLink, or DanglingMembership
    listing every offending element of the failed category.
    """
    return CommunityState(
        people=frozenset(people),
        communities=frozenset(communities),
        links=links if isinstance(links, FinRelation) else FinRelation(links),
        memberships=(
            memberships
            if isinstance(memberships, FinRelation)
            else FinRelation(memberships)
        ),
    )


@dataclass(frozen=True)
class Diagnostics:
    """Derived trouble sets.

    nolinks: people with no outgoing link.
    nomemberships: entities that belong to no community.
    orphans: people nobody links to.
    toplevel: communities that are not members of any other community.
    """

    nolinks: FrozenSet[EntityId]
    nomemberships: FrozenSet[EntityId]
    orphans: FrozenSet[EntityId]
    toplevel: FrozenSet[EntityId]


def diagnostics(state: CommunityState) -> Diagnostics:
    """Evaluate the four diagnostic set equations."""
    return Diagnostics(
        nolinks=state.people - state.links.domain(),
        nomemberships=state.entities - state.memberships.domain(),
        orphans=state.people - state.links.range(),
        toplevel=state.memberships.range() - state.memberships.domain(),
    )


def top_level(state: CommunityState) -> FrozenSet[EntityId]:
    """Communities that are not sub-communities of any other community."""
    return state.memberships.range() - state.memberships.domain()


class ValidationProfile(enum.Enum):
    """Named predicate bundles, from weakest to strongest.

    BASIC holds by construction for any built state. ACYCLIC, ROOTED, and
    FULL form an inclusion chain, each adding predicates to the previous.
    STRICT_TOTAL is an independent branch on top of BASIC that demands
    total link and membership coverage; it neither implies nor is implied
    by the chain profiles above BASIC.
    """

    BASIC = "basic"
    STRICT_TOTAL = "strict-total"
    ACYCLIC = "acyclic"
    ROOTED = "rooted"
    FULL = "full"


@dataclass(frozen=True)
class Violation:
    """A failed predicate together with every offending element."""

    predicate: str
    offenders: Tuple


@dataclass(frozen=True)
class ValidationReport:
    profile: ValidationProfile
    violations: Tuple[Violation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def _links_domain_in_people(state):
    return [p for p in state.links if p[0] not in state.people]


def _links_range_in_people(state):
    return [p for p in state.links if p[1] not in state.people]


def _memberships_domain_known(state):
    return [p for p in state.memberships if p[0] not in state.entities]


def _memberships_range_in_communities(state):
    return [p for p in state.memberships if p[1] not in state.communities]


def _people_all_have_links(state):
    return state.people - state.links.domain()


def _people_all_have_memberships(state):
    return state.people - state.memberships.domain()


def _people_all_linked_from(state):
    return state.people - state.links.range()


def _communities_all_populated(state):
    return state.communities - state.memberships.range()


def _irreflexive_links(state):
    return [(p, p) for p in sorted(state.people) if (p, p) in state.links]


def _acyclic_memberships(state):
    closure = state.memberships.transitive_closure()
    return [(c, c) for c in sorted(state.communities) if (c, c) in closure]


def _has_top_level(state):
    # Global nonemptiness predicate: a failure has no specific offender.
    return [] if top_level(state) else [None]


def _no_isolated_people(state):
    return state.people - (state.links.domain() | state.links.range())


_BASIC = (
    ("C1.links-domain-in-people", _links_domain_in_people),
    ("C1.links-range-in-people", _links_range_in_people),
    ("C1.memberships-domain-known", _memberships_domain_known),
    ("C1.memberships-range-in-communities", _memberships_range_in_communities),
)
_STRICT_TOTAL = (
    ("C3.people-all-have-links", _people_all_have_links),
    ("C3.people-all-have-memberships", _people_all_have_memberships),
    ("C3.people-all-linked-from", _people_all_linked_from),
    ("C3.communities-all-populated", _communities_all_populated),
)
_ACYCLIC = (
    ("C4.irreflexive-links", _irreflexive_links),
    ("C4.acyclic-memberships", _acyclic_memberships),
)
_ROOTED = (("C5.has-top-level", _has_top_level),)
_FULL = (("Community.no-isolated-people", _no_isolated_people),)

_PROFILE_PREDICATES = {
    ValidationProfile.BASIC: _BASIC,
    ValidationProfile.STRICT_TOTAL: _BASIC + _STRICT_TOTAL,
    ValidationProfile.ACYCLIC: _BASIC + _ACYCLIC,
    ValidationProfile.ROOTED: _BASIC + _ACYCLIC + _ROOTED,
    ValidationProfile.FULL: _BASIC + _ACYCLIC + _ROOTED + _FULL,
}


def predicate_inventory(profile: ValidationProfile) -> Tuple[str, ...]:
    """Predicate ids evaluated for ``profile``, in report order."""
    return tuple(name for name, _ in _PROFILE_PREDICATES[profile])


def validate(state: CommunityState, profile: ValidationProfile) -> ValidationReport:
    """Evaluate the profile's predicates and those of everything it includes.

    Failures are collected, never raised; each violation lists every
    offending element (an empty tuple marks a global predicate failure
    such as a missing top-level community).
    """
    violations = []
    for name, check in _PROFILE_PREDICATES[profile]:
        offenders = check(state)
        if offenders:
            concrete = tuple(sorted(o for o in offenders if o is not None))
            violations.append(Violation(name, concrete))
    return ValidationReport(profile, tuple(violations))


def add_person(state: CommunityState, person: EntityId) -> CommunityState:
    if person.kind is not Kind.PERSON:
        raise KindMismatch(f"not a person id: {person}", [person])
    if person in state.people:
        raise DuplicateElement(f"person already present: {person}", [person])
    return replace(state, people=state.people | {person})


def add_community(state: CommunityState, community: EntityId) -> CommunityState:
    if community.kind is not Kind.COMMUNITY:
        raise KindMismatch(f"not a community id: {community}", [community])
    if community in state.communities:
        raise DuplicateElement(f"community already present: {community}", [community])
    return replace(state, communities=state.communities | {community})


def add_link(state: CommunityState, link: Tuple[EntityId, EntityId]) -> CommunityState:
    missing = sorted(e for e in link if e not in state.people)
    if missing:
        raise DanglingReference(f"link endpoints not in people: {_fmt(missing)}", missing)
    if link in state.links:
        raise DuplicateElement(f"link already present: {_fmt([link])}", [link])
    return replace(state, links=state.links | FinRelation([link]))


def add_membership(
    state: CommunityState, membership: Tuple[EntityId, EntityId]
) -> CommunityState:
    member, community = membership
    missing = []
    if member not in state.entities:
        missing.append(member)
    if community not in state.communities:
        missing.append(community)
    if missing:
        raise DanglingReference(
            f"membership endpoints unknown: {_fmt(sorted(missing))}", sorted(missing)
        )
    if membership in state.memberships:
        raise DuplicateElement(
            f"membership already present: {_fmt([membership])}", [membership]
        )
    return replace(state, memberships=state.memberships | FinRelation([membership]))


def remove_person(state: CommunityState, person: EntityId) -> CommunityState:
    """Remove a person and, cascading, every incident link and membership."""
    if person not in state.people:
        raise UnknownElement(f"unknown person: {person}", [person])
    return replace(
        state,
        people=state.people - {person},
        links=FinRelation(p for p in state.links if person not in p),
        memberships=FinRelation(p for p in state.memberships if p[0] != person),
    )


def remove_community(state: CommunityState, community: EntityId) -> CommunityState:
    """Remove a community and, cascading, every incident membership."""
    if community not in state.communities:
        raise UnknownElement(f"unknown community: {community}", [community])
    return replace(
        state,
        communities=state.communities - {community},
        memberships=FinRelation(p for p in state.memberships if community not in p),
    )


def remove_link(state: CommunityState, link: Tuple[EntityId, EntityId]) -> CommunityState:
    if link not in state.links:
        raise UnknownElement(f"unknown link: {_fmt([link])}", [link])
    return replace(state, links=FinRelation(p for p in state.links if p != link))


def remove_membership(
    state: CommunityState, membership: Tuple[EntityId, EntityId]
) -> CommunityState:
    if membership not in state.memberships:
        raise UnknownElement(f"unknown membership: {_fmt([membership])}", [membership])
    return replace(
        state, memberships=FinRelation(p for p in state.memberships if p != membership)
    )
