"""Immutable finite binary relations and their closure algebra."""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Tuple

Pair = Tuple[Hashable, Hashable]


class FinRelation:
    """A finite binary relation with set semantics.

    Pairs are deduplicated, and ``pairs()`` / iteration always yield them
    in sorted order, so equal relations produce identical output streams.
    Elements must be hashable and mutually orderable.
    """

    __slots__ = ("_pairs",)

    def __init__(self, pairs: Iterable[Pair] = ()):
        pairs = frozenset(pairs)
        for pair in pairs:
            if not (isinstance(pair, tuple) and len(pair) == 2):
                raise ValueError(f"relation elements must be 2-tuples, got {pair!r}")
        self._pairs = pairs

    def pairs(self) -> Tuple[Pair, ...]:
        return tuple(sorted(self._pairs))

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self._pairs))

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, pair) -> bool:
        return pair in self._pairs

    def __bool__(self) -> bool:
        return bool(self._pairs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FinRelation):
            return self._pairs == other._pairs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"FinRelation({sorted(self._pairs)!r})"

    def domain(self) -> frozenset:
        return frozenset(x for x, _ in self._pairs)

    def range(self) -> frozenset:
        return frozenset(y for _, y in self._pairs)

    def image(self, src: Iterable) -> frozenset:
        """Targets related to any element of ``src``."""
        src = set(src)
        return frozenset(y for x, y in self._pairs if x in src)

    def inverse(self) -> "FinRelation":
        return FinRelation((y, x) for x, y in self._pairs)

    def union(self, other: "FinRelation") -> "FinRelation":
        return FinRelation(self._pairs | other._pairs)

    __or__ = union

    def intersection(self, other: "FinRelation") -> "FinRelation":
        return FinRelation(self._pairs & other._pairs)

    __and__ = intersection

    def transitive_closure(self) -> "FinRelation":
        """Smallest transitive relation containing this one.

        Contains (x, y) exactly when a path of length >= 1 leads from x
        to y, so a reflexive pair in the result witnesses a cycle through
        that element. DFS from each source: O(|V| * |E|).
        """
        successors: dict = {}
        for x, y in self._pairs:
            successors.setdefault(x, set()).add(y)
        closed = set()
        for start, direct in successors.items():
            seen: set = set()
            stack = list(direct)
            while stack:
                node = stack.pop()
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(successors.get(node, ()))
            closed.update((start, node) for node in seen)
        return FinRelation(closed)

    def symmetric_closure(self) -> "FinRelation":
        return FinRelation(self._pairs | {(y, x) for x, y in self._pairs})


def identity(items: Iterable) -> FinRelation:
    """The identity relation over ``items``."""
    return FinRelation((x, x) for x in items)
