"""Utilities over families of finite sets: antichains and hitting sets."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, FrozenSet, Hashable, Iterable

SetFamily = tuple  # tuple[frozenset, ...] in canonical order


def canonical_family(
    sets: Iterable[FrozenSet],
    key: Callable[[Hashable], object] | None = None,
) -> tuple[frozenset, ...]:
    """Deduplicate and order a family by (size, sorted elements)."""
    elem_key = key if key is not None else (lambda x: x)
    uniq = {frozenset(s) for s in sets}
    return tuple(sorted(uniq, key=lambda s: (len(s), tuple(sorted(s, key=elem_key)))))


def minimize_family(
    sets: Iterable[FrozenSet],
    key: Callable[[Hashable], object] | None = None,
) -> tuple[frozenset, ...]:
    """The subset-minimal members of a family, canonically ordered."""
    uniq = list({frozenset(s) for s in sets})
    mins = [s for s in uniq if not any(other < s for other in uniq)]
    return canonical_family(mins, key)


def minimal_hitting_sets(
    family: Iterable[FrozenSet],
    ground: Iterable[Hashable],
    key: Callable[[Hashable], object] | None = None,
) -> tuple[frozenset, ...]:
    """All subset-minimal H within ground that intersect every family member.

    The empty family is hit by the empty set.  A member disjoint from the
    ground set cannot be hit, so the result is empty.
    """
    groundset = frozenset(ground)
    reduced = [frozenset(f) & groundset for f in family]
    if any(not f for f in reduced):
        return ()
    reduced = list(minimize_family(reduced, key))
    if not reduced:
        return (frozenset(),)
    elem_key = key if key is not None else (lambda x: x)
    universe = sorted(frozenset().union(*reduced), key=elem_key)
    found: list[frozenset] = []
    for k in range(1, len(universe) + 1):
        for combo in combinations(universe, k):
            h = frozenset(combo)
            if any(prev <= h for prev in found):
                continue
            if all(h & f for f in reduced):
                found.append(h)
    return canonical_family(found, key)
