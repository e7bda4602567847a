"""Fuzzy sets over finite spaces: comprehension, algebra, families, containment.

A fuzzy set doubles as a fuzzy predicate and as a possibility distribution;
its membership vector is indexed by the elements of its space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import logic
from .errors import SpaceMismatchError, ValidationError
from .spaces import Space


@dataclass(frozen=True)
class FuzzySet:
    """A membership vector over a named finite space."""

    space: Space
    membership: tuple

    def __post_init__(self):
        values = tuple(logic.check_unit(v, "membership grade") for v in self.membership)
        object.__setattr__(self, "membership", values)
        if len(values) != self.space.size:
            raise ValidationError(
                f"membership vector of length {len(values)} over space "
                f"{self.space.name!r} of size {self.space.size}"
            )

    def __getitem__(self, i: int) -> float:
        return self.membership[i]

    def grade(self, label) -> float:
        return self.membership[self.space.index(label)]

    @property
    def sup(self) -> float:
        return max(self.membership)

    @property
    def is_normed(self) -> bool:
        return self.sup == 1.0

    @property
    def is_crisp(self) -> bool:
        return all(v in (0.0, 1.0) for v in self.membership)

    def to_json(self) -> dict:
        return {"space": self.space.name, "membership": list(self.membership)}

    @staticmethod
    def whole(space: Space) -> "FuzzySet":
        return FuzzySet(space, (1.0,) * space.size)

    @staticmethod
    def empty(space: Space) -> "FuzzySet":
        return FuzzySet(space, (0.0,) * space.size)

    @staticmethod
    def crisp(space: Space, labels) -> "FuzzySet":
        picked = {space.index(lab) for lab in labels}
        return FuzzySet(space, tuple(1.0 if i in picked else 0.0 for i in range(space.size)))

    @staticmethod
    def point(space: Space, label) -> "FuzzySet":
        return FuzzySet.crisp(space, [label])


def comprehend(space: Space, phi: Sequence[float]) -> FuzzySet:
    """Comprehension: the set whose membership at x equals the truth of phi(x)."""
    if len(phi) != space.size:
        raise SpaceMismatchError("predicate not defined on every element of the space")
    return FuzzySet(space, tuple(phi))


def _same_space(a: FuzzySet, b: FuzzySet):
    if a.space != b.space:
        raise SpaceMismatchError(f"spaces {a.space.name!r} and {b.space.name!r} differ")


def union(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    _same_space(a, b)
    return FuzzySet(a.space, tuple(map(max, a.membership, b.membership)))


def intersect(a: FuzzySet, b: FuzzySet) -> FuzzySet:
    _same_space(a, b)
    return FuzzySet(a.space, tuple(map(min, a.membership, b.membership)))


def complement(a: FuzzySet) -> FuzzySet:
    return FuzzySet(a.space, tuple( 1.0 - v for v in a.membership))


def set_op(kind: str, a: FuzzySet, b: Optional[FuzzySet] = None) -> FuzzySet:
    if kind == "complement":
        if b is not None:
            raise ValidationError("complement takes one operand")
        return complement(a)
    if b is None:
        raise ValidationError(f"{kind} takes two operands")
    if kind == "union":
        return union(a, b)
    if kind == "intersect":
        return intersect(a, b)
    raise ValidationError(f"unknown set operation {kind!r}")


def _check_family(family: Sequence[FuzzySet], index_bound: Optional[FuzzySet]):
    if not family:
        raise ValidationError("family must be nonempty")
    space = family[0].space
    for member in family:
        if member.space != space:
            raise SpaceMismatchError("family members live over different spaces")
    if index_bound is not None and index_bound.space.size != len(family):
        raise SpaceMismatchError(
            f"index bound over {index_bound.space.size} elements, family of size {len(family)}"
        )
    return space


def family_union(family: Sequence[FuzzySet], index_bound: Optional[FuzzySet] = None) -> FuzzySet:
    """Crisp-indexed union is a pointwise sup; a fuzzy index turns it into a
    bounded existential quantifier over the family index."""
    space = _check_family(family, index_bound)
    values = []
    for i in range(space.size):
        column = [member.membership[i] for member in family]
        if index_bound is None:
            values.append(logic.exists(column))
        else:
            values.append(logic.exists_in(index_bound.membership, column))
    return FuzzySet(space, tuple(values))


def family_intersect(family: Sequence[FuzzySet], index_bound: Optional[FuzzySet] = None) -> FuzzySet:
    """Dual of :func:`family_union` with inf / bounded universal quantifier."""
    space = _check_family(family, index_bound)
    values = []
    for i in range(space.size):
        column = [member.membership[i] for member in family]
        if index_bound is None:
            values.append(logic.forall(column))
        else:
            values.append(logic.forall_in(index_bound.membership, column))
    return FuzzySet(space, tuple(values))


def family_op(kind: str, family: Sequence[FuzzySet],
              index_bound: Optional[FuzzySet] = None) -> FuzzySet:
    if kind == "union":
        return family_union(family, index_bound)
    if kind == "intersect":
        return family_intersect(family, index_bound)
    raise ValidationError(f"unknown family operation {kind!r}")


def containment(a: FuzzySet, b: FuzzySet) -> float:
    """Graded containment: the degree to which every element of A belongs to B."""
    _same_space(a, b)
    return logic.forall_in(a.membership, b.membership)
