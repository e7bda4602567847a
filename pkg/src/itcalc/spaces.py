"""Finite carrier spaces, canonical product spaces, and deterministic maps.

Product spaces fix one canonical element layout (row-major, left factor
varying slowest) so that every category agrees on projection indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SpaceMismatchError, ValidationError


@dataclass(frozen=True)
class Space:
    """A named finite space with an ordered tuple of distinct element labels."""

    name: str
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValidationError(f"space {self.name!r} must have at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError(f"space {self.name!r} has duplicate element labels")

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, label) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise SpaceMismatchError(f"{label!r} is not an element of space {self.name!r}") from None

    def __repr__(self):
        return f"Space({self.name!r}, size={self.size})"


@dataclass(frozen=True, repr=False)
class ProductSpace(Space):
    """Product of two spaces; elements are (left, right) label pairs.

    Element k corresponds to the pair (i, j) with k = i * right.size + j.
    """

    left: Space = field(default=None)
    right: Space = field(default=None)

    def pair_index(self, i: int, j: int) -> int:
        return i * self.right.size + j

    def unpair_index(self, k: int) -> tuple:
        return divmod(k, self.right.size)

    def __repr__(self):
        return f"ProductSpace({self.name!r}, {self.left.name!r} x {self.right.name!r})"


def product_space(left: Space, right: Space) -> ProductSpace:
    """Build the canonical product of two spaces."""
    name = f"({left.name}*{right.name})"
    elements = tuple((a, b) for a in left.elements for b in right.elements)
    return ProductSpace(name=name, elements=elements, left=left, right=right)


def split_product(space: Space) -> tuple:
    """Return the two factors of a product space, or raise."""
    if not isinstance(space, ProductSpace):
        raise SpaceMismatchError(f"space {space.name!r} is not a registered product space")
    return space.left, space.right


TERMINAL = Space("Z", ("*",))


@dataclass(frozen=True)
class DetMap:
    """A total map between finite spaces, stored as a target-index table."""

    source: Space
    target: Space
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(t) for t in self.table))
        if len(self.table) != self.source.size:
            raise ValidationError(
                f"map table has {len(self.table)} entries, source {self.source.name!r} "
                f"has {self.source.size} elements"
            )
        for t in self.table:
            if not 0 <= t < self.target.size:
                raise ValidationError(f"map table entry {t} outside target {self.target.name!r}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def then(self, other: "DetMap") -> "DetMap":
        """Composition other∘self."""
        if other.source != self.target:
            raise SpaceMismatchError("maps are not composable")
        return DetMap(self.source, other.target, tuple(other.table[t] for t in self.table))

    @staticmethod
    def identity(space: Space) -> "DetMap":
        return DetMap(space, space, tuple(range(space.size)))

    @staticmethod
    def constant(source: Space, target: Space, value_index: int) -> "DetMap":
        return DetMap(source, target, (value_index,) * source.size)


def proj_first(ab: ProductSpace) -> DetMap:
    return DetMap(ab, ab.left, tuple(k // ab.right.size for k in range(ab.size)))


def proj_second(ab: ProductSpace) -> DetMap:
    return DetMap(ab, ab.right, tuple(k % ab.right.size for k in range(ab.size)))


def pair_map(f: DetMap, g: DetMap) -> DetMap:
    """The pairing x ↦ (f(x), g(x)) into the canonical product space."""
    if f.source != g.source:
        raise SpaceMismatchError("paired maps must share a source")
    ab = product_space(f.target, g.target)
    return DetMap(f.source, ab, tuple(ab.pair_index(f.table[i], g.table[i]) for i in range(f.source.size)))
