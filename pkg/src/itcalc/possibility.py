"""Possibility-distribution calculus over finite spaces.

A joint distribution on X x Y is a truth-valued table (equivalently a fuzzy
relation); a transition distribution assigns a fuzzy set on Y to every element
of X.  The two are in one-to-one correspondence via A(x, y) = alpha(x)(y).

Everything here is min/max arithmetic, so all identities tested against this
module hold exactly in binary64.  Transition rows are NOT required to be
normed; the normed notion belongs to the fuzzy morphism categories, and the
conversion lives there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import logic
from .errors import SpaceMismatchError, ValidationError
from .fuzzy_sets import FuzzySet, family_union
from .spaces import Space


@dataclass(frozen=True)
class JointRelation:
    """A fuzzy joint distribution / fuzzy relation on space_x x space_y."""

    space_x: Space
    space_y: Space
    table: tuple

    def __post_init__(self):
        rows = tuple(tuple(logic.check_unit(v, "joint grade") for v in row) for row in self.table)
        object.__setattr__(self, "table", rows)
        if len(rows) != self.space_x.size or any(len(r) != self.space_y.size for r in rows):
            raise ValidationError(
                f"table shape does not match {self.space_x.name!r} x {self.space_y.name!r}"
            )

    def at(self, i: int, j: int) -> float:
        return self.table[i][j]

    @property
    def sup(self) -> float:
        return max(max(row) for row in self.table)

    def to_json(self) -> dict:
        return {
            "row_space": self.space_x.name,
            "col_space": self.space_y.name,
            "table": [list(r) for r in self.table],
        }


@dataclass(frozen=True)
class TransitionDistribution:
    """A map taking each element of the source to a fuzzy set on the target."""

    source: Space
    target: Space
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.source.size:
            raise ValidationError("one row per source element required")
        for row in rows:
            if not isinstance(row, FuzzySet) or row.space != self.target:
                raise SpaceMismatchError("every row must be a fuzzy set on the target space")

    def __call__(self, i: int) -> FuzzySet:
        return self.rows[i]

    @property
    def is_normed(self) -> bool:
        return all(row.is_normed for row in self.rows)

    def complement_rows(self) -> "TransitionDistribution":
        from .fuzzy_sets import complement

        return TransitionDistribution(self.source, self.target,
                                      tuple(complement(r) for r in self.rows))

    @staticmethod
    def from_table(source: Space, target: Space, table: Sequence[Sequence[float]]
                   ) -> "TransitionDistribution":
        return TransitionDistribution(
            source, target, tuple(FuzzySet(target, tuple(row)) for row in table))

    def to_joint(self) -> JointRelation:
        return JointRelation(self.source, self.target,
                             tuple(row.membership for row in self.rows))


def transition_of(joint: JointRelation) -> TransitionDistribution:
    """The transition distribution corresponding to a joint via its row sections."""
    return TransitionDistribution.from_table(joint.space_x, joint.space_y, joint.table)


def converse(joint: JointRelation) -> JointRelation:
    return JointRelation(joint.space_y, joint.space_x, tuple(zip(*joint.table)))


def marginals(joint: JointRelation) -> tuple:
    """Marginal distributions: rowwise and columnwise sups."""
    x_marg = FuzzySet(joint.space_x, tuple(logic.exists(row) for row in joint.table))
    y_marg = FuzzySet(joint.space_y,
                      tuple(logic.exists(col) for col in zip(*joint.table)))
    return x_marg, y_marg


def _check_prior(alpha: TransitionDistribution, prior: FuzzySet):
    if prior.space != alpha.source:
        raise SpaceMismatchError("prior must live on the transition's source space")


def image(alpha: TransitionDistribution, prior: FuzzySet) -> FuzzySet:
    """Push a distribution forward: bounded-exists over the prior."""
    _check_prior(alpha, prior)
    values = tuple(
        logic.exists_in(prior.membership, [alpha.rows[i].membership[j] for i in range(alpha.source.size)])
        for j in range(alpha.target.size)
    )
    return FuzzySet(alpha.target, values)


def lower_image(alpha: TransitionDistribution, prior: FuzzySet) -> FuzzySet:
    """The dual push-forward: bounded-forall over the prior."""
    _check_prior(alpha, prior)
    values = tuple(
        logic.forall_in(prior.membership, [alpha.rows[i].membership[j] for i in range(alpha.source.size)])
        for j in range(alpha.target.size)
    )
    return FuzzySet(alpha.target, values)


def generate_joint(alpha: TransitionDistribution, prior: FuzzySet) -> JointRelation:
    """The joint distribution generated by a prior and a transition."""
    _check_prior(alpha, prior)
    table = tuple(
        tuple(min(prior.membership[i], alpha.rows[i].membership[j])
              for j in range(alpha.target.size))
        for i in range(alpha.source.size)
    )
    return JointRelation(alpha.source, alpha.target, table)


def conditional_pair(joint: JointRelation) -> tuple:
    """Conditional distributions of a joint with respect to each factor.

    The canonical variants are the row and column sections of the table; they
    reconstruct the joint exactly: A = alpha * X and A converse = beta * Y.
    """
    alpha = transition_of(joint)
    beta = transition_of(converse(joint))
    return alpha, beta


def union_of_rows(alpha: TransitionDistribution) -> FuzzySet:
    """Algebraic form of the target marginal: the crisp-indexed union of rows."""
    return family_union(list(alpha.rows))


@dataclass(frozen=True)
class IteratedQuantifierReport:
    """The six iterated-quantifier evaluations of a formula against a joint."""

    forall_joint: float
    forall_via_alpha: float
    forall_via_beta: float
    exists_joint: float
    exists_via_alpha: float
    exists_via_beta: float

    @property
    def forall_consistent(self) -> bool:
        return self.forall_joint == self.forall_via_alpha == self.forall_via_beta

    @property
    def exists_consistent(self) -> bool:
        return self.exists_joint == self.exists_via_alpha == self.exists_via_beta


def iterated_quantifiers(joint: JointRelation, phi: Sequence[Sequence[float]]
                         ) -> IteratedQuantifierReport:
    """Evaluate a formula phi(x, y) under all three quantifier orderings.

    phi is a pre-evaluated truth table aligned with the joint's table.  Within
    each triple the three values agree exactly; this is the working test of
    the conditional construction.
    """
    nx, ny = joint.space_x.size, joint.space_y.size
    phi = tuple(tuple(logic.check_unit(v, "formula value") for v in row) for row in phi)
    if len(phi) != nx or any(len(row) != ny for row in phi):
        raise SpaceMismatchError("formula table must be aligned with the joint table")

    x_marg, y_marg = marginals(joint)
    alpha, beta = conditional_pair(joint)

    flat_joint = [joint.at(i, j) for i in range(nx) for j in range(ny)]
    flat_phi = [phi[i][j] for i in range(nx) for j in range(ny)]
    fa_joint = logic.forall_in(flat_joint, flat_phi)
    ex_joint = logic.exists_in(flat_joint, flat_phi)

    fa_alpha = logic.forall_in(
        x_marg.membership,
        [logic.forall_in(alpha.rows[i].membership, phi[i]) for i in range(nx)],
    )
    ex_alpha = logic.exists_in(
        x_marg.membership,
        [logic.exists_in(alpha.rows[i].membership, phi[i]) for i in range(nx)],
    )
    phi_cols = tuple(tuple(phi[i][j] for i in range(nx)) for j in range(ny))
    fa_beta = logic.forall_in(
        y_marg.membership,
        [logic.forall_in(beta.rows[j].membership, phi_cols[j]) for j in range(ny)],
    )
    ex_beta = logic.exists_in(
        y_marg.membership,
        [logic.exists_in(beta.rows[j].membership, phi_cols[j]) for j in range(ny)],
    )

    return IteratedQuantifierReport(fa_joint, fa_alpha, fa_beta,
                                    ex_joint, ex_alpha, ex_beta)
