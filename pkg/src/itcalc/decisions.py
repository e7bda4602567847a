"""Fuzzy games with prior information, Bayes decisions and strategies, and the
categorical Bayesian principle with Opt sets.

The guaranteed goodness of a decision d under a prior X is the bounded-forall
G_X(d) = inf_x max(1 - X(x), G(x, d)); a strategy r maps observations to
decisions and its goodness relativizes through the experiment.  The Bayes
construction picks, for every observation y, an optimal decision for the
posterior beta(y), where beta is a conditional of the generated joint with
respect to the observation space.  The theorem-formula value and the direct
definition are computed independently and must agree exactly; a mismatch is an
internal error, never a report entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernel, logic, possibility
from .errors import (BudgetExceededError, SpaceMismatchError, ValidationError,
                     VerificationError)
from .finite_categories import FMT, FPT, MULTI, SET, STOCH
from .fuzzy_sets import FuzzySet, containment
from .kernel import Accuracy, Morphism
from .possibility import JointRelation, TransitionDistribution
from .spaces import DetMap, Space


@dataclass(frozen=True)
class FuzzyGame:
    """Spaces of interest and decisions with a graded goodness relation."""

    x_space: Space
    d_space: Space
    goodness: JointRelation

    def __post_init__(self):
        if self.goodness.space_x != self.x_space or self.goodness.space_y != self.d_space:
            raise SpaceMismatchError("goodness relation must live on X x D")

    def goodness_column(self, d: int) -> list:
        return [self.goodness.at(x, d) for x in range(self.x_space.size)]


@dataclass(frozen=True)
class PriorGame:
    game: FuzzyGame
    prior: FuzzySet

    def __post_init__(self):
        if self.prior.space != self.game.x_space:
            raise SpaceMismatchError("prior must live on the game's object space")


def goodness_of_decision(pg: PriorGame, d: int) -> float:
    """The degree to which d is good for every object in the prior."""
    if not 0 <= d < pg.game.d_space.size:
        raise ValidationError(f"unknown decision index {d}")
    return logic.forall_in(pg.prior.membership, pg.game.goodness_column(d))


def goodness_profile(pg: PriorGame) -> FuzzySet:
    """G_X as a fuzzy set over the decision space."""
    values = tuple(goodness_of_decision(pg, d) for d in range(pg.game.d_space.size))
    return FuzzySet(pg.game.d_space, values)


def bayes_decision(pg: PriorGame) -> tuple:
    """The first decision attaining the maximum of G_X, with its value."""
    profile = goodness_profile(pg)
    best = max(profile.membership)
    return profile.membership.index(best), best


def _check_experiment(pg: PriorGame, experiment: TransitionDistribution):
    if experiment.source != pg.game.x_space:
        raise SpaceMismatchError("experiment must observe the game's object space")


def _check_strategy(experiment: TransitionDistribution, strategy: DetMap, d_space: Space):
    if strategy.source != experiment.target or strategy.target != d_space:
        raise SpaceMismatchError("strategy must map observations to decisions")


def strategy_goodness(pg: PriorGame, experiment: TransitionDistribution,
                      strategy: DetMap, x: int) -> float:
    """H(x, r): every observation the experiment allows leads to a good decision."""
    _check_experiment(pg, experiment)
    _check_strategy(experiment, strategy, pg.game.d_space)
    pred = [pg.game.goodness.at(x, strategy.table[y]) for y in range(experiment.target.size)]
    return logic.forall_in(experiment.rows[x].membership, pred)


def strategy_goodness_via_containment(pg: PriorGame, experiment: TransitionDistribution,
                                      strategy: DetMap, x: int) -> float:
    """Independent route: the image of alpha(x) under r is contained in gamma(x)."""
    _check_experiment(pg, experiment)
    _check_strategy(experiment, strategy, pg.game.d_space)
    crisp_rows = tuple(FuzzySet.point(pg.game.d_space, pg.game.d_space.elements[t])
                       for t in strategy.table)
    lifted = TransitionDistribution(experiment.target, pg.game.d_space, crisp_rows)
    pushed = possibility.image(lifted, experiment.rows[x])
    gamma_x = FuzzySet(pg.game.d_space, tuple(pg.game.goodness.table[x]))
    return containment(pushed, gamma_x)


def bayes_goodness(pg: PriorGame, experiment: TransitionDistribution,
                   strategy: DetMap) -> float:
    """H_X(r): the strategy is good for every object in the prior."""
    values = [strategy_goodness(pg, experiment, strategy, x)
              for x in range(pg.game.x_space.size)]
    return logic.forall_in(pg.prior.membership, values)


@dataclass(frozen=True)
class BayesStrategyResult:
    strategy: DetMap
    value: float
    theorem_value: float
    direct_value: float
    posterior: TransitionDistribution
    observation_marginal: FuzzySet
    decisions: tuple


def _posterior_rows(joint: JointRelation, variant: str) -> TransitionDistribution:
    """Conditional with respect to the observation space (columns of the joint)."""
    beta = possibility.conditional_pair(joint)[1]
    if variant == "canonical":
        return beta
    if variant == "normed":
        columns = tuple(zip(*joint.table))
        rows = []
        for y, col in enumerate(columns):
            sup = max(col)
            rows.append(FuzzySet(joint.space_x,
                                 tuple(1.0 if v == sup else v for v in col)))
        return TransitionDistribution(joint.space_y, joint.space_x, tuple(rows))
    raise ValidationError(f"unknown conditional variant {variant!r}")


def bayes_strategy(pg: PriorGame, experiment: TransitionDistribution,
                   variant: str = "canonical") -> BayesStrategyResult:
    """Construct the optimal strategy pointwise from posterior distributions.

    The goodness of the result is computed twice: by the theorem formula
    (bounded-forall of posterior Bayes values over the observation marginal)
    and directly from the definition.  The two must agree exactly.
    """
    _check_experiment(pg, experiment)
    joint = possibility.generate_joint(experiment, pg.prior)
    y_marginal = possibility.marginals(joint)[1]
    beta = _posterior_rows(joint, variant)

    table, per_y_values = [], []
    for y in range(experiment.target.size):
        posterior_game = PriorGame(pg.game, beta.rows[y])
        d_best, value = bayes_decision(posterior_game)
        table.append(d_best)
        per_y_values.append(value)

    strategy = DetMap(experiment.target, pg.game.d_space, tuple(table))
    theorem_value = logic.forall_in(y_marginal.membership, per_y_values)
    direct_value = bayes_goodness(pg, experiment, strategy)
    if theorem_value != direct_value:
        raise VerificationError(
            f"theorem-formula goodness {theorem_value!r} differs from the direct "
            f"evaluation {direct_value!r}")
    return BayesStrategyResult(strategy=strategy, value=direct_value,
                               theorem_value=theorem_value, direct_value=direct_value,
                               posterior=beta, observation_marginal=y_marginal,
                               decisions=tuple(zip(table, per_y_values)))


def brute_force_strategy(pg: PriorGame, experiment: TransitionDistribution,
                         budget: int = 10 ** 6) -> tuple:
    """Exhaustive maximizer over all deterministic strategies (the oracle)."""
    _check_experiment(pg, experiment)
    ny, nd = experiment.target.size, pg.game.d_space.size
    total = nd ** ny
    if total > budget:
        raise BudgetExceededError(f"{total} strategies exceed budget {budget}")
    best_table, best_value = None, -1.0
    for table in itertools.product(range(nd), repeat=ny):
        strategy = DetMap(experiment.target, pg.game.d_space, table)
        value = bayes_goodness(pg, experiment, strategy)
        if value > best_value:
            best_table, best_value = table, value
    return DetMap(experiment.target, pg.game.d_space, best_table), best_value


def badness_profile(pg: PriorGame, badness: JointRelation) -> FuzzySet:
    """B_X: the fuzzy set of bad decisions, the dual of the goodness profile."""
    if badness.space_x != pg.game.x_space or badness.space_y != pg.game.d_space:
        raise SpaceMismatchError("badness relation must live on X x D")
    values = tuple(
        logic.exists_in(pg.prior.membership, [badness.at(x, d) for x in range(badness.space_x.size)])
        for d in range(badness.space_y.size))
    return FuzzySet(pg.game.d_space, values)


# --------------------------------------------------------------------------
# Categorical decision problems
# --------------------------------------------------------------------------


@dataclass
class CategoricalDecisionProblem:
    """A decision problem with prior information inside an IT-category.

    ``joint_geq`` is an opaque preorder predicate on joint distributions over
    (signal space) x (decision space) whose signal marginal is the prior.
    """

    prior: Morphism
    experiment: Morphism
    u_space: object
    joint_geq: Callable[[Morphism, Morphism], bool]

    def __post_init__(self):
        if not kernel.is_distribution(self.prior):
            raise SpaceMismatchError("prior must be a distribution")
        if self.experiment.source != self.prior.target:
            raise SpaceMismatchError("experiment must consume the prior's space")

    @property
    def category(self):
        return self.prior.category


def expected_goodness_comparator(goodness: np.ndarray, tol: float = 1e-9) -> Callable:
    """Scalarize joints by expected goodness; ties within tol count as equal."""
    goodness = np.asarray(goodness, dtype=float)

    def value(joint: Morphism) -> float:
        table = np.asarray(joint.payload, dtype=float).reshape(goodness.shape)
        return float(np.sum(table * goodness))

    def geq(j1: Morphism, j2: Morphism) -> bool:
        return value(j1) >= value(j2) - tol

    geq.value = value
    return geq


def guaranteed_goodness_comparator(goodness: np.ndarray) -> Callable:
    """Scalarize joints by the bounded-forall goodness of their support."""
    goodness = np.asarray(goodness, dtype=float)
    flat_goodness = [float(v) for v in goodness.reshape(-1)]

    def value(joint: Morphism) -> float:
        table = [float(v) for v in np.asarray(joint.payload, float).reshape(-1)]
        return logic.forall_in(table, flat_goodness)

    def geq(j1: Morphism, j2: Morphism) -> bool:
        return value(j1) >= value(j2)

    geq.value = value
    return geq


def _deterministic_strategies(cat, source, target):
    for table in itertools.product(range(target.size), repeat=source.size):
        yield cat.embed(DetMap(source, target, table))


@dataclass
class CategoricalBayesReport:
    optimal_direct: list
    optimal_posterior: list
    conditional: Morphism
    opt_sets_equal: bool

    def strategy_tables(self) -> tuple:
        direct = sorted(tuple(m.meta_table) for m in self.optimal_direct)
        posterior = sorted(tuple(m.meta_table) for m in self.optimal_posterior)
        return direct, posterior


def _maximal_indices(joints: list, geq: Callable) -> list:
    maximal = []
    for i, candidate in enumerate(joints):
        dominated = any(
            geq(other, candidate) and not geq(candidate, other)
            for j, other in enumerate(joints) if j != i)
        if not dominated:
            maximal.append(i)
    return maximal


def categorical_bayes(problem: CategoricalDecisionProblem,
                      budget: int = 10 ** 6) -> CategoricalBayesReport:
    """Compute Opt sets for the direct and the posterior formulation.

    The direct route evaluates the joint (i * (r∘a))∘f per strategy r; the
    posterior route evaluates (b * r)∘g with g = a∘f and b a conditional of
    the generated joint with respect to the observation space.  The two Opt
    sets must coincide; a mismatch raises.
    """
    cat = problem.category
    f, a = problem.prior, problem.experiment
    r_space, u = a.target, problem.u_space
    total = u.size ** r_space.size
    if total > budget:
        raise BudgetExceededError(f"{total} strategies exceed budget {budget}")

    g = cat.compose(a, f)
    h = kernel.generated_joint(f, a)
    b = kernel.conditional(h, side="wrt_second")

    strategies, direct_joints, posterior_joints = [], [], []
    for table in itertools.product(range(u.size), repeat=r_space.size):
        strategy = cat.embed(DetMap(r_space, u, table))
        strategy.__dict__ if False else None
        object.__setattr__(strategy, "meta_table", table)
        strategies.append(strategy)
        direct_joints.append(kernel.generated_joint(f, cat.compose(strategy, a)))
        posterior_joints.append(cat.compose(cat.product(b, strategy), g))

    direct_idx = _maximal_indices(direct_joints, problem.joint_geq)
    posterior_idx = _maximal_indices(posterior_joints, problem.joint_geq)
    report = CategoricalBayesReport(
        optimal_direct=[strategies[i] for i in direct_idx],
        optimal_posterior=[strategies[i] for i in posterior_idx],
        conditional=b,
        opt_sets_equal=direct_idx == posterior_idx)
    if not report.opt_sets_equal:
        raise VerificationError(
            f"Opt sets differ: direct {direct_idx} vs posterior {posterior_idx}")
    return report


@dataclass
class DominationSample:
    strategy: Morphism
    dominating: Optional[Morphism]
    accurate: bool
    quality_preserved: Optional[bool]


@dataclass
class DominationReport:
    category: str
    premise_holds: bool
    samples: list
    note: str = ""


def _dominating_deterministic(cat, strategy: Morphism) -> Optional[Morphism]:
    """A deterministic IT at least as accurate as the given one, if any."""
    if cat is SET:
        return strategy
    if cat is MULTI:
        table = tuple(min(row) for row in strategy.payload)
        return cat.embed(DetMap(strategy.source, strategy.target, table))
    if cat in (FMT, FPT):
        table = tuple(int(np.argmax(row)) for row in strategy.payload)
        return cat.embed(DetMap(strategy.source, strategy.target, table))
    if cat is STOCH:
        return strategy if cat.is_deterministic(strategy) else None
    # LINEAR: drop the noise.
    return cat.linear(strategy.source, strategy.target, strategy.payload.gain,
                      np.zeros_like(strategy.payload.noise))


def deterministic_domination_check(problem: CategoricalDecisionProblem,
                                   samples: int = 20, seed: int = 0) -> DominationReport:
    """Exhibit dominating deterministic strategies for sampled strategies.

    In categories whose accuracy order admits a deterministic majorant the
    dominating strategy never lowers the problem's quality; where the premise
    fails (trivial accuracy with genuinely random strategies) the report says
    so with a counterexample.
    """
    rng = np.random.default_rng(seed)
    cat = problem.category
    f, a = problem.prior, problem.experiment
    r_space, u = a.target, problem.u_space
    results, premise_holds, note = [], True, ""
    for _ in range(samples):
        strategy = cat.random_morphism(rng, r_space, u)
        dominating = _dominating_deterministic(cat, strategy)
        if dominating is None:
            premise_holds = False
            note = ("no deterministic IT dominates a nondeterministic one under "
                    "the trivial accuracy order")
            results.append(DominationSample(strategy, None, False, None))
            continue
        accurate = cat.accuracy_compare(dominating, strategy) in (
            Accuracy.EQUAL, Accuracy.MORE_ACCURATE)
        joint_dom = kernel.generated_joint(f, cat.compose(dominating, a))
        joint_raw = kernel.generated_joint(f, cat.compose(strategy, a))
        quality = problem.joint_geq(joint_dom, joint_raw)
        if not accurate:
            premise_holds = False
        results.append(DominationSample(strategy, dominating, accurate, quality))
    return DominationReport(category=cat.tag, premise_holds=premise_holds,
                            samples=results, note=note)
