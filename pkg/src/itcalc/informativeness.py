"""The informativeness preorder a >= b :<=> exists c with c∘a at least as
accurate as b, with per-category decision procedures and class structure.

Decision procedures:

* SET    -- kernel-partition refinement; the witness collapses classes.
* MULTI  -- canonical covering comparison (weak: downward-closed coverings
            ordered by inclusion; strong: subset-plus-union closure with the
            two-clause order); the witness is the maximal admissible row map.
* STOCH  -- linear feasibility: a row-stochastic C with C-after-a equal to b.
* FMT/FPT -- residuation: the greatest solution of the sup-t-norm inequality
            decides the weak (pointwise) order; a quantized grid search is the
            approximate oracle for the trivial (equality) order.
* LINEAR -- <Q, S> class comparison with an explicit estimator witness.

Every "more" verdict ships a witness, and the verdict constructor re-verifies
the witness by composing it and comparing accuracies; a failed re-verification
is a bug, not a report entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from . import linear as lin
from .errors import (BudgetExceededError, CategoryMismatchError,
                     SpaceMismatchError, ValidationError, VerificationError)
from .finite_categories import FMT, FPT, MULTI, SET, STOCH
from .kernel import Morphism
from .spaces import DetMap, Space


class InfoRelation(Enum):
    MORE = "more"
    LESS = "less"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass
class InfoVerdict:
    relation: InfoRelation
    witness_forward: Optional[Morphism]
    witness_backward: Optional[Morphism]
    method: str
    approximate: bool = False

    def to_json(self) -> dict:
        return {"relation": self.relation.value, "method": self.method,
                "approximate": self.approximate}


# --------------------------------------------------------------------------
# Partitions (SET classes)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """A partition of a finite space into disjoint nonempty blocks."""

    space: Space
    blocks: frozenset

    def __post_init__(self):
        blocks = frozenset(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = [i for block in blocks for i in block]
        if (not all(blocks) or len(seen) != len(set(seen))
                or set(seen) != set(range(self.space.size))):
            raise ValidationError("blocks must be nonempty, disjoint, and cover the space")

    def block_of(self, i: int) -> frozenset:
        for block in self.blocks:
            if i in block:
                return block
        raise ValidationError(f"element {i} not covered")

    def finer_or_equal(self, other: "Partition") -> bool:
        if self.space != other.space:
            raise SpaceMismatchError("partitions over different spaces")
        return all(any(block <= ob for ob in other.blocks) for block in self.blocks)


def partition_of(det: DetMap) -> Partition:
    """Kernel partition: x ~ y iff the map sends them to the same element."""
    groups = {}
    for i, t in enumerate(det.table):
        groups.setdefault(t, []).append(i)
    return Partition(det.source, frozenset(frozenset(g) for g in groups.values()))


def partition_product(p: Partition, q: Partition) -> Partition:
    """Common refinement: blocks are the nonempty pairwise intersections."""
    if p.space != q.space:
        raise SpaceMismatchError("partitions over different spaces")
    blocks = {pb & qb for pb in p.blocks for qb in q.blocks if pb & qb}
    return Partition(p.space, frozenset(blocks))


def discrete_partition(space: Space) -> Partition:
    return Partition(space, frozenset(frozenset([i]) for i in range(space.size)))


def single_block_partition(space: Space) -> Partition:
    return Partition(space, frozenset([frozenset(range(space.size))]))


def all_partitions(space: Space):
    """Enumerate every partition of the space (Bell-number many)."""

    def rec(elements):
        if not elements:
            yield []
            return
        head, rest = elements[0], elements[1:]
        for smaller in rec(rest):
            for i in range(len(smaller)):
                yield smaller[:i] + [smaller[i] | {head}] + smaller[i + 1:]
            yield [{head}] + smaller

    for raw in rec(list(range(space.size))):
        yield Partition(space, frozenset(frozenset(b) for b in raw))


# --------------------------------------------------------------------------
# Coverings (MULTI classes)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Covering:
    """A family of nonempty subsets covering the space, closed per its mode."""

    space: Space
    sets: frozenset
    mode: str

    def __post_init__(self):
        sets = frozenset(frozenset(s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.mode not in ("weak", "strong"):
            raise ValidationError(f"unknown covering mode {self.mode!r}")
        if not all(sets):
            raise ValidationError("covering members must be nonempty")
        covered = set().union(*sets) if sets else set()
        if covered != set(range(self.space.size)):
            raise ValidationError("covering must cover the space")


def _preimage_sets(m: Morphism) -> list:
    """The sets B_y = {x : y in m(x)}, one per target element (may be empty)."""
    rows = m.payload
    return [frozenset(x for x in range(m.source.size) if y in rows[x])
            for y in range(m.target.size)]


def _downward_closure(generators, size) -> frozenset:
    closed = set()
    for gen in generators:
        members = sorted(gen)
        for r in range(1, len(members) + 1):
            closed.update(frozenset(c) for c in itertools.combinations(members, r))
    return frozenset(closed)


def _strong_closure(generators, size) -> frozenset:
    closed = set(frozenset(g) for g in generators if g)
    candidates = [frozenset(c)
                  for r in range(1, size + 1)
                  for c in itertools.combinations(range(size), r)]
    changed = True
    while changed:
        changed = False
        for cand in candidates:
            if cand in closed:
                continue
            if not any(cand <= member for member in closed):
                continue
            union = frozenset().union(*(m for m in closed if m <= cand)) if closed else frozenset()
            if union == cand:
                closed.add(cand)
                changed = True
    return frozenset(closed)


def canonical_covering(m: Morphism, mode: str = "weak") -> Covering:
    """The covering representing the informativeness class of a MULTI morphism."""
    if m.category is not MULTI:
        raise CategoryMismatchError("coverings represent multivalued IT classes")
    generators = [g for g in _preimage_sets(m) if g]
    if mode == "weak":
        sets = _downward_closure(generators, m.source.size)
    elif mode == "strong":
        sets = _strong_closure(generators, m.source.size)
    else:
        raise ValidationError(f"unknown covering mode {mode!r}")
    return Covering(m.source, sets, mode)


def covering_geq(first: Covering, second: Covering) -> bool:
    """Class order on coverings: first represents more informative ITs."""
    if first.space != second.space or first.mode != second.mode:
        raise SpaceMismatchError("coverings must share a space and a mode")
    if first.mode == "weak":
        return first.sets <= second.sets
    contained = all(any(a <= b for b in second.sets) for a in first.sets)
    if not contained:
        return False
    for b in second.sets:
        union = frozenset().union(*(c for c in first.sets if c <= b)) if first.sets else frozenset()
        if union != b:
            return False
    return True


# --------------------------------------------------------------------------
# Decision procedures
# --------------------------------------------------------------------------


def _decide_set(a: Morphism, b: Morphism) -> Optional[Morphism]:
    pa = partition_of(SET.det_map(a))
    pb = partition_of(SET.det_map(b))
    if not pa.finer_or_equal(pb):
        return None
    table = [0] * a.target.size
    for x in range(a.source.size):
        table[a.payload[x]] = b.payload[x]
    return SET.morphism(a.target, b.target, tuple(table))


def _decide_multi(a: Morphism, b: Morphism, order: str) -> Optional[Morphism]:
    pre_a = _preimage_sets(a)
    pre_b = _preimage_sets(b)
    rows = []
    full = frozenset(range(b.target.size))
    for gen in pre_a:
        if not gen:
            rows.append(full)
            continue
        admissible = frozenset(z for z in range(b.target.size) if gen <= pre_b[z])
        if not admissible:
            return None
        rows.append(admissible)
    witness = MULTI.morphism(a.target, b.target, rows)
    if not covering_geq(canonical_covering(a, order), canonical_covering(b, order)):
        return None
    return witness


def _goedel_residuum(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.where(u <= v, 1.0, v)


def _goguen_residuum(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.where(u <= v, 1.0, v / np.where(u > 0.0, u, 1.0))


def _decide_fuzzy_weak(a: Morphism, b: Morphism) -> Optional[Morphism]:
    residuum = _goedel_residuum if a.category is FMT else _goguen_residuum
    rows_a, rows_b = a.payload, b.payload
    greatest = np.min(residuum(rows_a[:, :, None], rows_b[:, None, :]), axis=0)
    if np.any(greatest.max(axis=1) != 1.0):
        return None
    cat = a.category
    witness = cat.morphism(a.target, b.target, greatest)
    if not cat.at_least_as_accurate(cat.compose(witness, a), b):
        return None
    return witness


def _normed_grid_rows(size: int, step: int):
    levels = [i / step for i in range(step + 1)]
    for row in itertools.product(levels, repeat=size):
        if max(row) == 1.0:
            yield row


def _decide_fuzzy_grid(a: Morphism, b: Morphism, step: int, budget: int) -> Optional[Morphism]:
    rows = list(_normed_grid_rows(b.target.size, step))
    total = len(rows) ** a.target.size
    if total > budget:
        raise BudgetExceededError(
            f"grid search needs {total} candidates, budget is {budget}")
    cat = a.category
    for combo in itertools.product(rows, repeat=a.target.size):
        candidate = cat.morphism(a.target, b.target, np.array(combo))
        if cat.equal(cat.compose(candidate, a), b):
            return candidate
    return None


def _decide_stoch(a: Morphism, b: Morphism) -> Optional[Morphism]:
    from scipy.optimize import linprog

    na, nb = a.target.size, b.target.size
    nd = a.source.size
    unknowns = na * nb
    rows, rhs = [], []
    for d in range(nd):
        for z in range(nb):
            coeff = np.zeros(unknowns)
            for y in range(na):
                coeff[y * nb + z] = a.payload[d, y]
            rows.append(coeff)
            rhs.append(b.payload[d, z])
    for y in range(na):
        coeff = np.zeros(unknowns)
        coeff[y * nb:(y + 1) * nb] = 1.0
        rows.append(coeff)
        rhs.append(1.0)
    result = linprog(np.zeros(unknowns), A_eq=np.array(rows), b_eq=np.array(rhs),
                     bounds=[(0.0, 1.0)] * unknowns, method="highs")
    if not result.success:
        return None
    witness = np.clip(result.x.reshape(na, nb), 0.0, None)
    witness /= witness.sum(axis=1, keepdims=True)
    return STOCH.morphism(a.target, b.target, witness)


def _decide_linear(a: Morphism, b: Morphism) -> Optional[Morphism]:
    return lin.informativeness_witness(a, b)


def _decide_brute_set(a: Morphism, b: Morphism, budget: int) -> Optional[Morphism]:
    total = b.target.size ** a.target.size
    if total > budget:
        raise BudgetExceededError(f"{total} candidate maps exceed budget {budget}")
    for table in itertools.product(range(b.target.size), repeat=a.target.size):
        candidate = SET.morphism(a.target, b.target, table)
        if SET.equal(SET.compose(candidate, a), b):
            return candidate
    return None


def _decide_brute_multi(a: Morphism, b: Morphism, order: str, budget: int) -> Optional[Morphism]:
    subsets = [frozenset(s)
               for r in range(1, b.target.size + 1)
               for s in itertools.combinations(range(b.target.size), r)]
    total = len(subsets) ** a.target.size
    if total > budget:
        raise BudgetExceededError(f"{total} candidate multimaps exceed budget {budget}")
    for combo in itertools.product(subsets, repeat=a.target.size):
        candidate = MULTI.morphism(a.target, b.target, combo)
        composed = MULTI.compose(candidate, a)
        if order == "strong":
            ok = MULTI.equal(composed, b)
        else:
            ok = MULTI.at_least_as_accurate(composed, b)
        if ok:
            return candidate
    return None


def _decide(a: Morphism, b: Morphism, method: str, order: str, budget: int,
            step: int):
    cat = a.category
    if cat is SET:
        if method == "brute":
            return _decide_brute_set(a, b, budget)
        return _decide_set(a, b)
    if cat is MULTI:
        if method == "brute":
            return _decide_brute_multi(a, b, order, budget)
        return _decide_multi(a, b, order)
    if cat in (FMT, FPT):
        if order == "strong" or method in ("grid", "brute"):
            return _decide_fuzzy_grid(a, b, step, budget)
        return _decide_fuzzy_weak(a, b)
    if cat is STOCH:
        return _decide_stoch(a, b)
    if cat is lin.LINEAR:
        return _decide_linear(a, b)
    raise ValidationError(f"unsupported category {cat.tag} for informativeness")


def _verify_witness(witness: Morphism, a: Morphism, b: Morphism, order: str):
    cat = a.category
    composed = cat.compose(witness, a)
    if order == "strong" and cat in (MULTI, FMT, FPT):
        ok = cat.equal(composed, b)
    else:
        ok = cat.at_least_as_accurate(composed, b)
    if not ok:
        raise VerificationError(
            f"witness re-verification failed in {cat.tag}: c∘a is not at least "
            f"as accurate as b")


def is_more_informative(a: Morphism, b: Morphism, method: str = "exact",
                        order: str = "weak", budget: int = 10 ** 6,
                        grid_step: int = 8) -> InfoVerdict:
    """Decide the informativeness relation between two same-source ITs."""
    if a.category is not b.category:
        raise CategoryMismatchError("informativeness compares same-category ITs")
    if a.source != b.source:
        raise SpaceMismatchError("informativeness compares ITs with a common source")
    forward = _decide(a, b, method, order, budget, grid_step)
    backward = _decide(b, a, method, order, budget, grid_step)
    if forward is not None:
        _verify_witness(forward, a, b, order)
    if backward is not None:
        _verify_witness(backward, b, a, order)
    if forward is not None and backward is not None:
        relation = InfoRelation.EQUIVALENT
    elif forward is not None:
        relation = InfoRelation.MORE
    elif backward is not None:
        relation = InfoRelation.LESS
    else:
        relation = InfoRelation.INCOMPARABLE
    approximate = a.category in (FMT, FPT) and (order == "strong" or method in ("grid", "brute"))
    return InfoVerdict(relation, forward, backward,
                       method=method, approximate=approximate)


# --------------------------------------------------------------------------
# The partially ordered Abelian monoid of classes
# --------------------------------------------------------------------------


class ClassAlgebra:
    """Protocol: canonical class objects with product, order, and extremes."""

    def product(self, c1, c2):
        raise NotImplementedError

    def geq(self, c1, c2) -> bool:
        raise NotImplementedError

    def equal(self, c1, c2) -> bool:
        return self.geq(c1, c2) and self.geq(c2, c1)

    @property
    def top(self):
        raise NotImplementedError

    @property
    def bottom(self):
        raise NotImplementedError


class PartitionAlgebra(ClassAlgebra):
    """SET classes over a fixed source: the partition lattice."""

    def __init__(self, space: Space):
        self.space = space

    def product(self, c1: Partition, c2: Partition) -> Partition:
        return partition_product(c1, c2)

    def geq(self, c1: Partition, c2: Partition) -> bool:
        return c1.finer_or_equal(c2)

    @property
    def top(self) -> Partition:
        return discrete_partition(self.space)

    @property
    def bottom(self) -> Partition:
        return single_block_partition(self.space)


@dataclass
class CoveringClass:
    covering: Covering
    representative: Morphism


class CoveringAlgebra(ClassAlgebra):
    """MULTI classes over a fixed source, carried by representative ITs."""

    def __init__(self, space: Space, mode: str = "weak"):
        self.space = space
        self.mode = mode

    def of(self, m: Morphism) -> CoveringClass:
        return CoveringClass(canonical_covering(m, self.mode), m)

    def product(self, c1: CoveringClass, c2: CoveringClass) -> CoveringClass:
        return self.of(MULTI.product(c1.representative, c2.representative))

    def geq(self, c1: CoveringClass, c2: CoveringClass) -> bool:
        return covering_geq(c1.covering, c2.covering)

    @property
    def top(self) -> CoveringClass:
        return self.of(MULTI.identity(self.space))

    @property
    def bottom(self) -> CoveringClass:
        return self.of(MULTI.terminal_morphism(self.space))


class LinearClassAlgebra(ClassAlgebra):
    """LINEAR classes over a fixed source, carried by representative ITs."""

    def __init__(self, space: lin.VectorSpace):
        self.space = space

    def of(self, m: Morphism):
        return (lin.info_class(m), m)

    def product(self, c1, c2):
        return self.of(lin.LINEAR.product(c1[1], c2[1]))

    def geq(self, c1, c2) -> bool:
        return lin.class_geq(c1[0], c2[0])

    @property
    def top(self):
        return self.of(lin.LINEAR.identity(self.space))

    @property
    def bottom(self):
        return self.of(lin.LINEAR.terminal_morphism(self.space))


@dataclass
class MonoidLawResult:
    name: str
    passed: bool
    counterexample: Optional[str] = None


@dataclass
class MonoidReport:
    laws: list

    @property
    def all_passed(self) -> bool:
        return all(law.passed for law in self.laws)


def class_monoid_check(algebra: ClassAlgebra, classes: Sequence) -> MonoidReport:
    """Check the ordered-monoid laws on the given sample of classes."""
    laws = []

    def run(name, condition):
        result = MonoidLawResult(name, True)
        for item in condition():
            ok, note = item
            if not ok:
                result.passed = False
                result.counterexample = note
                break
        laws.append(result)

    bottom, top = algebra.bottom, algebra.top

    run("zero_neutral", lambda: (
        (algebra.equal(algebra.product(bottom, c), c), f"0*c != c at #{i}")
        for i, c in enumerate(classes)))
    run("one_absorbing", lambda: (
        (algebra.equal(algebra.product(top, c), top), f"1*c != 1 at #{i}")
        for i, c in enumerate(classes)))
    run("sandwich", lambda: (
        (algebra.geq(top, c) and algebra.geq(c, bottom), f"0 <= c <= 1 fails at #{i}")
        for i, c in enumerate(classes)))
    run("product_dominates", lambda: (
        (algebra.geq(algebra.product(c1, c2), c1) and algebra.geq(algebra.product(c1, c2), c2),
         f"c1*c2 does not dominate its factors at #({i},{j})")
        for (i, c1), (j, c2) in itertools.product(enumerate(classes), repeat=2)))

    def monotone():
        for (i, c1), (j, c2), (k, c3), (l, c4) in itertools.product(enumerate(classes), repeat=4):
            if algebra.geq(c1, c2) and algebra.geq(c3, c4):
                yield (algebra.geq(algebra.product(c1, c3), algebra.product(c2, c4)),
                       f"monotonicity fails at #({i},{j},{k},{l})")

    run("product_monotone", monotone)
    run("commutative", lambda: (
        (algebra.equal(algebra.product(c1, c2), algebra.product(c2, c1)),
         f"commutativity fails at #({i},{j})")
        for (i, c1), (j, c2) in itertools.product(enumerate(classes), repeat=2)))
    run("associative", lambda: (
        (algebra.equal(algebra.product(algebra.product(c1, c2), c3),
                       algebra.product(c1, algebra.product(c2, c3))),
         f"associativity fails at #({i},{j},{k})")
        for (i, c1), (j, c2), (k, c3) in itertools.product(enumerate(classes), repeat=3)))

    return MonoidReport(laws)


# --------------------------------------------------------------------------
# Semantic informativeness (decision-problem route)
# --------------------------------------------------------------------------


@dataclass
class SemanticProblem:
    """A decision problem: an interpretation object plus a preorder on
    interpretable ITs (given as its >= predicate)."""

    u_space: object
    geq: Callable[[Morphism, Morphism], bool]


def universal_set_problem(d_space: Space) -> SemanticProblem:
    """The universal problem for SET: decisions in the source, accuracy order."""
    return SemanticProblem(d_space, lambda c, d: SET.equal(c, d))


@dataclass
class SemanticVerdict:
    relation: InfoRelation
    forward_failure: Optional[tuple]
    backward_failure: Optional[tuple]
    problems_checked: int


def _strategies(cat, source, target):
    for table in itertools.product(range(target.size), repeat=source.size):
        yield cat.embed(DetMap(source, target, table))


def semantically_geq(a: Morphism, b: Morphism, problem: SemanticProblem,
                     budget: int = 10 ** 6) -> tuple:
    """Check that every strategy over b is matched by one over a.

    Enumerates deterministic strategies only; for monotone problems this loses
    nothing because every strategy is dominated by a deterministic one.
    Returns (holds, failing b-strategy or None).
    """
    cat = a.category
    u = problem.u_space
    total = (u.size ** a.target.size) * (u.size ** b.target.size)
    if total > budget:
        raise BudgetExceededError(f"{total} strategy pairs exceed budget {budget}")
    for b_strat in _strategies(cat, b.target, u):
        lowered = cat.compose(b_strat, b)
        if not any(problem.geq(cat.compose(a_strat, a), lowered)
                   for a_strat in _strategies(cat, a.target, u)):
            return False, b_strat
    return True, None


def semantic_compare(a: Morphism, b: Morphism,
                     problems: Sequence[SemanticProblem],
                     budget: int = 10 ** 6) -> SemanticVerdict:
    """Compare two ITs through a family of decision problems (brute force)."""
    forward_failure = backward_failure = None
    checked = 0
    for problem in problems:
        checked += 1
        if forward_failure is None:
            ok, witness = semantically_geq(a, b, problem, budget)
            if not ok:
                forward_failure = (problem, witness)
        if backward_failure is None:
            ok, witness = semantically_geq(b, a, problem, budget)
            if not ok:
                backward_failure = (problem, witness)
    if forward_failure is None and backward_failure is None:
        relation = InfoRelation.EQUIVALENT
    elif forward_failure is None:
        relation = InfoRelation.MORE
    elif backward_failure is None:
        relation = InfoRelation.LESS
    else:
        relation = InfoRelation.INCOMPARABLE
    return SemanticVerdict(relation, forward_failure, backward_failure, checked)
