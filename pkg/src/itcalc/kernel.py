"""The category-of-information-transformers kernel.

Every concrete category implements the :class:`Category` interface: morphism
construction and validation, composition, identity, product, terminal object,
accuracy comparison, and conditionals of joint distributions.  On top of that
interface this module derives the tensor a (x) b := (a∘pi) * (b∘nu), the swap
and associator isomorphisms, generated joints h = (i*a)∘f, marginals, and a
seeded randomized harness that checks the defining axioms.

Morphisms are immutable; categories are stateless dispatch objects.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import CategoryMismatchError, SpaceMismatchError, ValidationError


class Accuracy(Enum):
    MORE_ACCURATE = "more_accurate"
    EQUAL = "equal"
    LESS_ACCURATE = "less_accurate"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, eq=False)
class Morphism:
    """A category-tagged information transformer from source to target.

    ``normed`` is meaningful only in the fuzzy categories: raw conditional
    variants may carry sub-normed rows and are then valid only inside the
    reconstruction identity, not as general category morphisms.
    """

    category: "Category"
    source: object
    target: object
    payload: object
    normed: bool = True

    def __repr__(self):
        src = getattr(self.source, "name", self.source)
        tgt = getattr(self.target, "name", self.target)
        return f"<{self.category.tag} {src} -> {tgt}>"


class Category(abc.ABC):
    """Uniform interface implemented by every concrete IT-category."""

    tag: str = "?"
    tolerance: float = 0.0

    # ---- objects ---------------------------------------------------------

    @abc.abstractmethod
    def product_space(self, left, right):
        """The canonical product object of two objects."""

    @abc.abstractmethod
    def split_product(self, space):
        """Return the two factors of a product object, or raise."""

    @abc.abstractmethod
    def terminal_space(self):
        """The terminal object Z."""

    # ---- canonical morphisms ---------------------------------------------

    @abc.abstractmethod
    def identity(self, space) -> Morphism:
        ...

    @abc.abstractmethod
    def terminal_morphism(self, space) -> Morphism:
        """The unique morphism into the terminal object."""

    @abc.abstractmethod
    def projection_first(self, product) -> Morphism:
        ...

    @abc.abstractmethod
    def projection_second(self, product) -> Morphism:
        ...

    # ---- construction ----------------------------------------------------

    @abc.abstractmethod
    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        """Validate a payload and wrap it as a morphism."""

    # ---- core operations ---------------------------------------------------

    @abc.abstractmethod
    def _compose_payload(self, b: Morphism, a: Morphism):
        ...

    @abc.abstractmethod
    def _product_payload(self, a: Morphism, b: Morphism):
        ...

    def compose(self, b: Morphism, a: Morphism) -> Morphism:
        """Sequential composition b∘a."""
        self._check_same_category(a, b)
        if a.target != b.source:
            raise SpaceMismatchError(
                f"cannot compose: intermediate objects differ ({a.target!r} vs {b.source!r})")
        payload = self._compose_payload(b, a)
        return self.morphism(a.source, b.target, payload, normed=a.normed and b.normed)

    def product(self, a: Morphism, b: Morphism) -> Morphism:
        """Morphism product a*b into the product of the targets."""
        self._check_same_category(a, b)
        if a.source != b.source:
            raise SpaceMismatchError("product factors must share a source")
        payload = self._product_payload(a, b)
        target = self.product_space(a.target, b.target)
        return self.morphism(a.source, target, payload, normed=a.normed and b.normed)

    def _check_same_category(self, *morphisms: Morphism):
        for m in morphisms:
            if m.category is not self:
                raise CategoryMismatchError(
                    f"morphism from category {m.category.tag} used in {self.tag}")

    # ---- comparisons -------------------------------------------------------

    @abc.abstractmethod
    def payload_equal(self, a: Morphism, b: Morphism) -> bool:
        ...

    @abc.abstractmethod
    def payload_distance(self, a: Morphism, b: Morphism) -> float:
        """Max-abs style distance between same-shaped payloads (0.0 if equal)."""

    def equal(self, a: Morphism, b: Morphism) -> bool:
        if a.source != b.source or a.target != b.target:
            return False
        return self.payload_equal(a, b)

    @abc.abstractmethod
    def accuracy_compare(self, a: Morphism, b: Morphism) -> Accuracy:
        ...

    def at_least_as_accurate(self, a: Morphism, b: Morphism) -> bool:
        return self.accuracy_compare(a, b) in (Accuracy.EQUAL, Accuracy.MORE_ACCURATE)

    # ---- deterministic subcategory ------------------------------------------

    @abc.abstractmethod
    def is_deterministic(self, a: Morphism) -> bool:
        ...

    # ---- conditionals -------------------------------------------------------

    @abc.abstractmethod
    def conditional_pair(self, joint: Morphism, variant: str = "canonical") -> tuple:
        """Conditional morphisms (wrt first factor, wrt second factor)."""

    # ---- randomness (axiom harness and tests) -------------------------------

    @abc.abstractmethod
    def random_space(self, rng, max_size: int = 4, name: Optional[str] = None):
        ...

    @abc.abstractmethod
    def random_morphism(self, rng, source, target) -> Morphism:
        ...

    @abc.abstractmethod
    def random_deterministic(self, rng, source, target) -> Morphism:
        ...

    def random_distribution(self, rng, space) -> Morphism:
        return self.random_morphism(rng, self.terminal_space(), space)


# --------------------------------------------------------------------------
# Derived constructions
# --------------------------------------------------------------------------


def tensor(a: Morphism, b: Morphism) -> Morphism:
    """Parallel composition a (x) b := (a∘pi) * (b∘nu)."""
    cat = a.category
    cat._check_same_category(a, b)
    source = cat.product_space(a.source, b.source)
    pi = cat.projection_first(source)
    nu = cat.projection_second(source)
    return cat.product(cat.compose(a, pi), cat.compose(b, nu))


def swap(cat: Category, left, right) -> Morphism:
    """The natural isomorphism A x B -> B x A, built as nu * pi."""
    ab = cat.product_space(left, right)
    return cat.product(cat.projection_second(ab), cat.projection_first(ab))


def associator(cat: Category, a, b, c) -> Morphism:
    """The natural isomorphism (A x B) x C -> A x (B x C)."""
    ab = cat.product_space(a, b)
    ab_c = cat.product_space(ab, c)
    pi_outer = cat.projection_first(ab_c)
    nu_outer = cat.projection_second(ab_c)
    pi_inner = cat.projection_first(ab)
    nu_inner = cat.projection_second(ab)
    first = cat.compose(pi_inner, pi_outer)
    second = cat.compose(nu_inner, pi_outer)
    return cat.product(first, cat.product(second, nu_outer))


def associator_inverse(cat: Category, a, b, c) -> Morphism:
    """The inverse isomorphism A x (B x C) -> (A x B) x C."""
    bc = cat.product_space(b, c)
    a_bc = cat.product_space(a, bc)
    pi_outer = cat.projection_first(a_bc)
    nu_outer = cat.projection_second(a_bc)
    pi_inner = cat.projection_first(bc)
    nu_inner = cat.projection_second(bc)
    return cat.product(cat.product(pi_outer, cat.compose(pi_inner, nu_outer)),
                       cat.compose(nu_inner, nu_outer))


def is_distribution(m: Morphism) -> bool:
    return m.source == m.category.terminal_space()


def is_joint(m: Morphism) -> bool:
    if not is_distribution(m):
        return False
    try:
        m.category.split_product(m.target)
    except SpaceMismatchError:
        return False
    return True


def generated_joint(f: Morphism, a: Morphism) -> Morphism:
    """The joint distribution h = (i*a)∘f generated by a distribution and an IT."""
    cat = f.category
    if not is_distribution(f):
        raise SpaceMismatchError("f must be a distribution (source = terminal object)")
    if a.source != f.target:
        raise SpaceMismatchError("the IT must consume the distribution's target")
    return cat.compose(cat.product(cat.identity(a.source), a), f)


def marginal_first(h: Morphism) -> Morphism:
    cat = h.category
    return cat.compose(cat.projection_first(h.target), h)


def marginal_second(h: Morphism) -> Morphism:
    cat = h.category
    return cat.compose(cat.projection_second(h.target), h)


def conditional(h: Morphism, side: str = "wrt_first", variant: str = "canonical") -> Morphism:
    """A designated conditional IT of a joint distribution.

    wrt_first returns a with h = (i*a)∘pi∘h; wrt_second returns b with
    h = (b*i)∘nu∘h.
    """
    if not is_joint(h):
        raise SpaceMismatchError("conditional requires a joint distribution on a product object")
    a, b = h.category.conditional_pair(h, variant=variant)
    if side == "wrt_first":
        return a
    if side == "wrt_second":
        return b
    raise ValidationError(f"unknown side {side!r}")


def reconstruction_residual(h: Morphism, side: str = "wrt_first",
                            variant: str = "canonical") -> float:
    """Distance between h and its reconstruction from a marginal and a conditional."""
    cat = h.category
    cond = conditional(h, side=side, variant=variant)
    if side == "wrt_first":
        f = marginal_first(h)
        rebuilt = cat.compose(cat.product(cat.identity(cond.source), cond), f)
    else:
        g = marginal_second(h)
        rebuilt = cat.compose(cat.product(cond, cat.identity(cond.source)), g)
    return cat.payload_distance(rebuilt, h)


# --------------------------------------------------------------------------
# Axiom harness
# --------------------------------------------------------------------------


@dataclass
class LawCheck:
    name: str
    description: str
    samples: int = 0
    failures: int = 0
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class AxiomReport:
    category: str
    seed: int
    samples: int
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def format_text(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"axiom check report: category={self.category} seed={self.seed} "
                 f"samples={self.samples}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {c.name.ljust(width)}  {status}  ({c.samples} samples)"
                         + (f"  counterexample: {c.counterexample}" if c.counterexample else ""))
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def _random_spaces(cat: Category, rng, count: int, max_size: int):
    return [cat.random_space(rng, max_size=max_size, name=f"S{i}") for i in range(count)]


def _law_identity(cat, rng, max_size):
    a_sp, b_sp = _random_spaces(cat, rng, 2, max_size)
    a = cat.random_morphism(rng, a_sp, b_sp)
    left = cat.compose(cat.identity(b_sp), a)
    right = cat.compose(a, cat.identity(a_sp))
    if not (cat.equal(left, a) and cat.equal(right, a)):
        return f"identity law failed for {a!r}"
    return None


def _law_associativity(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 4, max_size)
    a = cat.random_morphism(rng, sps[0], sps[1])
    b = cat.random_morphism(rng, sps[1], sps[2])
    c = cat.random_morphism(rng, sps[2], sps[3])
    lhs = cat.compose(cat.compose(c, b), a)
    rhs = cat.compose(c, cat.compose(b, a))
    if not cat.equal(lhs, rhs):
        return f"(c∘b)∘a != c∘(b∘a) for {a!r}, {b!r}, {c!r}"
    return None


def _law_det_subcategory(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 3, max_size)
    d1 = cat.random_deterministic(rng, sps[0], sps[1])
    d2 = cat.random_deterministic(rng, sps[1], sps[2])
    if not cat.is_deterministic(cat.compose(d2, d1)):
        return "composition of deterministic ITs is not deterministic"
    if not cat.is_deterministic(cat.identity(sps[0])):
        return "identity is not deterministic"
    return None


def _law_terminal(cat, rng, max_size):
    a_sp, b_sp = _random_spaces(cat, rng, 2, max_size)
    a = cat.random_morphism(rng, a_sp, b_sp)
    z = cat.terminal_space()
    if not cat.equal(cat.compose(cat.terminal_morphism(b_sp), a), cat.terminal_morphism(a_sp)):
        return "z∘a != z"
    into_z = cat.random_morphism(rng, a_sp, z)
    if not cat.equal(into_z, cat.terminal_morphism(a_sp)):
        return "a morphism into Z differs from the terminal morphism"
    return None


def _law_det_products(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 3, max_size)
    prod = cat.product_space(sps[1], sps[2])
    c = cat.random_deterministic(rng, sps[0], prod)
    a = cat.compose(cat.projection_first(prod), c)
    b = cat.compose(cat.projection_second(prod), c)
    if not cat.equal(c, cat.product(a, b)):
        return "deterministic c with given projections differs from a*b (uniqueness)"
    return None


def _law_projections(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 3, max_size)
    a = cat.random_morphism(rng, sps[0], sps[1])
    b = cat.random_morphism(rng, sps[0], sps[2])
    prod = cat.product(a, b)
    pi = cat.projection_first(prod.target)
    nu = cat.projection_second(prod.target)
    if not cat.equal(cat.compose(pi, prod), a):
        return "pi∘(a*b) != a"
    if not cat.equal(cat.compose(nu, prod), b):
        return "nu∘(a*b) != b"
    return None


def _law_tensor_characterization(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 4, max_size)
    a = cat.random_morphism(rng, sps[0], sps[1])
    b = cat.random_morphism(rng, sps[2], sps[3])
    t = tensor(a, b)
    src = cat.product_space(sps[0], sps[2])
    tgt = cat.product_space(sps[1], sps[3])
    lhs1 = cat.compose(cat.projection_first(tgt), t)
    rhs1 = cat.compose(a, cat.projection_first(src))
    lhs2 = cat.compose(cat.projection_second(tgt), t)
    rhs2 = cat.compose(b, cat.projection_second(src))
    if not (cat.equal(lhs1, rhs1) and cat.equal(lhs2, rhs2)):
        return "tensor does not satisfy its projection characterization"
    return None


def _law_interchange(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 5, max_size)
    c = cat.random_morphism(rng, sps[0], sps[1])
    d = cat.random_morphism(rng, sps[0], sps[2])
    a = cat.random_morphism(rng, sps[1], sps[3])
    b = cat.random_morphism(rng, sps[2], sps[4])
    lhs = cat.compose(tensor(a, b), cat.product(c, d))
    rhs = cat.product(cat.compose(a, c), cat.compose(b, d))
    if not cat.equal(lhs, rhs):
        return "(a(x)b)∘(c*d) != (a∘c)*(b∘d)"
    return None


def _law_swap(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 3, max_size)
    a = cat.random_morphism(rng, sps[0], sps[1])
    b = cat.random_morphism(rng, sps[0], sps[2])
    sigma = swap(cat, sps[1], sps[2])
    if not cat.is_deterministic(sigma):
        return "swap is not deterministic"
    if not cat.equal(cat.compose(sigma, cat.product(a, b)), cat.product(b, a)):
        return "sigma∘(a*b) != b*a"
    sigma_back = swap(cat, sps[2], sps[1])
    prod = cat.product_space(sps[1], sps[2])
    if not cat.equal(cat.compose(sigma_back, sigma), cat.identity(prod)):
        return "swap∘swap != identity"
    return None


def _law_associator(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 4, max_size)
    a = cat.random_morphism(rng, sps[0], sps[1])
    b = cat.random_morphism(rng, sps[0], sps[2])
    c = cat.random_morphism(rng, sps[0], sps[3])
    alpha = associator(cat, sps[1], sps[2], sps[3])
    if not cat.is_deterministic(alpha):
        return "associator is not deterministic"
    lhs = cat.compose(alpha, cat.product(cat.product(a, b), c))
    rhs = cat.product(a, cat.product(b, c))
    if not cat.equal(lhs, rhs):
        return "alpha∘((a*b)*c) != a*(b*c)"
    alpha_inv = associator_inverse(cat, sps[1], sps[2], sps[3])
    nested = cat.product_space(cat.product_space(sps[1], sps[2]), sps[3])
    if not cat.equal(cat.compose(alpha_inv, alpha), cat.identity(nested)):
        return "associator∘inverse != identity"
    return None


def _law_right_distributivity_det(cat, rng, max_size):
    sps = _random_spaces(cat, rng, 4, max_size)
    d = cat.random_deterministic(rng, sps[0], sps[1])
    a = cat.random_morphism(rng, sps[1], sps[2])
    b = cat.random_morphism(rng, sps[1], sps[3])
    lhs = cat.compose(cat.product(a, b), d)
    rhs = cat.product(cat.compose(a, d), cat.compose(b, d))
    if not cat.equal(lhs, rhs):
        return "(a*b)∘d != (a∘d)*(b∘d) for deterministic d"
    return None


def _law_generated_joint_marginals(cat, rng, max_size):
    a_sp, b_sp = _random_spaces(cat, rng, 2, max_size)
    f = cat.random_distribution(rng, a_sp)
    a = cat.random_morphism(rng, a_sp, b_sp)
    h = generated_joint(f, a)
    if not cat.equal(marginal_first(h), f):
        return "pi∘h != f"
    if not cat.equal(marginal_second(h), cat.compose(a, f)):
        return "nu∘h != a∘f"
    return None


_LAWS = [
    ("identity_laws", "a∘i = a = i∘a", _law_identity),
    ("composition_associativity", "c∘(b∘a) = (c∘b)∘a", _law_associativity),
    ("axiom1_det_subcategory", "deterministic ITs are closed under composition", _law_det_subcategory),
    ("axiom3_terminal_unique", "any IT into Z equals the terminal morphism", _law_terminal),
    ("axiom4_det_products", "deterministic pairings are unique", _law_det_products),
    ("axiom5_projection_laws", "pi∘(a*b) = a and nu∘(a*b) = b", _law_projections),
    ("axiom6_interchange", "(a(x)b)∘(c*d) = (a∘c)*(b∘d)", _law_interchange),
    ("axiom7_swap", "sigma∘(a*b) = b*a and swap is an involution", _law_swap),
    ("axiom8_associator", "alpha∘((a*b)*c) = a*(b*c)", _law_associator),
    ("tensor_characterization", "projections of a(x)b factor through a and b", _law_tensor_characterization),
    ("right_distributivity_det", "(a*b)∘d = (a∘d)*(b∘d) for deterministic d", _law_right_distributivity_det),
    ("generated_joint_marginals", "marginals of (i*a)∘f are f and a∘f", _law_generated_joint_marginals),
]


def _search_distributivity_counterexample(cat, rng, max_size, attempts=200):
    """Look for nondeterministic d violating (a*b)∘d = (a∘d)*(b∘d)."""
    for _ in range(attempts):
        sps = _random_spaces(cat, rng, 4, max_size)
        d = cat.random_morphism(rng, sps[0], sps[1])
        if cat.is_deterministic(d):
            continue
        a = cat.random_morphism(rng, sps[1], sps[2])
        b = cat.random_morphism(rng, sps[1], sps[3])
        lhs = cat.compose(cat.product(a, b), d)
        rhs = cat.product(cat.compose(a, d), cat.compose(b, d))
        if not cat.equal(lhs, rhs):
            return d, a, b
    return None


def verify_axioms(cat: Category, samples: int = 100, seed: int = 0,
                  max_size: int = 4) -> AxiomReport:
    """Randomized check of the category axioms on small spaces.

    Failures are report content, never exceptions; each failed law records the
    first counterexample found.
    """
    import numpy as np

    report = AxiomReport(category=cat.tag, seed=seed, samples=samples)
    for name, description, law in _LAWS:
        rng = np.random.default_rng([seed, _stable_hash(name)])
        check = LawCheck(name=name, description=description)
        for _ in range(samples):
            check.samples += 1
            message = law(cat, rng, max_size)
            if message is not None:
                check.failures += 1
                if check.counterexample is None:
                    check.counterexample = message
        report.checks.append(check)

    rng = np.random.default_rng([seed, _stable_hash("eq2-unrestricted")])
    found = _search_distributivity_counterexample(cat, rng, max_size)
    if found is not None:
        d, a, b = found
        report.notes.append(
            "right distributivity (a*b)∘d = (a∘d)*(b∘d) fails for a nondeterministic d; "
            f"witness shapes d:{d!r} a:{a!r} b:{b!r}")
    else:
        report.notes.append(
            "no nondeterministic counterexample to right distributivity found "
            "(expected for the deterministic category)")
    return report


def _stable_hash(text: str) -> int:
    value = 0
    for ch in text:
        value = (value * 131 + ord(ch)) % (2 ** 31)
    return value
