"""Truth-value arithmetic: fuzzy connectives and (bounded) quantifiers.

Truth values live in [0, 1].  Conjunction is min, disjunction max, negation
1 - x, and implication max(1 - a, b).  Quantifiers over finite families are
inf/sup; bounded quantifiers relativize them through a fuzzy bound:

    forall x in A: B(x)  =  inf_x max(1 - A(x), B(x))
    exists x in A: B(x)  =  sup_x min(A(x), B(x))

All operations are pure min/max/1-x chains, hence exact in binary64.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import DomainError, SpaceMismatchError


def check_unit(value: float, what: str = "truth value") -> float:
    """Validate that a value lies in [0, 1] and return it as float."""
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{what} {value!r} outside [0, 1]")
    return v


def conj(a: float, b: float) -> float:
    return min(check_unit(a), check_unit(b))


def disj(a: float, b: float) -> float:
    return max(check_unit(a), check_unit(b))


def neg(a: float) -> float:
    return 1.0 - check_unit(a)


def impl(a: float, b: float) -> float:
    return max(1.0 - check_unit(a), check_unit(b))


_BINARY = {"conj": conj, "disj": disj, "impl": impl}


def apply_connective(kind: str, a: float, b: Optional[float] = None) -> float:
    """Evaluate a named connective; ``neg`` takes a single argument."""
    if kind == "neg":
        if b is not None:
            raise DomainError("neg takes exactly one argument")
        return neg(a)
    try:
        op = _BINARY[kind]
    except KeyError:
        raise DomainError(f"unknown connective {kind!r}") from None
    if b is None:
        raise DomainError(f"{kind} takes two arguments")
    return op(a, b)


def forall(family: Iterable[float]) -> float:
    """Universal quantifier: inf of the family (1.0 over the empty family)."""
    result = 1.0
    for v in family:
        result = min(result, check_unit(v))
    return result


def exists(family: Iterable[float]) -> float:
    """Existential quantifier: sup of the family (0.0 over the empty family)."""
    result = 0.0
    for v in family:
        result = max(result, check_unit(v))
    return result


def quantify(kind: str, family: Iterable[float]) -> float:
    if kind == "forall":
        return forall(family)
    if kind == "exists":
        return exists(family)
    raise DomainError(f"unknown quantifier {kind!r}")


def _check_aligned(bound: Sequence[float], pred: Sequence[float]):
    if len(bound) != len(pred):
        raise SpaceMismatchError(
            f"bound has {len(bound)} entries, predicate has {len(pred)}"
        )


def forall_in(bound: Sequence[float], pred: Sequence[float]) -> float:
    """Bounded universal quantifier over aligned families."""
    _check_aligned(bound, pred)
    result = 1.0
    for a, b in zip(bound, pred):
        result = min(result, max(1.0 - check_unit(a), check_unit(b)))
    return result


def exists_in(bound: Sequence[float], pred: Sequence[float]) -> float:
    """Bounded existential quantifier over aligned families."""
    _check_aligned(bound, pred)
    result = 0.0
    for a, b in zip(bound, pred):
        result = max(result, min(check_unit(a), check_unit(b)))
    return result


def bounded_quantify(kind: str, bound: Sequence[float], pred: Sequence[float]) -> float:
    if kind == "forall":
        return forall_in(bound, pred)
    if kind == "exists":
        return exists_in(bound, pred)
    raise DomainError(f"unknown quantifier {kind!r}")
