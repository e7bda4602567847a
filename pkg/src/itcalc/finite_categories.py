"""The five finite IT-categories: SET, FMT, FPT, MULTI, STOCH.

Payload conventions (rows are indexed by source elements):

* SET    -- tuple of target indices (a total map table).
* FMT    -- float matrix of memberships; composition is sup-min.
* FPT    -- float matrix of memberships; composition is sup-product.
* MULTI  -- tuple of nonempty frozensets of target indices.
* STOCH  -- row-stochastic float matrix (finite transition probabilities).

Morphism rows in FMT/FPT must be normed (row sup exactly 1.0); raw conditional
variants are the one sanctioned exception and are flagged ``normed=False``.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import spaces as sp
from .errors import SpaceMismatchError, ValidationError
from .kernel import Accuracy, Category, Morphism
from .possibility import TransitionDistribution


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=float)
    array.flags.writeable = False
    return array


class FiniteCategory(Category):
    """Shared space handling for the finite categories."""

    def product_space(self, left, right):
        return sp.product_space(left, right)

    def split_product(self, space):
        return sp.split_product(space)

    def terminal_space(self):
        return sp.TERMINAL

    def embed(self, det: sp.DetMap) -> Morphism:
        """Embed a deterministic map as a morphism of this category."""
        return self.morphism(det.source, det.target, self._embed_payload(det))

    def _embed_payload(self, det: sp.DetMap):
        raise NotImplementedError

    def identity(self, space) -> Morphism:
        return self.embed(sp.DetMap.identity(space))

    def terminal_morphism(self, space) -> Morphism:
        return self.embed(sp.DetMap.constant(space, sp.TERMINAL, 0))

    def projection_first(self, product) -> Morphism:
        return self.embed(sp.proj_first(product))

    def projection_second(self, product) -> Morphism:
        return self.embed(sp.proj_second(product))

    def random_space(self, rng, max_size: int = 4, name: Optional[str] = None):
        size = int(rng.integers(1, max_size + 1))
        name = name or f"R{rng.integers(10**6)}"
        return sp.Space(name, tuple(f"{name}.{i}" for i in range(size)))

    def random_deterministic(self, rng, source, target) -> Morphism:
        table = tuple(int(t) for t in rng.integers(0, target.size, source.size))
        return self.embed(sp.DetMap(source, target, table))

    def _check_matrix(self, payload, source, target) -> np.ndarray:
        payload = np.asarray(payload, dtype=float)
        if payload.shape != (source.size, target.size):
            raise ValidationError(
                f"payload shape {payload.shape} does not match "
                f"{source.name!r} x {target.name!r}")
        if np.any(payload < 0.0) or np.any(payload > 1.0):
            raise ValidationError("membership/probability entries must lie in [0, 1]")
        return payload


class SetCategory(FiniteCategory):
    """Deterministic ITs: the category of finite sets and total maps."""

    tag = "SET"
    tolerance = 0.0

    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        det = sp.DetMap(source, target, tuple(payload))
        return Morphism(self, source, target, det.table)

    def _embed_payload(self, det):
        return det.table

    def _compose_payload(self, b, a):
        return tuple(b.payload[t] for t in a.payload)

    def _product_payload(self, a, b):
        prod = sp.product_space(a.target, b.target)
        return tuple(prod.pair_index(i, j) for i, j in zip(a.payload, b.payload))

    def payload_equal(self, a, b):
        return a.payload == b.payload

    def payload_distance(self, a, b):
        return 0.0 if a.payload == b.payload else 1.0

    def accuracy_compare(self, a, b):
        return Accuracy.EQUAL if a.payload == b.payload else Accuracy.INCOMPARABLE

    def is_deterministic(self, a):
        return True

    def conditional_pair(self, joint, variant: str = "canonical"):
        _check_variant(variant)
        left, right = self.split_product(joint.target)
        prod = joint.target
        x0, y0 = prod.unpair_index(joint.payload[0])
        a = self.morphism(left, right, (y0,) * left.size)
        b = self.morphism(right, left, (x0,) * right.size)
        return a, b

    def random_morphism(self, rng, source, target):
        return self.random_deterministic(rng, source, target)

    def det_map(self, m: Morphism) -> sp.DetMap:
        return sp.DetMap(m.source, m.target, m.payload)


class _FuzzyCategory(FiniteCategory):
    """Shared machinery for the min-based and product-based fuzzy categories."""

    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        payload = self._check_matrix(payload, source, target)
        if normed and np.any(payload.max(axis=1) != 1.0):
            raise ValidationError(f"{self.tag} rows must be normed (row sup exactly 1)")
        return Morphism(self, source, target, _frozen(payload), normed=normed)

    def _embed_payload(self, det):
        payload = np.zeros((det.source.size, det.target.size))
        payload[np.arange(det.source.size), det.table] = 1.0
        return payload

    def payload_equal(self, a, b):
        if self.tolerance == 0.0:
            return bool(np.array_equal(a.payload, b.payload))
        return bool(np.allclose(a.payload, b.payload, rtol=0.0, atol=self.tolerance))

    def payload_distance(self, a, b):
        return float(np.max(np.abs(a.payload - b.payload), initial=0.0))

    def accuracy_compare(self, a, b):
        le = bool(np.all(a.payload <= b.payload + self.tolerance))
        ge = bool(np.all(b.payload <= a.payload + self.tolerance))
        if le and ge:
            return Accuracy.EQUAL
        if le:
            return Accuracy.MORE_ACCURATE
        if ge:
            return Accuracy.LESS_ACCURATE
        return Accuracy.INCOMPARABLE

    def is_deterministic(self, a):
        payload = a.payload
        one_hot = np.sum(payload == 1.0, axis=1) == 1
        binary = np.all((payload == 0.0) | (payload == 1.0))
        return bool(binary and np.all(one_hot))

    def random_morphism(self, rng, source, target):
        rows = rng.random((source.size, target.size))
        rows[rng.random(rows.shape) < 0.25] = 0.0
        rows[np.arange(source.size), rng.integers(0, target.size, source.size)] = 1.0
        deterministic = rng.random(source.size) < 0.15
        for i in np.flatnonzero(deterministic):
            row = np.zeros(target.size)
            row[rng.integers(target.size)] = 1.0
            rows[i] = row
        return self.morphism(source, target, rows)


class FmtCategory(_FuzzyCategory):
    """Fuzzy ITs under the min t-norm (sup-min composition)."""

    tag = "FMT"
    tolerance = 0.0

    def _compose_payload(self, b, a):
        return np.max(np.minimum(a.payload[:, :, None], b.payload[None, :, :]), axis=1)

    def _product_payload(self, a, b):
        rows = np.minimum(a.payload[:, :, None], b.payload[:, None, :])
        return rows.reshape(a.source.size, -1)

    def conditional_pair(self, joint, variant: str = "canonical"):
        _check_variant(variant)
        left, right = self.split_product(joint.target)
        table = joint.payload.reshape(left.size, right.size)
        if variant == "canonical":
            a_rows, b_rows = table, table.T
        else:
            row_sup = table.max(axis=1, keepdims=True)
            col_sup = table.max(axis=0, keepdims=True)
            a_rows = np.where(table == row_sup, 1.0, table)
            b_rows = np.where(table == col_sup, 1.0, table).T
        a_normed = bool(np.all(a_rows.max(axis=1) == 1.0))
        b_normed = bool(np.all(b_rows.max(axis=1) == 1.0))
        return (self.morphism(left, right, a_rows, normed=a_normed),
                self.morphism(right, left, b_rows, normed=b_normed))


class FptCategory(_FuzzyCategory):
    """Fuzzy ITs under the product t-norm (sup-product composition)."""

    tag = "FPT"
    tolerance = 1e-12

    def _compose_payload(self, b, a):
        return np.max(a.payload[:, :, None] * b.payload[None, :, :], axis=1)

    def _product_payload(self, a, b):
        rows = a.payload[:, :, None] * b.payload[:, None, :]
        return rows.reshape(a.source.size, -1)

    def conditional_pair(self, joint, variant: str = "canonical"):
        _check_variant(variant)
        left, right = self.split_product(joint.target)
        table = joint.payload.reshape(left.size, right.size)
        a_rows = _normalize_rows_by_sup(table)
        b_rows = _normalize_rows_by_sup(table.T)
        return (self.morphism(left, right, a_rows),
                self.morphism(right, left, b_rows))


def _normalize_rows_by_sup(table: np.ndarray) -> np.ndarray:
    sup = table.max(axis=1, keepdims=True)
    safe = np.where(sup > 0.0, sup, 1.0)
    return np.where(sup > 0.0, table / safe, 1.0)


def _check_variant(variant: str):
    if variant not in ("canonical", "normed"):
        raise ValidationError(f"unknown conditional variant {variant!r}")


class MultiCategory(FiniteCategory):
    """Multivalued ITs: everywhere-defined set-valued maps."""

    tag = "MULTI"
    tolerance = 0.0

    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        rows = tuple(frozenset(int(v) for v in row) for row in payload)
        if len(rows) != source.size:
            raise ValidationError("one row per source element required")
        for row in rows:
            if not row:
                raise ValidationError("multivalued rows must be nonempty")
            if any(not 0 <= v < target.size for v in row):
                raise ValidationError("row entry outside target space")
        return Morphism(self, source, target, rows)

    def _embed_payload(self, det):
        return tuple(frozenset([t]) for t in det.table)

    def _compose_payload(self, b, a):
        return tuple(frozenset().union(*(b.payload[y] for y in row)) for row in a.payload)

    def _product_payload(self, a, b):
        prod = sp.product_space(a.target, b.target)
        return tuple(
            frozenset(prod.pair_index(y, z) for y in row_a for z in row_b)
            for row_a, row_b in zip(a.payload, b.payload)
        )

    def payload_equal(self, a, b):
        return a.payload == b.payload

    def payload_distance(self, a, b):
        return 0.0 if a.payload == b.payload else 1.0

    def accuracy_compare(self, a, b):
        le = all(ra <= rb for ra, rb in zip(a.payload, b.payload))
        ge = all(rb <= ra for ra, rb in zip(a.payload, b.payload))
        if le and ge:
            return Accuracy.EQUAL
        if le:
            return Accuracy.MORE_ACCURATE
        if ge:
            return Accuracy.LESS_ACCURATE
        return Accuracy.INCOMPARABLE

    def is_deterministic(self, a):
        return all(len(row) == 1 for row in a.payload)

    def conditional_pair(self, joint, variant: str = "canonical"):
        _check_variant(variant)
        left, right = self.split_product(joint.target)
        prod = joint.target
        pairs = {prod.unpair_index(k) for k in joint.payload[0]}
        full_b = frozenset(range(right.size))
        full_a = frozenset(range(left.size))
        a_rows = []
        for x in range(left.size):
            section = frozenset(y for (px, y) in pairs if px == x)
            a_rows.append(section if section else full_b)
        b_rows = []
        for y in range(right.size):
            section = frozenset(x for (x, py) in pairs if py == y)
            b_rows.append(section if section else full_a)
        return (self.morphism(left, right, a_rows),
                self.morphism(right, left, b_rows))

    def random_morphism(self, rng, source, target):
        rows = []
        for _ in range(source.size):
            mask = rng.random(target.size) < 0.5
            if not mask.any():
                mask[rng.integers(target.size)] = True
            rows.append(frozenset(int(i) for i in np.flatnonzero(mask)))
        return self.morphism(source, target, rows)


class StochCategory(FiniteCategory):
    """Finite stochastic ITs: row-stochastic transition matrices."""

    tag = "STOCH"
    tolerance = 1e-9
    row_sum_tolerance = 1e-12

    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        payload = np.asarray(payload, dtype=float)
        if payload.shape != (source.size, target.size):
            raise ValidationError(
                f"payload shape {payload.shape} does not match "
                f"{source.name!r} x {target.name!r}")
        if np.any(payload < 0.0):
            raise ValidationError("probabilities must be nonnegative")
        sums = payload.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > self.row_sum_tolerance):
            raise ValidationError(f"rows must sum to 1 within {self.row_sum_tolerance}")
        return Morphism(self, source, target, _frozen(payload))

    def _embed_payload(self, det):
        payload = np.zeros((det.source.size, det.target.size))
        payload[np.arange(det.source.size), det.table] = 1.0
        return payload

    def _compose_payload(self, b, a):
        return a.payload @ b.payload

    def _product_payload(self, a, b):
        rows = a.payload[:, :, None] * b.payload[:, None, :]
        return rows.reshape(a.source.size, -1)

    def payload_equal(self, a, b):
        return bool(np.allclose(a.payload, b.payload, rtol=0.0, atol=self.tolerance))

    def payload_distance(self, a, b):
        return float(np.max(np.abs(a.payload - b.payload), initial=0.0))

    def accuracy_compare(self, a, b):
        return Accuracy.EQUAL if self.payload_equal(a, b) else Accuracy.INCOMPARABLE

    def is_deterministic(self, a):
        payload = a.payload
        one_hot = np.sum(payload == 1.0, axis=1) == 1
        binary = np.all((payload == 0.0) | (payload == 1.0))
        return bool(binary and np.all(one_hot))

    def conditional_pair(self, joint, variant: str = "canonical"):
        _check_variant(variant)
        left, right = self.split_product(joint.target)
        table = joint.payload.reshape(left.size, right.size)
        a_rows = _bayes_rows(table, right.size)
        b_rows = _bayes_rows(table.T, left.size)
        return (self.morphism(left, right, a_rows),
                self.morphism(right, left, b_rows))

    def random_morphism(self, rng, source, target):
        rows = rng.random((source.size, target.size)) + 1e-3
        rows /= rows.sum(axis=1, keepdims=True)
        deterministic = rng.random(source.size) < 0.15
        for i in np.flatnonzero(deterministic):
            row = np.zeros(target.size)
            row[rng.integers(target.size)] = 1.0
            rows[i] = row
        return self.morphism(source, target, rows)


def _bayes_rows(table: np.ndarray, width: int) -> np.ndarray:
    """Normalize rows by their mass; zero-mass rows fall back to uniform."""
    mass = table.sum(axis=1, keepdims=True)
    safe = np.where(mass > 0.0, mass, 1.0)
    uniform = np.full(width, 1.0 / width)
    return np.where(mass > 0.0, table / safe, uniform)


SET = SetCategory()
FMT = FmtCategory()
FPT = FptCategory()
MULTI = MultiCategory()
STOCH = StochCategory()

CATEGORIES = {c.tag: c for c in (SET, FMT, FPT, MULTI, STOCH)}


def deterministic_embed(cat: FiniteCategory, det: sp.DetMap) -> Morphism:
    """Embed a total map as a morphism of the given finite category."""
    return cat.embed(det)


def transition_to_morphism(td: TransitionDistribution, cat: _FuzzyCategory) -> Morphism:
    """Lossy bridge: a transition distribution is a fuzzy morphism only if normed."""
    if not isinstance(cat, _FuzzyCategory):
        raise ValidationError("transition distributions embed into FMT/FPT only")
    if not td.is_normed:
        raise ValidationError("transition distribution has a row with sup < 1; "
                              "it is not a fuzzy category morphism")
    rows = np.array([row.membership for row in td.rows], dtype=float)
    return cat.morphism(td.source, td.target, rows)


def morphism_to_transition(m: Morphism) -> TransitionDistribution:
    if not isinstance(m.category, _FuzzyCategory):
        raise ValidationError("only FMT/FPT morphisms convert to transition distributions")
    return TransitionDistribution.from_table(m.source, m.target, m.payload.tolist())
