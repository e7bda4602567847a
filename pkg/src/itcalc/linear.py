"""Linear stochastic ITs: gain/noise pairs over finite-dimensional real spaces.

A morphism is a pair <A, Sigma> acting as x |-> Ax + noise with noise
covariance Sigma.  Composition propagates noise linearly, the product stacks
gains with block-diagonal noise, and conditionals of joint covariances use
Moore-Penrose pseudoinverses.  Informativeness classes are pairs <Q, S>: the
observable subspace and the attainable noise operator on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SpaceMismatchError, ValidationError
from .kernel import Accuracy, Category, Morphism

SYM_TOL = 1e-9
PSD_TOL = 1e-9
PINV_CUTOFF = 1e-10


@dataclass(frozen=True)
class VectorSpace:
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValidationError("dimension must be nonnegative")

    @property
    def name(self) -> str:
        return f"R^{self.dim}"


@dataclass(frozen=True)
class ProductVectorSpace(VectorSpace):
    left: VectorSpace = field(default=None)
    right: VectorSpace = field(default=None)


@dataclass(frozen=True)
class LinearPayload:
    """Signal gain (target-dim x source-dim) and noise covariance."""

    gain: np.ndarray
    noise: np.ndarray


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.T) / 2.0


def _min_eig(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.min(np.linalg.eigvalsh(_symmetrize(matrix))))


def pinv(matrix: np.ndarray) -> np.ndarray:
    """Pseudoinverse with a reproducible singular-value cutoff."""
    if matrix.size == 0:
        return matrix.T.copy()
    return np.linalg.pinv(matrix, rcond=PINV_CUTOFF)


class LinearCategory(Category):
    tag = "LINEAR"
    tolerance = 1e-9

    def product_space(self, left, right):
        return ProductVectorSpace(left.dim + right.dim, left=left, right=right)

    def split_product(self, space):
        if not isinstance(space, ProductVectorSpace):
            raise SpaceMismatchError(f"{space!r} is not a registered product space")
        return space.left, space.right

    def terminal_space(self):
        return VectorSpace(0)

    def morphism(self, source, target, payload, normed: bool = True) -> Morphism:
        if not isinstance(payload, LinearPayload):
            payload = LinearPayload(np.asarray(payload[0], float), np.asarray(payload[1], float))
        gain = np.asarray(payload.gain, dtype=float).reshape(target.dim, source.dim)
        noise = np.asarray(payload.noise, dtype=float).reshape(target.dim, target.dim)
        if np.max(np.abs(noise - noise.T), initial=0.0) > SYM_TOL:
            raise ValidationError("noise covariance must be symmetric")
        noise = _symmetrize(noise)
        if _min_eig(noise) < -PSD_TOL:
            raise ValidationError("noise covariance must be positive semidefinite")
        gain = gain.copy()
        gain.flags.writeable = False
        noise.flags.writeable = False
        return Morphism(self, source, target, LinearPayload(gain, noise))

    def linear(self, source, target, gain, noise) -> Morphism:
        return self.morphism(source, target, LinearPayload(np.asarray(gain, float),
                                                           np.asarray(noise, float)))

    def identity(self, space) -> Morphism:
        n = space.dim
        return self.linear(space, space, np.eye(n), np.zeros((n, n)))

    def terminal_morphism(self, space) -> Morphism:
        return self.linear(space, self.terminal_space(),
                           np.zeros((0, space.dim)), np.zeros((0, 0)))

    def projection_first(self, product) -> Morphism:
        left, right = self.split_product(product)
        gain = np.hstack([np.eye(left.dim), np.zeros((left.dim, right.dim))])
        return self.linear(product, left, gain, np.zeros((left.dim, left.dim)))

    def projection_second(self, product) -> Morphism:
        left, right = self.split_product(product)
        gain = np.hstack([np.zeros((right.dim, left.dim)), np.eye(right.dim)])
        return self.linear(product, right, gain, np.zeros((right.dim, right.dim)))

    def _compose_payload(self, b, a):
        gain = b.payload.gain @ a.payload.gain
        noise = b.payload.gain @ a.payload.noise @ b.payload.gain.T + b.payload.noise
        return LinearPayload(gain, _symmetrize(noise))

    def _product_payload(self, a, b):
        gain = np.vstack([a.payload.gain, b.payload.gain])
        ka, kb = a.target.dim, b.target.dim
        noise = np.zeros((ka + kb, ka + kb))
        noise[:ka, :ka] = a.payload.noise
        noise[ka:, ka:] = b.payload.noise
        return LinearPayload(gain, noise)

    def payload_equal(self, a, b):
        return (np.allclose(a.payload.gain, b.payload.gain, rtol=0.0, atol=self.tolerance)
                and np.allclose(a.payload.noise, b.payload.noise, rtol=0.0, atol=self.tolerance))

    def payload_distance(self, a, b):
        return max(float(np.max(np.abs(a.payload.gain - b.payload.gain), initial=0.0)),
                   float(np.max(np.abs(a.payload.noise - b.payload.noise), initial=0.0)))

    def accuracy_compare(self, a, b):
        if not np.allclose(a.payload.gain, b.payload.gain, rtol=0.0, atol=self.tolerance):
            return Accuracy.INCOMPARABLE
        diff = b.payload.noise - a.payload.noise
        le = _min_eig(diff) >= -PSD_TOL
        ge = _min_eig(-diff) >= -PSD_TOL
        if le and ge:
            return Accuracy.EQUAL
        if le:
            return Accuracy.MORE_ACCURATE
        if ge:
            return Accuracy.LESS_ACCURATE
        return Accuracy.INCOMPARABLE

    def is_deterministic(self, a):
        return bool(np.all(a.payload.noise == 0.0))

    def conditional_pair(self, joint, variant: str = "canonical"):
        if variant not in ("canonical", "normed"):
            raise ValidationError(f"unknown conditional variant {variant!r}")
        blocks = joint_covariance(joint)
        left, right = self.split_product(joint.target)
        a_gain = blocks.sigma_gf @ pinv(blocks.sigma_f)
        a_noise = blocks.sigma_g - blocks.sigma_gf @ pinv(blocks.sigma_f) @ blocks.sigma_fg
        b_gain = blocks.sigma_fg @ pinv(blocks.sigma_g)
        b_noise = blocks.sigma_f - blocks.sigma_fg @ pinv(blocks.sigma_g) @ blocks.sigma_gf
        a = self.linear(left, right, a_gain, _clip_psd(a_noise))
        b = self.linear(right, left, b_gain, _clip_psd(b_noise))
        return a, b

    def random_space(self, rng, max_size: int = 4, name: Optional[str] = None):
        return VectorSpace(int(rng.integers(1, max_size + 1)))

    def random_morphism(self, rng, source, target):
        gain = rng.normal(size=(target.dim, source.dim))
        rank = int(rng.integers(0, target.dim + 2))
        factor = rng.normal(size=(target.dim, rank))
        return self.linear(source, target, gain, factor @ factor.T)

    def random_deterministic(self, rng, source, target):
        gain = rng.normal(size=(target.dim, source.dim))
        return self.linear(source, target, gain, np.zeros((target.dim, target.dim)))


LINEAR = LinearCategory()


def _clip_psd(matrix: np.ndarray) -> np.ndarray:
    """Clamp tiny negative eigenvalues introduced by pseudoinverse arithmetic."""
    matrix = _symmetrize(matrix)
    if matrix.size == 0:
        return matrix
    values, vectors = np.linalg.eigh(matrix)
    if values.size and values[0] < 0.0:
        if values[0] < -PSD_TOL:
            raise ValidationError("conditional noise is not positive semidefinite")
        values = np.clip(values, 0.0, None)
        matrix = _symmetrize(vectors @ np.diag(values) @ vectors.T)
    return matrix


@dataclass(frozen=True)
class JointCovariance:
    """Block decomposition of a joint distribution's covariance."""

    sigma_f: np.ndarray
    sigma_fg: np.ndarray
    sigma_gf: np.ndarray
    sigma_g: np.ndarray

    def __post_init__(self):
        if np.max(np.abs(self.sigma_gf - self.sigma_fg.T), initial=0.0) > SYM_TOL:
            raise ValidationError("cross blocks must be mutual transposes")
        if _min_eig(self.full()) < -PSD_TOL:
            raise ValidationError("joint covariance must be positive semidefinite")

    def full(self) -> np.ndarray:
        top = np.hstack([self.sigma_f, self.sigma_fg])
        bottom = np.hstack([self.sigma_gf, self.sigma_g])
        return np.vstack([top, bottom])


def joint_covariance(joint: Morphism) -> JointCovariance:
    """Slice the covariance blocks out of a joint distribution morphism."""
    left, right = LINEAR.split_product(joint.target)
    m = left.dim
    sigma = joint.payload.noise
    return JointCovariance(sigma[:m, :m], sigma[:m, m:], sigma[m:, :m], sigma[m:, m:])


def joint_from_covariance(blocks: JointCovariance) -> Morphism:
    left = VectorSpace(blocks.sigma_f.shape[0])
    right = VectorSpace(blocks.sigma_g.shape[0])
    prod = LINEAR.product_space(left, right)
    full = blocks.full()
    return LINEAR.linear(LINEAR.terminal_space(), prod,
                         np.zeros((prod.dim, 0)), full)


@dataclass(frozen=True)
class LinearInfoClass:
    """Informativeness class <Q, S>: observable subspace and noise on it.

    ``basis`` holds orthonormal columns spanning Q inside the source space;
    ``noise`` is the attainable noise covariance expressed in those
    coordinates.
    """

    basis: np.ndarray
    noise: np.ndarray


def reduction(m: Morphism) -> tuple:
    """Reduce a linear IT to (basis of Q, recovery matrix, noise on Q).

    Q is the row space of the gain.  The recovery matrix C is the
    minimum-variance linear estimator of the Q-coordinates from the
    observation (computed by unified least squares, which remains valid for
    singular noise), and S = C Sigma C^T is its noise covariance.
    """
    gain = m.payload.gain
    noise = m.payload.noise
    n = m.source.dim
    if gain.size == 0:
        rank = 0
        basis = np.zeros((n, 0))
    else:
        u, s, vt = np.linalg.svd(gain, full_matrices=False)
        cutoff = PINV_CUTOFF * (s[0] if s.size else 0.0)
        rank = int(np.sum(s > cutoff))
        basis = vt[:rank].T
    reduced_gain = gain @ basis if rank else np.zeros((gain.shape[0], 0))
    w = noise + reduced_gain @ reduced_gain.T
    normal = reduced_gain.T @ pinv(w) @ reduced_gain
    recovery = pinv(normal) @ reduced_gain.T @ pinv(w)
    s_matrix = _symmetrize(recovery @ noise @ recovery.T)
    return basis, recovery, s_matrix


def info_class(m: Morphism) -> LinearInfoClass:
    basis, _, s_matrix = reduction(m)
    return LinearInfoClass(basis, s_matrix)


def class_geq(first: LinearInfoClass, second: LinearInfoClass,
              tol: float = 1e-9) -> bool:
    """Class order: Q1 contains Q2 and the restriction of S1 to Q2 is <= S2."""
    v1, s1 = first.basis, first.noise
    v2, s2 = second.basis, second.noise
    if v2.shape[1] == 0:
        return True
    outside = v2 - v1 @ (v1.T @ v2)
    if np.max(np.abs(outside), initial=0.0) > tol:
        return False
    restriction = (v2.T @ v1) @ s1 @ (v1.T @ v2)
    return _min_eig(s2 - restriction) >= -tol


def class_equivalent(first: LinearInfoClass, second: LinearInfoClass,
                     tol: float = 1e-9) -> bool:
    return class_geq(first, second, tol) and class_geq(second, first, tol)


def informativeness_witness(a: Morphism, b: Morphism) -> Optional[Morphism]:
    """A post-processing c with c∘a = b (up to tolerance) when a >= b, else None."""
    basis, recovery, s_matrix = reduction(a)
    if not class_geq(LinearInfoClass(basis, s_matrix), info_class(b)):
        return None
    gain = b.payload.gain @ basis @ recovery
    residual_noise = b.payload.noise - gain @ a.payload.noise @ gain.T
    return LINEAR.linear(a.target, b.target, gain, _clip_psd(residual_noise))
