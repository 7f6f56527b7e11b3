"""Subspaces of skew-symmetric operators: derivations, normalizers, centralizers.

All subspace computations reduce to one nullspace call on a linear
constraint system over a basis of skew matrices; spans are compared with
the Frobenius inner product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linear_core as lc
from .algebra import MetricLieAlgebra
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class SkewOperatorSubspace:
    ambient_dim: int
    basis: list  # list of (n, n) skew float arrays

    def __post_init__(self):
        n = self.ambient_dim
        for B in self.basis:
            if B.shape != (n, n):
                raise InputError("basis matrix shape mismatch")
            if np.max(np.abs(B + B.T)) > 1e-12 * max(1.0, np.max(np.abs(B))):
                raise InputError("basis matrix is not skew-symmetric")
        if self.basis:
            M = np.array([B.ravel() for B in self.basis])
            if np.linalg.matrix_rank(M, tol=lc.DEFAULT_TAU_RANK * np.linalg.norm(M)) < len(self.basis):
                raise InputError("basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> np.ndarray:
        out = np.zeros((self.ambient_dim, self.ambient_dim))
        for c, B in zip(coeffs, self.basis):
            out += c * B
        return out

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the span in vec space (Frobenius)."""
        n2 = self.ambient_dim**2
        if not self.basis:
            return np.zeros((n2, n2))
        Q, _ = np.linalg.qr(np.array([B.ravel() for B in self.basis]).T)
        return Q @ Q.T


@dataclass(frozen=True)
class DerivationAlgebra:
    parent: MetricLieAlgebra
    basis: list  # list of (d, d) float arrays

    @property
    def dim(self) -> int:
        return len(self.basis)


def skew_basis(n: int) -> list[np.ndarray]:
    """Standard basis E_ij - E_ji (i < j) of so(n)."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            B = np.zeros((n, n))
            B[i, j] = 1.0
            B[j, i] = -1.0
            out.append(B)
    return out


def span_matrices(mats, n: int, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """Orthonormal (Frobenius) spanning basis of a list of skew matrices."""
    mats = [np.asarray(M, dtype=float) for M in mats]
    if not mats:
        return SkewOperatorSubspace(n, [])
    A = np.array([M.ravel() for M in mats])
    if not np.any(A):
        return SkewOperatorSubspace(n, [])
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > tau_rank * s[0]))
    return SkewOperatorSubspace(n, [vt[i].reshape(n, n) for i in range(rank)])


def subspace_contains(
    outer: SkewOperatorSubspace, inner: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK
) -> bool:
    if inner.dim == 0:
        return True
    P = outer.projector()
    for B in inner.basis:
        v = B.ravel()
        if np.linalg.norm(v - P @ v) > tau_rank * max(1.0, np.linalg.norm(v)):
            return False
    return True


def subspaces_equal(a: SkewOperatorSubspace, b: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> bool:
    return a.dim == b.dim and subspace_contains(a, b, tau_rank) and subspace_contains(b, a, tau_rank)


def skew_derivations(L: MetricLieAlgebra, tau_rank: float = lc.DEFAULT_TAU_RANK) -> DerivationAlgebra:
    """Basis of the gram-skew derivations D[X,Y] = [DX,Y] + [X,DY].

    Gram-skewness is built into the parametrization D = G^{-1} S with S
    skew, so only the derivation identity enters the nullspace system.
    """
    d = L.dim
    if d == 0:
        return DerivationAlgebra(L, [])
    ginv = np.linalg.inv(L.gram)
    params = [ginv @ S for S in skew_basis(d)]
    c = L.structure
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    cols = []
    for M in params:
        # residual of the derivation identity on each basis pair
        r = np.einsum("ab,ijb->ija", M, c) - np.einsum("ki,kjm->ijm", M, c) - np.einsum("kj,ikm->ijm", M, c)
        cols.append(np.array([r[i, j] for (i, j) in pairs]).ravel())
    A = np.array(cols).T
    coeff_vectors = lc.nullspace(A, tau_rank)
    basis = []
    for v in coeff_vectors:
        D = np.zeros((d, d))
        for a, M in zip(v, params):
            D += a * M
        basis.append(D)
    return DerivationAlgebra(L, basis)


def _constrained_so_subspace(V: SkewOperatorSubspace, project_out_span: bool, tau_rank: float) -> SkewOperatorSubspace:
    n = V.ambient_dim
    sb = skew_basis(n)
    if V.dim == 0:
        return SkewOperatorSubspace(n, sb)
    P = V.projector() if project_out_span else None
    cols = []
    for S in sb:
        rows = []
        for B in V.basis:
            w = (S @ B - B @ S).ravel()
            if P is not None:
                w = w - P @ w
            rows.append(w)
        cols.append(np.concatenate(rows))
    A = np.array(cols).T
    coeff_vectors = lc.nullspace(A, tau_rank)
    mats = []
    for v in coeff_vectors:
        X = np.zeros((n, n))
        for a, S in zip(v, sb):
            X += a * S
        mats.append(X)
    return span_matrices(mats, n, tau_rank)


def normalizer_in_so(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """{X in so(n) : [X, V] in span(V)}."""
    return _constrained_so_subspace(V, project_out_span=True, tau_rank=tau_rank)


def centralizer_in_so(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """{X in so(n) : [X, V] = 0}."""
    return _constrained_so_subspace(V, project_out_span=False, tau_rank=tau_rank)


def is_subalgebra(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> bool:
    if V.dim <= 1:
        return True
    P = V.projector()
    for i, A in enumerate(V.basis):
        for B in V.basis[i + 1:]:
            w = (A @ B - B @ A).ravel()
            if np.linalg.norm(w - P @ w) > tau_rank * max(1.0, np.linalg.norm(w)):
                return False
    return True


def generated_subalgebra(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """Smallest bracket-closed subspace containing V, by iterated augmentation."""
    n = V.ambient_dim
    current = span_matrices(V.basis, n, tau_rank)
    cap = n * (n - 1) // 2
    for _ in range(cap + 1):
        brackets = [
            A @ B - B @ A for i, A in enumerate(current.basis) for B in current.basis[i + 1:]
        ]
        grown = span_matrices(current.basis + brackets, n, tau_rank)
        if grown.dim == current.dim:
            return current
        if grown.dim > cap:
            raise PreconditionError("closure exceeded dim so(n); inconsistent input")
        current = grown
    raise PreconditionError("closure did not stabilize")  # defensive, cannot happen


def compact_split(
    A: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK, require_subalgebra: bool = True
) -> tuple[SkewOperatorSubspace, SkewOperatorSubspace]:
    """Center and derived (semisimple) part of a subalgebra of so(n).

    For subalgebras of the compact so(n) the derived subspace is the
    semisimple part and the sum is direct.
    """
    if require_subalgebra and not is_subalgebra(A, tau_rank):
        raise PreconditionError("compact_split needs a Lie subalgebra")
    n = A.ambient_dim
    if A.dim == 0:
        empty = SkewOperatorSubspace(n, [])
        return empty, empty
    cols = []
    for B in A.basis:
        rows = [(B @ C - C @ B).ravel() for C in A.basis]
        cols.append(np.concatenate(rows))
    M = np.array(cols).T
    coeffs = lc.nullspace(M, tau_rank)
    center = span_matrices([A.element(v) for v in coeffs], n, tau_rank)
    brackets = [B @ C - C @ B for i, B in enumerate(A.basis) for C in A.basis[i + 1:]]
    der = span_matrices(brackets, n, tau_rank)
    if center.dim + der.dim != A.dim:
        raise PreconditionError("center + derived is not a direct sum decomposition")
    return center, der
