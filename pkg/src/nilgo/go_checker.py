"""Geodesic-orbit criteria: the Kowalski--Vanhecke equation, Gordon's
nilmanifold criterion, transitive normalizer conditions and the
centralizer-type structure theory.

Universal quantifiers over continua are certified by a deterministic
sweep plus seeded random sampling; verification is reported as
``verified_sampled`` while refutations carry an explicit witness (and,
when rational data is available, an exact infeasibility re-check).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import jmaps, linear_core as lc
from .algebra import MetricLieAlgebra, TwoStepSplit, split_two_step
from .errors import InputError, PreconditionError
from .families import algebra_from_jmaps
from .operator_subspaces import (
    SkewOperatorSubspace,
    centralizer_in_so,
    compact_split,
    generated_subalgebra,
    is_subalgebra,
    normalizer_in_so,
    skew_derivations,
    span_matrices,
    subspace_contains,
)

VERIFIED_SAMPLED = "verified_sampled"
VERIFIED_EXACT = "verified_exact"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    samples: int = 200
    tau_feas: float = 1e-8
    tau_refute: float = 1e-4
    cond_limit: float = 1e10
    tau_rank: float = lc.DEFAULT_TAU_RANK

    def rng(self, index: int) -> np.random.Generator:
        # per-sample generator: reproducible and parallelism-independent
        return np.random.default_rng((self.seed, index))

    def tolerances(self) -> dict:
        return {
            "tau_feas": self.tau_feas,
            "tau_refute": self.tau_refute,
            "cond_limit": self.cond_limit,
            "tau_rank": self.tau_rank,
        }


@dataclass(frozen=True)
class GOCertificate:
    status: str
    samples: int
    max_residual: float
    tolerances: dict
    seed: int
    witness: Optional[dict] = None
    exact_refutation: bool = False

    @property
    def verified(self) -> bool:
        return self.status in (VERIFIED_SAMPLED, VERIFIED_EXACT)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerances": dict(self.tolerances),
            "witness": self.witness,
            "exact_refutation": self.exact_refutation,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MetricParameter:
    """SPD Gram matrix of the inner product on the center image V."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise InputError("metric parameter must be square")
        if np.max(np.abs(q - q.T)) > 1e-12 or np.min(np.linalg.eigvalsh((q + q.T) / 2)) <= 0:
            raise InputError("metric parameter must be symmetric positive definite")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class ReductiveDecomposition:
    """g = h + p with h acting on p; only the data the KV criterion needs."""

    p_dim: int
    h_basis: list  # matrices acting on p
    structure: np.ndarray  # [p, p] with p-projection, c[i][j][k]
    gram: np.ndarray

    def ad_p(self, X: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->kj", X, self.structure)


def isometry_decomposition(L: MetricLieAlgebra, tau_rank: float = lc.DEFAULT_TAU_RANK) -> ReductiveDecomposition:
    """The full-isometry decomposition (D(n), n) of a nilmanifold."""
    ders = skew_derivations(L, tau_rank)
    return ReductiveDecomposition(L.dim, ders.basis, L.structure, L.gram)


def _effective_cond(A: np.ndarray, tau_rank: float) -> float:
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 1.0
    nz = s[s > tau_rank * s[0]]
    return float(s[0] / nz[-1])


def kv_solve(decomp: ReductiveDecomposition, X) -> tuple[np.ndarray, float]:
    """Solve ([X+Z, Y]_p, X) = 0 for Z in h, minimum-norm least squares.

    Returns coefficients of Z over h_basis and the residual norm.
    """
    X = np.asarray(X, dtype=float)
    gx = decomp.gram @ X
    if not decomp.h_basis:
        A = np.zeros((decomp.p_dim, 0))
    else:
        A = np.array([H.T @ gx for H in decomp.h_basis]).T
    b = -decomp.ad_p(X).T @ gx
    return lc.least_squares(A, b)


def _finish(inconclusive: bool, witness, max_res, config, n_random, exact_ref=False):
    if witness is not None:
        status = REFUTED
    elif inconclusive:
        status = INCONCLUSIVE
    else:
        status = VERIFIED_SAMPLED
    return GOCertificate(
        status=status,
        samples=n_random,
        max_residual=max_res,
        tolerances=config.tolerances(),
        seed=config.seed,
        witness=witness,
        exact_refutation=exact_ref,
    )


def kv_go_check(decomp: ReductiveDecomposition, config: SamplerConfig = SamplerConfig()) -> GOCertificate:
    """Sampled KV GO-criterion over basis vectors, pairwise sums, and random unit X."""
    d = decomp.p_dim
    eye = np.eye(d)
    sweep = [eye[i] for i in range(d)] + [eye[i] + eye[j] for i in range(d) for j in range(i + 1, d)]
    randoms = []
    for idx in range(config.samples):
        v = config.rng(idx).standard_normal(d)
        randoms.append(v / np.linalg.norm(v))
    max_res = 0.0
    witness = None
    inconclusive = False
    cnorm = max(float(np.max(np.abs(decomp.structure))), 1.0)
    for X in sweep + randoms:
        _, res = kv_solve(decomp, X)
        scale = cnorm * float(X @ X)
        rel = res / max(scale, 1e-300)
        max_res = max(max_res, rel)
        if rel > config.tau_feas:
            gx = decomp.gram @ X
            A = np.array([H.T @ gx for H in decomp.h_basis]).T if decomp.h_basis else np.zeros((d, 0))
            cond = _effective_cond(A, config.tau_rank)
            if rel > config.tau_refute and cond < config.cond_limit:
                witness = {"X": [float(v) for v in X], "residual": rel}
                break
            inconclusive = True
    return _finish(inconclusive, witness, max_res, config, config.samples)


# ---------------------------------------------------------------------------
# Gordon's criterion for two-step nilmanifolds
# ---------------------------------------------------------------------------


def _gordon_system(L, split, ders, X, Y):
    """Constraint matrix/vector for 'exists D in D(n): D(X)=0, D(Y)=J_X(Y)'."""
    Xa = split.z_basis.T @ X
    Ya = split.v_basis.T @ Y
    JX = jmaps.build_jmap(split, X)
    target = split.v_basis.T @ (JX @ Y)
    cols = [np.concatenate([D @ Xa, D @ Ya]) for D in ders.basis]
    A = np.array(cols).T if cols else np.zeros((2 * L.dim, 0))
    b = np.concatenate([np.zeros(L.dim), target])
    scale = np.linalg.norm(JX @ Y) + np.linalg.norm(X) * np.linalg.norm(Y)
    return A, b, scale


def _restriction_to_v(L, split, D):
    return split.v_basis @ L.gram @ D @ split.v_basis.T


def apply_center_metric(L: MetricLieAlgebra, metric: MetricParameter) -> MetricLieAlgebra:
    """Replace the inner product on the center by the SPD matrix q.

    The Lie algebra structure is unchanged; only the gram matrix is
    rebuilt so that the current orthonormal central basis has gram q.
    """
    from .algebra import make_algebra

    split = split_two_step(L)
    q = metric.q
    if q.shape != (split.m, split.m):
        raise InputError(f"metric must be {split.m} x {split.m}")
    zb = split.z_basis
    W = L.gram @ zb.T  # functionals of the orthonormal central basis
    gram = L.gram + W @ (q - np.eye(split.m)) @ W.T
    return make_algebra(L.structure, gram, exact=False)


def gordon_go_check(
    L: MetricLieAlgebra,
    restrict_to: Optional[SkewOperatorSubspace] = None,
    metric: Optional[MetricParameter] = None,
    config: SamplerConfig = SamplerConfig(),
) -> GOCertificate:
    """Gordon's criterion: for X in z, Y in v find D in D(n) with
    D(X) = 0 and D(Y) = J_X(Y); sampled over a sweep plus random pairs."""
    if metric is not None:
        L = apply_center_metric(L, metric)
    split = split_two_step(L, config.tau_rank)
    if not split.derived_equals_center:
        raise PreconditionError("[n, n] = z is required (strip the flat factor first)")
    ders = skew_derivations(L, config.tau_rank)
    m, n = split.m, split.n
    extra = None
    if restrict_to is not None:
        if restrict_to.ambient_dim != n:
            raise InputError("restrict_to must act on v")
        P = restrict_to.projector()
        rows = []
        for D in ders.basis:
            phi = _restriction_to_v(L, split, D).ravel()
            rows.append(phi - P @ phi)
        extra = np.array(rows).T  # (n^2, n_ders): must vanish on the solution

    eyem, eyen = np.eye(m), np.eye(n)
    xs = [eyem[i] for i in range(m)] + [eyem[i] + eyem[j] for i in range(m) for j in range(i + 1, m)]
    ys = [eyen[a] for a in range(n)] + [eyen[a] + eyen[b] for a in range(n) for b in range(a + 1, n)]
    pairs = [(X, Y) for X in xs for Y in ys]
    for idx in range(config.samples):
        rng = config.rng(idx)
        X = rng.standard_normal(m)
        Y = rng.standard_normal(n)
        pairs.append((X / np.linalg.norm(X), Y / np.linalg.norm(Y)))

    max_res = 0.0
    witness = None
    inconclusive = False
    exact_ref = False
    n_sweep = len(xs) * len(ys)
    for idx, (X, Y) in enumerate(pairs):
        A, b, scale = _gordon_system(L, split, ders, X, Y)
        if extra is not None:
            A = np.vstack([A, extra])
            b = np.concatenate([b, np.zeros(extra.shape[0])])
        _, res = lc.least_squares(A, b)
        rel = res / max(scale, 1e-300)
        max_res = max(max_res, rel)
        if rel > config.tau_feas:
            cond = _effective_cond(A, config.tau_rank)
            if rel > config.tau_refute and cond < config.cond_limit:
                witness = {
                    "X": [float(v) for v in X],
                    "Y": [float(v) for v in Y],
                    "residual": rel,
                    "from_sweep": idx < n_sweep,
                }
                if idx < n_sweep and L.is_exact and split.is_exact and restrict_to is None:
                    exact_ref = gordon_refute_exact(L, split, X, Y, config.tau_rank)
                break
            inconclusive = True
    return _finish(inconclusive, witness, max_res, config, config.samples, exact_ref)


def gordon_refute_exact(L: MetricLieAlgebra, split: TwoStepSplit, X, Y, tau_rank: float = lc.DEFAULT_TAU_RANK) -> bool:
    """Exact infeasibility check of the Gordon system for rational X, Y.

    Builds the combined linear system {skew derivation identity,
    D(X) = 0, D(Y) = J_X(Y)} over the rationals and tests whether the
    augmented rank exceeds the plain rank (Farkas-style refutation).
    """
    if not (L.is_exact and split.is_exact):
        raise PreconditionError("exact re-check needs rational data")
    d = L.dim
    Xq = [Fraction(v).limit_denominator(10**6) for v in X]
    Yq = [Fraction(v).limit_denominator(10**6) for v in Y]
    if any(abs(float(a) - float(b)) > 1e-12 for a, b in zip(Xq, list(X))) or any(
        abs(float(a) - float(b)) > 1e-12 for a, b in zip(Yq, list(Y))
    ):
        raise PreconditionError("witness is not rational")
    ginv = lc.rat_inv(L.gram_exact)
    skew_params = []
    for i in range(d):
        for j in range(i + 1, d):
            S = [[Fraction(0)] * d for _ in range(d)]
            S[i][j] = Fraction(1)
            S[j][i] = Fraction(-1)
            D = [[sum(ginv[a][k] * S[k][b] for k in range(d)) for b in range(d)] for a in range(d)]
            skew_params.append(D)
    c = L.structure_exact
    rows = []
    # derivation identity on each basis pair, one row per (pair, coordinate)
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                row = []
                for D in skew_params:
                    v = sum(D[k][mm] * c[i][j][mm] for mm in range(d))
                    v -= sum(D[mm][i] * c[mm][j][k] for mm in range(d))
                    v -= sum(D[mm][j] * c[i][mm][k] for mm in range(d))
                    row.append(v)
                row.append(Fraction(0))
                rows.append(row)
    # witness evaluation rows
    z_idx = [next(i for i, x in enumerate(r) if x != 0) for r in split.z_basis_exact]
    v_idx = [next(i for i, x in enumerate(r) if x != 0) for r in split.v_basis_exact]
    Xa = [Fraction(0)] * d
    for coord, zi in zip(Xq, z_idx):
        Xa[zi] = coord
    Ya = [Fraction(0)] * d
    for coord, vi in zip(Yq, v_idx):
        Ya[vi] = coord
    fam = jmaps.split_family(split)
    n = split.n
    J = [[sum(Xq[i] * fam.generators_exact[i][a][b] for i in range(split.m)) for b in range(n)] for a in range(n)]
    JY = [sum(J[a][b] * Yq[b] for b in range(n)) for a in range(n)]
    target = [Fraction(0)] * d
    for a, vi in enumerate(v_idx):
        target[vi] = JY[a]
    for vec, rhs_vec in ((Xa, [Fraction(0)] * d), (Ya, target)):
        for k in range(d):
            row = [sum(D[k][mm] * vec[mm] for mm in range(d)) for D in skew_params]
            row.append(rhs_vec[k])
            rows.append(row)
    pivots = _bareiss_pivots(rows)
    ncols = len(skew_params)
    return ncols in pivots  # pivot in the rhs column <=> infeasible


def _bareiss_pivots(M) -> list[int]:
    rows = []
    import math as _math

    for row in M:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // _math.gcd(den, x.denominator)
        rows.append([int(x * den) for x in fr])
    m = len(rows)
    if m == 0:
        return []
    ncols = len(rows[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        pivot_row = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            ri = rows[i]
            if any(ri[cc] != 0 for cc in range(c, ncols)):
                rr = rows[r]
                f = ri[c]
                for cc in range(c, ncols):
                    ri[cc] = (piv * ri[cc] - f * rr[cc]) // prev
        prev = piv
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


# ---------------------------------------------------------------------------
# transitive normalizer condition
# ---------------------------------------------------------------------------


def _tnc_solve(V, nprime_mats, Z_mat, Y, tau_rank):
    """Restrict Nprime to the commutant of Z, then least-squares on X(Y) = Z(Y)."""
    if nprime_mats:
        K = np.array([(N @ Z_mat - Z_mat @ N).ravel() for N in nprime_mats]).T
        # suppress roundoff from the matrix products so that exactly
        # commuting elements are not ranked by noise singular values
        kscale = max(np.linalg.norm(N) * np.linalg.norm(Z_mat) for N in nprime_mats)
        K[np.abs(K) <= 1e-12 * max(kscale, 1.0)] = 0.0
        combos = lc.nullspace(K, tau_rank)
    else:
        combos = []
    target = Z_mat @ Y
    if not combos:
        A = np.zeros((len(Y), 0))
    else:
        A = np.array([sum(c * N for c, N in zip(combo, nprime_mats)) @ Y for combo in combos]).T
    coeffs, res = lc.least_squares(A, target)
    X_mat = np.zeros_like(Z_mat)
    for c, combo in zip(coeffs, combos):
        X_mat += c * sum(cc * N for cc, N in zip(combo, nprime_mats))
    return X_mat, res, A


def tnc_check(
    V: SkewOperatorSubspace,
    Nprime: SkewOperatorSubspace,
    config: SamplerConfig = SamplerConfig(),
) -> GOCertificate:
    """Transitive normalizer condition of V with respect to Nprime.

    For sampled Y in R^n and Z in V, find X in Nprime with [X, Z] = 0 and
    X(Y) = Z(Y).  Success is probabilistic; refutation is a concrete
    infeasible sample.
    """
    if not subspace_contains(normalizer_in_so(V, config.tau_rank), Nprime, 1e-7):
        raise InputError("Nprime is not contained in the normalizer of V")
    n = V.ambient_dim
    eyen = np.eye(n)
    eyem = np.eye(V.dim)
    zs = [eyem[i] for i in range(V.dim)] + [
        eyem[i] + eyem[j] for i in range(V.dim) for j in range(i + 1, V.dim)
    ]
    ys = [eyen[a] for a in range(n)] + [eyen[a] + eyen[b] for a in range(n) for b in range(a + 1, n)]
    pairs = [(z, y) for z in zs for y in ys]
    for idx in range(config.samples):
        rng = config.rng(idx)
        z = rng.standard_normal(V.dim)
        y = rng.standard_normal(n)
        pairs.append((z / np.linalg.norm(z), y / np.linalg.norm(y)))
    max_res = 0.0
    witness = None
    inconclusive = False
    for idx, (zc, Y) in enumerate(pairs):
        Z_mat = V.element(zc)
        _, res, A = _tnc_solve(V, Nprime.basis, Z_mat, Y, config.tau_rank)
        scale = np.linalg.norm(Z_mat @ Y) + np.linalg.norm(Z_mat) * np.linalg.norm(Y)
        rel = res / max(scale, 1e-300)
        max_res = max(max_res, rel)
        if rel > config.tau_feas:
            cond = _effective_cond(A, config.tau_rank)
            if rel > config.tau_refute and cond < config.cond_limit:
                witness = {"Z": [float(v) for v in zc], "Y": [float(v) for v in Y], "residual": rel}
                break
            inconclusive = True
    return _finish(inconclusive, witness, max_res, config, config.samples)


def normalizer_resolve_residual(V: SkewOperatorSubspace, config: SamplerConfig = SamplerConfig()) -> float:
    """Re-solve the TNC samples against the full normalizer of V and
    report the worst relative centralizer residual max_i |[X, V_i]| of
    the minimum-norm solutions found."""
    Nprime = normalizer_in_so(V, config.tau_rank)
    n = V.ambient_dim
    eyen = np.eye(n)
    eyem = np.eye(V.dim)
    pairs = [(eyem[i], eyen[a]) for i in range(V.dim) for a in range(n)]
    for idx in range(config.samples):
        rng = config.rng(idx)
        z = rng.standard_normal(V.dim)
        y = rng.standard_normal(n)
        pairs.append((z / np.linalg.norm(z), y / np.linalg.norm(y)))
    worst = 0.0
    for zc, Y in pairs:
        Z_mat = V.element(zc)
        X_mat, res, _ = _tnc_solve(V, Nprime.basis, Z_mat, Y, config.tau_rank)
        scale = max(np.linalg.norm(X_mat) * max(np.linalg.norm(B) for B in V.basis), 1.0)
        for B in V.basis:
            worst = max(worst, float(np.max(np.abs(X_mat @ B - B @ X_mat))) / scale)
    return worst


def centralizer_type_check(V: SkewOperatorSubspace, config: SamplerConfig = SamplerConfig()) -> GOCertificate:
    """TNC with Nprime = the centralizer of V in so(n)."""
    return tnc_check(V, centralizer_in_so(V, config.tau_rank), config)


def naturally_reductive_flag(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> bool:
    """V generates a naturally reductive GO-nilmanifold iff V is a subalgebra."""
    return is_subalgebra(V, tau_rank)


def build_nilalgebra_from_subspace(V, q=None) -> MetricLieAlgebra:
    """Metric algebra on V + R^n with ([X, Y], Z)_1 = (Z(X), Y)_2.

    ``V`` may be a SkewOperatorSubspace (float path) or a list of exact
    rational matrices (nested lists); ``q`` is the inner product on V.
    """
    if isinstance(V, SkewOperatorSubspace):
        gens = [B.tolist() for B in V.basis]
    else:
        gens = V
    return algebra_from_jmaps(gens, q)


# ---------------------------------------------------------------------------
# centralizer-type structure operations
# ---------------------------------------------------------------------------


def semisimple_projection(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """Project V onto the semisimple part of the subalgebra it generates."""
    A = generated_subalgebra(V, tau_rank)
    if A.dim == 0:
        return SkewOperatorSubspace(V.ambient_dim, [])
    center_part, derived_part = compact_split(A, tau_rank)
    basis_mats = center_part.basis + derived_part.basis
    M = np.array([B.ravel() for B in basis_mats]).T
    projected = []
    for B in V.basis:
        coords, res = lc.least_squares(M, B.ravel())
        if res > 1e-8 * max(1.0, np.linalg.norm(B)):
            raise PreconditionError("V does not lie in the generated subalgebra")
        s = np.zeros((V.ambient_dim, V.ambient_dim))
        for c, D in zip(coords[center_part.dim:], derived_part.basis):
            s += c * D
        projected.append(s)
    return span_matrices(projected, V.ambient_dim, tau_rank)


def center_of_centralizer(V: SkewOperatorSubspace, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    Zc = centralizer_in_so(V, tau_rank)
    return compact_split(Zc, tau_rank)[0]


def center_shift(V: SkewOperatorSubspace, psi: list, tau_rank: float = lc.DEFAULT_TAU_RANK) -> SkewOperatorSubspace:
    """The shifted subspace {Z + psi(Z)}; psi given by images of the V basis.

    Requires V inside the semisimple part of its generated subalgebra and
    psi mapping into the center of the centralizer.
    """
    if len(psi) != V.dim:
        raise InputError("psi must give one image per basis element of V")
    A = generated_subalgebra(V, tau_rank)
    _, derived_part = compact_split(A, tau_rank)
    if not subspace_contains(derived_part, V, 1e-7):
        raise PreconditionError("V must lie in the semisimple part of its generated subalgebra")
    cz = center_of_centralizer(V, tau_rank)
    P = cz.projector()
    for img in psi:
        w = np.asarray(img, dtype=float).ravel()
        if np.linalg.norm(w - P @ w) > 1e-8 * max(1.0, np.linalg.norm(w)):
            raise InputError("psi image lies outside the center of the centralizer")
    shifted = [B + np.asarray(img, dtype=float) for B, img in zip(V.basis, psi)]
    return span_matrices(shifted, V.ambient_dim, tau_rank)


# ---------------------------------------------------------------------------
# spectral lemmas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenComponent:
    eigenvalue: float  # eigenvalue of U^2 (non-positive)
    in_subspace: bool
    v2_residual: float


@dataclass(frozen=True)
class CommonEigenspaceReport:
    subspace_dim: int
    invariant_under_u: bool
    invariant_under_v: bool
    components: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.invariant_under_u
            and self.invariant_under_v
            and all(c.in_subspace and c.v2_residual <= 1e-8 for c in self.components)
        )


def common_eigenspace_check(U, V, Z=None, tau_rank: float = lc.DEFAULT_TAU_RANK) -> CommonEigenspaceReport:
    """Analyze L = {Z : U(Z) = V(Z)} for commuting skew U, V.

    Verifies invariance of L under both operators and, if Z in L is
    supplied, that its U^2-eigencomponents stay in L and are
    V^2-eigenvectors with the same eigenvalue.
    """
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    scale = max(np.linalg.norm(U) * np.linalg.norm(V), 1.0)
    if np.max(np.abs(U @ V - V @ U)) > 1e-10 * scale:
        raise PreconditionError("U and V must commute")
    basis = lc.nullspace(U - V, tau_rank)
    if basis:
        B = np.array(basis)
        P = B.T @ B  # orthogonal projector onto L
    else:
        B = np.zeros((0, U.shape[0]))
        P = np.zeros(U.shape)

    def invariant(W):
        for v in basis:
            w = W @ v
            if np.linalg.norm(w - P @ w) > 1e-8 * max(1.0, np.linalg.norm(w)):
                return False
        return True

    report_components = []
    if Z is not None:
        Z = np.asarray(Z, dtype=float)
        if np.linalg.norm(Z - P @ Z) > 1e-8 * max(1.0, np.linalg.norm(Z)):
            raise PreconditionError("Z must lie in the common subspace L")
        U2 = U @ U
        w, E = np.linalg.eigh((U2 + U2.T) / 2)
        # cluster eigenvalues and project Z on each eigenspace
        order = np.argsort(w)
        w, E = w[order], E[:, order]
        i = 0
        tol = 1e-8 * max(1.0, abs(w).max())
        while i < len(w):
            j = i
            while j + 1 < len(w) and abs(w[j + 1] - w[i]) <= tol:
                j += 1
            Evs = E[:, i: j + 1]
            Zi = Evs @ (Evs.T @ Z)
            if np.linalg.norm(Zi) > 1e-10 * max(1.0, np.linalg.norm(Z)):
                in_l = np.linalg.norm(Zi - P @ Zi) <= 1e-8 * np.linalg.norm(Zi)
                v2r = float(
                    np.linalg.norm(V @ (V @ Zi) - w[i] * Zi) / max(np.linalg.norm(Zi), 1e-300)
                ) / max(1.0, np.linalg.norm(V) ** 2)
                report_components.append(EigenComponent(float(w[i]), bool(in_l), v2r))
            i = j + 1
    return CommonEigenspaceReport(len(basis), invariant(U), invariant(V), report_components)


def commuting_triple_check(U, V, W, tol: float = 1e-9) -> bool:
    """Under [U,V]=[U,W]=0 and a simple-spectrum condition on U, test [V,W]=0.

    Preconditions (checked): U has no repeated nonzero eigenvalue pair and
    a zero eigenvalue of multiplicity at most 2.
    """
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    su = max(np.linalg.norm(U), 1.0)
    if np.max(np.abs(U @ V - V @ U)) > 1e-10 * su * max(np.linalg.norm(V), 1.0):
        raise PreconditionError("[U, V] != 0")
    if np.max(np.abs(U @ W - W @ U)) > 1e-10 * su * max(np.linalg.norm(W), 1.0):
        raise PreconditionError("[U, W] != 0")
    U2 = U @ U
    w = np.linalg.eigvalsh((U2 + U2.T) / 2)
    tol_sep = 1e-8 * max(1.0, abs(w).max())
    clusters: list[list[float]] = []
    for val in sorted(w):
        if clusters and abs(val - clusters[-1][0]) <= tol_sep:
            clusters[-1].append(val)
        else:
            clusters.append([val])
    for cl in clusters:
        if abs(cl[0]) <= tol_sep:
            if len(cl) > 2:
                raise PreconditionError("zero eigenvalue of multiplicity > 2")
        elif len(cl) != 2:
            raise PreconditionError("repeated nonzero eigenvalue pair")
    scale = max(np.linalg.norm(V) * np.linalg.norm(W), 1.0)
    return bool(np.max(np.abs(V @ W - W @ V)) <= tol * scale)


def riehm_predict(m: int, n: int, isotypic: Optional[str] = None) -> bool:
    """Riehm's GO classification of H-type groups by (m, n) and isotypy."""
    if m in (1, 2, 3):
        return True
    if m in (5, 6):
        return n == 8
    if m == 7:
        return n in (8, 16, 24) and isotypic in ("plus_id", "minus_id")
    return False
