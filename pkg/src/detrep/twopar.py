"""Two-parameter eigenvalue problems.

A pair of pencils (A1 + x B1 + y C1) u1 = 0, (A2 + x B2 + y C2) u2 = 0 is
coupled through the operator determinants

    delta0 = kron(B1, C2) - kron(C1, B2)
    delta1 = kron(C1, A2) - kron(A1, C2)
    delta2 = kron(A1, B2) - kron(B1, A2)

into the generalized problems delta1 w = x delta0 w, delta2 w = y delta0 w.
When delta0 is nonsingular the coupled problems share eigenvectors and
deliver all n1*n2 eigenvalue pairs; otherwise a staircase-style sequence of
SVD-based unitary compressions peels off the singular structure until a
square block with nonsingular delta0 remains.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .pencils import Pencil

logger = logging.getLogger("detrep.twopar")

DEFAULT_CLUSTER_TOL = 1e-8
# kept/discarded singular values closer than this factor flag a shaky decision
GAP_WARN_FACTOR = 10.0


class SingularDeltaError(ValueError):
    """delta0 is numerically singular; extract the regular part first."""


def _svd(mat, compute_uv=True):
    """SVD with a fallback driver: the default divide-and-conquer LAPACK
    routine occasionally fails to converge on staircase blocks."""
    try:
        return np.linalg.svd(mat, compute_uv=compute_uv)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(mat, compute_uv=compute_uv, lapack_driver="gesvd")


class StaircaseError(RuntimeError):
    """The compression sequence failed to reach a regular square block."""


@dataclass(frozen=True)
class TwoParameterProblem:
    A1: np.ndarray
    B1: np.ndarray
    C1: np.ndarray
    A2: np.ndarray
    B2: np.ndarray
    C2: np.ndarray

    def __post_init__(self):
        for name in ("A1", "B1", "C1", "A2", "B2", "C2"):
            mat = np.asarray(getattr(self, name), dtype=complex)
            object.__setattr__(self, name, mat)
        n1 = self.A1.shape[0]
        n2 = self.A2.shape[0]
        for name in ("A1", "B1", "C1"):
            if getattr(self, name).shape != (n1, n1):
                raise ValueError(f"{name} must be square of size {n1}")
        for name in ("A2", "B2", "C2"):
            if getattr(self, name).shape != (n2, n2):
                raise ValueError(f"{name} must be square of size {n2}")

    @classmethod
    def from_pencils(cls, first: Pencil, second: Pencil) -> "TwoParameterProblem":
        return cls(first.A, first.B, first.C, second.A, second.B, second.C)

    @property
    def sizes(self) -> tuple[int, int]:
        return self.A1.shape[0], self.A2.shape[0]


@dataclass(frozen=True)
class DeltaTriple:
    delta0: np.ndarray
    delta1: np.ndarray
    delta2: np.ndarray

    def __post_init__(self):
        for name in ("delta0", "delta1", "delta2"):
            mat = np.asarray(getattr(self, name), dtype=complex)
            object.__setattr__(self, name, mat)
        if not (self.delta0.shape == self.delta1.shape == self.delta2.shape):
            raise ValueError("delta matrices must share their shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.delta0.shape


@dataclass(frozen=True)
class EigenSolution:
    x: complex
    y: complex
    w: np.ndarray | None = None
    cluster_size: int = 1


@dataclass
class StaircaseStep:
    kind: str  # "columns" or "rows"
    shape: tuple[int, int]
    rank: int
    kept_sv: float
    dropped_sv: float
    ambiguous: bool


@dataclass
class StaircaseLog:
    steps: list[StaircaseStep] = field(default_factory=list)
    left: np.ndarray | None = None
    right: np.ndarray | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def compressions(self) -> int:
        return len(self.steps)


def operator_determinants(problem: TwoParameterProblem) -> DeltaTriple:
    """Kronecker assembly of the three operator determinants."""
    a1, b1, c1 = problem.A1, problem.B1, problem.C1
    a2, b2, c2 = problem.A2, problem.B2, problem.C2
    return DeltaTriple(
        np.kron(b1, c2) - np.kron(c1, b2),
        np.kron(c1, a2) - np.kron(a1, c2),
        np.kron(a1, b2) - np.kron(b1, a2),
    )


def _default_rank_tol(shape) -> float:
    # eps * dimension underestimates the noise floor once a few unitary
    # compressions have accumulated: roundoff grows with both the matrix
    # size and the number of steps, reaching ~1e-11 of the scale for
    # 500-sized blocks.  eps * dim**2 with a 1e-12 floor tracks that while
    # staying many orders below genuine structure; the decisive-gap search
    # around the cutoff absorbs the remaining slack in both directions.
    dim = max(shape)
    return max(float(np.finfo(float).eps) * dim * dim, 1e-12)


# singular values within this factor of the cutoff are "uncertain"
RANK_ZONE = 1e3
# a ratio this large between consecutive singular values is a decisive gap
RANK_GAP = 1e2


def _numerical_rank(sv: np.ndarray, cutoff: float):
    """Rank against an absolute cutoff anchored to the problem scale.

    Within the uncertain zone around the cutoff the split is moved to the
    largest gap between consecutive singular values: accumulated roundoff
    may push noise slightly above the nominal cutoff, but genuine structure
    stays orders of magnitude away from it.  A gapless zone with no certain
    values above it counts as pure noise (rank zero); otherwise the nominal
    cutoff decides and the ambiguity is flagged.
    """
    if sv.size == 0:
        return 0, 0.0, 0.0, False
    rank = int(np.sum(sv > cutoff))
    certain = int(np.sum(sv > cutoff * RANK_ZONE))
    plausible = int(np.sum(sv > cutoff / RANK_ZONE))
    if plausible > certain:
        best_rank, best_ratio = rank, 0.0
        for r in range(max(certain, 1), min(plausible, sv.size - 1) + 1):
            ratio = sv[r - 1] / sv[r] if sv[r] > 0 else np.inf
            if ratio > best_ratio:
                best_ratio, best_rank = ratio, r
        if best_ratio >= RANK_GAP:
            rank = best_rank
        elif certain == 0:
            rank = 0
    kept = float(sv[rank - 1]) if rank > 0 else 0.0
    dropped = float(sv[rank]) if rank < sv.size else 0.0
    ambiguous = rank > 0 and rank < sv.size and dropped > 0 and kept / dropped < GAP_WARN_FACTOR
    return rank, kept, dropped, ambiguous


def is_delta0_nonsingular(deltas: DeltaTriple, rank_tol: float | None = None) -> bool:
    m, k = deltas.shape
    if m != k:
        return False
    if m == 0:
        return True
    sv = _svd(deltas.delta0, compute_uv=False)
    rel = rank_tol if rank_tol is not None else _default_rank_tol(deltas.shape)
    return bool(sv[-1] > rel * sv[0])


def solve_regular(
    deltas: DeltaTriple,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    rank_tol: float | None = None,
) -> list[EigenSolution]:
    """All eigenvalue pairs of a regular coupled problem.

    x comes from the generalized problem (delta1, delta0).  Eigenvalues are
    clustered so that coinciding x values stay together; y is recovered per
    cluster from the pencil projected onto the cluster's eigenspace (for a
    singleton this collapses to the least-squares quotient of delta2 w
    against delta0 w).
    """
    if not is_delta0_nonsingular(deltas, rank_tol):
        raise SingularDeltaError("delta0 is numerically singular")
    m = deltas.shape[0]
    if m == 0:
        return []
    xs, vecs = scipy.linalg.eig(deltas.delta1, deltas.delta0)

    order = np.lexsort((xs.imag, xs.real))
    clusters = []
    current = [order[0]]
    for prev, nxt in zip(order[:-1], order[1:]):
        if abs(xs[nxt] - xs[prev]) <= cluster_tol * max(1.0, abs(xs[nxt])):
            current.append(nxt)
        else:
            clusters.append(current)
            current = [nxt]
    clusters.append(current)

    solutions = []
    for cluster in clusters:
        size = len(cluster)
        if size == 1:
            idx = cluster[0]
            w = vecs[:, idx]
            d0w = deltas.delta0 @ w
            y = np.vdot(d0w, deltas.delta2 @ w) / np.vdot(d0w, d0w)
            solutions.append(EigenSolution(complex(xs[idx]), complex(y), w, 1))
            continue
        # eigenvectors of nearly coincident eigenvalues can come back almost
        # parallel; the small right singular vectors of delta1 - x delta0
        # give a trustworthy orthonormal basis of the cluster eigenspace.
        # The projection must be two-sided (delta0 may map the eigenspace
        # into an orthogonal subspace), so the left basis spans delta0 W.
        x_rep = complex(np.mean(xs[cluster]))
        _, _, vh = _svd(deltas.delta1 - x_rep * deltas.delta0)
        basis = vh.conj().T[:, m - size :]
        left = np.linalg.qr(deltas.delta0 @ basis)[0]
        g0 = left.conj().T @ deltas.delta0 @ basis
        g2 = left.conj().T @ deltas.delta2 @ basis
        ys, small_vecs = scipy.linalg.eig(g2, g0)
        for i in range(size):
            w = basis @ small_vecs[:, i]
            norm = np.linalg.norm(w)
            if norm > 0:
                w = w / norm
            solutions.append(EigenSolution(x_rep, complex(ys[i]), w, size))
    return solutions


def extract_regular_part(
    deltas: DeltaTriple,
    rank_tol: float | None = None,
    max_compressions: int | None = None,
) -> tuple[DeltaTriple, StaircaseLog]:
    """Common regular part of a singular coupled problem.

    Alternates two SVD-based unitary compressions applied to all three
    matrices at once: while delta0 is column-rank deficient, its right null
    directions are split off and the rows annihilating the corresponding
    columns of delta1 and delta2 are kept; when delta0 has full column rank
    but extra rows, the dual row/column compression runs.  The loop stops
    at a square block with nonsingular delta0 (possibly empty).
    """
    d0 = deltas.delta0.copy()
    d1 = deltas.delta1.copy()
    d2 = deltas.delta2.copy()
    m, k = d0.shape
    left = np.eye(m, dtype=complex)
    right = np.eye(k, dtype=complex)
    log = StaircaseLog(left=left, right=right)
    budget = max_compressions if max_compressions is not None else max(m * k, 1)

    # one absolute cutoff for every rank decision: unitary transforms and
    # submatrix selection never grow the entries, so the original spectral
    # norms anchor what "negligible" means throughout
    scale = max(
        (np.linalg.norm(mat, 2) if mat.size else 0.0) for mat in (d0, d1, d2)
    )
    rel = rank_tol if rank_tol is not None else _default_rank_tol((m, k))
    cutoff = rel * max(scale, 1e-300)

    while True:
        m, k = d0.shape
        if m == 0 or k == 0:
            break
        u, sv, vh = _svd(d0)
        rank, kept, dropped, ambiguous = _numerical_rank(sv, cutoff)
        if m == k and rank == k:
            break
        if log.compressions >= budget:
            raise StaircaseError(
                f"no regular part after {log.compressions} compressions "
                f"(current block {m}x{k}, rank {rank})"
            )
        if ambiguous:
            msg = (
                f"rank decision at {m}x{k} block is ambiguous: kept singular value "
                f"{kept:.3e} vs discarded {dropped:.3e}"
            )
            log.warnings.append(msg)
            logger.warning(msg)

        v = vh.conj().T
        d0 = u.conj().T @ d0 @ v
        d1 = u.conj().T @ d1 @ v
        d2 = u.conj().T @ d2 @ v
        left = left @ u
        right = right @ v

        if rank < k:
            # columns step: drop delta0's null columns, keep the rows that
            # annihilate those columns of delta1 and delta2
            trailing = np.hstack([d1[:, rank:], d2[:, rank:]])
            u2, sv2, _ = _svd(trailing)
            rho, kept2, dropped2, ambiguous2 = _numerical_rank(sv2, cutoff)
            if ambiguous2:
                msg = (
                    f"row compression at {m}x{k} block is ambiguous: kept "
                    f"{kept2:.3e} vs discarded {dropped2:.3e}"
                )
                log.warnings.append(msg)
                logger.warning(msg)
            d0 = (u2.conj().T @ d0)[rho:, :rank]
            d1 = (u2.conj().T @ d1)[rho:, :rank]
            d2 = (u2.conj().T @ d2)[rho:, :rank]
            left = (left @ u2)[:, rho:]
            right = right[:, :rank]
            log.steps.append(StaircaseStep("columns", (m, k), rank, kept, dropped, ambiguous))
        else:
            # rows step (m > k, full column rank): the bottom rows of delta0
            # vanish; keep only the columns of delta1, delta2 they annihilate
            bottom = np.vstack([d1[rank:, :], d2[rank:, :]])
            _, sv3, vh3 = _svd(bottom)
            rho, kept3, dropped3, ambiguous3 = _numerical_rank(sv3, cutoff)
            if ambiguous3:
                msg = (
                    f"column compression at {m}x{k} block is ambiguous: kept "
                    f"{kept3:.3e} vs discarded {dropped3:.3e}"
                )
                log.warnings.append(msg)
                logger.warning(msg)
            v3 = vh3.conj().T
            d0 = (d0 @ v3)[:rank, rho:]
            d1 = (d1 @ v3)[:rank, rho:]
            d2 = (d2 @ v3)[:rank, rho:]
            left = left[:, :rank]
            right = (right @ v3)[:, rho:]
            log.steps.append(StaircaseStep("rows", (m, k), rank, kept, dropped, ambiguous))

    log.left = left
    log.right = right
    return DeltaTriple(d0, d1, d2), log


@dataclass
class TwoParameterResult:
    solutions: list[EigenSolution]
    deltas: DeltaTriple
    reduced: DeltaTriple
    staircase: StaircaseLog | None
    warnings: list[str]


def solve_full(
    problem: TwoParameterProblem,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    rank_tol: float | None = None,
) -> TwoParameterResult:
    """operator determinants -> rank test -> regular solve, with the
    staircase extraction in between when delta0 is singular."""
    deltas = operator_determinants(problem)
    if is_delta0_nonsingular(deltas, rank_tol):
        solutions = solve_regular(deltas, cluster_tol=cluster_tol, rank_tol=rank_tol)
        return TwoParameterResult(solutions, deltas, deltas, None, [])
    reduced, log = extract_regular_part(deltas, rank_tol=rank_tol)
    if reduced.shape[0] == 0:
        return TwoParameterResult([], deltas, reduced, log, list(log.warnings))
    solutions = solve_regular(reduced, cluster_tol=cluster_tol, rank_tol=rank_tol)
    return TwoParameterResult(solutions, deltas, reduced, log, list(log.warnings))


def solve(
    problem: TwoParameterProblem,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    rank_tol: float | None = None,
) -> list[EigenSolution]:
    """Eigenvalue pairs of the problem (see solve_full for diagnostics)."""
    return solve_full(problem, cluster_tol=cluster_tol, rank_tol=rank_tol).solutions
