"""Dense complex linear algebra substrate and the four norm models.

Everything downstream manipulates plain ``numpy`` arrays: operators are
square complex matrices, vectors are 1-d arrays, and Schatten-class
elements are square matrices that operators act on through their
row-major vectorization.  The four norm structures (Euclidean, weighted
sequence-p, Schatten-p, sup) are selected by a small tagged union of
frozen dataclasses so reports can record exactly which geometry was
used.

Operator p-norms for p != 2 are NP-hard in general; ``op_norm`` returns
a certified lower bound (norm-ascent with restarts, witness attached)
together with an interpolation-style upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.linalg

__all__ = [
    "Hilbert",
    "LpWeighted",
    "SchattenP",
    "SupSeq",
    "SpaceModel",
    "Spectrum",
    "OpNormResult",
    "ShapeError",
    "SingularMatrixError",
    "EigNonConvergence",
    "PowerOverflow",
    "as_matrix",
    "as_operator",
    "dual",
    "space_dim",
    "check_vector",
    "eig",
    "solve",
    "svd",
    "vec_norm",
    "op_norm",
    "mat_power_seq",
]

SOLVE_TOL = 1e-10
RCOND_MIN = 1e-14
_EPS = np.finfo(float).eps


class ShapeError(ValueError):
    """Raised when an array's shape is incompatible with the operation."""


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a linear system is singular to working tolerance."""

    def __init__(self, msg: str, cond_estimate: float = np.inf):
        super().__init__(msg)
        self.cond_estimate = cond_estimate


class EigNonConvergence(np.linalg.LinAlgError):
    """Raised when the eigensolver fails to converge (never silent)."""


class PowerOverflow(OverflowError):
    """Raised when an iterated matrix power overflows to inf/nan."""

    def __init__(self, n: int):
        super().__init__(f"matrix power overflowed to non-finite entries at n={n}")
        self.n = n


# ---------------------------------------------------------------------------
# space models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hilbert:
    """Euclidean model C^dim."""

    dim: int


@dataclass(frozen=True)
class LpWeighted:
    """Weighted sequence space: ||x|| = (sum_i w_i |x_i|^p)^(1/p), 1 < p < inf."""

    p: float
    weights: tuple = ()

    def __post_init__(self):
        if not 1.0 < self.p < np.inf:
            raise ValueError(f"p must lie in (1, inf), got {self.p}")
        w = np.asarray(self.weights, dtype=float)
        if w.size == 0 or np.any(w <= 0):
            raise ValueError("weights must be a nonempty strictly positive tuple")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))


@dataclass(frozen=True)
class SchattenP:
    """Schatten class of n x n matrices: ||x|| = (sum_i sigma_i(x)^p)^(1/p)."""

    p: float
    n: int

    def __post_init__(self):
        if not 1.0 <= self.p < np.inf:
            raise ValueError(f"p must lie in [1, inf), got {self.p}")


@dataclass(frozen=True)
class SupSeq:
    """Finite sup-norm sequence model: ||x|| = max_i |x_i|."""

    dim: int


SpaceModel = Union[Hilbert, LpWeighted, SchattenP, SupSeq]


def dual(space: SpaceModel) -> SpaceModel:
    """Dual norm model: Hilbert is self-dual, p goes to p/(p-1)."""
    if isinstance(space, Hilbert):
        return space
    if isinstance(space, LpWeighted):
        return LpWeighted(space.p / (space.p - 1.0), space.weights)
    if isinstance(space, SchattenP):
        if space.p == 1.0:
            raise ValueError("dual of Schatten-1 (operator norm) is not a SchattenP model")
        return SchattenP(space.p / (space.p - 1.0), space.n)
    raise ValueError(f"no dual model for {space!r}")


def space_dim(space: SpaceModel) -> int:
    """Ambient vector dimension operators act on (n^2 for Schatten)."""
    if isinstance(space, Hilbert):
        return space.dim
    if isinstance(space, LpWeighted):
        return len(space.weights)
    if isinstance(space, SchattenP):
        return space.n * space.n
    if isinstance(space, SupSeq):
        return space.dim
    raise ValueError(f"unknown space model {space!r}")


# ---------------------------------------------------------------------------
# array plumbing
# ---------------------------------------------------------------------------

def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce to a finite 2-d complex array (copy only if needed)."""
    M = np.asarray(a, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={M.ndim}")
    if square and M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains non-finite entries")
    return M


def as_operator(M, space: SpaceModel) -> np.ndarray:
    """Validate that M is a square operator on the given space."""
    M = as_matrix(M, square=True)
    d = space_dim(space)
    if M.shape[0] != d:
        raise ShapeError(f"operator of size {M.shape[0]} on space of dimension {d}")
    return M


def check_vector(x, space: SpaceModel) -> np.ndarray:
    """Coerce x to the space's element shape: 1-d array, or n x n for Schatten."""
    x = np.asarray(x, dtype=complex)
    if isinstance(space, SchattenP):
        n = space.n
        if x.shape == (n * n,):
            x = x.reshape(n, n)
        if x.shape != (n, n):
            raise ShapeError(f"Schatten element must be {n}x{n}, got {x.shape}")
        return x
    x = x.reshape(-1)
    if x.size != space_dim(space):
        raise ShapeError(f"vector of size {x.size} in space of dimension {space_dim(space)}")
    return x


def to_vec(x: np.ndarray) -> np.ndarray:
    """Row-major vectorization of a matrix element."""
    return np.asarray(x, dtype=complex).reshape(-1)


def from_vec(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(n, n)


# ---------------------------------------------------------------------------
# eig / solve / svd
# ---------------------------------------------------------------------------

@dataclass
class Spectrum:
    """Eigenvalues in deterministic order (real desc, then imag desc)."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    condition_estimate: float = np.nan


def eig(M, vectors: bool = False) -> Spectrum:
    """Eigenvalues (with multiplicity) of a square matrix.

    Ordering is deterministic: descending real part, ties broken by
    descending imaginary part.  Eigenvector columns follow the same
    permutation; the condition estimate is the condition number of the
    eigenvector matrix (a diagnostic for how trustworthy spectral
    computations are).
    """
    M = as_matrix(M, square=True)
    try:
        if vectors:
            w, V = scipy.linalg.eig(M)
        else:
            w = scipy.linalg.eigvals(M)
            V = None
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise EigNonConvergence(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((-w.imag, -w.real))
    w = w[order]
    cond = np.nan
    if V is not None:
        V = V[:, order]
        try:
            cond = float(np.linalg.cond(V))
        except np.linalg.LinAlgError:
            cond = np.inf
    return Spectrum(eigenvalues=w, eigenvectors=V, condition_estimate=cond)


def solve(M, B, tol: float = SOLVE_TOL, rcond_min: float = RCOND_MIN) -> np.ndarray:
    """Solve M X = B with a residual guarantee.

    Raises :class:`SingularMatrixError` when the reciprocal condition
    number falls below ``rcond_min``.  After LU solution, iterative
    refinement drives the residual to ``tol * ||B||`` whenever that is
    attainable in double precision (i.e. ``tol >= ~eps/rcond``);
    otherwise the roundoff-floor residual ``~eps * ||M|| ||X||`` is
    accepted.
    """
    M = as_matrix(M, square=True)
    B = as_matrix(B)
    if B.shape[0] != M.shape[0]:
        raise ShapeError(f"rhs rows {B.shape[0]} != system size {M.shape[0]}")
    anorm = np.linalg.norm(M, 1)
    if anorm == 0.0:
        raise SingularMatrixError("zero matrix", cond_estimate=np.inf)
    import warnings

    with warnings.catch_warnings():
        # exactly singular input surfaces as our SingularMatrixError below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M)
    gecon = scipy.linalg.get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond < rcond_min:
        raise SingularMatrixError(
            f"matrix singular to tolerance (rcond={rcond:.3e} < {rcond_min:.1e})",
            cond_estimate=1.0 / max(rcond, np.finfo(float).tiny),
        )
    X = scipy.linalg.lu_solve((lu, piv), B)
    bnorm = np.linalg.norm(B)
    target = tol * bnorm
    for _ in range(3):
        R = B - M @ X
        if np.linalg.norm(R) <= target:
            break
        X = X + scipy.linalg.lu_solve((lu, piv), R)
    resid = np.linalg.norm(B - M @ X)
    floor = 64.0 * _EPS * bnorm / max(rcond, np.finfo(float).tiny)
    if resid > max(target, floor):
        raise SingularMatrixError(
            f"residual {resid:.3e} exceeds tolerance {target:.3e}",
            cond_estimate=1.0 / rcond,
        )
    return X


def svd(M, factors: bool = False):
    """Singular values sorted descending; optionally the (U, s, Vh) factors."""
    M = as_matrix(M)
    try:
        if factors:
            U, s, Vh = scipy.linalg.svd(M)
            return s, U, Vh
        return scipy.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigNonConvergence(f"SVD did not converge: {exc}") from exc


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def vec_norm(x, space: SpaceModel) -> float:
    """Norm of an element in the given space model."""
    x = check_vector(x, space)
    if isinstance(space, Hilbert):
        return float(np.linalg.norm(x))
    if isinstance(space, LpWeighted):
        w = np.asarray(space.weights)
        return float(np.sum(w * np.abs(x) ** space.p) ** (1.0 / space.p))
    if isinstance(space, SchattenP):
        s = svd(x)
        return float(np.sum(s ** space.p) ** (1.0 / space.p))
    if isinstance(space, SupSeq):
        return float(np.max(np.abs(x))) if x.size else 0.0
    raise ValueError(f"unknown space model {space!r}")


@dataclass
class OpNormResult:
    """Operator norm estimate: exact value, or a certified [value, upper] bracket.

    ``value`` is always attained by ``witness`` (up to iteration tolerance),
    so it is a true lower bound; ``exact`` marks the models where the norm
    is computed exactly (Hilbert, Schatten-2, sup).
    """

    value: float
    upper: float
    exact: bool
    witness: Optional[np.ndarray] = field(default=None, repr=False)

    def __float__(self) -> float:
        return self.value


def _dual_exponent_map(y: np.ndarray, p: float) -> np.ndarray:
    # duality map of the p-norm: |y|^(p-1) * phase(y), zero-safe
    a = np.abs(y)
    out = np.zeros_like(y)
    nz = a > 0
    out[nz] = (a[nz] ** (p - 1.0)) * (y[nz] / a[nz])
    return out


def _schatten_dual_map(Y: np.ndarray, p: float) -> np.ndarray:
    U, s, Vh = scipy.linalg.svd(Y)
    if p == 1.0:
        return U @ Vh  # polar factor: a norming subgradient of the trace norm
    if p == np.inf:
        return np.outer(U[:, 0], Vh[0])  # top singular dyad
    return (U * (s ** (p - 1.0))) @ Vh


def _boyd_lower(A: np.ndarray, space: SpaceModel, restarts: int, seed: int):
    """Norm-ascent lower bound with witness (Boyd fixed-point iteration)."""
    p = space.p
    q = np.inf if p == 1.0 else p / (p - 1.0)
    rng = np.random.Generator(np.random.Philox(key=seed))
    d = A.shape[0]
    schatten = isinstance(space, SchattenP)

    if schatten:
        n = space.n
        norm_of = lambda v: float(np.sum(svd(v.reshape(n, n)) ** p) ** (1.0 / p))
        dual_map = lambda v: _schatten_dual_map(v.reshape(n, n), p).reshape(-1)
        dual_map_q = lambda v: _schatten_dual_map(v.reshape(n, n), q).reshape(-1)
    else:
        norm_of = lambda v: float(np.sum(np.abs(v) ** p) ** (1.0 / p))
        dual_map = lambda v: _dual_exponent_map(v, p)
        dual_map_q = lambda v: _dual_exponent_map(v, q)

    starts = [np.ones(d, dtype=complex)]
    try:
        _, _, Vh = scipy.linalg.svd(A)
        starts.append(Vh[0].conj())
    except np.linalg.LinAlgError:
        pass
    for _ in range(restarts):
        starts.append(rng.normal(size=d) + 1j * rng.normal(size=d))

    best = 0.0
    best_x = starts[0]
    for x in starts:
        nx = norm_of(x)
        if nx == 0:
            continue
        x = x / nx
        prev = -np.inf
        for _ in range(200):
            y = A @ x
            val = norm_of(y)
            if val > best:
                best, best_x = val, x.copy()
            if val <= prev * (1.0 + 1e-13) or val == 0.0:
                break
            prev = val
            z = A.conj().T @ dual_map(y)
            x = dual_map_q(z)
            nx = norm_of(x)
            if nx == 0:
                break
            x = x / nx
    return best, best_x


def op_norm(M, space: SpaceModel, restarts: int = 8, seed: int = 0) -> OpNormResult:
    """Operator norm of M acting on the space.

    Hilbert and Schatten-2: exact (largest singular value).  Sup model:
    exact (maximum absolute row sum).  Weighted-p and Schatten-p
    (p != 2): ascent lower bound with witness plus an interpolation /
    norm-equivalence upper bound, flagged approximate.
    """
    M = as_operator(M, space)
    if isinstance(space, Hilbert) or (isinstance(space, SchattenP) and space.p == 2.0):
        s = svd(M, factors=True)
        val = float(s[0][0])
        witness = s[2][0].conj()
        return OpNormResult(value=val, upper=val, exact=True, witness=witness)
    if isinstance(space, SupSeq):
        rows = np.sum(np.abs(M), axis=1)
        i = int(np.argmax(rows))
        val = float(rows[i])
        witness = np.where(np.abs(M[i]) > 0, np.conj(M[i]) / np.maximum(np.abs(M[i]), 1e-300), 1.0)
        return OpNormResult(value=val, upper=val, exact=True, witness=witness)
    if isinstance(space, LpWeighted):
        p = space.p
        w = np.asarray(space.weights)
        D = w ** (1.0 / p)
        A = (D[:, None] * M) / D[None, :]  # unweighted-p realization
        lower, xw = _boyd_lower(A, LpWeighted(p, tuple(np.ones(len(w)))), restarts, seed)
        # Riesz-Thorin bracket between the (weighted) 1- and inf-norms
        n1 = float(np.max(np.sum(np.abs(A), axis=0)))
        ninf = float(np.max(np.sum(np.abs(A), axis=1)))
        upper_rt = n1 ** (1.0 / p) * ninf ** (1.0 - 1.0 / p)
        d = A.shape[0]
        upper_eq = d ** abs(0.5 - 1.0 / p) * float(svd(A)[0])
        upper = max(lower, min(upper_rt, upper_eq))
        return OpNormResult(value=lower, upper=upper, exact=False, witness=xw / D)
    if isinstance(space, SchattenP):
        p = space.p
        lower, xw = _boyd_lower(M, space, restarts, seed)
        upper_eq = space.n ** abs(0.5 - 1.0 / p) * float(svd(M)[0])
        upper = max(lower, upper_eq)
        return OpNormResult(value=lower, upper=upper, exact=False,
                            witness=xw.reshape(space.n, space.n))
    raise ValueError(f"unknown space model {space!r}")


def mat_power_seq(T, N: int) -> list:
    """[T^0, T^1, ..., T^N] by iterated products; raises PowerOverflow."""
    T = as_matrix(T, square=True)
    if N < 0:
        raise ValueError("N must be >= 0")
    out = [np.eye(T.shape[0], dtype=complex)]
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, N + 1):
            P = out[-1] @ T
            if not np.all(np.isfinite(P)):
                raise PowerOverflow(n)
            out.append(P)
    return out
