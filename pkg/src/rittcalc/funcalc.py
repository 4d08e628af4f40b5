"""Holomorphic functional calculus on Stolz domains, at matrix scale.

phi(T) is computed three ways and the routes are cross-checkable:

* direct Horner evaluation for polynomials (and rational functions),
* the counterclockwise boundary integral
  (1 / 2 pi i) * integral of phi(z) R(z, T) dz over the Stolz boundary
  at an angle beta between the spectral type of T and the target angle,
* eigendecomposition for diagonalizable T (oracle for fractional powers).

The contour route needs phi to vanish at the vertex when 1 belongs to
the spectrum; that is carried by an explicit growth certificate
|phi(z)| <= c |1 - z|^s.  Polynomials vanishing at 1 get a rigorous
certificate automatically (synthetic division, coefficient-sum bound).

A sectorial route for A = I - T over a truncated sector boundary
realizes the transfer identity f(A) = phi(T), phi(z) = f(1 - z), as two
independent quadratures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import numlin, ritt, stolz
from .numlin import SpaceModel, as_matrix
from .stolz import MeshSpec, NOT_STOLZ

__all__ = [
    "HolomorphicFn",
    "CalcReport",
    "AdmissibilityError",
    "ContourSpectrumError",
    "poly",
    "rational",
    "from_callable",
    "frac_power_fn",
    "named_function",
    "eval_poly",
    "ContourCalculus",
    "eval_contour",
    "frac_power",
    "frac_power_eig",
    "scaled_calculus",
    "scaling_convergence",
    "transfer_check",
    "hinf_norm",
    "hinf_vector_norm",
    "hinf_matrix_norm",
    "calculus_constant",
    "evenodd_split",
    "nevanlinna_diag",
]

QUAD_TARGET_REL = 1e-8
REFINE_ROUNDS = 4
VERTEX_CLUSTER = 1e-6
MIN_CERT_S = 0.5


class AdmissibilityError(ValueError):
    """phi cannot be integrated against this operator's resolvent."""


class ContourSpectrumError(ValueError):
    """The requested contour collides with (or encloses part of) the spectrum."""


@dataclass
class HolomorphicFn:
    """A scalar holomorphic function with optional structure.

    ``kind`` is one of ``polynomial`` (ascending ``coeffs``),
    ``rational`` (``coeffs``/``den_coeffs``) or ``closure``.  The
    ``h0_certificate`` (c, s) asserts |phi(z)| <= c |1 - z|^s on the
    Stolz domains in use, which is what makes the boundary integral
    absolutely convergent when 1 is in the spectrum.
    """

    evaluator: Callable
    kind: str = "closure"
    coeffs: Optional[np.ndarray] = None
    den_coeffs: Optional[np.ndarray] = None
    h0_certificate: Optional[tuple] = None
    label: str = ""

    def __call__(self, z):
        return self.evaluator(z)


def _horner(coeffs: np.ndarray):
    def ev(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in coeffs[::-1]:
            out = out * z + c
        return out if out.shape else complex(out)

    return ev


def poly(coeffs: Sequence[complex], label: str = "") -> HolomorphicFn:
    """Polynomial from ascending coefficients.

    When phi(1) = 0 a growth certificate |phi| <= c |1-z| is attached
    with c = sum |g_k| for the synthetic quotient g = phi / (1 - z),
    valid on the closed unit disc and hence on every Stolz closure.
    """
    c = np.asarray(list(coeffs), dtype=complex)
    if c.size == 0:
        c = np.zeros(1, dtype=complex)
    fn = HolomorphicFn(evaluator=_horner(c), kind="polynomial", coeffs=c,
                       label=label or f"poly deg {len(c) - 1}")
    val1 = complex(np.sum(c))
    if abs(val1) <= 1e-13 * (1.0 + float(np.sum(np.abs(c)))):
        # phi(z) = (1 - z) g(z); Horner-style synthetic division by (1 - z)
        g = np.zeros(max(len(c) - 1, 1), dtype=complex)
        acc = 0.0 + 0.0j
        for k in range(len(c) - 1, 0, -1):
            acc = acc + c[k]
            g[k - 1] = -acc  # phi = (z-1) q  =>  phi = (1-z)(-q)
        fn.h0_certificate = (float(np.sum(np.abs(g))), 1.0)
    return fn


def rational(num: Sequence[complex], den: Sequence[complex],
             label: str = "") -> HolomorphicFn:
    """Rational function num/den, ascending coefficients."""
    n = np.asarray(list(num), dtype=complex)
    d = np.asarray(list(den), dtype=complex)
    ev_n, ev_d = _horner(n), _horner(d)

    def ev(z):
        return ev_n(z) / ev_d(z)

    return HolomorphicFn(evaluator=ev, kind="rational", coeffs=n, den_coeffs=d,
                         label=label or "rational")


def from_callable(f: Callable, certificate: Optional[tuple] = None,
                  label: str = "") -> HolomorphicFn:
    return HolomorphicFn(evaluator=lambda z: f(np.asarray(z, dtype=complex)),
                         kind="closure", h0_certificate=certificate,
                         label=label or "closure")


def frac_power_fn(delta: float) -> HolomorphicFn:
    """phi_delta(z) = (1 - z)^delta, principal branch (positive on [0, 1))."""
    if delta <= 0:
        raise ValueError("delta must be positive")

    def ev(z):
        return np.power(1.0 - np.asarray(z, dtype=complex), delta)

    return HolomorphicFn(evaluator=ev, kind="closure",
                         h0_certificate=(1.0, float(delta)),
                         label=f"(1-z)^{delta}")


_NAMED = {
    "one": lambda: poly([1.0], label="one"),
    "id": lambda: poly([0.0, 1.0], label="id"),
    "one-minus": lambda: poly([1.0, -1.0], label="one-minus"),
    "z-one-minus": lambda: poly([0.0, 1.0, -1.0], label="z-one-minus"),
}


def named_function(spec: str) -> HolomorphicFn:
    """Parse a function spec: 'poly:c0,c1,...', 'frac:delta' or a builtin name."""
    if spec.startswith("poly:"):
        parts = spec[5:].split(",")
        return poly([complex(p) for p in parts], label=spec)
    if spec.startswith("frac:"):
        return frac_power_fn(float(spec[5:]))
    if spec in _NAMED:
        return _NAMED[spec]()
    raise ValueError(f"unknown function spec {spec!r}")


# ---------------------------------------------------------------------------
# direct routes
# ---------------------------------------------------------------------------

def eval_poly(T, phi) -> np.ndarray:
    """Horner evaluation of a polynomial at a matrix."""
    T = as_matrix(T, square=True)
    if isinstance(phi, HolomorphicFn):
        if phi.kind != "polynomial":
            raise ValueError("eval_poly needs a polynomial")
        coeffs = phi.coeffs
    else:
        coeffs = np.asarray(list(phi), dtype=complex)
    n = T.shape[0]
    out = np.zeros((n, n), dtype=complex)
    I = np.eye(n, dtype=complex)
    for c in coeffs[::-1]:
        out = out @ T + c * I
    return out


def frac_power_eig(T, delta: float) -> np.ndarray:
    """Eigendecomposition oracle V diag((1-lam)^delta) V^-1 (diagonalizable T)."""
    spec = numlin.eig(T, vectors=True)
    if not np.isfinite(spec.condition_estimate) or spec.condition_estimate > 1e8:
        raise numlin.EigNonConvergence(
            f"eigenvector matrix too ill conditioned ({spec.condition_estimate:.2e}) "
            "for a trustworthy eigendecomposition oracle")
    V = spec.eigenvectors
    d = np.power(1.0 - spec.eigenvalues, delta)
    return V @ np.diag(d) @ np.linalg.inv(V)


# ---------------------------------------------------------------------------
# contour route
# ---------------------------------------------------------------------------

@dataclass
class CalcReport:
    """Result of a contour evaluation with its two-mesh error estimate."""

    value: np.ndarray
    error_estimate: float
    beta: float
    node_count: int
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        from .jsonutil import matrix_to_json, sanitize

        d = {
            "value": matrix_to_json(self.value),
            "error_estimate": self.error_estimate,
            "beta": self.beta,
            "node_count": self.node_count,
        }
        d.update(sanitize(self.meta))
        return sanitize(d)


class ContourCalculus:
    """Shared contour machinery for one operator at one angle.

    Resolvents are computed once per mesh level and reused across
    functions, so applying a whole test family costs one resolvent
    sweep.  The final contour sum runs in a fixed sequential order for
    reproducibility.
    """

    def __init__(self, T, beta: Optional[float] = None,
                 gamma: Optional[float] = None,
                 mesh: Optional[MeshSpec] = None,
                 target_rel: float = QUAD_TARGET_REL,
                 refine_rounds: int = REFINE_ROUNDS):
        self.T = as_matrix(T, square=True)
        self.alpha = ritt.spectral_type(self.T)
        if self.alpha == NOT_STOLZ:
            raise ContourSpectrumError("spectrum lies in no Stolz closure")
        if beta is None:
            if gamma is None:
                gamma = 0.5 * (self.alpha + math.pi / 2)
            beta = 0.5 * (self.alpha + gamma)  # needs alpha < beta < gamma
        if beta <= self.alpha and self.alpha > 0:
            raise ContourSpectrumError(
                f"beta={beta:.6g} must exceed the spectral type {self.alpha:.6g}")
        if not 0.0 < beta < math.pi / 2:
            raise ContourSpectrumError(f"beta={beta:.6g} outside (0, pi/2)")
        self.beta = float(beta)
        self.mesh0 = mesh or MeshSpec()
        self.target_rel = target_rel
        self.refine_rounds = refine_rounds
        self.eigs = numlin.eig(self.T).eigenvalues
        self._vertex_in_spectrum = bool(
            np.any(np.abs(self.eigs - 1.0) <= VERTEX_CLUSTER))
        self._levels: list = []  # (contour, resolvents (m,n,n))

    def _level(self, k: int):
        while len(self._levels) <= k:
            mesh = self.mesh0
            for _ in range(len(self._levels)):
                mesh = mesh.refined()
            contour = stolz.boundary_contour(self.beta, mesh)
            sep = np.abs(contour.nodes[:, None] - self.eigs[None, :]).min()
            if sep <= 1e-13 * (1.0 + np.abs(self.eigs).max()):
                raise ContourSpectrumError(
                    "a quadrature node hits the spectrum tolerance")
            n = self.T.shape[0]
            I = np.eye(n, dtype=complex)
            R = np.empty((len(contour.nodes), n, n), dtype=complex)
            for j, lam in enumerate(contour.nodes):
                R[j] = numlin.solve(lam * I - self.T, I)
            self._levels.append((contour, R))
        return self._levels[k]

    def _check_admissible(self, phi: HolomorphicFn):
        if not self._vertex_in_spectrum:
            return
        cert = phi.h0_certificate
        if cert is None or cert[1] < MIN_CERT_S:
            raise AdmissibilityError(
                "1 lies in the spectrum: phi needs an h0 certificate with "
                f"exponent s >= {MIN_CERT_S} (got {cert!r})")

    def _quad(self, phi: HolomorphicFn, k: int) -> np.ndarray:
        contour, R = self._level(k)
        vals = np.asarray(phi(contour.nodes), dtype=complex)
        coeff = contour.weights * contour.tangents * vals / (2j * math.pi)
        # fixed-order reduction over nodes
        return np.tensordot(coeff, R, axes=(0, 0))

    def apply(self, phi: HolomorphicFn) -> CalcReport:
        """phi(T) with a two-mesh (coarse vs refined) error estimate."""
        self._check_admissible(phi)
        coarse = self._quad(phi, 0)
        best = coarse
        est = math.inf
        used = 1
        for k in range(1, self.refine_rounds + 1):
            fine = self._quad(phi, k)
            est = float(np.linalg.norm(fine - best, 2))
            best = fine
            used = k
            if est <= self.target_rel * (1.0 + np.linalg.norm(fine, 2)):
                break
        contour, _ = self._level(used)
        est += 1e-11 * (1.0 + float(np.linalg.norm(best, 2)))  # roundoff floor
        return CalcReport(value=best, error_estimate=est, beta=self.beta,
                          node_count=len(contour.nodes),
                          meta={"label": phi.label, "alpha": self.alpha})


def eval_contour(T, phi: HolomorphicFn, beta: Optional[float] = None,
                 gamma: Optional[float] = None,
                 mesh: Optional[MeshSpec] = None) -> CalcReport:
    """phi(T) by the Stolz boundary integral (see :class:`ContourCalculus`)."""
    return ContourCalculus(T, beta=beta, gamma=gamma, mesh=mesh).apply(phi)


def frac_power(T, delta: float, beta: Optional[float] = None,
               mesh: Optional[MeshSpec] = None) -> CalcReport:
    """(I - T)^delta via the contour; cross-check with frac_power_eig."""
    return eval_contour(T, frac_power_fn(delta), beta=beta, mesh=mesh)


def scaled_calculus(T, phi: HolomorphicFn, r: float,
                    beta: Optional[float] = None,
                    mesh: Optional[MeshSpec] = None) -> CalcReport:
    """phi(rT) for 0 < r < 1 (the scaling approximation of phi(T))."""
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    T = as_matrix(T, square=True)
    return eval_contour(r * T, phi, beta=beta, mesh=mesh)


def scaling_convergence(T, phi: HolomorphicFn,
                        rs: Sequence[float] = (0.9, 0.99, 0.999),
                        beta: Optional[float] = None) -> dict:
    """||phi(rT) - phi(T)|| for each r; decays as r -> 1 for admissible phi."""
    base = eval_contour(T, phi, beta=beta).value
    out = {}
    for r in rs:
        out[r] = float(np.linalg.norm(scaled_calculus(T, phi, r, beta=beta).value - base, 2))
    return out


# ---------------------------------------------------------------------------
# sectorial transfer
# ---------------------------------------------------------------------------

def _sector_quad(A: np.ndarray, f: HolomorphicFn, nu: float, r_max: float,
                 mesh: MeshSpec) -> np.ndarray:
    contour = stolz.sector_contour(nu, r_max, mesh)
    eigs = numlin.eig(A).eigenvalues
    sep = np.abs(contour.nodes[:, None] - eigs[None, :]).min()
    if sep <= 1e-13 * (1.0 + np.abs(eigs).max()):
        raise ContourSpectrumError("sector node hits the spectrum tolerance")
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    vals = np.asarray(f(contour.nodes), dtype=complex)
    coeff = contour.weights * contour.tangents * vals / (2j * math.pi)
    out = np.zeros((n, n), dtype=complex)
    for j, lam in enumerate(contour.nodes):
        out += coeff[j] * numlin.solve(lam * I - A, I)
    return out


def transfer_check(T, f: HolomorphicFn, nu: Optional[float] = None,
                   r_max: float = 1e7,
                   sector_mesh: Optional[MeshSpec] = None,
                   stolz_mesh: Optional[MeshSpec] = None) -> dict:
    """Compare the two independent routes of the transfer identity.

    lhs: sectorial boundary integral of f at A = I - T (polynomial f is
    evaluated directly instead, since it has no sector decay).
    rhs: Stolz boundary integral of phi(z) = f(1 - z) at T.
    Returns {"lhs", "rhs", "diff", ...} with the truncation estimate.
    """
    T = as_matrix(T, square=True)
    n = T.shape[0]
    A = np.eye(n, dtype=complex) - T
    alpha = ritt.spectral_type(T)
    if alpha == NOT_STOLZ:
        raise ContourSpectrumError("spectrum lies in no Stolz closure")
    if nu is None:
        nu = 0.5 * (alpha + math.pi / 2)
    if not alpha < nu < math.pi / 2:
        raise ContourSpectrumError(
            f"sector angle nu={nu:.6g} must lie in (alpha, pi/2)")

    tail = 0.0
    if f.kind == "polynomial":
        lhs = eval_poly(A, f)
    else:
        if f.h0_certificate is None:
            raise AdmissibilityError(
                "sector route needs a decay certificate |f| <= c min(|z|^s, |z|^-s)")
        c, s = f.h0_certificate
        mesh = sector_mesh or MeshSpec(segment_panels=90, arc_panels=1,
                                       points_per_panel=10, grading_ratio=0.5,
                                       min_panel=1e-14)
        sc = stolz.sector_contour(nu, r_max, mesh)
        # resolvent scale on the outer truncation circle
        zr = r_max * cmath.exp(1j * nu)
        I = np.eye(n, dtype=complex)
        c_res = float(np.linalg.norm(zr * numlin.solve(zr * I - A, I), 2))
        tail = c * c_res * sc.tail_factor(s)
        lhs = _sector_quad(A, f, nu, r_max, mesh)

    phi = HolomorphicFn(evaluator=lambda z: f(1.0 - np.asarray(z, dtype=complex)),
                        kind="closure", h0_certificate=f.h0_certificate,
                        label=f"{f.label or 'f'}(1-z)")
    rhs_report = eval_contour(T, phi, gamma=nu, mesh=stolz_mesh)
    diff = float(np.linalg.norm(lhs - rhs_report.value, 2))
    return {
        "lhs": lhs,
        "rhs": rhs_report.value,
        "diff": diff,
        "nu": nu,
        "truncation_estimate": tail,
        "stolz_error_estimate": rhs_report.error_estimate,
    }


# ---------------------------------------------------------------------------
# sup norms on the domain boundary
# ---------------------------------------------------------------------------

def _golden_max(fun, lo: float, hi: float, rounds: int = 60):
    phi_ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi_ratio * (b - a)
    d = a + phi_ratio * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(rounds):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + phi_ratio * (b - a)
            fd = fun(d)
        else:
            b, d, fd = d, c, fc
            c = b - phi_ratio * (b - a)
            fc = fun(c)
    return max(fc, fd)


def _boundary_sup(scalar_fun, gamma: float, per_piece: int) -> float:
    """sup of a nonnegative function over the Stolz boundary.

    Maximum modulus makes the boundary sup equal the domain sup for
    |phi| and its vector/matrix variants.  Dense sampling per piece plus
    golden-section polish around the best sample.
    """
    if gamma >= math.pi / 2:  # degenerate case: the unit disc
        fun = lambda t: scalar_fun(cmath.exp(1j * t))
        ts = np.linspace(0.0, 2 * math.pi, 4 * per_piece, endpoint=False)
        vals = [fun(t) for t in ts]
        i = int(np.argmax(vals))
        lo, hi = ts[i] - 2 * math.pi / (4 * per_piece), ts[i] + 2 * math.pi / (4 * per_piece)
        return max(max(vals), _golden_max(fun, lo, hi))

    tp, tm = stolz.tangent_points(gamma)
    best = 0.0
    pieces = [
        lambda s: 1.0 + s * (tp - 1.0),
        lambda s: 1.0 + s * (tm - 1.0),
    ]
    # cluster parameters toward the vertex (s = 0)
    s_grid = np.unique(np.concatenate([
        np.linspace(0.0, 1.0, per_piece),
        np.geomspace(1e-12, 1.0, per_piece // 2),
    ]))
    for param in pieces:
        fun = lambda s: scalar_fun(param(s))
        vals = [fun(s) for s in s_grid]
        i = int(np.argmax(vals))
        lo = s_grid[max(i - 1, 0)]
        hi = s_grid[min(i + 1, len(s_grid) - 1)]
        best = max(best, max(vals), _golden_max(fun, lo, hi))
    r = math.sin(gamma)
    th = np.linspace(math.pi / 2 - gamma, 3 * math.pi / 2 + gamma, 2 * per_piece)
    fun = lambda t: scalar_fun(r * cmath.exp(1j * t))
    vals = [fun(t) for t in th]
    i = int(np.argmax(vals))
    lo = th[max(i - 1, 0)]
    hi = th[min(i + 1, len(th) - 1)]
    best = max(best, max(vals), _golden_max(fun, lo, hi))
    return best


def hinf_norm(phi, gamma: float, per_piece: int = 512) -> float:
    """sup of |phi| over B(gamma) (gamma = pi/2 means the unit disc)."""
    fn = phi if callable(phi) else _horner(np.asarray(phi, dtype=complex))
    return _boundary_sup(lambda z: abs(complex(fn(z))), gamma, per_piece)


def hinf_vector_norm(phis: Sequence, gamma: float, per_piece: int = 512) -> float:
    """sup over the boundary of the l2 norm of (phi_1(z), ..., phi_n(z))."""
    def fun(z):
        return math.sqrt(sum(abs(complex(p(z))) ** 2 for p in phis))

    return _boundary_sup(fun, gamma, per_piece)


def hinf_matrix_norm(phi_matrix, gamma: float, per_piece: int = 256) -> float:
    """sup over the boundary of the spectral norm of [phi_lj(z)]."""
    rows = len(phi_matrix)

    def fun(z):
        F = np.array([[complex(phi_matrix[l][j](z)) for j in range(rows)]
                      for l in range(rows)])
        return float(np.linalg.norm(F, 2))

    return _boundary_sup(fun, gamma, per_piece)


# ---------------------------------------------------------------------------
# calculus constants and diagonal estimates
# ---------------------------------------------------------------------------

def default_test_family(seed: int = 0, max_k: int = 64, max_j: int = 4,
                        n_random: int = 200, random_deg: int = 32,
                        n_fejer: int = 16) -> list:
    """Polynomial test family: z^k (1-z)^j, random coefficients, Fejer kernels."""
    fam = []
    for j in range(max_j + 1):
        base = np.array([1.0], dtype=complex)
        for _ in range(j):
            base = np.convolve(base, np.array([1.0, -1.0], dtype=complex))
        for k in range(max_k + 1):
            coeffs = np.concatenate([np.zeros(k, dtype=complex), base])
            fam.append(poly(coeffs, label=f"z^{k}(1-z)^{j}"))
    rng = np.random.Generator(np.random.Philox(key=seed))
    for i in range(n_random):
        deg = int(rng.integers(1, random_deg + 1))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        fam.append(poly(coeffs, label=f"random#{i}"))
    for m in range(1, n_fejer + 1):
        coeffs = np.array([1.0 - j / (m + 1.0) for j in range(m + 1)], dtype=complex)
        fam.append(poly(coeffs, label=f"fejer#{m}"))
    return fam


def calculus_constant(T, gamma: float, space: SpaceModel,
                      family: Optional[list] = None, seed: int = 0) -> float:
    """Certified lower bound for the best calculus constant K on B(gamma).

    max over the polynomial family of ||phi(T)|| / sup_{B(gamma)} |phi|;
    polynomials are evaluated directly so no contour admissibility is
    needed.  gamma = pi/2 gives the polynomial-boundedness diagnostic
    over the unit disc.
    """
    T = as_matrix(T, square=True)
    fam = family if family is not None else default_test_family(seed)
    best = 0.0
    for phi in fam:
        denom = hinf_norm(phi, gamma, per_piece=256)
        if denom <= 0:
            continue
        num = numlin.op_norm(eval_poly(T, phi), space).value
        best = max(best, num / denom)
    return best


def evenodd_split(phi: HolomorphicFn):
    """Unique split phi(z) = phi1(z^2) + z phi2(z^2) by coefficient parity."""
    if phi.kind != "polynomial":
        raise ValueError("even/odd split is defined for polynomials")
    c = phi.coeffs
    return poly(c[0::2], label=f"{phi.label}:even"), poly(c[1::2], label=f"{phi.label}:odd")


def nevanlinna_diag(T, phi: HolomorphicFn, space: SpaceModel, N: int,
                    gamma: Optional[float] = None) -> dict:
    """sup over k <= N of k ||phi(T) (T^k - T^(k-1))||, and its ratio to sup|phi|.

    The diagonal family k phi(T) T^(k-1) (T - I) stays bounded in k for
    Ritt operators, with a constant controlled by sup |phi| on a Stolz
    domain; the ratio reported here is the measured constant.
    """
    T = as_matrix(T, square=True)
    if phi.kind == "polynomial":
        phiT = eval_poly(T, phi)
    else:
        phiT = eval_contour(T, phi, gamma=gamma).value
    powers = numlin.mat_power_seq(T, N)
    sup = 0.0
    arg = 0
    for k in range(1, N + 1):
        v = k * numlin.op_norm(phiT @ (powers[k] - powers[k - 1]), space).value
        if v > sup:
            sup, arg = v, k
    alpha = ritt.spectral_type(T)
    g = gamma if gamma is not None else 0.5 * (alpha + math.pi / 2)
    denom = hinf_norm(phi, g, per_piece=256)
    return {
        "sup": sup,
        "argmax_k": arg,
        "hinf": denom,
        "ratio": sup / denom if denom > 0 else math.inf,
        "gamma": g,
    }
