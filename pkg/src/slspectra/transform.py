"""Generalized Fourier transform against a spectral function.

The transform of y is yhat(s) = int_a^b phi(t,s) Delta(t) y(t) dt, sampled
at a SpectralFunction's ac nodes and point masses.  The inverse assembles

    sum_k phi(t, s_k) sigma_k yhat(s_k)
    + int phi(t, u) rho(u) yhat(u) du

over an explicit truncation (first k_max masses, ac window [lo, hi]); the
ac integral is evaluated on the spectral function's own cells, whose nodes
are midpoints in the variable xi = sign(u) sqrt|u|, so the integrable
1/sqrt|u| edge of the density never needs a function value at u = 0.

Membership in the uniform-convergence class F checks the left boundary
condition, the tau-dependent right condition (bc1/bc2/bc3) and the
representability l[y] = Delta f_y; for y in F the inverse converges
absolutely and uniformly, which uniform_convergence_profile measures over
a documented truncation schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConfigError, CrossCheckError, GridMismatchError, WindowError
from .nevanlinna import BoundaryParam, classify_bc
from .problem import SLProblem, delta_inner, delta_norm
from .propagator import fundamental_trajectory
from .spectral import (
    SpectralFunction,
    _ell,
    find_eigenvalues,
    point_mass,
    pure_point_spectral,
)

_ZERO_NORM = 1e-30  # below this, treat ||y||^2_Delta as zero


@dataclass(frozen=True)
class Truncation:
    """Explicit truncation: first k_max point masses, ac window [lo, hi]."""

    k_max: int
    ac_window: tuple[float, float]

    def __post_init__(self) -> None:
        if self.k_max < 0:
            raise ConfigError("k_max must be >= 0")
        lo, hi = self.ac_window
        if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
            raise ConfigError("ac_window must be a finite ordered pair")


@dataclass(frozen=True, eq=False)
class TransformedFn:
    """Samples of yhat aligned with one SpectralFunction's grid."""

    ac_u: np.ndarray
    ac_values: np.ndarray
    mass_values: tuple[tuple[float, complex], ...]
    source_norm_sq: float

    def __post_init__(self) -> None:
        if self.ac_u.shape != self.ac_values.shape:
            raise ConfigError("ac_values must align with ac_u")
        if self.source_norm_sq < 0:
            raise ConfigError("source_norm_sq must be >= 0")


class InverseResult(NamedTuple):
    value: complex
    abs_bound: float


class MembershipReport(NamedTuple):
    in_F: bool
    checks: tuple[tuple[str, bool, float], ...]


class ConvergenceReport(NamedTuple):
    truncations: tuple[tuple[str, float], ...]
    monotone_tail: bool


class EigenMode(NamedTuple):
    lam: float
    coefficient: float
    values: np.ndarray


def _as_vectorized(y: Callable) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.0, 0.5])
    try:
        out = np.asarray(y(probe))
        if out.shape == probe.shape:
            return y
    except Exception:
        pass
    return np.vectorize(y)


def _phi_values(problem: SLProblem, s: float, t_arr: np.ndarray) -> np.ndarray:
    return fundamental_trajectory(problem, float(s), "phi").eval(t_arr)[0]


def _hat_at(problem: SLProblem, y: Callable, s: float) -> complex:
    traj = fundamental_trajectory(problem, float(s), "phi")

    def phi(t: np.ndarray) -> np.ndarray:
        return np.conjugate(traj.eval(t)[0])  # conj undone inside delta_inner

    return delta_inner(problem, y, phi)


def fourier_transform(
    problem: SLProblem, y: Callable, sigma: SpectralFunction
) -> TransformedFn:
    """yhat at every ac node and point mass of sigma, by piece-aware
    quadrature of phi(.,s) Delta y."""
    yv = _as_vectorized(y)
    ac_vals = np.array(
        [_hat_at(problem, yv, u) for u in sigma.ac_grid], dtype=complex
    )
    mass_vals = tuple(
        (s_k, _hat_at(problem, yv, s_k)) for s_k, _ in sigma.point_masses
    )
    norm_sq = max(delta_inner(problem, yv, yv).real, 0.0)
    return TransformedFn(
        ac_u=sigma.ac_grid.copy(),
        ac_values=ac_vals,
        mass_values=mass_vals,
        source_norm_sq=norm_sq,
    )


def _check_aligned(sigma: SpectralFunction, yhat: TransformedFn) -> None:
    if yhat.ac_u.shape != sigma.ac_grid.shape or not np.array_equal(
        yhat.ac_u, sigma.ac_grid
    ):
        raise GridMismatchError("transform ac grid does not match the spectral function")
    if tuple(s for s, _ in yhat.mass_values) != tuple(
        s for s, _ in sigma.point_masses
    ):
        raise GridMismatchError("transform masses do not match the spectral function")


def _check_truncation(sigma: SpectralFunction, truncation: Truncation) -> None:
    lo, hi = truncation.ac_window
    s_min, s_max = sigma.window
    tol = 1e-12 * (1.0 + max(abs(s_min), abs(s_max)))
    if lo < s_min - tol or hi > s_max + tol:
        raise WindowError(
            f"truncation window [{lo}, {hi}] exceeds spectral window "
            f"[{s_min}, {s_max}]"
        )


def _inverse_on_grid(
    problem: SLProblem,
    sigma: SpectralFunction,
    yhat: TransformedFn,
    t_arr: np.ndarray,
    truncation: Truncation,
) -> tuple[np.ndarray, float]:
    """Vectorized inverse over a t grid; (values, absolute-sum bound)."""
    _check_aligned(sigma, yhat)
    _check_truncation(sigma, truncation)
    total = np.zeros(t_arr.shape, dtype=complex)
    bound = 0.0
    for (s_k, jump), (_, hv) in list(zip(sigma.point_masses, yhat.mass_values))[
        : truncation.k_max
    ]:
        term = jump * hv
        total += term * _phi_values(problem, s_k, t_arr)
        bound += abs(term)
    lo, hi = truncation.ac_window
    if sigma.ac_grid.size:
        sel = np.nonzero((sigma.ac_grid >= lo) & (sigma.ac_grid <= hi))[0]
        for j in sel:
            w = sigma.ac_density[j] * (sigma.cell_hi[j] - sigma.cell_lo[j])
            if w == 0.0:
                continue
            term = w * yhat.ac_values[j]
            total += term * _phi_values(problem, float(sigma.ac_grid[j]), t_arr)
            bound += abs(term)
    return total, bound


def inverse_transform(
    problem: SLProblem,
    sigma: SpectralFunction,
    yhat: TransformedFn,
    t: float,
    truncation: Truncation,
) -> InverseResult:
    """Truncated inverse at one point, with the moduli-sum bound.

    The bound sums |phi(t,.)| against |contribution| pointwise at t, so it
    dominates the partial sums of the expansion at that t."""
    t_arr = np.array([float(t)])
    _check_aligned(sigma, yhat)
    _check_truncation(sigma, truncation)
    total = 0.0 + 0.0j
    bound = 0.0
    for (s_k, jump), (_, hv) in list(zip(sigma.point_masses, yhat.mass_values))[
        : truncation.k_max
    ]:
        phi_t = complex(_phi_values(problem, s_k, t_arr)[0])
        total += phi_t * jump * hv
        bound += abs(phi_t * jump * hv)
    lo, hi = truncation.ac_window
    if sigma.ac_grid.size:
        sel = np.nonzero((sigma.ac_grid >= lo) & (sigma.ac_grid <= hi))[0]
        for j in sel:
            w = sigma.ac_density[j] * (sigma.cell_hi[j] - sigma.cell_lo[j])
            if w == 0.0:
                continue
            phi_t = complex(_phi_values(problem, float(sigma.ac_grid[j]), t_arr)[0])
            total += phi_t * w * yhat.ac_values[j]
            bound += abs(phi_t * w * yhat.ac_values[j])
    return InverseResult(value=complex(total), abs_bound=float(bound))


def parseval_defect(
    problem: SLProblem,
    sigma: SpectralFunction,
    y: Callable,
    truncation: Truncation,
) -> float:
    """Relative defect of the Parseval equality over the truncation.

    For ||y||_Delta = 0 the absolute transformed norm is returned (the
    relative form is meaningless on ker pi_Delta)."""
    yhat = fourier_transform(problem, y, sigma)
    _check_truncation(sigma, truncation)
    t_norm = 0.0
    for (s_k, jump), (_, hv) in list(zip(sigma.point_masses, yhat.mass_values))[
        : truncation.k_max
    ]:
        t_norm += jump * abs(hv) ** 2
    lo, hi = truncation.ac_window
    if sigma.ac_grid.size:
        sel = (sigma.ac_grid >= lo) & (sigma.ac_grid <= hi)
        widths = (sigma.cell_hi - sigma.cell_lo)[sel]
        t_norm += float(
            np.dot(sigma.ac_density[sel] * widths, np.abs(yhat.ac_values[sel]) ** 2)
        )
    if yhat.source_norm_sq <= _ZERO_NORM:
        return float(t_norm)
    return abs(t_norm - yhat.source_norm_sq) / yhat.source_norm_sq


# ---------------------------------------------------------------------------
# membership in the uniform-convergence class F


def membership_in_F(
    problem: SLProblem,
    tau: BoundaryParam,
    y: Callable,
    y1: Callable,
    f_y: Callable,
    tol_bc: float = 1e-8,
    tol_res: float | None = None,
) -> MembershipReport:
    """Check the boundary conditions and l[y] = Delta f_y representability.

    y1 is the caller's quasi-derivative p y' (supplied, not differentiated
    here, so boundary residuals are not polluted by numerical
    differentiation); the equation residual uses central differences of y1
    piecewise in the interior.
    """
    yv, y1v, fv = _as_vectorized(y), _as_vectorized(y1), _as_vectorized(f_y)
    a, b = problem.a, problem.b
    checks: list[tuple[str, bool, float]] = []

    r_left = abs(
        math.cos(problem.alpha) * complex(yv(np.array([a]))[0])
        + math.sin(problem.alpha) * complex(y1v(np.array([a]))[0])
    )
    checks.append(("left_bc", r_left <= tol_bc, float(r_left)))

    bc = classify_bc(tau)
    yb = complex(yv(np.array([b]))[0])
    y1b = complex(y1v(np.array([b]))[0])
    if bc.label == "bc1":
        r = abs(yb)
        checks.append(("right_bc_value", r <= tol_bc, float(r)))
    elif bc.label == "bc2":
        r = abs(y1b - bc.d_tau * yb)
        checks.append(("right_bc_robin", r <= tol_bc * (1.0 + abs(yb)), float(r)))
    else:
        r1, r2 = abs(yb), abs(y1b)
        checks.append(("right_bc_value", r1 <= tol_bc, float(r1)))
        checks.append(("right_bc_quasi_derivative", r2 <= tol_bc, float(r2)))

    if tol_res is None:
        tol_res = 1e-6 * (1.0 + delta_norm(problem, fv))
    worst = 0.0
    for t0, t1 in zip(problem.breakpoints[:-1], problem.breakpoints[1:]):
        h = 1e-5 * (t1 - t0)
        ts = np.linspace(t0 + 3 * h, t1 - 3 * h, 33)
        y1_prime = (y1v(ts + h) - y1v(ts - h)) / (2.0 * h)
        resid = (-y1_prime + problem.q(ts) * yv(ts)) - problem.delta(ts) * fv(ts)
        worst = max(worst, float(np.max(np.abs(resid))))
    checks.append(("equation_residual", worst <= tol_res, worst))

    return MembershipReport(
        in_F=all(ok for _, ok, _ in checks), checks=tuple(checks)
    )


# ---------------------------------------------------------------------------
# convergence diagnostics and eigenfunction expansion


def uniform_convergence_profile(
    problem: SLProblem,
    sigma: SpectralFunction,
    yhat: TransformedFn,
    y_true: Callable,
    schedule: list[Truncation],
    t_grid,
) -> ConvergenceReport:
    """Sup-error of the truncated inverse against y_true over a nested
    truncation schedule."""
    if not schedule:
        raise ConfigError("empty truncation schedule")
    for prev, cur in zip(schedule[:-1], schedule[1:]):
        nested = (
            cur.k_max >= prev.k_max
            and cur.ac_window[0] <= prev.ac_window[0]
            and cur.ac_window[1] >= prev.ac_window[1]
        )
        if not nested:
            raise ConfigError("truncation schedule must be nested")
    t_arr = np.asarray(list(t_grid), dtype=float)
    y_ref = np.asarray(_as_vectorized(y_true)(t_arr))
    rows = []
    for tr in schedule:
        vals, _ = _inverse_on_grid(problem, sigma, yhat, t_arr, tr)
        sup = float(np.max(np.abs(vals - y_ref)))
        lo, hi = tr.ac_window
        rows.append((f"k_max={tr.k_max}, ac_window=[{lo:g},{hi:g}]", sup))
    sups = [s for _, s in rows]
    tail = sups[-3:]
    monotone = all(b <= a for a, b in zip(tail[:-1], tail[1:]))
    return ConvergenceReport(truncations=tuple(rows), monotone_tail=monotone)


def eigen_expansion(
    problem: SLProblem,
    tau: BoundaryParam,
    y: Callable,
    K: int,
    t_grid=None,
) -> list[EigenMode]:
    """First K modes of the orthogonal (constant or infinite tau) expansion.

    v_k = phi(., lambda_k)/||phi||_Delta; coefficients are (y, v_k)_Delta.
    Internally cross-checked against inverse_transform with the pure-point
    spectral function whose jumps come from the residue route: the two
    agree iff sigma_k = 1/||phi(., lambda_k)||^2_Delta numerically.
    """
    if tau.kind not in ("constant", "infinity"):
        raise ConfigError(
            "eigen_expansion needs an orthogonal spectral function "
            "(constant real tau or infinity)"
        )
    if K < 1:
        raise ConfigError("K must be >= 1")
    t_arr = (
        np.linspace(problem.a, problem.b, 33)
        if t_grid is None
        else np.asarray(list(t_grid), dtype=float)
    )
    yv = _as_vectorized(y)

    ell = max(_ell(problem), 0.1)
    bps = np.asarray(problem.breakpoints)
    mids = 0.5 * (bps[:-1] + bps[1:])
    q_scale = 1.0 + float(np.max(np.abs(problem.q(mids))))
    lo = -10.0 * q_scale
    hi = 1.3 * ((K + 2) * math.pi / ell) ** 2 + 10.0
    eigs: list[float] = []
    for _ in range(4):
        eigs = find_eigenvalues(problem, tau, (lo, hi), max_count=K)
        if len(eigs) >= K:
            break
        hi *= 2.0
    if len(eigs) < K:
        raise ValueError(f"found only {len(eigs)} eigenvalues below {hi:g}, need {K}")

    modes: list[EigenMode] = []
    for lam_k in eigs:
        traj = fundamental_trajectory(problem, lam_k, "phi")

        def phi_fn(t: np.ndarray, _tr=traj) -> np.ndarray:
            return _tr.eval(t)[0].real

        nrm = delta_norm(problem, phi_fn)
        if nrm <= 0:
            raise CrossCheckError(f"eigenfunction at {lam_k} has zero Delta-norm")
        coeff = delta_inner(problem, yv, phi_fn).real / nrm
        modes.append(EigenMode(lam=lam_k, coefficient=coeff, values=phi_fn(t_arr) / nrm))

    recon = np.zeros(t_arr.shape)
    for mode in modes:
        recon = recon + mode.coefficient * mode.values

    window = (min(lo, eigs[0] - 1.0), max(hi, eigs[-1] + 1.0))
    sigma_pp = pure_point_spectral(
        [(lam_k, point_mass(problem, tau, lam_k)) for lam_k in eigs], window
    )
    yhat = fourier_transform(problem, yv, sigma_pp)
    alt, _ = _inverse_on_grid(
        problem, sigma_pp, yhat, t_arr, Truncation(k_max=K, ac_window=(0.0, 0.0))
    )
    scale = 1.0 + float(np.max(np.abs(recon)))
    diff = float(np.max(np.abs(alt.real - recon)))
    if diff > 1e-6 * scale:
        raise CrossCheckError(
            f"eigen expansion disagrees with pure-point inverse transform: "
            f"sup diff {diff:.3e}"
        )
    return modes
