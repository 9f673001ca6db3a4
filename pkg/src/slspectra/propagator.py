"""Propagation of fundamental solutions across the interval.

The second-order expression -(p y')' + q y = lambda Delta y is integrated as
the first-order system in (y, y^[1]) with the quasi-derivative y^[1] = p y':

    y'     = y^[1] / p
    y^[1]' = (q - lambda Delta) y

Steps never straddle coefficient piece boundaries: each piece is integrated
as its own segment and the solver restarts at the boundary, so
discontinuities in p, q or Delta never sit inside a step.

Two engines share the segment contract:

* Pieces on which p, q and Delta are all constant are solved in closed form
  by the 2x2 transfer matrix [[C, S/p], [(q - lambda Delta) S, C]] with
  C = cosh(w tau), S = sinh(w tau)/w, w^2 = (q - lambda Delta)/p.  This is
  exact to rounding, preserves the Wronskian identically (det = C^2 - w^2 S^2
  = 1) and costs microseconds, which keeps dense spectral sweeps cheap.
* Everything else goes through an adaptive embedded Runge-Kutta method of
  order 8(5,3) with dense output (DOP853).  Complex spectral parameters
  propagate a complex state; real parameters stay on the cheaper real path.

Set quad.closed_form_pieces = False to force the Runge-Kutta engine even on
constant pieces (used by the tolerance-convergence tests).

The two fundamental solutions are fixed by the left boundary angle alpha:

    phi(a) = -sin(alpha),  phi^[1](a) = cos(alpha)
    psi(a) = -cos(alpha),  psi^[1](a) = -sin(alpha)

so their Wronskian phi psi^[1] - phi^[1] psi is identically 1.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import PropagationError
from .problem import ConstantRule, SLProblem

_MIN_RTOL = 2.5e-14  # DOP853 rejects tolerances at rounding level
_SERIES_CUT = 1e-6  # |w|*tau below this: use the series for sinh(w tau)/w


@dataclass(frozen=True)
class StateVec:
    """Solution value and quasi-derivative y^[1] = p y' at one point."""

    y: complex
    y1: complex

    def __post_init__(self) -> None:
        for v in (self.y, self.y1):
            if not (np.isfinite(complex(v).real) and np.isfinite(complex(v).imag)):
                raise PropagationError(f"non-finite state component {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.y, self.y1])


class _ExactSegment:
    """Closed-form transfer across one constant-coefficient piece.

    Mimics the relevant surface of a solve_ivp result: .t, .y and .sol().
    """

    def __init__(self, t0: float, t1: float, y0: np.ndarray, p: float, coef):
        self.t0 = t0
        self.t1 = t1
        self._y0 = y0
        self._p = p
        self._coef = coef  # q - lambda * Delta on the piece
        self._c = coef / p
        end = self.sol(np.array([t1]))[:, 0]
        self.t = np.array([t0, t1])
        self.y = np.stack([y0, end], axis=1)

    def _cs(self, tau: np.ndarray):
        c = self._c
        scale = math.sqrt(abs(c)) * float(np.max(tau, initial=0.0))
        if scale < _SERIES_CUT:
            x = c * tau * tau
            C = 1.0 + x / 2.0 + x * x / 24.0
            S = tau * (1.0 + x / 6.0 + x * x / 120.0)
            return C, S
        if isinstance(c, complex):
            w = np.sqrt(complex(c))
            wt = w * tau
            return np.cosh(wt), np.sinh(wt) / w
        if c > 0:
            w = math.sqrt(c)
            wt = w * tau
            return np.cosh(wt), np.sinh(wt) / w
        om = math.sqrt(-c)
        ot = om * tau
        return np.cos(ot), np.sin(ot) / om

    def sol(self, t_arr: np.ndarray) -> np.ndarray:
        tau = np.asarray(t_arr, dtype=float) - self.t0
        C, S = self._cs(tau)
        y0, y10 = self._y0
        return np.stack([y0 * C + (y10 / self._p) * S, y0 * self._coef * S + y10 * C])


class Trajectory:
    """Dense solution of one propagation over [a, b].

    Holds one segment per coefficient piece plus the accepted step nodes;
    evaluation dispatches query points to the owning segment.
    """

    def __init__(
        self,
        problem: SLProblem,
        lam: complex,
        segments: list,
        seg_bounds: list[tuple[float, float]],
        nodes: list[tuple[float, StateVec]],
    ):
        self.problem = problem
        self.lam = lam
        self._segments = segments
        self._seg_bounds = seg_bounds
        self._seg_ends = np.array([b for _, b in seg_bounds[:-1]])
        self.nodes: tuple[tuple[float, StateVec], ...] = tuple(nodes)

    def eval(self, t: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
        """Values (y, y^[1]) at the query points, as arrays."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        a, b = self.problem.a, self.problem.b
        tol = 1e-9 * (1.0 + abs(b - a))
        if np.any(t_arr < a - tol) or np.any(t_arr > b + tol):
            raise PropagationError("evaluation point outside [a, b]")
        t_arr = np.clip(t_arr, a, b)
        idx = np.searchsorted(self._seg_ends, t_arr, side="right")
        y = np.empty(t_arr.shape, dtype=complex)
        y1 = np.empty(t_arr.shape, dtype=complex)
        for i, seg in enumerate(self._segments):
            mask = idx == i
            if np.any(mask):
                vals = seg.sol(t_arr[mask])
                y[mask] = vals[0]
                y1[mask] = vals[1]
        return y, y1

    def state_at(self, t: float) -> StateVec:
        y, y1 = self.eval(t)
        return StateVec(complex(y[0]), complex(y1[0]))

    @property
    def endpoint(self) -> StateVec:
        return self.nodes[-1][1]


def _piece_rhs(p_rule, q_rule, d_rule, lam):
    """Right-hand side closure for one piece; constants get a fast path."""
    if (
        isinstance(p_rule, ConstantRule)
        and isinstance(q_rule, ConstantRule)
        and isinstance(d_rule, ConstantRule)
    ):
        inv_p = 1.0 / p_rule.value
        coef = q_rule.value - lam * d_rule.value

        def rhs(t, y):
            return (y[1] * inv_p, coef * y[0])

        return rhs

    def rhs(t, y):
        ta = np.array([t])
        return (y[1] / p_rule(ta)[0], (q_rule(ta)[0] - lam * d_rule(ta)[0]) * y[0])

    return rhs


def _rules_on(problem: SLProblem, t0: float, t1: float):
    mid = np.array([0.5 * (t0 + t1)])
    rules = []
    for coef in (problem.p, problem.q, problem.delta):
        i = int(coef.piece_index(mid)[0])
        rules.append(coef.pieces[i].rule)
    return rules


def propagate(
    problem: SLProblem,
    lam: complex,
    init: StateVec | tuple[complex, complex],
) -> Trajectory:
    """Integrate from a to b with initial data (y(a), y^[1](a))."""
    lam = complex(lam)
    if isinstance(init, StateVec):
        init = (init.y, init.y1)
    is_real = lam.imag == 0.0 and complex(init[0]).imag == 0.0 and complex(init[1]).imag == 0.0
    if is_real:
        state = np.array([complex(init[0]).real, complex(init[1]).real], dtype=float)
        lam_eff: complex | float = lam.real
    else:
        state = np.array([complex(init[0]), complex(init[1])], dtype=complex)
        lam_eff = lam
    rtol = max(problem.quad.ode_tol, _MIN_RTOL)
    atol = 1e-3 * rtol * max(1.0, float(np.max(np.abs(state))))
    use_exact = problem.quad.closed_form_pieces

    segments = []
    seg_bounds = []
    nodes: list[tuple[float, StateVec]] = [
        (problem.a, StateVec(complex(state[0]), complex(state[1])))
    ]
    bps = problem.breakpoints
    for t0, t1 in zip(bps[:-1], bps[1:]):
        p_rule, q_rule, d_rule = _rules_on(problem, t0, t1)
        if (
            use_exact
            and isinstance(p_rule, ConstantRule)
            and isinstance(q_rule, ConstantRule)
            and isinstance(d_rule, ConstantRule)
        ):
            seg = _ExactSegment(
                t0, t1, state, p_rule.value, q_rule.value - lam_eff * d_rule.value
            )
        else:
            rhs = _piece_rhs(p_rule, q_rule, d_rule, lam_eff)
            seg = solve_ivp(
                rhs,
                (t0, t1),
                state,
                method="DOP853",
                rtol=rtol,
                atol=atol,
                dense_output=True,
            )
            if not seg.success:
                raise PropagationError(
                    f"integration failed on [{t0:.6g}, {t1:.6g}] at lambda={lam}: {seg.message}"
                )
        if not np.all(np.isfinite(np.abs(seg.y[:, -1]))):
            raise PropagationError(
                f"non-finite state at t={t1:.6g}, lambda={lam}; solution overflow"
            )
        segments.append(seg)
        seg_bounds.append((t0, t1))
        for k in range(1, seg.t.size):
            nodes.append(
                (float(seg.t[k]), StateVec(complex(seg.y[0, k]), complex(seg.y[1, k])))
            )
        state = seg.y[:, -1]
    return Trajectory(problem, lam, segments, seg_bounds, nodes)


# ---------------------------------------------------------------------------
# fundamental solutions, cached


def _phi_init(alpha: float) -> tuple[float, float]:
    return (-math.sin(alpha), math.cos(alpha))


def _psi_init(alpha: float) -> tuple[float, float]:
    return (-math.cos(alpha), -math.sin(alpha))


class _TrajectoryCache:
    """Bounded LRU of fundamental-solution trajectories, thread safe."""

    def __init__(self, capacity: int = 4096):
        self.capacity = capacity
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                self.hits += 1
                return self._data[key]
            self.misses += 1
            return None

    def put(self, key, value) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.capacity:
                self._data.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self.hits = 0
            self.misses = 0


_cache = _TrajectoryCache()


def set_cache_capacity(capacity: int) -> None:
    _cache.capacity = int(capacity)


def clear_cache() -> None:
    _cache.clear()


def fundamental_trajectory(problem: SLProblem, lam: complex, which: str) -> Trajectory:
    """Cached trajectory of phi or psi at the given spectral parameter."""
    if which not in ("phi", "psi"):
        raise ValueError("which must be 'phi' or 'psi'")
    lam = complex(lam)
    key = (problem, lam.real, lam.imag, which)
    traj = _cache.get(key)
    if traj is None:
        init = _phi_init(problem.alpha) if which == "phi" else _psi_init(problem.alpha)
        traj = propagate(problem, lam, init)
        _cache.put(key, traj)
    return traj


def phi_at(problem: SLProblem, lam: complex, t: float) -> StateVec:
    """phi and its quasi-derivative at t."""
    return fundamental_trajectory(problem, lam, "phi").state_at(t)


def psi_at(problem: SLProblem, lam: complex, t: float) -> StateVec:
    """psi and its quasi-derivative at t."""
    return fundamental_trajectory(problem, lam, "psi").state_at(t)


def wronskian(problem: SLProblem, lam: complex, t: float) -> complex:
    """phi(t) psi^[1](t) - phi^[1](t) psi(t); identically 1 for exact solutions."""
    ph = phi_at(problem, lam, t)
    ps = psi_at(problem, lam, t)
    return ph.y * ps.y1 - ph.y1 * ps.y


def wronskian_profile(problem: SLProblem, lam: complex, ts: Iterable[float]) -> np.ndarray:
    """Wronskian sampled along the interval, for conservation checks."""
    phi_tr = fundamental_trajectory(problem, lam, "phi")
    psi_tr = fundamental_trajectory(problem, lam, "psi")
    t_arr = np.asarray(list(ts), dtype=float)
    py, py1 = phi_tr.eval(t_arr)
    sy, sy1 = psi_tr.eval(t_arr)
    return py * sy1 - py1 * sy
