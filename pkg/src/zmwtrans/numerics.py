"""Cylindrical Bessel functions, their roots, and a damped least-squares solver.

Everything in this module is pure floating-point math with no hidden state,
so every function is reentrant and safe to call from any number of threads.

Evaluation strategy for J_n(x): the defining power series below x = 12,
normalized downward (Miller) recurrence above.  One code path cannot hold
1e-10 relative accuracy over the whole supported range; the series loses
digits to cancellation for large arguments while the recurrence needs a
decaying tail to seed from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "ModeFamily",
    "BesselRoot",
    "FitProblem",
    "RootBracketError",
    "FitConvergenceError",
    "SingularEquationsError",
    "bessel_j",
    "bessel_j1_prime",
    "mode_root",
    "fit_least_squares",
]

MAX_ORDER = 10
MAX_ARGUMENT = 1.0e4

_SERIES_CUTOFF = 12.0
_ROOT_SCAN_LIMIT = 30.0
_ROOT_SCAN_STEP = 0.05
_BISECTION_WIDTH = 1e-13


class ModeFamily(str, Enum):
    """Cylindrical mode family: TE cutoffs are roots of J_m', TM of J_m."""

    TE = "TE"
    TM = "TM"


class RootBracketError(RuntimeError):
    """No sign change found while scanning for a requested root."""


class SingularEquationsError(RuntimeError):
    """Normal equations are singular; some parameter has no effect on the model."""


class FitConvergenceError(RuntimeError):
    """Iteration cap reached before the squared residual went stationary.

    Carries the best parameters and squared residual seen so far.
    """

    def __init__(self, message: str, parameters: np.ndarray, residual: float):
        super().__init__(message)
        self.parameters = parameters
        self.residual = residual


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind, J_n(x), integer order 0..10.

    Parameters
    ----------
    order : int
        Order n, 0 <= n <= 10.
    x : float
        Argument, 0 <= x <= 1e4.

    Returns
    -------
    float
        J_n(x), relative accuracy about 1e-13 away from zeros of J_n.

    Raises
    ------
    ValueError
        For negative x, x beyond 1e4, or an unsupported order.
    """
    if order != int(order) or order < 0 or order > MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}], got {order!r}")
    order = int(order)
    x = float(x)
    if x < 0.0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x > MAX_ARGUMENT:
        raise ValueError(f"argument must be <= {MAX_ARGUMENT:g}, got {x}")
    if x <= _SERIES_CUTOFF:
        return _bessel_series(order, x)
    return _bessel_miller(order, x)


def _bessel_series(order: int, x: float) -> float:
    """Defining power series sum((-1)^k (x/2)^(n+2k) / (k! (n+k)!))."""
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = half**order / math.factorial(order)
    total = term
    scale = abs(term)
    for k in range(1, 400):
        term *= -(half * half) / (k * (k + order))
        total += term
        scale = max(scale, abs(total))
        if abs(term) <= 1e-17 * scale:
            break
    return total


def _bessel_miller(order: int, x: float) -> float:
    """Downward recurrence seeded in the decaying tail, normalized by
    J_0 + 2*(J_2 + J_4 + ...) = 1."""
    start = int(x + 20.0 * x ** (1.0 / 3.0) + 26.0)
    j_up = 0.0  # J_{k+1}
    j_k = 1e-30  # J_k at k = start
    wanted = 0.0
    norm = 0.0
    for k in range(start, 0, -1):
        j_down = (2.0 * k / x) * j_k - j_up  # J_{k-1}
        j_up = j_k
        j_k = j_down
        if abs(j_k) > 1e100:  # rescale; only ratios matter until normalization
            j_k *= 1e-100
            j_up *= 1e-100
            norm *= 1e-100
            wanted *= 1e-100
        below = k - 1
        if below == order:
            wanted = j_k
        if below > 0 and below % 2 == 0:
            norm += 2.0 * j_k
    norm += j_k  # j_k is J_0 after the final pass
    return wanted / norm


def bessel_j1_prime(x: float) -> float:
    """Derivative of J_1: J_0(x) - J_1(x)/x for x > 0, 1/2 at x = 0."""
    x = float(x)
    if x == 0.0:
        return 0.5
    return bessel_j(0, x) - bessel_j(1, x) / x


def _bessel_j_prime(order: int, x: float) -> float:
    """J_n'(x) via J_{n-1} - (n/x) J_n; requires x > 0 unless n == 0 or 1."""
    if order == 0:
        return -bessel_j(1, x)
    if order == 1:
        return bessel_j1_prime(x)
    return bessel_j(order - 1, x) - (order / x) * bessel_j(order, x)


@dataclass(frozen=True)
class BesselRoot:
    """One TE/TM cutoff root: the radial_index-th positive zero of J_m' (TE)
    or J_m (TM)."""

    family: ModeFamily
    azimuthal_index: int
    radial_index: int
    value: float

    def __post_init__(self) -> None:
        if self.azimuthal_index < 0:
            raise ValueError("azimuthal_index must be >= 0")
        if self.radial_index < 1:
            raise ValueError("radial_index must be >= 1")
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise ValueError("root value must be positive and finite")
        f = _bessel_j_prime if self.family is ModeFamily.TE else bessel_j
        residual = f(self.azimuthal_index, self.value)
        if abs(residual) > 1e-10:
            raise ValueError(
                f"{self.family.value}({self.azimuthal_index},{self.radial_index}) "
                f"candidate {self.value!r} is not a root (residual {residual:.2e})"
            )


@lru_cache(maxsize=None)
def mode_root(family: ModeFamily, m: int, n: int) -> BesselRoot:
    """n-th positive root of J_m' (TE) or J_m (TM), for m <= 5, n <= 5.

    Brackets the root by scanning for a sign change on (0, 30], bisects the
    bracket to width 1e-13, then applies one Newton polish.  TE(1,1) is the
    smallest cutoff of all supported modes, which is what makes a
    subwavelength cylindrical hole modeless.

    Raises
    ------
    RootBracketError
        If no n-th sign change exists in the scan window.
    """
    family = ModeFamily(family)
    if not (0 <= m <= 5):
        raise ValueError(f"azimuthal index must be in [0, 5], got {m}")
    if not (1 <= n <= 5):
        raise ValueError(f"radial index must be in [1, 5], got {n}")

    if family is ModeFamily.TE:
        f: Callable[[float], float] = lambda x: _bessel_j_prime(m, x)
        # Bessel's equation gives J'' in terms of J and J'.
        fprime: Callable[[float], float] = lambda x: (
            -_bessel_j_prime(m, x) / x - (1.0 - (m / x) ** 2) * bessel_j(m, x)
        )
    else:
        f = lambda x: bessel_j(m, x)
        fprime = lambda x: _bessel_j_prime(m, x)

    lo = _ROOT_SCAN_STEP
    f_lo = f(lo)
    found = 0
    root = None
    while lo < _ROOT_SCAN_LIMIT:
        hi = min(lo + _ROOT_SCAN_STEP, _ROOT_SCAN_LIMIT)
        f_hi = f(hi)
        if f_lo == 0.0:
            found += 1
            if found == n:
                root = lo
                break
        elif f_lo * f_hi < 0.0:
            found += 1
            if found == n:
                root = _bisect(f, lo, hi, f_lo)
                break
        lo, f_lo = hi, f_hi
    if root is None:
        raise RootBracketError(
            f"no bracket for {family.value}({m},{n}) in (0, {_ROOT_SCAN_LIMIT:g}]"
        )

    slope = fprime(root)
    if slope != 0.0:
        root -= f(root) / slope
    if abs(f(root)) > 1e-12:
        raise RootBracketError(
            f"refinement of {family.value}({m},{n}) stalled at residual {f(root):.2e}"
        )
    return BesselRoot(family, m, n, root)


def _bisect(f: Callable[[float], float], lo: float, hi: float, f_lo: float) -> float:
    while hi - lo > _BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


@dataclass
class FitProblem:
    """A nonlinear least-squares problem on an ordered 1-D grid.

    model(x, params) must accept the full abscissa array and a parameter
    vector, returning one model value per abscissa.  The data must contain
    at least as many points as there are parameters, with strictly
    increasing abscissas.
    """

    model: Callable[[np.ndarray, np.ndarray], np.ndarray]
    x: np.ndarray
    y: np.ndarray
    initial_guess: Sequence[float]
    tolerance: float = 1e-12

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.initial_guess = np.asarray(self.initial_guess, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise ValueError("x and y must be 1-D arrays of equal length")
        if self.x.size < self.initial_guess.size:
            raise ValueError(
                f"need at least {self.initial_guess.size} data points, have {self.x.size}"
            )
        if self.x.size > 1 and not np.all(np.diff(self.x) > 0.0):
            raise ValueError("abscissas must be strictly increasing")
        if not (self.tolerance > 0.0):
            raise ValueError("tolerance must be positive")


_DAMPING_START = 1e-3
_DAMPING_LIMIT = 1e15
_MAX_ITERATIONS = 200


def fit_least_squares(
    problem: FitProblem,
    max_iterations: int = _MAX_ITERATIONS,
    history: list | None = None,
) -> tuple[np.ndarray, float]:
    """Damped Gauss-Newton minimization of sum((model(x, p) - y)^2).

    The damping follows a fixed Levenberg-style schedule: start at 1e-3,
    multiply by 10 whenever a trial step increases the squared residual,
    divide by 10 on every accepted step.  Steps are accepted only when they
    do not increase the residual, so the residual over accepted iterations
    is non-increasing.  The run is deterministic for identical inputs.

    Parameters
    ----------
    problem : FitProblem
    max_iterations : int
        Cap counting every trial step, accepted or not.
    history : list, optional
        If given, (parameters, squared_residual) is appended after every
        accepted step.

    Returns
    -------
    (parameters, residual)
        Parameter vector and final squared residual, once the residual is
        stationary within problem.tolerance.

    Raises
    ------
    SingularEquationsError
        If the damped normal equations cannot be solved.
    FitConvergenceError
        If the iteration cap is reached first (best-so-far attached).
    """
    x, y = problem.x, problem.y
    params = problem.initial_guess.astype(float).copy()
    residual_vec = np.asarray(problem.model(x, params), dtype=float) - y
    sumsq = float(residual_vec @ residual_vec)
    if history is not None:
        history.append((params.copy(), sumsq))
    if sumsq == 0.0:
        return params, 0.0

    damping = _DAMPING_START
    jac = None
    for _ in range(max_iterations):
        if jac is None:
            jac = _jacobian(problem.model, x, params)
            grad = jac.T @ residual_vec
            hess = jac.T @ jac
            diag = np.diag(hess).copy()
            if not np.all(np.isfinite(hess)):
                raise SingularEquationsError("Jacobian is not finite at current point")
            if np.any(diag <= 0.0):
                raise SingularEquationsError(
                    "singular normal equations: a parameter does not affect the model"
                )
        try:
            step = np.linalg.solve(hess + damping * np.diag(diag), -grad)
        except np.linalg.LinAlgError as exc:
            raise SingularEquationsError(f"normal equations are singular: {exc}") from exc

        trial = params + step
        trial_vec = np.asarray(problem.model(x, trial), dtype=float) - y
        trial_sumsq = float(trial_vec @ trial_vec)

        if np.isfinite(trial_sumsq) and trial_sumsq <= sumsq:
            drop = sumsq - trial_sumsq
            params, residual_vec, sumsq = trial, trial_vec, trial_sumsq
            jac = None
            damping = max(damping / 10.0, 1e-30)
            if history is not None:
                history.append((params.copy(), sumsq))
            if sumsq == 0.0 or drop <= problem.tolerance * max(sumsq, 1e-300):
                return params, sumsq
        else:
            damping *= 10.0
            # A rejected microscopic step means the point is stationary.
            if float(np.max(np.abs(step))) <= 1e-15 * (1.0 + float(np.max(np.abs(params)))):
                return params, sumsq
            if damping > _DAMPING_LIMIT:
                return params, sumsq

    raise FitConvergenceError(
        f"no stationary residual after {max_iterations} iterations",
        params,
        sumsq,
    )


def _jacobian(
    model: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x: np.ndarray,
    params: np.ndarray,
) -> np.ndarray:
    """Central-difference Jacobian, step ~ eps^(1/3) per parameter scale."""
    n = params.size
    jac = np.empty((x.size, n))
    for j in range(n):
        h = 6.06e-6 * max(abs(params[j]), 1.0)
        plus = params.copy()
        minus = params.copy()
        plus[j] += h
        minus[j] -= h
        jac[:, j] = (
            np.asarray(model(x, plus), dtype=float)
            - np.asarray(model(x, minus), dtype=float)
        ) / (2.0 * h)
    return jac
