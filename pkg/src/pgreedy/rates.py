"""Decay-rate models, least-squares fits on linearized coordinates, and bound constants.

Models
------
algebraic     ``c * n**p``                    fit of ``log y`` against ``log n``
exponential   ``c2 * exp(-c3 * n**(1/d))``   fit of ``log y`` against ``n**(1/d)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from pgreedy.errors import InputError, InsufficientDataError
from pgreedy.greedy import GreedyTrace
from pgreedy.kernel import SmoothnessClass

BURN_IN = 0.25
TAIL_FACTOR = 100.0

SUMMARY_FIELDS = ["kernel", "dim", "beta", "model", "c", "p_or_c3", "window_lo", "window_hi", "r_squared"]

TraceLike = Union[GreedyTrace, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class RateFit:
    """A fitted decay model.

    For ``model == "algebraic"`` the pair ``(coef, rate)`` is ``(c, p)``; for
    ``"exponential"`` it is ``(c2, c3)``. ``window`` is the inclusive range of
    iteration numbers used, and ``r_squared`` is measured on the linearized
    data.
    """

    model: str
    coef: float
    rate: float
    window: Tuple[int, int]
    r_squared: float
    dim: Optional[int] = None

    @property
    def c(self) -> float:
        return self.coef

    @property
    def p(self) -> float:
        if self.model != "algebraic":
            raise AttributeError("exponential fits have no exponent p")
        return self.rate

    @property
    def c2(self) -> float:
        return self.coef

    @property
    def c3(self) -> float:
        if self.model != "exponential":
            raise AttributeError("algebraic fits have no rate c3")
        return self.rate

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if self.model == "algebraic":
            return self.coef * n**self.rate
        return self.coef * np.exp(-self.rate * n ** (1.0 / self.dim))

    def summary_row(self, kernel: str, beta=None, model: Optional[str] = None) -> dict:
        return {
            "kernel": kernel,
            "dim": self.dim if self.dim is not None else "",
            "beta": "" if beta is None else beta,
            "model": model or self.model,
            "c": repr(self.coef),
            "p_or_c3": repr(self.rate),
            "window_lo": self.window[0],
            "window_hi": self.window[1],
            "r_squared": repr(self.r_squared),
        }


def _series(trace: TraceLike, column: str = "max_power") -> Tuple[np.ndarray, float]:
    if isinstance(trace, GreedyTrace):
        values = getattr(trace, column)
        if values is None:
            raise InputError(f"trace has no {column} column")
        return np.asarray(values, dtype=float), trace.tol_sq
    return np.asarray(trace, dtype=float).reshape(-1), GreedyTrace().tol_sq


def default_window(max_power, tol_sq: float = 1e-15) -> Tuple[int, int]:
    """Skip the first quarter of iterations and the cancellation-dominated tail.

    The tail starts at the first iteration after the burn-in whose squared
    value falls below ``100 * tol_sq``.
    """
    y = np.asarray(max_power, dtype=float)
    total = len(y)
    lo = int(math.floor(BURN_IN * total)) + 1
    hi = total
    for n in range(lo, total + 1):
        if y[n - 1] ** 2 < TAIL_FACTOR * tol_sq:
            hi = n - 1
            break
    return lo, hi


def _resolve_window(y: np.ndarray, tol_sq: float, window, power=None) -> Tuple[int, int]:
    if window is None:
        lo, hi = default_window(y if power is None else power, tol_sq)
    else:
        lo, hi = int(window[0]), int(window[1])
    hi = min(hi, len(y))
    if lo < 1:
        raise InputError("fit window must start at n >= 1")
    if hi - lo + 1 < 3:
        raise InsufficientDataError(f"fit window [{lo}, {hi}] holds fewer than 3 points")
    if np.any(y[lo - 1 : hi] <= 0):
        raise InputError("values in the fit window must be positive")
    return lo, hi


def linear_fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """Ordinary least squares ``y ~ slope * x + intercept``; returns ``(slope, intercept, r2)``."""
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    slope = float(dx @ dy) / sxx
    intercept = ym - slope * xm
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(dy @ dy)
    # constant data: variation at round-off level is fitted exactly by slope 0
    if ss_tot <= len(y) * (16 * np.finfo(float).eps * max(abs(ym), 1.0)) ** 2:
        r2 = 1.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return slope, intercept, r2


def _algebraic(y: np.ndarray, lo: int, hi: int, dim=None) -> RateFit:
    n = np.arange(lo, hi + 1, dtype=float)
    slope, intercept, r2 = linear_fit(np.log(n), np.log(y[lo - 1 : hi]))
    return RateFit("algebraic", math.exp(intercept), slope, (lo, hi), r2, dim)


def fit_algebraic(trace: TraceLike, window=None, dim: Optional[int] = None) -> RateFit:
    """Fit ``max_power ~ c * n**p`` by log-log least squares."""
    y, tol_sq = _series(trace)
    lo, hi = _resolve_window(y, tol_sq, window)
    if dim is None and isinstance(trace, GreedyTrace):
        dim = trace.metadata.get("kernel", {}).get("dim")
    return _algebraic(y, lo, hi, dim)


def fit_exponential(trace: TraceLike, dim: int, window=None) -> RateFit:
    """Fit ``max_power ~ c2 * exp(-c3 * n**(1/dim))`` by least squares on ``log``."""
    y, tol_sq = _series(trace)
    lo, hi = _resolve_window(y, tol_sq, window)
    n = np.arange(lo, hi + 1, dtype=float)
    slope, intercept, r2 = linear_fit(n ** (1.0 / dim), np.log(y[lo - 1 : hi]))
    return RateFit("exponential", math.exp(intercept), -slope, (lo, hi), r2, dim)


def fit_fill_decay(trace: TraceLike, window=None) -> RateFit:
    """Fit ``fill_distance ~ c * n**p``.

    A plain sequence is taken as the fill-distance column. For a trace, the
    default window is the one chosen for its ``max_power`` column.
    """
    if isinstance(trace, GreedyTrace):
        if trace.fill_distance is None:
            raise InputError("trace was recorded without fill distances")
        y = np.asarray(trace.fill_distance, dtype=float)
        power = np.asarray(trace.max_power, dtype=float)
        lo, hi = _resolve_window(y, trace.tol_sq, window, power=power)
        dim = trace.metadata.get("kernel", {}).get("dim")
    else:
        y = np.asarray(trace, dtype=float).reshape(-1)
        lo, hi = _resolve_window(y, GreedyTrace().tol_sq, window)
        dim = None
    return _algebraic(y, lo, hi, dim)


def fixed_rate_prefactor(values, exponent: float, window: Tuple[int, int]) -> float:
    """Least-squares prefactor ``c`` of ``c * n**exponent`` with the exponent held fixed."""
    lo, hi = window
    n = np.arange(lo, hi + 1, dtype=float)
    y = np.asarray(values, dtype=float)[lo - 1 : hi]
    return float(np.exp(np.mean(np.log(y) - exponent * np.log(n))))


def theorem4_constants(c1: float, c2: float, c3: float, beta: float, dim: int) -> Tuple[float, float, float]:
    """Greedy-rate constants from the constants of the best-point-set rates.

    ``c1 * 2**(5 beta/d - 3/2)``, ``sqrt(2 c2)`` and ``2**(-1 - 2/d) * c3``.
    """
    if min(c1, c2, c3) <= 0:
        raise InputError("constants must be positive")
    hat_c1 = c1 * 2.0 ** (5.0 * beta / dim - 1.5)
    hat_c2 = math.sqrt(2.0 * c2)
    hat_c3 = 2.0 ** (-1.0 - 2.0 / dim) * c3
    return hat_c1, hat_c2, hat_c3


def algebraic_exponent(beta: float, dim: int, improved: bool = False) -> float:
    """``-beta/d + 1/2`` (proven greedy rate) or ``-beta/d`` (observed improved rate)."""
    return -beta / dim + (0.0 if improved else 0.5)


def theoretical_curve(smoothness: SmoothnessClass, dim: int, constants, n_values, improved: bool = False) -> np.ndarray:
    """Evaluate a reference decay curve at ``n_values``.

    Finite smoothness: ``c * n**(-beta/d + 1/2)``, or ``c * n**(-beta/d)`` with
    ``improved=True``; ``constants`` is ``c``. Infinite smoothness:
    ``c2 * exp(-c3 * n**(1/d))`` with ``constants = (c2, c3)``.
    """
    n = np.asarray(n_values, dtype=float)
    if smoothness.finite:
        c = float(np.atleast_1d(constants)[0])
        if c <= 0:
            raise InputError("constants must be positive")
        return c * n ** algebraic_exponent(smoothness.beta, dim, improved)
    c2, c3 = constants
    if c2 <= 0 or c3 <= 0:
        raise InputError("constants must be positive")
    return c2 * np.exp(-c3 * n ** (1.0 / dim))
