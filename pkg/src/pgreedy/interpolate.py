"""Interpolation on greedy centers, and dense reference computations.

The Newton path reuses the triangle ``L[i, k] = v_k(x_i)`` built during the
greedy run: coefficients come from forward substitution ``L c = f(X)`` and
Newton values at a new point ``x`` from ``L v(x) = k_X(x)``. Since
``A = L L^T`` on the centers, the kernel-translate coefficients are
``alpha = L^{-T} c``.

The dense functions (:func:`direct_solve`, :func:`power_function_direct`,
:func:`residual_native_norm`) factor the full kernel matrix and serve as
oracles for small problems. They never regularize.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from pgreedy.errors import BreakdownError, ConditioningError, InputError
from pgreedy.greedy import GreedyState
from pgreedy.kernel import KernelSpec, as_points, kernel_block, kernel_matrix

# Radicands below -NEG_RADICAND_TOL signal a broken factorization.
NEG_RADICAND_TOL = 1e-10


@dataclass
class Interpolant:
    """``sum_k c_k v_k`` over the Newton basis of ``centers``."""

    spec: KernelSpec
    centers: np.ndarray
    newton_coeffs: np.ndarray
    newton_at_selected: np.ndarray

    @property
    def kernel_coeffs(self) -> np.ndarray:
        """Coefficients ``alpha`` of the same function in the kernel translates ``K(., x_i)``."""
        if len(self.newton_coeffs) == 0:
            return np.empty(0)
        return scipy.linalg.solve_triangular(self.newton_at_selected.T, self.newton_coeffs, lower=False)

    def __call__(self, x):
        return evaluate_interpolant(self, x)

    def to_csv(self, path) -> None:
        """Write centers and kernel-translate coefficients, one center per row."""
        dim = self.spec.dim
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([*[f"x{i + 1}" for i in range(dim)], "alpha"])
            for c, a in zip(self.centers, self.kernel_coeffs):
                w.writerow([*[repr(float(v)) for v in c], repr(float(a))])


def newton_coefficients(f_at_centers, state: GreedyState) -> np.ndarray:
    """Solve ``L c = f(X)`` with the greedy change-of-basis triangle ``L``."""
    f = np.asarray(f_at_centers, dtype=float)
    L = state.newton_at_selected
    if f.shape != (state.n,):
        raise InputError(f"expected {state.n} values, got shape {f.shape}")
    if state.n == 0:
        return np.empty(0)
    if np.any(np.diag(L) <= 0):
        raise BreakdownError("Newton triangle has a non-positive diagonal entry")
    return scipy.linalg.solve_triangular(L, f, lower=True)


def build_interpolant(spec: KernelSpec, candidates, state: GreedyState, f_at_centers) -> Interpolant:
    """Interpolant of the values ``f_at_centers`` sampled at ``state.selected``."""
    candidates = as_points(candidates, spec.dim)
    return Interpolant(
        spec=spec,
        centers=candidates[state.selected],
        newton_coeffs=newton_coefficients(f_at_centers, state),
        newton_at_selected=state.newton_at_selected.copy(),
    )


def newton_values_at(interp: Interpolant, x) -> np.ndarray:
    """Newton basis values at query points; shape ``(m, n)``."""
    x = as_points(np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1, interp.spec.dim), interp.spec.dim)
    if len(interp.centers) == 0:
        return np.empty((len(x), 0))
    kx = kernel_block(interp.spec, interp.centers, x)
    return scipy.linalg.solve_triangular(interp.newton_at_selected, kx, lower=True).T


def evaluate_interpolant(interp: Interpolant, x, newton_values_at_x=None):
    """``sum_k c_k v_k(x)``; a float for a single point, an array for ``(m, d)`` input.

    ``newton_values_at_x`` may supply precomputed Newton values (e.g. the
    greedy table restricted to the query candidates).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 0 or (x.ndim == 1 and (interp.spec.dim > 1 or x.size == 1))
    V = newton_values_at(interp, x) if newton_values_at_x is None else np.atleast_2d(newton_values_at_x)
    out = V @ interp.newton_coeffs
    return float(out[0]) if single else out


def _factor(A: np.ndarray):
    try:
        return scipy.linalg.cho_factor(A, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"kernel matrix is not numerically positive definite: {exc}") from exc


def direct_solve(spec: KernelSpec, centers, f_at_centers) -> np.ndarray:
    """Kernel-translate coefficients ``alpha`` with ``A alpha = f(X)`` by dense Cholesky."""
    centers = as_points(centers, spec.dim)
    b = np.asarray(f_at_centers, dtype=float)
    if b.shape != (len(centers),):
        raise InputError(f"expected {len(centers)} values, got shape {b.shape}")
    if len(centers) == 0:
        return np.empty(0)
    return scipy.linalg.cho_solve(_factor(kernel_matrix(spec, centers)), b)


def _query(spec: KernelSpec, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1 and x.size == spec.dim
    return as_points(x.reshape(-1, spec.dim), spec.dim), single


def _checked_sqrt(radicand: np.ndarray, centers: np.ndarray, pts: np.ndarray) -> np.ndarray:
    if np.any(radicand < -NEG_RADICAND_TOL):
        raise ConditioningError(f"negative squared Power Function {radicand.min():.3e}")
    out = np.sqrt(np.maximum(radicand, 0.0))
    # P vanishes on the centers; the dense formula leaves ~sqrt(eps) there
    out[(pts[:, None, :] == centers[None, :, :]).all(axis=2).any(axis=1)] = 0.0
    return out


def power_function_direct(spec: KernelSpec, centers, x):
    """``sqrt(K(x, x) - k_x^T A^{-1} k_x)`` from a dense factorization of ``A``."""
    centers = as_points(centers, spec.dim)
    pts, single = _query(spec, x)
    diag = np.full(len(pts), spec.phi0)
    if len(centers) == 0:
        out = np.sqrt(diag)
    else:
        kx = kernel_block(spec, centers, pts)
        sol = scipy.linalg.cho_solve(_factor(kernel_matrix(spec, centers)), kx)
        out = _checked_sqrt(diag - np.einsum("ij,ij->j", kx, sol), centers, pts)
    return float(out[0]) if single else out


def residual_native_norm(spec: KernelSpec, centers, x):
    """Native-space norm of ``K(., x) - Pi K(., x)`` from its explicit expansion.

    With ``alpha`` the interpolation coefficients of ``K(., x)``:
    ``||K(., x)||^2 - 2 (K(., x), Pi) + ||Pi||^2
    = K(x, x) - 2 alpha . k_x + alpha^T A alpha``.
    """
    centers = as_points(centers, spec.dim)
    pts, single = _query(spec, x)
    diag = np.full(len(pts), spec.phi0)
    if len(centers) == 0:
        out = np.sqrt(diag)
    else:
        A = kernel_matrix(spec, centers)
        kx = kernel_block(spec, centers, pts)
        try:
            alpha = np.linalg.solve(A, kx)
        except np.linalg.LinAlgError as exc:
            raise ConditioningError(str(exc)) from exc
        cross = np.einsum("ij,ij->j", alpha, kx)
        proj = np.einsum("ij,ij->j", alpha, A @ alpha)
        out = _checked_sqrt(diag - 2.0 * cross + proj, centers, pts)
    return float(out[0]) if single else out
