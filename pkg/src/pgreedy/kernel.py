"""Translation-invariant radial kernels ``K(x, y) = phi(eps * ||x - y||_2)``.

Two families are provided:

====================  ===========================================  =========
id                    profile ``phi(r)``                           phi(0)
====================  ===========================================  =========
``gaussian``          ``exp(-r**2)``                               1
``wendland-k0``       ``(1 - r)_+**2``                             1
``wendland-k1``       ``(1 - r)_+**4 (4r + 1)``                    1
``wendland-k2``       ``(1 - r)_+**6 (35r**2 + 18r + 3) / 3``      1
====================  ===========================================  =========

The Wendland profiles are the ``phi_{3,k}`` functions, positive definite in
dimension up to 3, scaled so that ``phi(0) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from pgreedy.errors import DegenerateInputError, InputError

KERNEL_IDS = ("gaussian", "wendland-k0", "wendland-k1", "wendland-k2")

# Nominal Sobolev order assigned to each Wendland index when used as a
# finite-smoothness kernel (exact in d = 3).
WENDLAND_BETA = {0: 2.0, 1: 3.0, 2: 4.0}


@dataclass(frozen=True)
class SmoothnessClass:
    """Finite smoothness ``beta`` (native space ~ Sobolev ``W_2^beta``) or infinite.

    ``beta is None`` encodes infinite smoothness.
    """

    beta: Optional[float] = None

    @property
    def finite(self) -> bool:
        return self.beta is not None

    @classmethod
    def infinite(cls) -> "SmoothnessClass":
        return cls(None)

    def check_dim(self, dim: int) -> None:
        if self.finite and not self.beta > dim / 2:
            raise InputError(f"finite smoothness needs beta > d/2, got beta={self.beta}, d={dim}")


@dataclass(frozen=True)
class KernelSpec:
    """A radial kernel: family, Wendland index, shape parameter and dimension."""

    family: str
    shape: float = 1.0
    dim: int = 1
    k: Optional[int] = None

    def __post_init__(self):
        if self.family not in ("gaussian", "wendland"):
            raise InputError(f"unknown kernel family {self.family!r}")
        if self.family == "wendland":
            if self.k not in (0, 1, 2):
                raise InputError(f"Wendland index must be 0, 1 or 2, got {self.k!r}")
            if self.dim > 3:
                raise InputError("phi_{3,k} Wendland kernels are positive definite only for d <= 3")
        elif self.k is not None:
            raise InputError("Gaussian kernel takes no Wendland index")
        if not (np.isfinite(self.shape) and self.shape > 0):
            raise InputError(f"shape must be positive, got {self.shape!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")

    @classmethod
    def from_id(cls, kernel_id: str, shape: float = 1.0, dim: int = 1) -> "KernelSpec":
        """Build a spec from a serialized id such as ``"wendland-k1"``."""
        if kernel_id == "gaussian":
            return cls("gaussian", shape, dim)
        if kernel_id in KERNEL_IDS:
            return cls("wendland", shape, dim, int(kernel_id[-1]))
        raise InputError(f"unknown kernel id {kernel_id!r}; expected one of {', '.join(KERNEL_IDS)}")

    @property
    def id(self) -> str:
        return "gaussian" if self.family == "gaussian" else f"wendland-k{self.k}"

    @property
    def smoothness(self) -> SmoothnessClass:
        if self.family == "gaussian":
            return SmoothnessClass.infinite()
        return SmoothnessClass(WENDLAND_BETA[self.k])

    @property
    def native_order(self) -> Optional[float]:
        """Sobolev order of the native space in ``dim`` dimensions (``None`` for Gaussian).

        For ``phi_{3,k}`` restricted to R^d this is ``(d + 1) / 2 + k``, which
        coincides with :attr:`smoothness` only for ``d = 3``.
        """
        if self.family == "gaussian":
            return None
        return (self.dim + 1) / 2 + self.k

    @property
    def phi0(self) -> float:
        return 1.0

    def metadata(self) -> dict:
        return {
            "kernel": self.id,
            "shape": self.shape,
            "dim": self.dim,
            "beta": self.smoothness.beta,
            "native_sobolev_order": self.native_order,
        }


def eval_radial(spec: KernelSpec, r):
    """Evaluate the radial profile ``phi(eps * r)``; vectorized over ``r``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InputError("radius must be nonnegative")
    s = spec.shape * r
    if spec.family == "gaussian":
        out = np.exp(-(s * s))
    else:
        t = np.maximum(1.0 - s, 0.0)
        if spec.k == 0:
            out = t**2
        elif spec.k == 1:
            out = t**4 * (4.0 * s + 1.0)
        else:
            out = t**6 * (35.0 * s * s + 18.0 * s + 3.0) / 3.0
    return out if out.ndim else float(out)


def _as_point(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != dim:
        raise InputError(f"point has dimension {x.shape[0]}, kernel expects {dim}")
    return x


def as_points(pts, dim: int) -> np.ndarray:
    """Coerce ``pts`` to a float array of shape ``(n, dim)``."""
    pts = np.asarray(pts, dtype=float)
    if pts.size == 0:
        return np.empty((0, dim))
    if pts.ndim == 1 and dim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise InputError(f"expected points of shape (n, {dim}), got {pts.shape}")
    return pts


def distances(x: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Euclidean distances from ``x`` to every row of ``pts``."""
    diff = pts - x
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """``K(x, y)``; exactly symmetric in its arguments."""
    x = _as_point(x, spec.dim)
    y = _as_point(y, spec.dim)
    diff = x - y
    return eval_radial(spec, np.sqrt(np.dot(diff, diff)))


def kernel_column(spec: KernelSpec, x, pts) -> np.ndarray:
    """Vector ``[K(p, x) for p in pts]``."""
    x = _as_point(x, spec.dim)
    pts = as_points(pts, spec.dim)
    if len(pts) == 0:
        return np.empty(0)
    return np.asarray(eval_radial(spec, distances(x, pts)))


def kernel_block(spec: KernelSpec, xs, ys) -> np.ndarray:
    """Matrix ``[[K(x, y) for y in ys] for x in xs]``."""
    xs = as_points(xs, spec.dim)
    ys = as_points(ys, spec.dim)
    diff = xs[:, None, :] - ys[None, :, :]
    return np.asarray(eval_radial(spec, np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))))


def kernel_matrix(spec: KernelSpec, pts) -> np.ndarray:
    """Kernel matrix ``A_ij = K(x_i, x_j)`` on pairwise-distinct points."""
    pts = as_points(pts, spec.dim)
    if len(np.unique(pts, axis=0)) != len(pts):
        raise DegenerateInputError("repeated points make the kernel matrix singular")
    A = kernel_block(spec, pts, pts)
    # symmetric to the bit already; enforce the diagonal exactly
    np.fill_diagonal(A, spec.phi0)
    return A
