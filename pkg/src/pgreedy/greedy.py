"""P-greedy selection with incremental Newton basis and Power Function.

The state keeps, for every candidate ``x``, the squared Power Function
``P_n(x)**2`` and the values ``v_1(x), ..., v_n(x)`` of the Newton basis.
Each step picks ``x_n = argmax P_{n-1}``, builds the next Newton function

    v_n(x) = (K(x, x_n) - sum_{k<n} v_k(x_n) v_k(x)) / P_{n-1}(x_n)

and downdates ``P_n(x)**2 = P_{n-1}(x)**2 - v_n(x)**2``. Only one kernel
column is evaluated per step; the procedure is a partial pivoted Cholesky
factorization of the candidate kernel matrix that never forms the matrix.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from pgreedy.errors import BreakdownError, ExhaustedError, InputError
from pgreedy.kernel import KernelSpec, as_points, distances, kernel_column

logger = logging.getLogger(__name__)

# Pivots with P**2 at or below this are numerical noise (P <= 1e-15).
PIVOT_FLOOR_SQ = 1e-30

# Values within this relative distance of the maximum count as tied, so that
# symmetric grids resolve mathematical ties by index rather than by round-off.
TIE_RTOL = 1e-12

TIE_BREAK = f"lowest-index (relative tie tolerance {TIE_RTOL:g})"


@dataclass(frozen=True)
class StopCriteria:
    """Stop when ``max P**2 <= tol_sq`` or after ``max_n`` selections."""

    tol_sq: float = 1e-15
    max_n: int = 1000

    def __post_init__(self):
        if not self.tol_sq > 0:
            raise InputError("tol_sq must be positive")
        if int(self.max_n) != self.max_n or self.max_n < 1:
            raise InputError("max_n must be a positive integer")


@dataclass
class GreedyState:
    """Mutable state of a P-greedy run over a fixed candidate set.

    Newton columns are stored as rows of ``_values`` (one contiguous row per
    basis function), so appending a function never moves existing data.
    """

    power_sq: np.ndarray
    selected: list = field(default_factory=list)
    _values: np.ndarray = None
    _triangle: np.ndarray = None
    _taken: np.ndarray = None

    @property
    def n(self) -> int:
        return len(self.selected)

    @property
    def size(self) -> int:
        return len(self.power_sq)

    @property
    def newton_values(self) -> np.ndarray:
        """``(|candidates|, n)`` table; column ``k`` holds ``v_{k+1}`` on all candidates."""
        return self._values[: self.n].T

    @property
    def newton_at_selected(self) -> np.ndarray:
        """Lower-triangular ``(n, n)`` table with entry ``(i, k) = v_k(x_i)``."""
        return self._triangle[: self.n, : self.n]

    def _reserve(self, n: int) -> None:
        cap = self._values.shape[0]
        if n <= cap:
            return
        new_cap = max(n, 2 * cap, 8)
        values = np.zeros((new_cap, self.size))
        values[:cap] = self._values
        tri = np.zeros((new_cap, new_cap))
        tri[:cap, :cap] = self._triangle
        self._values, self._triangle = values, tri


def init_state(spec: KernelSpec, candidates, capacity: int = 0) -> GreedyState:
    """Empty selection; ``P_0(x)**2 = K(x, x)`` on every candidate."""
    candidates = as_points(candidates, spec.dim)
    N = len(candidates)
    if N == 0:
        raise InputError("candidate set is empty")
    return GreedyState(
        power_sq=np.full(N, spec.phi0),
        _values=np.zeros((capacity, N)),
        _triangle=np.zeros((capacity, capacity)),
        _taken=np.zeros(N, dtype=bool),
    )


def select_next(state: GreedyState) -> int:
    """Index of the largest ``P**2`` among unselected candidates, lowest index on ties."""
    masked = np.where(state._taken, -1.0, state.power_sq)
    top = masked.max()
    if not top > 0:
        raise ExhaustedError("Power Function vanishes on every remaining candidate")
    return int(np.argmax(masked >= top * (1.0 - TIE_RTOL)))


def newton_column(spec: KernelSpec, candidates, state: GreedyState, j: int) -> np.ndarray:
    """Values of the next Newton basis function (centered at candidate ``j``) on all candidates."""
    candidates = as_points(candidates, spec.dim)
    if state._taken[j]:
        raise InputError(f"candidate {j} is already selected")
    p_sq = state.power_sq[j]
    if p_sq <= PIVOT_FLOOR_SQ:
        raise BreakdownError(f"pivot collapsed at candidate {j}: P^2 = {p_sq:.3e}")
    col = kernel_column(spec, candidates[j], candidates)
    n = state.n
    if n:
        col -= state._values[:n].T @ state._values[:n, j]
    pivot = math.sqrt(p_sq)
    col /= pivot
    col[j] = pivot
    return col


def update_power(state: GreedyState, column: np.ndarray, index: int) -> GreedyState:
    """Downdate ``P**2`` by ``column**2`` and append ``column`` as the Newton function for ``index``.

    Mutates and returns ``state``.
    """
    column = np.asarray(column, dtype=float)
    if column.shape != state.power_sq.shape:
        raise InputError(f"column has length {column.shape}, expected {state.power_sq.shape}")
    state.power_sq -= column * column
    np.maximum(state.power_sq, 0.0, out=state.power_sq)
    state.power_sq[index] = 0.0

    n = state.n
    state._reserve(n + 1)
    state._values[n] = column
    state._triangle[n, : n + 1] = state._values[: n + 1, index]
    state._taken[index] = True
    state.selected.append(index)
    return state


@dataclass
class GreedyTrace:
    """Per-iteration record of a P-greedy run.

    Row ``n`` (1-based) holds the ``n``-th selected candidate, the value
    ``max P_{n-1}`` at which it was selected and, when recorded, the fill
    distance of the first ``n`` selected points.
    """

    selected_index: list = field(default_factory=list)
    points: list = field(default_factory=list)
    max_power: list = field(default_factory=list)
    fill_distance: Optional[list] = None
    status: str = "pending"
    final_max_power: float = float("nan")
    metadata: dict = field(default_factory=dict)
    state: Optional[GreedyState] = None

    def __len__(self) -> int:
        return len(self.max_power)

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, len(self) + 1)

    @property
    def breakdown(self) -> bool:
        return self.status == "breakdown"

    @property
    def tol_sq(self) -> float:
        return self.metadata.get("stop", {}).get("tol_sq", StopCriteria.tol_sq)

    @classmethod
    def from_values(cls, max_power, fill_distance=None, tol_sq: float = 1e-15) -> "GreedyTrace":
        """Synthetic trace carrying only the decay columns."""
        max_power = [float(v) for v in max_power]
        fill = None if fill_distance is None else [float(v) for v in fill_distance]
        return cls(
            selected_index=list(range(len(max_power))),
            max_power=max_power,
            fill_distance=fill,
            status="synthetic",
            metadata={"stop": {"tol_sq": tol_sq}},
        )

    def to_csv(self, path) -> None:
        dim = self.metadata.get("kernel", {}).get("dim")
        if dim is None:
            dim = len(self.points[0]) if self.points else 1
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "selected_index", *[f"x{i + 1}" for i in range(dim)], "max_power", "fill_distance"])
            for i in range(len(self)):
                fill = "" if self.fill_distance is None else repr(self.fill_distance[i])
                coords = [repr(float(c)) for c in self.points[i]] if self.points else [""] * dim
                w.writerow([i + 1, self.selected_index[i], *coords, repr(self.max_power[i]), fill])

    @classmethod
    def from_csv(cls, path) -> "GreedyTrace":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        trace = cls(status="loaded")
        fills = []
        for r in rows:
            trace.selected_index.append(int(r["selected_index"]))
            trace.points.append(tuple(float(v) for k, v in r.items() if k.startswith("x")))
            trace.max_power.append(float(r["max_power"]))
            fills.append(float(r["fill_distance"]) if r["fill_distance"] else None)
        if fills and all(f is not None for f in fills):
            trace.fill_distance = fills
        return trace


def run_pgreedy(
    spec: KernelSpec,
    candidates,
    stop: StopCriteria = StopCriteria(),
    record_fill: bool = False,
    keep_state: bool = True,
    metadata: Optional[dict] = None,
) -> GreedyTrace:
    """Run P-greedy on ``candidates`` until tolerance, size cap or exhaustion.

    A collapsed pivot ends the run early with ``status == "breakdown"``
    instead of raising. With ``keep_state=False`` the Newton tables are
    dropped once the run finishes.
    """
    candidates = as_points(candidates, spec.dim)
    state = init_state(spec, candidates, capacity=min(stop.max_n, len(candidates)))
    trace = GreedyTrace(
        fill_distance=[] if record_fill else None,
        metadata={
            "kernel": spec.metadata(),
            "candidates": len(candidates),
            "stop": {"tol_sq": stop.tol_sq, "max_n": stop.max_n},
            "tie_break": TIE_BREAK,
            **(metadata or {}),
        },
    )
    nearest = np.full(len(candidates), np.inf) if record_fill else None

    while True:
        if state.n >= stop.max_n:
            trace.status = "max_n"
            break
        try:
            j = select_next(state)
        except ExhaustedError:
            trace.status = "exhausted"
            logger.info("all candidates resolved after %d selections", state.n)
            break
        p_sq = float(state.power_sq.max())
        if p_sq <= stop.tol_sq:
            trace.status = "tolerance"
            break
        try:
            col = newton_column(spec, candidates, state, j)
        except BreakdownError as exc:
            trace.status = "breakdown"
            logger.warning("%s", exc)
            break
        update_power(state, col, j)

        trace.selected_index.append(j)
        trace.points.append(tuple(float(c) for c in candidates[j]))
        trace.max_power.append(math.sqrt(p_sq))
        if record_fill:
            np.minimum(nearest, distances(candidates[j], candidates), out=nearest)
            trace.fill_distance.append(float(nearest.max()))

    trace.final_max_power = math.sqrt(float(state.power_sq.max()))
    trace.metadata["status"] = trace.status
    trace.metadata["selected"] = state.n
    if keep_state:
        trace.state = state
    return trace
