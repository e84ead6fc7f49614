"""Sparse exact Gaussian elimination.

Rows are dicts ``column -> coefficient`` over Q or Q(i).  The pivot of every
row is its smallest surviving column, so the echelon form (and therefore the
reported kernel) does not depend on equation order for a unique system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["LinearSolution", "InconsistentSystem", "solve_sparse"]


class InconsistentSystem(ValueError):
    """The linear system has no solution."""

    def __init__(self, message, row_index=None):
        super().__init__(message)
        self.row_index = row_index


@dataclass
class LinearSolution:
    values: dict
    rank: int
    ncols: int
    free_columns: list = field(default_factory=list)

    @property
    def kernel_dim(self) -> int:
        return self.ncols - self.rank

    @property
    def unique(self) -> bool:
        return self.kernel_dim == 0


def solve_sparse(rows, rhs, columns):
    """Solve ``sum_c rows[i][c] * x_c = rhs[i]`` for all ``i``.

    ``columns`` lists every unknown (so unused ones count towards the kernel).
    Free unknowns are set to zero in the returned particular solution.
    Raises :class:`InconsistentSystem` when there is no solution.
    """
    order = {c: k for k, c in enumerate(columns)}
    pivots: dict[int, tuple[dict, object]] = {}
    for i, (row, b) in enumerate(zip(rows, rhs)):
        r = {order[c]: v for c, v in row.items() if v}
        while True:
            hits = [c for c in r if c in pivots]
            if not hits:
                break
            c = min(hits)
            f = r[c]
            prow, pb = pivots[c]
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            b = b - f * pb
        if not r:
            if b:
                raise InconsistentSystem(f"equation {i} reduces to 0 = {b}", row_index=i)
            continue
        p = min(r)
        inv = 1 / r[p]
        pivots[p] = ({k: v * inv for k, v in r.items()}, b * inv)

    x = {}
    for p in sorted(pivots, reverse=True):
        prow, b = pivots[p]
        acc = b
        for k, v in prow.items():
            if k != p and k in x:
                acc = acc - v * x[k]
        x[p] = acc
    free = [columns[k] for k in range(len(columns)) if k not in pivots]
    values = {columns[k]: v for k, v in x.items() if v}
    return LinearSolution(values=values, rank=len(pivots), ncols=len(columns), free_columns=free)
