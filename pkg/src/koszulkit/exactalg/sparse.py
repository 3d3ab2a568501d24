"""Sparse exact rank by Gaussian elimination with Markowitz-style pivoting.

Rows are dictionaries ``{column: value}``.  At each step the pivot column is
one with the fewest active entries and, within it, the shortest row, which
keeps fill-in low for the very sparse Koszul differentials.  When the active
part of the matrix has become dense enough it is handed to the dense engine.
"""

from __future__ import annotations

import heapq
from typing import Any, Iterable

import numpy as np

from .dense import backend, dense_rank
from .fields import Field

DENSE_HANDOFF_CELLS = 40_000_000
DENSE_HANDOFF_DENSITY = 0.05
MAX_SPARSE_COLUMN = 48
# exact object arithmetic gains nothing from the dense engine until nearly full
OBJECT_HANDOFF_DENSITY = 0.5


def sparse_rank(rows: Iterable[dict[int, Any]], field: Field) -> int:
    """Rank of the matrix whose nonzero rows are given as column dictionaries."""
    p = field.p
    active: dict[int, dict[int, Any]] = {}
    col_rows: dict[int, set[int]] = {}
    nnz = 0
    for idx, row in enumerate(rows):
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        active[idx] = row
        nnz += len(row)
        for c in row:
            col_rows.setdefault(c, set()).add(idx)

    if backend(field).dtype == object:
        density, max_column = OBJECT_HANDOFF_DENSITY, None
    else:
        density, max_column = DENSE_HANDOFF_DENSITY, MAX_SPARSE_COLUMN
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        rs = col_rows.get(c)
        if not rs:
            continue
        if len(rs) != cnt:
            heapq.heappush(heap, (len(rs), c))
            continue
        n_act_cols = len(col_rows)
        cells = len(active) * n_act_cols
        if cells <= DENSE_HANDOFF_CELLS and (
                (max_column is not None and cnt > max_column) or nnz > density * cells):
            return rank + _dense_finish(active, col_rows, field)

        piv_row_id = min(rs, key=lambda r: (len(active[r]), r))
        prow = active.pop(piv_row_id)
        nnz -= len(prow)
        for cc in prow:
            s = col_rows[cc]
            s.discard(piv_row_id)
        pv = prow[c]
        inv = pow(pv, -1, p) if p is not None else 1 / pv
        touched: set[int] = set()
        for r in list(rs):
            row = active[r]
            f = row[c] * inv
            if p is not None:
                f %= p
            before = len(row)
            for cc, v in prow.items():
                nv = row.get(cc, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    if cc not in row:
                        col_rows.setdefault(cc, set()).add(r)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    col_rows[cc].discard(r)
                touched.add(cc)
            nnz += len(row) - before
            if not row:
                del active[r]
        rank += 1
        for cc in touched:
            s = col_rows.get(cc)
            if s is not None and not s:
                del col_rows[cc]
            elif s:
                heapq.heappush(heap, (len(s), cc))
        col_rows.pop(c, None)
    return rank


def _dense_finish(active: dict[int, dict[int, Any]], col_rows: dict[int, set[int]],
                  field: Field) -> int:
    cols = sorted(col_rows)
    pos = {c: i for i, c in enumerate(cols)}
    ar = backend(field)
    if ar.dtype == object:
        arr = ar.zeros((len(active), len(cols)))
    else:
        arr = np.zeros((len(active), len(cols)))
    for i, row in enumerate(active.values()):
        for c, v in row.items():
            arr[i, pos[c]] = v
    if ar.dtype != object:
        arr = ar.reduce(arr)
    return dense_rank(arr, field)
