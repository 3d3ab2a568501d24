"""Sparse exact matrices with dense conversion and TSV interchange."""

from __future__ import annotations

from typing import Any, Iterable, Iterator, TextIO

import numpy as np

from ..errors import AmbientMismatch, MalformedInput
from .dense import backend, dense_rank
from .fields import Field
from .sparse import sparse_rank

SPARSE_THRESHOLD = 10**6


class Matrix:
    """An immutable ``nrows x ncols`` matrix over an exact field.

    Storage is one ``{row: value}`` dictionary per column with no explicit
    zeros, which is how the Koszul differentials are generated.
    """

    __slots__ = ("nrows", "ncols", "field", "_cols")

    def __init__(self, nrows: int, ncols: int, field: Field,
                 columns: Iterable[dict[int, Any]] | None = None) -> None:
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if columns is None:
            cols = [{} for _ in range(ncols)]
        else:
            cols = [{r: v for r, v in c.items() if v} for c in columns]
        if len(cols) != ncols:
            raise MalformedInput(f"expected {ncols} columns, got {len(cols)}")
        for c in cols:
            for r in c:
                if not 0 <= r < nrows:
                    raise MalformedInput(f"row index {r} out of range for {nrows} rows")
        self._cols = cols

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> Matrix:
        return cls(nrows, ncols, field)

    @classmethod
    def identity(cls, n: int, field: Field) -> Matrix:
        return cls(n, n, field, [{i: field.one} for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Any]], field: Field,
                  ncols: int | None = None) -> Matrix:
        """Build from a list of rows of scalars (ints, Fractions or strings)."""
        data = [[field(v) for v in row] for row in rows]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise MalformedInput("ragged rows")
        cols: list[dict[int, Any]] = [{} for _ in range(ncols)]
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = v
        return cls(len(data), ncols, field, cols)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, Any]],
                     field: Field) -> Matrix:
        """Build from ``(row, col, value)`` triples; repeated coordinates are summed."""
        cols: list[dict[int, Any]] = [{} for _ in range(ncols)]
        for r, c, v in entries:
            if not 0 <= c < ncols:
                raise MalformedInput(f"column index {c} out of range")
            col = cols[c]
            col[r] = field(col.get(r, 0) + field(v))
        return cls(nrows, ncols, field, cols)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def column(self, j: int) -> dict[int, Any]:
        return dict(self._cols[j])

    def columns(self) -> Iterator[dict[int, Any]]:
        for c in self._cols:
            yield dict(c)

    def rows(self) -> list[dict[int, Any]]:
        out: list[dict[int, Any]] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def entries(self) -> list[tuple[int, int, Any]]:
        """Nonzero entries sorted by (row, col)."""
        return sorted((i, j, v) for j, c in enumerate(self._cols) for i, v in c.items())

    def to_lists(self) -> list[list[Any]]:
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def to_dense(self) -> np.ndarray:
        """Dense array in the representation used by the elimination backend."""
        ar = backend(self.field)
        arr = ar.zeros((self.nrows, self.ncols))
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                arr[i, j] = v
        return ar.reduce(arr) if ar.dtype != object else arr

    def transpose(self) -> Matrix:
        return Matrix(self.ncols, self.nrows, self.field, self.rows())

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def apply(self, vector: Iterable[Any]) -> list[Any]:
        """Matrix-vector product."""
        f = self.field
        vec = [f(x) for x in vector]
        if len(vec) != self.ncols:
            raise AmbientMismatch(f"vector of length {len(vec)} for {self.ncols} columns")
        out = [f.zero] * self.nrows
        for j, c in enumerate(self._cols):
            x = vec[j]
            if x:
                for i, v in c.items():
                    out[i] = out[i] + v * x
        return [f(x) for x in out]

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.field != other.field:
            raise AmbientMismatch("matrices over different fields")
        if self.ncols != other.nrows:
            raise AmbientMismatch(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        cols = []
        for c in other._cols:
            acc: dict[int, Any] = {}
            for k, w in c.items():
                for i, v in self._cols[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append({i: f(v) for i, v in acc.items() if f(v)})
        return Matrix(self.nrows, other.ncols, f, cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._cols == other._cols)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over {self.field}, nnz={self.nnz})"

    # TSV interchange --------------------------------------------------------
    def write_tsv(self, stream: TextIO) -> None:
        stream.write(f"# {self.nrows} {self.ncols} {self.field.tag}\n")
        for i, j, v in self.entries():
            stream.write(f"{i}\t{j}\t{self.field.format(v)}\n")

    @classmethod
    def read_tsv(cls, stream: TextIO) -> Matrix:
        header = stream.readline().split()
        if len(header) != 4 or header[0] != "#":
            raise MalformedInput("matrix TSV must start with '# rows cols field'")
        try:
            nrows, ncols = int(header[1]), int(header[2])
        except ValueError as exc:
            raise MalformedInput("bad matrix dimensions") from exc
        field = Field.parse(header[3])
        seen: set[tuple[int, int]] = set()
        entries = []
        for lineno, line in enumerate(stream, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise MalformedInput(f"line {lineno}: expected row<TAB>col<TAB>value")
            try:
                r, c = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise MalformedInput(f"line {lineno}: bad index") from exc
            if (r, c) in seen:
                raise MalformedInput(f"line {lineno}: duplicate coordinate ({r}, {c})")
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise MalformedInput(f"line {lineno}: coordinate out of range")
            seen.add((r, c))
            entries.append((r, c, parts[2]))
        return cls.from_entries(nrows, ncols, entries, field)


def rank(m: Matrix) -> int:
    """Rank over the matrix's field.

    Matrices with more than ``SPARSE_THRESHOLD`` potential entries, and all
    matrices over object-backed fields (QQ, large p), go through sparse
    Markowitz elimination; the rest through the dense engine.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.nrows * m.ncols > SPARSE_THRESHOLD or backend(m.field).dtype == object:
        return sparse_rank(m.columns(), m.field)
    return dense_rank(m.to_dense(), m.field)
