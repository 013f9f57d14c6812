"""Exact dense linear algebra over a prime field F_p.

Matrices are wrapped numpy int64 arrays with entries reduced mod p.
Every operation is exact: products of residues stay far below 2**63
at the dimensions this package works at (<= a few dozen), and the
only division ever performed is by modular inverse.  No floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DEFAULT_PRIME = 2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return p


@dataclass(frozen=True)
class Scalar:
    """Residue in {0, .., p-1} with exact arithmetic mod a prime p."""

    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other
        return Scalar(int(other), self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return Scalar(self.value + o.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return Scalar(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return Scalar(self.value * o.value, self.p)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0")
        return Scalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __neg__(self):
        return Scalar(-self.value, self.p)

    def __bool__(self):
        return self.value != 0


class Mat:
    """Immutable dense matrix over F_p.

    Entries live in a read-only int64 numpy array of shape (rows, cols),
    already reduced mod p.  Shapes with zero rows or columns are legal
    and behave correctly under all operations.
    """

    __slots__ = ("p", "a", "_hash")

    def __init__(self, p: int, array):
        _check_prime(p)
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"need a 2-d array, got shape {a.shape}")
        a = np.mod(a, p)
        a.setflags(write=False)
        self.p = p
        self.a = a
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(p: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "Mat":
        if len(rows) == 0:
            return Mat(p, np.zeros((0, 0 if cols is None else cols), dtype=np.int64))
        return Mat(p, np.array(rows, dtype=np.int64))

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "Mat":
        return Mat(p, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(p: int, n: int) -> "Mat":
        return Mat(p, np.eye(n, dtype=np.int64))

    # -- basic structure ----------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.a.shape, self.a.tobytes()))
        return self._hash

    def __repr__(self):
        return f"Mat(p={self.p}, {self.a.tolist()})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    # -- arithmetic ----------------------------------------------------

    def _need_same_field(self, other: "Mat"):
        if self.p != other.p:
            raise ValueError("mixed moduli")

    def __add__(self, other: "Mat") -> "Mat":
        self._need_same_field(other)
        return Mat(self.p, self.a + other.a)

    def __sub__(self, other: "Mat") -> "Mat":
        self._need_same_field(other)
        return Mat(self.p, self.a - other.a)

    def __neg__(self) -> "Mat":
        return Mat(self.p, -self.a)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._need_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Mat(self.p, self.a @ other.a)

    def scale(self, c: int) -> "Mat":
        return Mat(self.p, self.a * (c % self.p))

    def transpose(self) -> "Mat":
        return Mat(self.p, self.a.T)

    def hstack(self, other: "Mat") -> "Mat":
        self._need_same_field(other)
        return Mat(self.p, np.hstack([self.a, other.a]))

    def vstack(self, other: "Mat") -> "Mat":
        self._need_same_field(other)
        return Mat(self.p, np.vstack([self.a, other.a]))

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["Mat", tuple[int, ...]]:
        """Reduced row echelon form and pivot columns.

        Row operations only, so the row space is preserved; pivots carry
        a leading 1 and are the only nonzero entry of their column.
        """
        p = self.p
        a = self.a.copy()
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            inv = pow(int(a[r, c]), p - 2, p)
            a[r] = (a[r] * inv) % p
            col = a[:, c].copy()
            col[r] = 0
            mask = col != 0
            if mask.any():
                a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
            pivots.append(c)
            r += 1
        return Mat(p, a), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Mat":
        """Basis of the right null space, one vector per column."""
        r, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((self.cols, len(free)), dtype=np.int64)
        for k, fc in enumerate(free):
            basis[fc, k] = 1
            for row, pc in enumerate(pivots):
                basis[pc, k] = (-int(r.a[row, fc])) % self.p
        return Mat(self.p, basis)

    def image_basis(self) -> "Mat":
        """Pivot columns of the original matrix, spanning the column space."""
        _, pivots = self.rref()
        cols = [self.a[:, c] for c in pivots]
        if not cols:
            return Mat.zeros(self.p, self.rows, 0)
        return Mat(self.p, np.stack(cols, axis=1))

    def solve(self, b: "Mat") -> tuple[Optional["Mat"], "Mat"]:
        """Solve self @ x = b.

        Returns (particular, kernel) where particular is None when the
        system is inconsistent; kernel columns span the null space of
        self either way.  b may have several columns.
        """
        self._need_same_field(b)
        if b.rows != self.rows:
            raise ValueError(f"rhs has {b.rows} rows, expected {self.rows}")
        aug = self.hstack(b)
        r, pivots = aug.rref()
        kernel = self.kernel_basis()
        if any(pc >= self.cols for pc in pivots):
            return None, kernel
        x = np.zeros((self.cols, b.cols), dtype=np.int64)
        for row, pc in enumerate(pivots):
            x[pc] = r.a[row, self.cols:]
        return Mat(self.p, x), kernel

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("not square")
        x, _ = self.solve(Mat.identity(self.p, self.rows))
        if x is None or (self.a @ x.a % self.p != np.eye(self.rows, dtype=np.int64)).any():
            raise ValueError("matrix is singular")
        return x

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


# Module-level aliases matching the operation names used elsewhere.

def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    return m.rref()


def rank(m: Mat) -> int:
    return m.rank()


def kernel_basis(m: Mat) -> Mat:
    return m.kernel_basis()


def image_basis(m: Mat) -> Mat:
    return m.image_basis()


def solve(a: Mat, b: Mat) -> tuple[Optional[Mat], Mat]:
    return a.solve(b)
