"""Matrices and vectors over supertropical scalars.

The determinant is the permanent: a supertropical sum over all permutations.
It is ghost when two permutations tie for the maximum or when the unique
maximal term passes through a ghost entry.  Permanents are computed by the
kernels in :mod:`supertrop._kernels` on an exact integer encoding of the
matrix; see :func:`determinant`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _config, _kernels
from .errors import DimensionMismatch, NotSquare, SingularMatrix, SizeCapExceeded
from .scalar import (
    ONE,
    ZERO,
    Scalar,
    format_scalar,
    ghost_surpasses,
    nu,
    nu_leq,
    scalar,
    st_add,
    st_inv,
    st_mul,
    st_prod,
    tangible_retract,
)

__all__ = [
    "TropMatrix",
    "TropVector",
    "DetResult",
    "mat_mul",
    "mat_add",
    "mat_pow",
    "scalar_mul",
    "mat_vec",
    "determinant",
    "minor",
    "adjoint",
    "tangible_adjoint",
    "quasi_inverse",
    "tangible_quasi_inverse",
    "big_quasi_inverse",
    "quasi_identities",
    "is_quasi_identity",
    "mat_ghost_surpasses",
    "mat_nu_matched",
    "mat_nu_leq",
    "is_ghost_vector",
]

# encoded sums of n values must stay clear of int64 overflow
_INT_BOUND = 1 << 62


class TropVector:
    """Immutable vector of scalars."""

    __slots__ = ("_e",)

    def __init__(self, entries: Iterable = ()):
        object.__setattr__(self, "_e", tuple(scalar(x) for x in entries))

    def __setattr__(self, key, val):
        raise AttributeError("TropVector is immutable")

    @classmethod
    def zeros(cls, n: int) -> "TropVector":
        return cls((ZERO,) * n)

    def __len__(self):
        return len(self._e)

    def __iter__(self):
        return iter(self._e)

    def __getitem__(self, i):
        return self._e[i]

    def __eq__(self, other):
        if not isinstance(other, TropVector):
            return NotImplemented
        return self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __add__(self, other: "TropVector") -> "TropVector":
        if len(self) != len(other):
            raise DimensionMismatch(f"vector lengths {len(self)} and {len(other)}")
        return TropVector(st_add(a, b) for a, b in zip(self._e, other._e))

    def scale(self, c) -> "TropVector":
        c = scalar(c)
        return TropVector(st_mul(c, a) for a in self._e)

    def retract(self) -> "TropVector":
        return TropVector(tangible_retract(a) for a in self._e)

    def nu(self) -> "TropVector":
        return TropVector(nu(a) for a in self._e)

    @property
    def is_tangible(self) -> bool:
        """All components tangible or zero."""
        return all(a.in_t0 for a in self._e)

    @property
    def is_ghost(self) -> bool:
        """All components ghost or zero."""
        return all(a.in_g0 for a in self._e)

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self._e)

    def tolist(self) -> list:
        return list(self._e)

    def __repr__(self):
        return f"TropVector([{', '.join(map(format_scalar, self._e))}])"

    def __str__(self):
        return " ".join(map(format_scalar, self._e))


class TropMatrix:
    """Immutable dense matrix of scalars, stored row-major as tuples."""

    __slots__ = ("_rows", "shape")

    def __init__(self, rows: Iterable[Iterable] = (), cols: int | None = None):
        data = tuple(tuple(scalar(x) for x in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch(f"row {i} has {len(row)} entries, expected {cols}")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "shape", (len(data), cols))

    def __setattr__(self, key, val):
        raise AttributeError("TropMatrix is immutable")

    @classmethod
    def _raw(cls, rows: tuple, cols: int) -> "TropMatrix":
        # trusted constructor: rows are tuples of Scalars already
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_rows", rows)
        object.__setattr__(obj, "shape", (len(rows), cols))
        return obj

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "TropMatrix":
        cols = rows if cols is None else cols
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def diag(cls, entries: Sequence) -> "TropMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Iterable]) -> "TropMatrix":
        return cls(zip(*columns)) if columns else cls()

    # -- access -----------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def __iter__(self):
        return iter(self._rows)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            if not (0 <= i < self.shape[0] and 0 <= j < self.shape[1]):
                raise IndexError(f"index {key} out of range for shape {self.shape}")
            return self._rows[i][j]
        return self._rows[key]

    def row(self, i: int) -> TropVector:
        return TropVector(self._rows[i])

    def col(self, j: int) -> TropVector:
        if not 0 <= j < self.shape[1]:
            raise IndexError(f"column {j} out of range")
        return TropVector(r[j] for r in self._rows)

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self._rows]

    def entries(self) -> Iterable[Scalar]:
        for r in self._rows:
            yield from r

    @property
    def T(self) -> "TropMatrix":
        r, c = self.shape
        return TropMatrix._raw(tuple(tuple(self._rows[i][j] for i in range(r)) for j in range(c)), r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "TropMatrix":
        return TropMatrix._raw(tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(cols))

    def map(self, fn) -> "TropMatrix":
        return TropMatrix._raw(tuple(tuple(fn(a) for a in r) for r in self._rows), self.shape[1])

    def retract(self) -> "TropMatrix":
        """Entrywise tangible retract."""
        return self.map(tangible_retract)

    def nu(self) -> "TropMatrix":
        return self.map(nu)

    @property
    def is_tangible(self) -> bool:
        """Every entry tangible or zero."""
        return all(a.in_t0 for a in self.entries())

    @property
    def is_ghost(self) -> bool:
        return all(a.in_g0 for a in self.entries())

    # -- algebra ----------------------------------------------------------
    def __add__(self, other):
        return mat_add(self, other)

    def __matmul__(self, other):
        if isinstance(other, TropVector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __mul__(self, c):
        return scalar_mul(c, self)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return mat_pow(self, k)

    def __eq__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = "; ".join(" ".join(map(format_scalar, r)) for r in self._rows)
        return f"TropMatrix([{body}])"

    def __str__(self):
        return "\n".join(" ".join(map(format_scalar, r)) for r in self._rows)


# ---------------------------------------------------------------------------
# semiring operations
# ---------------------------------------------------------------------------


def mat_add(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot add shapes {A.shape} and {B.shape}")
    return TropMatrix._raw(
        tuple(tuple(st_add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A._rows, B._rows)),
        A.shape[1],
    )


def _dot(row, col) -> Scalar:
    best = None
    ghost = False
    for a, b in zip(row, col):
        av = a.value
        if av is None:
            continue
        bv = b.value
        if bv is None:
            continue
        v = av + bv
        if best is None or v > best:
            best = v
            ghost = a.ghost or b.ghost
        elif v == best:
            ghost = True
    if best is None:
        return ZERO
    return Scalar(best, ghost)


def mat_mul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {A.shape} and {B.shape}")
    cols = list(zip(*B._rows)) if B._rows else [()] * B.shape[1]
    return TropMatrix._raw(tuple(tuple(_dot(r, c) for c in cols) for r in A._rows), B.shape[1])


def mat_vec(A: TropMatrix, v: TropVector) -> TropVector:
    if A.shape[1] != len(v):
        raise DimensionMismatch(f"cannot apply shape {A.shape} to length {len(v)}")
    out = TropVector.__new__(TropVector)
    object.__setattr__(out, "_e", tuple(_dot(r, v._e) for r in A._rows))
    return out


def scalar_mul(c, A: TropMatrix) -> TropMatrix:
    c = scalar(c)
    return A.map(lambda a: st_mul(c, a))


def mat_pow(A: TropMatrix, k: int) -> TropMatrix:
    if not A.is_square:
        raise NotSquare(f"matrix power needs a square matrix, got {A.shape}")
    if k < 0:
        raise ValueError("matrix powers must be non-negative")
    result = TropMatrix.identity(A.rows)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# permanent machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetResult:
    """Supertropical determinant together with the permutations attaining it.

    ``attaining[k]`` is a permutation as a tuple ``sigma`` with
    ``sigma[i]`` the column used by row ``i``; ``terms[k]`` is its term, which
    is nu-matched to ``value`` and ghost iff it passes through a ghost entry.
    """

    value: Scalar
    attaining: tuple[tuple[int, ...], ...]
    terms: tuple[Scalar, ...]

    @property
    def ghost_terms(self) -> tuple[bool, ...]:
        return tuple(t.ghost for t in self.terms)

    @property
    def is_singular(self) -> bool:
        return self.value.in_g0

    @property
    def is_nonsingular(self) -> bool:
        return self.value.is_tangible


def _check_square(A: TropMatrix, what: str):
    if not A.is_square:
        raise NotSquare(f"{what} needs a square matrix, got shape {A.shape}")


def _check_cap(n: int, max_n: int | None):
    cap = _config.max_n() if max_n is None else max_n
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds the enumeration cap {cap} (raise with SUPERTROP_MAX_N)")


def _encode(A: TropMatrix):
    """Integer encoding ``(vals, zero, ghost, scale)``, or ``None`` if it could overflow."""
    n = A.rows
    scale = 1
    for a in A.entries():
        if isinstance(a.value, Fraction):
            scale = math.lcm(scale, a.value.denominator)
    ints = [[0] * n for _ in range(n)]
    zero = np.zeros((n, n), dtype=np.bool_)
    ghost = np.zeros((n, n), dtype=np.bool_)
    top = 0
    for i, row in enumerate(A._rows):
        ri = ints[i]
        for j, a in enumerate(row):
            v = a.value
            if v is None:
                zero[i, j] = True
                continue
            x = v * scale
            if isinstance(x, Fraction):
                x = x.numerator
            ri[j] = x
            if abs(x) > top:
                top = abs(x)
            if a.ghost:
                ghost[i, j] = True
    if top * max(n, 1) >= _INT_BOUND:
        return None
    return np.array(ints, dtype=np.int64).reshape(n, n), zero, ghost, scale


def _decode(x, scale) -> int | Fraction:
    x = int(x)
    return x if scale == 1 else Fraction(x, scale)


def _det_objects(A: TropMatrix) -> DetResult:
    # exact object-level enumeration for matrices whose encoding would overflow
    n = A.rows
    terms = []
    for sigma in itertools.permutations(range(n)):
        t = st_prod(A._rows[i][sigma[i]] for i in range(n))
        if not t.is_zero:
            terms.append((sigma, t))
    if not terms:
        return DetResult(ZERO, (), ())
    best = max(t.value for _, t in terms)
    att = [(s, t) for s, t in terms if t.value == best]
    ghost = len(att) > 1 or att[0][1].ghost
    return DetResult(Scalar(best, ghost), tuple(s for s, _ in att), tuple(t for _, t in att))


def determinant(A: TropMatrix, method: str = "enumerate", max_n: int | None = None) -> DetResult:
    """Supertropical determinant (permanent) with its attaining permutations.

    ``method="enumerate"`` is branch-and-bound over all permutations;
    ``method="dp"`` is the subset dynamic-programming fast path.  Both return
    identical results, with ``attaining`` sorted lexicographically.
    """
    _check_square(A, "determinant")
    n = A.rows
    _check_cap(n, max_n)
    if n == 0:
        return DetResult(ONE, ((),), (ONE,))
    enc = _encode(A)
    if enc is None:
        return _det_objects(A)
    vals, zero, ghost, scale = enc
    if method == "enumerate":
        have, best, perms, gflags = _kernels.permanent_enumerate(vals, zero, ghost)
    elif method == "dp":
        have, best, perms, gflags = _kernels.permanent_dp(vals, zero, ghost)
    else:
        raise ValueError(f"unknown determinant method {method!r}")
    if not have:
        return DetResult(ZERO, (), ())
    value = _decode(best, scale)
    pairs = sorted((tuple(int(c) for c in p), bool(g)) for p, g in zip(perms, gflags))
    ghost_value = len(pairs) > 1 or pairs[0][1]
    return DetResult(
        Scalar(value, ghost_value),
        tuple(p for p, _ in pairs),
        tuple(Scalar(value, g) for _, g in pairs),
    )


def det(A: TropMatrix) -> Scalar:
    """Shorthand for ``determinant(A).value``."""
    return determinant(A).value


def minor(A: TropMatrix, i: int, j: int) -> TropMatrix:
    """``A`` with row ``i`` and column ``j`` deleted."""
    if not (0 <= i < A.rows and 0 <= j < A.cols):
        raise IndexError(f"minor index ({i}, {j}) out of range for shape {A.shape}")
    return A.submatrix([r for r in range(A.rows) if r != i], [c for c in range(A.cols) if c != j])


def minor_permanents(A: TropMatrix, max_n: int | None = None) -> TropMatrix:
    """Matrix of minor permanents ``(|A_{i,j}|)`` (not transposed)."""
    _check_square(A, "adjoint")
    n = A.rows
    _check_cap(n, max_n)
    if n == 0:
        return TropMatrix()
    enc = _encode(A)
    if enc is None:
        return TropMatrix([[_det_objects(minor(A, i, j)).value for j in range(n)] for i in range(n)])
    vals, zero, ghost, scale = enc
    have, best, gflag = _kernels.minor_table(vals, zero, ghost)
    rows = []
    for i in range(n):
        rows.append(tuple(
            Scalar(_decode(best[i, j], scale), bool(gflag[i, j])) if have[i, j] else ZERO
            for j in range(n)
        ))
    return TropMatrix._raw(tuple(rows), n)


def adjoint(A: TropMatrix, max_n: int | None = None) -> TropMatrix:
    """Transpose of the matrix of minor permanents; ``[[0]]`` for a 1x1 matrix."""
    return minor_permanents(A, max_n).T


def tangible_adjoint(A: TropMatrix, max_n: int | None = None) -> TropMatrix:
    return adjoint(A, max_n).retract()


def _inverse_det(A: TropMatrix) -> Scalar:
    d = determinant(A).value
    if not d.is_tangible:
        kind = "zero" if d.is_zero else "ghost"
        raise SingularMatrix(f"determinant {format_scalar(d)} is {kind}; matrix is not quasi-invertible")
    return st_inv(d)


def quasi_inverse(A: TropMatrix) -> TropMatrix:
    """``adj(A) / |A|``."""
    _check_square(A, "quasi-inverse")
    return scalar_mul(_inverse_det(A), adjoint(A))


def tangible_quasi_inverse(A: TropMatrix) -> TropMatrix:
    """``tadj(A) / |A|``."""
    _check_square(A, "quasi-inverse")
    return scalar_mul(_inverse_det(A), tangible_adjoint(A))


def big_quasi_inverse(A: TropMatrix) -> TropMatrix:
    """The maximal quasi-inverse ``A^nabla I_A = A^nabla A A^nabla``."""
    qi = quasi_inverse(A)
    return mat_mul(qi, mat_mul(A, qi))


def quasi_identities(A: TropMatrix) -> tuple[TropMatrix, TropMatrix]:
    """Right and left quasi-identities ``(A A^nabla, A^nabla A)``."""
    qi = quasi_inverse(A)
    return mat_mul(A, qi), mat_mul(qi, A)


def is_quasi_identity(M: TropMatrix) -> bool:
    """Unit diagonal, ghost-or-zero off the diagonal, idempotent, tangible determinant."""
    if not M.is_square:
        return False
    n = M.rows
    for i in range(n):
        for j in range(n):
            a = M._rows[i][j]
            if i == j:
                if a != ONE:
                    return False
            elif not a.in_g0:
                return False
    if mat_mul(M, M) != M:
        return False
    return determinant(M).value.is_tangible


# ---------------------------------------------------------------------------
# entrywise relations
# ---------------------------------------------------------------------------


def _pairs(X, Y):
    if isinstance(X, TropMatrix) and isinstance(Y, TropMatrix):
        if X.shape != Y.shape:
            raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")
        return zip(X.entries(), Y.entries())
    if isinstance(X, TropVector) and isinstance(Y, TropVector):
        if len(X) != len(Y):
            raise DimensionMismatch(f"lengths {len(X)} and {len(Y)} differ")
        return zip(X, Y)
    raise TypeError("expected two matrices or two vectors")


def mat_ghost_surpasses(B, A) -> bool:
    """Entrywise ``B |= A`` for matrices or vectors."""
    return all(ghost_surpasses(b, a) for b, a in _pairs(B, A))


def mat_nu_matched(A, B) -> bool:
    return all(a.value == b.value for a, b in _pairs(A, B))


def mat_nu_leq(A, B) -> bool:
    """Entrywise ``A <=_nu B``."""
    return all(nu_leq(a, b) for a, b in _pairs(A, B))


def is_ghost_vector(v: TropVector) -> bool:
    """Membership in the ghost submodule (all components ghost or zero)."""
    return all(a.in_g0 for a in v)

