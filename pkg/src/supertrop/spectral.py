"""Characteristic polynomials, their tangible roots, and supertropical eigenvectors.

The characteristic polynomial ``f_A = |A + lambda I|`` has, at ``lambda^(n-m)``,
the supertropical sum of all ``m x m`` principal permanents, i.e. the best
``m``-multicycle weight (ghost on ties).  Its essential monomials are the
strict vertices of the upper concave hull of ``(degree, value)``; the hull
slopes are the eigenvalues.  For each eigenvalue ``beta`` the retracted
``i``-th column of ``adj(A + beta I)`` is an eigenvector, for ``i`` taken
among the vertices the dominant multicycle gains at that corner.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _config, _kernels
from .errors import AmbiguousJ, NonTangibleMatrix, NotQuasiTangible, NotSquare, SizeCapExceeded
from .matrix import (
    TropMatrix,
    TropVector,
    _decode,
    _encode,
    adjoint,
    determinant,
    mat_add,
    mat_ghost_surpasses,
    mat_mul,
    mat_vec,
    scalar_mul,
)
from .scalar import ONE, ZERO, Scalar, format_scalar, nu, scalar, st_mul, st_pow, st_sum

__all__ = [
    "TropPolynomial",
    "MulticycleCover",
    "EigenPair",
    "char_poly",
    "essential_part",
    "tangible_roots",
    "dominant_multicycle",
    "eigenvector_column",
    "eigen_data",
    "poly_eval_matrix",
]


class TropPolynomial:
    """Polynomial in one variable with supertropical coefficients.

    ``coeffs[i]`` is the coefficient of ``lambda**i`` (ascending order).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [scalar(c) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero:
            cs.pop()
        self.coeffs = tuple(cs) if cs else (ZERO,)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Scalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __eq__(self, other):
        if not isinstance(other, TropPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x) -> Scalar:
        x = scalar(x)
        return st_sum(st_mul(c, st_pow(x, i)) if i else c for i, c in enumerate(self.coeffs))

    def retract(self) -> "TropPolynomial":
        """Coefficientwise tangible retract."""
        return TropPolynomial([c.retract() for c in self.coeffs])

    def shifted(self) -> "TropPolynomial":
        """Drop the constant term and divide by ``lambda``."""
        return TropPolynomial(self.coeffs[1:] or (ZERO,))

    def essential(self) -> tuple[int, ...]:
        return essential_part(self)

    @property
    def is_quasi_tangible(self) -> bool:
        """Every essential coefficient except the constant term is tangible."""
        return all(self.coeffs[i].is_tangible for i in self.essential() if i != 0)

    def roots(self) -> list[tuple[Scalar, int]]:
        return tangible_roots(self)

    def __repr__(self):
        return f"TropPolynomial({self})"

    def __str__(self):
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero:
                continue
            mono = "" if i == 0 else ("λ" if i == 1 else f"λ^{i}")
            if c == ONE and i:
                parts.append(mono)
            else:
                parts.append(format_scalar(c) + mono)
        return " + ".join(parts) if parts else "-"


def char_poly(A: TropMatrix, max_n: int | None = None) -> TropPolynomial:
    """``|A + lambda I|``: coefficient of ``lambda^(n-k)`` sums the k x k principal permanents."""
    if not A.is_square:
        raise NotSquare(f"characteristic polynomial needs a square matrix, got {A.shape}")
    n = A.rows
    cap = _config.max_n() if max_n is None else max_n
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds the enumeration cap {cap}")
    enc = _encode(A)
    if enc is None:
        coeffs = [_principal_sum_objects(A, k) for k in range(n + 1)]
    else:
        vals, zero, ghost, scale = enc
        have, best, gflag = _kernels.principal_table(vals, zero, ghost)
        coeffs = [Scalar(_decode(best[k], scale), bool(gflag[k])) if have[k] else ZERO for k in range(n + 1)]
    # coeffs[k] multiplies lambda^(n-k)
    return TropPolynomial(coeffs[::-1])


def _principal_sum_objects(A: TropMatrix, k: int) -> Scalar:
    from itertools import combinations

    if k == 0:
        return ONE
    return st_sum(determinant(A.submatrix(s, s)).value for s in combinations(range(A.rows), k))


def _upper_hull(points):
    # points sorted by x; monotone chain keeping only strict turns
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly above the chord hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def essential_part(f: TropPolynomial) -> tuple[int, ...]:
    """Degrees of the monomials that strictly dominate at some point, ascending."""
    pts = [(i, c.value) for i, c in enumerate(f.coeffs) if not c.is_zero]
    return tuple(x for x, _ in _upper_hull(pts))


def tangible_roots(f: TropPolynomial) -> list[tuple[Scalar, int]]:
    """Tangible roots ``(beta, m)`` in strictly descending ghost value.

    ``m`` is the lower-corner index counted from the top degree, so for a
    characteristic polynomial it is the size of the dominant multicycle at
    that corner.  A zero constant term contributes a final root zero with
    ``m = degree``.
    """
    if not f.is_quasi_tangible:
        raise NotQuasiTangible(f"essential part of {f} is not quasi-tangible")
    n = f.degree
    ess = sorted(essential_part(f), reverse=True)
    roots = []
    for hi, lo in zip(ess, ess[1:]):
        slope = Fraction(f.coeffs[lo].value - f.coeffs[hi].value) / (hi - lo)
        roots.append((Scalar(slope), n - lo))
    if ess and ess[-1] > 0:
        roots.append((ZERO, n))
    return roots


@dataclass(frozen=True)
class MulticycleCover:
    """Disjoint cycles covering ``vertices``; ``mapping[k]`` is the successor of ``vertices[k]``."""

    vertices: tuple[int, ...]
    mapping: tuple[int, ...]
    weight: Scalar

    @property
    def size(self) -> int:
        return len(self.vertices)

    def successor(self) -> dict[int, int]:
        return dict(zip(self.vertices, self.mapping))

    def cycles(self) -> list[tuple[int, ...]]:
        succ = self.successor()
        seen = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = succ[v]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = succ[w]
            out.append(tuple(cyc))
        return out

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(zip(self.vertices, self.mapping))

    def __str__(self):
        body = "".join("(" + ",".join(str(v + 1) for v in c) + ")" for c in self.cycles())
        return f"{body} weight {format_scalar(self.weight)}"


def dominant_multicycle(A: TropMatrix, m: int) -> tuple[list[MulticycleCover], bool]:
    """All ``m``-multicycles of maximal ghost value, and whether there is exactly one.

    ``m = 0`` yields the empty cover of weight one.
    """
    from itertools import combinations

    if not A.is_square:
        raise NotSquare(f"multicycles need a square matrix, got {A.shape}")
    if not 0 <= m <= A.rows:
        raise ValueError(f"multicycle size {m} outside 0..{A.rows}")
    if m == 0:
        return [MulticycleCover((), (), ONE)], True
    best = None
    covers: list[MulticycleCover] = []
    for subset in combinations(range(A.rows), m):
        d = determinant(A.submatrix(subset, subset))
        if d.value.is_zero:
            continue
        v = d.value.value
        if best is not None and v < best:
            continue
        if best is None or v > best:
            best = v
            covers = []
        for sigma, term in zip(d.attaining, d.terms):
            covers.append(MulticycleCover(subset, tuple(subset[c] for c in sigma), term))
    return covers, len(covers) == 1


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: Scalar
    m: int
    m_prev: int
    J: tuple[int, ...]
    column: int
    vector: TropVector
    verified: bool
    det_identity: bool | None = None

    def to_dict(self) -> dict:
        return {
            "eigenvalue": format_scalar(self.eigenvalue),
            "m": self.m,
            "m_prev": self.m_prev,
            "J": list(self.J),
            "column": self.column,
            "vector": [format_scalar(a) for a in self.vector],
            "verified": self.verified,
            "det_identity": self.det_identity,
        }


def eigenvector_column(A: TropMatrix, beta: Scalar, i: int) -> TropVector:
    """Retract of column ``i`` of ``adj(A + beta I)``."""
    B = mat_add(A, scalar_mul(beta, TropMatrix.identity(A.rows)))
    return adjoint(B).col(i).retract()


def _is_eigen(A: TropMatrix, beta: Scalar, v: TropVector) -> bool:
    return not v.is_zero and mat_ghost_surpasses(mat_vec(A, v), v.scale(beta))


def eigen_data(A: TropMatrix) -> list[EigenPair]:
    """One eigenvector per tangible root of the characteristic polynomial.

    ``A`` must have tangible-or-zero entries (apply ``A.retract()`` first
    otherwise).  Vertex indices in ``J`` and ``column`` are 0-based.
    """
    if not A.is_square:
        raise NotSquare(f"eigenvectors need a square matrix, got {A.shape}")
    if not A.is_tangible:
        raise NonTangibleMatrix("matrix has ghost entries; retract it first")
    n = A.rows
    f = char_poly(A)
    roots = tangible_roots(f)
    t = len(roots)
    pairs = []
    m_prev = 0
    prev_vertices: set[int] = set()
    for ell, (beta, m) in enumerate(roots, start=1):
        if beta.is_zero:
            covers, unique = [], False
            gained = sorted(set(range(n)) - prev_vertices)
        else:
            covers, unique = dominant_multicycle(A, m)
            if ell < t and not unique:
                raise AmbiguousJ(f"dominant {m}-multicycle is not unique at root {beta}")
            gained = sorted({v for c in covers for v in c.vertices} - prev_vertices)
        if not gained:
            raise AmbiguousJ(f"no vertex gained at root {format_scalar(beta)}")
        B = mat_add(A, scalar_mul(beta, TropMatrix.identity(n)))
        adj_b = adjoint(B)
        column = gained[0]
        vec = adj_b.col(column).retract()
        verified = _is_eigen(A, beta, vec)
        if not verified and beta.is_zero:
            # zero eigenvalue lies outside the construction's guarantee; try the other candidates
            for k in gained[1:]:
                cand = adj_b.col(k).retract()
                if _is_eigen(A, beta, cand):
                    column, vec, verified = k, cand, True
                    break
        det_identity = None
        if not beta.is_zero:
            alpha = f[n - m]
            det_identity = determinant(B).value == nu(st_mul(alpha, st_pow(beta, n - m)))
        pairs.append(EigenPair(beta, m, m_prev, tuple(gained), column, vec, verified, det_identity))
        m_prev = m
        if covers:
            # the next corner compares against this corner's dominant cover
            prev_vertices = set(covers[0].vertices) if unique else {v for c in covers for v in c.vertices}
    return pairs


def poly_eval_matrix(f: TropPolynomial, A: TropMatrix) -> TropMatrix:
    """``sum_i f[i] A^i`` with ``A^0 = I``."""
    if not A.is_square:
        raise NotSquare(f"polynomial evaluation needs a square matrix, got {A.shape}")
    n = A.rows
    total = TropMatrix.zeros(n)
    power = TropMatrix.identity(n)
    for i, c in enumerate(f.coeffs):
        if i:
            power = mat_mul(power, A)
        if not c.is_zero:
            total = mat_add(total, scalar_mul(c, power))
    return total
