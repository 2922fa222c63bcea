"""Supertropical semifield scalars over exact rationals, in logarithmic notation.

A scalar is either the additive zero (written ``-``, standing for -inf) or a
pair ``(value, layer)`` where the layer is tangible or ghost.  Addition takes
the larger value and turns ties into ghosts; multiplication adds values and
is ghost as soon as one factor is.

>>> parse_scalar("3") + parse_scalar("3")
Scalar('3g')
>>> parse_scalar("3g") * parse_scalar("4")
Scalar('7g')
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

from .errors import DivisionByZero, ParseError

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "scalar",
    "parse_scalar",
    "format_scalar",
    "st_add",
    "st_mul",
    "st_sum",
    "st_prod",
    "nu",
    "st_inv",
    "st_pow",
    "tangible_retract",
    "nu_compare",
    "nu_matched",
    "nu_leq",
    "ghost_surpasses",
]

Number = Union[int, Fraction]


def _norm(value) -> Number:
    # ints are kept as ints: they are much cheaper than Fraction in the hot paths
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, (float, bool)):
        raise TypeError(f"refusing inexact/boolean scalar value {value!r}")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


class Scalar:
    """Immutable supertropical scalar.

    ``value`` is ``None`` for the zero element, otherwise an ``int`` or a
    ``Fraction``.  ``ghost`` is always ``False`` for zero.
    """

    __slots__ = ("value", "ghost")

    def __init__(self, value=None, ghost: bool = False):
        if value is None:
            if ghost:
                raise ValueError("zero has no ghost layer")
            object.__setattr__(self, "value", None)
            object.__setattr__(self, "ghost", False)
        else:
            object.__setattr__(self, "value", _norm(value))
            object.__setattr__(self, "ghost", bool(ghost))

    def __setattr__(self, key, val):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.value, self.ghost))

    # -- layer predicates -------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.value is None

    @property
    def is_tangible(self) -> bool:
        """Nonzero and in the tangible layer."""
        return self.value is not None and not self.ghost

    @property
    def is_ghost(self) -> bool:
        """Nonzero and in the ghost layer."""
        return self.ghost

    @property
    def in_t0(self) -> bool:
        """Tangible or zero."""
        return not self.ghost

    @property
    def in_g0(self) -> bool:
        """Ghost or zero (the ghost ideal)."""
        return self.value is None or self.ghost

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = scalar(other)
        return st_add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = scalar(other)
        return st_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return st_pow(self, k)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = scalar(other)
        return st_mul(self, st_inv(other))

    def nu(self) -> "Scalar":
        return nu(self)

    def retract(self) -> "Scalar":
        return tangible_retract(self)

    def inv(self) -> "Scalar":
        return st_inv(self)

    # -- structural equality ----------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.value == other.value and self.ghost == other.ghost

    def __hash__(self):
        return hash((self.value, self.ghost))

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar()
ONE = Scalar(0)


def scalar(x) -> Scalar:
    """Coerce ``x`` to a :class:`Scalar`.

    Accepts scalars, ``None`` (zero), tokens such as ``"5g"`` and exact
    numbers (tangible).
    """
    if isinstance(x, Scalar):
        return x
    if x is None:
        return ZERO
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


# integer, finite decimal or p/q; no exponents
_NUMBER = re.compile(r"[+-]?(\d+(\.\d+)?|\d+/\d+)")


def parse_scalar(token: str) -> Scalar:
    """Parse one token: ``-`` is zero, ``p``, ``p.d`` or ``p/q`` tangible, suffix ``g`` ghost."""
    tok = token.strip()
    if tok == "-":
        return ZERO
    ghost = tok.endswith("g")
    body = tok[:-1] if ghost else tok
    if not _NUMBER.fullmatch(body):
        raise ParseError(f"bad scalar token {token!r}")
    try:
        value = Fraction(body)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad scalar token {token!r}") from None
    return Scalar(value, ghost)


def format_scalar(a: Scalar) -> str:
    if a.value is None:
        return "-"
    return f"{a.value}g" if a.ghost else str(a.value)


def st_add(a: Scalar, b: Scalar) -> Scalar:
    av, bv = a.value, b.value
    if av is None:
        return b
    if bv is None:
        return a
    if av > bv:
        return a
    if av < bv:
        return b
    if a.ghost:
        return a
    if b.ghost:
        return b
    return Scalar(av, True)


def st_mul(a: Scalar, b: Scalar) -> Scalar:
    if a.value is None or b.value is None:
        return ZERO
    return Scalar(a.value + b.value, a.ghost or b.ghost)


def st_sum(items: Iterable[Scalar]) -> Scalar:
    """Supertropical sum of an iterable; the empty sum is zero."""
    best = None
    ghost = False
    for s in items:
        v = s.value
        if v is None:
            continue
        if best is None or v > best:
            best, ghost = v, s.ghost
        elif v == best:
            ghost = True
    if best is None:
        return ZERO
    return Scalar(best, ghost)


def st_prod(items: Iterable[Scalar]) -> Scalar:
    """Product of an iterable; the empty product is the unit."""
    total = 0
    ghost = False
    for s in items:
        if s.value is None:
            return ZERO
        total += s.value
        ghost = ghost or s.ghost
    return Scalar(total, ghost)


def nu(a: Scalar) -> Scalar:
    """Ghost map ``a -> a + a``."""
    if a.value is None or a.ghost:
        return a
    return Scalar(a.value, True)


def st_inv(a: Scalar) -> Scalar:
    if a.value is None:
        raise DivisionByZero("zero has no inverse")
    return Scalar(-a.value, a.ghost)


def st_pow(a: Scalar, k: int) -> Scalar:
    if a.value is None:
        if k <= 0:
            raise DivisionByZero(f"zero raised to non-positive power {k}")
        return ZERO
    return Scalar(a.value * k, a.ghost)


def tangible_retract(a: Scalar) -> Scalar:
    """Canonical tangible retract: same value, tangible layer."""
    if a.ghost:
        return Scalar(a.value, False)
    return a


def nu_compare(a: Scalar, b: Scalar) -> int:
    """Compare ghost values: -1, 0 or 1.  Zero is strictly least."""
    av, bv = a.value, b.value
    if av is None:
        return 0 if bv is None else -1
    if bv is None:
        return 1
    return (av > bv) - (av < bv)


def nu_matched(a: Scalar, b: Scalar) -> bool:
    return a.value == b.value


def nu_leq(a: Scalar, b: Scalar) -> bool:
    return nu_compare(a, b) <= 0


def ghost_surpasses(b: Scalar, a: Scalar) -> bool:
    """True iff ``b = a + c`` for some ``c`` in the ghost ideal."""
    if b.value == a.value and b.ghost == a.ghost:
        return True
    if not b.ghost:
        return False
    return a.value is None or b.value >= a.value
