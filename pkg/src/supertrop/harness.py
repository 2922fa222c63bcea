"""Randomized checking of ghost-surpassing matrix identities.

A classical matrix identity ``P = Q`` whose right side is admissible turns
into the supertropical identity ``P+ + P- |= Q+ + Q-``.  This module does not
prove such statements; it samples random matrices and checks them entry by
entry, shrinking any counterexample by zeroing entries while it still fails.

Expressions are small trees built from :class:`Expr` nodes, or parsed from
the prefix grammar accepted by :func:`parse_expression`::

    (mul A B) (add A B) (adj A) (tadj A) (det A) (pow A k) (id) (zero)
    (qinv A) (tqinv A) (bqinv A) (fhat A) (ftilde A)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import GuardUnsatisfiable, MalformedExpression, SupertropError
from .matrix import (
    TropMatrix,
    adjoint,
    big_quasi_inverse,
    determinant,
    is_quasi_identity,
    mat_add,
    mat_ghost_surpasses,
    mat_mul,
    mat_nu_leq,
    mat_nu_matched,
    mat_pow,
    quasi_inverse,
    scalar_mul,
    tangible_adjoint,
    tangible_quasi_inverse,
)
from .scalar import ZERO, Scalar, st_pow
from .spectral import char_poly, poly_eval_matrix

__all__ = [
    "Profile",
    "random_matrix",
    "Expr",
    "Var",
    "Id",
    "Zero",
    "Mul",
    "Add",
    "Adj",
    "TAdj",
    "DetI",
    "DetPowI",
    "Pow",
    "Scale",
    "QInv",
    "TQInv",
    "BQInv",
    "TangibleCharPolyAt",
    "ShiftedCharPolyAt",
    "parse_expression",
    "IdentityReport",
    "Counterexample",
    "RELATIONS",
    "GUARDS",
    "check_identity",
    "builtin_identities",
    "builtin_suite",
]


# ---------------------------------------------------------------------------
# random matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Entry distribution: integer values uniform on ``[lo, hi]``."""

    lo: int = -10
    hi: int = 10
    ghost_prob: float = 0.2
    zero_prob: float = 0.1

    def __post_init__(self):
        for p in (self.ghost_prob, self.zero_prob):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
        if self.lo > self.hi:
            raise ValueError("empty value range")


DEFAULT_PROFILE = Profile()


def random_matrix(n: int, profile: Profile | None = None, seed=None, *, rng: np.random.Generator | None = None,
                  cols: int | None = None) -> TropMatrix:
    """I.i.d. random matrix; identical for identical ``seed`` (or generator state)."""
    profile = profile or DEFAULT_PROFILE
    rng = rng if rng is not None else np.random.default_rng(seed)
    cols = n if cols is None else cols
    shape = (n, cols)
    zero = rng.random(shape) < profile.zero_prob
    vals = rng.integers(profile.lo, profile.hi + 1, shape)
    ghost = rng.random(shape) < profile.ghost_prob
    return TropMatrix._raw(
        tuple(
            tuple(ZERO if zero[i, j] else Scalar(int(vals[i, j]), bool(ghost[i, j])) for j in range(cols))
            for i in range(n)
        ),
        cols,
    )


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------


class Expr:
    """Matrix expression node; call it with a mapping of variable name to matrix."""

    op = "?"
    args: tuple = ()

    def __call__(self, env: Mapping[str, TropMatrix]) -> TropMatrix:
        raise NotImplementedError

    def variables(self) -> set[str]:
        out = set()
        for a in self.args:
            if isinstance(a, Expr):
                out |= a.variables()
        return out

    def __str__(self):
        return "(" + " ".join([self.op] + [str(a) for a in self.args]) + ")"

    def __repr__(self):
        return f"<Expr {self}>"

    def __eq__(self, other):
        return isinstance(other, Expr) and str(self) == str(other)

    def __hash__(self):
        return hash(str(self))


def _size(env) -> int:
    for m in env.values():
        return m.rows
    raise MalformedExpression("cannot infer the matrix size from an empty environment")


class Var(Expr):
    def __init__(self, name: str):
        self.name = name

    def __call__(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise MalformedExpression(f"unbound variable {self.name}") from None

    def variables(self):
        return {self.name}

    def __str__(self):
        return self.name


class Id(Expr):
    op = "id"

    def __call__(self, env):
        return TropMatrix.identity(_size(env))


class Zero(Expr):
    op = "zero"

    def __call__(self, env):
        return TropMatrix.zeros(_size(env))


class _Unary(Expr):
    fn: Callable = None

    def __init__(self, a: Expr):
        if not isinstance(a, Expr):
            raise MalformedExpression(f"{self.op} expects an expression, got {a!r}")
        self.args = (a,)

    def __call__(self, env):
        return type(self).fn(self.args[0](env))


class _Binary(Expr):
    fn: Callable = None

    def __init__(self, a: Expr, b: Expr):
        if not (isinstance(a, Expr) and isinstance(b, Expr)):
            raise MalformedExpression(f"{self.op} expects two expressions")
        self.args = (a, b)

    def __call__(self, env):
        return type(self).fn(self.args[0](env), self.args[1](env))


class Mul(_Binary):
    op = "mul"
    fn = staticmethod(mat_mul)


class Add(_Binary):
    op = "add"
    fn = staticmethod(mat_add)


class Adj(_Unary):
    op = "adj"
    fn = staticmethod(adjoint)


class TAdj(_Unary):
    op = "tadj"
    fn = staticmethod(tangible_adjoint)


class QInv(_Unary):
    op = "qinv"
    fn = staticmethod(quasi_inverse)


class TQInv(_Unary):
    op = "tqinv"
    fn = staticmethod(tangible_quasi_inverse)


class BQInv(_Unary):
    op = "bqinv"
    fn = staticmethod(big_quasi_inverse)


class DetI(_Unary):
    """``|X| I``."""

    op = "det"

    @staticmethod
    def fn(X):
        return scalar_mul(determinant(X).value, TropMatrix.identity(X.rows))


class TangibleCharPolyAt(_Unary):
    """``fhat_X(X)``: the retracted characteristic polynomial of ``X`` evaluated at ``X``."""

    op = "fhat"

    @staticmethod
    def fn(X):
        return poly_eval_matrix(char_poly(X).retract(), X)


class ShiftedCharPolyAt(_Unary):
    """``ftilde_X(X)`` where ``ftilde = sum_{i>=1} alpha_i lambda^(i-1)``."""

    op = "ftilde"

    @staticmethod
    def fn(X):
        return poly_eval_matrix(char_poly(X).shifted(), X)


class Pow(Expr):
    op = "pow"

    def __init__(self, a: Expr, k: int):
        if not isinstance(a, Expr) or not isinstance(k, int) or k < 0:
            raise MalformedExpression("pow expects an expression and a non-negative integer")
        self.args = (a, k)

    def __call__(self, env):
        return mat_pow(self.args[0](env), self.args[1])


class Scale(Expr):
    """Natural multiple ``k X = X + ... + X``."""

    op = "scale"

    def __init__(self, k: int, a: Expr):
        if not isinstance(k, int) or k < 0 or not isinstance(a, Expr):
            raise MalformedExpression("scale expects a natural number and an expression")
        self.args = (k, a)

    def __call__(self, env):
        k, a = self.args
        X = a(env)
        if k == 0:
            return TropMatrix.zeros(*X.shape)
        return X if k == 1 else X.nu()


class DetPowI(Expr):
    """``|X|^(n + shift) I`` with ``n`` the matrix size."""

    op = "detpow"

    def __init__(self, a: Expr, shift: int = -1):
        self.args = (a, shift)

    def __call__(self, env):
        a, shift = self.args
        X = a(env)
        d = determinant(X).value
        k = X.rows + shift
        c = st_pow(d, k) if not (d.is_zero and k == 0) else Scalar(0)
        return scalar_mul(c, TropMatrix.identity(X.rows))


_UNARY = {"adj": Adj, "tadj": TAdj, "det": DetI, "qinv": QInv, "tqinv": TQInv, "bqinv": BQInv,
          "fhat": TangibleCharPolyAt, "ftilde": ShiftedCharPolyAt}
_BINARY = {"mul": Mul, "add": Add}
_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def parse_expression(text: str) -> Expr:
    """Parse the prefix grammar, e.g. ``(mul (adj A) B)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedExpression(f"cannot tokenize at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    expr, rest = _parse(tokens, 0)
    if rest != len(tokens):
        raise MalformedExpression(f"trailing input after {expr}")
    return expr


def _parse(tokens, i):
    if i >= len(tokens):
        raise MalformedExpression("unexpected end of expression")
    tok = tokens[i]
    if tok == ")":
        raise MalformedExpression("unexpected ')'")
    if tok != "(":
        if re.fullmatch(r"[A-Z][A-Za-z0-9_]*", tok):
            return Var(tok), i + 1
        raise MalformedExpression(f"unexpected atom {tok!r}")
    if i + 1 >= len(tokens):
        raise MalformedExpression("unexpected end after '('")
    op = tokens[i + 1]
    j = i + 2
    args = []
    while j < len(tokens) and tokens[j] != ")":
        if op in ("pow", "scale") and re.fullmatch(r"\d+", tokens[j]):
            args.append(int(tokens[j]))
            j += 1
            continue
        sub, j = _parse(tokens, j)
        args.append(sub)
    if j >= len(tokens):
        raise MalformedExpression(f"missing ')' for ({op} ...)")
    j += 1
    try:
        if op == "id" and not args:
            return Id(), j
        if op == "zero" and not args:
            return Zero(), j
        if op in _UNARY and len(args) == 1:
            return _UNARY[op](args[0]), j
        if op in _BINARY and len(args) == 2:
            return _BINARY[op](*args), j
        if op == "pow" and len(args) == 2:
            return Pow(args[0], args[1]), j
        if op == "scale" and len(args) == 2:
            return Scale(args[0], args[1]), j
    except MalformedExpression:
        raise
    raise MalformedExpression(f"bad arity or unknown operator in ({op} ...)")


# ---------------------------------------------------------------------------
# relations and guards
# ---------------------------------------------------------------------------

RELATIONS: dict[str, Callable] = {
    "surpass": lambda L, R: mat_ghost_surpasses(L, R),
    "numatch": lambda L, R: mat_nu_matched(L, R),
    "eq": lambda L, R: L == R,
    "nu_geq": lambda L, R: mat_nu_leq(R, L),
    "quasi_identity": lambda L, R: is_quasi_identity(L),
}

_RELATION_ALIASES = {"|=": "surpass", "⊨": "surpass", "=": "eq", "~": "numatch", "≅": "numatch",
                     ">=": "nu_geq", "≥": "nu_geq", "qid": "quasi_identity"}


def _qinv(A: TropMatrix) -> bool:
    return determinant(A).value.is_tangible


def _qinv_closed(A: TropMatrix) -> bool:
    if not _qinv(A):
        return False
    return all(_qinv(f(A)) for f in (quasi_inverse, tangible_quasi_inverse, big_quasi_inverse))


# guard name -> (profile adjustment, acceptance predicate)
GUARDS: dict[str, tuple[Callable[[Profile], Profile], Callable[[TropMatrix], bool]]] = {
    "none": (lambda p: p, lambda A: True),
    "qinv": (lambda p: p, _qinv),
    "qinv-closed": (lambda p: p, _qinv_closed),
    "tangible": (lambda p: Profile(p.lo, p.hi, 0.0, p.zero_prob), lambda A: A.is_tangible),
    "ghost": (lambda p: Profile(p.lo, p.hi, 1.0, p.zero_prob), lambda A: A.is_ghost),
}
_GUARD_ALIASES = {"quasi-invertible": "qinv", "tangible-entries": "tangible"}


def _norm_guard(g: str) -> str:
    g = _GUARD_ALIASES.get(g, g)
    if g not in GUARDS:
        raise MalformedExpression(f"unknown guard {g!r}")
    return g


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    trial: int
    seed: int
    matrices: dict[str, str]
    lhs: str
    rhs: str
    error: str | None = None


@dataclass
class IdentityReport:
    name: str
    relation: str
    lhs: str
    rhs: str
    n: int
    trials: int
    seed: int
    family: str = ""
    admissible_declared: bool = True
    failures: list[Counterexample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "admissible_declared": self.admissible_declared,
            "pass": self.passed,
            "failures": [f.__dict__ for f in self.failures],
        }


def _holds(lhs, rhs, rel, env) -> tuple[bool, TropMatrix | None, TropMatrix | None, str | None]:
    try:
        L = lhs(env)
        R = rhs(env) if rhs is not None else None
    except SupertropError as exc:
        return False, None, None, f"{exc.name}: {exc}"
    return RELATIONS[rel](L, R), L, R, None


def _shrink(lhs, rhs, rel, env, guards):
    env = dict(env)
    changed = True
    while changed:
        changed = False
        for name in sorted(env):
            M = env[name]
            for i in range(M.rows):
                for j in range(M.cols):
                    if M[i, j].is_zero:
                        continue
                    rows = [list(r) for r in M]
                    rows[i][j] = ZERO
                    cand = TropMatrix(rows)
                    if not GUARDS[guards[name]][1](cand):
                        continue
                    trial_env = {**env, name: cand}
                    ok, _, _, err = _holds(lhs, rhs, rel, trial_env)
                    if not ok and err is None:
                        env = trial_env
                        M = cand
                        changed = True
    return env


def check_identity(
    lhs: Expr,
    rhs: Expr | None,
    relation: str,
    n: int,
    trials: int,
    seed: int = 0,
    guard: str | Mapping[str, str] = "none",
    *,
    name: str = "custom",
    family: str = "",
    profile: Profile | None = None,
    admissible: bool = True,
    max_retries: int = 10_000,
    max_failures: int = 5,
) -> IdentityReport:
    """Check ``lhs <relation> rhs`` on ``trials`` random ``n x n`` instantiations.

    Trial ``t`` draws its matrices from the RNG substream ``(seed, t)``, so a
    report depends only on its arguments.  ``guard`` is either one guard for
    every variable or a mapping per variable; guards are met by rejection
    sampling with at most ``max_retries`` draws per variable.
    """
    relation = _RELATION_ALIASES.get(relation, relation)
    if relation not in RELATIONS:
        raise MalformedExpression(f"unknown relation {relation!r}")
    if not isinstance(lhs, Expr) or (rhs is not None and not isinstance(rhs, Expr)):
        raise MalformedExpression("lhs and rhs must be expressions")
    if rhs is None and relation != "quasi_identity":
        raise MalformedExpression(f"relation {relation} needs a right-hand side")
    names = sorted(lhs.variables() | (rhs.variables() if rhs is not None else set()))
    if not names:
        names = ["A"]
    if isinstance(guard, str):
        guards = {v: _norm_guard(guard) for v in names}
    else:
        guards = {v: _norm_guard(guard.get(v, "none")) for v in names}
    base = profile or DEFAULT_PROFILE
    report = IdentityReport(name, relation, str(lhs), str(rhs) if rhs is not None else "", n, trials, seed,
                            family, admissible)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        env = {}
        for v in names:
            adjust, accept = GUARDS[guards[v]]
            prof = adjust(base)
            for _ in range(max_retries):
                M = random_matrix(n, prof, rng=rng)
                if accept(M):
                    break
            else:
                raise GuardUnsatisfiable(f"guard {guards[v]} not met for {v} after {max_retries} draws")
            env[v] = M
        ok, L, R, err = _holds(lhs, rhs, relation, env)
        if ok:
            continue
        if err is None:
            env = _shrink(lhs, rhs, relation, env, guards)
            _, L, R, err = _holds(lhs, rhs, relation, env)
        report.failures.append(Counterexample(
            trial=t,
            seed=seed,
            matrices={k: str(m) for k, m in env.items()},
            lhs=str(L) if L is not None else "",
            rhs=str(R) if R is not None else "",
            error=err,
        ))
        if len(report.failures) >= max_failures:
            break
    return report


A, B, G = Var("A"), Var("B"), Var("G")


def builtin_identities() -> list[dict]:
    """The built-in identity list: one dict per clause, grouped by ``family``."""
    q = "qinv"
    rows = [
        ("ord0", "|AB| |= |A||B|", DetI(Mul(A, B)), Mul(DetI(A), DetI(B)), "surpass", "none"),
        ("ord0", "adj(AB) |= adj(B)adj(A)", Adj(Mul(A, B)), Mul(Adj(B), Adj(A)), "surpass", "none"),
        ("background", "fhat_A(A) |= 0", TangibleCharPolyAt(A), Zero(), "surpass", "none"),
        ("background", "ftilde_A(A) |= adj(A)", ShiftedCharPolyAt(A), Adj(A), "surpass", "none"),
        ("rmk:adj", "A A^nabla = A A^nabla-hat", Mul(A, QInv(A)), Mul(A, TQInv(A)), "eq", q),
        ("rmk:adj", "A^nabla A = A^nabla-hat A", Mul(QInv(A), A), Mul(TQInv(A), A), "eq", q),
        ("rmk:adj", "I_A is a quasi-identity", Mul(A, QInv(A)), None, "quasi_identity", q),
        ("rmk:adj", "I'_A is a quasi-identity", Mul(QInv(A), A), None, "quasi_identity", q),
        ("rmk:adj01", "|A| adj(A) >=nu adj(A) A adj(A)", Mul(DetI(A), Adj(A)), Mul(Adj(A), Mul(A, Adj(A))),
         "nu_geq", "none"),
        ("rmk:adj1", "A^nabla-bar ~nu A^nabla", BQInv(A), QInv(A), "numatch", q),
        ("rmk:adj1", "A^nabla ~nu A^nabla-hat", QInv(A), TQInv(A), "numatch", q),
        ("rmk:adj1", "A^nabla-bar |= A^nabla", BQInv(A), QInv(A), "surpass", q),
        ("rmk:adj1", "A^nabla |= A^nabla-hat", QInv(A), TQInv(A), "surpass", q),
        ("doublead", "adj(A) adj(adj(A)) adj(A) ~nu |A|^(n-1) adj(A)", Mul(Adj(A), Mul(Adj(Adj(A)), Adj(A))),
         Mul(DetPowI(A, -1), Adj(A)), "numatch", "none"),
        ("precad", "A A^nabla-bar = I_A", Mul(A, BQInv(A)), Mul(A, QInv(A)), "eq", q),
        ("precad", "A^nabla-bar |= B for B = A^nabla", BQInv(A), QInv(A), "surpass", q),
        ("precad", "A^nabla-bar |= B for B = A^nabla-hat", BQInv(A), TQInv(A), "surpass", q),
        ("doublead1", "A^nabla A^nabla-nabla A^nabla ~nu A^nabla", Mul(QInv(A), Mul(QInv(QInv(A)), QInv(A))),
         QInv(A), "numatch", q),
        ("switch", "I'_{A^nabla-hat} = I_A", Mul(QInv(TQInv(A)), TQInv(A)), Mul(A, QInv(A)), "eq", q),
        ("switch", "A^nabla-hat-nabla-hat A^nabla-hat = I_A", Mul(TQInv(TQInv(A)), TQInv(A)), Mul(A, QInv(A)),
         "eq", q),
        ("switch", "I'_{A^nabla-bar} = I_A", Mul(QInv(BQInv(A)), BQInv(A)), Mul(A, QInv(A)), "eq", q),
        ("bysym", "I'_A = I_{A^nabla-hat}", Mul(QInv(A), A), Mul(TQInv(A), QInv(TQInv(A))), "eq", q),
        ("bysym", "I'_A = I_{A^nabla-bar}", Mul(QInv(A), A), Mul(BQInv(A), QInv(BQInv(A))), "eq", q),
        ("double-nabla", "A^nabla-nabla |= A", QInv(QInv(A)), A, "surpass", q),
        ("lem:porder", "C |= A implies BC |= BA", Mul(B, Add(A, G)), Mul(B, A), "surpass",
         {"A": "none", "B": "none", "G": "ghost"}),
        ("lem:porder", "C |= A implies CB |= AB", Mul(Add(A, G), B), Mul(A, B), "surpass",
         {"A": "none", "B": "none", "G": "ghost"}),
    ]
    return [dict(family=f, name=nm, lhs=l, rhs=r, relation=rel, guard=g) for f, nm, l, r, rel, g in rows]


def builtin_suite(n: int, trials: int, seed: int = 0) -> list[IdentityReport]:
    """Run every built-in identity clause at size ``n``."""
    reports = []
    for item in builtin_identities():
        reports.append(check_identity(
            item["lhs"], item["rhs"], item["relation"], n, trials, seed, item["guard"],
            name=item["name"], family=item["family"],
        ))
    return reports
