"""Permanent kernels on integer-encoded matrices.

Matrices reach this module already encoded as three ``n x n`` arrays:
``vals`` (int64 values, scaled to a common denominator), ``zero`` (entry is
the additive zero) and ``ghost`` (entry is in the ghost layer).  Exactness is
preserved because every value is an integer multiple of ``1/scale``.

Two backends compute the same results:

* ``numba``: branch-and-bound permutation search and a subset DP, compiled
  with ``@njit``.
* ``numpy``: vectorized enumeration over a cached permutation table.  The
  subset-DP fast path runs as plain Python on this backend.

The backend is picked from ``SUPERTROP_BACKEND`` at import time and can be
switched with :func:`use_backend`.
"""

from __future__ import annotations

import contextlib
import itertools
import types
from functools import lru_cache

import numpy as np

from . import _config

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


# ---------------------------------------------------------------------------
# loop kernels (compiled with numba, or run as Python on the numpy backend)
# ---------------------------------------------------------------------------


def _enum_loop(vals, zero, ghost):
    n = vals.shape[0]
    empty_p = np.empty((0, n), np.int64)
    empty_g = np.empty(0, np.bool_)
    rowmax = np.zeros(n, np.int64)
    for r in range(n):
        found = False
        m = 0
        for c in range(n):
            if not zero[r, c]:
                if not found or vals[r, c] > m:
                    m = vals[r, c]
                    found = True
        if not found:
            return False, 0, empty_p, empty_g
        rowmax[r] = m
    # suffix[r]: optimistic bound for rows r..n-1
    suffix = np.zeros(n + 1, np.int64)
    for r in range(n - 1, -1, -1):
        suffix[r] = suffix[r + 1] + rowmax[r]

    perm = np.full(n, -1, np.int64)
    used = np.zeros(n, np.bool_)
    partial = np.zeros(n + 1, np.int64)
    gcount = np.zeros(n + 1, np.int64)
    cap = 16
    out = np.empty((cap, n), np.int64)
    outg = np.empty(cap, np.bool_)
    count = 0
    have = False
    best = 0
    k = 0
    while k >= 0:
        if k == n:
            total = partial[n]
            if not have or total > best:
                best = total
                have = True
                count = 0
            if total == best:
                if count == cap:
                    cap *= 2
                    bigger = np.empty((cap, n), np.int64)
                    bigger[:count] = out[:count]
                    out = bigger
                    biggerg = np.empty(cap, np.bool_)
                    biggerg[:count] = outg[:count]
                    outg = biggerg
                out[count, :] = perm
                outg[count] = gcount[n] > 0
                count += 1
            k -= 1
            continue
        c = perm[k] + 1
        if perm[k] >= 0:
            used[perm[k]] = False
            perm[k] = -1
        while c < n:
            if not used[c] and not zero[k, c]:
                if not have or partial[k] + vals[k, c] + suffix[k + 1] >= best:
                    break
            c += 1
        if c == n:
            k -= 1
            continue
        perm[k] = c
        used[c] = True
        partial[k + 1] = partial[k] + vals[k, c]
        gcount[k + 1] = gcount[k] + (1 if ghost[k, c] else 0)
        k += 1
        if k < n:
            perm[k] = -1
    return have, best, out[:count].copy(), outg[:count].copy()


def _popcounts(size):
    pc = np.zeros(size, np.int64)
    for m in range(1, size):
        pc[m] = pc[m >> 1] + (m & 1)
    return pc


def _dp_tables(vals, zero, ghost):
    """Best value / reachability / saturated tie count / ghost flag per column subset.

    Row ``popcount(mask) - 1`` is matched inside ``mask``.
    """
    n = vals.shape[0]
    size = 1 << n
    best = np.zeros(size, np.int64)
    reach = np.zeros(size, np.bool_)
    cnt = np.zeros(size, np.int64)
    gh = np.zeros(size, np.bool_)
    pc = _popcounts(size)
    reach[0] = True
    cnt[0] = 1
    for mask in range(1, size):
        r = pc[mask] - 1
        have = False
        b = 0
        cn = 0
        g = False
        for c in range(n):
            bit = 1 << c
            if (mask & bit) != 0 and not zero[r, c]:
                sub = mask ^ bit
                if reach[sub]:
                    v = best[sub] + vals[r, c]
                    if not have or v > b:
                        b = v
                        cn = cnt[sub]
                        g = gh[sub] or ghost[r, c]
                        have = True
                    elif v == b:
                        cn = min(2, cn + cnt[sub])
                        g = g or gh[sub] or ghost[r, c]
        reach[mask] = have
        best[mask] = b
        cnt[mask] = cn
        gh[mask] = g
    return best, reach, cnt, gh


def _dp_layer(vals, zero, ghost):
    """(nonzero, best value, tie count saturated at 2, unique-term ghost flag)."""
    best, reach, cnt, gh = _dp_tables(vals, zero, ghost)
    full = (1 << vals.shape[0]) - 1
    return reach[full], best[full], cnt[full], gh[full]


def _dp_attaining(vals, zero, ghost):
    n = vals.shape[0]
    best, reach, cnt, gh = _dp_tables(vals, zero, ghost)
    full = (1 << n) - 1
    if not reach[full]:
        return False, 0, np.empty((0, n), np.int64), np.empty(0, np.bool_)
    # depth d assigns row n-1-d; masks[d] is the column set still available
    masks = np.zeros(n + 1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    perm = np.zeros(n, np.int64)
    masks[0] = full
    cap = 16
    out = np.empty((cap, n), np.int64)
    outg = np.empty(cap, np.bool_)
    count = 0
    d = 0
    nxt[0] = 0
    while d >= 0:
        if d == n:
            if count == cap:
                cap *= 2
                bigger = np.empty((cap, n), np.int64)
                bigger[:count] = out[:count]
                out = bigger
                biggerg = np.empty(cap, np.bool_)
                biggerg[:count] = outg[:count]
                outg = biggerg
            g = False
            for r in range(n):
                if ghost[r, perm[r]]:
                    g = True
            out[count, :] = perm
            outg[count] = g
            count += 1
            d -= 1
            continue
        r = n - 1 - d
        mask = masks[d]
        c = nxt[d]
        while c < n:
            bit = 1 << c
            if (mask & bit) != 0 and not zero[r, c]:
                sub = mask ^ bit
                if reach[sub] and best[sub] + vals[r, c] == best[mask]:
                    break
            c += 1
        if c == n:
            d -= 1
            continue
        nxt[d] = c + 1
        perm[r] = c
        masks[d + 1] = mask ^ (1 << c)
        nxt[d + 1] = 0
        d += 1
    return True, best[full], out[:count].copy(), outg[:count].copy()


def _delete(vals, zero, ghost, i, j):
    n = vals.shape[0]
    sv = np.empty((n - 1, n - 1), np.int64)
    sz = np.empty((n - 1, n - 1), np.bool_)
    sg = np.empty((n - 1, n - 1), np.bool_)
    rr = 0
    for r in range(n):
        if r == i:
            continue
        cc = 0
        for c in range(n):
            if c == j:
                continue
            sv[rr, cc] = vals[r, c]
            sz[rr, cc] = zero[r, c]
            sg[rr, cc] = ghost[r, c]
            cc += 1
        rr += 1
    return sv, sz, sg


def _minor_loop(vals, zero, ghost):
    n = vals.shape[0]
    have = np.zeros((n, n), np.bool_)
    best = np.zeros((n, n), np.int64)
    gflag = np.zeros((n, n), np.bool_)
    for i in range(n):
        for j in range(n):
            sv, sz, sg = _delete(vals, zero, ghost, i, j)
            h, b, cn, g = _dp_layer(sv, sz, sg)
            have[i, j] = h
            best[i, j] = b
            gflag[i, j] = h and (cn >= 2 or g)
    return have, best, gflag


def _principal_loop(vals, zero, ghost):
    """Supertropical sums of all k x k principal permanents, k = 0..n."""
    n = vals.shape[0]
    have = np.zeros(n + 1, np.bool_)
    best = np.zeros(n + 1, np.int64)
    cnt = np.zeros(n + 1, np.int64)
    gh = np.zeros(n + 1, np.bool_)
    have[0] = True
    cnt[0] = 1
    idx = np.empty(n, np.int64)
    for mask in range(1, 1 << n):
        k = 0
        for v in range(n):
            if (mask >> v) & 1:
                idx[k] = v
                k += 1
        sv = np.empty((k, k), np.int64)
        sz = np.empty((k, k), np.bool_)
        sg = np.empty((k, k), np.bool_)
        for a in range(k):
            for b in range(k):
                sv[a, b] = vals[idx[a], idx[b]]
                sz[a, b] = zero[idx[a], idx[b]]
                sg[a, b] = ghost[idx[a], idx[b]]
        h, b, cn, g = _dp_layer(sv, sz, sg)
        if not h:
            continue
        if not have[k] or b > best[k]:
            have[k] = True
            best[k] = b
            cnt[k] = cn
            gh[k] = g
        elif b == best[k]:
            cnt[k] = min(2, cnt[k] + cn)
            gh[k] = gh[k] or g
    gflag = np.zeros(n + 1, np.bool_)
    for k in range(n + 1):
        gflag[k] = have[k] and (cnt[k] >= 2 or gh[k])
    return have, best, gflag


def _compile():
    # jitted clones share a namespace so compiled kernels only call compiled helpers
    ns = dict(globals())
    names = ("_popcounts", "_dp_tables", "_dp_layer", "_delete",
             "_enum_loop", "_dp_attaining", "_minor_loop", "_principal_loop")
    for name in names:
        fn = globals()[name]
        clone = types.FunctionType(fn.__code__, ns, name, fn.__defaults__)
        clone.__qualname__ = fn.__qualname__
        ns[name] = numba.njit(cache=True, nogil=True)(clone)
    return ns


if HAVE_NUMBA:
    _nb = _compile()
    enum_numba = _nb["_enum_loop"]
    dp_numba = _nb["_dp_attaining"]
    minors_numba = _nb["_minor_loop"]
    principal_numba = _nb["_principal_loop"]


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def perm_table(n: int) -> np.ndarray:
    """All permutations of ``range(n)`` in lexicographic order, shape ``(n!, n)``."""
    table = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return table.reshape(-1, n)


def _np_terms(vals, zero, ghost):
    n = vals.shape[0]
    table = perm_table(n)
    rows = np.arange(n)
    dead = zero[rows, table].any(axis=1)
    terms = np.where(zero, 0, vals)[rows, table].sum(axis=1)
    gterm = ghost[rows, table].any(axis=1)
    return table, dead, terms, gterm


def enum_numpy(vals, zero, ghost):
    n = vals.shape[0]
    table, dead, terms, gterm = _np_terms(vals, zero, ghost)
    live = ~dead
    if not live.any():
        return False, 0, np.empty((0, n), np.int64), np.empty(0, np.bool_)
    best = terms[live].max()
    att = live & (terms == best)
    return True, int(best), table[att], gterm[att]


def _np_layer(vals, zero, ghost):
    _, dead, terms, gterm = _np_terms(vals, zero, ghost)
    live = ~dead
    if not live.any():
        return False, 0, False
    best = terms[live].max()
    att = live & (terms == best)
    k = int(att.sum())
    return True, int(best), k >= 2 or bool(gterm[att].any())


def minors_numpy(vals, zero, ghost):
    n = vals.shape[0]
    keep = np.array([[c for c in range(n) if c != i] for i in range(n)], dtype=np.int64).reshape(n, n - 1)
    # sub[i, j] is A with row i and column j removed
    ri = keep[:, None, :, None]
    cj = keep[None, :, None, :]
    sv, sz, sg = vals[ri, cj], zero[ri, cj], ghost[ri, cj]
    table = perm_table(n - 1)
    pos = np.arange(n - 1)
    dead = sz[:, :, pos, table].any(axis=-1)
    terms = np.where(sz, 0, sv)[:, :, pos, table].sum(axis=-1)
    gterm = sg[:, :, pos, table].any(axis=-1)
    live = ~dead
    have = live.any(axis=-1)
    masked = np.where(live, terms, np.iinfo(np.int64).min)
    best = masked.max(axis=-1)
    att = live & (terms == best[:, :, None])
    gflag = have & ((att.sum(axis=-1) >= 2) | (att & gterm).any(axis=-1))
    return have, np.where(have, best, 0), gflag


def principal_numpy(vals, zero, ghost):
    n = vals.shape[0]
    have = np.zeros(n + 1, np.bool_)
    best = np.zeros(n + 1, np.int64)
    gflag = np.zeros(n + 1, np.bool_)
    have[0] = True
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            ix = np.ix_(subset, subset)
            h, b, g = _np_layer(vals[ix], zero[ix], ghost[ix])
            if not h:
                continue
            if not have[k] or b > best[k]:
                have[k], best[k], gflag[k] = True, b, g
            elif b == best[k]:
                gflag[k] = True
    return have, best, gflag


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

BACKEND = "numba" if (HAVE_NUMBA and _config.requested_backend() == "numba") else "numpy"


def use_backend(name: str):
    """Switch the active backend; usable as a context manager."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, BACKEND = BACKEND, name

    @contextlib.contextmanager
    def _restore():
        global BACKEND
        try:
            yield
        finally:
            BACKEND = previous

    return _restore()


def permanent_enumerate(vals, zero, ghost):
    """Full enumeration: (nonzero, best, attaining permutations, their ghost flags)."""
    if BACKEND == "numba":
        return enum_numba(vals, zero, ghost)
    return enum_numpy(vals, zero, ghost)


def permanent_dp(vals, zero, ghost):
    """Subset-DP fast path with the same return contract as :func:`permanent_enumerate`."""
    if BACKEND == "numba":
        return dp_numba(vals, zero, ghost)
    return _dp_attaining(vals, zero, ghost)


def minor_table(vals, zero, ghost):
    """Permanent of every ``(i, j)`` minor as (nonzero, value, ghost) arrays."""
    if vals.shape[0] == 1:
        return np.ones((1, 1), np.bool_), np.zeros((1, 1), np.int64), np.zeros((1, 1), np.bool_)
    if BACKEND == "numba":
        return minors_numba(vals, zero, ghost)
    return minors_numpy(vals, zero, ghost)


def principal_table(vals, zero, ghost):
    """Sum of the k x k principal permanents for k = 0..n as (nonzero, value, ghost)."""
    if BACKEND == "numba":
        return principal_numba(vals, zero, ghost)
    return principal_numpy(vals, zero, ghost)
