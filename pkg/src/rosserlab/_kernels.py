"""Hot loops: code classification and lexicographically least model search.

Each kernel has a numba-compiled path and a numpy/interpreted fallback.  The
backend is picked at import time (numba if importable and the environment
variable ``ROSSERLAB_NO_NUMBA`` is unset) and can be switched with
:func:`set_backend`.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


__all__ = [
    "NUMBA_AVAILABLE", "KIND_NONE", "KIND_TERM", "KIND_FORMULA",
    "backend", "set_backend", "classify", "lexmin_search",
]

BASE = 11
KIND_NONE, KIND_TERM, KIND_FORMULA = 0, 1, 2

_FALSEY = {"", "0", "false", "no", "off"}


def _default_backend() -> str:
    flag = os.environ.get("ROSSERLAB_NO_NUMBA", "").strip().lower()
    if flag not in _FALSEY or not NUMBA_AVAILABLE:
        return "numpy"
    return "numba"


_backend = _default_backend()


def backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    prev, _backend = _backend, name
    return prev


# --------------------------------------------------------------------------
# Classification: kinds[c] tells whether c codes a term, a formula or nothing.
#
# Every child code of c is at most (c - 1) // 11, so the entries of a block
# [lo, 11 * lo) depend only on entries below lo.


def _classify_py(limit: int) -> np.ndarray:
    kinds = np.zeros(limit + 1, dtype=np.int8)
    for c in range(1, limit + 1):
        tag = (c - 1) % BASE + 1
        p = (c - 1) // BASE
        w = int((np.sqrt(8.0 * p + 1.0) - 1.0) / 2.0)
        while w * (w + 1) // 2 > p:
            w -= 1
        while (w + 1) * (w + 2) // 2 <= p:
            w += 1
        b = p - w * (w + 1) // 2
        a = w - b
        k = KIND_NONE
        if tag == 1:
            if p == 0:
                k = KIND_TERM
        elif tag == 2:
            if b == 0:
                k = KIND_TERM
        elif tag == 3:
            if b == 0 and kinds[a] == KIND_TERM:
                k = KIND_TERM
        elif tag == 4 or tag == 5:
            if kinds[a] == KIND_TERM and kinds[b] == KIND_TERM:
                k = KIND_TERM
        elif tag == 6 or tag == 7:
            if kinds[a] == KIND_TERM and kinds[b] == KIND_TERM:
                k = KIND_FORMULA
        elif tag == 8:
            if b == 0 and kinds[a] == KIND_TERM:
                k = KIND_FORMULA
        elif tag == 9:
            if b == 0 and kinds[a] == KIND_FORMULA:
                k = KIND_FORMULA
        elif tag == 10:
            if kinds[a] == KIND_FORMULA and kinds[b] == KIND_FORMULA:
                k = KIND_FORMULA
        else:
            if kinds[b] == KIND_FORMULA:
                k = KIND_FORMULA
        kinds[c] = k
    return kinds


_classify_jit = njit(cache=True)(_classify_py)


def _unpair_np(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = ((np.sqrt(8.0 * p.astype(np.float64) + 1.0) - 1.0) / 2.0).astype(np.int64)
    for _ in range(2):
        w = np.where(w * (w + 1) // 2 > p, w - 1, w)
        w = np.where((w + 1) * (w + 2) // 2 <= p, w + 1, w)
    b = p - w * (w + 1) // 2
    return w - b, b


def _classify_np(limit: int) -> np.ndarray:
    kinds = np.zeros(limit + 1, dtype=np.int8)
    lo = 1
    while lo <= limit:
        hi = min(BASE * lo, limit + 1)
        c = np.arange(lo, hi, dtype=np.int64)
        tag = (c - 1) % BASE + 1
        p = (c - 1) // BASE
        a, b = _unpair_np(p)
        ka, kb = kinds[a], kinds[b]
        term_a, term_b = ka == KIND_TERM, kb == KIND_TERM
        fml_a, fml_b = ka == KIND_FORMULA, kb == KIND_FORMULA
        b0 = b == 0
        is_term = (
            ((tag == 1) & (p == 0))
            | ((tag == 2) & b0)
            | ((tag == 3) & b0 & term_a)
            | (((tag == 4) | (tag == 5)) & term_a & term_b)
        )
        is_fml = (
            (((tag == 6) | (tag == 7)) & term_a & term_b)
            | ((tag == 8) & b0 & term_a)
            | ((tag == 9) & b0 & fml_a)
            | ((tag == 10) & fml_a & fml_b)
            | ((tag == 11) & fml_b)
        )
        block = np.zeros(hi - lo, dtype=np.int8)
        block[is_term] = KIND_TERM
        block[is_fml] = KIND_FORMULA
        kinds[lo:hi] = block
        lo = hi
    return kinds


def classify(limit: int) -> np.ndarray:
    """Kind of every natural ``0..limit`` as an int8 array."""
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if _backend == "numba":
        return _classify_jit(limit)
    return _classify_np(limit)


# --------------------------------------------------------------------------
# Least model search.
#
# Literals are ``2 * var + neg``.  Branching always picks the lowest-numbered
# unassigned variable and tries 0 before 1, with chronological backtracking,
# so the first total assignment found is the lexicographically least one
# (variable 0 most significant).


def _lexmin_py(nvars, clause_ptr, clause_lits, occ_ptr, occ_idx):
    assign = np.full(nvars, -1, dtype=np.int8)
    trail = np.empty(nvars, dtype=np.int64)
    lvl_start = np.empty(nvars + 1, dtype=np.int64)
    lvl_var = np.empty(nvars + 1, dtype=np.int64)
    lvl_flipped = np.zeros(nvars + 1, dtype=np.int8)
    nclauses = clause_ptr.shape[0] - 1
    tlen = 0
    # unit clauses at level 0
    for ci in range(nclauses):
        s, e = clause_ptr[ci], clause_ptr[ci + 1]
        if e == s:
            return 0, assign
        if e - s == 1:
            lit = clause_lits[s]
            v = lit >> 1
            want = 1 - (lit & 1)
            if assign[v] == -1:
                assign[v] = want
                trail[tlen] = lit
                tlen += 1
            elif assign[v] != want:
                return 0, assign
    qhead = 0
    nlev = 0
    nxt = 0
    while True:
        conflict = False
        while qhead < tlen and not conflict:
            false_lit = trail[qhead] ^ 1
            qhead += 1
            for oi in range(occ_ptr[false_lit], occ_ptr[false_lit + 1]):
                ci = occ_idx[oi]
                n_free = 0
                free_lit = -1
                sat = False
                for li in range(clause_ptr[ci], clause_ptr[ci + 1]):
                    lit = clause_lits[li]
                    val = assign[lit >> 1]
                    if val == -1:
                        n_free += 1
                        free_lit = lit
                    elif val == 1 - (lit & 1):
                        sat = True
                        break
                if sat:
                    continue
                if n_free == 0:
                    conflict = True
                    break
                if n_free == 1:
                    assign[free_lit >> 1] = 1 - (free_lit & 1)
                    trail[tlen] = free_lit
                    tlen += 1
        if conflict:
            resumed = False
            while nlev > 0:
                lv = nlev - 1
                for t in range(lvl_start[lv], tlen):
                    assign[trail[t] >> 1] = -1
                tlen = lvl_start[lv]
                qhead = tlen
                if lvl_flipped[lv] == 0:
                    lvl_flipped[lv] = 1
                    v = lvl_var[lv]
                    assign[v] = 1
                    trail[tlen] = 2 * v
                    tlen += 1
                    nxt = v
                    resumed = True
                    break
                nlev -= 1
            if not resumed:
                return 0, assign
            continue
        while nxt < nvars and assign[nxt] != -1:
            nxt += 1
        if nxt == nvars:
            return 1, assign
        lvl_start[nlev] = tlen
        lvl_var[nlev] = nxt
        lvl_flipped[nlev] = 0
        nlev += 1
        assign[nxt] = 0
        trail[tlen] = 2 * nxt + 1
        tlen += 1


_lexmin_jit = njit(cache=True)(_lexmin_py)


def _occurrences(nvars: int, clause_ptr: np.ndarray, clause_lits: np.ndarray):
    nclauses = clause_ptr.shape[0] - 1
    owner = np.repeat(np.arange(nclauses, dtype=np.int64), np.diff(clause_ptr))
    order = np.argsort(clause_lits, kind="stable")
    counts = np.bincount(clause_lits, minlength=2 * nvars)
    occ_ptr = np.zeros(2 * nvars + 1, dtype=np.int64)
    np.cumsum(counts, out=occ_ptr[1:])
    return occ_ptr, owner[order]


def lexmin_search(nvars: int, clauses: list[list[int]] | tuple) -> np.ndarray | None:
    """Lexicographically least satisfying assignment (int8 0/1 array) or None.

    ``clauses`` is either a list of literal lists or a prebuilt
    ``(clause_ptr, clause_lits)`` CSR pair.
    """
    if isinstance(clauses, tuple):
        clause_ptr, clause_lits = clauses
    else:
        sizes = np.fromiter((len(c) for c in clauses), dtype=np.int64, count=len(clauses))
        clause_ptr = np.zeros(len(clauses) + 1, dtype=np.int64)
        np.cumsum(sizes, out=clause_ptr[1:])
        clause_lits = np.fromiter(
            (lit for c in clauses for lit in c), dtype=np.int64, count=int(clause_ptr[-1])
        )
    clause_ptr = np.ascontiguousarray(clause_ptr, dtype=np.int64)
    clause_lits = np.ascontiguousarray(clause_lits, dtype=np.int64)
    if nvars == 0:
        # with no variables every clause is empty, hence false
        return None if len(clause_ptr) > 1 else np.zeros(0, dtype=np.int8)
    if clause_lits.size and (clause_lits.min() < 0 or clause_lits.max() >= 2 * nvars):
        raise ValueError("literal out of range")
    occ_ptr, occ_idx = _occurrences(nvars, clause_ptr, clause_lits)
    fn = _lexmin_jit if _backend == "numba" else _lexmin_py
    status, assign = fn(nvars, clause_ptr, clause_lits, occ_ptr, occ_idx)
    return assign if status == 1 else None
