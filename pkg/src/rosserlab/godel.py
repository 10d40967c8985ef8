"""Goedel numbering by tagged Cantor pairing, the xi enumeration and F_m.

``code(node) = 11 * pair(first, second) + tag`` where ``pair`` is Cantor's
pairing function, ``first``/``second`` are child codes (or a variable index)
and the tag identifies the node kind:

    1 zero   2 var    3 succ   4 sum    5 prod   6 eq
    7 leq    8 box    9 neg    10 and   11 forall

Codes are positive, injective, and strictly larger than the code of every
child, so ascending code order lists subformulas first.  Codes grow doubly
exponentially with nesting depth; :func:`encode` refuses codes beyond
``MAX_CODE_BITS`` and :func:`encode_capped` answers "bigger than the cap"
without materializing the number.
"""

from __future__ import annotations

import os
import threading
from collections.abc import Iterable
from functools import lru_cache
from math import isqrt

import numpy as np

from rosserlab import _kernels
from rosserlab.errors import CodeOverflowError, DomainCapError
from rosserlab.syntax import (
    And, Box, Eq, Forall, Formula, Leq, Not, Prod, Succ, Sum, Term, Var, Zero,
    numeral, substitute, leading_vars, free_vars, instance_convention,
)

__all__ = [
    "BASE", "pair", "unpair", "encode", "encode_capped", "decode", "decode_formula",
    "xi", "index_of", "f_set", "f_count", "formula_codes", "d", "dot_neg", "dot_imp",
    "rosser_box_code", "instances_within", "code_sort_key", "formula_order",
    "fn_cap", "code_limit", "table", "negated_universal_codes",
]

BASE = 11
(TAG_ZERO, TAG_VAR, TAG_SUCC, TAG_SUM, TAG_PROD, TAG_EQ,
 TAG_LEQ, TAG_BOX, TAG_NEG, TAG_AND, TAG_FORALL) = range(1, 12)

MAX_CODE_BITS = 1 << 16
DEFAULT_FN_CAP = 100_000
DEFAULT_CODE_LIMIT = 100_000_000


def fn_cap() -> int:
    return int(float(os.environ.get("ROSSERLAB_FN_CAP", DEFAULT_FN_CAP)))


def code_limit() -> int:
    return int(float(os.environ.get("ROSSERLAB_CODE_LIMIT", DEFAULT_CODE_LIMIT)))


def pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def _node(tag: int, first: int, second: int = 0) -> int:
    # pairing roughly doubles the bit length; refuse before squaring huge ints
    if max(first, second).bit_length() > MAX_CODE_BITS // 2 + 8:
        raise CodeOverflowError(f"code exceeds {MAX_CODE_BITS} bits")
    return BASE * pair(first, second) + tag


def _check(c: int) -> int:
    if c.bit_length() > MAX_CODE_BITS:
        raise CodeOverflowError(f"code exceeds {MAX_CODE_BITS} bits")
    return c


# --------------------------------------------------------------------------
# Encoding


def _enc_term(t: Term) -> int:
    if isinstance(t, Zero):
        return _node(TAG_ZERO, 0)
    if isinstance(t, Var):
        return _node(TAG_VAR, t.index)
    if isinstance(t, Succ):
        c = _enc_term(t.arg)
        for _ in range(t.times):
            c = _check(_node(TAG_SUCC, c))
        return c
    tag = TAG_SUM if isinstance(t, Sum) else TAG_PROD
    return _check(_node(tag, _enc_term(t.left), _enc_term(t.right)))


def _enc(x) -> int:
    if isinstance(x, Eq):
        return _check(_node(TAG_EQ, _enc_term(x.left), _enc_term(x.right)))
    if isinstance(x, Leq):
        return _check(_node(TAG_LEQ, _enc_term(x.left), _enc_term(x.right)))
    if isinstance(x, Box):
        return _check(_node(TAG_BOX, _enc_term(x.arg)))
    if isinstance(x, Not):
        return _check(_node(TAG_NEG, _enc(x.body)))
    if isinstance(x, And):
        return _check(_node(TAG_AND, _enc(x.left), _enc(x.right)))
    if isinstance(x, Forall):
        return _check(_node(TAG_FORALL, x.var, _enc(x.body)))
    return _enc_term(x)


@lru_cache(maxsize=1 << 16)
def encode(x: Formula | Term) -> int:
    """Exact code of a term or formula; raises CodeOverflowError if too large."""
    return _enc(x)


def _cap_term(t: Term, cap: int) -> int | None:
    if isinstance(t, Zero):
        c = 1
    elif isinstance(t, Var):
        c = _node(TAG_VAR, t.index)
    elif isinstance(t, Succ):
        c = _cap_term(t.arg, cap)
        for _ in range(t.times):
            if c is None:
                return None
            c = _node(TAG_SUCC, c)
            if c > cap:
                return None
    else:
        a = _cap_term(t.left, cap)
        b = _cap_term(t.right, cap) if a is not None else None
        if b is None:
            return None
        c = _node(TAG_SUM if isinstance(t, Sum) else TAG_PROD, a, b)
    return c if c <= cap else None


def _cap(x, cap: int) -> int | None:
    if isinstance(x, (Eq, Leq)):
        a = _cap_term(x.left, cap)
        b = _cap_term(x.right, cap) if a is not None else None
        if b is None:
            return None
        c = _node(TAG_EQ if isinstance(x, Eq) else TAG_LEQ, a, b)
    elif isinstance(x, Box):
        a = _cap_term(x.arg, cap)
        if a is None:
            return None
        c = _node(TAG_BOX, a)
    elif isinstance(x, Not):
        a = _cap(x.body, cap)
        if a is None:
            return None
        c = _node(TAG_NEG, a)
    elif isinstance(x, And):
        a = _cap(x.left, cap)
        b = _cap(x.right, cap) if a is not None else None
        if b is None:
            return None
        c = _node(TAG_AND, a, b)
    elif isinstance(x, Forall):
        b = _cap(x.body, cap)
        if b is None:
            return None
        c = _node(TAG_FORALL, x.var, b)
    else:
        return _cap_term(x, cap)
    return c if c <= cap else None


@lru_cache(maxsize=1 << 18)
def encode_capped(x: Formula | Term, cap: int) -> int | None:
    """``encode(x)`` if it is at most ``cap``, else None (cheap for huge codes)."""
    if cap < 1:
        return None
    return _cap(x, cap)


def code_sort_key(f: Formula | Term) -> tuple:
    """Total order key that agrees with code order whenever codes are materializable."""
    try:
        return (0, encode(f), "")
    except CodeOverflowError:
        from rosserlab.parser import print_formula, print_term

        text = print_term(f) if isinstance(f, (Zero, Var, Succ, Sum, Prod)) else print_formula(f)
        return (1, len(text), text)


def _neg_chain(f: Formula) -> tuple[int, Formula]:
    k = 0
    while isinstance(f, Not):
        k += 1
        f = f.body
    return k, f


def formula_order(a: Formula, b: Formula) -> int:
    """Compare two formulas by code (-1, 0, 1), structurally when possible."""
    if a == b:
        return 0
    ka, base_a = _neg_chain(a)
    kb, base_b = _neg_chain(b)
    if base_a == base_b:
        return -1 if ka < kb else 1
    ca, cb = code_sort_key(a), code_sort_key(b)
    return -1 if ca < cb else 1


# --------------------------------------------------------------------------
# Decoding


def _dec(c: int, memo: dict[int, object | None]):
    if c in memo:
        return memo[c]
    out = None
    if c >= 1:
        tag = (c - 1) % BASE + 1
        p = (c - 1) // BASE
        a, b = unpair(p)
        if tag == TAG_ZERO:
            out = Zero() if p == 0 else None
        elif tag == TAG_VAR:
            out = Var(a) if b == 0 else None
        elif tag == TAG_SUCC:
            if b == 0:
                t = _dec(a, memo)
                out = Succ(t) if _is_term(t) else None
        elif tag in (TAG_SUM, TAG_PROD, TAG_EQ, TAG_LEQ):
            l, r = _dec(a, memo), _dec(b, memo)
            if _is_term(l) and _is_term(r):
                out = {TAG_SUM: Sum, TAG_PROD: Prod, TAG_EQ: Eq, TAG_LEQ: Leq}[tag](l, r)
        elif tag == TAG_BOX:
            if b == 0:
                t = _dec(a, memo)
                out = Box(t) if _is_term(t) else None
        elif tag == TAG_NEG:
            if b == 0:
                f = _dec(a, memo)
                out = Not(f) if _is_formula(f) else None
        elif tag == TAG_AND:
            l, r = _dec(a, memo), _dec(b, memo)
            if _is_formula(l) and _is_formula(r):
                out = And(l, r)
        else:
            f = _dec(b, memo)
            out = Forall(a, f) if _is_formula(f) else None
    memo[c] = out
    return out


def _is_term(x) -> bool:
    return isinstance(x, (Zero, Var, Succ, Sum, Prod))


def _is_formula(x) -> bool:
    return isinstance(x, (Eq, Leq, Box, Not, And, Forall))


_decode_memo: dict[int, object | None] = {}
_decode_lock = threading.Lock()


def decode(c: int) -> Formula | Term | None:
    """Inverse of :func:`encode`; None for naturals that code nothing."""
    if c < 1:
        return None
    if c in _decode_memo:
        return _decode_memo[c]
    memo: dict[int, object | None] = {}
    out = _dec(c, memo)
    if len(_decode_memo) < 1 << 20:
        with _decode_lock:
            _decode_memo[c] = out
    return out


def decode_formula(c: int) -> Formula | None:
    x = decode(c)
    return x if _is_formula(x) else None


# --------------------------------------------------------------------------
# The enumeration table


class _Table:
    """Ascending list of formula codes up to ``limit``, grown on demand."""

    def __init__(self) -> None:
        self.limit = 0
        self.codes = np.zeros(0, dtype=np.int64)
        self.neg_universal = np.zeros(0, dtype=np.int64)
        self._formulas: dict[int, Formula] = {}
        self._lock = threading.RLock()

    def ensure(self, n: int) -> None:
        if n <= self.limit:
            return
        cap = code_limit()
        if n > cap:
            raise DomainCapError(
                f"F_{n} needs the code table beyond ROSSERLAB_CODE_LIMIT={cap}"
            )
        with self._lock:
            if n <= self.limit:
                return
            new_limit = min(cap, max(n, 2 * self.limit, 1 << 14))
            kinds = _kernels.classify(new_limit)
            codes = np.flatnonzero(kinds == _kernels.KIND_FORMULA).astype(np.int64)
            child, _ = _kernels._unpair_np((codes - 1) // BASE)
            mask = ((codes - 1) % BASE + 1 == TAG_NEG) & ((child - 1) % BASE + 1 == TAG_FORALL)
            self.neg_universal = codes[mask]
            self.codes = codes
            self.limit = new_limit

    def count_upto(self, m: int) -> int:
        if m < 1:
            return 0
        self.ensure(m)
        return int(np.searchsorted(self.codes, m, side="right"))

    def ensure_count(self, k: int) -> None:
        while len(self.codes) < k:
            if self.limit >= code_limit():
                raise DomainCapError(f"fewer than {k} formulas below the code limit")
            self.ensure(min(code_limit(), max(2 * self.limit, 1 << 14)))

    def formula(self, c: int) -> Formula:
        f = self._formulas.get(c)
        if f is None:
            f = decode_formula(c)
            with self._lock:
                self._formulas[c] = f
        return f


table = _Table()


def formula_codes(m: int) -> np.ndarray:
    """Codes of F_m in ascending order (no F_n cap applied)."""
    k = table.count_upto(m)
    return table.codes[:k]


def negated_universal_codes(m: int) -> np.ndarray:
    """Codes of the formulas ``~all x ...`` in F_m, ascending."""
    if m < 1:
        return table.neg_universal[:0]
    table.ensure(m)
    return table.neg_universal[: int(np.searchsorted(table.neg_universal, m, side="right"))]


def f_count(m: int) -> int:
    return table.count_upto(m)


def f_set(m: int) -> list[Formula]:
    """F_m: every formula with code at most ``m``, ascending."""
    k = f_count(m)
    if k > fn_cap():
        raise DomainCapError(f"|F_{m}| = {k} exceeds ROSSERLAB_FN_CAP={fn_cap()}")
    return [table.formula(int(c)) for c in table.codes[:k]]


def xi(k: int) -> Formula:
    """The (k+1)-st formula in ascending code order."""
    if k < 0:
        raise ValueError("index must be >= 0")
    table.ensure_count(k + 1)
    return table.formula(int(table.codes[k]))


def index_of(f: Formula) -> int:
    c = encode_capped(f, code_limit())
    if c is None:
        raise DomainCapError("formula code beyond ROSSERLAB_CODE_LIMIT")
    table.ensure(c)
    i = int(np.searchsorted(table.codes, c))
    if i >= len(table.codes) or table.codes[i] != c:
        raise ValueError("not a formula")
    return i


# --------------------------------------------------------------------------
# Set and code arithmetic


def d(xs: Iterable[Formula]) -> int:
    """Least n with every member of ``xs`` in F_n (0 for the empty set)."""
    return max((encode(f) for f in xs), default=0)


def _formula_at(c: int) -> Formula:
    f = decode_formula(c)
    if f is None:
        raise ValueError(f"{c} is not the code of a formula")
    return f


def dot_neg(c: int) -> int:
    _formula_at(c)
    return _check(_node(TAG_NEG, c))


def dot_imp(a: int, b: int) -> int:
    _formula_at(a)
    _formula_at(b)
    return _check(_node(TAG_NEG, _check(_node(TAG_AND, a, _check(_node(TAG_NEG, b))))))


def rosser_box_code(c: int) -> int:
    return encode(Box(numeral(c)))


# --------------------------------------------------------------------------
# Instances below a code bound


def instances_within(f: Formula, code_bound: int) -> list[Formula]:
    """Instances of the universal ``f`` whose code is at most ``code_bound``."""
    if not isinstance(f, Forall) or code_bound < 1:
        return []
    return list(_instances_within(f, code_bound, instance_convention()))


@lru_cache(maxsize=1 << 14)
def _instances_within(f: Forall, code_bound: int, allow_empty: bool) -> tuple[Formula, ...]:
    vars_, matrices = leading_vars(f)
    found: dict[Formula, None] = {}
    if allow_empty and encode_capped(f, code_bound) is not None:
        found[f] = None
    for k in range(1, len(vars_) + 1):
        matrix = matrices[k - 1]
        slots = sorted(set(vars_[:k]) & free_vars(matrix))
        _extend(matrix, slots, code_bound, found)
    return tuple(sorted(found, key=lambda g: encode(g)))


def _extend(g: Formula, slots: list[int], bound: int, found: dict) -> None:
    if not slots:
        if encode_capped(g, bound) is not None:
            found[g] = None
        return
    v, rest = slots[0], slots[1:]
    n = 0
    while True:
        h = substitute(g, v, numeral(n))
        lowest = h
        for w in rest:
            lowest = substitute(lowest, w, numeral(0))
        # codes grow with every numeral, so the first miss ends the scan
        if encode_capped(lowest, bound) is None:
            return
        _extend(h, rest, bound, found)
        n += 1
