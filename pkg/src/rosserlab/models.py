"""Truth assignments on F_m, conditions (A) and (B), and least-model search.

A model search is a CNF problem with one variable per formula of F_n, listed in
ascending code order.  Negation and conjunction are tied to their immediate
subformulas, (B) fixes every Delta_0 sentence, (A) adds ``~u | u'`` for each
universal ``u`` and each instance ``u'`` inside F_n, and the target set adds
unit clauses.  The least model is the least bit string under the chosen
variable order, found by :func:`rosserlab._kernels.lexmin_search`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from rosserlab import _kernels
from rosserlab.errors import DomainCapError
from rosserlab.godel import (
    BASE, TAG_AND, TAG_FORALL, TAG_NEG, code_limit, encode_capped, f_set, fn_cap,
    formula_codes, instances_within, table, unpair,
)
from rosserlab.syntax import (
    And, Formula, Not, eval_delta0, instance_convention, is_delta0_sentence,
)

__all__ = [
    "TruthAssignment", "is_assignment", "satisfies_A", "satisfies_B", "is_model_of",
    "least_model", "sat", "e_eval", "bounded_d", "ORDERS",
]

ORDERS = ("ascending", "reversed")


@dataclass(frozen=True)
class TruthAssignment:
    """A 0/1 map on F_n stored as parallel tuples in ascending code order."""

    domain_bound: int
    codes: tuple[int, ...]
    bits: tuple[int, ...]
    _by_code: dict = field(default_factory=dict, compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.codes) != len(self.bits):
            raise ValueError("codes and bits differ in length")
        self._by_code.update(zip(self.codes, self.bits))

    def __len__(self) -> int:
        return len(self.codes)

    def code_value(self, c: int) -> int | None:
        return self._by_code.get(c)

    def is_assignment_on(self, n: int) -> bool:
        """Total on F_n and coherent; computed from codes alone and cached."""
        hit = self._cache.get(n)
        if hit is None:
            hit = self.domain_bound == n and self._check_coherent(n)
            self._cache[n] = hit
        return hit

    def _check_coherent(self, n: int) -> bool:
        if not np.array_equal(np.asarray(self.codes, dtype=np.int64), formula_codes(n)):
            return False
        by = self._by_code
        for c, bit in zip(self.codes, self.bits):
            if bit not in (0, 1):
                return False
            tag = _tag(c)
            if tag == TAG_NEG:
                if bit != 1 - by[unpair((c - 1) // BASE)[0]]:
                    return False
            elif tag == TAG_AND:
                a, b = unpair((c - 1) // BASE)
                if bit != by[a] * by[b]:
                    return False
        return True

    def value(self, f: Formula) -> int | None:
        c = encode_capped(f, self.domain_bound)
        return None if c is None else self._by_code.get(c)

    def formulas(self) -> list[Formula]:
        return [table.formula(c) for c in self.codes]

    def as_map(self) -> dict[Formula, int]:
        return dict(zip(self.formulas(), self.bits))

    def pairs(self) -> list[list[int]]:
        return [[c, b] for c, b in zip(self.codes, self.bits)]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Iterable[int]]) -> "TruthAssignment":
        items = sorted((int(c), int(b)) for c, b in pairs)
        return cls(n, tuple(c for c, _ in items), tuple(b for _, b in items))

    @classmethod
    def from_map(cls, n: int, values: Mapping[Formula, int]) -> "TruthAssignment":
        from rosserlab.godel import encode

        return cls.from_pairs(n, ((encode(f), b) for f, b in values.items()))


def _as_map(V: TruthAssignment | Mapping[Formula, int]) -> Mapping[Formula, int]:
    return V.as_map() if isinstance(V, TruthAssignment) else V


def is_assignment(V: TruthAssignment | Mapping[Formula, int], m: int) -> bool:
    """Total on F_m and propositionally coherent."""
    values = _as_map(V)
    fs = f_set(m)
    if len(values) != len(fs) or any(f not in values for f in fs):
        return False
    for f in fs:
        bit = values[f]
        if bit not in (0, 1):
            return False
        if isinstance(f, Not) and bit != 1 - values[f.body]:
            return False
        if isinstance(f, And) and bit != values[f.left] * values[f.right]:
            return False
    return True


def satisfies_A(V: TruthAssignment) -> bool:
    n = V.domain_bound
    for c, bit in zip(V.codes, V.bits):
        if bit and _tag(c) == TAG_FORALL:
            for g in instances_within(table.formula(c), n):
                if V.value(g) != 1:
                    return False
    return True


def satisfies_B(V: TruthAssignment) -> bool:
    for c, bit in zip(V.codes, V.bits):
        f = table.formula(c)
        if is_delta0_sentence(f) and eval_delta0(f) != bool(bit):
            return False
    return True


def bounded_d(X: Iterable[Formula]) -> int:
    """d(X), refusing (DomainCapError) when a member is beyond the code limit."""
    n = 0
    limit = code_limit()
    for f in X:
        c = encode_capped(f, limit)
        if c is None:
            raise DomainCapError("a member's code is beyond ROSSERLAB_CODE_LIMIT")
        n = max(n, c)
    return n


def is_model_of(V: TruthAssignment, X: Iterable[Formula]) -> bool:
    for f in X:
        c = encode_capped(f, V.domain_bound)
        if c is None or V.code_value(c) != 1:
            return False
    return True


# --------------------------------------------------------------------------
# Search


def _tag(c: int) -> int:
    return (c - 1) % BASE + 1


@dataclass(frozen=True)
class _Problem:
    codes: np.ndarray
    index: dict
    clause_ptr: np.ndarray
    clause_lits: np.ndarray


@lru_cache(maxsize=16)
def _base_problem(n: int, use_a: bool, use_b: bool, allow_empty: bool) -> _Problem:
    codes = formula_codes(n)
    if len(codes) > fn_cap():
        raise DomainCapError(f"|F_{n}| = {len(codes)} exceeds ROSSERLAB_FN_CAP={fn_cap()}")
    index = {int(c): i for i, c in enumerate(codes)}
    clauses: list[tuple[int, ...]] = []
    for i, c in enumerate(codes.tolist()):
        tag = _tag(c)
        if tag == TAG_NEG:
            j = index[unpair((c - 1) // BASE)[0]]
            clauses.append((2 * i, 2 * j))
            clauses.append((2 * i + 1, 2 * j + 1))
        elif tag == TAG_AND:
            a, b = unpair((c - 1) // BASE)
            ja, jb = index[a], index[b]
            clauses.append((2 * i + 1, 2 * ja))
            clauses.append((2 * i + 1, 2 * jb))
            clauses.append((2 * i, 2 * ja + 1, 2 * jb + 1))
        f = table.formula(c)
        if use_b and is_delta0_sentence(f):
            clauses.append((2 * i + (0 if eval_delta0(f) else 1),))
        if use_a and tag == TAG_FORALL:
            for g in instances_within(f, n):
                clauses.append((2 * i + 1, 2 * index[encode_capped(g, n)]))
    sizes = np.fromiter((len(cl) for cl in clauses), dtype=np.int64, count=len(clauses))
    ptr = np.zeros(len(clauses) + 1, dtype=np.int64)
    np.cumsum(sizes, out=ptr[1:])
    lits = np.fromiter((x for cl in clauses for x in cl), dtype=np.int64, count=int(ptr[-1]))
    return _Problem(codes, index, ptr, lits)


def _conds(conds: Iterable[str]) -> tuple[bool, bool]:
    cs = set(conds)
    if not cs <= {"A", "B"}:
        raise ValueError(f"unknown conditions {sorted(cs - {'A', 'B'})}")
    return "A" in cs, "B" in cs


def least_model(
    X: Iterable[Formula], conds: Iterable[str] = ("A", "B"), order: str = "ascending"
) -> TruthAssignment | None:
    """Least model of X on F_{d(X)} meeting ``conds``, or None if there is none."""
    use_a, use_b = _conds(conds)
    X = frozenset(X)
    bounded_d(X)  # the cap check stays outside the cache
    return _least_model(X, use_a, use_b, order, instance_convention())


@lru_cache(maxsize=256)
def _least_model(
    X: frozenset, use_a: bool, use_b: bool, order: str, allow_empty: bool
) -> TruthAssignment | None:
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    n = bounded_d(X)
    prob = _base_problem(n, use_a, use_b, allow_empty)
    nvars = len(prob.codes)
    units = np.array(
        sorted(2 * prob.index[encode_capped(f, n)] for f in X), dtype=np.int64
    )
    ptr = np.concatenate([prob.clause_ptr, prob.clause_ptr[-1] + np.arange(1, len(units) + 1)])
    lits = np.concatenate([prob.clause_lits, units])
    if order == "reversed":
        lits = 2 * (nvars - 1 - (lits >> 1)) + (lits & 1)
    assign = _kernels.lexmin_search(nvars, (ptr, lits))
    if assign is None:
        return None
    if order == "reversed":
        assign = assign[::-1]
    return TruthAssignment(n, tuple(prob.codes.tolist()), tuple(int(b) for b in assign))


def sat(source, m: int, order: str = "ascending") -> bool:
    """Sat(m): P_{T,m} has a model satisfying (A) and (B)."""
    from rosserlab.proofs import p_set

    return least_model(p_set(source, m), ("A", "B"), order) is not None


# --------------------------------------------------------------------------
# e(phi, V, n)


def e_eval(f: Formula, V: TruthAssignment | None, n: int) -> int:
    """The total extension of V to all formulas."""
    if not isinstance(V, TruthAssignment) or not V.is_assignment_on(n):
        return 0
    negs = 0
    while isinstance(f, Not):
        negs += 1
        f = f.body
    if isinstance(f, And):
        bit = e_eval(f.left, V, n) * e_eval(f.right, V, n)
    else:
        c = encode_capped(f, n)
        if c is not None:
            bit = V.code_value(c)
        elif is_delta0_sentence(f):
            bit = int(eval_delta0(f))
        else:
            bit = 1
    return bit if negs % 2 == 0 else 1 - bit
