"""Proof streams: single-conclusion sources standing in for a theory's proofs.

A proof "number" is a bare stream position.  Every source here is finite: it
answers ``None`` at all but finitely many positions.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from rosserlab.parser import parse_formula, print_formula
from rosserlab.syntax import (
    And, Eq, Formula, Not, Zero, contrapositive_parts, is_sentence, subformulas,
)

__all__ = [
    "ProofSource", "ProofPrefix", "scripted_source", "inject_contradiction",
    "axiom_enumerator_source", "merge_sources", "proof_at", "p_set", "prefix",
    "DEFAULT_TEMPLATES",
]


@dataclass(frozen=True)
class ProofSource:
    """Finite map position -> formula; ``events`` is sorted by position."""

    events: tuple[tuple[int, Formula], ...]
    descriptor: str = "scripted"
    _lookup: dict = field(default_factory=dict, compare=False, repr=False)
    _positions: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self) -> None:
        for y, f in self.events:
            if y < 0:
                raise ValueError(f"negative position {y}")
            if y in self._lookup:
                raise ValueError(f"two conclusions at position {y}")
            self._lookup[y] = f
        ys = [y for y, _ in self.events]
        if ys != sorted(ys):
            raise ValueError("events must be sorted by position")
        self._positions.extend(ys)

    def proof_at(self, y: int) -> Formula | None:
        return self._lookup.get(y)

    def upto(self, m: int) -> tuple[tuple[int, Formula], ...]:
        return self.events[: bisect_right(self._positions, m)]

    def count_upto(self, m: int) -> int:
        return bisect_right(self._positions, m)

    @property
    def last_position(self) -> int:
        return self._positions[-1] if self._positions else -1

    def change_points(self) -> list[int]:
        return list(self._positions)


@dataclass(frozen=True)
class ProofPrefix:
    source: ProofSource
    bound: int
    members: tuple[tuple[int, Formula], ...]

    def formulas(self) -> frozenset[Formula]:
        return frozenset(f for _, f in self.members)


def proof_at(s: ProofSource, y: int) -> Formula | None:
    return s.proof_at(y)


def prefix(s: ProofSource, m: int) -> ProofPrefix:
    return ProofPrefix(s, m, s.upto(m))


def p_set(s: ProofSource, m: int) -> frozenset[Formula]:
    """P_{T,m}: formulas proved at some position <= m."""
    if m < 0:
        return frozenset()
    return frozenset(f for _, f in s.upto(m))


def scripted_source(events: Iterable[tuple[int, Formula]], descriptor: str = "scripted") -> ProofSource:
    evs = sorted(events, key=lambda e: e[0])
    return ProofSource(tuple(evs), descriptor)


def inject_contradiction(s: ProofSource, at: int, f: Formula) -> ProofSource:
    """``s`` plus ``f`` at ``at`` and ``~f`` at ``at + 1``."""
    for y in (at, at + 1):
        if s.proof_at(y) is not None:
            raise ValueError(f"position {y} is already occupied")
    desc = f"{s.descriptor}+inject({at},{print_formula(f)})"
    return scripted_source(list(s.events) + [(at, f), (at + 1, Not(f))], desc)


def merge_sources(*sources: ProofSource) -> ProofSource:
    events: list[tuple[int, Formula]] = []
    for s in sources:
        events.extend(s.events)
    return scripted_source(events, "+".join(s.descriptor for s in sources))


# --------------------------------------------------------------------------
# A weak Hilbert-style enumerator


DEFAULT_TEMPLATES: tuple[str, ...] = (
    "(A -> A)",
    "((A & B) -> A)",
    "((A & B) -> B)",
    "(A -> (B -> A))",
    "(A -> (B -> (A & B)))",
)


def _instantiate(template: Formula, a_pat: Formula, b_pat: Formula, a: Formula, b: Formula) -> Formula:
    if template == a_pat:
        return a
    if template == b_pat:
        return b
    if isinstance(template, Not):
        return Not(_instantiate(template.body, a_pat, b_pat, a, b))
    if isinstance(template, And):
        return And(_instantiate(template.left, a_pat, b_pat, a, b),
                   _instantiate(template.right, a_pat, b_pat, a, b))
    return template


def axiom_enumerator_source(
    axioms: Sequence[Formula],
    start: int = 0,
    templates: Sequence[str] = DEFAULT_TEMPLATES,
    base_pool: Sequence[Formula] = (Eq(Zero(), Zero()),),
    max_emissions: int = 5000,
) -> ProofSource:
    """Enumerate axioms, template tautologies and their modus ponens closure.

    The queue is FIFO: axioms first, then every template instantiated over the
    pool (sentence subformulas of the axioms plus ``base_pool``), with each
    modus ponens consequence appended as soon as both premises are out.  One
    formula per position from ``start`` on; repeats are skipped.
    """
    for ax in axioms:
        if not is_sentence(ax):
            raise ValueError(f"axiom is not a sentence: {print_formula(ax)}")
    # templates are written over the placeholder atoms R(x0) and R(x1)
    a_pat, b_pat = parse_formula("R(x0)"), parse_formula("R(x1)")
    parsed = [parse_formula(t.replace("A", "R(x0)").replace("B", "R(x1)")) for t in templates]
    pool: list[Formula] = []
    for f in list(axioms) + list(base_pool):
        for g in subformulas(f):
            if is_sentence(g) and g not in pool:
                pool.append(g)
    queue: deque[Formula] = deque(axioms)
    for t in parsed:
        for a in pool:
            for b in pool:
                queue.append(_instantiate(t, a_pat, b_pat, a, b))
    by_antecedent: dict[Formula, list[Formula]] = {}
    seen: set[Formula] = set()
    events: list[tuple[int, Formula]] = []
    y = start
    while queue and len(events) < max_emissions:
        f = queue.popleft()
        if f in seen:
            continue
        seen.add(f)
        events.append((y, f))
        y += 1
        # modus ponens with f as the implication or as the minor premise
        parts = contrapositive_parts(f)
        if parts is not None:
            by_antecedent.setdefault(parts[0], []).append(parts[1])
            if parts[0] in seen:
                queue.append(parts[1])
        queue.extend(by_antecedent.get(f, ()))
    names = ",".join(print_formula(a) for a in axioms)
    return ProofSource(tuple(events), f"enumerator[{names}]@{start}")
