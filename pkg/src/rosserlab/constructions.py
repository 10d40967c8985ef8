"""The stage-based output functions g1, g2, g3 and Rosser evaluation.

All three constructions share Procedure 1 (echo the proof stream).  g1 and g2
switch to Procedure 2 at the first stage m where Sat(m) fails; g3 switches
when the bell rings.  Procedure 2 is an infinite, fully determined tail; a
trace materializes it up to the horizon and keeps a *tail rule* that places
any formula beyond the horizon, so Rosser verdicts after a switch are total.

Tail slots are ordered by the code of the enumerated formula ``xi`` and then by
the sub-position inside that slot.  Only formulas on one negation chain are
ever compared in g1/g2, so the order is decided structurally even when codes
are too large to write down.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Any

from rosserlab.errors import CodeOverflowError, DomainCapError, ScenarioError
from rosserlab.godel import (
    code_sort_key, decode_formula, encode_capped, formula_order, index_of,
    negated_universal_codes, table, xi, TAG_FORALL, BASE,
)
from rosserlab.models import TruthAssignment, e_eval, least_model
from rosserlab.parser import parse_formula, print_formula
from rosserlab.proofs import ProofSource, p_set
from rosserlab.scenario import Scenario, scenario_from_dict
from rosserlab.syntax import (
    Box, Forall, Formula, Not, contrapositive_parts, eval_delta0, is_delta0_sentence,
    is_instance, minus, numeral_value,
)

__all__ = [
    "PROCEDURE1", "PROCEDURE2", "WITNESS_CODE_LIMIT", "BellRecord", "ClosureSet",
    "G1Tail", "G2Tail", "G3Tail",
    "RosserVerdict", "ConstructionTrace", "run_g1", "run_g2", "run_g3", "run",
    "is_critical", "compute_X", "closure", "bell_condition", "bell_check",
    "eval_rosser", "prf", "trace_from_json", "trace_from_outputs",
]

PROCEDURE1, PROCEDURE2 = "procedure1", "procedure2"

# Tail positions are reported only for slots whose formula code is at most this.
WITNESS_CODE_LIMIT = 10**7


@dataclass(frozen=True)
class BellRecord:
    stage: int
    condition: int
    witness: Formula


@dataclass(frozen=True)
class ClosureSet:
    base_bound: int
    levels: tuple[frozenset[Formula], ...]

    @property
    def fixpoint(self) -> frozenset[Formula]:
        return self.levels[-1] if self.levels else frozenset()

    @property
    def iterations(self) -> int:
        """Number of rule applications that added something."""
        return max(len(self.levels) - 1, 0)


@dataclass(frozen=True)
class RosserVerdict:
    status: str  # "provable" | "blocked" | "unknown"
    y: int | None = None
    where: str = ""

    @property
    def provable(self) -> bool:
        return self.status == "provable"


@functools.total_ordering
class _Key:
    """Sort key for formulas that follows code order."""

    __slots__ = ("f",)

    def __init__(self, f: Formula) -> None:
        self.f = f

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Key) and self.f == other.f

    def __lt__(self, other: "_Key") -> bool:
        return formula_order(self.f, other.f) < 0

    def __hash__(self) -> int:
        return hash(self.f)


def _sorted_by_code(xs) -> list[Formula]:
    return sorted(xs, key=code_sort_key)


def _xi_position(f: Formula) -> int | None:
    if encode_capped(f, WITNESS_CODE_LIMIT) is None:
        return None
    return index_of(f)


# --------------------------------------------------------------------------
# Tails


class _Tail:
    start: int

    def first_slot(self, g: Formula):
        raise NotImplementedError

    def position(self, slot) -> int | None:
        raise NotImplementedError

    def materialize(self, count: int) -> list[Formula]:
        raise NotImplementedError


class G1Tail(_Tail):
    """g1(m + k) = -xi_k if e(xi_k) = 1, else ~xi_k."""

    def __init__(self, start: int, n: int, V: TruthAssignment) -> None:
        self.start, self.n, self.V = start, n, V

    def out(self, x: Formula) -> Formula:
        return minus(x) if e_eval(x, self.V, self.n) == 1 else Not(x)

    def first_slot(self, g: Formula):
        cands = [g, Not(g)] + ([g.body] if isinstance(g, Not) else [])
        hits = [_Key(x) for x in cands if self.out(x) == g]
        return (min(hits), 0) if hits else None

    def position(self, slot) -> int | None:
        k = _xi_position(slot[0].f)
        return None if k is None else self.start + k

    def materialize(self, count: int) -> list[Formula]:
        return [self.out(xi(k)) for k in range(count)]


class G2Tail(_Tail):
    """Emit ~xi_k then xi_k when xi_k is not critical but ~xi_k is; else xi_k."""

    def __init__(self, start: int, n: int, V: TruthAssignment) -> None:
        self.start, self.n, self.V = start, n, V
        self._true_universals = _UniversalIndex(V)
        self._offsets = [0]  # _offsets[k] = i_k

    def critical(self, f: Formula) -> bool:
        return _critical(f, self.V, self.n, self._true_universals)

    def doubled(self, x: Formula) -> bool:
        return not self.critical(x) and self.critical(Not(x))

    def emissions(self, x: Formula) -> list[Formula]:
        return [Not(x), x] if self.doubled(x) else [x]

    def first_slot(self, g: Formula):
        hits = []
        if self.doubled(g):
            hits.append((_Key(g), 1))
        else:
            hits.append((_Key(g), 0))
        if isinstance(g, Not) and self.doubled(g.body):
            hits.append((_Key(g.body), 0))
        return min(hits)

    def _offset(self, k: int) -> int:
        while len(self._offsets) <= k:
            j = len(self._offsets) - 1
            self._offsets.append(self._offsets[j] + len(self.emissions(xi(j))))
        return self._offsets[k]

    def position(self, slot) -> int | None:
        k = _xi_position(slot[0].f)
        return None if k is None else self.start + self._offset(k) + slot[1]

    def materialize(self, count: int) -> list[Formula]:
        out: list[Formula] = []
        k = 0
        while len(out) < count:
            out.extend(self.emissions(xi(k)))
            k += 1
        return out[:count]


class G3Tail(_Tail):
    """chi_0 .. chi_{k-1} (X_{m-1} by code), then the whole xi enumeration."""

    def __init__(self, start: int, chis: list[Formula]) -> None:
        self.start = start
        self.chis = list(chis)
        self._chi_index = {c: i for i, c in enumerate(self.chis)}

    def first_slot(self, g: Formula):
        i = self._chi_index.get(g)
        if i is not None:
            return (0, i)
        return (1, _Key(g))

    def position(self, slot) -> int | None:
        if slot[0] == 0:
            return self.start + slot[1]
        k = _xi_position(slot[1].f)
        return None if k is None else self.start + len(self.chis) + k

    def materialize(self, count: int) -> list[Formula]:
        out = self.chis[:count]
        k = 0
        while len(out) < count:
            out.append(xi(k))
            k += 1
        return out


# --------------------------------------------------------------------------
# Traces


@dataclass
class ConstructionTrace:
    kind: str
    horizon: int
    outputs: tuple[Formula | None, ...]
    mode: str
    switch_point: int | None = None
    model: tuple[int, TruthAssignment] | None = None
    bell: BellRecord | None = None
    closure: ClosureSet | None = None
    scenario: Scenario | None = None
    model_order: str = "ascending"
    tail: _Tail | None = field(default=None, repr=False)
    _first: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        for y, f in enumerate(self.outputs):
            if f is not None and f not in self._first:
                self._first[f] = y

    @property
    def switched(self) -> bool:
        return self.switch_point is not None

    def first_position(self, f: Formula) -> int | None:
        return self._first.get(f)

    def source(self) -> ProofSource | None:
        return None if self.scenario is None else self.scenario.source()

    # serialization

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "kind": self.kind,
            "horizon": self.horizon,
            "mode": self.mode,
            "switch_point": self.switch_point,
            "model_order": self.model_order,
            "outputs": [None if f is None else print_formula(f) for f in self.outputs],
        }
        if self.kind == "g3":
            out["bell"] = (
                {"rang": True, "stage": self.bell.stage, "condition": self.bell.condition,
                 "witness": print_formula(self.bell.witness)}
                if self.bell else {"rang": False, "stage": None, "condition": None, "witness": None}
            )
        else:
            out["bell"] = None
        if self.model is not None:
            n, V = self.model
            out["model"] = {"n": n, "V": V.pairs()}
        else:
            out["model"] = None
        if self.closure is not None:
            out["closure"] = {
                "base_bound": self.closure.base_bound,
                "levels": [[print_formula(f) for f in _sorted_by_code(lv)] for lv in self.closure.levels],
                "fixpoint": [print_formula(f) for f in _sorted_by_code(self.closure.fixpoint)],
            }
        else:
            out["closure"] = None
        out["scenario"] = None if self.scenario is None else self.scenario.to_dict()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":")) + "\n"


def trace_from_json(data: dict[str, Any]) -> ConstructionTrace:
    try:
        kind = data["kind"]
        if kind not in ("g1", "g2", "g3"):
            raise ScenarioError(f"unknown construction kind {kind!r}")
        outputs = tuple(None if s is None else parse_formula(s) for s in data["outputs"])
        horizon = int(data["horizon"])
        if len(outputs) != horizon:
            raise ScenarioError("outputs do not cover the horizon")
        switch = data.get("switch_point")
        model = None
        if data.get("model") is not None:
            n = int(data["model"]["n"])
            model = (n, TruthAssignment.from_pairs(n, data["model"]["V"]))
        bell = None
        b = data.get("bell")
        if b and b.get("rang"):
            bell = BellRecord(int(b["stage"]), int(b["condition"]), parse_formula(b["witness"]))
        closure = None
        if data.get("closure") is not None:
            c = data["closure"]
            closure = ClosureSet(
                int(c["base_bound"]),
                tuple(frozenset(parse_formula(s) for s in lv) for lv in c["levels"]),
            )
        scenario = scenario_from_dict(data["scenario"]) if data.get("scenario") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed trace: {exc}") from exc
    tail: _Tail | None = None
    if switch is not None:
        if kind == "g3":
            chis = _sorted_by_code(closure.fixpoint) if closure else []
            tail = G3Tail(switch, chis)
        elif model is not None:
            tail = (G1Tail if kind == "g1" else G2Tail)(switch, model[0], model[1])
    return ConstructionTrace(
        kind, horizon, outputs, data.get("mode", PROCEDURE1), switch, model, bell,
        closure, scenario, data.get("model_order", "ascending"), tail,
    )


# --------------------------------------------------------------------------
# Criticality


def _strip(f: Formula) -> tuple[int, type]:
    depth = 0
    while isinstance(f, Forall):
        depth += 1
        f = f.body
    return depth, type(f)


class _UniversalIndex:
    """V-true universals of F_n bucketed by the shape of their inner matrix.

    An instance keeps the innermost matrix constructor and has strictly fewer
    leading quantifiers, so only one bucket needs scanning.
    """

    def __init__(self, V: TruthAssignment) -> None:
        self._buckets: dict[type, list[tuple[int, Formula]]] = {}
        for c, b in zip(V.codes, V.bits):
            if b and (c - 1) % BASE + 1 == TAG_FORALL:
                u = table.formula(c)
                depth, kind = _strip(u)
                self._buckets.setdefault(kind, []).append((depth, u))

    def has_instance(self, f: Formula) -> bool:
        depth, kind = _strip(f)
        return any(d > depth and is_instance(f, u) for d, u in self._buckets.get(kind, ()))


def _critical(f: Formula, V: TruthAssignment, n: int, trues: _UniversalIndex) -> bool:
    c = encode_capped(f, n)
    if c is not None:
        return V.code_value(c) == 1
    if is_delta0_sentence(f):
        return eval_delta0(f)
    return trues.has_instance(f)


def is_critical(f: Formula, V: TruthAssignment, n: int) -> bool:
    return _critical(f, V, n, _UniversalIndex(V))


# --------------------------------------------------------------------------
# g1 and g2


def _check_horizon(horizon: int) -> None:
    if horizon < 1:
        raise ScenarioError("horizon must be >= 1")


def _run_sat_based(kind: str, source: ProofSource, horizon: int, order: str,
                   scenario: Scenario | None) -> ConstructionTrace:
    _check_horizon(horizon)
    outputs: list[Formula | None] = []
    sat_by_count: dict[int, bool] = {}
    for m in range(horizon):
        k = source.count_upto(m)
        ok = sat_by_count.get(k)
        if ok is None:
            ok = least_model(p_set(source, m), ("A", "B"), order) is not None
            sat_by_count[k] = ok
        if ok:
            outputs.append(source.proof_at(m))
            continue
        if m == 0:
            raise ScenarioError("Sat fails already at stage 0")
        conds = ("B",) if kind == "g1" else ("A", "B")
        V = least_model(p_set(source, m - 1), conds, order)
        if V is None:  # cannot happen: Sat(m - 1) held
            raise ScenarioError("no model of P_{T,m-1}")
        n = V.domain_bound
        tail = (G1Tail if kind == "g1" else G2Tail)(m, n, V)
        outputs.extend(tail.materialize(horizon - m))
        return ConstructionTrace(kind, horizon, tuple(outputs), PROCEDURE2, m, (n, V),
                                 None, None, scenario, order, tail)
    return ConstructionTrace(kind, horizon, tuple(outputs), PROCEDURE1, None, None,
                             None, None, scenario, order, None)


def run_g1(source: ProofSource, horizon: int, order: str = "ascending",
           scenario: Scenario | None = None) -> ConstructionTrace:
    return _run_sat_based("g1", source, horizon, order, scenario)


def run_g2(source: ProofSource, horizon: int, order: str = "ascending",
           scenario: Scenario | None = None) -> ConstructionTrace:
    return _run_sat_based("g2", source, horizon, order, scenario)


# --------------------------------------------------------------------------
# g3: closure sets and the bell


def closure(P: frozenset[Formula], m: int) -> ClosureSet:
    """X_m computed from P = P_{T,m}; levels are cumulative."""
    cur = frozenset(f for f in P if isinstance(f, Not))
    levels = [cur]
    candidates = [table.formula(int(c)) for c in negated_universal_codes(m)]
    contras = []
    for g in P:
        parts = contrapositive_parts(g)
        if parts is not None and isinstance(parts[0], Not) and isinstance(parts[1], Not):
            contras.append(parts)
    while True:
        new = set()
        for neg in candidates:
            if neg in cur:
                continue
            phi = neg.body
            if any(isinstance(x, Not) and is_instance(x.body, phi) for x in cur):
                new.add(neg)
        for a, b in contras:
            if a in cur and b not in cur:
                new.add(b)
        if not new:
            return ClosureSet(m, tuple(levels))
        cur = cur | new
        levels.append(cur)


def compute_X(source: ProofSource, m: int) -> ClosureSet:
    return closure(p_set(source, m), m)


def bell_check(X: frozenset[Formula], P: frozenset[Formula]) -> tuple[int, Formula] | None:
    """First bell condition (1, 2, then 3) met by X and P, with a witness."""
    union = X | P
    hits = [g for g in union if Not(g) in union]
    if hits:
        return 1, min(hits, key=code_sort_key)
    hits = []
    for x in X:
        if isinstance(x, Not) and isinstance(x.body, Box):
            c = numeral_value(x.body.arg)
            phi = decode_formula(c) if c is not None else None
            if phi is not None and Not(phi) not in X:
                hits.append(phi)
    if hits:
        return 2, min(hits, key=code_sort_key)
    hits = [x.body for x in X if isinstance(x, Not) and is_delta0_sentence(x.body)
            and eval_delta0(x.body)]
    if hits:
        return 3, min(hits, key=code_sort_key)
    return None


def bell_condition(source: ProofSource, m: int) -> tuple[int, Formula] | None:
    P = p_set(source, m)
    return bell_check(closure(P, m).fixpoint, P)


def run_g3(source: ProofSource, horizon: int, scenario: Scenario | None = None,
           order: str = "ascending") -> ConstructionTrace:
    _check_horizon(horizon)
    outputs: list[Formula | None] = []
    prev = ClosureSet(-1, (frozenset(),))
    cache: dict[tuple[int, int], tuple[ClosureSet, tuple[int, Formula] | None]] = {}
    for m in range(horizon):
        key = (source.count_upto(m), len(negated_universal_codes(m)))
        hit = cache.get(key)
        if hit is None:
            P = p_set(source, m)
            X = closure(P, m)
            hit = (X, bell_check(X.fixpoint, P))
            cache[key] = hit
        X, bell = hit
        if bell is not None:
            tail = G3Tail(m, _sorted_by_code(prev.fixpoint))
            outputs.extend(tail.materialize(horizon - m))
            snapshot = ClosureSet(m - 1, prev.levels)
            return ConstructionTrace("g3", horizon, tuple(outputs), PROCEDURE2, m, None,
                                     BellRecord(m, *bell), snapshot, scenario, order, tail)
        outputs.append(source.proof_at(m))
        prev = X
    return ConstructionTrace("g3", horizon, tuple(outputs), PROCEDURE1, None, None,
                             None, None, scenario, order, None)


def trace_from_outputs(outputs, kind: str = "g1", scenario: Scenario | None = None) -> ConstructionTrace:
    """A Procedure-1 trace with the given outputs, for scripted Rosser checks."""
    outs = tuple(outputs)
    if not outs:
        raise ScenarioError("a trace needs at least one position")
    return ConstructionTrace(kind, len(outs), outs, PROCEDURE1, scenario=scenario)


def run(kind: str, scenario: Scenario, horizon: int | None = None,
        order: str = "ascending") -> ConstructionTrace:
    h = scenario.horizon if horizon is None else horizon
    sc = scenario if horizon is None else scenario.with_horizon(h)
    src = sc.source()
    if kind == "g1":
        return run_g1(src, h, order, sc)
    if kind == "g2":
        return run_g2(src, h, order, sc)
    if kind == "g3":
        return run_g3(src, h, sc, order)
    raise ScenarioError(f"unknown construction {kind!r}")


# --------------------------------------------------------------------------
# Rosser evaluation


def eval_rosser(t: ConstructionTrace, f: Formula) -> RosserVerdict:
    """PR^R(f) over the trace: some output f with no ~f at or before it."""
    nf = Not(f)
    pf, pn = t.first_position(f), t.first_position(nf)
    if pf is not None and (pn is None or pf < pn):
        return RosserVerdict("provable", pf, "prefix")
    if pn is not None:
        return RosserVerdict("blocked", None, f"negation at {pn}")
    if t.tail is None:
        return RosserVerdict("unknown", None, "horizon")
    sf, sn = t.tail.first_slot(f), t.tail.first_slot(nf)
    if sf is None:
        return RosserVerdict("blocked", None, "never emitted")
    if sn is None or sf < sn:
        try:
            y = t.tail.position(sf)
        except (DomainCapError, CodeOverflowError):
            y = None
        return RosserVerdict("provable", y, "tail")
    return RosserVerdict("blocked", None, "negation earlier in tail")


def prf(t: ConstructionTrace, x: int, y: int) -> bool:
    """x = g(y) and x codes a formula."""
    if not 0 <= y < t.horizon:
        raise ValueError(f"position {y} is outside the horizon {t.horizon}")
    out = t.outputs[y]
    return out is not None and x >= 1 and encode_capped(out, x) == x
