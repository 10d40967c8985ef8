"""Finite-scale checkers for the derivability conditions and per-construction claims.

Each checker returns a :class:`CheckReport` of per-instance verdicts.  A verdict
is ``binding`` when the property is asserted for that construction after the
switch; otherwise it is recorded as an observation.  Verdicts whose finite
premise is unmet stay binding and say so in their note.  Only binding failures
make a report fail.  ``unknown`` is never upgraded.
"""

from __future__ import annotations

import json
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from rosserlab.constructions import (
    ConstructionTrace, RosserVerdict, closure, eval_rosser, is_critical, prf,
)
from rosserlab.corpus import delta0_sentences
from rosserlab.errors import DomainCapError
from rosserlab.godel import (
    encode, encode_capped, f_set, formula_codes, instances_within, negated_universal_codes,
)
from rosserlab.models import e_eval, least_model
from rosserlab.parser import print_formula
from rosserlab.proofs import ProofSource, p_set
from rosserlab.syntax import (
    Box, Eq, Formula, Not, Zero, contrapositive_parts, implies, is_delta0_sentence,
    eval_delta0, is_universal, numeral,
)

__all__ = [
    "PASS", "FAIL", "UNKNOWN", "Verdict", "CheckReport", "SUITES",
    "verify_claim1", "verify_modus_ponens", "verify_cb", "verify_b2", "verify_d3",
    "verify_delta0_completeness", "verify_consistency_statements", "verify_proof_predicate",
    "verify_sat_consistency_link", "verify_bell", "verify_closure_lemmas",
    "declared_b2_pairs", "sample_pairs", "run_suite", "reports_to_json",
]

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"
FALSUM = Not(Eq(Zero(), Zero()))


@dataclass(frozen=True)
class Verdict:
    instance: str
    status: str
    witness: str | None = None
    note: str = ""
    binding: bool = True

    def to_json(self) -> dict[str, Any]:
        return {"instance": self.instance, "status": self.status, "witness": self.witness,
                "note": self.note, "binding": self.binding}


@dataclass
class CheckReport:
    check_name: str
    scenario_id: str
    verdicts: list[Verdict] = field(default_factory=list)

    def add(self, instance: str, status: str, witness: str | None = None,
            note: str = "", binding: bool = True) -> None:
        self.verdicts.append(Verdict(instance, status, witness, note, binding))

    @property
    def summary(self) -> dict[str, dict[str, int]]:
        out = {"binding": {PASS: 0, FAIL: 0, UNKNOWN: 0},
               "observational": {PASS: 0, FAIL: 0, UNKNOWN: 0}}
        for v in self.verdicts:
            out["binding" if v.binding else "observational"][v.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(v.binding and v.status == FAIL for v in self.verdicts)

    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.binding and v.status == FAIL]

    def to_json(self) -> dict[str, Any]:
        return {"check_name": self.check_name, "scenario_id": self.scenario_id,
                "verdicts": [v.to_json() for v in self.verdicts], "summary": self.summary}


def reports_to_json(reports: Sequence[CheckReport]) -> str:
    body = {"reports": [r.to_json() for r in reports],
            "failed": any(r.failed for r in reports)}
    return json.dumps(body, indent=1, sort_keys=True) + "\n"


def _sid(t: ConstructionTrace) -> str:
    return t.scenario.id if t.scenario is not None else "anonymous"


def _pf(f: Formula) -> str:
    text = print_formula(f)
    return text if len(text) <= 200 else text[:197] + "..."


def _show(v: RosserVerdict) -> str:
    return v.status if v.y is None else f"{v.status}@{v.y}"


# --------------------------------------------------------------------------
# claim1: what the switch model predicts against the Rosser verdict


def verify_claim1(t: ConstructionTrace, code_bound: int) -> CheckReport:
    rep = CheckReport(f"claim1.{t.kind}", _sid(t))
    fs = f_set(code_bound)
    if not t.switched:
        for f in fs:
            rep.add(_pf(f), UNKNOWN, note="no switch within horizon")
        return rep
    if t.kind == "g1":
        n, V = t.model
        for f in fs:
            e = e_eval(f, V, n)
            r = eval_rosser(t, f)
            if r.status == UNKNOWN:
                rep.add(_pf(f), UNKNOWN, note=r.where)
                continue
            ok = (e == 1) == r.provable
            rep.add(_pf(f), PASS if ok else FAIL,
                    None if ok else f"e={e}, rosser={_show(r)}")
    elif t.kind == "g2":
        n, V = t.model
        for f in fs:
            r = eval_rosser(t, f)
            crit = is_critical(f, V, n)
            neg_in = encode_capped(Not(f), n) is not None
            neg_crit = neg_in and is_critical(Not(f), V, n)
            if crit:
                status = PASS if r.provable else (UNKNOWN if r.status == UNKNOWN else FAIL)
                rep.add(f"critical {_pf(f)}", status,
                        None if status != FAIL else f"rosser={_show(r)}")
            if neg_crit:
                status = FAIL if r.provable else (UNKNOWN if r.status == UNKNOWN else PASS)
                rep.add(f"critical negation of {_pf(f)}", status,
                        None if status != FAIL else f"rosser={_show(r)}")
            if not crit and not neg_crit:
                rep.add(_pf(f), PASS, note="vacuous")
    else:
        X = t.closure.fixpoint
        for f in fs:
            r = eval_rosser(t, f)
            if r.status == UNKNOWN:
                rep.add(_pf(f), UNKNOWN, note=r.where)
                continue
            in_x = Not(f) in X
            ok = in_x == (not r.provable)
            rep.add(_pf(f), PASS if ok else FAIL,
                    None if ok else f"~f in X={in_x}, rosser={_show(r)}")
    return rep


# --------------------------------------------------------------------------
# Implication-shaped checks


def _implication(rep: CheckReport, label: str, premises: list[RosserVerdict],
                 conclusion: Callable[[], RosserVerdict], binding: bool,
                 note: str = "") -> None:
    if any(p.status == "blocked" for p in premises):
        rep.add(label, PASS, note="vacuous" + (f"; {note}" if note else ""), binding=binding)
        return
    if any(p.status == UNKNOWN for p in premises):
        rep.add(label, UNKNOWN, note="premise undecided", binding=binding)
        return
    c = conclusion()
    if c.provable:
        rep.add(label, PASS, note=note, binding=binding)
    elif c.status == UNKNOWN:
        rep.add(label, UNKNOWN, note="conclusion undecided", binding=binding)
    else:
        w = "; ".join(_show(p) for p in premises) + f" => {_show(c)}"
        rep.add(label, FAIL, w, note, binding=binding)


def sample_pairs(code_bound: int, count: int = 100, seed: int = 0) -> list[tuple[Formula, Formula]]:
    fs = f_set(code_bound)
    rng = random.Random(seed)
    return [(rng.choice(fs), rng.choice(fs)) for _ in range(count)]


def verify_modus_ponens(t: ConstructionTrace, pairs: Iterable[tuple[Formula, Formula]]) -> CheckReport:
    rep = CheckReport(f"mp.{t.kind}", _sid(t))
    for phi, psi in pairs:
        label = f"{_pf(phi)} / {_pf(psi)}"
        if not t.switched:
            # the source may still settle it
            pre = [eval_rosser(t, implies(phi, psi)), eval_rosser(t, phi)]
            _implication(rep, label, pre, lambda: eval_rosser(t, psi), False, "pre-switch")
            continue
        binding = t.kind in ("g1", "g2")
        note = ""
        if t.kind == "g2":
            n = t.model[0]
            met = (encode_capped(Not(phi), n) is not None
                   and encode_capped(Not(implies(phi, psi)), n) is not None)
            if not met:
                note = "premise ~phi, ~(phi->psi) in F_n unmet"
        pre = [eval_rosser(t, implies(phi, psi)), eval_rosser(t, phi)]
        _implication(rep, label, pre, lambda: eval_rosser(t, psi), binding, note)
    return rep


def verify_cb(t: ConstructionTrace, f: Formula, instance_code_bound: int,
              report: CheckReport | None = None) -> CheckReport:
    if not is_universal(f):
        raise ValueError(f"not a universal formula: {print_formula(f)}")
    rep = report or CheckReport(f"cb.{t.kind}", _sid(t))
    binding, note = t.switched, ""
    if not t.switched:
        note = "no switch within horizon"
    elif t.kind == "g1":
        binding, note = False, "not asserted for g1"
    elif t.kind == "g2":
        if encode_capped(Not(f), t.model[0]) is None:
            note = "premise ~f in F_n unmet"
    else:
        if encode_capped(Not(f), t.switch_point - 1) is None:
            note = "premise ~f in F_{m-1} unmet"
    top = eval_rosser(t, f)
    for g in instances_within(f, instance_code_bound):
        _implication(rep, f"{_pf(f)} => {_pf(g)}", [top], lambda g=g: eval_rosser(t, g),
                     binding, note)
    return rep


def declared_b2_pairs(source: ProofSource) -> list[tuple[Formula, Formula, int]]:
    """(phi, psi, y) for every scripted ~psi -> ~phi at position y."""
    out = []
    for y, g in source.events:
        parts = contrapositive_parts(g)
        if parts is not None and isinstance(parts[0], Not) and isinstance(parts[1], Not):
            out.append((parts[1].body, parts[0].body, y))
    return out


def verify_b2(t: ConstructionTrace, entailments: Iterable[tuple[Formula, Formula]]) -> CheckReport:
    rep = CheckReport(f"b2.{t.kind}", _sid(t))
    src = t.source()
    declared = {(p, q): y for p, q, y in declared_b2_pairs(src)} if src else {}
    for phi, psi in entailments:
        if (phi, psi) not in declared:
            raise ValueError(f"undeclared entailment {print_formula(phi)} -> {print_formula(psi)}")
        y = declared[(phi, psi)]
        binding, note = t.kind == "g3" and t.switched, ""
        if t.kind != "g3":
            note = "not asserted for this construction"
        elif not t.switched:
            note = "no bell within horizon"
        elif y > t.switch_point - 1:
            note = f"premise proved at {y} > m-1"
        _implication(rep, f"{_pf(phi)} -> {_pf(psi)}", [eval_rosser(t, phi)],
                     lambda: eval_rosser(t, psi), binding, note)
    return rep


def verify_d3(t: ConstructionTrace, code_bound: int) -> CheckReport:
    rep = CheckReport(f"d3.{t.kind}", _sid(t))
    binding = t.kind == "g3" and t.switched
    note = "" if binding else ("not asserted for this construction" if t.kind != "g3"
                               else "no bell within horizon")
    for f in f_set(code_bound):
        box = Box(numeral(encode(f)))
        _implication(rep, _pf(f), [eval_rosser(t, f)], lambda b=box: eval_rosser(t, b),
                     binding, note)
    return rep


def verify_delta0_completeness(t: ConstructionTrace, sentences: Iterable[Formula]) -> CheckReport:
    rep = CheckReport(f"delta0.{t.kind}", _sid(t))
    for s in sentences:
        if not is_delta0_sentence(s):
            raise ValueError(f"not a Delta_0 sentence: {print_formula(s)}")
        r = eval_rosser(t, s)
        if not eval_delta0(s):
            rep.add(_pf(s), PASS, note=f"false sentence; rosser={_show(r)}", binding=False)
            continue
        status = PASS if r.provable else (UNKNOWN if r.status == UNKNOWN else FAIL)
        rep.add(_pf(s), status, None if status != FAIL else f"rosser={_show(r)}")
    return rep


def verify_consistency_statements(t: ConstructionTrace, code_bound: int,
                                  sample: int = 20) -> CheckReport:
    rep = CheckReport(f"con.{t.kind}", _sid(t))
    fs = f_set(code_bound)
    # Con^H: asserted for g1 only
    for f in fs:
        a, b = eval_rosser(t, f), eval_rosser(t, Not(f))
        if a.provable and b.provable:
            status, w = FAIL, f"{_show(a)} and negation {_show(b)}"
        elif "blocked" in (a.status, b.status):
            status, w = PASS, None
        else:
            status, w = UNKNOWN, None
        rep.add(f"ConH {_pf(f)}", status, w, binding=t.kind == "g1")
    # Con^L: asserted everywhere
    r = eval_rosser(t, FALSUM)
    rep.add("ConL ~(0=0)", FAIL if r.provable else PASS,
            f"rosser={_show(r)}" if r.provable else None, note=_show(r))
    # Con^S sample: recorded only
    for f in fs[:sample]:
        a, b = eval_rosser(t, f), eval_rosser(t, Not(f))
        con = not (a.provable and b.provable)
        rep.add(f"ConS {_pf(f)}", PASS if con else FAIL, None if con else f"{_show(a)}, {_show(b)}",
                note=f"{a.status}/{b.status}", binding=False)
    return rep


def verify_proof_predicate(t: ConstructionTrace, s: ProofSource | None = None) -> CheckReport:
    rep = CheckReport(f"prfaxioms.{t.kind}", _sid(t))
    s = s if s is not None else t.source()
    end = t.switch_point if t.switched else t.horizon
    single, mismatch, zero_bad = True, None, None
    for y in range(t.horizon):
        out = t.outputs[y]
        if out is None:
            if any(prf(t, x, y) for x in (0, 1, 19, 50)):
                zero_bad = y
            continue
        c = encode_capped(out, 10**7)
        if c is not None and (not prf(t, c, y) or prf(t, c + 1, y)):
            single = False
    if s is not None:
        for y in range(end):
            if s.proof_at(y) is not None and t.outputs[y] != s.proof_at(y):
                mismatch = y
                break
    rep.add("single conclusion", PASS if single else FAIL)
    if s is None:
        rep.add("procedure-1 agreement", UNKNOWN, note="no source")
    else:
        rep.add("procedure-1 agreement", PASS if mismatch is None else FAIL,
                None if mismatch is None else f"position {mismatch}")
    rep.add("zero positions prove nothing", PASS if zero_bad is None else FAIL,
            None if zero_bad is None else f"position {zero_bad}")
    return rep


def _first_complementary(s: ProofSource, m_max: int) -> int | None:
    seen: set[Formula] = set()
    for y, f in s.upto(m_max):
        seen.add(f)
        if Not(f) in seen or (isinstance(f, Not) and f.body in seen):
            return y
    return None


def verify_sat_consistency_link(s: ProofSource, m_max: int, declared_sound: bool = False,
                                scenario_id: str = "anonymous", order: str = "ascending") -> CheckReport:
    rep = CheckReport("satlink", scenario_id)
    stages = sorted({0, *[y for y in s.change_points() if y <= m_max]})
    bad = _first_complementary(s, m_max)
    for m in stages:
        try:
            ok = least_model(p_set(s, m), ("A", "B"), order) is not None
        except DomainCapError as exc:
            rep.add(f"Sat({m})", UNKNOWN, note=f"domain cap: {exc}")
            continue
        if bad is not None and m >= bad:
            rep.add(f"Sat({m}) after complementary pair at {bad}", FAIL if ok else PASS,
                    "model found" if ok else None)
        elif declared_sound:
            rep.add(f"Sat({m}) on sound source", PASS if ok else FAIL,
                    None if ok else "no model")
        else:
            rep.add(f"Sat({m})", PASS, note=str(ok).lower(), binding=False)
    return rep


# --------------------------------------------------------------------------
# Bell and closure lemmas


def verify_bell(t: ConstructionTrace) -> CheckReport:
    """The bell rings within the horizon exactly on declared-inconsistent scenarios."""
    rep = CheckReport("bell", _sid(t))
    if t.kind != "g3":
        rep.add("bell", UNKNOWN, note="g3 only", binding=False)
        return rep
    sc = t.scenario
    inconsistent = sc.declared_inconsistent if sc is not None else None
    rang = t.bell is not None
    if inconsistent is None:
        rep.add("bell", UNKNOWN, note="no scenario declaration")
        return rep
    ok = rang == inconsistent
    w = None if ok else f"rang={rang}, declared inconsistent={inconsistent}"
    rep.add("bell iff inconsistent", PASS if ok else FAIL, w,
            note="" if not rang else f"stage {t.bell.stage}, condition {t.bell.condition}")
    if rang and sc is not None and sc.inject is not None:
        at = sc.inject[0] + 1
        rep.add("bell not before injection", PASS if t.bell.stage >= at else FAIL,
                None if t.bell.stage >= at else f"stage {t.bell.stage} < {at}")
    if rang:
        rep.add("bell stage (observed)", PASS, note=str(t.bell.stage), binding=False)
    return rep


def _closure_stages(s: ProofSource, m_max: int) -> list[int]:
    marks = {0, m_max}
    marks.update(y for y in s.change_points() if y <= m_max)
    marks.update(int(c) for c in negated_universal_codes(m_max))
    return sorted(marks)


def verify_closure_lemmas(s: ProofSource, m_max: int, extended: int | None = None,
                          enumerated: bool = False, scenario_id: str = "anonymous") -> CheckReport:
    """Soundness, monotonicity, level bound and X_m within F_m."""
    rep = CheckReport("closure", scenario_id)
    ext = extended if extended is not None else 2 * m_max + 1
    later = p_set(s, ext)
    prev = None
    for m in _closure_stages(s, m_max):
        X = closure(p_set(s, m), m)
        fx = X.fixpoint
        if prev is not None:
            missing = prev[1] - fx
            rep.add(f"X_{prev[0]} within X_{m}", PASS if not missing else FAIL,
                    None if not missing else _pf(min(missing, key=print_formula)))
        size = len(formula_codes(m))
        rep.add(f"levels of X_{m} within |F_{m}|={size}", PASS if X.iterations <= size else FAIL,
                None if X.iterations <= size else f"{X.iterations} iterations")
        outside = [f for f in fx if encode_capped(f, m) is None]
        rep.add(f"X_{m} within F_{m}", PASS if not outside else FAIL,
                None if not outside else f"{len(outside)} members, e.g. {_pf(min(outside, key=print_formula))}")
        unproved = [f for f in fx if f not in later]
        if not unproved:
            rep.add(f"X_{m} members proved by {ext}", PASS, binding=enumerated)
        else:
            rep.add(f"X_{m} members proved by {ext}", UNKNOWN,
                    note=f"{len(unproved)} not yet proved", binding=enumerated)
        prev = (m, fx)
    return rep


# --------------------------------------------------------------------------
# Suites


SUITES = ("claim1", "mp", "cb", "b2", "d3", "delta0", "con", "prfaxioms", "satlink")


def _delta0_batch(code_bound: int) -> list[Formula]:
    batch = delta0_sentences(30, seed=7, truth=True) + delta0_sentences(10, seed=8, truth=False)
    batch += [f for f in f_set(code_bound) if is_delta0_sentence(f)]
    return batch


def run_suite(name: str, t: ConstructionTrace, code_bound: int) -> list[CheckReport]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, t, code_bound)]
    if name == "claim1":
        return [verify_claim1(t, code_bound)]
    if name == "mp":
        return [verify_modus_ponens(t, sample_pairs(code_bound, 100, seed=1))]
    if name == "cb":
        rep = CheckReport(f"cb.{t.kind}", _sid(t))
        for f in f_set(code_bound):
            if is_universal(f):
                verify_cb(t, f, code_bound, rep)
        return [rep]
    if name == "b2":
        src = t.source()
        pairs = [(p, q) for p, q, _ in declared_b2_pairs(src)] if src else []
        return [verify_b2(t, pairs)]
    if name == "d3":
        return [verify_d3(t, code_bound)]
    if name == "delta0":
        return [verify_delta0_completeness(t, _delta0_batch(code_bound))]
    if name == "con":
        return [verify_consistency_statements(t, code_bound)]
    if name == "prfaxioms":
        return [verify_proof_predicate(t)]
    if name == "satlink":
        src = t.source()
        if src is None:
            rep = CheckReport("satlink", _sid(t))
            rep.add("Sat", UNKNOWN, note="trace carries no scenario")
            return [rep]
        sc = t.scenario
        return [verify_sat_consistency_link(src, t.horizon - 1, sc.declared_sound, sc.id,
                                            t.model_order)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
