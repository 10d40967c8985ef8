"""Curated scenario fixtures and a seeded Delta_0 sentence generator.

Every fixture carries ``meta`` with its id, category, soundness and
inconsistency flags, and the code bound used by the checks.  Categories:
``sound``, ``contradiction``, ``bell2``, ``bell3``, ``b2``, ``rp`` and
``enumerator``.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from rosserlab.parser import parse_formula
from rosserlab.scenario import Scenario
from rosserlab.syntax import (
    And, Box, Eq, Formula, Leq, Not, Prod, Succ, Sum, Term, Var, bounded_all, eval_delta0,
    implies, numeral,
)

__all__ = ["DEFAULT_CODE_BOUND", "fixtures", "fixture", "fixture_ids", "write_corpus",
           "delta0_sentences", "random_rp_events"]

# |F_14600| = 132 formulas.
DEFAULT_CODE_BOUND = 14600


def _p(s: str) -> Formula:
    return parse_formula(s)


def _sc(id_: str, category: str, events, horizon: int, *, inject=None, axioms=None,
        sound: bool, inconsistent: bool, code_bound: int = DEFAULT_CODE_BOUND) -> Scenario:
    evs = tuple((y, _p(f) if isinstance(f, str) else f) for y, f in events)
    inj = None if inject is None else (inject[0], _p(inject[1]))
    axs = None if axioms is None else tuple(_p(a) for a in axioms)
    meta = {"id": id_, "category": category, "sound": sound,
            "inconsistent": inconsistent, "code_bound": code_bound}
    return Scenario(evs, horizon, inj, axs, meta)


def _not_box(c: int) -> Formula:
    return Not(Box(numeral(c)))


def _b2_events() -> list[tuple[int, Formula]]:
    evs: list[tuple[int, Formula]] = []
    for i in range(20):
        contra = implies(Not(Box(numeral(i + 1))), Not(Box(numeral(i))))
        evs.append((10 + i, contra))
    evs.append((40, _not_box(5)))
    return evs


def fixtures() -> list[Scenario]:
    return [
        # sound
        _sc("S1", "sound",
            [(50, "(0=0)"), (51, "(0<=0)"), (1481, "(0<=S(0))"), (4627, "(S(0)<=S(0))")],
            4800, sound=True, inconsistent=False),
        _sc("S2", "sound", [], 120, axioms=["(0=0)", "(0<=S(0))"],
            sound=True, inconsistent=False),
        _sc("S3", "sound", [(19, "R(0)"), (41, "R(x0)"), (8370, "(R(0)&R(0))")],
            8500, sound=True, inconsistent=False),
        _sc("S4", "sound", [], 300, sound=True, inconsistent=False),
        # contradictions
        _sc("C1", "contradiction", [], 2300, inject=(2098, "R(0)"),
            sound=False, inconsistent=True),
        _sc("C2", "contradiction", [], 14300, inject=(14033, "(0=0)"),
            sound=False, inconsistent=True),
        _sc("C3", "contradiction", [], 9700, inject=(9479, "R(x0)"),
            sound=False, inconsistent=True),
        _sc("C4", "contradiction", [(100, "(R(0)&all x0 R(0))")], 2300,
            inject=(2098, "R(0)"), sound=False, inconsistent=True),
        _sc("C5", "contradiction", [(50, "(0=0)"), (4627, "(S(0)<=S(0))")], 14800,
            inject=(14594, "(0<=0)"), sound=False, inconsistent=True),
        # bell condition 2: a refuted Rosser box of a scripted theorem
        _sc("BELL2a", "bell2", [(50, "(0=0)"), (60, _not_box(50))], 200,
            sound=False, inconsistent=True),
        _sc("BELL2b", "bell2", [(51, "(0<=0)"), (70, _not_box(51))], 200,
            sound=False, inconsistent=True),
        # bell condition 3: a refuted true Delta_0 sentence
        _sc("BELL3a", "bell3", [(4627, "(S(0)<=S(0))"), (14034, "~(0=0)")], 14300,
            sound=False, inconsistent=True),
        _sc("BELL3b", "bell3", [(19, "R(0)"), (14595, "~(0<=0)")], 14800,
            sound=False, inconsistent=True),
        # declared entailments for B2, then an injected contradiction
        _sc("B2", "b2", _b2_events(), 300, inject=(60, "(0=0)"),
            sound=False, inconsistent=True),
        # T proves ~(0=0) -> the negated falsum is scripted before the contradiction
        _sc("RP1", "rp", [(0, "~~(0=0)")], 2300, inject=(2098, "R(0)"),
            sound=False, inconsistent=True),
        # enumerator closure for X-soundness
        _sc("E1", "enumerator", [], 400, axioms=["~R(0)", "(~R(0) -> ~R(S(0)))"],
            sound=True, inconsistent=False),
    ]


def fixture_ids() -> list[str]:
    return [sc.id for sc in fixtures()]


def fixture(id_: str) -> Scenario:
    for sc in fixtures():
        if sc.id == id_:
            return sc
    raise KeyError(id_)


def write_corpus(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for sc in fixtures():
        p = out / f"{sc.id}.json"
        p.write_text(sc.dumps())
        paths.append(p)
    index = [{"id": sc.id, "category": sc.category, "file": f"{sc.id}.json"} for sc in fixtures()]
    (out / "index.json").write_text(json.dumps(index, indent=2) + "\n")
    return paths


# --------------------------------------------------------------------------
# Delta_0 sentences


def _closed_term(rng: random.Random, depth: int, bound_vars: list[int]) -> Term:
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if bound_vars and rng.random() < 0.5:
            return Var(rng.choice(bound_vars))
        return numeral(rng.randint(0, 3))
    if roll < 0.6:
        return Succ(_closed_term(rng, depth - 1, bound_vars))
    if roll < 0.8:
        return Sum(_closed_term(rng, depth - 1, bound_vars), _closed_term(rng, depth - 1, bound_vars))
    return Prod(_closed_term(rng, depth - 1, bound_vars), _closed_term(rng, depth - 1, bound_vars))


def _delta0(rng: random.Random, depth: int, bound_vars: list[int]) -> Formula:
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        a = _closed_term(rng, 2, bound_vars)
        b = _closed_term(rng, 2, bound_vars)
        return Eq(a, b) if rng.random() < 0.5 else Leq(a, b)
    if roll < 0.5:
        return Not(_delta0(rng, depth - 1, bound_vars))
    if roll < 0.75:
        return And(_delta0(rng, depth - 1, bound_vars), _delta0(rng, depth - 1, bound_vars))
    v = len(bound_vars)
    bound = _closed_term(rng, 1, bound_vars)
    return bounded_all(v, bound, _delta0(rng, depth - 1, bound_vars + [v]))


def delta0_sentences(count: int, seed: int = 0, max_depth: int = 3,
                     truth: bool | None = None) -> list[Formula]:
    """``count`` distinct Delta_0 sentences of mixed size, optionally of one truth value."""
    rng = random.Random(seed)
    out: list[Formula] = []
    seen: set[Formula] = set()
    while len(out) < count:
        f = _delta0(rng, rng.randint(0, max_depth), [])
        if f in seen:
            continue
        if truth is not None and eval_delta0(f) != truth:
            continue
        seen.add(f)
        out.append(f)
    return out


def random_rp_events(rng: random.Random, pool: list[Formula], length: int = 12):
    """A scripted trace where ~phi comes before any phi; returns (events, phi)."""
    phi = rng.choice(pool)
    positions = rng.sample(range(length * 3), length)
    positions.sort()
    cut = rng.randrange(0, length - 1)
    events = []
    for i, y in enumerate(positions):
        if i == cut:
            events.append((y, Not(phi)))
        elif i > cut and rng.random() < 0.4:
            events.append((y, phi))
        else:
            f = rng.choice(pool)
            while f == phi or f == Not(phi):
                f = rng.choice(pool)
            events.append((y, f))
    return events, phi
