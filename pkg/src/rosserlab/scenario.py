"""Scenario files: scripted events, an optional injected contradiction,
optional enumerator axioms, and a horizon.

Enumerator positions start right after the last scripted or injected position.
An optional ``meta`` object (id, category, soundness flag, check parameters)
is carried along untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from rosserlab.errors import ScenarioError
from rosserlab.parser import ParseError, parse_formula, print_formula
from rosserlab.proofs import (
    ProofSource, axiom_enumerator_source, inject_contradiction, merge_sources, scripted_source,
)
from rosserlab.syntax import Formula

__all__ = ["Scenario", "load_scenario", "scenario_from_dict"]


@dataclass(frozen=True)
class Scenario:
    events: tuple[tuple[int, Formula], ...]
    horizon: int
    inject: tuple[int, Formula] | None = None
    enumerator_axioms: tuple[Formula, ...] | None = None
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def id(self) -> str:
        return str(self.meta.get("id", "anonymous"))

    @property
    def category(self) -> str:
        return str(self.meta.get("category", "unspecified"))

    @property
    def declared_sound(self) -> bool:
        return bool(self.meta.get("sound", False))

    @property
    def declared_inconsistent(self) -> bool:
        return bool(self.meta.get("inconsistent", False))

    def source(self) -> ProofSource:
        try:
            src = scripted_source(self.events, f"scenario:{self.id}")
            last = src.last_position
            if self.inject is not None:
                at, f = self.inject
                src = inject_contradiction(src, at, f)
                last = max(last, at + 1)
            if self.enumerator_axioms is not None:
                enum = axiom_enumerator_source(list(self.enumerator_axioms), start=last + 1)
                src = merge_sources(src, enum)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
        return src

    def with_horizon(self, horizon: int) -> "Scenario":
        return Scenario(self.events, horizon, self.inject, self.enumerator_axioms, dict(self.meta))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "events": [{"y": y, "formula": print_formula(f)} for y, f in self.events],
        }
        if self.inject is not None:
            out["inject"] = {"at": self.inject[0], "formula": print_formula(self.inject[1])}
        if self.enumerator_axioms is not None:
            out["enumerator_axioms"] = [print_formula(f) for f in self.enumerator_axioms]
        out["horizon"] = self.horizon
        if self.meta:
            out["meta"] = self.meta
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _nat(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ScenarioError(f"{what} must be a natural number, got {value!r}")
    return value


def _fml(text: Any, what: str) -> Formula:
    if not isinstance(text, str):
        raise ScenarioError(f"{what} must be a string")
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(data) - {"events", "inject", "enumerator_axioms", "horizon", "meta"}
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    if "horizon" not in data:
        raise ScenarioError("scenario needs a horizon")
    horizon = _nat(data["horizon"], "horizon")
    if horizon < 1:
        raise ScenarioError("horizon must be >= 1")
    events = []
    for i, ev in enumerate(data.get("events", [])):
        if not isinstance(ev, dict) or set(ev) != {"y", "formula"}:
            raise ScenarioError(f"event {i} must have exactly the keys y and formula")
        events.append((_nat(ev["y"], f"event {i} y"), _fml(ev["formula"], f"event {i}")))
    events.sort(key=lambda e: e[0])
    inject = None
    if data.get("inject") is not None:
        inj = data["inject"]
        if not isinstance(inj, dict) or set(inj) != {"at", "formula"}:
            raise ScenarioError("inject must have exactly the keys at and formula")
        inject = (_nat(inj["at"], "inject.at"), _fml(inj["formula"], "inject"))
    axioms = None
    if data.get("enumerator_axioms") is not None:
        axioms = tuple(_fml(a, "enumerator axiom") for a in data["enumerator_axioms"])
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise ScenarioError("meta must be an object")
    sc = Scenario(tuple(events), horizon, inject, axioms, meta)
    sc.source()  # surface duplicate positions early
    return sc


def load_scenario(path: str | Path) -> Scenario:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)
