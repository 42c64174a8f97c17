"""Scenario files: schema validation and construction of the module objects."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from ..action import LeftAction, RightAction
from ..errors import ScenarioError
from ..fingroup import Element, FinAbGroup, Hom, Subgroup
from ..monoid import AmenableMonoid, MonoidKind
from ..shiftspace import (
    DEFAULT_SUMSET_CAP,
    Configuration,
    EndoKind,
    FiberwiseSubgroup,
    IndexKind,
    ShiftSpace,
    TranslationEndo,
)

SCENARIO_SCHEMA_VERSION = "1"


def load_schema(name: str) -> dict:
    text = resources.files("entromono.harness").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def _line_of(text: str, path: list) -> int | None:
    """Best-effort line number of the last key on ``path`` in the raw text."""
    for key in reversed(path):
        if isinstance(key, str):
            needle = json.dumps(key) + ":"
            for i, line in enumerate(text.splitlines(), 1):
                if needle in line.replace('": ', '":'):
                    return i
    return None


def validate(raw: dict, text: str = "") -> None:
    validator = jsonschema.Draft202012Validator(load_schema("scenario"))
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for e in errors:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            ln = _line_of(text, list(e.absolute_path)) if text else None
            lines.append(f"{where}{f' (line {ln})' if ln else ''}: {e.message}")
        raise ScenarioError("scenario failed schema validation:\n  " + "\n  ".join(lines))


@dataclass
class Scenario:
    raw: dict
    source: str = "<memory>"
    horizon_override: int | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path, horizon: int | None = None) -> "Scenario":
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as e:
            raise ScenarioError(f"cannot read scenario {p}: {e}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"{p}: line {e.lineno} column {e.colno}: {e.msg}") from None
        validate(raw, text)
        s = cls(raw, str(p), horizon)
        s.check()
        return s

    @classmethod
    def from_dict(cls, raw: dict, horizon: int | None = None) -> "Scenario":
        validate(raw)
        s = cls(raw, "<memory>", horizon)
        s.check()
        return s

    def check(self) -> None:
        """Build every declared object once so semantic errors surface before any run."""
        try:
            if "monoid" in self.raw:
                self.monoid
            if "carrier" in self.raw:
                self.carrier
            if "action" in self.raw:
                self.action
            if "family" in self.raw:
                self.sets()
                self.subgroups()
                self.neighbourhoods()
            if "invariant_subgroup" in self.raw:
                self.invariant_subgroup()
        except ScenarioError:
            raise
        except (ValueError, TypeError, KeyError) as e:
            raise ScenarioError(f"scenario {self.name!r} is inconsistent: {e}") from None

    # -- plain fields ----------------------------------------------------------

    @property
    def name(self) -> str:
        return self.raw["name"]

    @property
    def digest(self) -> str:
        return digest(self.raw)

    @property
    def horizon(self) -> int:
        if self.horizon_override is not None:
            return self.horizon_override
        return int(self.raw.get("horizon", 8))

    @property
    def tolerance(self) -> Fraction:
        return Fraction(self.raw.get("tolerance", "1/20"))

    @property
    def seed(self) -> int:
        return int(self.raw.get("seed", 0))

    @property
    def sumset_cap(self) -> int:
        return int(self.raw.get("caps", {}).get("sumset", DEFAULT_SUMSET_CAP))

    @property
    def max_box(self) -> int:
        return int(self.raw.get("caps", {}).get("max_box", 6))

    def action_key(self) -> dict:
        """The part of the scenario that determines the action (used in cache keys)."""
        return {k: self.raw.get(k) for k in ("monoid", "carrier", "action")}

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if k not in self.raw]
        if missing:
            raise ScenarioError(f"scenario {self.name!r} lacks required section(s): {', '.join(missing)}")

    # -- objects ---------------------------------------------------------------

    @cached_property
    def monoid(self) -> AmenableMonoid:
        self.require("monoid")
        m = self.raw["monoid"]
        kind = MonoidKind(m["kind"])
        if kind is MonoidKind.NUMERICAL:
            if "generators" not in m:
                raise ScenarioError("numerical monoids need generators")
            return AmenableMonoid.numerical(m["generators"])
        return AmenableMonoid(kind, int(m.get("dim", 1)))

    @cached_property
    def carrier(self):
        self.require("carrier")
        c = self.raw["carrier"]
        if c["type"] == "finite":
            return FinAbGroup.from_orders(c["orders"])
        base = FinAbGroup.from_orders(c["base"])
        return ShiftSpace(base, int(c.get("dim", 1)), IndexKind(c.get("index", "NONNEG")))

    @property
    def is_finite(self) -> bool:
        return isinstance(self.carrier, FinAbGroup)

    @cached_property
    def action(self) -> LeftAction:
        self.require("action")
        a = self.raw["action"]
        X = self.carrier
        gm = {}
        for g in a["generators"]:
            key = g["element"]
            key = tuple(key) if isinstance(key, list) else key
            if "shift" in g:
                if self.is_finite:
                    raise ScenarioError("shift generators need a shift carrier")
                gm[key] = TranslationEndo(X, tuple(g["shift"]["vector"]), EndoKind(g["shift"]["kind"]))
            elif "matrix" in g:
                if not self.is_finite:
                    raise ScenarioError("matrix generators need a finite carrier")
                gm[key] = Hom(X, X, g["matrix"])
            else:
                if not self.is_finite:
                    raise ScenarioError("scalar generators need a finite carrier")
                gm[key] = Hom.scalar(X, int(g["scalar"]))
        cls = RightAction if a.get("side", "left") == "right" else LeftAction
        return cls(self.monoid, X, gm)

    def point(self, p) -> Element | Configuration:
        X = self.carrier
        if self.is_finite:
            if isinstance(p, list) and p and isinstance(p[0], dict):
                raise ScenarioError("configurations given for a finite carrier")
            return X.element(p)
        if isinstance(p, int) or (p and not isinstance(p[0], dict)):
            raise ScenarioError("shift carriers take configurations (lists of site/value pairs)")
        out = X.zero()
        for sv in p:
            out = out + X.delta(sv["site"], sv["value"] if isinstance(sv["value"], int) else tuple(sv["value"]))
        return out

    def _family(self, key: str) -> list | None:
        fam = self.raw.get("family", {})
        if key not in fam:
            return None
        return [[self.point(p) for p in member] for member in fam[key]]

    def sets(self) -> list:
        """Trajectory seeds, each completed with 0; defaults to the base group at the origin."""
        fam = self._family("sets")
        if fam is None:
            fam = [self.default_seed_set()] if "carrier" in self.raw else []
        X = self.carrier if "carrier" in self.raw else None
        zero = X.zero() if X is not None else None
        return [list(dict.fromkeys([zero] + m)) for m in fam]

    def subgroups(self) -> list:
        fam = self._family("subgroups")
        if fam is None:
            if "carrier" not in self.raw:
                return []
            return [self.default_subgroup()] if not self.is_finite else self.cyclic_subgroups()
        return fam

    def neighbourhoods(self) -> list:
        fam = self._family("neighbourhoods")
        if fam is None:
            return []
        X = self.carrier
        return [list(dict.fromkeys([X.zero()] + m)) for m in fam]

    def default_seed_set(self) -> list:
        X = self.carrier
        if self.is_finite:
            return list(X.elements())
        origin = (0,) * X.dim
        return [X.delta(origin, b.coords) for b in X.base.elements()]

    def default_subgroup(self) -> list:
        X = self.carrier
        origin = (0,) * X.dim
        return [X.delta(origin, e.coords) for e in X.base.basis()]

    def cyclic_subgroups(self) -> list:
        X = self.carrier
        seen = {}
        for x in X.elements():
            H = Subgroup(X, [x])
            seen.setdefault(H, [x])
        return list(seen.values())

    def invariant_subgroup(self):
        self.require("invariant_subgroup")
        spec = self.raw["invariant_subgroup"]
        X = self.carrier
        if self.is_finite:
            return Subgroup(X, [self.point(p) for p in spec.get("generators", [])])
        fiber = Subgroup(X.base, [X.base.element(tuple(c)) for c in spec.get("fiber", [])])
        return FiberwiseSubgroup(X, fiber)
