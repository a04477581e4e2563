"""Manifest format: named groups, cocycles, manifolds, theories and bordisms, plus jobs.

Validation happens in two passes. The JSON schema catches shape errors and
``Resolver`` catches references that point nowhere.
"""

from __future__ import annotations

import hashlib
import json
import re
from typing import Any

import jsonschema
import numpy as np

from . import tqft
from .action import Theory
from .cocycles import GroupCocycle, cup_power_cocycle, enumerate_classes_small
from .fields import Presentation, parse_word
from .groups import FiniteGroup, build_group
from .topology import models
from .topology.builtins import BUILTINS, builtin_complex
from .topology.complex import from_json as complex_from_json

SCHEMA_VERSION = "1"
JOB_TYPES = ("closed", "state_space", "dim_via_torus", "product_formula", "bordism", "table7",
             "coboundary_invariance")


class ManifestError(ValueError):
    pass


class UnresolvedReference(ManifestError):
    """A name used by a job or definition is not defined anywhere."""


_ref = {"type": "string", "minLength": 1}
_word_list = {"type": "array", "items": {"type": "string"}}
_presentation = {
    "type": "object",
    "required": ["generators"],
    "properties": {
        "generators": {"oneOf": [{"type": "integer", "minimum": 0},
                                 {"type": "array", "items": {"type": "string"}}]},
        "relators": _word_list,
        "components": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
    "additionalProperties": False,
}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "jobs"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "groups": {"type": "object", "additionalProperties": {"type": ["string", "object"]}},
        "cocycles": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["group"],
                "properties": {
                    "group": _ref,
                    "degree": {"type": "integer", "minimum": 1, "maximum": 3},
                    "modulus": {"type": "integer", "minimum": 1},
                    "values": {"type": "array"},
                    "cup_power": {"type": "integer", "minimum": 1, "maximum": 8},
                    "class_index": {"type": "integer", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "manifolds": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "minProperties": 1,
                "maxProperties": 1,
                "properties": {
                    "builtin": {"type": "string"},
                    "complex": {"type": "object"},
                    "model": {"type": "object"},
                    "presentation": _presentation,
                },
                "additionalProperties": False,
            },
        },
        "theories": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["untwisted", "w1_power", "cocycle"]},
                    "group": _ref,
                    "power": {"type": "integer", "minimum": 1},
                    "cocycle": _ref,
                    "modulus": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
        "bordisms": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "standard": {"enum": sorted(tqft.STANDARD_BORDISMS)},
                    "compose": {"type": "array", "items": _ref, "minItems": 2},
                    "disjoint_union": {"type": "array", "items": _ref, "minItems": 1},
                    "source": _presentation,
                    "target": _presentation,
                    "total": _presentation,
                    "source_map": _word_list,
                    "target_map": _word_list,
                    "source_components": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "target_components": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
                "additionalProperties": False,
            },
        },
        "jobs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "type"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "type": {"enum": list(JOB_TYPES)},
                    "theory": _ref,
                    "manifold": _ref,
                    "bordism": _ref,
                    "route": {"enum": list(tqft.ROUTES)},
                    "power": {"type": "integer", "minimum": 1},
                    "trials": {"type": "integer", "minimum": 1, "maximum": 10000},
                    "budget": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_NEEDS = {
    "closed": ("theory", "manifold"),
    "state_space": ("theory", "manifold"),
    "dim_via_torus": ("theory", "manifold"),
    "product_formula": ("manifold",),
    "bordism": ("theory", "bordism"),
    "table7": (),
    "coboundary_invariance": ("theory", "manifold"),
}


def schema_errors(data: Any) -> list[str]:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    out = []
    for err in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        out.append(f"{where}: {err.message}")
    if not out:
        ids = [j["id"] for j in data["jobs"]]
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            out.append(f"jobs: duplicate ids {dup}")
        for j in data["jobs"]:
            missing = [k for k in _NEEDS[j["type"]] if k not in j]
            if missing:
                out.append(f"jobs/{j['id']}: {j['type']} job needs {missing}")
    return out


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _parse_presentation(spec: dict) -> Presentation:
    gens = spec["generators"]
    names = None if isinstance(gens, int) else [str(g) for g in gens]
    n = gens if isinstance(gens, int) else len(gens)
    comps = spec.get("components")
    return Presentation.parse(n, spec.get("relators", []), comps, names)


class Resolver:
    """Turns references in a validated manifest into library objects, with caching."""

    def __init__(self, data: dict):
        self.data = data
        self._cache: dict[tuple[str, str], Any] = {}

    def _section(self, name: str) -> dict:
        return self.data.get(name, {})

    def _cached(self, kind: str, ref: str, build):
        key = (kind, ref)
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # definitions

    def group(self, ref: str) -> FiniteGroup:
        groups = self._section("groups")
        if ref in groups:
            return self._cached("group", ref, lambda: build_group(groups[ref]))
        try:
            return self._cached("group", ref, lambda: build_group(ref))
        except ValueError:
            raise UnresolvedReference(f"unknown group {ref!r}") from None

    def cocycle(self, ref: str) -> GroupCocycle:
        spec = self._section("cocycles").get(ref)
        if spec is None:
            raise UnresolvedReference(f"unknown cocycle {ref!r}")

        def build():
            G = self.group(spec["group"])
            if "cup_power" in spec:
                return cup_power_cocycle(G, spec["cup_power"])
            if "degree" not in spec or "modulus" not in spec:
                raise ManifestError(f"cocycle {ref!r} needs degree and modulus")
            deg, N = spec["degree"], spec["modulus"]
            if "values" in spec:
                return GroupCocycle(G, deg, N, np.asarray(spec["values"], dtype=np.int64))
            if "class_index" in spec:
                reps = enumerate_classes_small(G, deg, N).representatives
                if spec["class_index"] >= len(reps):
                    raise ManifestError(f"cocycle {ref!r}: only {len(reps)} classes exist")
                return reps[spec["class_index"]]
            raise ManifestError(f"cocycle {ref!r} needs values, cup_power or class_index")

        return self._cached("cocycle", ref, build)

    def manifold(self, ref: str):
        spec = self._section("manifolds").get(ref)
        if spec is None:
            if ref in BUILTINS or re.fullmatch(r"sigma\(\d+\)", ref):
                return self._cached("manifold", ref, lambda: builtin_complex(ref))
            raise UnresolvedReference(f"unknown manifold {ref!r}")

        def build():
            if "builtin" in spec:
                name = spec["builtin"]
                if name not in BUILTINS and not re.fullmatch(r"sigma\(\d+\)", name):
                    raise UnresolvedReference(f"unknown builtin complex {name!r}")
                return builtin_complex(name)
            if "complex" in spec:
                return complex_from_json(spec["complex"], ref)
            if "model" in spec:
                return models.from_json(spec["model"])
            return _parse_presentation(spec["presentation"])

        return self._cached("manifold", ref, build)

    def presentation(self, ref: str) -> Presentation:
        X = self.manifold(ref)
        if not isinstance(X, Presentation):
            raise ManifestError(f"manifold {ref!r} must be given as a presentation here")
        return X

    def theory(self, ref: str) -> Theory:
        spec = self._section("theories").get(ref)
        if spec is None:
            raise UnresolvedReference(f"unknown theory {ref!r}")

        def build():
            kind = spec["kind"]
            if kind == "untwisted":
                return Theory.untwisted(self.group(spec.get("group", "Z1")))
            if kind == "w1_power":
                if "power" not in spec:
                    raise ManifestError(f"theory {ref!r} needs a power")
                return Theory.w1_power(self.group(spec.get("group", "Z2")), spec["power"])
            if "cocycle" not in spec:
                raise ManifestError(f"theory {ref!r} needs a cocycle")
            T = Theory.from_cocycle(self.cocycle(spec["cocycle"]))
            if "modulus" in spec and spec["modulus"] != T.modulus:
                raise ManifestError(f"theory {ref!r}: modulus {spec['modulus']} differs from its cocycle's")
            if "group" in spec and not np.array_equal(self.group(spec["group"]).mul, T.group.mul):
                raise ManifestError(f"theory {ref!r}: group differs from its cocycle's")
            return T

        return self._cached("theory", ref, build)

    def bordism(self, ref: str, _stack: tuple[str, ...] = ()) -> tqft.Bordism:
        spec = self._section("bordisms").get(ref)
        if spec is None:
            if ref in tqft.STANDARD_BORDISMS:
                return tqft.STANDARD_BORDISMS[ref]()
            raise UnresolvedReference(f"unknown bordism {ref!r}")
        if ref in _stack:
            raise ManifestError(f"bordism {ref!r} refers to itself")

        def build():
            stack = _stack + (ref,)
            if "standard" in spec:
                return tqft.STANDARD_BORDISMS[spec["standard"]]()
            if "compose" in spec:
                parts = [self.bordism(r, stack) for r in spec["compose"]]
                out = parts[-1]
                for b in reversed(parts[:-1]):
                    out = tqft.compose(b, out)
                return out
            if "disjoint_union" in spec:
                return tqft.disjoint_union(*(self.bordism(r, stack) for r in spec["disjoint_union"]))
            need = ("source", "target", "total", "source_map", "target_map")
            if any(k not in spec for k in need):
                raise ManifestError(f"bordism {ref!r} needs {list(need)}")
            total = _parse_presentation(spec["total"])
            return tqft.Bordism(
                _parse_presentation(spec["source"]), _parse_presentation(spec["target"]), total,
                tuple(parse_word(w, total.names) for w in spec["source_map"]),
                tuple(parse_word(w, total.names) for w in spec["target_map"]),
                spec.get("source_components"), spec.get("target_components"), ref,
            )

        return self._cached("bordism", ref, build)

    # references used by each job

    def check_references(self) -> list[str]:
        """Names that do not resolve; empty when everything is defined."""
        missing = []
        for j in self.data["jobs"]:
            for kind in ("theory", "manifold", "bordism"):
                if kind in j:
                    try:
                        self._exists(kind, j[kind])
                    except UnresolvedReference as e:
                        missing.append(f"job {j['id']}: {e}")
        for name, spec in self._section("theories").items():
            for kind in ("group", "cocycle"):
                if kind in spec:
                    try:
                        self._exists(kind, spec[kind])
                    except UnresolvedReference as e:
                        missing.append(f"theory {name}: {e}")
        for name, spec in self._section("cocycles").items():
            try:
                self._exists("group", spec["group"])
            except UnresolvedReference as e:
                missing.append(f"cocycle {name}: {e}")
        for name, spec in self._section("bordisms").items():
            for r in spec.get("compose", []) + spec.get("disjoint_union", []):
                try:
                    self._exists("bordism", r)
                except UnresolvedReference as e:
                    missing.append(f"bordism {name}: {e}")
        return missing

    def _exists(self, kind: str, ref: str) -> None:
        if kind == "group":
            if ref not in self._section("groups"):
                self.group(ref)
            return
        if kind == "manifold":
            if ref not in self._section("manifolds") and ref not in BUILTINS \
                    and not re.fullmatch(r"sigma\(\d+\)", ref):
                raise UnresolvedReference(f"unknown manifold {ref!r}")
            return
        if kind == "bordism":
            if ref not in self._section("bordisms") and ref not in tqft.STANDARD_BORDISMS:
                raise UnresolvedReference(f"unknown bordism {ref!r}")
            return
        section = {"theory": "theories", "cocycle": "cocycles"}[kind]
        if ref not in self._section(section):
            raise UnresolvedReference(f"unknown {kind} {ref!r}")

    def job_inputs(self, job: dict) -> dict:
        """The job plus every definition it depends on, for the digest."""
        out: dict[str, Any] = {"job": job}
        deps: dict[str, dict] = {}

        def add(section: str, ref: str):
            spec = self._section(section).get(ref)
            if spec is None:
                deps.setdefault(section, {})[ref] = "<builtin>"
                return
            deps.setdefault(section, {})[ref] = spec
            if section == "theories":
                for k, s in (("group", "groups"), ("cocycle", "cocycles")):
                    if k in spec:
                        add(s, spec[k])
            if section == "cocycles":
                add("groups", spec["group"])
            if section == "bordisms":
                for r in spec.get("compose", []) + spec.get("disjoint_union", []):
                    add("bordisms", r)

        for kind, section in (("theory", "theories"), ("manifold", "manifolds"), ("bordism", "bordisms")):
            if kind in job:
                add(section, job[kind])
        out["definitions"] = deps
        out["schema_version"] = SCHEMA_VERSION
        return out


def inputs_digest(resolver: Resolver, job: dict) -> str:
    return hashlib.sha256(canonical_json(resolver.job_inputs(job)).encode()).hexdigest()
