"""Scenario configuration: JSON documents, schema validation, overrides.

A scenario is one JSON object per file:

    {
      "name": "demo",
      "model": {"name": "three-level-projective", "parameters": {"omega1": 1.0}},
      "mechanism": "projective",
      "schedule": {"t": 1.0, "N": [16, 32, 64], "samples": 50},
      "initial_state": "b",
      "outputs": ["probabilities", "purity", "convergence"],
      "output": {"path": "demo", "format": "csv"}
    }

Validation is strict: unknown keys anywhere are rejected, and every problem
is reported with its dotted path, all at once, via SchemaViolation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SchemaViolation
from .models import (
    decay_model,
    four_level_continuous,
    four_level_kicked,
    simplified_continuous,
    simplified_kicked,
    three_level_projective,
)

__all__ = [
    "MODEL_REGISTRY",
    "MECHANISMS",
    "OUTPUT_KINDS",
    "ModelSpec",
    "ScenarioConfig",
    "parse_config",
    "load_document",
    "validate_document",
    "apply_overrides",
]

MECHANISMS = ("projective", "kicked", "continuous", "zeno-limit", "decay-sweep")
OUTPUT_KINDS = ("probabilities", "purity", "coherence",
                "convergence", "propagator", "survival")

_BASIS_LABELS = {3: ("a", "b", "c"), 4: ("a", "b", "c", "M")}


@dataclass(frozen=True)
class ModelSpec:
    """Registry entry: how to build a bundle and what parameters it takes."""

    name: str
    mechanism: str
    dim: int
    defaults: dict
    builder: object  # callable(dict) -> ModelBundle

    def build(self, parameters: dict):
        return self.builder(parameters)


MODEL_REGISTRY: dict[str, ModelSpec] = {
    spec.name: spec for spec in [
        ModelSpec(
            "three-level-projective", "projective", 3,
            {"omega1": 1.0, "omega2": 1.0},
            lambda p: three_level_projective(p["omega1"], p["omega2"])),
        ModelSpec(
            "four-level-kicked", "kicked", 4,
            {"omega1": 1.0, "omega2": 1.0, "lambda1": 0.0, "lambda2": 1.0},
            lambda p: four_level_kicked(p["omega1"], p["omega2"],
                                        p["lambda1"], p["lambda2"])),
        ModelSpec(
            "four-level-continuous", "continuous", 4,
            {"omega1": 1.0, "omega2": 1.0, "K": 1.0},
            lambda p: four_level_continuous(p["omega1"], p["omega2"], p["K"])),
        ModelSpec(
            "simplified-kicked", "kicked", 3,
            {"omega1": 1.0, "omega2": 1.0, "lambda1": 0.0, "lambda2": 1.0},
            lambda p: simplified_kicked(p["omega1"], p["omega2"],
                                        p["lambda1"], p["lambda2"])),
        ModelSpec(
            "simplified-continuous", "continuous", 3,
            {"omega1": 1.0, "omega2": 1.0, "eta1": 0.0, "eta2": 1.0, "K": 1.0},
            lambda p: simplified_continuous(p["omega1"], p["omega2"],
                                            p["eta1"], p["eta2"], p["K"])),
        ModelSpec(
            "decay", "continuous", 4,
            {"omega1": 0.0, "tau_z": 1.0, "gamma": 0.1, "K": 0.0, "omega_b": 0.0},
            lambda p: decay_model(p["omega1"], p["tau_z"], p["gamma"],
                                  p["K"], p["omega_b"])),
    ]
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario, ready to run."""

    name: str
    model_name: str
    model_parameters: dict
    mechanism: str
    t: float
    n_values: tuple[int, ...] | None
    k_values: tuple[float, ...] | None
    samples: int
    initial_state: tuple[complex, ...] | None  # None = default state
    outputs: tuple[str, ...]
    output_path: str
    output_format: str

    @property
    def model_spec(self) -> ModelSpec:
        return MODEL_REGISTRY[self.model_name]

    def build_bundle(self):
        return self.model_spec.build(self.model_parameters)

    def resolve_initial_state(self) -> np.ndarray:
        """Amplitude vector to start from; defaults to (|b> + |c>)/sqrt(2)."""
        dim = self.model_spec.dim
        if self.initial_state is None:
            psi = np.zeros(dim, dtype=complex)
            psi[1] = psi[2] = 1.0 / np.sqrt(2.0)
            return psi
        return np.asarray(self.initial_state, dtype=complex)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and np.isfinite(x)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class _Collector:
    def __init__(self):
        self.violations: list[tuple[str, str]] = []

    def add(self, path: str, reason: str):
        self.violations.append((path, reason))

    def raise_if_any(self):
        if self.violations:
            raise SchemaViolation(self.violations)


def _check_unknown_keys(obj: dict, allowed: tuple[str, ...], path: str,
                        err: _Collector):
    for key in obj:
        if key not in allowed:
            err.add(f"{path}.{key}" if path else key, "unknown key")


def load_document(text: str) -> dict:
    """Parse the raw JSON text; the root must be an object."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation([("$", f"not valid JSON: {exc}")]) from None
    if not isinstance(doc, dict):
        raise SchemaViolation([("$", "root must be an object")])
    return doc


def apply_overrides(doc: dict, assignments: list[str]) -> dict:
    """Apply --set key.path=value assignments to a parsed document.

    Values are parsed as JSON when possible (numbers, lists, booleans),
    otherwise taken as strings.  Intermediate objects are created as needed;
    validation afterwards still rejects anything the schema does not know.
    """
    for item in assignments:
        if "=" not in item:
            raise SchemaViolation([("--set", f"expected key=value, got {item!r}")])
        key, _, raw = item.partition("=")
        key = key.strip()
        if not key:
            raise SchemaViolation([("--set", f"empty key in {item!r}")])
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = value
    return doc


def _validate_model(doc, err: _Collector) -> tuple[str | None, dict]:
    model = doc.get("model")
    if not isinstance(model, dict):
        err.add("model", "required object with keys name, parameters")
        return None, {}
    _check_unknown_keys(model, ("name", "parameters"), "model", err)
    name = model.get("name")
    if not isinstance(name, str) or name not in MODEL_REGISTRY:
        err.add("model.name", f"must be one of {sorted(MODEL_REGISTRY)}")
        return None, {}
    spec = MODEL_REGISTRY[name]
    params = dict(spec.defaults)
    raw = model.get("parameters", {})
    if not isinstance(raw, dict):
        err.add("model.parameters", "must be an object")
    else:
        for key, value in raw.items():
            if key not in spec.defaults:
                err.add(f"model.parameters.{key}",
                        f"unknown parameter; {name} takes {sorted(spec.defaults)}")
            elif not _is_number(value):
                err.add(f"model.parameters.{key}", "must be a finite number")
            else:
                params[key] = float(value)
    return name, params


def _validate_schedule(doc, mechanism, err: _Collector):
    t, n_values, k_values, samples = None, None, None, 50
    sched = doc.get("schedule")
    if not isinstance(sched, dict):
        err.add("schedule", "required object with key t (and N or K)")
        return t, n_values, k_values, samples
    _check_unknown_keys(sched, ("t", "N", "K", "samples"), "schedule", err)

    raw_t = sched.get("t")
    if not _is_number(raw_t) or raw_t <= 0:
        err.add("schedule.t", "must be a positive number")
    else:
        t = float(raw_t)

    if "samples" in sched:
        raw_s = sched["samples"]
        if not _is_int(raw_s) or raw_s < 2:
            err.add("schedule.samples", "must be an integer >= 2")
        else:
            samples = raw_s

    if "N" in sched:
        raw_n = sched["N"]
        vals = raw_n if isinstance(raw_n, list) else [raw_n]
        if not vals or not all(_is_int(v) and v >= 1 for v in vals):
            err.add("schedule.N", "must be a positive integer or list of them")
        elif any(b <= a for a, b in zip(vals, vals[1:])):
            err.add("schedule.N", "list must be strictly increasing")
        else:
            n_values = tuple(int(v) for v in vals)

    if "K" in sched:
        raw_k = sched["K"]
        vals = raw_k if isinstance(raw_k, list) else [raw_k]
        if not vals or not all(_is_number(v) and v >= 0 for v in vals):
            err.add("schedule.K", "must be a number >= 0 or list of them")
        elif any(b <= a for a, b in zip(vals, vals[1:])):
            err.add("schedule.K", "list must be strictly increasing")
        else:
            k_values = tuple(float(v) for v in vals)

    needs_n = mechanism in ("projective", "kicked")
    needs_k = mechanism in ("continuous", "decay-sweep")
    if needs_n and n_values is None and "N" not in sched:
        err.add("schedule.N", f"required for mechanism {mechanism}")
    if needs_k and k_values is None and "K" not in sched:
        err.add("schedule.K", f"required for mechanism {mechanism}")
    if not needs_n and "N" in sched:
        err.add("schedule.N", f"not applicable to mechanism {mechanism}")
    if not needs_k and "K" in sched:
        err.add("schedule.K", f"not applicable to mechanism {mechanism}")
    if mechanism == "decay-sweep" and k_values is not None and len(k_values) < 1:
        err.add("schedule.K", "decay-sweep needs at least one K value")
    return t, n_values, k_values, samples


def _validate_initial_state(doc, model_name, mechanism, err: _Collector):
    if "initial_state" not in doc:
        return None
    if mechanism == "decay-sweep":
        err.add("initial_state", "decay-sweep always starts from |b>")
        return None
    raw = doc["initial_state"]
    dim = MODEL_REGISTRY[model_name].dim if model_name else None
    if isinstance(raw, str):
        labels = _BASIS_LABELS.get(dim, ())
        matches = [i for i, lab in enumerate(labels) if lab.lower() == raw.lower()]
        if not matches:
            err.add("initial_state", f"unknown basis label {raw!r}; "
                                     f"expected one of {list(labels)}")
            return None
        psi = np.zeros(dim, dtype=complex)
        psi[matches[0]] = 1.0
        return tuple(psi)
    if isinstance(raw, list):
        ok = (dim is not None and len(raw) == dim
              and all(isinstance(entry, list) and len(entry) == 2
                      and all(_is_number(x) for x in entry) for entry in raw))
        if not ok:
            err.add("initial_state", f"must be a basis label or a list of "
                                     f"{dim} [re, im] pairs")
            return None
        psi = np.array([complex(re, im) for re, im in raw])
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-6:
            err.add("initial_state", f"must be normalized; got norm {norm:.8g}")
            return None
        return tuple(psi)
    err.add("initial_state", "must be a basis label string or amplitude list")
    return None


def _validate_outputs(doc, mechanism, n_values, k_values, err: _Collector):
    raw = doc.get("outputs")
    if not isinstance(raw, list) or not raw:
        err.add("outputs", "required non-empty list")
        return ()
    outputs = []
    for i, item in enumerate(raw):
        if item not in OUTPUT_KINDS:
            err.add(f"outputs[{i}]", f"must be one of {list(OUTPUT_KINDS)}")
        elif item in outputs:
            err.add(f"outputs[{i}]", f"duplicate output {item!r}")
        else:
            outputs.append(item)
    series_ok = mechanism in ("projective", "kicked", "continuous", "zeno-limit")
    for kind in outputs:
        if kind == "survival" and mechanism != "decay-sweep":
            err.add("outputs", "survival is only produced by decay-sweep")
        if kind != "survival" and mechanism == "decay-sweep":
            err.add("outputs", f"decay-sweep only produces survival, not {kind!r}")
        if kind in ("probabilities", "purity", "coherence") and not series_ok:
            err.add("outputs", f"{kind} not available for mechanism {mechanism}")
        if kind == "propagator" and mechanism not in ("kicked", "continuous",
                                                      "zeno-limit"):
            err.add("outputs", f"propagator not available for mechanism {mechanism}")
        if kind == "convergence":
            if mechanism not in ("projective", "kicked", "continuous"):
                err.add("outputs", f"convergence not available for {mechanism}")
            else:
                values = n_values if mechanism in ("projective", "kicked") else k_values
                if values is not None and len(values) < 3:
                    err.add("outputs", "convergence needs at least 3 schedule values")
    return tuple(outputs)


def validate_document(doc: dict) -> ScenarioConfig:
    """Validate a parsed document against the schema; all errors at once."""
    err = _Collector()
    _check_unknown_keys(doc, ("name", "model", "mechanism", "schedule",
                              "initial_state", "outputs", "output"), "", err)

    model_name, params = _validate_model(doc, err)

    mechanism = doc.get("mechanism")
    if mechanism not in MECHANISMS:
        err.add("mechanism", f"must be one of {list(MECHANISMS)}")
        mechanism = None

    if model_name is not None and mechanism is not None:
        spec = MODEL_REGISTRY[model_name]
        if mechanism == "decay-sweep":
            if model_name != "decay":
                err.add("mechanism", "decay-sweep requires the decay model")
        elif model_name == "decay":
            err.add("mechanism", "the decay model only runs under decay-sweep")
        elif mechanism == "zeno-limit":
            pass  # any Hermitian model
        elif mechanism != spec.mechanism:
            err.add("mechanism",
                    f"model {model_name} carries a {spec.mechanism} payload, "
                    f"not {mechanism}")

    t, n_values, k_values, samples = _validate_schedule(doc, mechanism, err)
    initial_state = _validate_initial_state(doc, model_name, mechanism, err)
    outputs = _validate_outputs(doc, mechanism, n_values, k_values, err)

    name = doc.get("name", model_name or "scenario")
    if not isinstance(name, str) or not name:
        err.add("name", "must be a non-empty string")
        name = "scenario"

    output_path, output_format = name, "csv"
    out = doc.get("output")
    if out is not None:
        if not isinstance(out, dict):
            err.add("output", "must be an object with keys path, format")
        else:
            _check_unknown_keys(out, ("path", "format"), "output", err)
            raw_path = out.get("path", name)
            if not isinstance(raw_path, str) or not raw_path:
                err.add("output.path", "must be a non-empty string")
            else:
                output_path = raw_path
            raw_fmt = out.get("format", "csv")
            if raw_fmt != "csv":
                err.add("output.format", "only 'csv' is supported")
            else:
                output_format = raw_fmt

    err.raise_if_any()
    return ScenarioConfig(
        name=name, model_name=model_name, model_parameters=params,
        mechanism=mechanism, t=t, n_values=n_values, k_values=k_values,
        samples=samples, initial_state=initial_state, outputs=outputs,
        output_path=output_path, output_format=output_format)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document from raw text."""
    return validate_document(load_document(text))
