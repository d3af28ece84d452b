"""Load custom first-order Hopf models from JSON.

Schema (``schema_version`` 1)::

    {
      "schema_version": 1,
      "name": "my-model",
      "dimension": 2,
      "generators": ["X", "Y"],
      "param": "h",                    # z | h | inv_kappa
      "param_value": 0.1,              # optional
      "representation": {"X": [[[re, im], ...], ...], ...},
      "coproduct_corrections": [{"target": "X", "left": ["Y"], "right": ["X"], "coeff": [re, im]}],
      "antipode_corrections": [{"target": "X", "word": ["Y", "X"], "coeff": [re, im]}],
      "counits": {"X": 0},             # optional, default 0
      "dagger": {"X": "X", "Y": "Y"},
      "relations": [{"left": "X", "right": "Y", "result": [{"word": ["X"], "coeff": [re, im]}]}],
      "hamiltonians": {"h": [{"word": ["X"], "coeff": [1, 0]}]}
    }

Every correction is multiplied by the formal parameter; the undeformed parts
(primitive coproduct, S(X) = -X) are implied.  An empty word is the identity.
Pairs missing from ``relations`` are fitted in span{generators, 1}.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import HopfEvoError, ModelFileError
from .models import HopfModel
from .opalg import PARAMS, Jet
from .symalg import HopfData, SymElement, SymTensor

SCHEMA_VERSION = 1


def _coeff(raw, where: str) -> complex:
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(isinstance(v, (int, float)) for v in raw):
        return complex(raw[0], raw[1])
    raise ModelFileError(f"{where}: coefficient must be a number or [re, im]")


def _word(raw, gens: list, where: str) -> SymElement:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise ModelFileError(f"{where}: word must be a list of generator names")
    out = SymElement.one()
    for s in raw:
        if s not in gens:
            raise ModelFileError(f"{where}: unknown generator {s!r}")
        out = out * SymElement.gen(s)
    return out


def _matrix(raw, d: int, where: str) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ModelFileError(f"{where}: matrix entries must be [re, im] pairs") from None
    if arr.shape != (d, d, 2):
        raise ModelFileError(f"{where}: expected a {d}x{d} matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _linear_combination(raw, gens, where) -> SymElement:
    if not isinstance(raw, list):
        raise ModelFileError(f"{where}: expected a list of {{word, coeff}} terms")
    out = SymElement()
    for n, term in enumerate(raw):
        if not isinstance(term, dict):
            raise ModelFileError(f"{where}[{n}]: expected an object")
        out = out + _word(term.get("word", []), gens, f"{where}[{n}]") * _coeff(term.get("coeff", 1), f"{where}[{n}]")
    return out


def parse_model(doc: dict) -> HopfModel:
    if not isinstance(doc, dict):
        raise ModelFileError("model file must contain a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ModelFileError(f"schema_version must be {SCHEMA_VERSION}")
    try:
        d = int(doc["dimension"])
        gens = list(doc["generators"])
        rep_raw = doc["representation"]
        dag_raw = doc["dagger"]
        param = doc["param"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"missing or malformed field: {exc}") from None
    if d < 1 or not gens or not all(isinstance(g, str) and g for g in gens) or len(set(gens)) != len(gens):
        raise ModelFileError("dimension must be positive and generators unique non-empty names")
    if param not in PARAMS or param == "none":
        raise ModelFileError(f"param must be one of {[p for p in PARAMS if p != 'none']}")
    eps = Jet(0, 1, param)

    rep = {}
    for g in gens:
        if g not in rep_raw:
            raise ModelFileError(f"representation missing generator {g!r}")
        rep[g] = _matrix(rep_raw[g], d, f"representation[{g}]")

    coproducts = {g: SymTensor.primitive(g) for g in gens}
    for n, t in enumerate(doc.get("coproduct_corrections", [])):
        where = f"coproduct_corrections[{n}]"
        if not isinstance(t, dict) or t.get("target") not in gens:
            raise ModelFileError(f"{where}: missing or unknown target")
        left = _word(t.get("left", []), gens, where)
        right = _word(t.get("right", []), gens, where)
        coproducts[t["target"]] = coproducts[t["target"]] + SymTensor.simple(left, right) * (eps * _coeff(t.get("coeff", 1), where))

    antipodes = {g: -SymElement.gen(g) for g in gens}
    for n, t in enumerate(doc.get("antipode_corrections", [])):
        where = f"antipode_corrections[{n}]"
        if not isinstance(t, dict) or t.get("target") not in gens:
            raise ModelFileError(f"{where}: missing or unknown target")
        antipodes[t["target"]] = antipodes[t["target"]] + _word(t.get("word", []), gens, where) * (eps * _coeff(t.get("coeff", 1), where))

    counits = {g: _coeff(doc.get("counits", {}).get(g, 0), f"counits[{g}]") for g in gens}
    if not isinstance(dag_raw, dict):
        raise ModelFileError("dagger must map generator names to generator names")
    daggers = {}
    for g, img in dag_raw.items():
        if g not in gens or img not in gens:
            raise ModelFileError(f"dagger: unknown generator in {g!r} -> {img!r}")
        daggers[g] = SymElement.gen(img)

    relations = {}
    for n, r in enumerate(doc.get("relations", [])):
        where = f"relations[{n}]"
        if not isinstance(r, dict) or r.get("left") not in gens or r.get("right") not in gens:
            raise ModelFileError(f"{where}: left/right must be generator names")
        relations[(r["left"], r["right"])] = _linear_combination(r.get("result", []), gens, where)

    hams = {}
    for name, terms in doc.get("hamiltonians", {}).items():
        hams[name] = _linear_combination(terms, gens, f"hamiltonians[{name}]")

    try:
        data = HopfData(
            coproducts=coproducts,
            antipodes=antipodes,
            counits=counits,
            daggers=daggers,
            representation=rep,
            relations=relations,
        )
    except (HopfEvoError, ValueError) as exc:
        raise ModelFileError(str(exc)) from exc
    value = doc.get("param_value")
    return HopfModel(
        name=str(doc.get("name", "custom")),
        data=data,
        mode="first-order",
        param=param,
        param_value=None if value is None else float(value),
        physical=bool(doc.get("physical", True)),
        hamiltonians=hams,
        default_hamiltonian=next(iter(hams), None),
    )


def load_model(path) -> HopfModel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return parse_model(doc)
