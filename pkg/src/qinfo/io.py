"""JSON files for channels, density matrices and experiment schemes.

Complex numbers are ``[re, im]`` pairs (a bare number is real). Matrices
are lists of rows, or flat row-major lists when the shape is implied.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema
import numpy as np

from .channels import KrausChannel, depolarizing_channel, identity_channel, unitary_channel
from .errors import DimensionMismatchError, SchemaError
from .experiment import ExperimentScheme, Psm
from .linalg import qubit_rotation
from .states import maximally_mixed, mixed_family, pure_family
from .validation import validate_density_matrix


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("qinfo").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


def _locate(text: str, path) -> tuple[int, int] | None:
    # walk the key path through the raw text; good enough to point at the offending field
    pos = 0
    found = None
    for key in path:
        if isinstance(key, str):
            i = text.find(json.dumps(key), pos)
            if i < 0:
                break
            pos = i
            found = i
    if found is None:
        return None
    line = text.count("\n", 0, found) + 1
    col = found - (text.rfind("\n", 0, found) + 1) + 1
    return line, col


def _field(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_json(text: str, schema: str, source: str = "<input>") -> Any:
    """Decode ``text`` and validate it against a bundled schema.

    Raises:
        SchemaError: with the file, line/column and field path of the problem.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        where = _locate(text, list(err.absolute_path))
        loc = f"{source}:{where[0]}:{where[1]}" if where else source
        raise SchemaError(f"{loc}: field {_field(err.absolute_path)}: {err.message}")
    return doc


def _read(path) -> tuple[str, str]:
    path = Path(path)
    return path.read_text(), str(path)


def _complex(entry) -> complex:
    if isinstance(entry, (list, tuple)):
        return complex(float(entry[0]), float(entry[1]))
    return complex(float(entry))


def _is_entry(x) -> bool:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return True
    return isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)


def decode_matrix(data, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Nested rows or a flat row-major list of entries to a complex array.

    Without ``shape``: square rows first, then a flat list of square length,
    then rectangular rows. Write rectangular matrices with ``[re, im]`` pairs
    so they cannot be mistaken for a flat list.
    """
    rows_ok = (all(isinstance(r, (list, tuple)) for r in data)
               and all(all(_is_entry(e) for e in r) for r in data)
               and len({len(r) for r in data}) == 1)
    flat_ok = all(_is_entry(e) for e in data)
    if shape is not None:
        n_rows, n_cols = shape
        if rows_ok and len(data) == n_rows and len(data[0]) == n_cols:
            return np.array([[_complex(e) for e in r] for r in data])
        if flat_ok and len(data) == n_rows * n_cols:
            return np.array([_complex(e) for e in data]).reshape(n_rows, n_cols)
        raise DimensionMismatchError(f"matrix does not have shape {n_rows}x{n_cols}")
    if rows_ok and len(data) == len(data[0]):
        return np.array([[_complex(e) for e in r] for r in data])
    if flat_ok:
        d = int(round(np.sqrt(len(data))))
        if d * d == len(data):
            return np.array([_complex(e) for e in data]).reshape(d, d)
    if rows_ok:
        return np.array([[_complex(e) for e in r] for r in data])
    raise DimensionMismatchError("cannot infer a matrix shape from the given entries")


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def channel_from_dict(doc: Mapping) -> KrausChannel:
    shape = (doc["dim_out"], doc["dim_in"]) if "dim_in" in doc and "dim_out" in doc else None
    kraus = [decode_matrix(k, shape) for k in doc["kraus"]]
    return KrausChannel(tuple(kraus))


def channel_to_dict(ch: KrausChannel) -> dict:
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out,
            "kraus": [encode_matrix(k) for k in ch.kraus]}


def load_channel(path) -> KrausChannel:
    """Read a channel file; trace preservation is checked on construction."""
    text, src = _read(path)
    return channel_from_dict(parse_json(text, "channel", src))


def save_channel(ch: KrausChannel, path) -> None:
    Path(path).write_text(json.dumps(channel_to_dict(ch), indent=2) + "\n")


def load_density(path) -> np.ndarray:
    text, src = _read(path)
    doc = parse_json(text, "density", src)
    if isinstance(doc, dict):
        shape = (doc["dim"], doc["dim"]) if "dim" in doc else None
        rho = decode_matrix(doc["rho"], shape)
    else:
        rho = decode_matrix(doc)
    return validate_density_matrix(rho)


def save_density(rho, path) -> None:
    Path(path).write_text(json.dumps({"dim": int(np.shape(rho)[0]), "rho": encode_matrix(rho)}) + "\n")


def substitute(doc, values: Mapping[str, float]):
    """Replace every ``"$name"`` string with the control value ``values[name]``."""
    if isinstance(doc, dict):
        return {k: substitute(v, values) for k, v in doc.items()}
    if isinstance(doc, list):
        return [substitute(v, values) for v in doc]
    if isinstance(doc, str) and doc.startswith("$"):
        name = doc[1:]
        if name not in values:
            raise SchemaError(f"reference to undeclared control {doc!r}")
        return float(values[name])
    return doc


def _state(doc) -> np.ndarray:
    if isinstance(doc, dict):
        fam = doc["family"]
        if fam == "maximally_mixed":
            return maximally_mixed(doc.get("dim", 2))
        q = float(doc.get("q", 1.0))
        return pure_family(q) if fam == "pure" else mixed_family(q)
    return decode_matrix(doc)


def _channel(doc, dim: int, base: Path | None) -> KrausChannel:
    if "file" in doc:
        p = Path(doc["file"])
        return load_channel(p if p.is_absolute() or base is None else base / p)
    if "kraus" in doc:
        return channel_from_dict(doc)
    name = doc["name"]
    if name == "identity":
        return identity_channel(doc.get("dim", dim))
    if name == "depolarizing":
        return depolarizing_channel(float(doc.get("p", 1.0)))
    return unitary_channel(qubit_rotation(float(doc.get("angle", 0.0))))


def _psm(doc) -> Psm:
    flavor = doc["flavor"]
    weights = doc.get("weights")
    labels = doc.get("labels")
    if flavor == "projective":
        if "vectors" in doc:
            vecs = [np.array([_complex(e) for e in v]) for v in doc["vectors"]]
            return Psm.projective_family(vecs, weights, labels)
        return Psm.qubit_basis(float(doc.get("vartheta", 0.0)))
    if flavor == "unitary":
        if "unitaries" in doc:
            us = [decode_matrix(u) for u in doc["unitaries"]]
        else:
            us = [qubit_rotation(float(a)) for a in doc.get("angles", [0.0, np.pi])]
        return Psm.unitary_family(us, weights, labels=labels)
    outs = []
    for i, o in enumerate(doc["outcomes"]):
        outs.append((o.get("label", i), float(o.get("weight", 1.0)),
                     tuple(decode_matrix(k) for k in o["kraus"])))
    return Psm(tuple(outs), "general")


def scheme_from_dict(doc: Mapping, base: Path | None = None) -> ExperimentScheme:
    """Build a scheme; ``"$name"`` placeholders take control values.

    Controls default to their declared ``value`` or else the lower end of
    their range, and :meth:`ExperimentScheme.at` rebuilds for other values.
    """
    controls = {k: tuple(float(x) for x in v["range"]) for k, v in doc.get("controls", {}).items()}
    defaults = {k: float(v.get("value", v["range"][0])) for k, v in doc.get("controls", {}).items()}
    body = {k: v for k, v in doc.items() if k not in ("controls", "optimize")}

    def build(values: Mapping[str, float]) -> ExperimentScheme:
        d = substitute(body, {**defaults, **values})
        rho = _state(d["rho_in"])
        return ExperimentScheme(
            rho_in=rho,
            extraction=_psm(d["extraction"]),
            channel=_channel(d["channel"], rho.shape[0], base),
            readout=_psm(d["readout"]),
            controls=controls,
            builder=build,
        )

    scheme = build({})
    return scheme.at(defaults) if defaults else scheme


def load_scheme(path) -> tuple[ExperimentScheme, dict]:
    """Read a scheme file; returns the scheme and the raw document."""
    text, src = _read(path)
    doc = parse_json(text, "scheme", src)
    return scheme_from_dict(doc, Path(path).parent), doc
