"""File formats: function, operator and problem specs (JSON), measures,
lattices, sweeps and coefficients (CSV), and deterministic JSON reports."""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np

from .analytic import AnalyticFunction, SelfMap, TaylorPoly, from_spec, parse_complex, to_spec
from .carleson import DiscreteMeasure
from .errors import ContractError, DomainError, InputError
from .geometry import BergmanLattice
from .ode import OdeProblem
from .operators import CompositionSumSpec, VolterraSpec

SCHEMA_VERSION = "1.0"


# ---------------------------------------------------------------------------
# reading


def read_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def read_function(path) -> AnalyticFunction:
    return from_spec(read_json(path))


def _functions(items, what: str) -> tuple:
    if not isinstance(items, list) or not items:
        raise InputError(f"'{what}' must be a non-empty list of function specs")
    return tuple(from_spec(item) for item in items)


def _int(doc: dict, key: str) -> int:
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"'{key}' must be an integer")
    return value


def _self_map(spec) -> SelfMap:
    try:
        return SelfMap(from_spec(spec))
    except DomainError as exc:
        raise InputError(f"'phi' is not a self-map of the disk: {exc}") from None


def operator_from_dict(doc) -> VolterraSpec | CompositionSumSpec:
    """Build an operator from ``{"type": "volterra" | "single_symbol" | "compsum", ...}``.

    * volterra: ``"n"`` and ``"g": [g_0, ..., g_{n-1}]``;
    * single_symbol: a single symbol ``"g"`` and coefficients ``"a": [a_0, ...,
      a_{n-1}]`` giving ``g_j = a_j g^(n-j)``;
    * compsum: ``"n"``, ``"u": [u_0, ..., u_n]`` and ``"phi"``.
    """
    if not isinstance(doc, dict) or "type" not in doc:
        raise InputError("operator spec must be an object with a 'type' key")
    kind = doc["type"]
    try:
        if kind == "volterra":
            return VolterraSpec(_int(doc, "n"), _functions(doc.get("g"), "g"))
        if kind == "single_symbol":
            a = doc.get("a")
            if not isinstance(a, list) or not a:
                raise InputError("'a' must be a non-empty list")
            spec = VolterraSpec.from_single_symbol(from_spec(doc.get("g")),
                                                   [parse_complex(v, "a_j") for v in a])
            if "n" in doc and _int(doc, "n") != spec.n:
                raise InputError("'n' must equal the length of 'a'")
            return spec
        if kind == "compsum":
            if "phi" not in doc:
                raise InputError("compsum spec needs 'phi'")
            return CompositionSumSpec(_int(doc, "n"), _functions(doc.get("u"), "u"),
                                      _self_map(doc["phi"]))
    except ContractError as exc:
        raise InputError(f"invalid operator spec: {exc}") from None
    raise InputError(f"unknown operator type {kind!r}")


def read_operator(path) -> VolterraSpec | CompositionSumSpec:
    return operator_from_dict(read_json(path))


def problem_from_dict(doc) -> OdeProblem:
    """``{"n": int, "g": [g_0 .. g_{n-1}], "F": fn, "initial": [f(0), ...]}``."""
    if not isinstance(doc, dict):
        raise InputError("problem spec must be an object")
    try:
        initial = doc.get("initial")
        if not isinstance(initial, list):
            raise InputError("'initial' must be a list")
        if "F" not in doc:
            raise InputError("problem spec needs 'F'")
        return OdeProblem(_int(doc, "n"), _functions(doc.get("g"), "g"), from_spec(doc["F"]),
                          tuple(parse_complex(v, "initial value") for v in initial))
    except ContractError as exc:
        raise InputError(f"invalid problem spec: {exc}") from None


def read_problem(path) -> OdeProblem:
    return problem_from_dict(read_json(path))


def _data_rows(path, columns: tuple[str, ...]) -> list[list[float]]:
    """Rows of a CSV with the given header; ``#`` lines are comments."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != columns:
        raise InputError(f"{path}: expected header {','.join(columns)}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(columns):
            raise InputError(f"{path}: row {lineno} has {len(row)} fields")
        try:
            rows.append([float(v) for v in row])
        except ValueError:
            raise InputError(f"{path}: row {lineno} is not numeric") from None
    return rows


def read_measure_csv(path) -> DiscreteMeasure:
    """Atoms from a ``z_re, z_im, weight`` CSV."""
    rows = _data_rows(path, ("z_re", "z_im", "weight"))
    if not rows:
        raise InputError(f"{path}: measure has no atoms")
    arr = np.array(rows)
    try:
        return DiscreteMeasure(arr[:, 0] + 1j * arr[:, 1], arr[:, 2], None, Path(path).name)
    except (ContractError, DomainError) as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# writing


def _text(rows, header_lines=()) -> str:
    out = [f"# {line}\n" for line in header_lines]
    buf = []
    for row in rows:
        buf.append(",".join(_cell(v) for v in row) + "\n")
    return "".join(out) + "".join(buf)


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_measure_csv(measure: DiscreteMeasure, path) -> None:
    rows = [("z_re", "z_im", "weight")]
    rows += [(z.real, z.imag, w) for z, w in zip(measure.points, measure.weights)]
    write_text(path, _text(rows))


def lattice_csv(lattice: BergmanLattice) -> str:
    rows = [("a_re", "a_im")] + [(a.real, a.imag) for a in lattice.points]
    return _text(rows, [f"r={lattice.r!r}", f"multiplicity_bound={lattice.multiplicity_bound}",
                        f"r_max={lattice.r_max!r}"])


def read_lattice_csv(path) -> tuple[dict, np.ndarray]:
    """Header values and points of a lattice CSV."""
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") and "=" in line:
                key, value = line[1:].strip().split("=", 1)
                meta[key] = float(value)
    arr = np.array(_data_rows(path, ("a_re", "a_im")))
    return meta, arr[:, 0] + 1j * arr[:, 1] if arr.size else np.zeros(0, complex)


def coefficients_csv(f: TaylorPoly) -> str:
    rows = [("k", "re", "im")] + [(k, c.real, c.imag) for k, c in enumerate(f.coeffs)]
    return _text(rows, [f"truncated={str(f.truncated).lower()}"])


def table_csv(columns: dict) -> str:
    """CSV of equal-length named columns."""
    names = list(columns)
    length = {len(v) for v in columns.values()}
    if len(length) > 1:
        raise ContractError("columns must have equal length")
    rows = [tuple(names)] + list(zip(*(columns[n] for n in names)))
    return _text(rows)


def jsonable(obj):
    """Convert reports to JSON-ready values.

    Complex numbers become ``[re, im]``, functions their spec dicts, arrays
    lists; non-finite floats become the strings ``"nan"``, ``"inf"``,
    ``"-inf"``.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, AnalyticFunction):
        return to_spec(obj)
    if dataclasses.is_dataclass(obj) and hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if obj is None or isinstance(obj, str):
        return obj
    raise ContractError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    doc = {"schema_version": SCHEMA_VERSION, **report}
    return json.dumps(jsonable(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
