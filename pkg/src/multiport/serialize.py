"""File formats: matrix JSON, plan JSON, and sweep CSV.

Matrices serialize as ``{"rows": R, "cols": C, "entries": [[re, im], ...]}``
with entries flattened row-major.  Plans serialize as
``{"n": ..., "m": ..., "factors": [...], "phases": [...]}`` where each factor
carries ``size``, ``base_row``, 1-based ``columns``, and its ``block`` as a
nested matrix object.  Floats are rendered with 17 significant digits, which
round-trips IEEE doubles exactly; sweep CSVs use 12 significant digits.

Writers emit deterministic text: serializing the same object twice yields
byte-identical output.  Loaders validate shape, finiteness, and internal
consistency and raise ``ValueError`` on malformed input.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .decomposition import DecompositionPlan, Factor
from .linalg import as_matrix
from .robustness import SweepResult

__all__ = [
    "matrix_to_json",
    "json_to_matrix",
    "save_matrix",
    "load_matrix",
    "plan_to_json",
    "json_to_plan",
    "save_plan",
    "load_plan",
    "sweep_results_to_csv",
    "save_sweep_results",
]

CSV_HEADER = "n,m,sigma,fq_mean,fq_stderr,fu_mean,fu_stderr,samples"


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _f12(x: float) -> str:
    return format(float(x), ".12g")


def matrix_to_json(a) -> str:
    """Serialize a matrix to its canonical JSON text."""
    mat = as_matrix(a)
    rows, cols = mat.shape
    body_rows = []
    for r in range(rows):
        pairs = ", ".join(
            f"[{_f17(v.real)}, {_f17(v.imag)}]" for v in mat[r]
        )
        body_rows.append("    " + pairs)
    entries = ",\n".join(body_rows)
    return (
        "{\n"
        f'  "rows": {rows},\n'
        f'  "cols": {cols},\n'
        f'  "entries": [\n{entries}\n  ]\n'
        "}\n"
    )


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _as_int(obj, name: str) -> int:
    _require(isinstance(obj, int) and not isinstance(obj, bool), f"{name} must be an integer")
    return obj


def _as_float(obj, name: str) -> float:
    _require(
        isinstance(obj, (int, float)) and not isinstance(obj, bool),
        f"{name} must be a number",
    )
    value = float(obj)
    _require(math.isfinite(value), f"{name} must be finite")
    return value


def json_to_matrix(text: str) -> np.ndarray:
    """Parse canonical matrix JSON back into a complex128 array."""
    obj = json.loads(text)
    _require(isinstance(obj, dict), "matrix JSON must be an object")
    for key in ("rows", "cols", "entries"):
        _require(key in obj, f"matrix JSON is missing key '{key}'")
    rows = _as_int(obj["rows"], "rows")
    cols = _as_int(obj["cols"], "cols")
    _require(rows >= 1 and cols >= 1, f"matrix shape must be positive, got {rows}x{cols}")
    entries = obj["entries"]
    _require(isinstance(entries, list), "entries must be a list")
    _require(
        len(entries) == rows * cols,
        f"expected {rows * cols} entries, got {len(entries)}",
    )
    flat = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(entries):
        _require(
            isinstance(pair, list) and len(pair) == 2,
            f"entry {k} must be a [re, im] pair",
        )
        flat[k] = complex(
            _as_float(pair[0], f"entry {k} real part"),
            _as_float(pair[1], f"entry {k} imaginary part"),
        )
    return flat.reshape(rows, cols)


def save_matrix(path, a) -> None:
    text = matrix_to_json(a)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return json_to_matrix(fh.read())


def plan_to_json(plan: DecompositionPlan) -> str:
    """Serialize a decomposition plan to its canonical JSON text."""
    parts = ["{\n", f'  "n": {plan.n},\n', f'  "m": {plan.m},\n', '  "factors": [\n']
    factor_chunks = []
    for f in plan.factors:
        cols = ", ".join(str(c) for c in f.columns)
        block_rows = []
        for r in range(f.size):
            pairs = ", ".join(
                f"[{_f17(v.real)}, {_f17(v.imag)}]" for v in f.block[r]
            )
            block_rows.append("          " + pairs)
        block_entries = ",\n".join(block_rows)
        factor_chunks.append(
            "    {\n"
            f'      "size": {f.size},\n'
            f'      "base_row": {f.base_row},\n'
            f'      "columns": [{cols}],\n'
            '      "block": {\n'
            f'        "rows": {f.size},\n'
            f'        "cols": {f.size},\n'
            f'        "entries": [\n{block_entries}\n        ]\n'
            "      }\n"
            "    }"
        )
    parts.append(",\n".join(factor_chunks))
    if factor_chunks:
        parts.append("\n")
    phases = ", ".join(_f17(p) for p in plan.phases)
    parts.append("  ],\n")
    parts.append(f'  "phases": [{phases}]\n')
    parts.append("}\n")
    return "".join(parts)


def json_to_plan(text: str) -> DecompositionPlan:
    """Parse canonical plan JSON, re-validating every structural invariant."""
    obj = json.loads(text)
    _require(isinstance(obj, dict), "plan JSON must be an object")
    for key in ("n", "m", "factors", "phases"):
        _require(key in obj, f"plan JSON is missing key '{key}'")
    n = _as_int(obj["n"], "n")
    m = _as_int(obj["m"], "m")
    raw_factors = obj["factors"]
    _require(isinstance(raw_factors, list), "factors must be a list")
    factors = []
    for k, rf in enumerate(raw_factors):
        _require(isinstance(rf, dict), f"factors[{k}] must be an object")
        for key in ("size", "base_row", "columns", "block"):
            _require(key in rf, f"factors[{k}] is missing key '{key}'")
        size = _as_int(rf["size"], f"factors[{k}].size")
        base_row = _as_int(rf["base_row"], f"factors[{k}].base_row")
        columns = rf["columns"]
        _require(isinstance(columns, list), f"factors[{k}].columns must be a list")
        columns = tuple(_as_int(c, f"factors[{k}] column") for c in columns)
        block = json_to_matrix(json.dumps(rf["block"]))
        _require(
            block.shape == (size, size),
            f"factors[{k}] block shape {block.shape} does not match size {size}",
        )
        try:
            factors.append(
                Factor(size=size, base_row=base_row, columns=columns, block=block)
            )
        except ValueError as exc:
            raise ValueError(f"factors[{k}]: {exc}") from None
    raw_phases = obj["phases"]
    _require(isinstance(raw_phases, list), "phases must be a list")
    phases = np.array(
        [_as_float(p, f"phases[{k}]") for k, p in enumerate(raw_phases)],
        dtype=np.float64,
    )
    try:
        return DecompositionPlan(n=n, m=m, factors=tuple(factors), phases=phases)
    except ValueError as exc:
        raise ValueError(f"invalid plan: {exc}") from None


def save_plan(path, plan: DecompositionPlan) -> None:
    text = plan_to_json(plan)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def load_plan(path) -> DecompositionPlan:
    with open(path, "r", encoding="ascii") as fh:
        return json_to_plan(fh.read())


def sweep_results_to_csv(results, config=None) -> str:
    """Render sweep results as CSV text.

    ``config`` is an optional mapping echoed as ``# key = value`` comment
    lines above the header so a result file records the run that made it.
    The text contains nothing run-dependent beyond ``results`` and
    ``config``: rerunning an identical sweep yields byte-identical output.
    """
    results = list(results)
    if not results:
        raise ValueError("results must not be empty")
    lines = []
    if config:
        for key, value in config.items():
            lines.append(f"# {key} = {value}")
    lines.append(CSV_HEADER)
    for r in results:
        if not isinstance(r, SweepResult):
            raise TypeError(f"expected SweepResult, got {type(r).__name__}")
        lines.append(
            ",".join(
                (
                    str(r.n),
                    str(r.m),
                    _f12(r.sigma),
                    _f12(r.fq.mean),
                    _f12(r.fq.std_error),
                    _f12(r.fu.mean),
                    _f12(r.fu.std_error),
                    str(r.fu.samples),
                )
            )
        )
    return "\n".join(lines) + "\n"


def save_sweep_results(path, results, config=None) -> None:
    text = sweep_results_to_csv(results, config)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
