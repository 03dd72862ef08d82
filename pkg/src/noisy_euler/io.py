"""Deterministic output files and execution helpers.

CSV output follows RFC 4180 (CRLF line endings, UTF-8) with floats printed at
17 significant digits, so identical runs produce byte-identical files.  JSON
output is sorted-key, two-space indented.  ``parallel_map`` preserves input
order, so the worker count never changes results, only wall time.
"""

from __future__ import annotations

import csv
import json
import math
import numbers
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

FLOAT_FORMAT = "%.17g"

JOBS_ENV_VAR = "NOISY_EULER_JOBS"


def format_value(value) -> str:
    """One CSV cell: None -> empty, floats at 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return FLOAT_FORMAT % x
    raise TypeError(f"cannot format {type(value).__name__} as a CSV cell")


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def to_jsonable(obj):
    """Recursively convert dataclasses, numpy values, paths and non-finite
    floats into plain JSON-serializable types."""
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def write_json(path, obj) -> Path:
    path = Path(path)
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def save_manifest(
    path,
    *,
    command: str,
    config: dict,
    rng_seed: int,
    outputs,
    duration_seconds: float,
    tag: str | None = None,
) -> Path:
    """Record everything needed to replay a run (see CLI --from-manifest)."""
    from . import __version__

    doc = {
        "command": command,
        "config": to_jsonable(config),
        "rng_seed": rng_seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
        "duration_seconds": duration_seconds,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    if tag is not None:
        doc["tag"] = tag
    return write_json(path, doc)


def load_manifest(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("command", "config"):
        if not isinstance(doc, dict) or key not in doc:
            raise ValueError(f"{path}: not a run manifest (missing {key!r})")
    return doc


def fold_seed(entropy) -> int:
    """Deterministic 64-bit integer from a named seed-sequence path, for
    handing a derived seed to a component that wants a plain int."""
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def effective_jobs(requested: int | None) -> int:
    """Worker count for parallel_map; the NOISY_EULER_JOBS environment
    variable overrides any requested value."""
    env = os.environ.get(JOBS_ENV_VAR)
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{JOBS_ENV_VAR} must be an integer, got {env!r}") from None
    if requested is None:
        return 1
    return max(1, int(requested))


def parallel_map(fn, items, jobs: int = 1) -> list:
    """Order-preserving map over items; jobs > 1 uses a process pool.

    Results do not depend on jobs: items are dispatched and collected in
    input order and workers share no state.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))
