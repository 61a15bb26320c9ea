"""Shared JSON emission: 6 significant digits by default so output stays
readable and byte-stable, full precision behind a flag."""

from __future__ import annotations

import json

DEFAULT_SIG_DIGITS = 6


def round_sig(value, sig_digits: int = DEFAULT_SIG_DIGITS):
    """Recursively round every float to the given significant digits."""
    if isinstance(value, float):
        return float(f"{value:.{sig_digits}g}")
    if isinstance(value, dict):
        return {k: round_sig(v, sig_digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, sig_digits) for v in value]
    return value


def dumps(obj, full_precision: bool = False, indent: int | None = 2) -> str:
    if not full_precision:
        obj = round_sig(obj)
    return json.dumps(obj, indent=indent, allow_nan=False)


def dump_path(obj, path: str, full_precision: bool = False):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, full_precision) + "\n")


def load_path(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def result_payload(result, attribution: dict | None = None,
                   sig_digits: int | None = None) -> dict:
    """InferenceResult -> result-file shape: opinions + diagnostics +
    attribution array (one entry per target)."""
    payload = {
        "opinions": {k: v.to_dict() for k, v in result.opinions.items()},
        "diagnostics": result.diagnostics,
        "attribution": [
            {"target": target,
             "sources": [{"source": lab, "delta_u": du} for lab, du in ranked]}
            for target, ranked in (attribution or {}).items()
        ],
    }
    if sig_digits is not None:
        payload = round_sig(payload, sig_digits)
    return payload
