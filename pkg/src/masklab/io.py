"""JSON encoding of states, maskers and masking reports.

Complex numbers are stored as ``[re, im]`` pairs; matrices as row-major lists
of rows. Floats are written with ``repr`` precision, so files round-trip
bit-for-bit.
"""

import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .linalg import as_density
from .maskers import Masker

log = logging.getLogger(__name__)

FORMAT_VERSION = "1"
RENORM_SILENT = 1e-10
RENORM_LIMIT = 1e-8


class InputError(ValueError):
    """A state, masker or report file is malformed."""


def encode_array(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [encode_array(x) for x in a]


def decode_array(obj, ndim=None):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a complex array: {exc}") from None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise InputError("complex entries must be [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if ndim is not None and out.ndim != ndim:
        raise InputError(f"expected a {ndim}-D array, got {out.ndim}-D")
    if not np.all(np.isfinite(out)):
        raise InputError("array has non-finite entries")
    return out


def write_json(path, payload):
    """Write ``payload`` atomically (temp file in the target directory + rename)."""
    path = Path(path)
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


# --------------------------------------------------------------------------- #
#                                 State files                                 #
# --------------------------------------------------------------------------- #


def state_file_payload(kind, states, d_a, d_b=None):
    if kind not in ("pure", "mixed"):
        raise ValueError(f"state kind must be 'pure' or 'mixed', got {kind!r}")
    return {
        "version": FORMAT_VERSION,
        "kind": kind,
        "dims": {"d_a": int(d_a), "d_b": None if d_b is None else int(d_b)},
        "states": [encode_array(s) for s in states],
    }


def _normalize_pure(psi, index):
    norm = np.linalg.norm(psi)
    err = abs(norm - 1)
    if err > RENORM_LIMIT:
        raise InputError(f"state {index} has norm {norm!r}")
    if err > RENORM_SILENT:
        log.warning("state %d renormalized (norm error %.3g)", index, err)
    return psi / norm


def parse_state_file(data):
    """Validate a decoded state file; returns ``(kind, d_a, d_b, states)``."""
    try:
        kind = data["kind"]
        d_a = int(data["dims"]["d_a"])
        d_b = data["dims"].get("d_b")
        raw = data["states"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state file: {exc!r}") from None
    if kind not in ("pure", "mixed"):
        raise InputError(f"unknown state kind {kind!r}")
    if not isinstance(raw, list) or not raw:
        raise InputError("state file has no states")
    states = []
    for i, entry in enumerate(raw):
        if kind == "pure":
            psi = decode_array(entry, ndim=1)
            if psi.size != d_a:
                raise InputError(f"state {i} has dimension {psi.size}, expected {d_a}")
            states.append(_normalize_pure(psi, i))
        else:
            rho = decode_array(entry, ndim=2)
            rho = (rho + rho.conj().T) / 2
            try:
                states.append(as_density(rho, d_a, tol=RENORM_LIMIT))
            except ValueError as exc:
                raise InputError(f"state {i}: {exc}") from None
    return kind, d_a, d_b, states


def load_state_file(path):
    return parse_state_file(read_json(path))


# --------------------------------------------------------------------------- #
#                            Maskers and reports                              #
# --------------------------------------------------------------------------- #


def masker_descriptor(s):
    return {
        "kind": s.kind,
        "d_a": s.d_a,
        "d_b": s.d_b,
        "parameters": dict(s.params),
        "matrix": encode_array(s.matrix),
        "basis_a": None if s.basis_a is None else encode_array(s.basis_a),
        "basis_b": None if s.basis_b is None else encode_array(s.basis_b),
    }


def parse_masker(desc):
    try:
        basis_a = desc.get("basis_a")
        basis_b = desc.get("basis_b")
        return Masker(
            int(desc["d_a"]), int(desc["d_b"]), decode_array(desc["matrix"], ndim=2),
            desc.get("kind", "Custom"),
            None if basis_a is None else decode_array(basis_a, ndim=2),
            None if basis_b is None else decode_array(basis_b, ndim=2),
            dict(desc.get("parameters") or {}),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed masker descriptor: {exc!r}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def masker_file_payload(s):
    return {"version": FORMAT_VERSION, "masker": masker_descriptor(s)}


def load_masker(path):
    data = read_json(path)
    if not isinstance(data, dict) or "masker" not in data:
        raise InputError(f"{path}: no masker descriptor")
    return parse_masker(data["masker"])


def report_payload(report, masker=None, state_kind="pure"):
    return {
        "version": FORMAT_VERSION,
        "state_kind": state_kind,
        "verdict": report.verdict.value,
        "tolerance": report.tolerance,
        "max_deviation": report.max_deviation,
        "reference_marginal_a": encode_array(report.reference_marginal_a),
        "reference_marginal_b": encode_array(report.reference_marginal_b),
        "per_state_deviations": [
            {"index": i, "dev_a": da, "dev_b": db}
            for i, da, db in report.per_state_deviations
        ],
        "masker": None if masker is None else masker_descriptor(masker),
    }


def parse_report(data):
    """Decode a report file back into arrays (inverse of :func:`report_payload`)."""
    try:
        out = dict(data)
        out["reference_marginal_a"] = decode_array(data["reference_marginal_a"], 2)
        out["reference_marginal_b"] = decode_array(data["reference_marginal_b"], 2)
        out["per_state_deviations"] = [
            (int(d["index"]), float(d["dev_a"]), float(d["dev_b"]))
            for d in data["per_state_deviations"]
        ]
        if data.get("masker") is not None:
            out["masker"] = parse_masker(data["masker"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed report: {exc!r}") from None
    return out


def load_report(path):
    return parse_report(read_json(path))
