"""JSON file formats for operators, state sets and reports.

Complex numbers are ``[re, im]`` pairs; matrices are row-major nested lists
in the ``i * dB + j`` basis order.  Operator files look like::

    {"dA": 2, "dB": 2, "kind": "pure", "data": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}

with ``kind`` one of ``density``, ``pure``, ``projector``, ``subspace``
(``subspace`` data is the ``dA*dB``-by-r matrix of orthonormal columns).
State-set files hold ``{"dA", "dB", "states": [{"label", "kind", "data"}]}``
where each state is ``density`` or ``pure``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from .bipartite import BipartiteOperator, Subspace, support_projector
from .discrimination import StateSet
from .linalg import eigvalsh, is_hermitian

KINDS = ("density", "pure", "projector", "subspace")


class FormatError(ValueError):
    pass


def encode_array(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [encode_array(row) for row in a]


def decode_array(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"data is not a nested array of [re, im] pairs: {exc}") from None
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise FormatError(f"data must end in [re, im] pairs, got array shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass
class OperatorFile:
    dA: int
    dB: int
    kind: str
    data: np.ndarray  # vector for pure, matrix otherwise

    def to_json(self) -> dict:
        return {"dA": self.dA, "dB": self.dB, "kind": self.kind, "data": encode_array(self.data)}

    def operator(self) -> BipartiteOperator:
        if self.kind == "pure":
            return BipartiteOperator.projector(self.data, self.dA, self.dB)
        if self.kind == "subspace":
            return BipartiteOperator(self.dA, self.dB, self.data @ self.data.conj().T)
        return BipartiteOperator(self.dA, self.dB, self.data)

    def subspace(self) -> Subspace:
        """Subspace described by the file: the span, or the support of the operator."""
        if self.kind == "subspace":
            return Subspace(self.dA, self.dB, self.data)
        if self.kind == "pure":
            return Subspace.span(self.data, self.dA, self.dB)
        return support_projector(self.operator())


def _validate(kind, dA, dB, data, where="") -> np.ndarray:
    n = dA * dB
    if kind not in KINDS:
        raise FormatError(f"{where}unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind == "pure":
        if data.shape != (n,):
            raise FormatError(f"{where}pure state needs {n} amplitudes, got shape {data.shape}")
        nrm = np.linalg.norm(data)
        if abs(nrm - 1.0) > 1e-10:
            raise FormatError(f"{where}pure state has norm {nrm:.12g}, expected 1")
        return data
    if kind == "subspace":
        if data.ndim != 2 or data.shape[0] != n:
            raise FormatError(f"{where}subspace basis must be {n} x r, got shape {data.shape}")
        if np.max(np.abs(data.conj().T @ data - np.eye(data.shape[1]))) > 1e-10:
            raise FormatError(f"{where}subspace columns are not orthonormal")
        return data
    if data.shape != (n, n):
        raise FormatError(f"{where}{kind} must be {n} x {n}, got shape {data.shape}")
    if not is_hermitian(data, 1e-10):
        raise FormatError(f"{where}{kind} is not Hermitian")
    w = eigvalsh(data)
    if w[0] < -1e-9:
        raise FormatError(f"{where}{kind} is not positive semidefinite (lambda_min = {w[0]:.3e})")
    if kind == "density" and abs(np.trace(data).real - 1.0) > 1e-10:
        raise FormatError(f"{where}density operator has trace {np.trace(data).real:.12g}, expected 1")
    if kind == "projector" and np.max(np.abs(data @ data - data)) > 1e-9:
        raise FormatError(f"{where}projector is not idempotent")
    return data


def _dims(obj, where=""):
    try:
        dA, dB = int(obj["dA"]), int(obj["dB"])
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"{where}missing or non-integer dA/dB") from None
    if dA < 1 or dB < 1:
        raise FormatError(f"{where}dimensions must be positive")
    return dA, dB


def parse_operator(obj) -> OperatorFile:
    if not isinstance(obj, dict):
        raise FormatError("operator file must hold a JSON object")
    dA, dB = _dims(obj)
    kind = obj.get("kind")
    if "data" not in obj:
        raise FormatError("operator file has no 'data' field")
    data = _validate(kind, dA, dB, decode_array(obj["data"]))
    return OperatorFile(dA, dB, kind, data)


def parse_state_set(obj) -> StateSet:
    if not isinstance(obj, dict) or "states" not in obj:
        raise FormatError("state-set file must be an object with a 'states' list")
    dA, dB = _dims(obj)
    states, labels = [], []
    for i, st in enumerate(obj["states"]):
        where = f"state {i}: "
        kind = st.get("kind")
        if kind not in ("density", "pure"):
            raise FormatError(f"{where}kind must be density or pure, got {kind!r}")
        data = _validate(kind, dA, dB, decode_array(st.get("data")), where)
        states.append(OperatorFile(dA, dB, kind, data).operator())
        labels.append(str(st.get("label", f"rho_{i + 1}")))
    return StateSet(dA, dB, states, labels, dict(obj.get("metadata", {})))


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None


def load_operator(path) -> OperatorFile:
    return parse_operator(read_json(path))


def load_state_set(path) -> StateSet:
    return parse_state_set(read_json(path))


def state_set_json(S: StateSet, pure_vectors=None) -> dict:
    """Serialize a state set; rank-one states are written as pure vectors when given."""
    out = []
    for i, (label, rho) in enumerate(zip(S.labels, S.states)):
        if pure_vectors is not None and pure_vectors[i] is not None:
            out.append({"label": label, "kind": "pure", "data": encode_array(pure_vectors[i])})
        else:
            out.append({"label": label, "kind": "density", "data": encode_array(rho.matrix)})
    return {"dA": S.dA, "dB": S.dB, "states": out, "metadata": S.metadata}


def write_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def make_report(command: str, inputs, tolerances: dict, verdict: str, evidence: dict, chain=None,
                diagnostics=None, timestamp: str | None = None) -> dict:
    return {
        "command": command,
        "inputs_digest": digest(inputs),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tolerances": tolerances,
        "verdict": verdict,
        "evidence": evidence,
        "inference_chain": list(chain or []),
        "diagnostics": diagnostics or {},
    }


def report_schema() -> dict:
    return json.loads(resources.files("pptwitness").joinpath("report_schema.json").read_text())
