"""Machine-readable verification certificates and bundles."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import jsonschema


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDECIDED = "undecided"


CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["claim", "inputs", "status", "witness", "precision_bits"],
    "properties": {
        "claim": {"type": "string"},
        "inputs": {"type": "object"},
        "status": {"enum": ["pass", "fail", "undecided"]},
        "witness": {},
        "precision_bits": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

BUNDLE_SCHEMA = {
    "type": "object",
    "required": ["tool", "version", "config", "status", "certificates"],
    "properties": {
        "tool": {"type": "string"},
        "version": {"type": "string"},
        "config": {"type": "object"},
        "status": {"enum": ["pass", "fail", "undecided"]},
        "certificates": {"type": "array", "items": CERTIFICATE_SCHEMA},
        "timestamp": {"type": "string"},
    },
    "additionalProperties": False,
}


def to_jsonable(value: Any):
    """Exact, deterministic JSON encoding (rationals as strings)."""
    from .numfield import NFElement
    from .linalg import Matrix

    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, NFElement):
        return [str(c) for c in value.coeffs]
    if isinstance(value, Matrix):
        return [[[str(c) for c in v.coeffs] for v in r] for r in value.rows]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class Certificate:
    claim: str
    inputs: dict
    status: Status
    witness: Any = None
    precision_bits: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        data = {
            "claim": self.claim,
            "inputs": to_jsonable(self.inputs),
            "status": Status(self.status).value,
            "witness": to_jsonable(self.witness),
            "precision_bits": self.precision_bits,
        }
        jsonschema.validate(data, CERTIFICATE_SCHEMA)
        return data


def combine_status(statuses) -> Status:
    statuses = [Status(s) for s in statuses]
    if any(s == Status.FAIL for s in statuses):
        return Status.FAIL
    if any(s == Status.UNDECIDED for s in statuses):
        return Status.UNDECIDED
    return Status.PASS


@dataclass
class CertificateBundle:
    config: dict
    certificates: list[Certificate] = field(default_factory=list)
    tool: str = "crford"
    version: str = "0.1.0"
    timestamp: str | None = None

    def add(self, cert: Certificate) -> Certificate:
        self.certificates.append(cert)
        return cert

    @property
    def status(self) -> Status:
        return combine_status(c.status for c in self.certificates)

    def to_json(self) -> dict:
        data = {
            "tool": self.tool,
            "version": self.version,
            "config": to_jsonable(self.config),
            "status": self.status.value,
            "certificates": [c.to_json() for c in self.certificates],
        }
        if self.timestamp is not None:
            data["timestamp"] = self.timestamp
        jsonschema.validate(data, BUNDLE_SCHEMA)
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
