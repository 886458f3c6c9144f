"""Deterministic report assembly for the command surface.

A report's canonical body is byte-identical for identical inputs: no
timestamps, no machine data; wall-clock timing is emitted separately as a
trailer on stderr by the command driver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .modules import Certificate

SIGNS_NOTE = (
    "sign convention: interior contraction inserts a vector into the first slot "
    "and composes across wedges (iota_{U^V} = iota_U o iota_V); the duality "
    "pairing <d/dx_I, dx_I> = +1 drives brackets and anchors.  Under this "
    "convention the modular field of x*d/dx^d/dy on (x, y) is -d/dy; reversing "
    "the insertion slot flips every modular/residue sign globally and nothing else."
)


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    signs_note: str | None = None

    def add(self, cert: Certificate) -> Certificate:
        self.certificates.append(cert)
        return cert

    @property
    def all_pass(self) -> bool:
        return all(c.verdict for c in self.certificates)

    def render_text(self) -> str:
        lines = [f"command: {self.command}"]
        for k, v in self.inputs.items():
            lines.append(f"input {k} = {v}")
        for k, v in self.values.items():
            lines.append(f"{k}: {v}")
        for c in self.certificates:
            verdict = "PASS" if c.verdict else "FAIL"
            lines.append(f"certificate [{c.claim}] {verdict}")
            lines.append(f"  checks: {c.anchor}")
            if c.witness:
                lines.append(f"  witness: {c.witness}")
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.signs_note:
            lines.append(f"signs: {self.signs_note}")
        return "\n".join(lines)

    def render_structured(self) -> str:
        tree = {
            "command": self.command,
            "inputs": dict(self.inputs),
            "values": dict(self.values),
            "certificates": [
                {"claim": c.claim, "anchor": c.anchor,
                 "verdict": c.verdict, "witness": c.witness}
                for c in self.certificates
            ],
            "notes": list(self.notes),
            "signs_note": self.signs_note,
        }
        return json.dumps(tree, indent=2, sort_keys=True)

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            return self.render_structured()
        return self.render_text()
