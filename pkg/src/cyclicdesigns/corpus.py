"""Design files, corpus manifests and tamper checks.

A design file is JSON lines: a header object followed by one k-integer array
per cycle.  Difference systems keep starter order and orientation (class
variants depend on it) and are only rotated so that 0 comes first; cycle
systems are written as sorted canonical forms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, Union

from .core import Cycle, CycleSystem, DesignError, DifferenceSystem, expand, validate_cycle_system

Design = Union[DifferenceSystem, CycleSystem]

ROLE_DS = "difference-system"
ROLE_CS = "cycle-system"
MANIFEST_NAME = "manifest.json"


def _plain(x):
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _zero_first(c: Cycle) -> list[int]:
    j = c.vertices.index(0)
    return list(c.vertices[j:] + c.vertices[:j])


def dump_design(design: Design) -> str:
    if isinstance(design, DifferenceSystem):
        header = {k: _plain(v) for k, v in design.meta.items() if k not in ("v", "k", "role")}
        header.update(v=design.v, k=design.k, role=ROLE_DS)
        rows = [_zero_first(c) for c in design.starters]
    elif isinstance(design, CycleSystem):
        header = {"v": design.v, "k": design.k, "role": ROLE_CS}
        rows = [list(c.key) for c in design.sorted_cycles()]
    else:
        raise TypeError(f"cannot serialise {type(design).__name__}")
    return "\n".join([_dumps(header)] + [_dumps(r) for r in rows]) + "\n"


def load_design(text: str) -> Design:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DesignError("empty design file")
    header = json.loads(lines[0])
    if not isinstance(header, dict) or not {"v", "k", "role"} <= header.keys():
        raise DesignError("first line must be a header object with v, k and role")
    v, k, role = header["v"], header["k"], header["role"]
    cycles = []
    for no, ln in enumerate(lines[1:], start=2):
        row = json.loads(ln)
        if not isinstance(row, list) or len(row) != k or not all(isinstance(x, int) for x in row):
            raise DesignError(f"line {no}: expected an array of {k} integers")
        cycles.append(Cycle(row, v))
    if role == ROLE_DS:
        meta = {key: val for key, val in header.items() if key not in ("v", "k", "role")}
        return DifferenceSystem(v, k, tuple(cycles), meta)
    if role == ROLE_CS:
        return CycleSystem(v, k, frozenset(cycles))
    raise DesignError(f"unknown role {role!r}")


def check_design(design: Design) -> None:
    if isinstance(design, DifferenceSystem):
        report = design.coverage()
        if not report:
            raise DesignError(f"invalid difference system: {report.summary()}")
    else:
        verdict = validate_cycle_system(design)
        if not verdict:
            raise DesignError(f"invalid cycle system: {verdict.reason}")


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_design(path: str | Path, design: Design) -> str:
    """Write, re-read and re-validate; returns the content hash."""
    path = Path(path)
    text = dump_design(design)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    back = path.read_text()
    if back != text or dump_design(load_design(back)) != text:
        raise DesignError(f"{path}: round trip is not exact")
    check_design(load_design(back))
    return sha256_text(text)


def read_design(path: str | Path, validate: bool = True) -> Design:
    design = load_design(Path(path).read_text())
    if validate:
        check_design(design)
    return design


def as_cycle_system(design: Design) -> CycleSystem:
    return expand(design) if isinstance(design, DifferenceSystem) else design


@dataclass
class CorpusManifest:
    v: int
    k: int
    recipe: str
    sequence: list = field(default_factory=list)
    variants: list = field(default_factory=list)  # variant strings, aligned with files
    files: list = field(default_factory=list)  # relative paths
    hashes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CorpusManifest":
        return cls(**json.loads(text))


def write_manifest(directory: str | Path, manifest: CorpusManifest) -> Path:
    path = Path(directory) / MANIFEST_NAME
    path.write_text(manifest.to_json())
    return path


def load_manifest(directory: str | Path) -> CorpusManifest:
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {directory}")
    return CorpusManifest.from_json(path.read_text())


def verify_manifest(directory: str | Path) -> list[str]:
    """Problems found (empty when every file exists, parses, validates and matches its hash)."""
    directory = Path(directory)
    m = load_manifest(directory)
    problems = []
    if len(m.files) != len(m.hashes):
        problems.append("files and hashes differ in length")
    for name, digest in zip(m.files, m.hashes):
        path = directory / name
        if not path.exists():
            problems.append(f"{name}: missing")
            continue
        text = path.read_text()
        if sha256_text(text) != digest:
            problems.append(f"{name}: hash mismatch")
            continue
        try:
            design = load_design(text)
            check_design(design)
        except (DesignError, ValueError) as exc:
            problems.append(f"{name}: {exc}")
            continue
        if (design.v, design.k) != (m.v, m.k):
            problems.append(f"{name}: has (v,k)=({design.v},{design.k}), manifest says ({m.v},{m.k})")
    return problems


def iter_corpus(directory: str | Path) -> Iterator[CycleSystem]:
    problems = verify_manifest(directory)
    if problems:
        raise DesignError("corpus failed verification: " + "; ".join(problems))
    m = load_manifest(directory)
    for name in m.files:
        yield as_cycle_system(read_design(Path(directory) / name, validate=False))
