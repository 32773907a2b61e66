"""Run manifests and the JSON/text reports written by the command line."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Sequence

from c2o import __version__
from c2o.codegen import TypeConfig


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Everything needed to repeat a run: tool version, types, inputs, seed, argv."""

    command: str
    config: dict
    inputs: dict[str, str]
    argv: list[str]
    seed: Optional[int] = None
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @classmethod
    def create(cls, command: str, cfg: TypeConfig, files: Sequence[str], argv: Sequence[str],
               seed: Optional[int] = None) -> "RunManifest":
        return cls(command, cfg.as_dict(), {str(f): sha256_file(f) for f in files},
                   list(argv), seed)

    def to_dict(self) -> dict:
        return asdict(self)


def report_json(manifest: RunManifest, result: Any) -> str:
    return json.dumps({"manifest": manifest.to_dict(), "result": result}, indent=2,
                      sort_keys=False) + "\n"


def verify_text(name: str, result: dict) -> str:
    done = f"{result['explored']} traces"
    if result["status"] == "fail":
        done += " passed before the counterexample"
    lines = [f"component {name}: {result['status'].upper()} "
             f"({result['mode']}, depth {result['depth']}, {done})"]
    for label, status in result["guarantees"].items():
        lines.append(f"  {status:<12} {label}")
    cex = result.get("counterexample")
    if cex:
        lines.append(f"counterexample: {cex['label']!r} fails at step {cex['step']}")
        lines.append(cex["table"].rstrip("\n"))
    return "\n".join(lines) + "\n"


def diff_text(result: dict) -> str:
    lines = [f"contract {result['contract']}: {result['trials']} trials, depth <= "
             f"{result['depth']}, seed {result['seed']}"]
    for k, v in result["counts"].items():
        lines.append(f"  {k:<20} {v}")
    if result["agreeing_traps"]:
        lines.append(f"  {'agreeing traps':<20} {result['agreeing_traps']}")
    for ex in result["examples"]:
        lines.append(f"  [{ex['kind']}] trial {ex['trial']} step {ex['step']}: {ex['detail']}")
    return "\n".join(lines) + "\n"
