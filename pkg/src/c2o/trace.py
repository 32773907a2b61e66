"""Input traces and their CSV / JSON file formats.

A trace is a list of steps; each step maps a top-level signal name to a
value: ``bool``, ``int``, ``Fraction`` (reals) or a dict for records.
CSV headers are dotted leaf paths (``Sync.Active``); booleans are written
``true``/``false``; reals as the shortest decimal that round-trips.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from c2o.frontend import ast as A

Interface = Sequence[tuple[str, A.SemType]]


def leaves(ty: A.SemType, prefix: str) -> list[tuple[str, A.SemType]]:
    if isinstance(ty, A.RecordType):
        out = []
        for f, t in ty.fields:
            out.extend(leaves(t, f"{prefix}.{f}"))
        return out
    return [(prefix, ty)]


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return f"{v.numerator}.0"
        f = float(v)
        if Fraction(f) == v:
            return repr(f)
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    raise TypeError(f"cannot format {v!r}")


def parse_value(text: str, ty: A.SemType) -> Any:
    text = text.strip()
    if isinstance(ty, A.BoolType):
        if text not in ("true", "false"):
            raise ValueError(f"expected true/false, got {text!r}")
        return text == "true"
    if isinstance(ty, A.IntType):
        return int(text)
    if isinstance(ty, A.RealType):
        return Fraction(text)
    raise TypeError(f"no scalar parser for {ty}")


def _get(value, path: str):
    for part in path.split(".")[1:]:
        value = value[part]
    return value


def _put(step: dict, path: str, value) -> None:
    parts = path.split(".")
    node = step
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def _to_json_value(v):
    if isinstance(v, dict):
        return {k: _to_json_value(x) for k, x in v.items()}
    if isinstance(v, Fraction):
        return format_value(v)
    return v


def _from_json_value(v, ty: A.SemType):
    if isinstance(ty, A.RecordType):
        return {f: _from_json_value(v[f], t) for f, t in ty.fields}
    if isinstance(ty, A.BoolType):
        if not isinstance(v, bool):
            raise ValueError(f"expected boolean, got {v!r}")
        return v
    if isinstance(ty, A.IntType):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError(f"expected integer, got {v!r}")
        return v
    return Fraction(str(v)) if not isinstance(v, str) else Fraction(v)


@dataclass
class Trace:
    steps: list[dict[str, Any]]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def project(self, names: Iterable[str]) -> "Trace":
        keep = list(names)
        return Trace([{n: s[n] for n in keep} for s in self.steps])

    def to_csv(self, interface: Interface) -> str:
        paths = [p for n, t in interface for p, _ in leaves(t, n)]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(paths)
        for s in self.steps:
            w.writerow([format_value(_get(s[p.split(".")[0]], p)) for p in paths])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, interface: Interface) -> "Trace":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty trace file")
        header = [h.strip() for h in rows[0]]
        types = {p: t for n, ty in interface for p, t in leaves(ty, n)}
        missing = [p for p in types if p not in header]
        extra = [h for h in header if h not in types]
        if missing or extra:
            raise ValueError(f"trace columns do not match interface: missing {missing}, "
                             f"unexpected {extra}")
        steps = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
            step: dict = {}
            for h, cell in zip(header, row):
                try:
                    _put(step, h, parse_value(cell, types[h]))
                except ValueError as e:
                    raise ValueError(f"line {lineno}, column {h}: {e}") from None
            steps.append(step)
        return cls(steps)

    def to_json(self) -> str:
        return json.dumps({"steps": [{k: _to_json_value(v) for k, v in s.items()}
                                     for s in self.steps]}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, interface: Interface) -> "Trace":
        doc = json.loads(text)
        return cls([{n: _from_json_value(s[n], t) for n, t in interface} for s in doc["steps"]])
