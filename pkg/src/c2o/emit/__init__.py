"""Observer program emitters: OSL text, JSON and MATLAB-compatible text."""

from __future__ import annotations

from enum import Enum

from c2o.codegen.program import ObserverProgram
from c2o.emit.json_ import emit_json, parse_json
from c2o.emit.matlab import emit_matlab
from c2o.emit.osl import emit_osl, format_oexpr, parse_osl


class EmitTarget(str, Enum):
    OSL = "osl"
    JSON = "json"
    MATLAB = "matlab"

    @property
    def extension(self) -> str:
        return {"osl": ".osl", "json": ".osl.json", "matlab": ".m"}[self.value]


def emit(p: ObserverProgram, target: EmitTarget | str) -> str:
    target = EmitTarget(target)
    if target is EmitTarget.OSL:
        return emit_osl(p)
    if target is EmitTarget.JSON:
        return emit_json(p)
    return emit_matlab(p)


__all__ = ["EmitTarget", "emit", "emit_json", "emit_matlab", "emit_osl", "format_oexpr",
           "parse_json", "parse_osl"]
