"""End-to-end compilation: source text to observer (or design-model) program."""

from __future__ import annotations

from dataclasses import dataclass

from c2o.codegen import ObserverProgram, TypeConfig, lower
from c2o.frontend import Contract, parse, require_wellformed
from c2o.ir import DataflowIR, normalize


@dataclass(frozen=True)
class Compiled:
    contract: Contract
    ir: DataflowIR
    program: ObserverProgram
    cfg: TypeConfig


def compile_contract(contract: Contract, cfg: TypeConfig, role: str = "observer") -> Compiled:
    require_wellformed(contract)
    ir = normalize(contract, role)
    return Compiled(contract, ir, lower(ir, cfg), cfg)


def compile_source(source: str, cfg: TypeConfig | None = None,
                   role: str = "observer") -> Compiled:
    return compile_contract(parse(source), cfg or TypeConfig(), role)
