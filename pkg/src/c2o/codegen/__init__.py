"""Observer code generation: type lowering and the imperative step program."""

from c2o.codegen.lower import ObserverInterface, Param, interface_of, lower
from c2o.codegen.program import ObserverProgram, ProgramError, verify_program
from c2o.codegen.types import TypeConfig

__all__ = [
    "ObserverInterface",
    "ObserverProgram",
    "Param",
    "ProgramError",
    "TypeConfig",
    "interface_of",
    "lower",
    "verify_program",
]
