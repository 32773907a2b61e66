"""Step interpreter. The compiled kernel is used when it was built, unless
``C2O_PURE_PYTHON=1`` is set before import."""

from c2o.interp.bytecode import Code, compile_program
from c2o.interp.machine import KERNEL, Machine, RunResult, StepVerdict, run

__all__ = ["KERNEL", "Code", "Machine", "RunResult", "StepVerdict", "compile_program", "run"]
