"""Step interpreter for observer programs: state, verdicts and traces."""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from c2o.codegen.program import ObserverProgram
from c2o.codegen.types import LBool
from c2o.errors import DivisionByZero
from c2o.interp import _pykernel
from c2o.interp.bytecode import Code, compile_program
from c2o.verdict import StepVerdict, first_failure, with_vacuity

try:
    if os.environ.get("C2O_PURE_PYTHON") == "1":
        raise ImportError("pure-Python kernel forced")
    from c2o.interp import _kernel as _fast
except ImportError:
    _fast = None

KERNEL = _fast.IMPLEMENTATION if _fast is not None else _pykernel.IMPLEMENTATION


@dataclass
class RunResult:
    verdicts: list[StepVerdict]
    trap: Optional[DivisionByZero] = None
    overflow_step: Optional[int] = None
    values: list[dict[str, Any]] = field(default_factory=list)

    @property
    def first_failure(self) -> Optional[tuple[int, str]]:
        return first_failure(self.verdicts)


@functools.lru_cache(maxsize=512)
def compiled(prog: ObserverProgram) -> Code:
    return compile_program(prog)


def _pick(value, suffix: str):
    for part in suffix.split(".")[1:]:
        value = value[part]
    return value


def verdicts_from(code: Code, assume_rows, prove_rows) -> list[StepVerdict]:
    return with_vacuity([({lbl: bool(x) for lbl, x in zip(code.assume_labels, a)},
                          {lbl: bool(x) for lbl, x in zip(code.prove_labels, p)})
                         for a, p in zip(assume_rows, prove_rows)])


class Machine:
    """One executable instance of an observer program.

    ``exact`` runs with unbounded integers and rational reals; ``instrument``
    tracks pre-variable defaults and same-step reads. Both force the
    pure-Python kernel.
    """

    def __init__(self, prog: ObserverProgram, *, exact: bool = False,
                 instrument: bool = False, kernel: Optional[str] = None):
        self.prog = prog
        self.code = code = compiled(prog)
        self.exact = exact
        self.instrument = instrument
        want = kernel or ("python" if (exact or instrument or _fast is None) else KERNEL)
        if want == "cython" and _fast is None:
            raise RuntimeError("compiled kernel is not available")
        impl = _fast if want == "cython" else _pykernel
        self.kernel = impl.IMPLEMENTATION
        it = code.int_type
        single = code.float_type is not None and code.float_type.precision == "single"
        kw = {"exact": exact, "instrument": instrument} if impl is _pykernel else {}
        self.core = impl.Core(code.flat(), code.nregs, code.kinds, it.width, it.signed, single,
                              len(code.assume_labels), len(code.prove_labels), **kw)
        for reg, value in code.consts:
            self.core.set(reg, value)
        self.in_regs = [leaf.reg for leaf in code.params]
        self.named = {leaf.path: leaf for leaf in code.params + code.locals}
        self.named.update((leaf.path, leaf) for leaf, _ in code.persistents)
        if instrument:
            stable = [r for r, _ in code.consts] + self.in_regs
            stable += [leaf.reg for leaf, _ in code.persistents]
            self.core.mark_stable(stable)
        self._vacuous = False
        self.reset()

    # -- state ------------------------------------------------------------

    def reset(self, defaults: Optional[Mapping[str, Any]] = None) -> None:
        """Restore the first-step flag and every pre-variable default.

        ``defaults`` overrides individual persistent leaves by dotted path.
        """
        defaults = defaults or {}
        ft = self.code.first_time
        for leaf, value in self.code.persistents:
            self.core.set(leaf.reg, defaults.get(leaf.path, value))
            if self.instrument:
                self.core.set_taint(leaf.reg, leaf.reg != ft)
        self.core.clear_overflow()
        self._vacuous = False
        self.step_index = 0

    def get_state(self):
        return (self.core.snapshot(), self._vacuous, self.step_index)

    def set_state(self, state) -> None:
        snap, self._vacuous, self.step_index = state
        self.core.restore(snap)

    @property
    def overflowed(self) -> bool:
        return self.core.overflow

    @property
    def violations(self) -> list[tuple[str, int]]:
        return list(getattr(self.core, "violations", []))

    # -- execution --------------------------------------------------------

    def row(self, inputs: Mapping[str, Any]) -> list:
        return [_pick(inputs[leaf.path.split(".")[0]], leaf.path) for leaf in self.code.params]

    def step(self, inputs: Mapping[str, Any]) -> StepVerdict:
        for reg, v in zip(self.in_regs, self.row(inputs)):
            self.core.set(reg, v)
        trap = self.core.exec_step()
        if trap >= 0:
            raise DivisionByZero(self.step_index, self.code.where[trap])
        a, p = self.core.verdicts()
        v = verdicts_from(self.code, [a], [p])[0]
        if self._vacuous:
            v = StepVerdict(v.assumes, v.proves, True)
        self._vacuous = v.vacuous
        self.step_index += 1
        return v

    def value(self, name: str):
        """Current value of a parameter, local or persistent (records as dicts)."""
        if name in self.named:
            return self._scalar(self.named[name])
        prefix = name + "."
        leaves = [leaf for path, leaf in self.named.items() if path.startswith(prefix)]
        if not leaves:
            raise KeyError(name)
        out: dict = {}
        for leaf in leaves:
            node = out
            parts = leaf.path[len(prefix):].split(".")
            for part in parts[:-1]:
                node = node.setdefault(part, {})
            node[parts[-1]] = self._scalar(leaf)
        return out

    def _scalar(self, leaf):
        v = self.core.get(leaf.reg)
        return bool(v) if isinstance(leaf.ty, LBool) else v

    def execute(self, steps: Sequence[Mapping[str, Any]], record: Sequence[str] = ()
                ) -> RunResult:
        """Run from the current state; stops (without raising) at a trap."""
        rec_leaves = [self.named[p] for p in record]
        rows = [self.row(s) for s in steps]
        done, trap, first_ov, arows, prows, recs = self.core.run(
            self.in_regs, rows, [leaf.reg for leaf in rec_leaves])
        verdicts = verdicts_from(self.code, arows, prows)
        if self._vacuous:
            verdicts = [StepVerdict(v.assumes, v.proves, True) for v in verdicts]
        if verdicts:
            self._vacuous = verdicts[-1].vacuous
        base = self.step_index
        self.step_index += done
        values = [{leaf.path: (bool(x) if isinstance(leaf.ty, LBool) else x)
                   for leaf, x in zip(rec_leaves, row)} for row in recs]
        err = DivisionByZero(base + done, self.code.where[trap]) if trap >= 0 else None
        return RunResult(verdicts, err, None if first_ov < 0 else base + first_ov, values)

    def run(self, steps: Sequence[Mapping[str, Any]]) -> list[StepVerdict]:
        """Reset, then run the whole trace; raises DivisionByZero on a trap."""
        self.reset()
        res = self.execute(steps)
        if res.trap is not None:
            raise res.trap
        return res.verdicts


def run(prog: ObserverProgram, steps: Sequence[Mapping[str, Any]], **kw) -> list[StepVerdict]:
    return Machine(prog, **kw).run(steps)
