"""Pure-Python step kernel.

Same interface as the compiled ``_kernel`` extension, plus two modes the
extension does not offer: ``exact`` (unbounded integers, rational floats)
and ``instrument`` (default-value taint and read-before-write tracking).
"""

from __future__ import annotations

from fractions import Fraction

from c2o.arith import int_div, int_mod, to_single
from c2o.interp.bytecode import (AND, ASSUME, FADD, FDIV, FEQ, FGE, FGT, FLE, FLT, FMUL, FNE,
                                 FNEG, FSUB, IADD, IDIV, IEQ, IGE, IGT, ILE, ILT, IMOD, IMPL,
                                 IMUL, INE, INEG, ISUB, JMP, JNZ, JZ, MOVF, MOVI, NOT, PROVE,
                                 SELF, SELI)

IMPLEMENTATION = "python"

_INT_BIN = {
    IADD: lambda a, b: a + b,
    ISUB: lambda a, b: a - b,
    IMUL: lambda a, b: a * b,
}
_CMP = {
    ILT: lambda a, b: a < b, ILE: lambda a, b: a <= b, IGT: lambda a, b: a > b,
    IGE: lambda a, b: a >= b, IEQ: lambda a, b: a == b, INE: lambda a, b: a != b,
    FLT: lambda a, b: a < b, FLE: lambda a, b: a <= b, FGT: lambda a, b: a > b,
    FGE: lambda a, b: a >= b, FEQ: lambda a, b: a == b, FNE: lambda a, b: a != b,
}


class Core:
    def __init__(self, flat, nregs, kinds, width, signed, single, n_assume, n_prove,
                 exact=False, instrument=False):
        self.code = [tuple(flat[i:i + 5]) for i in range(0, len(flat), 5)]
        self.nregs = nregs
        self.kinds = list(kinds)
        self.width = width
        self.signed = signed
        self.single = bool(single)
        self.exact = exact
        self.instrument = instrument
        self.regs = [Fraction(0) if exact and k else (0.0 if k else 0) for k in self.kinds]
        self.assumes = [1] * n_assume
        self.proves = [1] * n_prove
        self.overflow = False
        self.mask = (1 << width) - 1
        self.sign_bit = 1 << (width - 1)
        # instrumentation state
        self.taint = [False] * nregs
        self.stable = set()  # registers valid at step entry (consts, params, persistents)
        self.violations: list[tuple[str, int]] = []

    # -- register access --------------------------------------------------

    def set(self, reg, value):
        if self.kinds[reg]:
            if self.exact:
                value = Fraction(value)
            else:
                value = float(value)
                if self.single:
                    value = to_single(value)
        else:
            value = int(value)
        self.regs[reg] = value

    def get(self, reg):
        return self.regs[reg]

    def set_taint(self, reg, flag):
        self.taint[reg] = bool(flag)

    def mark_stable(self, regs):
        self.stable.update(regs)

    def snapshot(self):
        return (list(self.regs), self.overflow, list(self.taint))

    def restore(self, snap):
        regs, ov, taint = snap
        self.regs[:] = regs
        self.overflow = ov
        self.taint[:] = taint

    def clear_overflow(self):
        self.overflow = False

    def verdicts(self):
        return tuple(self.assumes), tuple(self.proves)

    # -- execution --------------------------------------------------------

    def _wrap(self, v):
        if self.exact:
            return v
        w = v & self.mask
        if self.signed and w & self.sign_bit:
            w -= self.mask + 1
        if w != v:
            self.overflow = True
        return w

    def _fl(self, v):
        if self.exact:
            return v
        return to_single(v) if self.single else v

    def exec_step(self) -> int:
        """Run the program once. Returns -1, or the pc of a division-by-zero trap."""
        if self.instrument:
            return self._exec_instrumented()
        r = self.regs
        code = self.code
        n = len(code)
        pc = 0
        wrap = self._wrap
        fl = self._fl
        while pc < n:
            op, d, a, b, c = code[pc]
            pc += 1
            if op == MOVI or op == MOVF:
                r[d] = r[a]
            elif op in _CMP:
                r[d] = 1 if _CMP[op](r[a], r[b]) else 0
            elif op == SELI or op == SELF:
                r[d] = r[b] if r[a] else r[c]
            elif op in _INT_BIN:
                r[d] = wrap(_INT_BIN[op](r[a], r[b]))
            elif op == JZ:
                if not r[a]:
                    pc = b
            elif op == JNZ:
                if r[a]:
                    pc = b
            elif op == NOT:
                r[d] = 0 if r[a] else 1
            elif op == AND:
                r[d] = 1 if (r[a] and r[b]) else 0
            elif op == IMPL:
                r[d] = 1 if (not r[a] or r[b]) else 0
            elif op == ASSUME:
                self.assumes[b] = 1 if r[a] else 0
            elif op == PROVE:
                self.proves[b] = 1 if r[a] else 0
            elif op == IDIV or op == IMOD:
                if r[b] == 0:
                    return pc - 1
                r[d] = wrap(int_div(r[a], r[b]) if op == IDIV else int_mod(r[a], r[b]))
            elif op == INEG:
                r[d] = wrap(-r[a])
            elif op == FADD:
                r[d] = fl(r[a] + r[b])
            elif op == FSUB:
                r[d] = fl(r[a] - r[b])
            elif op == FMUL:
                r[d] = fl(r[a] * r[b])
            elif op == FDIV:
                if r[b] == 0:
                    return pc - 1
                r[d] = fl(r[a] / r[b])
            elif op == FNEG:
                r[d] = -r[a]
            elif op == JMP:
                pc = b
            else:
                raise RuntimeError(f"bad opcode {op} at {pc - 1}")
        return -1

    def _exec_instrumented(self) -> int:
        # slow path: same semantics, plus taint propagation and write tracking
        r = self.regs
        t = self.taint
        written = set(self.stable)
        code = self.code
        pc = 0

        def read(reg):
            if reg not in written:
                self.violations.append(("read-before-write", pc - 1))
            return r[reg]

        while pc < len(code):
            op, d, a, b, c = code[pc]
            pc += 1
            if op in (JZ, JNZ):
                v = read(a)
                if (op == JZ and not v) or (op == JNZ and v):
                    pc = b
                continue
            if op == JMP:
                pc = b
                continue
            if op in (ASSUME, PROVE):
                v = read(a)
                if t[a]:
                    self.violations.append(("default-value-observed", pc - 1))
                (self.assumes if op == ASSUME else self.proves)[b] = 1 if v else 0
                continue
            if op in (SELI, SELF):
                cond = read(a)
                src = b if cond else c
                r[d] = read(src)
                t[d] = t[a] or t[src]
                written.add(d)
                continue
            if op in (MOVI, MOVF, NOT, INEG, FNEG):
                srcs = (a,)
            else:
                srcs = (a, b)
            for s in srcs:
                read(s)
            if not self._apply(op, d, a, b):
                return pc - 1
            t[d] = any(t[s] for s in srcs)
            written.add(d)
        return -1

    def _apply(self, op, d, a, b) -> bool:
        """Execute one data instruction; False on a division-by-zero trap."""
        r = self.regs
        if op in (MOVI, MOVF):
            r[d] = r[a]
        elif op in _CMP:
            r[d] = 1 if _CMP[op](r[a], r[b]) else 0
        elif op in _INT_BIN:
            r[d] = self._wrap(_INT_BIN[op](r[a], r[b]))
        elif op == NOT:
            r[d] = 0 if r[a] else 1
        elif op == AND:
            r[d] = 1 if (r[a] and r[b]) else 0
        elif op == IMPL:
            r[d] = 1 if (not r[a] or r[b]) else 0
        elif op in (IDIV, IMOD):
            if r[b] == 0:
                return False
            r[d] = self._wrap(int_div(r[a], r[b]) if op == IDIV else int_mod(r[a], r[b]))
        elif op == INEG:
            r[d] = self._wrap(-r[a])
        elif op == FNEG:
            r[d] = -r[a]
        elif op == FDIV:
            if r[b] == 0:
                return False
            r[d] = self._fl(r[a] / r[b])
        elif op == FADD:
            r[d] = self._fl(r[a] + r[b])
        elif op == FSUB:
            r[d] = self._fl(r[a] - r[b])
        elif op == FMUL:
            r[d] = self._fl(r[a] * r[b])
        else:
            raise RuntimeError(f"bad opcode {op}")
        return True

    def run(self, in_regs, rows, rec_regs):
        """Execute one step per row; stop at the first trap.

        Returns ``(steps_done, trap_pc, first_overflow_step, assumes, proves, recorded)``.
        """
        assumes, proves, recorded = [], [], []
        first_ov = -1
        for step, row in enumerate(rows):
            for reg, v in zip(in_regs, row):
                self.set(reg, v)
            before = self.overflow
            self.overflow = False
            trap = self.exec_step()
            if self.overflow and first_ov < 0:
                first_ov = step
            self.overflow = self.overflow or before
            if trap >= 0:
                return step, trap, first_ov, assumes, proves, recorded
            assumes.append(tuple(self.assumes))
            proves.append(tuple(self.proves))
            recorded.append(tuple(self.regs[x] for x in rec_regs))
        return len(rows), -1, first_ov, assumes, proves, recorded
