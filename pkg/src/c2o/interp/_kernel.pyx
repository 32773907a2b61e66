# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled step kernel: the bytecode loop over an int64 and a double bank."""

from libc.stdint cimport int64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

IMPLEMENTATION = "cython"

cdef extern from *:
    """
    typedef __int128 c2o_wide;
    static inline int64_t c2o_wrap(c2o_wide v, int width, int is_signed, int *ov) {
        unsigned __int128 m = (((unsigned __int128)1) << width) - 1;
        c2o_wide w = (c2o_wide)((unsigned __int128)v & m);
        if (is_signed && (w >> (width - 1)) & 1) w -= (c2o_wide)m + 1;
        if (w != v) *ov = 1;
        return (int64_t)w;
    }
    """
    ctypedef long long c2o_wide
    int64_t c2o_wrap(c2o_wide v, int width, int is_signed, int *ov) nogil

# opcodes, mirrored from bytecode.py
DEF MOVI = 1
DEF MOVF = 2
DEF IADD = 3
DEF ISUB = 4
DEF IMUL = 5
DEF IDIV = 6
DEF IMOD = 7
DEF INEG = 8
DEF FADD = 9
DEF FSUB = 10
DEF FMUL = 11
DEF FDIV = 12
DEF FNEG = 13
DEF ILT = 14
DEF ILE = 15
DEF IGT = 16
DEF IGE = 17
DEF IEQ = 18
DEF INE = 19
DEF FLT = 20
DEF FLE = 21
DEF FGT = 22
DEF FGE = 23
DEF FEQ = 24
DEF FNE = 25
DEF NOT = 26
DEF IMPL = 27
DEF AND = 28
DEF SELI = 29
DEF SELF = 30
DEF JZ = 31
DEF JNZ = 32
DEF JMP = 33
DEF ASSUME = 34
DEF PROVE = 35


cdef inline double _round(double x, int single) nogil:
    if single:
        return <double>(<float>x)
    return x


cdef class Core:
    cdef int32_t *code
    cdef int n
    cdef public int nregs
    cdef int64_t *ri
    cdef double *rf
    cdef uint8_t *kinds
    cdef uint8_t *av
    cdef uint8_t *pv
    cdef int n_assume, n_prove
    cdef int width, is_signed, single
    cdef int ov

    def __cinit__(self, flat, int nregs, kinds, int width, bint signed, bint single,
                  int n_assume, int n_prove, exact=False, instrument=False):
        if exact or instrument:
            raise ValueError("the compiled kernel supports finite, uninstrumented runs only")
        cdef int i
        self.n = len(flat) // 5
        self.nregs = nregs
        self.code = <int32_t *> malloc(max(1, len(flat)) * sizeof(int32_t))
        self.ri = <int64_t *> malloc(max(1, nregs) * sizeof(int64_t))
        self.rf = <double *> malloc(max(1, nregs) * sizeof(double))
        self.kinds = <uint8_t *> malloc(max(1, nregs))
        self.av = <uint8_t *> malloc(max(1, n_assume))
        self.pv = <uint8_t *> malloc(max(1, n_prove))
        if not (self.code and self.ri and self.rf and self.kinds and self.av and self.pv):
            raise MemoryError()
        for i in range(len(flat)):
            self.code[i] = flat[i]
        for i in range(nregs):
            self.kinds[i] = kinds[i]
            self.ri[i] = 0
            self.rf[i] = 0.0
        for i in range(n_assume):
            self.av[i] = 1
        for i in range(n_prove):
            self.pv[i] = 1
        self.n_assume = n_assume
        self.n_prove = n_prove
        self.width = width
        self.is_signed = signed
        self.single = single
        self.ov = 0

    def __dealloc__(self):
        free(self.code)
        free(self.ri)
        free(self.rf)
        free(self.kinds)
        free(self.av)
        free(self.pv)

    property overflow:
        def __get__(self):
            return bool(self.ov)

        def __set__(self, value):
            self.ov = 1 if value else 0

    def set(self, int reg, value):
        if self.kinds[reg]:
            self.rf[reg] = _round(float(value), self.single)
        else:
            self.ri[reg] = int(value)

    def get(self, int reg):
        if self.kinds[reg]:
            return self.rf[reg]
        return self.ri[reg]

    def snapshot(self):
        ints = bytes((<char *> self.ri)[:self.nregs * sizeof(int64_t)])
        floats = bytes((<char *> self.rf)[:self.nregs * sizeof(double)])
        return (ints, floats, self.ov)

    def restore(self, snap):
        cdef bytes ints = snap[0]
        cdef bytes floats = snap[1]
        memcpy(self.ri, <char *> ints, self.nregs * sizeof(int64_t))
        memcpy(self.rf, <char *> floats, self.nregs * sizeof(double))
        self.ov = snap[2]

    def clear_overflow(self):
        self.ov = 0

    def verdicts(self):
        return (tuple(self.av[i] for i in range(self.n_assume)),
                tuple(self.pv[i] for i in range(self.n_prove)))

    cdef int _exec(self) nogil:
        cdef int pc = 0
        cdef int op, d, a, b, c
        cdef int64_t x, y, q
        cdef int64_t *ri = self.ri
        cdef double *rf = self.rf
        cdef int32_t *code = self.code
        cdef int width = self.width
        cdef int sg = self.is_signed
        cdef int single = self.single
        while pc < self.n:
            op = code[5 * pc]
            d = code[5 * pc + 1]
            a = code[5 * pc + 2]
            b = code[5 * pc + 3]
            c = code[5 * pc + 4]
            pc += 1
            if op == MOVI:
                ri[d] = ri[a]
            elif op == MOVF:
                rf[d] = rf[a]
            elif op == SELI:
                ri[d] = ri[b] if ri[a] else ri[c]
            elif op == SELF:
                rf[d] = rf[b] if ri[a] else rf[c]
            elif op == IADD:
                ri[d] = c2o_wrap(<c2o_wide> ri[a] + <c2o_wide> ri[b], width, sg, &self.ov)
            elif op == ISUB:
                ri[d] = c2o_wrap(<c2o_wide> ri[a] - <c2o_wide> ri[b], width, sg, &self.ov)
            elif op == IMUL:
                ri[d] = c2o_wrap(<c2o_wide> ri[a] * <c2o_wide> ri[b], width, sg, &self.ov)
            elif op == ILT:
                ri[d] = ri[a] < ri[b]
            elif op == ILE:
                ri[d] = ri[a] <= ri[b]
            elif op == IGT:
                ri[d] = ri[a] > ri[b]
            elif op == IGE:
                ri[d] = ri[a] >= ri[b]
            elif op == IEQ:
                ri[d] = ri[a] == ri[b]
            elif op == INE:
                ri[d] = ri[a] != ri[b]
            elif op == NOT:
                ri[d] = not ri[a]
            elif op == AND:
                ri[d] = (ri[a] != 0) and (ri[b] != 0)
            elif op == IMPL:
                ri[d] = (ri[a] == 0) or (ri[b] != 0)
            elif op == JZ:
                if not ri[a]:
                    pc = b
            elif op == JNZ:
                if ri[a]:
                    pc = b
            elif op == JMP:
                pc = b
            elif op == ASSUME:
                self.av[b] = ri[a] != 0
            elif op == PROVE:
                self.pv[b] = ri[a] != 0
            elif op == IDIV or op == IMOD:
                x = ri[a]
                y = ri[b]
                if y == 0:
                    return pc - 1
                if op == IDIV:
                    q = x / y
                else:
                    q = x % y
                    if q != 0 and ((q < 0) != (y < 0)):
                        q += y
                ri[d] = c2o_wrap(<c2o_wide> q, width, sg, &self.ov)
            elif op == INEG:
                ri[d] = c2o_wrap(-(<c2o_wide> ri[a]), width, sg, &self.ov)
            elif op == FADD:
                rf[d] = _round(rf[a] + rf[b], single)
            elif op == FSUB:
                rf[d] = _round(rf[a] - rf[b], single)
            elif op == FMUL:
                rf[d] = _round(rf[a] * rf[b], single)
            elif op == FDIV:
                if rf[b] == 0.0:
                    return pc - 1
                rf[d] = _round(rf[a] / rf[b], single)
            elif op == FNEG:
                rf[d] = -rf[a]
            elif op == FLT:
                ri[d] = rf[a] < rf[b]
            elif op == FLE:
                ri[d] = rf[a] <= rf[b]
            elif op == FGT:
                ri[d] = rf[a] > rf[b]
            elif op == FGE:
                ri[d] = rf[a] >= rf[b]
            elif op == FEQ:
                ri[d] = rf[a] == rf[b]
            elif op == FNE:
                ri[d] = rf[a] != rf[b]
            else:
                return -2
        return -1

    def exec_step(self):
        cdef int r
        with nogil:
            r = self._exec()
        if r == -2:
            raise RuntimeError("bad opcode")
        return r

    def run(self, in_regs, rows, rec_regs):
        """Execute one step per row; stop at the first trap."""
        cdef int step = 0, trap, i, reg, nin = len(in_regs)
        cdef int first_ov = -1, before
        cdef int *inr = <int *> malloc(max(1, nin) * sizeof(int))
        assumes, proves, recorded = [], [], []
        try:
            for i in range(nin):
                inr[i] = in_regs[i]
            for row in rows:
                for i in range(nin):
                    reg = inr[i]
                    if self.kinds[reg]:
                        self.rf[reg] = _round(float(row[i]), self.single)
                    else:
                        self.ri[reg] = int(row[i])
                before = self.ov
                self.ov = 0
                with nogil:
                    trap = self._exec()
                if trap == -2:
                    raise RuntimeError("bad opcode")
                if self.ov and first_ov < 0:
                    first_ov = step
                self.ov = self.ov or before
                if trap >= 0:
                    return step, trap, first_ov, assumes, proves, recorded
                assumes.append(tuple(self.av[i] for i in range(self.n_assume)))
                proves.append(tuple(self.pv[i] for i in range(self.n_prove)))
                recorded.append(tuple(self.rf[r] if self.kinds[r] else self.ri[r]
                                      for r in rec_regs))
                step += 1
            return step, -1, first_ov, assumes, proves, recorded
        finally:
            free(inr)
