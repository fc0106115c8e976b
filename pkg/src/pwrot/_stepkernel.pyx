# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernel: int64 twin of ``_steppy.Kernel``.

The caller guarantees (via the threshold handed to the constructor) that one
more step cannot overflow int64 while max|v_j| stays at or below the
threshold; when the walk grows past it the kernel returns STATUS_OVERFLOW
with its current state so the pure-Python kernel can resume exactly there.
"""

from libc.math cimport fabs
from libc.stdlib cimport free, malloc

IMPL = "compiled"

STATUS_OK = 0
STATUS_BUDGET = 1
STATUS_OVERFLOW = 2
STATUS_ZERO = 3


cdef class Kernel:
    cdef int d
    cdef long long* mat_m
    cdef long long* mat_k
    cdef long long* off_plus
    cdef long long* off_minus
    cdef double* sines
    cdef double margin
    cdef long long threshold
    cdef object hard_sign

    def __cinit__(self, rows_m, rows_k, lvec, denom, sines, margin, hard_sign,
                  threshold):
        cdef int d = len(sines)
        cdef int i, j
        self.d = d
        self.mat_m = <long long*> malloc(d * d * sizeof(long long))
        self.mat_k = <long long*> malloc(d * d * sizeof(long long))
        self.off_plus = <long long*> malloc(d * sizeof(long long))
        self.off_minus = <long long*> malloc(d * sizeof(long long))
        self.sines = <double*> malloc(d * sizeof(double))
        if (self.mat_m == NULL or self.mat_k == NULL or self.off_plus == NULL
                or self.off_minus == NULL or self.sines == NULL):
            raise MemoryError()
        for i in range(d):
            for j in range(d):
                self.mat_m[i * d + j] = rows_m[i][j]
                self.mat_k[i * d + j] = rows_k[i][j]
            self.off_plus[i] = -denom * lvec[i]
            self.off_minus[i] = denom * lvec[i]
            self.sines[i] = sines[i]
        self.margin = margin
        self.threshold = threshold
        self.hard_sign = hard_sign

    def __dealloc__(self):
        free(self.mat_m)
        free(self.mat_k)
        free(self.off_plus)
        free(self.off_minus)
        free(self.sines)

    cdef int _sign(self, long long* v) except? -9:
        cdef double total = 0.0
        cdef double absum = 0.0
        cdef double xf
        cdef int i, j
        cdef long long acc
        cdef bint zero = True
        for j in range(self.d):
            xf = <double> v[j]
            total += xf * self.sines[j]
            absum += fabs(xf)
        if fabs(total) > self.margin * absum:
            return 1 if total > 0.0 else -1
        for i in range(self.d):
            acc = 0
            for j in range(self.d):
                acc += self.mat_k[i * self.d + j] * v[j]
            if acc != v[i]:
                zero = False
                break
        if zero:
            return 0
        return self.hard_sign(tuple([v[j] for j in range(self.d)]))

    cdef void _step(self, long long* v, long long* w, bint positive) noexcept:
        cdef int i, j
        cdef long long acc
        cdef long long* off = self.off_plus if positive else self.off_minus
        for i in range(self.d):
            acc = off[i]
            for j in range(self.d):
                acc += self.mat_m[i * self.d + j] * v[j]
            w[i] = acc

    cdef long long _maxabs(self, long long* v) noexcept:
        cdef long long best = 0
        cdef long long a
        cdef int j
        for j in range(self.d):
            a = v[j] if v[j] >= 0 else -v[j]
            if a > best:
                best = a
        return best

    def period_search(self, v_start, v_target, long long budget,
                      long long idx_offset=0, long long touch_cap=100000):
        cdef int d = self.d
        cdef long long* v = <long long*> malloc(d * sizeof(long long))
        cdef long long* w = <long long*> malloc(d * sizeof(long long))
        cdef long long* tgt = <long long*> malloc(d * sizeof(long long))
        if v == NULL or w == NULL or tgt == NULL:
            raise MemoryError()
        cdef long long i
        cdef int j, s
        cdef bint equal
        touches = []
        try:
            for j in range(d):
                v[j] = v_start[j]
                tgt[j] = v_target[j]
            for i in range(budget):
                if self._maxabs(v) > self.threshold:
                    return (STATUS_OVERFLOW, i, touches,
                            [v[j] for j in range(d)])
                s = self._sign(v)
                if s == 0 and len(touches) < touch_cap:
                    touches.append((idx_offset + i, tuple([v[j] for j in range(d)])))
                self._step(v, w, s >= 0)
                equal = True
                for j in range(d):
                    v[j] = w[j]
                    if v[j] != tgt[j]:
                        equal = False
                if equal:
                    return (STATUS_OK, i + 1, touches, [v[j] for j in range(d)])
            return (STATUS_BUDGET, budget, touches, [v[j] for j in range(d)])
        finally:
            free(v)
            free(w)
            free(tgt)

    def sign_walk(self, v_start, long long nsteps, bint stop_on_zero=False,
                  bint include_final=False, long long touch_cap=100000):
        cdef int d = self.d
        cdef long long* v = <long long*> malloc(d * sizeof(long long))
        cdef long long* w = <long long*> malloc(d * sizeof(long long))
        if v == NULL or w == NULL:
            raise MemoryError()
        cdef long long i
        cdef int j, s
        signs = []
        touches = []
        try:
            for j in range(d):
                v[j] = v_start[j]
            for i in range(nsteps):
                if self._maxabs(v) > self.threshold:
                    return (STATUS_OVERFLOW, signs, touches,
                            [v[j] for j in range(d)])
                s = self._sign(v)
                signs.append(s)
                if s == 0:
                    if len(touches) < touch_cap:
                        touches.append((i, tuple([v[j] for j in range(d)])))
                    if stop_on_zero:
                        return (STATUS_ZERO, signs, touches,
                                [v[j] for j in range(d)])
                self._step(v, w, s >= 0)
                for j in range(d):
                    v[j] = w[j]
            if include_final:
                if self._maxabs(v) > self.threshold:
                    return (STATUS_OVERFLOW, signs, touches,
                            [v[j] for j in range(d)])
                s = self._sign(v)
                signs.append(s)
                if s == 0 and len(touches) < touch_cap:
                    touches.append((nsteps, tuple([v[j] for j in range(d)])))
            return (STATUS_OK, signs, touches, [v[j] for j in range(d)])
        finally:
            free(v)
            free(w)
