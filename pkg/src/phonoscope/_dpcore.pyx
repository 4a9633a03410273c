# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled weighted edit-distance kernel.

Must stay behaviorally identical to _dppy.dp_align: same addition order
in the table fill, same exact-equality backtrace, same tie preferences.
The test suite asserts bitwise parity between the two backends.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc

cdef int DIAG = 0
cdef int DELETE = 1
cdef int INSERT = 2


def dp_align(int64_t[::1] expected, int64_t[::1] observed,
             double[:, ::1] cost_rows, Py_ssize_t eps,
             int pref0, int pref1, int pref2):
    cdef Py_ssize_t n = expected.shape[0]
    cdef Py_ssize_t m = observed.shape[0]
    cdef Py_ssize_t width = m + 1
    cdef Py_ssize_t i, j, base, prev
    cdef int64_t a, b
    cdef double best, dele, ins, adel, cur
    cdef int prefs[3]
    cdef int chosen, p, k
    cdef list moves = []

    cdef double* dp = <double*> malloc((n + 1) * width * sizeof(double))
    if dp == NULL:
        raise MemoryError()
    prefs[0] = pref0
    prefs[1] = pref1
    prefs[2] = pref2

    try:
        dp[0] = 0.0
        for i in range(1, n + 1):
            dp[i * width] = dp[(i - 1) * width] + cost_rows[expected[i - 1], eps]
        for j in range(1, m + 1):
            dp[j] = dp[j - 1] + cost_rows[eps, observed[j - 1]]

        for i in range(1, n + 1):
            a = expected[i - 1]
            adel = cost_rows[a, eps]
            base = i * width
            prev = base - width
            for j in range(1, m + 1):
                b = observed[j - 1]
                best = dp[prev + j - 1] + cost_rows[a, b]
                dele = dp[prev + j] + adel
                if dele < best:
                    best = dele
                ins = dp[base + j - 1] + cost_rows[eps, b]
                if ins < best:
                    best = ins
                dp[base + j] = best

        i = n
        j = m
        while i > 0 or j > 0:
            cur = dp[i * width + j]
            chosen = -1
            for k in range(3):
                p = prefs[k]
                if p == DIAG:
                    if (i > 0 and j > 0
                            and dp[(i - 1) * width + j - 1]
                            + cost_rows[expected[i - 1], observed[j - 1]] == cur):
                        chosen = DIAG
                        break
                elif p == DELETE:
                    if i > 0 and dp[(i - 1) * width + j] + cost_rows[expected[i - 1], eps] == cur:
                        chosen = DELETE
                        break
                else:
                    if j > 0 and dp[i * width + j - 1] + cost_rows[eps, observed[j - 1]] == cur:
                        chosen = INSERT
                        break
            if chosen == -1:
                raise RuntimeError("backtrace failed to reproduce DP cell")
            moves.append(chosen)
            if chosen == DIAG:
                i -= 1
                j -= 1
            elif chosen == DELETE:
                i -= 1
            else:
                j -= 1

        moves.reverse()
        return dp[n * width + m], moves
    finally:
        free(dp)
