# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; semantics identical to kernels._pure."""

DEF UNSET = 0xFF


def apply_rule(bytes word, int radius, bytes table, int base):
    cdef int width = 2 * radius + 1
    cdef Py_ssize_t n = len(word)
    if n < width:
        raise ValueError("word shorter than the rule window")
    cdef const unsigned char* w = word
    cdef const unsigned char* tab = table
    cdef long long high = 1
    cdef int j
    for j in range(width - 1):
        high *= base
    cdef long long code = 0
    cdef int d
    for j in range(width):
        d = w[j] - 48
        if d < 0 or d >= base:
            raise ValueError("symbol outside alphabet at %d" % j)
        code = code * base + d
    cdef bytearray out = bytearray(n - width + 1)
    cdef unsigned char* o = out
    cdef Py_ssize_t i = 0
    cdef unsigned char t
    while True:
        t = tab[code]
        if t == UNSET:
            raise ValueError("block with no rule entry at %d" % i)
        o[i] = t
        i += 1
        if i + width > n:
            break
        d = w[i + width - 1] - 48
        if d < 0 or d >= base:
            raise ValueError("symbol outside alphabet at %d" % (i + width - 1))
        code = (code % high) * base + d
    return bytes(out)


def window_diffs(bytes a, bytes b, int width):
    cdef Py_ssize_t n = len(a)
    if len(b) != n:
        raise ValueError("length mismatch")
    if width < 1 or width > n:
        raise ValueError("bad window width")
    cdef const unsigned char* pa = a
    cdef const unsigned char* pb = b
    cdef int run = 0
    cdef Py_ssize_t i
    for i in range(width):
        if pa[i] != pb[i]:
            run += 1
    cdef list out = [0] * (n - width + 1)
    out[0] = run
    for i in range(1, n - width + 1):
        if pa[i - 1] != pb[i - 1]:
            run -= 1
        if pa[i + width - 1] != pb[i + width - 1]:
            run += 1
        out[i] = run
    return out


def decode_blocks(bytes word, Py_ssize_t start, int block_len, bytes table,
                  int base):
    cdef Py_ssize_t n = len(word)
    if start < 0 or start > n:
        raise ValueError("bad start")
    cdef const unsigned char* w = word
    cdef const unsigned char* tab = table
    cdef Py_ssize_t count = (n - start) // block_len
    cdef bytearray out = bytearray(count)
    cdef unsigned char* o = out
    cdef Py_ssize_t pos = start, i
    cdef int j, d
    cdef long long code
    cdef unsigned char t
    for i in range(count):
        code = 0
        for j in range(block_len):
            d = w[pos + j] - 48
            if d < 0 or d >= base:
                raise ValueError("symbol outside alphabet at %d" % (pos + j))
            code = code * base + d
        t = tab[code]
        if t == UNSET:
            raise ValueError("block %d is not a substitution image" % i)
        o[i] = t
        pos += block_len
    return bytes(out)
