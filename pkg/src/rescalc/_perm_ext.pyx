# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled permutation kernels; see ``_perm_py`` for the reference."""


def compose(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(b)
    out = [0] * n
    for i in range(n):
        out[i] = a[<Py_ssize_t>b[i] - 1]
    return tuple(out)


def inverse(tuple a):
    cdef Py_ssize_t i, n = len(a)
    out = [0] * n
    for i in range(n):
        out[<Py_ssize_t>a[i] - 1] = i + 1
    return tuple(out)


def block_sum(perms):
    cdef long off = 0
    cdef long j
    out = []
    for p in perms:
        for j in p:
            out.append(j + off)
        off += len(p)
    return tuple(out)


def is_shuffle(tuple p, sizes):
    cdef Py_ssize_t pos = 0, j, n
    for n in sizes:
        for j in range(pos + 1, pos + n):
            if <long>p[j - 1] >= <long>p[j]:
                return False
        pos += n
    return True


def decompose(tuple p, sizes):
    cdef Py_ssize_t pos = 0, n, r
    tau0 = [0] * len(p)
    parts = []
    for n in sizes:
        block = p[pos:pos + n]
        ranked = sorted(block)
        rank = {}
        for r in range(n):
            rank[ranked[r]] = r + 1
        tau0[pos:pos + n] = ranked
        parts.append(tuple([rank[v] for v in block]))
        pos += n
    return tuple(tau0), parts


cdef void _fill(int i, int n, int k, int* owner, int* left, int* start, list out):
    cdef int b, t
    cdef int nxt[64]
    if i == n:
        for b in range(k):
            nxt[b] = start[b]
        img = [0] * n
        for t in range(n):
            b = owner[t]
            img[nxt[b]] = t + 1
            nxt[b] += 1
        out.append(tuple(img))
        return
    for b in range(k):
        if left[b]:
            owner[i] = b
            left[b] -= 1
            _fill(i + 1, n, k, owner, left, start, out)
            left[b] += 1


def shuffles(sizes):
    cdef int k = len(sizes), n = 0, b
    cdef int owner[64]
    cdef int left[64]
    cdef int start[64]
    if k > 64 or sum(sizes) > 64:
        raise ValueError("profile too large for the compiled kernel")
    for b in range(k):
        start[b] = n
        left[b] = sizes[b]
        n += sizes[b]
    out = []
    _fill(0, n, k, owner, left, start, out)
    out.sort()
    return out
