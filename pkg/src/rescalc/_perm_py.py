"""Pure-Python permutation kernels.

Permutations are tuples of 1-based images. Every function here has a twin
in ``_perm_ext.pyx`` with the same signature and results.
"""


def compose(a, b):
    return tuple(a[j - 1] for j in b)


def inverse(a):
    out = [0] * len(a)
    for i, j in enumerate(a, 1):
        out[j - 1] = i
    return tuple(out)


def block_sum(perms):
    out = []
    off = 0
    for p in perms:
        out.extend(j + off for j in p)
        off += len(p)
    return tuple(out)


def is_shuffle(p, sizes):
    pos = 0
    for n in sizes:
        for j in range(pos + 1, pos + n):
            if p[j - 1] >= p[j]:
                return False
        pos += n
    return True


def decompose(p, sizes):
    tau0 = [0] * len(p)
    parts = []
    pos = 0
    for n in sizes:
        block = p[pos:pos + n]
        ranked = sorted(block)
        rank = {v: r for r, v in enumerate(ranked, 1)}
        tau0[pos:pos + n] = ranked
        parts.append(tuple(rank[v] for v in block))
        pos += n
    return tuple(tau0), parts


def shuffles(sizes):
    n = sum(sizes)
    out = []
    owner = [0] * n

    def fill(i, left):
        if i == n:
            img = [0] * n
            nxt = []
            off = 0
            for s in sizes:
                nxt.append(off)
                off += s
            for t in range(n):
                b = owner[t]
                img[nxt[b]] = t + 1
                nxt[b] += 1
            out.append(tuple(img))
            return
        for b, r in enumerate(left):
            if r:
                owner[i] = b
                left[b] -= 1
                fill(i + 1, left)
                left[b] += 1

    fill(0, list(sizes))
    out.sort()
    return out
