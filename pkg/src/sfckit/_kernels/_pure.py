"""Pure-Python kernels: the reference implementation of the two hot loops.

sfckit._kernels._speed is the compiled twin; both must produce bit-identical
results (same enumeration order, same IEEE double arithmetic order, same
threshold comparisons), so either can back the public API.
"""

from __future__ import annotations

import math

BACKEND = "python"

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def min_entropy_partitions(adj, weights, keep=1e-9):
    """Enumerate set partitions of range(n) into independent blocks.

    Restricted-growth-string order; vertex i may join block b only if
    adj[i] has no bit in common with the block. Returns every partition
    whose float entropy is within `keep` of the minimum found, as
    (entropy, restricted-growth string bytes) in enumeration order.
    """
    n = len(adj)
    if n == 0:
        return [(0.0, b"")]
    rgs = bytearray(n)
    block_mask = [0] * n
    block_w = [0.0] * n
    best = math.inf
    out = []

    def visit(i, k):
        nonlocal best, out
        if i == n:
            h = 0.0
            for b in range(k):
                w = block_w[b]
                if w > 0.0:
                    h += -w * math.log2(w)
            if h <= best + keep:
                if h < best:
                    best = h
                    out = [c for c in out if c[0] <= best + keep]
                out.append((h, bytes(rgs)))
            return
        bit = 1 << i
        a = adj[i]
        for b in range(k):
            if block_mask[b] & a:
                continue
            rgs[i] = b
            block_mask[b] |= bit
            block_w[b] += weights[i]
            visit(i + 1, k)
            block_w[b] -= weights[i]
            block_mask[b] &= ~bit
        rgs[i] = k
        block_mask[k] = bit
        block_w[k] = weights[i]
        visit(i + 1, k + 1)
        block_w[k] = 0.0
        block_mask[k] = 0

    visit(0, 0)
    return out


def _draw(seed, counter):
    z = (seed + (counter + 1) * GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return (z ^ (z >> 31)) & MASK


def _pick(u, ks):
    for j, k in enumerate(ks):
        if u < k:
            return j
    return len(ks) - 1


def simulate_counts(seed, n, nx, ny, nu, nz, kxy, ku, kz):
    """Count (x,y,u,z) outcomes of n protocol executions.

    kxy / ku[x] / kz[u*ny+y] are cumulative 64-bit selection thresholds
    (see sfckit.rng.thresholds). Sample i consumes counters 3i..3i+2.
    """
    seed &= MASK
    counts = [0] * (nx * ny * nu * nz)
    for i in range(n):
        j = _pick(_draw(seed, 3 * i), kxy)
        x, y = divmod(j, ny)
        u = _pick(_draw(seed, 3 * i + 1), ku[x])
        z = _pick(_draw(seed, 3 * i + 2), kz[u * ny + y])
        counts[((x * ny + y) * nu + u) * nz + z] += 1
    return counts
