"""Splittable counter-based pseudo-randomness for reproducible simulation.

Draw k of a 64-bit seed is the splitmix64 finalizer applied to
seed + (k+1)*GOLDEN (mod 2^64): random access by counter, no hidden state,
identical on every platform. Sample i of a simulation uses counters
3i, 3i+1, 3i+2 for its three stages (input pair, message, output).

Exact inverse-CDF sampling: a category with cumulative rational weight c is
selected by comparing the draw u against the integer threshold
K = ceil(c * 2^64), which encodes u/2^64 < c exactly (u is an integer, so
u < c*2^64 iff u < K). Thresholds are precomputed with arbitrary-precision
integers; the sampling loop itself only compares 64-bit values, which lets
the compiled kernel and the pure-Python fallback agree bit for bit.
"""

from __future__ import annotations

from fractions import Fraction

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
TWO64 = 1 << 64


def draw64(seed: int, counter: int) -> int:
    z = (seed + (counter + 1) * GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return (z ^ (z >> 31)) & MASK


def thresholds(probs) -> list:
    """Cumulative 64-bit selection thresholds for a rational distribution.

    Entry j is ceil(cum_j * 2^64); the final entry equals 2^64 whenever the
    weights sum to 1, so a draw always lands in some category.
    """
    cum = Fraction(0)
    out = []
    for p in probs:
        cum += Fraction(p)
        num, den = cum.numerator, cum.denominator
        out.append((num * TWO64 + den - 1) // den)
    return out


def pick(u: int, ks) -> int:
    """Index of the first threshold exceeding u (linear scan; rows are tiny)."""
    for j, k in enumerate(ks):
        if u < k:
            return j
    return len(ks) - 1
