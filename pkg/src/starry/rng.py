"""Counter-based random streams.

Every variate is a pure function of ``(seed, stream, counter)``, so any slice
of a stream can be regenerated independently and in any order::

    key  = mix64(seed XOR (stream * GOLDEN))
    bits = mix64(key + counter * GOLDEN)            (uint64, wrapping)
    u    = ((bits >> 11) + 0.5) * 2**-53            in (0, 1)
    g    = Phi^{-1}(u)                               standard normal

``mix64`` is the SplitMix64 finaliser. The Gaussian transform is the inverse
normal CDF (``scipy.special.ndtri``), one uniform per variate.
"""

import numpy as np
from scipy.special import ndtri

MASK64 = (1 << 64) - 1
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# stream tags, one per consumer
STREAM_WIENER = 1
STREAM_SNAKE = 2
STREAM_CENTERS = 3


def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * _M1
    z = z ^ (z >> np.uint64(27))
    z = z * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed, stream):
    with np.errstate(over="ignore"):
        s = np.uint64(int(seed) & MASK64)
        k = np.array([s ^ (np.uint64(stream) * GOLDEN)], dtype=np.uint64)
        return _mix64(k)[0]


def random_bits(seed, counters, stream=0):
    """uint64 hash of each counter under ``(seed, stream)``."""
    counters = np.asarray(counters, dtype=np.uint64)
    key = _key(seed, stream)
    with np.errstate(over="ignore"):
        return _mix64(key + counters * GOLDEN)


def uniforms(seed, counters, stream=0):
    """Uniform variates in the open interval (0, 1)."""
    bits = random_bits(seed, counters, stream)
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def normals(seed, counters, stream=0):
    """Standard normal variates, one per counter."""
    return ndtri(uniforms(seed, counters, stream))


def normals_batch(seeds, n, stream=0):
    """Array of shape ``(len(seeds), n)``; row ``k`` equals ``normals(seeds[k], range(n))``."""
    counters = np.arange(n, dtype=np.uint64)
    out = np.empty((len(seeds), n))
    for row, seed in enumerate(seeds):
        out[row] = normals(seed, counters, stream)
    return out
