"""Counter-based random streams for reproducible simulation.

Every random quantity in this package is a pure function of a 64-bit
stream key and a draw counter, so any slice of any stream can be
regenerated independently, in any order, on any worker, with
bit-identical results.  There is no hidden generator state to advance
or to share between threads.

The mixing function is the SplitMix64 finalizer (Steele, Lea and Flood,
"Fast splittable pseudorandom number generators", 2014), with the golden
ratio increment folded in so that ``mix64(k + i*GOLDEN)`` for i = 0, 1,
2, ... reproduces the SplitMix64 output sequence started at state k.

Stream layout
-------------
* ``Stream.from_seed(seed)`` derives the root stream of a run.
* ``stream.child(c0, c1, ...)`` derives a sub-stream by folding the
  integer path components into the key, one ``mix64`` round per
  component.  Distinct paths give statistically independent streams.
* The i-th uniform of a stream is ``tofloat(mix64(key + i*GOLDEN))``;
  uniforms are mapped to the open interval (0, 1) so logarithms are
  always safe.
* Normal variates come from Box-Muller pairs: uniforms (u[2j], u[2j+1])
  produce normals (z[2j], z[2j+1]).  A request for an odd count draws
  the full last pair and discards the trailing normal, so the mapping
  from counter positions to values never depends on the request size.

Scalar draws run on Python integers (numpy warns on scalar uint64
overflow); bulk draws run on uint64 arrays, which wrap silently.  The
two paths are bit-identical and that equivalence is under test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, the SplitMix64 increment

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_U64 = np.uint64


def mix64(z: int) -> int:
    """SplitMix64 output function of a 64-bit state, as a Python int."""
    z = (z + GOLDEN) & MASK64
    z ^= z >> 30
    z = (z * _M1) & MASK64
    z ^= z >> 27
    z = (z * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix64` over a uint64 array."""
    z = z + _U64(GOLDEN)
    z = (z ^ (z >> _U64(30))) * _U64(_M1)
    z = (z ^ (z >> _U64(27))) * _U64(_M2)
    return z ^ (z >> _U64(31))


def bits_to_uniform(z: np.ndarray) -> np.ndarray:
    """Map mixed 64-bit words to float64 uniforms in the open (0, 1).

    Uses the top 53 bits; the +0.5 offset keeps both endpoints excluded
    (minimum 2^-54, maximum 1 - 2^-54).
    """
    return ((z >> _U64(11)).astype(np.float64) + 0.5) * 2.0**-53


def fold(key: int, component: int) -> int:
    """Derive a child key from ``key`` and one integer path component."""
    return mix64(key ^ mix64(component & MASK64))


def fold_range(key: int, indices: np.ndarray) -> np.ndarray:
    """Child keys of one parent for many indices at once (uint64 array)."""
    idx = np.asarray(indices, dtype=np.uint64)
    return mix64_array(_U64(key) ^ mix64_array(idx))


def fold_in(keys: np.ndarray, component: int) -> np.ndarray:
    """Apply the same path component to many parent keys at once."""
    return mix64_array(keys ^ _U64(mix64(component & MASK64)))


def uniform_block(keys: np.ndarray, count: int, start: int = 0) -> np.ndarray:
    """Uniforms for many streams at once.

    Returns shape ``(len(keys), count)``; row r holds draws
    ``start .. start+count-1`` of the stream keyed by ``keys[r]``.
    """
    ctr = np.arange(start, start + count, dtype=np.uint64)
    return bits_to_uniform(mix64_array(keys[:, None] + ctr[None, :] * _U64(GOLDEN)))


def normal_block(keys: np.ndarray, count: int) -> np.ndarray:
    """Standard normals for many streams at once, shape ``(len(keys), count)``.

    Box-Muller on consecutive uniform pairs; consumes ``2*ceil(count/2)``
    uniforms per stream starting at counter 0.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    pairs = (count + 1) // 2
    u = uniform_block(keys, 2 * pairs)
    r = np.sqrt(-2.0 * np.log(u[:, 0::2]))
    theta = (2.0 * np.pi) * u[:, 1::2]
    out = np.empty_like(u)
    out[:, 0::2] = r * np.cos(theta)
    out[:, 1::2] = r * np.sin(theta)
    return out[:, :count]


@dataclass(frozen=True)
class Stream:
    """A keyed random stream; cheap to derive, free of mutable state."""

    key: int

    def __post_init__(self):
        if not isinstance(self.key, int) or not 0 <= self.key <= MASK64:
            raise ValueError(f"stream key must be a 64-bit integer, got {self.key!r}")

    @classmethod
    def from_seed(cls, seed: int) -> "Stream":
        """Root stream of a run; ``seed`` is reduced to 64 bits."""
        if not isinstance(seed, int):
            raise ValueError(f"seed must be an integer, got {seed!r}")
        return cls(mix64(seed & MASK64))

    def child(self, *path: int) -> "Stream":
        """Sub-stream at the given integer path, e.g. ``root.child(DOMAIN, t)``."""
        if not path:
            raise ValueError("child() needs at least one path component")
        key = self.key
        for component in path:
            if not isinstance(component, int) or component < 0:
                raise ValueError(f"path components must be non-negative ints, got {component!r}")
            key = fold(key, component)
        return Stream(key)

    def uniform(self, index: int) -> float:
        """The ``index``-th uniform of this stream, in the open (0, 1)."""
        if index < 0:
            raise ValueError(f"draw index must be >= 0, got {index}")
        z = mix64((self.key + index * GOLDEN) & MASK64)
        return float(bits_to_uniform(np.array([z], dtype=np.uint64))[0])

    def uniforms(self, count: int, start: int = 0) -> np.ndarray:
        """Uniform draws ``start .. start+count-1`` as a float64 vector."""
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        return uniform_block(np.array([self.key], dtype=np.uint64), count, start)[0]

    def normals(self, count: int) -> np.ndarray:
        """The first ``count`` standard normals of this stream."""
        return normal_block(np.array([self.key], dtype=np.uint64), count)[0]
