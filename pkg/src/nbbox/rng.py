"""Deterministic random number stream.

A small, fully specified PRNG so that every draw is reproducible bit-for-bit
across platforms and Python versions, independent of any library's generator
internals. The core is SplitMix64 (Steele, Lea & Flood's 64-bit mixer, the
same one used to seed xoshiro generators), which passes BigCrush and has a
one-word state that is trivial to reason about.

Substreams are derived by hashing ``(seed, label)`` with SHA-256, so any
labelled unit of work (a file, a trial, an epoch) gets an independent stream
whose draws do not depend on processing order. Deriving a substream does not
advance the parent.

``RngStream`` instances are not thread-safe; give each worker its own
substream instead of sharing one.
"""

from __future__ import annotations

import hashlib
import math

from .errors import InvalidInputError, InvalidRangeError

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15

__all__ = ["RngStream"]


class RngStream:
    """Seeded stream of uniform integers and floats.

    >>> s = RngStream(0)
    >>> hex(s.next_u64())
    '0xe220a8397b1dcdaf'
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise InvalidInputError(f"seed must be an int, got {type(seed).__name__}")
        self.seed = seed & _MASK
        self._state = self.seed

    def next_u64(self) -> int:
        """Next raw 64-bit output word."""
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def rand_int(self, a: int, c: int) -> int:
        """Uniform integer in the inclusive range [a, c].

        Every value has probability 1/(c - a + 1); uses rejection sampling
        on the smallest covering bit mask, so there is no modulo bias.
        a == c is legal and still consumes exactly one output word.
        """
        if not isinstance(a, int) or not isinstance(c, int) or isinstance(a, bool) or isinstance(c, bool):
            raise InvalidInputError("rand_int bounds must be ints")
        if a > c:
            raise InvalidRangeError(f"rand_int range is empty: [{a}, {c}]")
        span = c - a  # values 0..span
        if span == 0:
            self.next_u64()
            return a
        mask = (1 << span.bit_length()) - 1
        while True:
            v = self.next_u64() & mask
            if v <= span:
                return a + v

    def rand_float(self, a: float, c: float) -> float:
        """Uniform float in the half-open range [a, c).

        Density 1/(c - a) on [a, c); the underlying draw has 53 random bits.
        The range must be non-empty (a < c) with a finite width.
        """
        a = float(a)
        c = float(c)
        if not (math.isfinite(a) and math.isfinite(c)):
            raise InvalidRangeError(f"rand_float bounds must be finite, got [{a}, {c})")
        if not a < c:
            raise InvalidRangeError(f"rand_float range is empty: [{a}, {c})")
        width = c - a
        if not math.isfinite(width):
            raise InvalidRangeError(f"rand_float range too wide: [{a}, {c})")
        u = (self.next_u64() >> 11) * 2.0**-53  # in [0, 1)
        x = a + u * width
        if x >= c:  # rounding at the top of the interval
            x = math.nextafter(c, a)
        return x

    def substream(self, label: str | bytes) -> "RngStream":
        """Independent stream keyed by ``(seed, label)``.

        The child seed is the first 8 bytes of
        SHA-256(seed_be8 || 0x00 || label). Only the parent's seed matters;
        the parent's position is untouched, so derivation order is irrelevant
        and derivation is safe from multiple threads.
        """
        if isinstance(label, str):
            label = label.encode("utf-8")
        elif not isinstance(label, (bytes, bytearray)):
            raise InvalidInputError(f"substream label must be str or bytes, got {type(label).__name__}")
        digest = hashlib.sha256(self.seed.to_bytes(8, "big") + b"\x00" + bytes(label)).digest()
        return RngStream(int.from_bytes(digest[:8], "big"))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed:#x}, state={self._state:#x})"
