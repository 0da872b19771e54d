"""Seeded uniform PRNG behind watermark generation.

xorshift64* with the published multiplier (Vigna), state initialized by one
splitmix64 scramble so that any 64-bit seed, including 0, is usable. The
generator is identified in manifests by name so a matching implementation
can regenerate the identical watermark.
"""

from vidmark.errors import ConfigurationError

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_XORSHIFT_MULT = 0x2545F4914F6CDD1D


def _splitmix64(x: int) -> int:
    z = (x + _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """64-bit shift-register generator; uniform() yields 53-bit doubles in [0, 1)."""

    name = "xorshift64star"

    def __init__(self, seed: int):
        state = _splitmix64(seed & _MASK64)
        self._state = state if state else _SPLITMIX_GAMMA

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _XORSHIFT_MULT) & _MASK64

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


GENERATORS = {Xorshift64Star.name: Xorshift64Star}

DEFAULT_GENERATOR_ID = Xorshift64Star.name


def make_uniform_source(generator_id: str, seed: int):
    try:
        cls = GENERATORS[generator_id]
    except KeyError:
        raise ConfigurationError(f"unknown generator_id {generator_id!r}") from None
    return cls(seed)
