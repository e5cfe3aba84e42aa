"""
Binary arithmetic coder with integer registers.

The coder keeps a 63-bit interval [low, high] and renormalizes it bit by bit:
when low and high agree on their top bit that bit is settled (shift), and
when the interval straddles the midpoint inside the middle half it is
expanded around the midpoint while the settled bit is still unknown
(underflow, counted as a pending bit). The model is a Bernoulli source with
P(0) = q quantized to 32-bit fixed point, both symbol counts at least 1.

Encoder and decoder apply identical interval updates for identical symbols.
Running the decoder on arbitrary input bits therefore produces a symbol
sequence whose re-encoding reproduces those input bits, as far as they are
settled. That is how the codec turns uniform bits into biased ones and back;
`resolved` counts the settled bits on both sides. Input past the end of the
stream reads as zeros.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Union

from .errors import InputError

PRECISION_BITS = 63
PROBABILITY_BITS = 32


@dataclass(frozen=True)
class BinaryModel:
    """Quantized Bernoulli model: symbol 0 owns [0, zero_count), symbol 1 the rest of [0, total)."""
    zero_count: int
    total: int = 1 << PROBABILITY_BITS

    @classmethod
    def from_probability(cls, q: Union[float, Fraction]) -> "BinaryModel":
        """Model with P(0) ≈ q; q must lie strictly between 0 and 1."""
        if not 0 < q < 1:
            raise InputError(f"symbol probability must lie in (0, 1), got {q}")
        total = 1 << PROBABILITY_BITS
        count = round(Fraction(q) * total) if isinstance(q, Fraction) else round(float(q) * total)
        return cls(min(max(int(count), 1), total - 1), total)

    @property
    def probability(self) -> float:
        return self.zero_count / self.total

    def bounds(self, symbol: int) -> tuple:
        if symbol == 0:
            return 0, self.zero_count
        if symbol == 1:
            return self.zero_count, self.total
        raise InputError(f"binary model cannot code symbol {symbol}")


class _CoderBase:
    def __init__(self, num_bits: int = PRECISION_BITS):
        self.num_bits = num_bits
        self.full_range = 1 << num_bits
        self.half_range = self.full_range >> 1
        self.quarter_range = self.half_range >> 1
        self.minimum_range = self.quarter_range + 2
        self.state_mask = self.full_range - 1
        self.low = 0
        self.high = self.state_mask
        self.pending = 0
        self.resolved = 0

    @property
    def width(self) -> int:
        return self.high - self.low + 1

    def _update(self, model: BinaryModel, symbol: int) -> None:
        sym_low, sym_high = model.bounds(symbol)
        span = self.width
        if not self.minimum_range <= span <= self.full_range:
            raise AssertionError("interval width out of range")
        self.low, self.high = (self.low + sym_low * span // model.total,
                               self.low + sym_high * span // model.total - 1)
        while ((self.low ^ self.high) & self.half_range) == 0:
            self._shift()
            self.low = (self.low << 1) & self.state_mask
            self.high = ((self.high << 1) & self.state_mask) | 1
        while (self.low & ~self.high & self.quarter_range) != 0:
            self._underflow()
            self.low = (self.low << 1) ^ self.half_range
            self.high = ((self.high ^ self.half_range) << 1) | self.half_range | 1

    def _shift(self) -> None:
        self.resolved += 1 + self.pending
        self.pending = 0

    def _underflow(self) -> None:
        self.pending += 1


class ArithmeticEncoder(_CoderBase):
    """Maps symbols to bits."""

    def __init__(self, model: BinaryModel, num_bits: int = PRECISION_BITS):
        super().__init__(num_bits)
        self.model = model
        self.bits: List[int] = []

    def write(self, symbol: int) -> None:
        self._update(self.model, symbol)

    def _shift(self) -> None:
        bit = self.low >> (self.num_bits - 1)
        self.bits.append(bit)
        self.bits.extend([bit ^ 1] * self.pending)
        super()._shift()

    def finish(self) -> List[int]:
        """Terminate with a 1 so that the stream decodes back to the written symbols."""
        self.bits.append(1)
        return self.bits


class ArithmeticDecoder(_CoderBase):
    """Maps bits to symbols; input beyond the stream reads as zeros."""

    def __init__(self, model: BinaryModel, bits: Sequence[int], num_bits: int = PRECISION_BITS):
        super().__init__(num_bits)
        self.model = model
        self.input = bits
        self.consumed = 0
        self.code = 0
        for _ in range(num_bits):
            self.code = (self.code << 1) | self._read_bit()

    def _read_bit(self) -> int:
        bit = self.input[self.consumed] if self.consumed < len(self.input) else 0
        self.consumed += 1
        return int(bit)

    def read(self) -> int:
        span = self.width
        offset = self.code - self.low
        value = ((offset + 1) * self.model.total - 1) // span
        symbol = 0 if value < self.model.zero_count else 1
        self._update(self.model, symbol)
        return symbol

    def _shift(self) -> None:
        self.code = ((self.code << 1) & self.state_mask) | self._read_bit()
        super()._shift()

    def _underflow(self) -> None:
        self.code = (self.code & self.half_range) | ((self.code << 1) & (self.state_mask >> 1)) | self._read_bit()
        super()._underflow()


def encode_symbols(symbols: Iterable[int], model: BinaryModel) -> List[int]:
    """Complete (terminated) code for a symbol sequence."""
    encoder = ArithmeticEncoder(model)
    for symbol in symbols:
        encoder.write(symbol)
    return encoder.finish()


def decode_symbols(bits: Sequence[int], model: BinaryModel, count: int) -> List[int]:
    """First `count` symbols encoded in `bits`."""
    decoder = ArithmeticDecoder(model, bits)
    return [decoder.read() for _ in range(count)]
