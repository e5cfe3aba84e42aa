import random
from fractions import Fraction

import pytest

from semicon.arithmetic import (PROBABILITY_BITS, ArithmeticDecoder, ArithmeticEncoder, BinaryModel,
                                decode_symbols, encode_symbols)
from semicon.errors import InputError

from . import random_word


class TestBinaryModel:
    """Quantized Bernoulli models."""

    def test_half(self):
        model = BinaryModel.from_probability(0.5)
        assert model.zero_count == 1 << (PROBABILITY_BITS - 1)
        assert model.probability == 0.5

    def test_exact_fraction(self):
        model = BinaryModel.from_probability(Fraction(1, 4))
        assert model.zero_count == 1 << (PROBABILITY_BITS - 2)

    def test_tiny_probabilities_keep_both_symbols(self):
        assert BinaryModel.from_probability(1e-15).zero_count == 1
        model = BinaryModel.from_probability(1 - 1e-15)
        assert model.zero_count == model.total - 1

    def test_degenerate_probabilities_rejected(self):
        with pytest.raises(InputError):
            BinaryModel.from_probability(0)
        with pytest.raises(InputError):
            BinaryModel.from_probability(1)

    def test_bounds(self):
        model = BinaryModel(3, 8)
        assert model.bounds(0) == (0, 3)
        assert model.bounds(1) == (3, 8)
        with pytest.raises(InputError):
            model.bounds(2)


class TestCoder:
    """Encoder and decoder agreement."""

    def test_fair_model_is_the_identity(self):
        bits = random_word(random.Random(1), 300)
        model = BinaryModel.from_probability(0.5)
        assert decode_symbols(bits, model, len(bits)) == list(bits)
        assert encode_symbols(bits, model) == list(bits) + [1]

    def test_fair_model_settles_one_bit_per_symbol(self):
        encoder = ArithmeticEncoder(BinaryModel.from_probability(0.5))
        for symbol in (0, 1, 1, 0, 1):
            encoder.write(symbol)
        assert encoder.resolved == 5

    @pytest.mark.parametrize("q", [0.2, Fraction(1, 3), 0.97])
    def test_terminated_stream_decodes(self, q):
        rng = random.Random(5)
        model = BinaryModel.from_probability(q)
        symbols = [0 if rng.random() < float(q) else 1 for _ in range(2000)]
        assert decode_symbols(encode_symbols(symbols, model), model, len(symbols)) == symbols

    def test_width_stays_above_minimum(self):
        rng = random.Random(8)
        encoder = ArithmeticEncoder(BinaryModel.from_probability(0.01))
        for _ in range(5000):
            encoder.write(0 if rng.random() < 0.01 else 1)
            assert encoder.minimum_range <= encoder.width <= encoder.full_range

    def test_reencoding_decoded_symbols_reproduces_settled_input(self):
        rng = random.Random(13)
        for q in (0.1, 0.3, 0.75):
            model = BinaryModel.from_probability(q)
            source = random_word(rng, 400)
            decoder = ArithmeticDecoder(model, source)
            symbols = [decoder.read() for _ in range(300)]
            encoder = ArithmeticEncoder(model)
            for symbol in symbols:
                encoder.write(symbol)
            assert encoder.resolved == decoder.resolved
            assert encoder.bits == list(source[:encoder.resolved])

    def test_decoder_reads_zeros_past_the_end(self):
        model = BinaryModel.from_probability(0.5)
        assert decode_symbols([1, 1], model, 6) == [1, 1, 0, 0, 0, 0]
