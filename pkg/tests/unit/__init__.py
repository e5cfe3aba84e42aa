import random
from fractions import Fraction
from unittest.mock import MagicMock

import numpy as np

# Word of the reference triple table and its distribution over the first 10 windows
TABLE1_WORD = (1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 0)
TABLE1_WEIGHTS = tuple(Fraction(x, 10) for x in (1, 1, 2, 1, 2, 2, 1, 0))

LOG2_GOLDEN = 0.6942419136306174
LOG2_TRIBONACCI = 0.8791464217820543


def random_word(rng: random.Random, length: int, size: int = 2) -> tuple:
    return tuple(rng.randrange(size) for _ in range(length))


def random_shift_invariant_measure(rng: random.Random, k: int, size: int = 2, length: int = 12):
    """Exact shift-invariant measure: cyclic k-tuple distribution of a random word."""
    from semicon.measures import empirical_k_distribution
    word = random_word(rng, length, size)
    return empirical_k_distribution(word, k, mode="cyclic", alphabet_size=size).measure


def random_rational_circulation(rng: random.Random, order: int, total: int, cycles: int = 3):
    """Rational circulation of a given total: random positive mix of cyclic-word flows."""
    from semicon.markov import Circulation, DeBruijnGraph
    graph = DeBruijnGraph(order, 2)
    weights = [Fraction(0)] * graph.n_edges
    for _ in range(cycles):
        word = random_word(rng, rng.randint(order + 1, 3 * (order + 1)))
        coefficient = Fraction(rng.randint(1, 97), rng.randint(1, 31))
        extended = word + word[:order]
        for i in range(len(word)):
            edge = 0
            for s in extended[i:i + order + 1]:
                edge = 2 * edge + s
            weights[edge] += coefficient
    scale = Fraction(total) / sum(weights)
    return Circulation(graph, tuple(w * scale for w in weights))


def count_no_run(n: int, run: int) -> int:
    """Binary words of length n without `run` consecutive ones (transfer recursion)."""
    counts = [1] + [0] * (run - 1)  # counts[j]: words ending in exactly j ones
    for _ in range(n):
        counts = [sum(counts)] + counts[:-1]
    return sum(counts)


def uniform_bits(seed: int, n: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


def create_mock_run_context(tmp_path=None):
    """Create a mock RunContext for unit tests."""
    from semicon.__main__ import RunContext

    mock_context = MagicMock(spec=RunContext)

    if tmp_path:
        mock_workdir = MagicMock()
        mock_workdir.exists.return_value = True
        mock_context.workdir = mock_workdir

    return mock_context
