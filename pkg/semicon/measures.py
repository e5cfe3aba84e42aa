"""
Probability measures on k-tuples and the frequency map.

A KTupleMeasure is a probability vector over Σ^k in lexicographic order. The
large-deviations rate function of the empirical k-tuple distribution of an
i.i.d. source q is the relative entropy of the measure to the product of its
(k-1)-marginal with q, finite only on shift-invariant measures. The
constraint matrix turns a k-tuple measure into the vector of forbidden-word
frequencies, which is how caps on words become linear constraints.

Weights are either exact (fractions.Fraction) or floats. Exact measures are
what the oracles and the rounding code work with; the solvers produce floats.
"""
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InputError, NotShiftInvariantError
from .words import ConstraintSpec, Word, format_rational, index_to_word, word_to_index

Weight = Union[Fraction, float]

SHIFT_INVARIANCE_TOL = 1e-10
SUM_TOL = 1e-12


class WindowMode(str, Enum):
    LINEAR = "linear"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class KTupleMeasure:
    """Probability vector over Σ^k, lexicographic order."""
    alphabet_size: int
    k: int
    weights: tuple

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise InputError("alphabet size must be >= 2")
        if self.k < 0:
            raise InputError("k must be nonnegative")
        weights = tuple(self.weights)
        if len(weights) != self.alphabet_size ** self.k:
            raise InputError(
                f"expected {self.alphabet_size ** self.k} weights for k={self.k}, got {len(weights)}"
            )
        exact = all(isinstance(w, (Fraction, int)) for w in weights)
        if exact:
            weights = tuple(Fraction(w) for w in weights)
            if any(w < 0 for w in weights):
                raise InputError("measure weights must be nonnegative")
            if sum(weights) != 1:
                raise InputError(f"exact weights sum to {format_rational(sum(weights))}, not 1")
        else:
            weights = tuple(float(w) for w in weights)
            if any(w < 0 or not math.isfinite(w) for w in weights):
                raise InputError("measure weights must be finite and nonnegative")
            if abs(math.fsum(weights) - 1.0) > SUM_TOL:
                raise InputError(f"weights sum to {math.fsum(weights)!r}, not 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_array(cls, alphabet_size: int, k: int, array: np.ndarray, renormalize: bool = True) -> "KTupleMeasure":
        """Float measure from an array; tiny negatives from roundoff are clipped."""
        values = np.clip(np.asarray(array, dtype=float).reshape(-1), 0.0, None)
        if renormalize:
            values = values / values.sum()
        return cls(alphabet_size, k, tuple(values.tolist()))

    @property
    def exact(self) -> bool:
        return bool(self.weights) and isinstance(self.weights[0], Fraction)

    @property
    def array(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights], dtype=float)

    def weight(self, word: Sequence[int]) -> Weight:
        if len(word) != self.k:
            raise InputError(f"expected a word of length {self.k}")
        return self.weights[word_to_index(word, self.alphabet_size)]

    def items(self):
        """(word, weight) pairs in lexicographic order."""
        for index, w in enumerate(self.weights):
            yield index_to_word(index, self.k, self.alphabet_size), w

    def mix(self, other: "KTupleMeasure", t: Weight) -> "KTupleMeasure":
        """t*self + (1-t)*other."""
        if (other.alphabet_size, other.k) != (self.alphabet_size, self.k):
            raise InputError("cannot mix measures of different shapes")
        return KTupleMeasure(
            self.alphabet_size, self.k,
            tuple(t * a + (1 - t) * b for a, b in zip(self.weights, other.weights)),
        )

    def to_dict(self) -> dict:
        render = format_rational if self.exact else float
        return {
            "alphabet_size": self.alphabet_size,
            "k": self.k,
            "weights": [render(w) for w in self.weights],
        }


@dataclass(frozen=True)
class EmpiricalDistribution:
    """The k-tuple empirical distribution of a sequence over n windows."""
    measure: KTupleMeasure
    n: int
    mode: WindowMode


def uniform_measure(alphabet_size: int, k: int, exact: bool = True) -> KTupleMeasure:
    count = alphabet_size ** k
    w = Fraction(1, count) if exact else 1.0 / count
    return KTupleMeasure(alphabet_size, k, (w,) * count)


def _group_sums(weights: tuple, groups: int, size: int, axis: int) -> tuple:
    # weights viewed as a (groups, size) table when axis == 1, (size, groups) when axis == 0
    if axis == 1:
        return tuple(sum(weights[g * size:(g + 1) * size]) for g in range(groups))
    return tuple(sum(weights[s * groups + g] for s in range(size)) for g in range(groups))


def marginal_first(nu: KTupleMeasure) -> KTupleMeasure:
    """Drop-last marginal: ν₁(s_0..s_{k-2}) = Σ_σ ν(s_0..s_{k-2}σ)."""
    if nu.k < 2:
        raise InputError("marginal needs k >= 2")
    groups = nu.alphabet_size ** (nu.k - 1)
    return KTupleMeasure(nu.alphabet_size, nu.k - 1, _group_sums(nu.weights, groups, nu.alphabet_size, axis=1))


def marginal_last(nu: KTupleMeasure) -> KTupleMeasure:
    """Drop-first marginal: Σ_σ ν(σ s_1..s_{k-1})."""
    if nu.k < 2:
        raise InputError("marginal needs k >= 2")
    groups = nu.alphabet_size ** (nu.k - 1)
    return KTupleMeasure(nu.alphabet_size, nu.k - 1, _group_sums(nu.weights, groups, nu.alphabet_size, axis=0))


def shift_defect(nu: KTupleMeasure) -> Weight:
    """Max-norm distance between the two (k-1)-marginals (0 for k <= 1)."""
    if nu.k < 2:
        return Fraction(0) if nu.exact else 0.0
    first = marginal_first(nu).weights
    last = marginal_last(nu).weights
    return max(abs(a - b) for a, b in zip(first, last))


def is_shift_invariant(nu: KTupleMeasure, tol: float = SHIFT_INVARIANCE_TOL) -> bool:
    """Exact measures must be exactly invariant; float ones within tol."""
    defect = shift_defect(nu)
    if nu.exact:
        return defect == 0
    return defect <= tol


def require_shift_invariant(nu: KTupleMeasure, tol: float = SHIFT_INVARIANCE_TOL) -> None:
    if not is_shift_invariant(nu, tol):
        raise NotShiftInvariantError(float(shift_defect(nu)))


def _symbol_distribution(q: Optional[Sequence[Weight]], alphabet_size: int) -> list:
    if q is None:
        return [Fraction(1, alphabet_size)] * alphabet_size
    q = list(q)
    if len(q) != alphabet_size:
        raise InputError(f"symbol distribution needs {alphabet_size} entries, got {len(q)}")
    if any(x < 0 for x in q):
        raise InputError("symbol probabilities must be nonnegative")
    if abs(float(sum(q)) - 1.0) > SUM_TOL:
        raise InputError("symbol probabilities must sum to 1")
    return q


def product_extend(mu: KTupleMeasure, q: Sequence[Weight]) -> KTupleMeasure:
    """(μ⊗q)(i_1..i_k) = μ(i_1..i_{k-1})·q(i_k)."""
    q = _symbol_distribution(q, mu.alphabet_size)
    return KTupleMeasure(mu.alphabet_size, mu.k + 1, tuple(w * x for w in mu.weights for x in q))


def rate_function(nu: KTupleMeasure, q: Optional[Sequence[Weight]] = None,
                  tol: float = SHIFT_INVARIANCE_TOL) -> float:
    """I(ν) = H(ν | ν₁⊗q) in bits, +inf off the shift-invariant set.

    q defaults to the uniform distribution; a zero entry in q is rejected.
    """
    q = _symbol_distribution(q, nu.alphabet_size)
    if any(x == 0 for x in q):
        raise InputError("rate function needs a symbol distribution with full support")
    if not is_shift_invariant(nu, tol):
        return math.inf
    size = nu.alphabet_size
    if nu.k == 0:
        return 0.0
    prefix = marginal_first(nu).weights if nu.k >= 2 else (1,)
    terms = []
    for index, w in enumerate(nu.weights):
        if w == 0:
            continue
        reference = float(prefix[index // size]) * float(q[index % size])
        if reference == 0:
            return math.inf
        terms.append(float(w) * math.log2(float(w) / reference))
    return max(math.fsum(terms), 0.0)


def _entropy(weights) -> float:
    return -math.fsum(float(w) * math.log2(float(w)) for w in weights if w > 0)


def entropy_rate(nu: KTupleMeasure) -> float:
    """H(ν) − H(ν₁): entropy per symbol of the order-(k-1) Markov chain induced by ν."""
    if nu.k < 2:
        return _entropy(nu.weights)
    return _entropy(nu.weights) - _entropy(marginal_first(nu).weights)


@dataclass(frozen=True)
class ConstraintMatrix:
    """0/1 matrix with rows indexed by forbidden words and columns by Σ^k."""
    words: tuple[Word, ...]
    alphabet_size: int
    k: int
    matrix: np.ndarray

    def row(self, word: Sequence[int]) -> np.ndarray:
        return self.matrix[self.words.index(tuple(word))]


def constraint_matrix_for(words: Sequence[Sequence[int]], alphabet_size: int,
                          k: Optional[int] = None) -> ConstraintMatrix:
    """Constraint matrix of an arbitrary word list (reducedness not required).

    Entry (φ, ω) is 1 iff ω starts with φ.
    """
    words = tuple(tuple(w) for w in words)
    if not words:
        raise InputError("constraint matrix needs at least one word")
    longest = max(len(w) for w in words)
    k = longest if k is None else k
    if k < longest:
        raise InputError(f"k={k} is shorter than the longest word ({longest})")
    matrix = np.zeros((len(words), alphabet_size ** k), dtype=np.int8)
    for row, word in enumerate(words):
        if not word or any(s < 0 or s >= alphabet_size for s in word):
            raise InputError(f"invalid forbidden word {word}")
        span = alphabet_size ** (k - len(word))
        start = word_to_index(word, alphabet_size) * span
        matrix[row, start:start + span] = 1
    return ConstraintMatrix(words, alphabet_size, k, matrix)


def build_constraint_matrix(spec: ConstraintSpec, k: Optional[int] = None) -> ConstraintMatrix:
    """The matrix of spec's forbidden set, k defaulting to the longest word."""
    return constraint_matrix_for(spec.words, spec.alphabet.size, k)


def apply_f(matrix: ConstraintMatrix, nu: KTupleMeasure) -> tuple:
    """f(ν) = 𝓜ν, exact for exact measures."""
    if (nu.alphabet_size, nu.k) != (matrix.alphabet_size, matrix.k):
        raise InputError(f"measure over Σ^{nu.k} does not match a matrix over Σ^{matrix.k}")
    if nu.exact:
        return tuple(
            sum((w for w, bit in zip(nu.weights, row) if bit), Fraction(0))
            for row in matrix.matrix
        )
    return tuple((matrix.matrix.astype(float) @ nu.array).tolist())


def empirical_k_distribution(sequence: Sequence[int], k: int, mode: Union[WindowMode, str] = WindowMode.LINEAR,
                             alphabet_size: int = 2, n: Optional[int] = None) -> EmpiricalDistribution:
    """Windowed k-tuple distribution of a sequence.

    Linear mode counts the k-windows starting at the first n positions, which
    needs a prefix of length n+k-1 (n defaults to every full window). Cyclic
    mode counts all |sequence| windows with wraparound and is exactly
    shift-invariant.
    """
    mode = WindowMode(mode)
    if k < 1:
        raise InputError("k must be >= 1")
    symbols = np.asarray(sequence, dtype=np.int64).reshape(-1)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= alphabet_size):
        raise InputError(f"sequence has symbols outside an alphabet of size {alphabet_size}")
    if mode == WindowMode.CYCLIC:
        if symbols.size == 0:
            raise InputError("cyclic distribution needs a nonempty sequence")
        windows = symbols.size if n is None else n
        if windows != symbols.size:
            raise InputError("cyclic mode uses exactly |sequence| windows")
        extended = symbols[np.arange(windows + k - 1) % symbols.size]
    else:
        if symbols.size < k:
            raise InputError(f"sequence of length {symbols.size} is shorter than k={k}")
        windows = symbols.size - k + 1 if n is None else n
        if windows < 1 or windows + k - 1 > symbols.size:
            raise InputError(f"{windows} windows need a prefix of length {windows + k - 1}")
        extended = symbols[:windows + k - 1]
    powers = alphabet_size ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = np.lib.stride_tricks.sliding_window_view(extended, k)[:windows] @ powers
    counts = np.bincount(codes, minlength=alphabet_size ** k)
    weights = tuple(Fraction(int(c), windows) for c in counts)
    return EmpiricalDistribution(KTupleMeasure(alphabet_size, k, weights), windows, mode)
