"""
Word-level primitives for semiconstrained systems.

A semiconstrained system (SCS) is given by a reduced set of forbidden words,
each with a cap on how often it may appear: a word belongs to the system when
the empirical frequency of every forbidden word stays at or below its cap.
The weak variant (WSCS) adds a vanishing tolerance xi(n) to every cap, and the
cyclic variant counts windows that wrap around the end of the word.

This module provides:
- Alphabets, words and constraint specs (with JSON round-tripping)
- Exact subword frequencies (linear, cyclic and D-dimensional cyclic)
- Membership tests in strict, weak and cyclic mode
- Exhaustive enumeration of admissible words, used as a brute-force oracle
- Constructors for the classic families: (0,k,p)-RLL, (d,k)-RLL and the
  multi-level cell interference constraint

All frequencies are exact rationals (fractions.Fraction) so that boundary
cases, where a frequency equals its cap, are decided deterministically.
"""
import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceededError, InputError, SpecError

Word = tuple[int, ...]
RationalLike = Union[str, int, float, Fraction]

SYMBOL_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

# Exhaustive scans are refused above |Σ|^n = 2^26 words.
ENUMERATION_BUDGET_BITS = 26
_CHUNK = 1 << 16


class Mode(str, Enum):
    """Membership flavour."""
    STRICT = "strict"
    WEAK = "weak"
    CYCLIC = "cyclic"


def parse_rational(value: RationalLike) -> Fraction:
    """Convert "num/den", a decimal string, an int or a float to an exact Fraction.

    Decimals keep their power-of-ten denominator: "0.05" and 0.05 both give 1/20.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, (Fraction, int)) or isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    text = str(value).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {value!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "num/den" (integers without a denominator)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Alphabet:
    """Symbols 0..size-1."""
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 2:
            raise InputError(f"alphabet size must be an integer >= 2, got {self.size!r}")
        if self.size > len(SYMBOL_CHARS):
            raise InputError(f"alphabet size {self.size} exceeds {len(SYMBOL_CHARS)} printable symbols")

    def validate(self, word: Sequence[int]) -> Word:
        """Return the word as a tuple, raising InputError on foreign symbols."""
        symbols = tuple(int(s) for s in word)
        for s in symbols:
            if s < 0 or s >= self.size:
                raise InputError(f"symbol {s} is outside the alphabet of size {self.size}")
        return symbols

    def parse_word(self, text: str) -> Word:
        """Parse a symbol string such as "1101"."""
        try:
            symbols = tuple(SYMBOL_CHARS.index(ch) for ch in text.strip().lower())
        except ValueError as exc:
            raise InputError(f"invalid symbol in word {text!r}") from exc
        return self.validate(symbols)

    def format_word(self, word: Sequence[int]) -> str:
        """Render a word as a symbol string."""
        return "".join(SYMBOL_CHARS[s] for s in self.validate(word))

    def words(self, length: int) -> Iterable[Word]:
        """All words of the given length in lexicographic order."""
        for index in range(self.size ** length):
            yield index_to_word(index, length, self.size)


def index_to_word(index: int, length: int, size: int) -> Word:
    """Lexicographic rank to word (most significant symbol first)."""
    symbols = []
    for _ in range(length):
        index, digit = divmod(index, size)
        symbols.append(digit)
    return tuple(reversed(symbols))


def word_to_index(word: Sequence[int], size: int) -> int:
    """Word to its lexicographic rank among words of the same length."""
    index = 0
    for s in word:
        index = index * size + s
    return index


@dataclass(frozen=True)
class Tolerance:
    """The weak-membership slack xi(n) = a/n + b/sqrt(n), a, b >= 0 rational."""
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "b", parse_rational(self.b))
        if self.a < 0 or self.b < 0:
            raise SpecError("tolerance coefficients must be nonnegative")

    def value(self, n: int) -> float:
        """xi(n) as a float, for reporting."""
        if n <= 0:
            return math.inf
        return float(self.a) / n + float(self.b) / math.sqrt(n)

    def admits(self, excess: Fraction, n: int) -> bool:
        """Exact test of excess <= xi(n)."""
        excess = Fraction(excess) - self.a / n
        if excess <= 0:
            return True
        # excess <= b / sqrt(n)  <=>  excess^2 * n <= b^2
        return excess * excess * n <= self.b * self.b


@dataclass(frozen=True)
class ForbiddenWord:
    """A forbidden word and its frequency cap."""
    word: Word
    cap: Fraction


@dataclass(frozen=True)
class ConstraintSpec:
    """The (forbidden set, caps) pair defining an SCS/WSCS, plus the weak tolerance.

    When no tolerance is given the default xi(n) = 2|Σ|^{k-1}/n is used, k being
    the longest forbidden word.
    """
    alphabet: Alphabet
    forbidden: tuple[ForbiddenWord, ...]
    tolerance: Optional[Tolerance] = field(default=None)

    def __post_init__(self):
        entries = []
        for entry in self.forbidden:
            word = self.alphabet.validate(entry.word)
            if not word:
                raise SpecError("forbidden words must be nonempty")
            cap = parse_rational(entry.cap)
            if cap < 0 or cap > 1:
                raise SpecError(f"cap {format_rational(cap)} for {self.alphabet.format_word(word)} is outside [0, 1]")
            entries.append(ForbiddenWord(word, cap))
        if not entries:
            raise SpecError("a constraint spec needs at least one forbidden word")
        words = [e.word for e in entries]
        if len(set(words)) != len(words):
            raise SpecError("duplicate forbidden word")
        if not is_reduced(words):
            raise SpecError("forbidden set is not reduced (a word contains another one)")
        object.__setattr__(self, "forbidden", tuple(entries))
        if self.tolerance is None:
            default = Tolerance(a=Fraction(2 * self.alphabet.size ** (self.k - 1)))
            object.__setattr__(self, "tolerance", default)

    @property
    def k(self) -> int:
        return max(len(e.word) for e in self.forbidden)

    @property
    def words(self) -> list[Word]:
        return [e.word for e in self.forbidden]

    @property
    def caps(self) -> list[Fraction]:
        return [e.cap for e in self.forbidden]

    def describe(self) -> str:
        """Short human-readable summary."""
        parts = [f"{self.alphabet.format_word(e.word)}<={format_rational(e.cap)}" for e in self.forbidden]
        return f"|Σ|={self.alphabet.size} " + ", ".join(parts)


def make_spec(alphabet_size: int, forbidden: dict, tolerance: Optional[Tolerance] = None) -> ConstraintSpec:
    """Build a spec from {word string: cap} pairs."""
    alphabet = Alphabet(alphabet_size)
    entries = tuple(ForbiddenWord(alphabet.parse_word(w), parse_rational(c)) for w, c in forbidden.items())
    return ConstraintSpec(alphabet, entries, tolerance)


def rll_spec(k: int, p: RationalLike) -> ConstraintSpec:
    """Binary (0,k,p)-RLL: the run 1^{k+1} may occur with frequency at most p."""
    if k < 0:
        raise InputError("k must be nonnegative")
    return ConstraintSpec(Alphabet(2), (ForbiddenWord((1,) * (k + 1), parse_rational(p)),))


def dk_rll_spec(d: int, k: int, p_short: RationalLike, p_long: RationalLike) -> ConstraintSpec:
    """Semiconstrained (d,k)-RLL: short gaps 10^j1 (j < d) capped by p_short, 0^{k+1} by p_long."""
    if d < 1 or k < d:
        raise InputError("need 1 <= d <= k")
    short = parse_rational(p_short)
    entries = [ForbiddenWord((1,) + (0,) * j + (1,), short) for j in range(d)]
    entries.append(ForbiddenWord((0,) * (k + 1), parse_rational(p_long)))
    return ConstraintSpec(Alphabet(2), tuple(entries))


def interference_spec(levels: int, p: RationalLike) -> ConstraintSpec:
    """Multi-level cells: the high-low-high pattern (q-1, 0, q-1) capped by p."""
    top = levels - 1
    return ConstraintSpec(Alphabet(levels), (ForbiddenWord((top, 0, top), parse_rational(p)),))


def spec_to_dict(spec: ConstraintSpec) -> dict:
    """JSON-ready form of a spec."""
    return {
        "alphabet_size": spec.alphabet.size,
        "forbidden": [
            {"word": spec.alphabet.format_word(e.word), "cap": format_rational(e.cap)}
            for e in spec.forbidden
        ],
        "tolerance": {"a": format_rational(spec.tolerance.a), "b": format_rational(spec.tolerance.b)},
    }


def spec_from_dict(data: dict) -> ConstraintSpec:
    """Inverse of spec_to_dict; the tolerance block is optional."""
    try:
        alphabet = Alphabet(int(data["alphabet_size"]))
        entries = tuple(
            ForbiddenWord(alphabet.parse_word(str(item["word"])), parse_rational(item["cap"]))
            for item in data["forbidden"]
        )
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed constraint spec: missing {exc}") from exc
    tolerance = None
    if data.get("tolerance") is not None:
        block = data["tolerance"]
        tolerance = Tolerance(a=block.get("a", 0), b=block.get("b", 0))
    return ConstraintSpec(alphabet, entries, tolerance)


def load_spec(path: Path) -> ConstraintSpec:
    """Read a spec from a JSON file."""
    try:
        with Path(path).open(encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    return spec_from_dict(data)


def dump_spec(spec: ConstraintSpec, path: Path) -> None:
    """Write a spec as JSON."""
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(spec_to_dict(spec), f, indent=2)
        f.write("\n")


def spec_digest(spec: ConstraintSpec) -> bytes:
    """SHA-256 of the canonical JSON form (32 bytes)."""
    canonical = json.dumps(spec_to_dict(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).digest()


def _as_array(word: Sequence[int]) -> np.ndarray:
    array = np.asarray(word, dtype=np.int64).reshape(-1)
    if array.size and array.min() < 0:
        raise InputError("symbols must be nonnegative")
    return array


def _check_symbols(alphabet: Optional[Alphabet], *words: Sequence[int]) -> None:
    if alphabet is None:
        for w in words:
            _as_array(w)
        return
    for w in words:
        alphabet.validate(w)


def subword_count(tau: Sequence[int], omega: Sequence[int], cyclic: bool = False) -> int:
    """Number of (linear or cyclic) windows of omega equal to tau."""
    t = _as_array(tau)
    w = _as_array(omega)
    m = t.size
    if m == 0:
        raise InputError("pattern must be nonempty")
    if cyclic:
        if w.size == 0:
            return 0
        reps = -(-(w.size + m - 1) // w.size)
        w = np.tile(w, reps)[: w.size + m - 1]
        n_windows = _as_array(omega).size
    else:
        if m > w.size:
            return 0
        n_windows = w.size - m + 1
    windows = np.lib.stride_tricks.sliding_window_view(w, m)[:n_windows]
    return int(np.all(windows == t, axis=1).sum())


def subword_frequency(tau: Sequence[int], omega: Sequence[int], alphabet: Optional[Alphabet] = None) -> Fraction:
    """T(tau, omega): matching windows over the |omega|-|tau|+1 window positions (0 if tau is longer)."""
    _check_symbols(alphabet, tau, omega)
    windows = len(omega) - len(tau) + 1
    if windows <= 0:
        return Fraction(0)
    return Fraction(subword_count(tau, omega), windows)


def cyclic_subword_frequency(tau: Sequence[int], omega: Sequence[int], alphabet: Optional[Alphabet] = None) -> Fraction:
    """T^cyc(tau, omega): windows taken with indices modulo |omega|."""
    _check_symbols(alphabet, tau, omega)
    if len(omega) == 0:
        raise InputError("cyclic frequency needs a nonempty word")
    return Fraction(subword_count(tau, omega, cyclic=True), len(omega))


def cyclic_frequency_ddim(tau: Sequence[int], omega: np.ndarray, dimensions: int) -> Fraction:
    """D-dimensional cyclic frequency: axis-aligned windows along every axis, normalized by n^D.

    The value may exceed 1 because each of the D axes contributes its own count.
    """
    t = _as_array(tau)
    array = np.asarray(omega)
    if dimensions < 1 or array.ndim != dimensions:
        raise InputError(f"expected a {dimensions}-dimensional array, got {array.ndim} dimensions")
    n = array.shape[0]
    if n == 0 or any(side != n for side in array.shape):
        raise InputError(f"array must be n x ... x n, got shape {array.shape}")
    if t.size == 0:
        raise InputError("pattern must be nonempty")
    total = 0
    for axis in range(dimensions):
        match = np.ones(array.shape, dtype=bool)
        for offset, symbol in enumerate(t):
            match &= np.roll(array, -offset, axis=axis) == symbol
        total += int(match.sum())
    return Fraction(total, n ** dimensions)


def member_ddim(omega: np.ndarray, word: Sequence[int], cap: RationalLike) -> bool:
    """D-dimensional cyclic semiconstraint T^cyc(word, omega) <= cap."""
    array = np.asarray(omega)
    return cyclic_frequency_ddim(word, array, array.ndim) <= parse_rational(cap)


def _contains(haystack: Sequence[int], needle: Sequence[int]) -> bool:
    m = len(needle)
    return any(tuple(haystack[i:i + m]) == tuple(needle) for i in range(len(haystack) - m + 1))


def is_reduced(forbidden: Iterable[Sequence[int]]) -> bool:
    """True iff no word in the list has a proper subword also in the list."""
    words = [tuple(w) for w in forbidden]
    for i, outer in enumerate(words):
        for j, inner in enumerate(words):
            if i != j and len(inner) < len(outer) and _contains(outer, inner):
                return False
    return True


def _window_count(length: int, word_length: int, mode: Mode) -> int:
    if mode == Mode.CYCLIC:
        return length
    return length - word_length + 1


def max_admissible_count(cap: Fraction, length: int, word_length: int, mode: Mode, tolerance: Tolerance) -> Optional[int]:
    """Largest window count of a forbidden word compatible with membership.

    Returns None when every count is admissible (no window fits).
    """
    windows = _window_count(length, word_length, mode)
    if windows <= 0:
        return None
    if mode == Mode.WEAK:
        best = -1
        for count in range(windows + 1):
            if tolerance.admits(Fraction(count, windows) - cap, length):
                best = count
        return best
    return math.floor(cap * windows)


def member(omega: Sequence[int], spec: ConstraintSpec, mode: Union[Mode, str] = Mode.STRICT) -> bool:
    """Membership of omega in the strict, weak or cyclic system."""
    mode = Mode(mode)
    omega = spec.alphabet.validate(omega)
    n = len(omega)
    for entry in spec.forbidden:
        if mode == Mode.CYCLIC:
            if n == 0:
                continue
            if cyclic_subword_frequency(entry.word, omega) > entry.cap:
                return False
            continue
        frequency = subword_frequency(entry.word, omega)
        if mode == Mode.STRICT:
            if frequency > entry.cap:
                return False
        elif n > 0 and not spec.tolerance.admits(frequency - entry.cap, n):
            return False
    return True


def check_budget(alphabet_size: int, n: int) -> None:
    """Refuse scans over more than 2^26 words."""
    if n < 0:
        raise InputError("length must be nonnegative")
    if n * math.log2(alphabet_size) > ENUMERATION_BUDGET_BITS + 1e-12:
        raise BudgetExceededError(
            f"enumerating {alphabet_size}^{n} words exceeds the budget of 2^{ENUMERATION_BUDGET_BITS}"
        )


def _digit_block(start: int, stop: int, n: int, size: int) -> np.ndarray:
    ids = np.arange(start, stop, dtype=np.int64)
    powers = size ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (ids[:, None] // powers[None, :]) % size


def _block_counts(digits: np.ndarray, word: Word, cyclic: bool) -> np.ndarray:
    n = digits.shape[1]
    m = len(word)
    if cyclic:
        extended = digits[:, np.arange(n + m - 1) % n]
        windows = n
    else:
        extended = digits
        windows = n - m + 1
    match = np.ones((digits.shape[0], windows), dtype=bool)
    for offset, symbol in enumerate(word):
        match &= extended[:, offset:offset + windows] == symbol
    return match.sum(axis=1)


def enumerate_count(spec: ConstraintSpec, n: int, mode: Union[Mode, str] = Mode.STRICT) -> int:
    """|B_n| (or its weak/cyclic variant) by exhaustive scan of Σ^n."""
    mode = Mode(mode)
    size = spec.alphabet.size
    check_budget(size, n)
    if n == 0:
        return 1
    limits = []
    for entry in spec.forbidden:
        limit = max_admissible_count(entry.cap, n, len(entry.word), mode, spec.tolerance)
        if limit is not None:
            if limit < 0:
                return 0
            limits.append((entry.word, limit))
    total_words = size ** n
    if not limits:
        return total_words
    admissible = 0
    for start in range(0, total_words, _CHUNK):
        digits = _digit_block(start, min(start + _CHUNK, total_words), n, size)
        ok = np.ones(digits.shape[0], dtype=bool)
        for word, limit in limits:
            ok &= _block_counts(digits, word, mode == Mode.CYCLIC) <= limit
        admissible += int(ok.sum())
    return admissible


def admissible_fraction(spec: ConstraintSpec, n: int, mode: Union[Mode, str] = Mode.STRICT) -> Fraction:
    """|B_n| / |Σ|^n, the probability that a uniform word is admissible."""
    return Fraction(enumerate_count(spec, n, mode), spec.alphabet.size ** n)
