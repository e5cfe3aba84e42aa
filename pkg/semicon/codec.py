"""
Encoder and decoder for binary semiconstrained systems.

The encoder turns n uniform input bits into a word whose k-tuple statistics
follow the capacity-achieving Markov chain, and therefore satisfy the caps
with high probability:

1. Partition: the input is cut into one contiguous slice per chain state,
   slice i holding n_i ≈ n·H(q_i)·v_i / C bits.
2. Bias: each slice is arithmetic-decoded as if it were the code of a
   Bernoulli(q_i) source, giving a queue of biased bits, then padded with
   seeded Bernoulli(q_i) filler.
3. Walk: starting at 0^{k-1}, the encoder emits the next queued bit of the
   current state and moves along the edge that bit labels.

The decoder replays the walk from the received bits (every state sees the
same bits in the same order), truncates each queue to its biased length and
arithmetic-encodes it back into the input slice.

Expected failures are values: `bias` and `encode` return
`returns.result.Result` with an `ErrorEvent` on the failure side.
"""
import math
import struct
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
from returns.pipeline import is_successful
from returns.result import Failure, Result, Success

from .arithmetic import ArithmeticDecoder, ArithmeticEncoder, BinaryModel
from .capacity import CapacityResult, solve_capacity
from .errors import ContainerError, DecodeFailure, InputError
from .formats import Report
from .markov import MarkovChain, chain_from_measure
from .words import ConstraintSpec, RationalLike, format_rational, parse_rational, spec_digest, subword_frequency

DEFAULT_EPSILON = Fraction(1, 10)
FORCED_TOL = 1e-12
CHAIN_TOL = 1e-8

MAGIC = b"SCSC"
CONTAINER_VERSION = 1
_HEADER = struct.Struct(">4sBQII32sQ")


class ErrorKind(str, Enum):
    COARSE_SEGMENT = "E1"
    UNDER_VISITED = "E2"
    OVER_VISITED = "E3"


class TailRule(str, Enum):
    """Post-walk check: literal fails states left with more than pad_len queued bits,
    pinned only needs every state visited until its input is pinned."""
    LITERAL = "literal"
    PINNED = "pinned"


@dataclass(frozen=True)
class ErrorEvent:
    """A codec failure tied to a chain state (-1 when no state applies)."""
    kind: ErrorKind
    state: int
    detail: str
    visits: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.kind.value} at state {self.state}: {self.detail}"


@dataclass(frozen=True, eq=False)
class EncoderPlan:
    """Everything both ends derive from (spec, n, epsilon).

    States are the vertices of the chain's De Bruijn graph. Forced states
    (q in {0, 1}, or outside the support) carry no input and have no queue.
    """
    spec: ConstraintSpec
    n: int
    epsilon: Fraction
    capacity: float
    solved_capacity: float
    chain: MarkovChain
    forced: np.ndarray
    ideal: tuple
    counts: tuple
    biased_lens: tuple
    pad_len: int
    transmit_len: int
    start_state: int
    tail_rule: TailRule = TailRule.LITERAL

    @property
    def n_states(self) -> int:
        return self.chain.graph.n_vertices

    @property
    def q(self) -> np.ndarray:
        return self.chain.q

    @property
    def offsets(self) -> np.ndarray:
        """Slice boundaries of the partition."""
        return np.concatenate([[0], np.cumsum(self.counts)]).astype(np.int64)

    def forced_bit(self, state: int) -> int:
        return 0 if self.q[state] > 0.5 else 1

    def next_state(self, state: int, bit: int) -> int:
        return self.chain.graph.target(state * 2 + bit)


@dataclass(frozen=True, eq=False)
class BiasedSegment:
    """Biased symbols plus the number of them needed to pin the input bits."""
    symbols: np.ndarray
    pinned: int


@dataclass(frozen=True, eq=False)
class Transmission:
    bits: np.ndarray
    visits: np.ndarray
    pinned: tuple


def _binary_entropy(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(q * np.log2(q) + (1 - q) * np.log2(1 - q))
    return np.nan_to_num(h, nan=0.0)


def round_preserving_sum(ideal: Sequence[float], total: int) -> tuple:
    """Integers n_i with sum `total` and |n_i - ideal_i| < 1.

    Each value is rounded in the direction that keeps the running sum of
    rounding errors strictly inside (-1, 1); the last positive entry takes
    the remainder.
    """
    values = [float(x) for x in ideal]
    positive = [i for i, x in enumerate(values) if x > 0]
    counts = [0] * len(values)
    if not positive:
        if total:
            raise InputError("cannot distribute bits over an all-zero share vector")
        return tuple(counts)
    error = 0.0
    assigned = 0
    for i in positive[:-1]:
        low = math.floor(values[i])
        counts[i] = low if error + low - values[i] > -1 else low + 1
        error += counts[i] - values[i]
        assigned += counts[i]
    counts[positive[-1]] = total - assigned
    if counts[positive[-1]] < 0:
        raise InputError("sequential rounding produced a negative share")
    return tuple(counts)


def make_plan(spec: ConstraintSpec, n: int, epsilon: RationalLike = DEFAULT_EPSILON,
              tail_rule: Union[TailRule, str] = TailRule.LITERAL, method: str = "dual",
              result: Optional[CapacityResult] = None) -> EncoderPlan:
    """Derive the encoder plan for n input bits.

    Args:
        spec: Binary constraint spec; words shorter than 2 are lifted to pairs.
        n: Number of input bits.
        epsilon: Slack exponent in (0, 1/4).
        tail_rule: Post-walk check, see TailRule.
        method: Capacity solver.
        result: Reuse an already solved capacity (must be for this spec).

    Raises:
        InputError: non-binary alphabet, bad n or epsilon, zero capacity.
    """
    if spec.alphabet.size != 2:
        raise InputError("the codec supports binary alphabets only")
    if n < 1:
        raise InputError("n must be positive")
    epsilon = parse_rational(epsilon)
    if not 0 < epsilon < Fraction(1, 4):
        raise InputError(f"epsilon must lie in (0, 1/4), got {format_rational(epsilon)}")
    if result is None:
        result = solve_capacity(spec, method=method, k=max(spec.k, 2))
    if result.capacity <= FORCED_TOL:
        raise InputError("the constraint has zero capacity; nothing can be encoded")
    chain = chain_from_measure(result.optimizer, tol=CHAIN_TOL)
    q = chain.q
    forced = (q < FORCED_TOL) | (q > 1 - FORCED_TOL) | ~chain.support
    entropy = np.where(forced, 0.0, _binary_entropy(q))
    capacity = float(np.dot(chain.stationary, entropy))
    if capacity <= 0:
        raise InputError("the synthesized chain carries no information")
    ideal = n * entropy * chain.stationary / capacity
    counts = round_preserving_sum(ideal, n)
    eps = float(epsilon)
    slack = n ** (0.5 + eps)
    biased_lens = tuple(
        0 if forced[i] else math.ceil(counts[i] / entropy[i] + slack)
        for i in range(len(counts))
    )
    support = np.flatnonzero(chain.support)
    start = 0 if chain.support[0] else int(support[0])
    return EncoderPlan(
        spec=spec,
        n=n,
        epsilon=epsilon,
        capacity=capacity,
        solved_capacity=result.capacity,
        chain=chain,
        forced=forced,
        ideal=tuple(float(x) for x in ideal),
        counts=counts,
        biased_lens=biased_lens,
        pad_len=math.ceil(n ** (0.5 + 2 * eps)),
        transmit_len=math.ceil(n / capacity + n ** (0.5 + 2 * eps)),
        start_state=start,
        tail_rule=TailRule(tail_rule),
    )


def _as_bits(bits: Sequence[int]) -> np.ndarray:
    array = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if array.size and array.max() > 1:
        raise InputError("bit streams may only contain 0 and 1")
    return array


def partition(bits: Sequence[int], plan: EncoderPlan) -> List[np.ndarray]:
    """Slice the input into one segment per state, in state order."""
    bits = _as_bits(bits)
    if bits.size != plan.n:
        raise InputError(f"expected {plan.n} input bits, got {bits.size}")
    offsets = plan.offsets
    return [bits[offsets[i]:offsets[i + 1]] for i in range(plan.n_states)]


def bias(eta: Sequence[int], q: float, target_len: int, state: int = -1) -> Result[BiasedSegment, ErrorEvent]:
    """Arithmetic-decode eta into target_len Bernoulli(q) symbols.

    The code point is the midpoint of eta's dyadic cell: eta, then a 1, then
    zeros. Fails with E1 when target_len symbols do not narrow the interval
    into that cell of width 2^{-len(eta)}, i.e. the input is not pinned.
    """
    eta = _as_bits(eta)
    needed = eta.size
    decoder = ArithmeticDecoder(BinaryModel.from_probability(q), np.append(eta, np.uint8(1)))
    symbols = np.empty(target_len, dtype=np.uint8)
    pinned = 0 if needed == 0 else None
    for t in range(target_len):
        symbols[t] = decoder.read()
        if pinned is None and decoder.resolved >= needed:
            pinned = t + 1
    if pinned is None:
        return Failure(ErrorEvent(
            ErrorKind.COARSE_SEGMENT, state,
            f"{target_len} symbols pin only {decoder.resolved} of {needed} input bits",
        ))
    return Success(BiasedSegment(symbols, pinned))


def unbias(eta_hat: Sequence[int], q: float, out_len: int) -> np.ndarray:
    """Arithmetic-encode biased symbols and return the first out_len bits.

    Raises:
        DecodeFailure: the symbols do not pin out_len bits.
    """
    if out_len == 0:
        return np.zeros(0, dtype=np.uint8)
    encoder = ArithmeticEncoder(BinaryModel.from_probability(q))
    for symbol in _as_bits(eta_hat):
        encoder.write(int(symbol))
        if len(encoder.bits) >= out_len:
            break
    if len(encoder.bits) < out_len:
        raise DecodeFailure(f"{len(eta_hat)} biased symbols pin only {len(encoder.bits)} of {out_len} bits")
    return np.asarray(encoder.bits[:out_len], dtype=np.uint8)


def padding(plan: EncoderPlan, state: int, pad_seed: int) -> np.ndarray:
    """pad_len Bernoulli(q) filler bits for one state, reproducible from (pad_seed, state)."""
    rng = np.random.default_rng(np.random.SeedSequence([int(pad_seed), int(state)]))
    return (rng.random(plan.pad_len) >= plan.q[state]).astype(np.uint8)


def encode(bits: Sequence[int], plan: EncoderPlan, pad_seed: int = 0) -> Result[Transmission, ErrorEvent]:
    """Bias every segment, then walk the chain for transmit_len steps."""
    segments = partition(bits, plan)
    queues: List[Optional[np.ndarray]] = [None] * plan.n_states
    pinned = [0] * plan.n_states
    for state, segment in enumerate(segments):
        if plan.forced[state]:
            continue
        outcome = bias(segment, float(plan.q[state]), plan.biased_lens[state], state)
        if not is_successful(outcome):
            return outcome
        biased = outcome.unwrap()
        pinned[state] = biased.pinned
        queues[state] = np.concatenate([biased.symbols, padding(plan, state, pad_seed)])

    out = np.empty(plan.transmit_len, dtype=np.uint8)
    cursor = np.zeros(plan.n_states, dtype=np.int64)
    visits = np.zeros(plan.n_states, dtype=np.int64)
    state = plan.start_state
    for t in range(plan.transmit_len):
        visits[state] += 1
        if plan.forced[state]:
            bit = plan.forced_bit(state)
        else:
            queue = queues[state]
            if cursor[state] >= queue.size:
                return Failure(ErrorEvent(
                    ErrorKind.OVER_VISITED, state,
                    f"queue of {queue.size} bits exhausted at step {t}", int(visits[state]),
                ))
            bit = int(queue[cursor[state]])
            cursor[state] += 1
        out[t] = bit
        state = plan.next_state(state, bit)

    for state in range(plan.n_states):
        if plan.forced[state]:
            continue
        if plan.tail_rule == TailRule.LITERAL:
            remaining = queues[state].size - int(cursor[state])
            if remaining > plan.pad_len:
                return Failure(ErrorEvent(
                    ErrorKind.UNDER_VISITED, state,
                    f"{remaining} bits left untransmitted (pad_len {plan.pad_len})", int(visits[state]),
                ))
        elif cursor[state] < pinned[state]:
            return Failure(ErrorEvent(
                ErrorKind.UNDER_VISITED, state,
                f"visited {int(cursor[state])} times, {pinned[state]} needed", int(visits[state]),
            ))
    return Success(Transmission(out, visits, tuple(pinned)))


def decode(received: Sequence[int], plan: EncoderPlan) -> np.ndarray:
    """Replay the walk on the received bits and unbias every queue.

    Raises:
        DecodeFailure: wrong length, a forced transition violated, or a queue
            too short to recover its segment.
    """
    received = _as_bits(received)
    if received.size != plan.transmit_len:
        raise DecodeFailure(f"expected {plan.transmit_len} received bits, got {received.size}")
    queues: List[List[int]] = [[] for _ in range(plan.n_states)]
    state = plan.start_state
    for t, bit in enumerate(received.tolist()):
        if plan.forced[state]:
            if bit != plan.forced_bit(state):
                raise DecodeFailure(f"bit {t} violates the forced transition out of state {state}")
        else:
            queues[state].append(bit)
        state = plan.next_state(state, bit)
    pieces = []
    for state in range(plan.n_states):
        if plan.forced[state] or plan.counts[state] == 0:
            continue
        pieces.append(unbias(queues[state][:plan.biased_lens[state]], float(plan.q[state]), plan.counts[state]))
    if not pieces:
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate(pieces)


@dataclass(frozen=True, eq=False)
class Container:
    """Contents of an encoded file."""
    n: int
    epsilon: Fraction
    digest: bytes
    pad_seed: int
    bits: np.ndarray
    version: int = CONTAINER_VERSION


def pack_container(plan: EncoderPlan, bits: Sequence[int], pad_seed: int) -> bytes:
    """Header followed by the bits packed most-significant-bit first."""
    eps = plan.epsilon
    if eps.denominator >= 1 << 32:
        raise ContainerError("epsilon denominator does not fit in 32 bits")
    header = _HEADER.pack(MAGIC, CONTAINER_VERSION, plan.n, eps.numerator, eps.denominator,
                          spec_digest(plan.spec), int(pad_seed))
    return header + np.packbits(_as_bits(bits)).tobytes()


def unpack_container(data: bytes) -> Container:
    """Parse an encoded file; the bit payload keeps its zero padding to a whole byte."""
    if len(data) < _HEADER.size:
        raise ContainerError("file is too short for a header")
    magic, version, n, num, den, digest, pad_seed = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerError("not an encoded file (bad magic)")
    if version != CONTAINER_VERSION:
        raise ContainerError(f"unsupported container version {version}")
    if den == 0:
        raise ContainerError("epsilon has a zero denominator")
    payload = np.frombuffer(data[_HEADER.size:], dtype=np.uint8)
    return Container(n, Fraction(num, den), digest, pad_seed, np.unpackbits(payload), version)


def write_container(path: Path, plan: EncoderPlan, bits: Sequence[int], pad_seed: int) -> None:
    Path(path).write_bytes(pack_container(plan, bits, pad_seed))


def read_container(path: Path) -> Container:
    return unpack_container(Path(path).read_bytes())


def received_bits(container: Container, plan: EncoderPlan) -> np.ndarray:
    """Check a container against a plan and strip the byte padding."""
    if container.digest != spec_digest(plan.spec):
        raise ContainerError("encoded file was produced for a different constraint spec")
    if (container.n, container.epsilon) != (plan.n, plan.epsilon):
        raise ContainerError("encoded file parameters do not match the plan")
    bits = container.bits
    if bits.size < plan.transmit_len or bits.size - plan.transmit_len >= 8 or bits[plan.transmit_len:].any():
        raise ContainerError(f"payload does not hold {plan.transmit_len} transmitted bits")
    return bits[:plan.transmit_len]


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    success: bool
    error: Optional[ErrorKind]
    frequencies: Optional[tuple]
    max_violation: Optional[float]
    weak_member: Optional[bool]


@dataclass(frozen=True, eq=False)
class SimulationResult:
    plan: EncoderPlan
    outcomes: tuple

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def success_rate(self) -> float:
        return sum(o.success for o in self.outcomes) / self.trials if self.outcomes else 0.0

    @property
    def error_counts(self) -> dict:
        counts = Counter(o.error for o in self.outcomes if o.error is not None)
        return {kind.value: counts.get(kind, 0) for kind in ErrorKind}

    @property
    def rate(self) -> float:
        return self.plan.n / self.plan.transmit_len


def run_trial(plan: EncoderPlan, trial: int, seed: np.random.SeedSequence) -> TrialOutcome:
    """One uniform input through encode and decode."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, plan.n, dtype=np.uint8)
    pad_seed = int(seed.generate_state(1, dtype=np.uint64)[0])
    outcome = encode(bits, plan, pad_seed)
    if not is_successful(outcome):
        return TrialOutcome(trial, False, outcome.failure().kind, None, None, None)
    sent = outcome.unwrap().bits
    frequencies = tuple(subword_frequency(entry.word, sent) for entry in plan.spec.forbidden)
    excess = [f - entry.cap for f, entry in zip(frequencies, plan.spec.forbidden)]
    weak = all(plan.spec.tolerance.admits(e, sent.size) for e in excess)
    try:
        success = bool(np.array_equal(decode(sent, plan), bits))
    except DecodeFailure:
        success = False
    return TrialOutcome(trial, success, None, frequencies, float(max(excess)), weak)


def simulate(spec: ConstraintSpec, n: int, epsilon: RationalLike = DEFAULT_EPSILON, trials: int = 100,
             seed: int = 0, jobs: int = 1, plan: Optional[EncoderPlan] = None,
             tail_rule: Union[TailRule, str] = TailRule.LITERAL,
             vprint: Optional[Callable[[str, int], None]] = None) -> SimulationResult:
    """Seeded Monte Carlo run of the codec.

    Trial seeds are spawned from `seed`, so results do not depend on `jobs`.
    """
    if trials < 1:
        raise InputError("trials must be positive")
    if plan is None:
        plan = make_plan(spec, n, epsilon, tail_rule=tail_rule)
    seeds = np.random.SeedSequence(seed).spawn(trials)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_trial, [plan] * trials, range(trials), seeds))
    else:
        outcomes = []
        for trial, child in enumerate(seeds):
            outcomes.append(run_trial(plan, trial, child))
            if vprint is not None and (trial + 1) % 10 == 0:
                vprint(f"📐 {trial + 1}/{trials} trials", 2)
    outcomes.sort(key=lambda o: o.trial)
    return SimulationResult(plan, tuple(outcomes))


def simulation_report(result: SimulationResult) -> Report:
    """Per-trial rows with the aggregate statistics in the metadata."""
    plan = result.plan
    rows = [
        [o.trial, o.success,
         int(o.error == ErrorKind.COARSE_SEGMENT),
         int(o.error == ErrorKind.UNDER_VISITED),
         int(o.error == ErrorKind.OVER_VISITED),
         o.max_violation]
        for o in result.outcomes
    ]
    sent = [o for o in result.outcomes if o.frequencies is not None]
    stats = {}
    for index, entry in enumerate(plan.spec.forbidden):
        values = np.array([float(o.frequencies[index]) for o in sent])
        stats[plan.spec.alphabet.format_word(entry.word)] = {
            "cap": entry.cap,
            "mean": float(values.mean()) if values.size else None,
            "std": float(values.std(ddof=1)) if values.size > 1 else None,
            "max": float(values.max()) if values.size else None,
        }
    return Report(
        title="Codec simulation",
        columns=["trial", "success", "e1", "e2", "e3", "max_violation"],
        rows=rows,
        metadata={
            "n": plan.n,
            "epsilon": plan.epsilon,
            "trials": result.trials,
            "success_rate": result.success_rate,
            "errors": result.error_counts,
            "rate": result.rate,
            "capacity": plan.solved_capacity,
            "chain_rate": plan.capacity,
            "transmit_len": plan.transmit_len,
            "tolerance": plan.spec.tolerance.value(plan.transmit_len),
            "weak_member_rate": (sum(bool(o.weak_member) for o in sent) / len(sent)) if sent else None,
            "frequencies": stats,
        },
    )
