"""
De Bruijn graphs, Markov-chain synthesis and integer circulation rounding.

The De Bruijn graph of order m has the m-tuples as vertices and the
(m+1)-tuples as edges: the edge u·a leaves u and enters the last m symbols of
u·a. A shift-invariant (m+1)-tuple measure is exactly a stationary edge flow
on this graph, so it defines a Markov chain whose edge frequencies reproduce
the measure. This is the chain the encoder walks.

The second half of the module implements the rounding of rational
circulations to integer ones. Weights are moved around cycles of the
underlying undirected graph (cooriented edges gain, disoriented edges lose)
until every weight is an integer, keeping each edge within
floor(w) <= w' <= ceil(w) + 1. Dividing the result by its total gives the
closest achievable empirical k-tuple distribution, and an Eulerian circuit of
the integer flow gives a cyclic word that realizes it.

All circulation arithmetic is exact (fractions.Fraction). Vertices and edges
are identified with their lexicographic rank, which makes every search
deterministic.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CirculationError, InputError, ReducibleChainError
from .formats import Report
from .measures import KTupleMeasure, SHIFT_INVARIANCE_TOL, require_shift_invariant
from .words import Alphabet, Word, index_to_word

DIRECT_SOLVE_LIMIT = 2048


@dataclass(frozen=True)
class DeBruijnGraph:
    """De Bruijn graph of a given order; edge u·a has rank u*|Σ| + a."""
    order: int
    alphabet_size: int

    @property
    def n_vertices(self) -> int:
        return self.alphabet_size ** self.order

    @property
    def n_edges(self) -> int:
        return self.alphabet_size ** (self.order + 1)

    def source(self, edge: int) -> int:
        return edge // self.alphabet_size

    def target(self, edge: int) -> int:
        return edge % self.n_vertices

    def label(self, edge: int) -> int:
        return edge % self.alphabet_size

    def out_edges(self, vertex: int) -> range:
        return range(vertex * self.alphabet_size, (vertex + 1) * self.alphabet_size)

    def in_edges(self, vertex: int) -> list:
        return [j * self.n_vertices + vertex for j in range(self.alphabet_size)]

    def successors(self, vertex: int) -> list:
        return [self.target(e) for e in self.out_edges(vertex)]

    def edge_between(self, u: int, v: int) -> Optional[int]:
        """The edge u -> v, if the graph has one (the 0-labelled loop when order is 0)."""
        edge = u * self.alphabet_size + v % self.alphabet_size
        return edge if self.target(edge) == v else None

    def vertex_word(self, vertex: int) -> Word:
        return index_to_word(vertex, self.order, self.alphabet_size)

    def edge_word(self, edge: int) -> Word:
        return index_to_word(edge, self.order + 1, self.alphabet_size)

    @property
    def sources(self) -> np.ndarray:
        return np.arange(self.n_edges) // self.alphabet_size

    @property
    def targets(self) -> np.ndarray:
        return np.arange(self.n_edges) % self.n_vertices


def build_debruijn(m: int, alphabet: Union[Alphabet, int]) -> DeBruijnGraph:
    """De Bruijn graph of order m >= 1 in lexicographic order."""
    size = alphabet.size if isinstance(alphabet, Alphabet) else Alphabet(int(alphabet)).size
    if m < 1:
        raise InputError("De Bruijn order must be >= 1")
    return DeBruijnGraph(m, size)


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Chain on the vertices of a De Bruijn graph.

    edge_probs[u, a] is the probability of leaving u along the a-labelled
    edge; vertices outside the support (zero stationary mass) get uniform
    rows so that the matrix stays stochastic.
    """
    graph: DeBruijnGraph
    transition: np.ndarray
    stationary: np.ndarray
    edge_probs: np.ndarray
    support: np.ndarray

    @property
    def q(self) -> np.ndarray:
        """Probability of the 0-labelled edge out of every state."""
        return self.edge_probs[:, 0]


def _transition_from_edge_probs(graph: DeBruijnGraph, edge_probs: np.ndarray) -> np.ndarray:
    transition = np.zeros((graph.n_vertices, graph.n_vertices))
    np.add.at(transition, (graph.sources, graph.targets), edge_probs.reshape(-1))
    return transition


def chain_from_measure(p: KTupleMeasure, tol: float = SHIFT_INVARIANCE_TOL) -> MarkovChain:
    """Chain on the order-(k-1) De Bruijn graph whose edge frequencies are p."""
    if p.k < 2:
        raise InputError("chain synthesis needs k >= 2")
    require_shift_invariant(p, tol)
    graph = build_debruijn(p.k - 1, p.alphabet_size)
    weights = p.array.reshape(graph.n_vertices, p.alphabet_size)
    mass = weights.sum(axis=1)
    support = mass > 0
    edge_probs = np.full_like(weights, 1.0 / p.alphabet_size)
    edge_probs[support] = weights[support] / mass[support, None]
    return MarkovChain(
        graph=graph,
        transition=_transition_from_edge_probs(graph, edge_probs),
        stationary=mass / mass.sum(),
        edge_probs=edge_probs,
        support=support,
    )


def edge_measure(chain: MarkovChain) -> KTupleMeasure:
    """v_u·A(u, a): the stationary edge distribution of the chain."""
    flow = chain.stationary[:, None] * chain.edge_probs
    return KTupleMeasure.from_array(chain.graph.alphabet_size, chain.graph.order + 1, flow)


def _closed_classes(adjacency: np.ndarray) -> list:
    n_classes, labels = connected_components(csr_matrix(adjacency), directed=True, connection="strong")
    rows, cols = np.nonzero(adjacency)
    leaking = set(labels[rows[labels[rows] != labels[cols]]].tolist())
    closed = [np.flatnonzero(labels == c) for c in range(n_classes) if c not in leaking]
    return sorted(closed, key=lambda members: members[0])


def stationary(transition: np.ndarray, tol: float = 1e-13, max_iter: int = 1_000_000) -> np.ndarray:
    """Left Perron vector of a stochastic matrix with a single closed class.

    Small chains are solved directly; large ones by power iteration on the
    lazy chain (A + I)/2 from the uniform vector.
    """
    A = np.asarray(transition, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("transition matrix must be square")
    if np.any(A < 0) or not np.allclose(A.sum(axis=1), 1.0, atol=1e-12):
        raise InputError("transition matrix must be row stochastic")
    closed = _closed_classes(A > 0)
    if len(closed) > 1:
        raise ReducibleChainError(np.concatenate(closed[1:]).tolist())
    n = A.shape[0]
    if n <= DIRECT_SOLVE_LIMIT:
        system = np.vstack([A.T - np.eye(n), np.ones(n)])
        rhs = np.zeros(n + 1)
        rhs[-1] = 1.0
        v = np.linalg.lstsq(system, rhs, rcond=None)[0]
    else:
        lazy = 0.5 * (A + np.eye(n))
        v = np.full(n, 1.0 / n)
        for _ in range(max_iter):
            nxt = v @ lazy
            if np.max(np.abs(nxt - v)) < tol:
                v = nxt
                break
            v = nxt
    v = np.clip(v, 0.0, None)
    return v / v.sum()


def mixing_profile(chain: MarkovChain, n: int) -> np.ndarray:
    """max_i TV((A^t)_i, v) for t = 1..n."""
    power = np.eye(chain.graph.n_vertices)
    profile = np.empty(n)
    for t in range(n):
        power = power @ chain.transition
        profile[t] = 0.5 * np.abs(power - chain.stationary).sum(axis=1).max()
    return profile


def fit_geometric_decay(profile: Sequence[float], floor: float = 1e-300) -> tuple:
    """Least-squares fit of profile[t-1] ~ c·exp(-alpha·t); returns (c, alpha)."""
    values = np.asarray(profile, dtype=float)
    steps = np.arange(1, values.size + 1)
    keep = values > floor
    if keep.sum() < 2:
        raise InputError("need at least two positive profile entries to fit a decay")
    slope, intercept = np.polyfit(steps[keep], np.log(values[keep]), 1)
    return float(np.exp(intercept)), float(-slope)


def export_chain(chain: MarkovChain) -> Report:
    """Edge list with transition and stationary edge probabilities."""
    graph = chain.graph
    alphabet = Alphabet(graph.alphabet_size)
    rows = []
    for edge in range(graph.n_edges):
        u = graph.source(edge)
        a = graph.label(edge)
        rows.append([
            alphabet.format_word(graph.edge_word(edge)),
            alphabet.format_word(graph.vertex_word(u)),
            alphabet.format_word(graph.vertex_word(graph.target(edge))),
            a,
            float(chain.edge_probs[u, a]),
            float(chain.stationary[u] * chain.edge_probs[u, a]),
        ])
    return Report(
        title="De Bruijn chain",
        columns=["edge", "from", "to", "symbol", "probability", "edge_frequency"],
        rows=rows,
        metadata={
            "order": graph.order,
            "alphabet_size": graph.alphabet_size,
            "stationary": [float(x) for x in chain.stationary],
        },
    )


# Circulations

@dataclass(frozen=True)
class Circulation:
    """Nonnegative conserved edge flow on a De Bruijn graph (exact weights by edge rank)."""
    graph: DeBruijnGraph
    weights: tuple

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != self.graph.n_edges:
            raise InputError(f"expected {self.graph.n_edges} edge weights, got {len(weights)}")
        for edge, w in enumerate(weights):
            if w < 0:
                raise CirculationError(f"negative weight on edge {edge}", edge=self.graph.edge_word(edge))
        for v in range(self.graph.n_vertices):
            inflow = sum(weights[e] for e in self.graph.in_edges(v))
            outflow = sum(weights[e] for e in self.graph.out_edges(v))
            if inflow != outflow:
                raise CirculationError(f"flow is not conserved at vertex {v}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_measure(cls, nu: KTupleMeasure, n: int) -> "Circulation":
        """n·ν on the order-(k-1) graph; ν must be exact and shift-invariant."""
        if not nu.exact:
            raise InputError("circulations need exact rational weights")
        return cls(DeBruijnGraph(nu.k - 1, nu.alphabet_size), tuple(n * w for w in nu.weights))

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.weights)


@dataclass(frozen=True)
class CycleStep:
    """One edge of an underlying-graph cycle; forward means traversed along its direction."""
    edge: int
    forward: bool


CycleLike = Union[Sequence[int], Sequence[CycleStep]]


def resolve_cycle(graph: DeBruijnGraph, cycle: CycleLike) -> list:
    """Turn a closed vertex sequence (or validate a step list) into CycleSteps.

    Consecutive vertices are joined by the edge u -> v when it exists,
    otherwise by v -> u traversed backwards.
    """
    cycle = list(cycle)
    if not cycle:
        raise InputError("empty cycle")
    if isinstance(cycle[0], CycleStep):
        position = None
        for step in cycle:
            if not 0 <= step.edge < graph.n_edges:
                raise InputError(f"edge {step.edge} is not in the graph")
            start, end = _step_ends(graph, step)
            if position is not None and start != position:
                raise InputError("cycle steps do not chain")
            position = end
        if position != _step_ends(graph, cycle[0])[0]:
            raise InputError("cycle does not close")
        return cycle
    steps = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        if not (0 <= u < graph.n_vertices and 0 <= v < graph.n_vertices):
            raise InputError(f"vertex out of range in cycle {cycle}")
        edge = graph.edge_between(u, v)
        if edge is not None:
            steps.append(CycleStep(edge, True))
            continue
        edge = graph.edge_between(v, u)
        if edge is None:
            raise InputError(f"vertices {u} and {v} are not adjacent")
        steps.append(CycleStep(edge, False))
    return steps


def _step_ends(graph: DeBruijnGraph, step: CycleStep) -> tuple:
    if step.forward:
        return graph.source(step.edge), graph.target(step.edge)
    return graph.target(step.edge), graph.source(step.edge)


def _signs(steps: Iterable[CycleStep]) -> dict:
    signs: dict = {}
    for step in steps:
        signs[step.edge] = signs.get(step.edge, 0) + (1 if step.forward else -1)
    return signs


def effective_length(graph: DeBruijnGraph, cycle: CycleLike) -> int:
    """Cooriented minus disoriented edge count; 0 means balanced."""
    return sum(1 if s.forward else -1 for s in resolve_cycle(graph, cycle))


def _apply_delta(circ: Circulation, delta: dict, eps: Fraction) -> Circulation:
    weights = list(circ.weights)
    for edge, d in delta.items():
        weights[edge] += eps * d
        if weights[edge] < 0:
            word = circ.graph.edge_word(edge)
            raise CirculationError(f"adjustment drives edge {word} negative", edge=word)
    return Circulation(circ.graph, tuple(weights))


def epsilon_adjust(circ: Circulation, cycle: CycleLike, eps) -> Circulation:
    """+eps on cooriented edges, -eps on disoriented ones."""
    return _apply_delta(circ, _signs(resolve_cycle(circ.graph, cycle)), Fraction(eps))


def compound_adjust(circ: Circulation, c1: CycleLike, c2: CycleLike, eps) -> Circulation:
    """k2·eps on c1 together with -k1·eps on c2 (k1, k2 the effective lengths); the total is kept."""
    steps1 = resolve_cycle(circ.graph, c1)
    steps2 = resolve_cycle(circ.graph, c2)
    return _apply_delta(circ, _compound_direction(steps1, steps2), Fraction(eps))


def _length(steps: Sequence[CycleStep]) -> int:
    return sum(1 if s.forward else -1 for s in steps)


def _compound_direction(steps1: Sequence[CycleStep], steps2: Sequence[CycleStep]) -> dict:
    k1, k2 = _length(steps1), _length(steps2)
    delta: dict = {}
    for edge, sign in _signs(steps1).items():
        delta[edge] = delta.get(edge, 0) + k2 * sign
    for edge, sign in _signs(steps2).items():
        delta[edge] = delta.get(edge, 0) - k1 * sign
    return {e: d for e, d in delta.items() if d != 0}


def find_directed_cycle(graph: DeBruijnGraph, length: int) -> list:
    """A vertex-simple directed cycle with exactly `length` edges, as a vertex list.

    Depth-first search with lexicographic successor order and backtracking,
    trying the start vertex 0^m first.
    """
    if not 1 <= length <= graph.n_vertices:
        raise InputError(f"cycle length must be in 1..{graph.n_vertices}, got {length}")
    for start in range(graph.n_vertices):
        found = _cycle_through(graph, start, length)
        if found is not None:
            return found
    raise CirculationError(f"no directed cycle of length {length}")


def _cycle_through(graph: DeBruijnGraph, start: int, length: int) -> Optional[list]:
    path = [start]
    used = {start}
    pending = [iter(graph.successors(start))]
    while pending:
        if len(path) == length:
            if graph.edge_between(path[-1], start) is not None:
                return path
            used.discard(path.pop())
            pending.pop()
            continue
        for nxt in pending[-1]:
            if nxt not in used:
                path.append(nxt)
                used.add(nxt)
                pending.append(iter(graph.successors(nxt)))
                break
        else:
            pending.pop()
            used.discard(path.pop())
    return None


def _vertex_cycle_edges(graph: DeBruijnGraph, vertices: Sequence[int]) -> list:
    return [graph.edge_between(u, vertices[(i + 1) % len(vertices)]) for i, u in enumerate(vertices)]


def _find_underlying_cycle(graph: DeBruijnGraph, edges: Sequence[int]) -> Optional[list]:
    """Any vertex-simple cycle of the undirected multigraph spanned by `edges`."""
    edges = sorted(edges)
    for edge in edges:
        if graph.source(edge) == graph.target(edge):
            return [CycleStep(edge, True)]
    adjacency: dict = {}
    for edge in edges:
        u, v = graph.source(edge), graph.target(edge)
        adjacency.setdefault(u, []).append((edge, v))
        adjacency.setdefault(v, []).append((edge, u))
    parent: dict = {}
    for root in sorted(adjacency):
        if root in parent:
            continue
        parent[root] = (None, None)
        stack = [(root, iter(adjacency[root]))]
        while stack:
            vertex, neighbours = stack[-1]
            for edge, other in neighbours:
                if edge == parent[vertex][1]:
                    continue
                if other in parent:
                    return _close_back_edge(graph, parent, vertex, other, edge)
                parent[other] = (vertex, edge)
                stack.append((other, iter(adjacency[other])))
                break
            else:
                stack.pop()
    return None


def _close_back_edge(graph: DeBruijnGraph, parent: dict, vertex: int, ancestor: int, edge: int) -> list:
    chain = []
    node = vertex
    while node != ancestor:
        up, tree_edge = parent[node]
        chain.append(CycleStep(tree_edge, graph.source(tree_edge) == up))
        node = up
    chain.reverse()
    chain.append(CycleStep(edge, graph.source(edge) == vertex))
    return chain


def _minimal_step(weights: Sequence[Fraction], delta: dict) -> Fraction:
    """Smallest eps > 0 making some edge of w + eps·delta integral."""
    steps = []
    for edge, d in delta.items():
        w = weights[edge]
        gap = (math.ceil(w) - w) if d > 0 else (w - math.floor(w))
        steps.append(gap / abs(d))
    return min(steps)


def _reverse(steps: Sequence[CycleStep]) -> list:
    return [CycleStep(s.edge, not s.forward) for s in reversed(steps)]


def _close_final_cycle(graph: DeBruijnGraph, weights: list, steps: list) -> None:
    """Round the last fractional cycle down and add 1 along a directed cycle of the lost length."""
    k = _length(steps)
    if k < 0:
        steps = _reverse(steps)
        k = -k
    first = next(s.edge for s in steps if s.forward)
    alpha = weights[first] - math.floor(weights[first])
    for step in steps:
        weights[step.edge] += -alpha if step.forward else alpha
        if weights[step.edge].denominator != 1:
            raise CirculationError("fractional parts on the last cycle are inconsistent",
                                   edge=graph.edge_word(step.edge))
    lost = k * alpha
    if lost.denominator != 1:
        raise CirculationError("rounded cycle lost a non-integer amount of flow")
    for edge in _vertex_cycle_edges(graph, find_directed_cycle(graph, int(lost))):
        weights[edge] += 1


def integer_round_circulation(circ: Circulation) -> Circulation:
    """Integer circulation of the same total with floor(w) <= w' <= ceil(w) + 1 on every edge.

    Each round picks a cycle of fractional edges. A balanced cycle is adjusted
    directly; otherwise a second fractional cycle is combined with it so the
    total stays fixed. Every adjustment makes at least one more edge integral.
    When a single unbalanced cycle remains, it is rounded down and the lost
    flow is put back along a directed cycle.
    """
    if circ.total.denominator != 1:
        raise InputError(f"circulation total {circ.total} is not an integer")
    graph = circ.graph
    weights = list(circ.weights)
    while True:
        fractional = [e for e, w in enumerate(weights) if w.denominator != 1]
        if not fractional:
            break
        c1 = _find_underlying_cycle(graph, fractional)
        if c1 is None:
            raise CirculationError("fractional edges do not close a cycle; flow is not conserved")
        k1 = _length(c1)
        if k1 == 0:
            delta = _signs(c1)
        else:
            c2 = _find_underlying_cycle(graph, [e for e in fractional if e != c1[0].edge])
            if c2 is None:
                _close_final_cycle(graph, weights, c1)
                continue
            delta = _signs(c2) if _length(c2) == 0 else _compound_direction(c1, c2)
        eps = _minimal_step(weights, delta)
        for edge, d in delta.items():
            weights[edge] += eps * d
    return Circulation(graph, tuple(weights))


def round_measure_to_lattice(q1: KTupleMeasure, n: int) -> KTupleMeasure:
    """Achievable empirical distribution w'/n within 2/n of q1 in max norm."""
    if n < 1:
        raise InputError("n must be positive")
    if q1.k < 2:
        raise InputError("lattice rounding needs k >= 2")
    rounded = integer_round_circulation(Circulation.from_measure(q1, n))
    return KTupleMeasure(q1.alphabet_size, q1.k, tuple(w / n for w in rounded.weights))


def realize_sequence(circ: Circulation) -> Word:
    """Cyclic word whose cyclic (m+1)-tuple counts equal the integer circulation.

    Uses Hierholzer's algorithm on the multigraph with w(e) copies of each
    edge; the support must be connected.
    """
    if not circ.is_integral:
        raise InputError("only integer circulations can be realized")
    graph = circ.graph
    remaining = [int(w) for w in circ.weights]
    if sum(remaining) == 0:
        return ()
    used = [e for e, c in enumerate(remaining) if c > 0]
    adjacency = np.zeros((graph.n_vertices, graph.n_vertices), dtype=bool)
    for edge in used:
        adjacency[graph.source(edge), graph.target(edge)] = True
    _, labels = connected_components(csr_matrix(adjacency), directed=True, connection="weak")
    touched = {graph.source(e) for e in used}
    if len({labels[v] for v in touched}) > 1:
        raise CirculationError("support of the circulation is not connected")
    start = min(touched)
    cursor = {v: graph.out_edges(v).start for v in touched}
    stack = [(start, None)]
    circuit = []
    while stack:
        vertex, arrived_by = stack[-1]
        edge = cursor.get(vertex)
        while edge is not None and edge < graph.out_edges(vertex).stop and remaining[edge] == 0:
            edge += 1
        if edge is not None and edge < graph.out_edges(vertex).stop:
            cursor[vertex] = edge
            remaining[edge] -= 1
            stack.append((graph.target(edge), edge))
        else:
            stack.pop()
            if arrived_by is not None:
                circuit.append(arrived_by)
    circuit.reverse()
    return tuple(graph.label(e) for e in circuit)
