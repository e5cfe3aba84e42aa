"""
Capacity of semiconstrained systems.

The capacity of the weak system equals log2|Σ| minus the smallest rate
function value over shift-invariant k-tuple measures whose forbidden-word
frequencies respect the caps. With a uniform base distribution that is the
largest entropy rate H(ν) − H(ν₁) over the same polytope, a smooth convex
program in |Σ|^k variables.

Two solvers are provided:

- "dual" (default): minimizes the Lagrange dual
  g(μ) = log2 ρ(B_μ) + μ·P over μ >= 0, where B_μ is the De Bruijn transfer
  matrix with edge weights 2^{-μ·𝓜e}. Its gradient is P − 𝓜ν_μ with ν_μ the
  maximum-entropy (Parry) edge measure of B_μ, which is also the optimizer.
- "mirror": exponentiated-gradient descent with Armijo backtracking where
  every step is followed by a KL projection onto the polytope of
  shift-invariant measures within the caps.

Both stop only once the KKT residual is at most KKT_TOL.

Caps equal to zero remove every edge extending the word before iterating,
so gradients stay finite. Feasibility is decided by a phase-1 linear program
and caps at or above the uniform frequency short-circuit to log2|Σ|.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, linprog, minimize, root
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

from .errors import InfeasibleSpecError, InputError, NonConvergenceError, SemiconError
from .formats import Report
from .markov import DeBruijnGraph
from .measures import KTupleMeasure, build_constraint_matrix, uniform_measure
from .words import ConstraintSpec, Mode, enumerate_count, format_rational, rll_spec

DEFAULT_TOL = 1e-9
KKT_TOL = 1e-7
FEASIBILITY_TOL = 1e-9
MU_MAX = 900.0
METHODS = ("dual", "mirror")
MIRROR_MAX_ITER = 1_000_000
NEWTON_STEPS = 8
ARMIJO = 1e-4


@dataclass(frozen=True, eq=False)
class CapacityResult:
    """Solved capacity with the optimizing measure and solver diagnostics.

    Multipliers are reported per forbidden word; words with a zero cap are
    eliminated rather than priced and report math.inf.
    """
    capacity: float
    optimizer: KTupleMeasure
    kkt_residual: float
    feasible: bool
    iterations: int
    multipliers: tuple
    method: str
    k: int


@dataclass(frozen=True, eq=False)
class _Problem:
    spec: ConstraintSpec
    k: int
    graph: DeBruijnGraph
    matrix: np.ndarray
    caps: np.ndarray
    forced: np.ndarray
    free: np.ndarray


def _build_problem(spec: ConstraintSpec, k: Optional[int] = None) -> _Problem:
    k = spec.k if k is None else max(k, spec.k)
    matrix = build_constraint_matrix(spec, k).matrix.astype(float)
    caps = np.array([float(c) for c in spec.caps])
    zero = [i for i, c in enumerate(spec.caps) if c == 0]
    forced = matrix[zero].any(axis=0) if zero else np.zeros(matrix.shape[1], dtype=bool)
    free = np.array([i for i, c in enumerate(spec.caps) if c > 0], dtype=int)
    return _Problem(spec, k, DeBruijnGraph(k - 1, spec.alphabet.size), matrix, caps, forced, free)


def check_redundant(spec: ConstraintSpec) -> bool:
    """True iff every cap is at least the uniform frequency |Σ|^{-|φ|}."""
    size = spec.alphabet.size
    return all(e.cap >= Fraction(1, size ** len(e.word)) for e in spec.forbidden)


def _shift_rows(graph: DeBruijnGraph) -> np.ndarray:
    rows = np.zeros((graph.n_vertices, graph.n_edges))
    np.add.at(rows, (graph.sources, np.arange(graph.n_edges)), 1.0)
    np.add.at(rows, (graph.targets, np.arange(graph.n_edges)), -1.0)
    return rows


def phase_one_violation(spec: ConstraintSpec, k: Optional[int] = None) -> float:
    """Smallest t >= 0 such that some shift-invariant ν has 𝓜ν <= P + t."""
    problem = _build_problem(spec, k)
    n_edges = problem.graph.n_edges
    a_ub = np.hstack([problem.matrix, -np.ones((problem.matrix.shape[0], 1))])
    a_eq = np.vstack([
        np.hstack([_shift_rows(problem.graph), np.zeros((problem.graph.n_vertices, 1))]),
        np.append(np.ones(n_edges), 0.0),
    ])
    b_eq = np.append(np.zeros(problem.graph.n_vertices), 1.0)
    cost = np.append(np.zeros(n_edges), 1.0)
    result = linprog(cost, A_ub=a_ub, b_ub=problem.caps, A_eq=a_eq, b_eq=b_eq,
                     bounds=[(0, None)] * (n_edges + 1), method="highs")
    if result.status != 0:
        raise SemiconError(f"feasibility program failed: {result.message}")
    return max(float(result.x[-1]), 0.0)


def feasible(spec: ConstraintSpec) -> bool:
    """True iff a shift-invariant measure satisfies all caps."""
    return phase_one_violation(spec) <= FEASIBILITY_TOL


def _perron_measure(problem: _Problem, weights: np.ndarray) -> tuple:
    """Spectral radius of the weighted transfer matrix and its Parry edge measure.

    For reducible matrices the strongly connected component with the largest
    radius carries the measure.
    """
    graph = problem.graph
    sources, targets = graph.sources, graph.targets
    transfer = np.zeros((graph.n_vertices, graph.n_vertices))
    np.add.at(transfer, (sources, targets), weights)
    n_classes, labels = connected_components(csr_matrix(transfer > 0), directed=True, connection="strong")
    best = None
    for c in range(n_classes):
        members = np.flatnonzero(labels == c)
        block = transfer[np.ix_(members, members)]
        if not block.any():
            continue
        values, vectors = np.linalg.eig(block)
        i = int(np.argmax(values.real))
        rho = float(values[i].real)
        if best is None or rho > best[0] * (1 + 1e-12):
            best = (rho, members, block, np.abs(vectors[:, i].real))
    if best is None or best[0] <= 0:
        return 0.0, None
    rho, members, block, right_block = best
    values, vectors = np.linalg.eig(block.T)
    left_block = np.abs(vectors[:, int(np.argmax(values.real))].real)
    left = np.zeros(graph.n_vertices)
    right = np.zeros(graph.n_vertices)
    left[members] = left_block
    right[members] = right_block
    nu = left[sources] * weights * right[targets] / (rho * (left @ right))
    return rho, nu / nu.sum()


def _edge_weights(problem: _Problem, mu_free: np.ndarray) -> np.ndarray:
    mu = np.zeros(problem.matrix.shape[0])
    mu[problem.free] = mu_free
    weights = np.exp2(-(mu @ problem.matrix))
    weights[problem.forced] = 0.0
    return weights


def _kkt_residual(problem: _Problem, nu: np.ndarray, mu_free: np.ndarray) -> float:
    frequencies = problem.matrix @ nu
    violation = max(float(np.max(frequencies - problem.caps)), 0.0)
    if problem.free.size == 0:
        return violation
    slack = problem.caps[problem.free] - frequencies[problem.free]
    complementarity = float(np.max(np.abs(mu_free * slack)))
    negativity = max(float(-np.min(mu_free)), 0.0)
    return max(violation, complementarity, negativity)


def _multipliers(problem: _Problem, mu_free: np.ndarray) -> tuple:
    mu = [math.inf] * problem.matrix.shape[0]
    for index, value in zip(problem.free, mu_free):
        mu[index] = float(value)
    return tuple(mu)


def _polish_dual(objective: Callable, mu_free: np.ndarray) -> np.ndarray:
    """Solve g'(μ) = 0 on the positive or violated multipliers, keeping the others fixed."""
    active = ((mu_free > 0) | (objective(mu_free)[1] < 0)) & (mu_free < MU_MAX)
    if not active.any():
        return mu_free

    def equations(values):
        trial = mu_free.copy()
        trial[active] = values
        return objective(trial)[1][active]

    solution = root(equations, mu_free[active], method="hybr", options={"xtol": 1e-14})
    polished = mu_free.copy()
    polished[active] = np.clip(solution.x, 0.0, MU_MAX)
    return polished


def _solve_dual(problem: _Problem, tol: float, max_iter: int, vprint: Optional[Callable]) -> CapacityResult:
    caps = problem.caps[problem.free]
    free_rows = problem.matrix[problem.free]

    def objective(mu_free):
        rho, nu = _perron_measure(problem, _edge_weights(problem, mu_free))
        if nu is None:
            return math.inf, np.zeros_like(mu_free)
        return math.log2(rho) + float(mu_free @ caps), caps - free_rows @ nu

    iterations = 0
    mu_free = np.zeros(problem.free.size)
    if problem.free.size == 1:
        # one multiplier: the derivative of g is monotone, solve g'(μ) = 0 directly
        def slope(mu):
            return float(objective(np.array([mu]))[1][0])
        if slope(0.0) < 0:
            if slope(MU_MAX) <= 0:
                mu_free[0] = MU_MAX
            else:
                mu_free[0], info = brentq(slope, 0.0, MU_MAX, xtol=1e-15, full_output=True)
                iterations = info.iterations
    elif problem.free.size:
        result = minimize(objective, mu_free, jac=True, method="L-BFGS-B",
                          bounds=[(0.0, MU_MAX)] * problem.free.size,
                          options={"maxiter": max_iter, "ftol": 1e-15, "gtol": tol * 1e-3})
        mu_free = np.asarray(result.x, dtype=float)
        iterations = int(result.nit)
        if vprint:
            vprint(f"📐 dual solver: {iterations} iterations, {result.message}", 2)
    rho, nu = _perron_measure(problem, _edge_weights(problem, mu_free))
    if nu is None:
        raise InfeasibleSpecError(phase_one_violation(problem.spec, problem.k))
    value = math.log2(rho) + float(mu_free @ caps)
    residual = _kkt_residual(problem, nu, mu_free)
    if residual > KKT_TOL:
        polished = _polish_dual(objective, mu_free)
        rho_p, nu_p = _perron_measure(problem, _edge_weights(problem, polished))
        if nu_p is not None and _kkt_residual(problem, nu_p, polished) < residual:
            mu_free, rho, nu = polished, rho_p, nu_p
            value = math.log2(rho) + float(mu_free @ caps)
            residual = _kkt_residual(problem, nu, mu_free)
    if residual > KKT_TOL:
        raise NonConvergenceError(iterations, residual)
    size = problem.spec.alphabet.size
    return CapacityResult(
        capacity=min(value, math.log2(size)),
        optimizer=KTupleMeasure.from_array(size, problem.k, nu),
        kkt_residual=residual,
        feasible=True,
        iterations=iterations,
        multipliers=_multipliers(problem, mu_free),
        method="dual",
        k=problem.k,
    )


def _rate_and_gradient(x: np.ndarray, sources: np.ndarray, n_vertices: int, log2_size: float) -> tuple:
    """Rate function (uniform base) of an edge vector and its gradient log2(x_e / (x₁(u)·q))."""
    safe = np.maximum(x, 1e-300)
    outflow = np.bincount(sources, weights=x, minlength=n_vertices)
    ratio = np.log2(safe) - np.log2(np.maximum(outflow[sources], 1e-300)) + log2_size
    return float(np.sum(np.where(x > 0, x * ratio, 0.0))), ratio


def _softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(logits - logsumexp(logits))


def _projected_gradient(grad: np.ndarray, theta: np.ndarray, lower: np.ndarray) -> np.ndarray:
    return np.where((theta <= lower) & (grad > 0), 0.0, grad)


def _entropic_projection(log_y: np.ndarray, features: np.ndarray, offsets: np.ndarray, n_equalities: int,
                         theta: np.ndarray) -> tuple:
    """KL projection of the weights e^{log_y} onto the polytope.

    The polytope is {x in the simplex : F x = c on the first n_equalities
    rows, F x <= c on the rest}. Its solution is x ∝ y·e^{-Fᵀθ}, θ minimizing
    the convex dual log Σ y_e e^{-(Fᵀθ)_e} + θ·c with θ >= 0 on the
    inequality rows. L-BFGS-B gets close, Newton steps on the free
    coordinates finish.
    """
    lower = np.full(offsets.size, -np.inf)
    lower[n_equalities:] = 0.0
    bounds = [(None, None)] * n_equalities + [(0.0, None)] * (offsets.size - n_equalities)

    def dual(point):
        logits = log_y - point @ features
        log_z = logsumexp(logits)
        return log_z + point @ offsets, offsets - features @ np.exp(logits - log_z)

    result = minimize(dual, theta, jac=True, method="L-BFGS-B", bounds=bounds,
                      options={"maxiter": 1000, "ftol": 0.0, "gtol": 1e-13})
    theta = np.maximum(np.asarray(result.x, dtype=float), lower)
    for _ in range(NEWTON_STEPS):
        x = _softmax(log_y - theta @ features)
        grad = offsets - features @ x
        projected = _projected_gradient(grad, theta, lower)
        norm = float(np.max(np.abs(projected)))
        if norm < 1e-15:
            break
        free = projected != 0
        mean = features @ x
        hessian = (features * x) @ features.T - np.outer(mean, mean)
        step = np.linalg.lstsq(hessian[np.ix_(free, free)], -grad[free], rcond=None)[0]
        for _ in range(20):
            trial = theta.copy()
            trial[free] += step
            trial = np.maximum(trial, lower)
            trial_grad = offsets - features @ _softmax(log_y - trial @ features)
            if float(np.max(np.abs(_projected_gradient(trial_grad, trial, lower)))) < norm:
                theta = trial
                break
            step = step / 2
        else:
            break
    return _softmax(log_y - theta @ features), theta


def _solve_mirror(problem: _Problem, tol: float, max_iter: int, vprint: Optional[Callable]) -> CapacityResult:
    """Exponentiated-gradient descent with entropic projections.

    A unit step maps x to x₁⊗q before projecting, so with Armijo accepting
    it the iteration decreases I(x) = min_m KL(x ‖ m⊗q) monotonically.
    Multipliers come out of the projections in nats and are reported in bits.
    """
    graph = problem.graph
    n_vertices = graph.n_vertices
    size = problem.spec.alphabet.size
    log2_size = math.log2(size)
    allowed = np.flatnonzero(~problem.forced)
    sources = graph.sources[allowed]
    rows = problem.matrix[problem.free][:, allowed]
    caps = problem.caps[problem.free]
    features = np.vstack([_shift_rows(graph)[:, allowed], rows])
    offsets = np.concatenate([np.zeros(n_vertices), caps])
    log_q = -math.log(size)

    x, theta = _entropic_projection(np.zeros(allowed.size), features, offsets, n_vertices, np.zeros(offsets.size))
    value, grad = _rate_and_gradient(x, sources, n_vertices, log2_size)
    residual = math.inf
    for iterations in range(1, max_iter + 1):
        outflow = np.bincount(sources, weights=x, minlength=n_vertices)
        log_x = np.log(np.maximum(x, 1e-300))
        log_product = np.log(np.maximum(outflow[sources], 1e-300)) + log_q
        step = 1.0
        while True:
            candidate, candidate_theta = _entropic_projection(
                (1 - step) * log_x + step * log_product, features, offsets, n_vertices, theta)
            new_value, new_grad = _rate_and_gradient(candidate, sources, n_vertices, log2_size)
            if new_value <= value + ARMIJO * float(grad @ (candidate - x)) + 1e-15:
                break
            step /= 2
            if step < 1e-12:
                raise NonConvergenceError(iterations, residual)
        change = value - new_value
        x, theta, value, grad = candidate, candidate_theta, new_value, new_grad

        slack = caps - rows @ x
        mu = theta[n_vertices:] / math.log(2)
        lagrange = (grad + (theta @ features) / math.log(2))[x > 0]
        residual = max(float(np.max(np.abs(features[:n_vertices] @ x), initial=0.0)),
                       float(np.max(-slack, initial=0.0)),
                       float(np.max(np.abs(mu * slack), initial=0.0)),
                       float(lagrange.max() - lagrange.min()))
        if vprint and iterations % 50 == 0:
            vprint(f"📐 mirror solver: iteration {iterations}, residual {residual:.3e}", 2)
        if residual <= KKT_TOL and abs(change) <= tol:
            break
    else:
        raise NonConvergenceError(max_iter, residual)

    full = np.zeros(graph.n_edges)
    full[allowed] = x
    return CapacityResult(
        capacity=log2_size - value,
        optimizer=KTupleMeasure.from_array(size, problem.k, full),
        kkt_residual=residual,
        feasible=True,
        iterations=iterations,
        multipliers=_multipliers(problem, theta[n_vertices:] / math.log(2)),
        method="mirror",
        k=problem.k,
    )


def solve_capacity(spec: ConstraintSpec, tol: float = DEFAULT_TOL, method: str = "dual",
                   k: Optional[int] = None, max_iter: Optional[int] = None,
                   vprint: Optional[Callable[[str, int], None]] = None) -> CapacityResult:
    """Capacity (bits per symbol) of the weak semiconstrained system.

    Args:
        spec: Constraint spec; shorter words are lifted to k symbols.
        tol: Solver tolerance.
        method: "dual" or "mirror".
        k: Tuple length to work on (at least the longest forbidden word).
        max_iter: Iteration cap (solver default when None).
        vprint: Optional progress printer.

    Raises:
        InfeasibleSpecError: no shift-invariant measure satisfies the caps.
        NonConvergenceError: the solver hit its iteration cap or ended above KKT_TOL.
    """
    if method not in METHODS:
        raise InputError(f"unknown capacity method {method!r}; expected one of {', '.join(METHODS)}")
    problem = _build_problem(spec, k)
    size = spec.alphabet.size
    if check_redundant(spec):
        return CapacityResult(
            capacity=math.log2(size),
            optimizer=uniform_measure(size, problem.k),
            kkt_residual=0.0,
            feasible=True,
            iterations=0,
            multipliers=tuple(0.0 for _ in spec.forbidden),
            method=method,
            k=problem.k,
        )
    violation = phase_one_violation(spec, problem.k)
    if violation > FEASIBILITY_TOL:
        raise InfeasibleSpecError(violation)
    if method == "mirror":
        return _solve_mirror(problem, tol, max_iter or MIRROR_MAX_ITER, vprint)
    return _solve_dual(problem, tol, max_iter or 15_000, vprint)


def capacity_grid(k: int, p_values: Sequence, method: str = "dual") -> list:
    """Capacities of the (0,k,p)-RLL systems for every p."""
    return [solve_capacity(rll_spec(k, p), method=method).capacity for p in p_values]


def capacity_report(spec: ConstraintSpec, result: CapacityResult) -> Report:
    """Per-word frequencies and multipliers, with the capacity in the metadata."""
    matrix = build_constraint_matrix(spec, result.k).matrix.astype(float)
    frequencies = matrix @ result.optimizer.array
    rows = [
        [spec.alphabet.format_word(entry.word), entry.cap, float(freq), mu]
        for entry, freq, mu in zip(spec.forbidden, frequencies, result.multipliers)
    ]
    return Report(
        title="WSCS capacity",
        columns=["word", "cap", "frequency", "multiplier"],
        rows=rows,
        metadata={
            "capacity": result.capacity,
            "method": result.method,
            "k": result.k,
            "iterations": result.iterations,
            "kkt_residual": result.kkt_residual,
            "feasible": result.feasible,
            "optimizer": list(result.optimizer.weights),
        },
    )


def capacity_vs_enumeration(spec: ConstraintSpec, n_max: int, mode: str = "strict",
                            result: Optional[CapacityResult] = None, method: str = "dual") -> Report:
    """Finite-n growth rates log2|B_n|/n next to the solved capacity.

    The capacity column is empty when no shift-invariant measure meets the
    caps; the strict and weak counts can still be nonzero for small n.
    """
    mode = Mode(mode)
    if result is None:
        try:
            result = solve_capacity(spec, method=method)
        except InfeasibleSpecError:
            result = None
    capacity = None if result is None else result.capacity
    rows = []
    for n in range(1, n_max + 1):
        count = enumerate_count(spec, n, mode)
        rate = math.log2(count) / n if count else -math.inf
        rows.append([n, count, rate, capacity])
    return Report(
        title="Growth rate versus capacity",
        columns=["n", "count", "growth_rate", "capacity"],
        rows=rows,
        metadata={"spec": spec.describe(), "mode": mode.value,
                  "feasible": result is not None,
                  "caps": [format_rational(c) for c in spec.caps]},
    )
