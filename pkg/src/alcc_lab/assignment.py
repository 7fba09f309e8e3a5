"""Choice of evaluation indices for unreliable workers.

The optimizer minimizes the expected dominant confusability term over the
Byzantine supports inside a candidate index set; an empirical baseline scans
candidate sets by simulated relative error instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .bounds import assignment_pair_log_bound, gamma_bounds
from .numeric import ParameterError


class RuntimeGuardError(RuntimeError):
    """A request would exceed the configured simulation budget."""


@dataclass(frozen=True)
class AssignmentProblem:
    """One instance: pick `unreliable_count` of N indices facing
    `byzantine_count` adversaries at noise level sigma_p_sq."""

    n_workers: int
    unreliable_count: int
    byzantine_count: int
    eta: float = 10.0
    sigma_p_sq: float = 1.0
    metric: str = "integer"
    gamma_max: float | None = None
    exhaustive_expectation_limit: int = 10_000
    expectation_samples: int = 10_000

    def __post_init__(self):
        if not 0 < self.unreliable_count <= self.n_workers:
            raise ParameterError("need 0 < unreliable count <= N")
        if self.byzantine_count > self.unreliable_count:
            raise ParameterError("byzantine count cannot exceed the unreliable count")

    def resolved_gamma_max(self) -> float:
        if self.gamma_max is not None:
            return self.gamma_max
        return gamma_bounds(self.n_workers, self.byzantine_count, self.eta)[1]


def _support_iter(subset, a: int, prob: AssignmentProblem, rng):
    n_supports = math.comb(len(subset), a)
    if n_supports <= prob.exhaustive_expectation_limit:
        yield from combinations(subset, a)
        return
    if rng is None:
        raise ParameterError("Monte-Carlo expectation needs an rng")
    subset = np.asarray(subset)
    for _ in range(prob.expectation_samples):
        yield tuple(np.sort(rng.choice(subset, size=a, replace=False)).tolist())


def problem2_log_objective(subset, prob: AssignmentProblem, rng=None) -> float:
    """Log of the expected max-over-probes confusability term for one subset.

    Computed with log-sum-exp so that tiny terms still rank correctly.
    """
    subset = tuple(sorted(int(i) for i in subset))
    if len(subset) != prob.unreliable_count:
        raise ParameterError("subset size must equal the unreliable count")
    a = prob.byzantine_count
    if len(subset) == a:
        return -math.inf  # no non-Byzantine probe exists; degenerate zero
    gmax = prob.resolved_gamma_max()
    exps = []
    for support in _support_iter(subset, a, prob, rng):
        probes = [j for j in subset if j not in support]
        best = max(
            assignment_pair_log_bound(
                support, j, prob.n_workers, prob.eta, gmax, prob.sigma_p_sq, prob.metric
            )
            for j in probes
        )
        exps.append(best)
    peak = max(exps)
    if peak == -math.inf:
        return -math.inf
    return peak + math.log(sum(math.exp(e - peak) for e in exps)) - math.log(len(exps))


def problem2_objective(subset, prob: AssignmentProblem, rng=None) -> float:
    """Expected dominant confusability term (may underflow to 0 for tiny noise)."""
    log_val = problem2_log_objective(subset, prob, rng)
    return 0.0 if log_val == -math.inf else math.exp(log_val)


@dataclass(frozen=True)
class AssignmentSolution:
    subset: tuple
    objective: float
    log_objective: float
    evaluated: int
    search: str


def solve_assignment(
    prob: AssignmentProblem,
    search: str = "exhaustive",
    beam_width: int = 64,
    rng: np.random.Generator | None = None,
    exhaustive_limit: int = 1_000_000,
) -> AssignmentSolution:
    """Minimize the expected dominant confusability over index subsets.

    Exhaustive search certifies the optimum (ties broken lexicographically);
    beam search grows subsets keeping the best `beam_width` partials per level.
    """
    n, mu = prob.n_workers, prob.unreliable_count
    if search == "exhaustive":
        if math.comb(n, mu) > exhaustive_limit:
            raise RuntimeGuardError(
                f"exhaustive search over C({n},{mu}) subsets exceeds the limit; "
                "use beam search"
            )
        best = None
        count = 0
        for subset in combinations(range(n), mu):
            count += 1
            val = problem2_log_objective(subset, prob, rng)
            if best is None or val < best[0]:
                best = (val, subset)
        log_obj, subset = best
        obj = 0.0 if log_obj == -math.inf else math.exp(log_obj)
        return AssignmentSolution(subset, obj, log_obj, count, "exhaustive")
    if search != "beam":
        raise ParameterError(f"unknown search mode {search!r}")

    a = prob.byzantine_count
    frontier = [(i,) for i in range(n)]
    evaluated = 0
    for size in range(2, mu + 1):
        seen = set()
        children = []
        for state in frontier:
            for j in range(n):
                if j in state:
                    continue
                child = tuple(sorted(state + (j,)))
                if child not in seen:
                    seen.add(child)
                    children.append(child)
        if size > a:
            scored = []
            for child in children:
                partial = replace(prob, unreliable_count=size)
                scored.append((problem2_log_objective(child, partial, rng), child))
                evaluated += 1
            scored.sort(key=lambda t: (t[0], t[1]))
            frontier = [c for _, c in scored[:beam_width]]
        else:
            frontier = children
    best = None
    for state in frontier:
        val = problem2_log_objective(state, prob, rng)
        evaluated += 1
        if best is None or (val, state) < best:
            best = (val, state)
    log_obj, subset = best
    obj = 0.0 if log_obj == -math.inf else math.exp(log_obj)
    return AssignmentSolution(subset, obj, log_obj, evaluated, "beam")


def canonical_class(subset, n: int) -> tuple:
    """Lexicographically smallest rotation/reflection of a mod-n index set."""
    subset = sorted(int(i) % n for i in subset)
    best = None
    for pts in (subset, [(-x) % n for x in subset]):
        for shift in range(n):
            cand = tuple(sorted((x + shift) % n for x in pts))
            if best is None or cand < best:
                best = cand
    return best


def contiguous_subset(n: int, mu: int, start: int = 0) -> tuple:
    return tuple(sorted((start + i) % n for i in range(mu)))


def spaced_subset(n: int, mu: int, delta: int, start: int = 0) -> tuple:
    """The delta-spaced candidate family {start, start+delta, ...} mod n."""
    subset = [(start + i * delta) % n for i in range(mu)]
    if len(set(subset)) != mu:
        raise ParameterError("spacing wraps onto itself; pick a different delta")
    return tuple(sorted(subset))


@dataclass(frozen=True)
class BaselineResult:
    subset: tuple
    mean_error: float
    table: dict = field(repr=False)
    simulations: int = 0


def relative_error_baseline(
    prob: AssignmentProblem,
    scenario,
    trials: int,
    seed: int,
    candidates=None,
    max_simulations: int = 100_000,
    force: bool = False,
) -> BaselineResult:
    """Pick the subset minimizing empirical mean relative error.

    Runs `trials` seeded end-to-end simulations per candidate subset of the
    given scenario (the scenario's assignment field is overridden per
    candidate). Refuses to exceed `max_simulations` total runs unless forced.
    Trial seeds are shared across candidates so the comparison is paired.
    """
    from . import harness  # local import: harness sits above this module

    if candidates is None:
        candidates = list(combinations(range(prob.n_workers), prob.unreliable_count))
    total = len(candidates) * trials
    if total > max_simulations and not force:
        raise RuntimeGuardError(
            f"{total} simulations exceed the guard of {max_simulations}; "
            "pass force=True to override"
        )
    seeds = harness.trial_seeds(seed, 0, trials)
    table = {}
    for subset in candidates:
        subset = tuple(sorted(int(i) for i in subset))
        sc = scenario.with_updates(assignment=subset, unreliable=subset)
        errors = [harness.run_trial(sc, s).e_rel for s in seeds]
        table[subset] = float(np.mean(errors))
    best = min(table, key=lambda k: (table[k], k))
    return BaselineResult(
        subset=best, mean_error=table[best], table=table, simulations=total
    )
