"""
sinrgraph/bench.py
==================
Experiment harness: random instances, baseline heuristics, the γ binary
search and the MWISL-vs-length-diversity experiment with CSV output.

Every trial draws from its own generator seeded by (seed, trial_index), so a
run is fully determined by its config regardless of worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np
import pandas as pd

from sinrgraph.config import Config
from sinrgraph.conflict_graph import build_conflict_graph, choose_tau, delta_for_epsilon
from sinrgraph.errors import InvariantViolation, ParameterRangeError
from sinrgraph.models.graph import ConflictFn, ConflictGraph
from sinrgraph.models.links import Instance, Link, Point, PowerAssignment
from sinrgraph.models.solutions import WeightedSolution
from sinrgraph.physical_model import i_tau_vector, is_feasible, is_instance_subset_feasible
from sinrgraph.scheduling import first_fit_coloring, local_ratio_mwis, sample_independent_sets

logger = logging.getLogger(__name__)

GREEDY_FEASIBILITY  = "greedy_feasibility"
CONFLICT_GRAPH_MWIS = "conflict_graph_mwis"
WEIGHT_CLASS        = "weight_class"
ALGORITHM_LABELS    = (GREEDY_FEASIBILITY, CONFLICT_GRAPH_MWIS, WEIGHT_CLASS)


# ─────────────────────────────────────────────────────────────────────────────
# CONFIG AND RESULTS
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class ExperimentConfig:
    n:          int = Config.DEFAULT_N
    l_max:      tuple[float, ...] = Config.DEFAULT_LMAX_GRID
    side:       float = Config.SQUARE_SIDE
    alpha:      float = Config.DEFAULT_ALPHA
    beta:       float = Config.DEFAULT_BETA
    beta_max:   float | None = None
    trials:     int = Config.DEFAULT_TRIALS
    seed:       int = Config.DEFAULT_SEED
    algorithms: tuple[str, ...] = ALGORITHM_LABELS
    epsilons:   tuple[float, ...] = Config.DEFAULT_EPSILONS
    workers:    int = Config.BENCH_WORKERS
    m:          int = Config.DEFAULT_M

    def __post_init__(self):
        for name in ("l_max", "algorithms", "epsilons"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.n < 1:
            raise ParameterRangeError(f"n must be ≥ 1, got {self.n}.")
        if self.trials < 1:
            raise ParameterRangeError(f"trials must be ≥ 1, got {self.trials}.")
        if not self.side > 0:
            raise ParameterRangeError(f"side must be positive, got {self.side}.")
        if not self.l_max or any(not v > 1.0 for v in self.l_max):
            raise ParameterRangeError(f"every l_max must exceed 1, got {list(self.l_max)}.")
        if self.beta < 1.0 or (self.beta_max is not None and self.beta_max < self.beta):
            raise ParameterRangeError(f"Need 1 ≤ beta ≤ beta_max, got {self.beta}, {self.beta_max}.")
        unknown = set(self.algorithms) - set(ALGORITHM_LABELS)
        if unknown:
            raise ParameterRangeError(f"Unknown algorithms {sorted(unknown)}; choose from {list(ALGORITHM_LABELS)}.")
        if not self.epsilons:
            raise ParameterRangeError("At least one epsilon is needed to fix the power assignment.")
        if self.workers < 1:
            raise ParameterRangeError(f"workers must be ≥ 1, got {self.workers}.")

    def to_dict(self) -> dict:
        data = asdict(self)
        for name in ("l_max", "algorithms", "epsilons"):
            data[name] = list(data[name])
        return data


@dataclass(frozen=True)
class ResultRow:
    l_max:       float
    algorithm:   str
    epsilon:     float | None
    mean_weight: float
    std_weight:  float
    trials:      int
    seed:        int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GammaSearchResult:
    """
    Best γ found, its objective and the sets the algorithm emitted there.

    ``feasible`` means those sets and every random maximal independent set
    drawn at that γ satisfied I_τ < 1.
    """

    gamma:       float
    objective:   float
    feasible:    bool
    evaluations: int
    solution:    tuple[frozenset[int], ...] = ()
    delta:       float = 0.0
    tau:         float = 0.0

    def to_dict(self) -> dict:
        return {
            "gamma":       self.gamma,
            "objective":   self.objective,
            "feasible":    self.feasible,
            "evaluations": self.evaluations,
            "delta":       self.delta,
            "tau":         self.tau,
            "solution":    [sorted(s) for s in self.solution],
        }


@dataclass(frozen=True)
class ExperimentResult:
    """
    Aggregated rows plus per-trial failures. ``incomplete`` lists the cells
    whose successful trial count fell short of the configured ``trials``.
    """

    rows:       list[ResultRow]
    failures:   list[dict] = field(default_factory=list)
    incomplete: list[dict] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.incomplete

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.rows], columns=list(Config.CSV_COLUMNS))


# ─────────────────────────────────────────────────────────────────────────────
# INSTANCE GENERATION
# ─────────────────────────────────────────────────────────────────────────────
def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def gen_random_instance(cfg: ExperimentConfig, trial_index: int, l_max: float | None = None) -> Instance:
    """
    ``cfg.n`` links with senders uniform in the square, uniform directions,
    log-uniform lengths in (1, l_max) and log-uniform weights in [1, 100].
    Receivers may leave the square.
    """
    l_max = cfg.l_max[0] if l_max is None else l_max
    rng = np.random.default_rng([cfg.seed, trial_index])
    senders = rng.uniform(0.0, cfg.side, size=(cfg.n, 2))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=cfg.n)
    lengths = _log_uniform(rng, 1.0, l_max, cfg.n)
    weights = _log_uniform(rng, *Config.WEIGHT_RANGE, cfg.n)
    if cfg.beta_max is not None:
        betas = rng.uniform(cfg.beta, cfg.beta_max, size=cfg.n)
    else:
        betas = np.full(cfg.n, cfg.beta)
    receivers = senders + lengths[:, None] * np.column_stack((np.cos(theta), np.sin(theta)))

    links = tuple(
        Link(k, Point(float(sx), float(sy)), Point(float(rx), float(ry)),
             beta=float(b), weight=float(w))
        for k, ((sx, sy), (rx, ry), b, w) in enumerate(zip(senders, receivers, betas, weights))
    )
    return Instance(cfg.alpha, links, cfg.m)


# ─────────────────────────────────────────────────────────────────────────────
# BASELINES
# ─────────────────────────────────────────────────────────────────────────────
def _greedy(links: Sequence[Link], p: PowerAssignment, alpha: float,
            key: Callable[[Link], float | tuple[bool, float]]) -> WeightedSolution:
    accepted: list[Link] = []
    for link in sorted(links, key=lambda l: (key(l), l.id)):
        if is_feasible(accepted + [link], p, alpha).feasible:
            accepted.append(link)
    return WeightedSolution(frozenset(l.id for l in accepted),
                            float(sum(l.weight for l in accepted)))


def greedy_feasibility_heuristic(inst: Instance, p: PowerAssignment) -> WeightedSolution:
    """
    Scan by increasing length/weight; keep a link while the set stays feasible
    under ``p``. Zero-weight links come last, shortest first.
    """
    return _greedy(inst.links, p, inst.alpha, key=_length_per_weight)


def _length_per_weight(link: Link) -> tuple[bool, float]:
    if link.weight == 0.0:
        return True, link.length
    return False, link.length / link.weight


def weight_class_baseline(inst: Instance, p: PowerAssignment) -> WeightedSolution:
    """
    Best of the length-ordered greedy run separately on each class [2^t, 2^{t+1}).
    Zero-weight links belong to no class.
    """
    classes: dict[int, list[Link]] = {}
    for link in inst.links:
        if link.weight == 0.0:
            continue
        classes.setdefault(math.floor(math.log2(link.weight)), []).append(link)

    best = WeightedSolution.empty()
    best_class = None
    for t in sorted(classes):
        sol = _greedy(classes[t], p, inst.alpha, key=lambda l: l.length)
        if sol.total_weight > best.total_weight:
            best, best_class = sol, t
    return WeightedSolution(best.selected, best.total_weight,
                            diagnostics={"weight_class": best_class, "num_classes": len(classes)})


# ─────────────────────────────────────────────────────────────────────────────
# γ BINARY SEARCH
# ─────────────────────────────────────────────────────────────────────────────
def _mwis_sets(g: ConflictGraph) -> tuple[list[frozenset[int]], float]:
    sol = local_ratio_mwis(g)
    return [sol.selected], sol.total_weight


def _tdma_sets(g: ConflictGraph) -> tuple[list[frozenset[int]], float]:
    coloring = first_fit_coloring(g)
    return list(coloring.classes), -float(coloring.num_classes)


SetsAndObjective = Callable[[ConflictGraph], tuple[list[frozenset[int]], float]]

# name → (graph → emitted independent sets, objective to maximize)
ALGORITHMS: dict[str, SetsAndObjective] = {
    "mwis": _mwis_sets,
    "tdma": _tdma_sets,
}


def _refines(inst: Instance, s: frozenset[int], tau: float, power: PowerAssignment, tol: float) -> bool:
    """I_τ(S, i) < 1 for every member, and S is P_τ-feasible."""
    if len(s) < 2:
        return True
    links = inst.select(sorted(s))
    if not (i_tau_vector(links, tau, inst.alpha) < 1.0).all():
        return False
    return is_feasible(links, power, inst.alpha, tol).feasible


def binary_search_gamma(inst: Instance, delta: float, tau: float | None = None,
                        lo: float = Config.GAMMA_SEARCH_LO, hi: float = Config.GAMMA_SEARCH_HI,
                        algorithm: str | SetsAndObjective = "mwis",
                        steps: int = Config.GAMMA_SEARCH_STEPS,
                        samples: int = Config.GAMMA_SEARCH_SAMPLES,
                        seed: int | Sequence[int] = Config.DEFAULT_SEED,
                        tol: float = Config.FEASIBILITY_TOL) -> GammaSearchResult:
    """
    Bisect log₂ γ over [lo, hi] for the best objective at which G_γ^δ refines
    P_τ-feasibility.

    A candidate γ is accepted when the algorithm's emitted sets and
    ``samples`` random maximal independent sets of G_γ^δ all have I_τ < 1.
    The samples come from a generator seeded with ``seed``, the same one at
    every γ. ``algorithm`` is a name from ALGORITHMS or a callable with the
    same shape. ``hi`` is evaluated first; if even that fails the result
    comes back with ``feasible=False``.
    """
    if not 1.0 <= lo <= hi <= Config.GAMMA_SEARCH_HI:
        raise ParameterRangeError(f"Need 1 ≤ lo ≤ hi ≤ 2^20, got [{lo}, {hi}].")
    if callable(algorithm):
        run = algorithm
    else:
        try:
            run = ALGORITHMS[algorithm]
        except KeyError:
            raise ParameterRangeError(f"Unknown algorithm '{algorithm}'; choose from {sorted(ALGORITHMS)}.") from None
    tau = choose_tau(delta, inst.alpha, inst.m) if tau is None else tau
    power = PowerAssignment.oblivious(tau)
    evaluations = 0

    def evaluate(gamma: float) -> GammaSearchResult:
        nonlocal evaluations
        evaluations += 1
        graph = build_conflict_graph(inst, ConflictFn(gamma, delta))
        sets, objective = run(graph)
        sampled = sample_independent_sets(graph, samples, np.random.default_rng(seed))
        feasible = all(_refines(inst, s, tau, power, tol) for s in [*sets, *sampled])
        logger.debug("gamma=%.6g objective=%.6g feasible=%s", gamma, objective, feasible)
        return GammaSearchResult(gamma, objective, feasible, evaluations, tuple(sets), delta, tau)

    best = evaluate(hi)
    if not best.feasible:
        logger.warning("gamma search failed: gamma=hi=%g is not feasible (delta=%.6g)", hi, delta)
        return best

    a, b = math.log2(lo), math.log2(hi)
    for _ in range(steps):
        mid = (a + b) / 2.0
        result = evaluate(2.0 ** mid)
        if result.feasible:
            b = mid
            if result.objective >= best.objective:
                best = result
        else:
            a = mid

    logger.info("gamma search: gamma=%.6g objective=%.6g after %d evaluations",
                best.gamma, best.objective, evaluations)
    return GammaSearchResult(best.gamma, best.objective, True, evaluations,
                             best.solution, delta, tau)


# ─────────────────────────────────────────────────────────────────────────────
# EXPERIMENT
# ─────────────────────────────────────────────────────────────────────────────
def _verified(inst: Instance, sol: WeightedSolution, p: PowerAssignment, label: str) -> float:
    report = is_instance_subset_feasible(inst, sorted(sol.selected), p)
    if not report.feasible:
        raise InvariantViolation(f"{label}: reported set is infeasible (worst link {report.worst_link}).")
    return sol.total_weight


def _run_trial(cfg: ExperimentConfig, l_max: float, trial: int) -> tuple[list[dict], list[dict]]:
    inst = gen_random_instance(cfg, trial, l_max)
    base_tau = choose_tau(delta_for_epsilon(cfg.epsilons[0], cfg.alpha, cfg.m), cfg.alpha, cfg.m)
    base_power = PowerAssignment.oblivious(base_tau)
    records: list[dict] = []
    failures: list[dict] = []

    for label in cfg.algorithms:
        try:
            if label == CONFLICT_GRAPH_MWIS:
                for eps in cfg.epsilons:
                    delta = delta_for_epsilon(eps, cfg.alpha, cfg.m)
                    found = binary_search_gamma(inst, delta, seed=(cfg.seed, trial))
                    if not found.feasible:
                        failures.append({"l_max": l_max, "trial": trial, "algorithm": label,
                                         "epsilon": eps, "error": "no feasible gamma"})
                        continue
                    sol = WeightedSolution(found.solution[0], found.objective)
                    weight = _verified(inst, sol, PowerAssignment.oblivious(found.tau), label)
                    records.append({"l_max": l_max, "algorithm": label, "epsilon": eps,
                                    "trial": trial, "weight": weight})
            else:
                heuristic = greedy_feasibility_heuristic if label == GREEDY_FEASIBILITY else weight_class_baseline
                weight = _verified(inst, heuristic(inst, base_power), base_power, label)
                records.append({"l_max": l_max, "algorithm": label, "epsilon": math.nan,
                                "trial": trial, "weight": weight})
        except InvariantViolation:
            raise
        except Exception as e:
            logger.warning("Trial %d (l_max=%g, %s) failed: %s", trial, l_max, label, e)
            failures.append({"l_max": l_max, "trial": trial, "algorithm": label,
                             "epsilon": None, "error": str(e)})
    return records, failures


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Mean and sample standard deviation of the MWISL objective per (l_max, algorithm, ε)."""
    tasks = [(l_max, trial) for l_max in cfg.l_max for trial in range(cfg.trials)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
        outcomes = list(ex.map(lambda t: _run_trial(cfg, *t), tasks))

    records = [r for recs, _ in outcomes for r in recs]
    failures = [f for _, fails in outcomes for f in fails]
    if not records:
        return ExperimentResult([], failures, _shortfalls(cfg, []))

    df = pd.DataFrame(records)
    summary = (df.groupby(["l_max", "algorithm", "epsilon"], sort=False, dropna=False)["weight"]
                 .agg(mean_weight="mean", std_weight="std", trials="count")
                 .reset_index())
    rows = [
        ResultRow(
            l_max=float(row.l_max),
            algorithm=row.algorithm,
            epsilon=None if pd.isna(row.epsilon) else float(row.epsilon),
            mean_weight=float(row.mean_weight),
            std_weight=0.0 if pd.isna(row.std_weight) else float(row.std_weight),
            trials=int(row.trials),
            seed=cfg.seed,
        )
        for row in summary.itertuples(index=False)
    ]
    for row in rows:
        logger.info("l_max=%g %s eps=%s mean=%.4f std=%.4f", row.l_max, row.algorithm,
                    row.epsilon, row.mean_weight, row.std_weight)
    incomplete = _shortfalls(cfg, rows)
    if incomplete:
        logger.warning("%d result cells have fewer than %d trials", len(incomplete), cfg.trials)
    return ExperimentResult(rows, failures, incomplete)


def _shortfalls(cfg: ExperimentConfig, rows: list[ResultRow]) -> list[dict]:
    """Expected (l_max, algorithm, ε) cells with fewer successful trials than configured."""
    counts = {(r.l_max, r.algorithm, r.epsilon): r.trials for r in rows}
    expected = [(float(l_max), label, eps)
                for l_max in cfg.l_max
                for label in cfg.algorithms
                for eps in (cfg.epsilons if label == CONFLICT_GRAPH_MWIS else (None,))]
    return [{"l_max": l_max, "algorithm": label, "epsilon": eps,
             "trials": counts.get((l_max, label, eps), 0), "expected": cfg.trials}
            for l_max, label, eps in expected
            if counts.get((l_max, label, eps), 0) < cfg.trials]


def write_csv(rows: Iterable[ResultRow], out: str | TextIO) -> None:
    """Fixed-column CSV with round-trip float precision."""
    frame = pd.DataFrame([r.to_dict() for r in rows], columns=list(Config.CSV_COLUMNS))
    frame.to_csv(out, index=False, float_format="%.17g")
