"""Multi-start minimization of p-frame potentials on products of spheres.

Each restart runs projected gradient descent with Armijo backtracking (see
``kernels.descend``).  Restart seeds come from ``numpy.random.SeedSequence``:
the master seed is spawned into one child per restart, and restart ``i``
draws its starting point from ``Generator(PCG64(children[i]))``.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .bounds import lifted_etf_value, switching_point
from .constructions import RNG_ALGORITHM
from .core import Configuration, as_configuration, canonical_invariant, invariant_digest
from .potentials import coherence, fp_eval

log = logging.getLogger(__name__)

TIE_TOL = 1e-12
# p <= this uses a smoothed warm-up before the exact descent
CONTINUATION_P = 1.0
CONTINUATION_EPS = (1e-1, 1e-2, 1e-3)
COHERENCE_SCHEDULE = (16.0, 32.0, 64.0, 128.0)


@dataclass(frozen=True)
class OptimizerSettings:
    restarts: int = 50
    max_iters: int = 5000
    step_init: float = 0.1
    armijo_beta: float = 0.5
    armijo_c: float = 1e-4
    grad_tol: float = 1e-10
    smoothing_eps: float = 0.0
    seed: int = 0
    zero_cut: float = 1e-12
    cap_value: float = 1e8
    continuation: bool = True
    polish: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("step_init", "grad_tol", "zero_cut", "cap_value"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.armijo_beta < 1 or not 0 < self.armijo_c < 1:
            raise ValueError("armijo_beta and armijo_c must lie in (0, 1)")
        if self.smoothing_eps < 0:
            raise ValueError("smoothing_eps must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class OptimizationResult:
    best_config: Configuration
    best_value: float
    per_restart_values: list
    seed: int
    iterations_used: int
    p: float = float("nan")
    best_restart: int = 0
    statuses: list = field(default_factory=list)
    discarded: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.best_config.n,
            "dim": self.best_config.dim,
            "p": "inf" if math.isinf(self.p) else self.p,
            "best_value": self.best_value,
            "best_restart": self.best_restart,
            "per_restart_values": self.per_restart_values,
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
            "iterations_used": self.iterations_used,
            "statuses": self.statuses,
            "discarded_restarts": self.discarded,
            "backend": kernels.BACKEND,
            "best_config": self.best_config.to_dict(),
            "canonical_invariant": canonical_invariant(self.best_config).tolist(),
        }


@dataclass
class SweepResult:
    rows: list  # (p, value, digest, seed)
    configs: list = field(default_factory=list)

    def values(self):
        return [r[1] for r in self.rows]


def restart_generators(seed: int, count: int):
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


def derived_seeds(seed: int, count: int) -> list[int]:
    """Integer seeds for independent sub-runs (sweep points, conjecture trials)."""
    return [int(s.generate_state(1, np.uint64)[0] >> np.uint64(1)) for s in np.random.SeedSequence(seed).spawn(count)]


def _random_start(rng, n, d):
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1)[:, None]


def fp_gradient(config, p: float, zero_cut: float = 1e-12, cap_value: float = 1e8) -> np.ndarray:
    """Euclidean gradient of FP_p, one row per vector.

    ``2 p sum_{j != i} |t_ij|^{p-1} sign(t_ij) x_j``; pairs with
    ``|t_ij| < zero_cut`` contribute nothing and ``|t|^{p-1}`` is capped at
    ``cap_value``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    x = as_configuration(config).vectors
    return kernels.energy_grad(x, float(p), 0.0, zero_cut, cap_value)[1]


def _descend(x, p, s: OptimizerSettings, eps=0.0, log_objective=False):
    return kernels.descend(
        x, float(p), eps, s.max_iters, s.step_init, s.armijo_beta, s.armijo_c,
        s.grad_tol, s.zero_cut, s.cap_value, log_objective,
    )


def polish(x: np.ndarray, orth_tol: float = 1e-6, par_tol: float = 5e-11, iters: int = 30) -> np.ndarray:
    """Snap near-repeated vectors together and near-orthogonal pairs to exact orthogonality.

    Vectors with ``1 - |t| < par_tol`` are merged into one line; then
    Gauss-Newton steps drive the near-zero inner products between lines to
    zero with minimal-norm corrections.
    """
    n = len(x)
    t = x @ x.T
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if 1.0 - abs(t[i, j]) < par_tol and label[j] == j:
                label[j] = label[i]
    reps = sorted(set(label))
    index = {r: a for a, r in enumerate(reps)}
    lines = np.zeros((len(reps), x.shape[1]))
    for j in range(n):
        r = label[j]
        lines[index[r]] += np.sign(t[r, j]) * x[j]
    lines /= np.linalg.norm(lines, axis=1)[:, None]

    m = len(reps)
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m) if abs(lines[a] @ lines[b]) < orth_tol]
    d = x.shape[1]
    for _ in range(iters if pairs else 0):
        c = np.array([lines[a] @ lines[b] for a, b in pairs])
        if np.max(np.abs(c)) < 1e-17:
            break
        jac = np.zeros((len(pairs), m * d))
        for row, (a, b) in enumerate(pairs):
            jac[row, a * d:(a + 1) * d] = lines[b]
            jac[row, b * d:(b + 1) * d] = lines[a]
        delta = np.linalg.lstsq(jac, -c, rcond=None)[0].reshape(m, d)
        lines = lines + delta
        lines /= np.linalg.norm(lines, axis=1)[:, None]

    if pairs:
        # express the lines in an orthonormal basis adapted to them and flush
        # round-off coordinates, so orthogonal pairs get disjoint supports
        q, _ = np.linalg.qr(lines.T, mode="complete")
        lines = lines @ q
        lines[np.abs(lines) < 1e-13] = 0.0
        lines /= np.linalg.norm(lines, axis=1)[:, None]

    out = np.empty_like(x)
    for j in range(n):
        r = label[j]
        out[j] = np.sign(t[r, j]) * lines[index[r]] if j != r else lines[index[r]]
    return out


def _run_restart(x0: np.ndarray, p: float, s: OptimizerSettings):
    """One restart: optional smoothed warm-up, exact descent, optional polish."""
    x = x0
    iters = 0
    if s.smoothing_eps > 0 and p < 1:
        x, _, it, status = _descend(x, p, s, eps=s.smoothing_eps)
        iters += it
    elif s.continuation and p <= CONTINUATION_P:
        for eps in CONTINUATION_EPS:
            x, _, it, status = _descend(x, p, s, eps=eps)
            iters += it
    x, e, it, status = _descend(x, p, s)
    iters += it
    if status == kernels.NON_FINITE or not math.isfinite(e):
        return x, float("nan"), iters, kernels.NON_FINITE
    if s.polish and p < 2:
        y = polish(x)
        ey = kernels.energy(y, float(p))
        if ey < e:
            x, e = y, ey
    return x, float(e), iters, status


def _reduce(results, seed, p, value_fn=None):
    """Deterministic min-by-value reduction; ties within ``TIE_TOL`` keep the lower index.

    ``value_fn`` re-evaluates each finished restart on its stored (normalized)
    configuration so that ``best_value`` is exactly the value of ``best_config``.
    """
    best = None
    values, statuses, discarded = [], [], []
    total_iters = 0
    for idx, (x, value, iters, status) in enumerate(results):
        total_iters += iters
        statuses.append(kernels.STATUS_NAMES[status])
        if not math.isfinite(value):
            log.warning("restart %d produced a non-finite energy; discarded", idx)
            discarded.append(idx)
            values.append(None)
            continue
        config = Configuration(x)
        if value_fn is not None:
            value = float(value_fn(config))
        values.append(value)
        if best is None or value < best[1] - TIE_TOL:
            best = (idx, value, config)
    if best is None:
        raise RuntimeError("every restart produced a non-finite energy")
    idx, value, config = best
    return OptimizationResult(
        best_config=config, best_value=value, per_restart_values=values, seed=seed,
        iterations_used=total_iters, p=p, best_restart=idx, statuses=statuses, discarded=discarded,
    )


def _map(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def minimize(n: int, d: int, p: float, settings: OptimizerSettings | None = None, initial=None) -> OptimizationResult:
    """Best of ``settings.restarts`` projected-gradient runs for FP_p.

    ``initial`` (a configuration) replaces the random start of restart 0.
    """
    s = settings or OptimizerSettings()
    if n < 2 or d < 2:
        raise ValueError("need N >= 2 and d >= 2")
    if not p > 0 or math.isinf(p):
        raise ValueError("p must be positive and finite; use minimize_coherence for p = inf")
    starts = [_random_start(g, n, d) for g in restart_generators(s.seed, s.restarts)]
    if initial is not None:
        starts[0] = np.array(as_configuration(initial).vectors)
    results = _map(lambda x0: _run_restart(x0, p, s), starts, s.workers)
    return _reduce(results, s.seed, float(p), lambda c: fp_eval(c, p))


def minimize_coherence(n: int, d: int, settings: OptimizerSettings | None = None,
                       schedule=COHERENCE_SCHEDULE) -> OptimizationResult:
    """Approximate the Grassmannian packing by minimizing ``log(FP_p) / p`` along
    an increasing ``p`` schedule, warm-starting each stage.  Values are coherences."""
    s = settings or OptimizerSettings()
    if n < 2 or d < 2:
        raise ValueError("need N >= 2 and d >= 2")
    gens = restart_generators(s.seed, s.restarts)

    def run(rng):
        x = _random_start(rng, n, d)
        if n <= d:
            q, _ = np.linalg.qr(x.T)
            return q.T[:n] if q.shape[1] >= n else x, 0.0, 0, kernels.CONVERGED
        iters = 0
        status = kernels.CONVERGED
        for q in schedule:
            x, e, it, status = _descend(x, q, s, log_objective=True)
            iters += it
            if status == kernels.NON_FINITE:
                return x, float("nan"), iters, status
        return x, coherence(x), iters, status

    return _reduce(_map(run, gens, s.workers), s.seed, math.inf, coherence)


def sweep(n: int, d: int, p_grid, settings: OptimizerSettings | None = None, warm_start: bool = False) -> SweepResult:
    """Minimize at each ``p`` of an increasing grid.

    Grid point ``i`` uses the ``i``-th derived seed, so a row can be replayed
    with ``minimize(..., seed=row_seed)``.
    """
    s = settings or OptimizerSettings()
    grid = [float(p) for p in p_grid]
    if not grid:
        raise ValueError("p grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("p grid must be strictly increasing")
    seeds = derived_seeds(s.seed, len(grid))
    rows, configs = [], []
    previous = None
    for p, seed in zip(grid, seeds):
        res = minimize(n, d, p, replace(s, seed=seed), initial=previous if warm_start else None)
        rows.append((p, res.best_value, invariant_digest(res.best_config), seed))
        configs.append(res.best_config)
        previous = res.best_config
    return SweepResult(rows, configs)


def conjecture_interval(d: int, k: int) -> tuple[float, float]:
    """Tested ``p`` interval for the lifted simplex ``L_k^d``."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got d={d}, k={k}")
    lo = 0.1 if k == 1 else switching_point(k - 1)
    hi = 2.0 if k == d else switching_point(k)
    return lo, hi


@dataclass
class ConjectureReport:
    d: int
    k: int
    p_min: float
    p_max: float
    trials: int
    beat_count: int
    beat_count_significant: int
    max_gap: float
    gap_tol: float
    seed: int
    records: list

    def to_dict(self):
        return {
            "d": self.d, "k": self.k, "p_min": self.p_min, "p_max": self.p_max,
            "trials": self.trials, "beat_count": self.beat_count,
            "beat_count_significant": self.beat_count_significant, "gap_tol": self.gap_tol,
            "max_gap": self.max_gap, "seed": self.seed, "records": self.records,
        }


def conjecture_test(d: int, k: int, settings: OptimizerSettings | None = None, gap_tol: float = 1e-9) -> ConjectureReport:
    """Fifty single-start minimizations of FP_{p, d+1, d} compared with ``L_k^d``.

    Five trials at each end of the interval and forty at uniform random
    ``p`` inside it.  A trial "beats" the reference when its minimized value is
    strictly lower; ``max_gap`` is the largest such margin (0 if none).
    """
    s = settings or OptimizerSettings()
    lo, hi = conjecture_interval(d, k)
    seq = np.random.SeedSequence(s.seed)
    trial_seqs = seq.spawn(51)
    p_rng = np.random.Generator(np.random.PCG64(trial_seqs[50]))
    ps = [lo] * 5 + [hi] * 5 + list(p_rng.uniform(lo, hi, size=40))

    def trial(args):
        p, ss = args
        x0 = _random_start(np.random.Generator(np.random.PCG64(ss)), d + 1, d)
        x, value, _, status = _run_restart(x0, p, s)
        return p, value, status

    records = []
    beat = significant = 0
    max_gap = 0.0
    for p, value, status in _map(trial, list(zip(ps, trial_seqs[:50])), s.workers):
        ref = lifted_etf_value(k, p)
        gap = ref - value
        if value < ref:
            beat += 1
            max_gap = max(max_gap, gap)
            if gap > gap_tol:
                significant += 1
        records.append({"p": p, "value": value, "reference": ref, "gap": gap, "status": kernels.STATUS_NAMES[status]})
    return ConjectureReport(d, k, lo, hi, len(ps), beat, significant, max_gap, gap_tol, s.seed, records)
