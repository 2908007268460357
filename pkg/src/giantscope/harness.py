"""Experiment orchestration: seeded trials over parameter grids, prediction
columns, and deterministic CSV/JSON emission.

Every trial draws its RNG stream from (root seed, cell index, trial index),
so a config plus root seed fully determines the output bytes. Rows are sorted
before writing; trial failures become flagged rows and the run continues.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import diameter as diam_mod
from . import fpp as fpp_mod
from . import graphcore as gc
from . import samplers as sm

SCHEMA_VERSION = 1
BUILD_ID = "giantscope-0.1.0"

KERNEL_EXACT_GATE = 5_000
KERNEL_SAMPLE_SOURCES = 1_000


class ConfigError(ValueError):
    pass


def predicted_diameter(eps: float, n: int) -> float:
    """The diameter scale (3/eps) * ln(eps^3 n); natural log throughout."""
    return (3.0 / eps) * math.log(eps**3 * n)


def predicted_core_diameter(eps: float, n: int) -> float:
    return (2.0 / 3.0) * predicted_diameter(eps, n)


def predicted_kernel_distance(eps: float, n: int) -> float:
    return (5.0 / 9.0) * predicted_diameter(eps, n)


def regular_weighted_coefficient(d: int) -> float:
    return 1.0 / (d - 2) + 2.0 / d


def regular_metric_coefficient(d: int) -> float:
    return 1.0 + 1.0 / (d - 2)


@dataclass
class ExperimentConfig:
    kind: str
    n: list[int] = field(default_factory=list)
    eps: list[float] = field(default_factory=list)
    d: list[int] = field(default_factory=list)
    mu: list[float] = field(default_factory=lambda: [0.5, 0.9, 0.99])
    k: list[int] = field(default_factory=lambda: [1, 2, 5, 10, 20, 50, 100])
    trials: int = 1
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    exact_cap: int = fpp_mod.DEFAULT_METRIC_CAP
    kernel_gate: int = KERNEL_EXACT_GATE
    pgw_trees: int = 100_000
    models: list[str] = field(default_factory=lambda: ["direct", "young"])
    workers: int = 1
    timings: bool = False

    def validate(self) -> None:
        kinds = ("giant", "regular_fpp", "pgw", "model_compare")
        if self.kind not in kinds:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {kinds}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.kind in ("giant", "model_compare"):
            if not self.n or not self.eps:
                raise ConfigError(f"{self.kind} experiments need --n and --eps")
            for n in self.n:
                if n <= 0:
                    raise ConfigError("n values must be positive")
            for e in self.eps:
                if e <= 0:
                    raise ConfigError("eps values must be positive")
            for n in self.n:
                for e in self.eps:
                    if e**3 * n < 50:
                        raise ConfigError(
                            f"eps^3*n = {e**3 * n:.3g} < 50 for n={n}, eps={e}; "
                            "the giant constructions need eps^3*n >= 50")
        if self.kind == "regular_fpp":
            if not self.n or not self.d:
                raise ConfigError("regular_fpp experiments need --n and --d")
            for d in self.d:
                if d < 3:
                    raise ConfigError("d must be >= 3")
        if self.kind == "pgw":
            for m in self.mu:
                if not 0 < m < 1:
                    raise ConfigError("mu values must be in (0,1)")
            for k in self.k:
                if k < 0:
                    raise ConfigError("k values must be >= 0")
        if self.kind == "model_compare":
            for m in self.models:
                if m not in ("direct", "young", "general"):
                    raise ConfigError(f"unknown model {m!r}")


def _base_row(cfg: ExperimentConfig, **kw) -> dict:
    row = {"schema_version": SCHEMA_VERSION, "build": BUILD_ID, "kind": cfg.kind,
           "flag": ""}
    row.update(kw)
    return row


def _finish_row(row: dict, t0: float, cfg: ExperimentConfig) -> dict:
    if cfg.timings:
        row["wall_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    return row


def _max_kernel_distance(c1_graph: gc.MultiGraph, kernel_ids: np.ndarray,
                         gate: int, rng: np.random.Generator) -> tuple[int, bool]:
    """Max over kernel-vertex pairs of hop distance inside the component.

    Exact below `gate` sources; above it, a labeled lower bound from sampled
    sources plus double-sweep extremes within the kernel set.
    """
    if kernel_ids.size < 2:
        return 0, True
    exact = kernel_ids.size <= gate
    if exact:
        sources = kernel_ids
    else:
        pick = rng.choice(kernel_ids, size=min(KERNEL_SAMPLE_SOURCES, kernel_ids.size),
                          replace=False)
        sweep = diam_mod.bfs_distances(c1_graph, int(kernel_ids[0]))
        far = int(kernel_ids[np.argmax(sweep[kernel_ids])])
        sources = np.unique(np.append(pick, [int(kernel_ids[0]), far]))
    best = 0
    for s in sources:
        dist = diam_mod.bfs_distances(c1_graph, int(s))
        best = max(best, int(dist[kernel_ids].max()))
    return best, exact


def _giant_trial(cfg: ExperimentConfig, cell: int, n: int, eps: float, trial: int) -> dict:
    t0 = time.perf_counter()
    row = _base_row(cfg, n=n, eps=eps, trial=trial,
                    predicted_d=predicted_diameter(eps, n),
                    predicted_core=predicted_core_diameter(eps, n),
                    predicted_kernel=predicted_kernel_distance(eps, n))
    rng = sm.rng_stream(cfg.seed, cell, trial)
    try:
        g = sm.sample_gnp(n, (1.0 + eps) / n, rng)
        c1 = gc.largest_component(g)
        core = gc.two_core(c1.graph)
        kd = gc.kernel_contract(core.graph)
        kernel_in_c1 = core.vertices[kd.kernel_vertices]
        diam_c1, _ = diam_mod.exact_diameter(c1.graph)
        diam_core, _ = diam_mod.exact_diameter(core.graph)
        max_kernel, kernel_exact = _max_kernel_distance(
            c1.graph, kernel_in_c1, cfg.kernel_gate, rng)
        row.update(
            size_c1=c1.graph.n, size_core=core.graph.n, size_kernel=int(kd.kernel.n),
            diam_c1=diam_c1, diam_core=diam_core, max_kernel_dist=max_kernel,
            kernel_exact=kernel_exact,
            ratio_c1=diam_c1 / row["predicted_d"],
            ratio_core=diam_core / row["predicted_core"],
            ratio_kernel=max_kernel / row["predicted_kernel"],
        )
    except Exception as exc:  # noqa: BLE001 - flagged rows, run continues
        row["flag"] = f"{type(exc).__name__}: {exc}"
    return _finish_row(row, t0, cfg)


def _regular_fpp_trial(cfg: ExperimentConfig, cell: int, d: int, n: int, trial: int) -> dict:
    t0 = time.perf_counter()
    w_pred = regular_weighted_coefficient(d) * math.log(n)
    m_pred = regular_metric_coefficient(d) * math.log(n)
    row = _base_row(cfg, d=d, n=n, trial=trial,
                    predicted_weighted=w_pred, predicted_metric=m_pred)
    rng = sm.rng_stream(cfg.seed, cell, trial)
    try:
        g = sm.sample_configuration(np.full(n, d, dtype=np.int64), rng)
        wg = fpp_mod.assign_exp_weights(g, 1.0, rng)
        apsp = fpp_mod.all_pairs_distances(wg) if n <= cfg.exact_cap else None
        if apsp is None:
            raise gc.GraphError(f"n={n} above exact cap {cfg.exact_cap}")
        wdiam, pair = fpp_mod.weighted_diameter(wg, apsp=apsp)
        mdiam = fpp_mod.metric_diameter(wg, cap=cfg.exact_cap, apsp=apsp)
        wmax = float(wg.weights.max())
        if not (mdiam >= wdiam - 1e-4 and mdiam <= wdiam + wmax + 1e-4):
            raise AssertionError(
                f"metric/weighted diameter relation violated: {mdiam} vs {wdiam}")
        hops = fpp_mod.diameter_path_edge_count(wg, pair[0], pair[1])
        threshold = (math.log(n) - math.log(math.log(n))) / d
        good = fpp_mod.count_good_vertices(wg, threshold)
        row.update(
            weighted_diam=wdiam, metric_diam=mdiam, diam_u=pair[0], diam_v=pair[1],
            diam_path_edges=hops, good_vertices=good,
            ratio_weighted=wdiam / w_pred, ratio_metric=mdiam / m_pred,
        )
    except Exception as exc:  # noqa: BLE001
        row["flag"] = f"{type(exc).__name__}: {exc}"
    return _finish_row(row, t0, cfg)


def _pgw_cell(cfg: ExperimentConfig, cell: int, mu: float, k: int) -> dict:
    t0 = time.perf_counter()
    row = _base_row(cfg, mu=mu, k=k, trial=0)
    try:
        exact = sm.pgw_survival_exact(mu, k)
        lower, upper = sm.pgw_survival_sandwich(mu, k) if k >= 1 else (1.0, 1.0)
        rng = sm.rng_stream(cfg.seed, cell, 0)
        z = sm.pgw_level_alive(mu, cfg.pgw_trees, k, rng)
        phat = float(np.count_nonzero(z > 0)) / cfg.pgw_trees
        se = math.sqrt(max(phat * (1 - phat), 1e-30) / cfg.pgw_trees)
        row.update(exact=exact, lower=lower, upper=upper,
                   mc_estimate=phat, mc_se=se, trees=cfg.pgw_trees,
                   contained=bool(lower <= exact <= upper))
    except Exception as exc:  # noqa: BLE001
        row["flag"] = f"{type(exc).__name__}: {exc}"
    return _finish_row(row, t0, cfg)


def _model_sizes(ag: sm.AnnotatedGiant) -> tuple[int, int, int, gc.MultiGraph]:
    core = gc.induced_subgraph(ag.graph, ag.core_vertices)
    return ag.graph.n, ag.core_vertices.size, ag.kernel_vertices.size, core.graph


def _model_compare_trial(cfg: ExperimentConfig, cell: int, n: int, eps: float,
                         model: str, trial: int) -> dict:
    t0 = time.perf_counter()
    row = _base_row(cfg, n=n, eps=eps, model=model, trial=trial)
    rng = sm.rng_stream(cfg.seed, cell, trial)
    try:
        if model == "direct":
            g = sm.sample_gnp(n, (1.0 + eps) / n, rng)
            c1 = gc.largest_component(g)
            core = gc.two_core(c1.graph)
            kd = gc.kernel_contract(core.graph)
            size_c1, size_core, size_kernel = c1.graph.n, core.graph.n, kd.kernel.n
            core_graph = core.graph
        else:
            build = sm.sample_young_giant if model == "young" else sm.sample_general_giant
            ag = build(n, eps, rng)
            size_c1, size_core, size_kernel, core_graph = _model_sizes(ag)
        labels = gc.component_labels(core_graph)
        if labels.size and labels.max(initial=0) != 0:
            row["flag"] = "core_disconnected"
            core_graph = gc.largest_component(core_graph).graph
        diam_core, _ = diam_mod.exact_diameter(core_graph)
        row.update(size_c1=size_c1, size_core=size_core, size_kernel=size_kernel,
                   diam_core=diam_core)
    except Exception as exc:  # noqa: BLE001
        row["flag"] = f"{type(exc).__name__}: {exc}"
    return _finish_row(row, t0, cfg)


def _run_tasks(tasks, workers: int):
    if workers <= 1:
        return [fn(*args) for fn, *args in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for fn, *args in tasks]
        return [f.result() for f in futures]


def run_giant_experiment(cfg: ExperimentConfig) -> list[dict]:
    cfg.validate()
    cells = [(n, e) for n in cfg.n for e in cfg.eps]
    tasks = [(_giant_trial, cfg, ci, n, e, t)
             for ci, (n, e) in enumerate(cells) for t in range(cfg.trials)]
    rows = _run_tasks(tasks, cfg.workers)
    rows.sort(key=lambda r: (r["n"], r["eps"], r["trial"]))
    return rows


def run_regular_fpp_experiment(cfg: ExperimentConfig) -> list[dict]:
    cfg.validate()
    cells = [(d, n) for d in cfg.d for n in cfg.n]
    tasks = [(_regular_fpp_trial, cfg, ci, d, n, t)
             for ci, (d, n) in enumerate(cells) for t in range(cfg.trials)]
    rows = _run_tasks(tasks, cfg.workers)
    rows.sort(key=lambda r: (r["d"], r["n"], r["trial"]))
    return rows


def run_pgw_experiment(cfg: ExperimentConfig) -> list[dict]:
    cfg.validate()
    cells = [(mu, k) for mu in cfg.mu for k in cfg.k]
    tasks = [(_pgw_cell, cfg, ci, mu, k) for ci, (mu, k) in enumerate(cells)]
    rows = _run_tasks(tasks, cfg.workers)
    rows.sort(key=lambda r: (r["mu"], r["k"]))
    return rows


def run_model_comparison(cfg: ExperimentConfig) -> list[dict]:
    cfg.validate()
    cells = [(n, e) for n in cfg.n for e in cfg.eps]
    tasks = []
    for ci, (n, e) in enumerate(cells):
        for mi, model in enumerate(cfg.models):
            for t in range(cfg.trials):
                tasks.append((_model_compare_trial, cfg, ci * len(cfg.models) + mi,
                              n, e, model, t))
    rows = _run_tasks(tasks, cfg.workers)
    rows.sort(key=lambda r: (r["n"], r["eps"], r["model"], r["trial"]))
    rows.extend(summarize_model_comparison(rows, cfg))
    return rows


def summarize_model_comparison(rows: list[dict], cfg: ExperimentConfig) -> list[dict]:
    """Per-model means and relative gaps vs the direct extraction, per cell."""
    out = []
    cells = sorted({(r["n"], r["eps"]) for r in rows if r.get("trial", -1) >= 0})
    quantities = ("size_c1", "size_core", "size_kernel", "diam_core")
    for n, e in cells:
        means: dict[str, dict[str, float]] = {}
        for model in cfg.models:
            group = [r for r in rows
                     if r["n"] == n and r["eps"] == e and r.get("model") == model
                     and not r["flag"] and r.get("trial", -1) >= 0]
            if group:
                means[model] = {q: float(np.mean([r[q] for r in group])) for q in quantities}
                out.append(_base_row(cfg, n=n, eps=e, model=f"mean:{model}", trial=-1,
                                     **means[model]))
        if "direct" in means:
            for model in cfg.models:
                if model == "direct" or model not in means:
                    continue
                gaps = {f"gap_{q}": abs(means[model][q] - means["direct"][q])
                        / max(means["direct"][q], 1e-30) for q in quantities}
                out.append(_base_row(cfg, n=n, eps=e, model=f"gap:{model}", trial=-1, **gaps))
    return out


RUNNERS = {
    "giant": run_giant_experiment,
    "regular_fpp": run_regular_fpp_experiment,
    "pgw": run_pgw_experiment,
    "model_compare": run_model_comparison,
}


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def rows_to_csv(rows: list[dict]) -> str:
    """Deterministic CSV: union of columns in first-seen order, '' for gaps."""
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def write_rows(rows: list[dict], path: str, fmt: str = "csv") -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def config_from_dict(data: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "kind" not in data:
        raise ConfigError("config must set 'kind'")
    for key in ("n", "eps", "d", "mu", "k", "models"):
        if key in data and not isinstance(data[key], list):
            data[key] = [data[key]]
    return ExperimentConfig(**data)
