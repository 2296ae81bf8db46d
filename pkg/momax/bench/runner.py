"""Running experiment cells and the ablation sweeps."""
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import lru_cache
import json
import logging
import os
import time
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from . import ExperimentConfig, RecordRow, append_row, write_rows
from .. import MultiObjectiveInstance
from ..algorithms import get_algorithm
from ..const import (
    ALG_LP_GREEDY,
    AXIS_PHI,
    AXIS_REPETITIONS,
    CONF_ALGORITHMS,
    CONF_BUDGETS,
    CONF_COLOR_FILE,
    CONF_COLORS,
    CONF_D,
    CONF_DIRECTED,
    CONF_EDGE_FILES,
    CONF_EDGE_PROB,
    CONF_FAMILY,
    CONF_HARD,
    CONF_INITIATOR,
    CONF_NAME,
    CONF_NODES,
    CONF_OUT,
    CONF_P,
    CONF_PHI,
    CONF_POWER,
    CONF_PROB_FILE,
    CONF_REPETITIONS,
    CONF_SAMPLES,
    CONF_SEEDS,
    CONF_TARGET,
    DEFAULT_ABLATION_BUDGETS,
    DEFAULT_ABLATION_SEEDS,
    DEFAULT_COLORS,
    DEFAULT_ER_P,
    DEFAULT_NODES,
    DEFAULT_PHI,
    DEFAULT_REPETITIONS,
    FAMILY_ER,
    OBJ_CENTRALITY,
    OBJ_COVER,
    STATUS,
    STATUS_BUDGET_TOO_SMALL,
    STATUS_TIMEOUT,
)
from ..exceptions import (
    BudgetTooSmallError,
    ConfigError,
    InstanceError,
    TimeLimitExceeded,
)
from ..generators import GeneratorSpec, generate_cover_instance
from ..objectives import (
    NodeMapping,
    align,
    node_labels,
    read_color_file,
    read_edge_list,
    read_probability_file,
    write_node_mapping,
)
from ..objectives.centrality import build_centrality_instance
from ..objectives.coverage import CoverInstance
from ..objectives.influence import CascadeModel, InfluenceInstance

_LOGGER = logging.getLogger(__name__)


class Variant(NamedTuple):
    """Row label, registered algorithm and its parameters."""

    label: str
    algorithm: str
    params: Dict[str, Any]


def read_graphs(
    objective: str, source: Dict[str, Any]
) -> Tuple[List[nx.Graph], NodeMapping]:
    """Graphs of the configured edge files on one shared node mapping.

    Cover instances read one file per color; the other objectives read the
    first file only.
    """
    edge_files = source[CONF_EDGE_FILES]
    mapping: NodeMapping = {}
    if objective == OBJ_COVER:
        graphs = [read_edge_list(path, False, mapping)[0] for path in edge_files]
    else:
        directed = source.get(CONF_DIRECTED, False)
        graphs = [read_edge_list(edge_files[0], directed, mapping)[0]]
    return align(graphs, len(mapping)), mapping


def node_mapping_path(out: str) -> str:
    """File next to the results CSV holding the node mapping."""
    return f"{os.path.splitext(out)[0]}.nodes.txt"


def build_instance(
    objective: str, source: Dict[str, Any], seed: int, name: str = "instance"
) -> MultiObjectiveInstance:
    """Instance of ``objective`` from generator parameters or files."""
    edge_files = source.get(CONF_EDGE_FILES) or []
    if objective == OBJ_COVER:
        if not edge_files:
            spec = GeneratorSpec(
                family=source[CONF_FAMILY],
                n=source[CONF_NODES],
                p=source[CONF_P],
                d=source[CONF_D],
                initiator=tuple(tuple(row) for row in source[CONF_INITIATOR]),
                power=source[CONF_POWER],
            )
            return generate_cover_instance(
                spec, source[CONF_COLORS], seed, source[CONF_HARD], name
            )
        graphs, mapping = read_graphs(objective, source)
        instance = CoverInstance(graphs, name)
        instance.labels = node_labels(mapping)
        return instance

    (graph,), mapping = read_graphs(objective, source)
    labels = node_labels(mapping)
    color_map, _ = read_color_file(source[CONF_COLOR_FILE], mapping)
    if objective == OBJ_CENTRALITY:
        target = source.get(CONF_TARGET)
        if target is not None and target not in mapping:
            raise InstanceError(f"target {target!r} is not a node of {edge_files[0]}")
        instance = build_centrality_instance(
            graph, color_map, None if target is None else mapping[target], name
        )
        instance.labels = [labels[u] for u in instance.candidates]
        return instance
    edge_prob = (
        read_probability_file(source[CONF_PROB_FILE], mapping)
        if source.get(CONF_PROB_FILE)
        else source[CONF_EDGE_PROB]
    )
    model = CascadeModel(graph, color_map, edge_prob, source[CONF_SAMPLES], seed)
    instance = InfluenceInstance(model, name)
    instance.labels = labels
    return instance


@lru_cache(maxsize=4)
def _cached_instance(objective: str, source_key: str, seed: int, name: str):
    return build_instance(objective, json.loads(source_key), seed, name)


def instance_for(cfg: ExperimentConfig, seed: int) -> MultiObjectiveInstance:
    """Instance of one seed, shared by every cell of that seed in this process."""
    return _cached_instance(
        cfg.objective, json.dumps(cfg.source, sort_keys=True), seed, cfg.name
    )


def run_cell(
    cfg: ExperimentConfig, variant: Variant, budget: int, seed: int
) -> RecordRow:
    """Run one ``(algorithm, B, seed)`` cell with a fresh evaluation count."""
    instance = instance_for(cfg, seed)
    instance.reset()
    runner = get_algorithm(variant.algorithm)
    started = time.perf_counter()
    instance.set_deadline(time.monotonic() + cfg.time_limit_s)
    try:
        result = runner(instance, budget, seed, variant.params)
    except (TimeLimitExceeded, BudgetTooSmallError) as exc:
        status = (
            STATUS_TIMEOUT if isinstance(exc, TimeLimitExceeded) else STATUS_BUDGET_TOO_SMALL
        )
        _LOGGER.warning("%s B=%d seed=%d skipped: %s", variant.label, budget, seed, exc)
        return RecordRow(
            instance=instance.name,
            objective_family=cfg.objective,
            algorithm=variant.label,
            B=budget,
            seed=seed,
            objective=None,
            argmin_color=None,
            oracle_calls=instance.total_calls(),
            wall_time_s=time.perf_counter() - started,
            extra={STATUS: status},
        )
    finally:
        instance.set_deadline(None)
    extra = dict(result.extra)
    extra["solution"] = instance.element_labels(result.solution)
    return RecordRow(
        instance=result.instance_name,
        objective_family=cfg.objective,
        algorithm=variant.label,
        B=budget,
        seed=seed,
        objective=result.objective,
        argmin_color=result.argmin_color,
        oracle_calls=result.oracle_calls,
        wall_time_s=result.wall_time,
        extra=extra,
    )


def run_experiment(
    cfg: ExperimentConfig,
    variants: Optional[Sequence[Variant]] = None,
    out: Optional[str] = None,
) -> List[RecordRow]:
    """Run every ``(variant, B, seed)`` cell.

    Rows are appended to ``out`` as cells finish and the file is rewritten
    in ``(algorithm, B, seed)`` order at the end.
    """
    if variants is None:
        variants = [Variant(name, name, dict(cfg.params)) for name in cfg.algorithms]
    out = cfg.out if out is None else out
    cells = [
        (variant, budget, seed)
        for seed in cfg.seeds
        for variant in variants
        for budget in cfg.budgets
    ]
    _LOGGER.info("%s: %d cells on %d workers", cfg.name, len(cells), cfg.workers)
    if out:
        open(out, "w", encoding="utf-8").close()
        if cfg.source.get(CONF_EDGE_FILES):
            mapping_path = node_mapping_path(out)
            write_node_mapping(read_graphs(cfg.objective, cfg.source)[1], mapping_path)
            _LOGGER.info("node mapping written to %s", mapping_path)

    rows: List[RecordRow] = []

    def finished(row: RecordRow) -> None:
        rows.append(row)
        if out:
            append_row(out, row)
        _LOGGER.info(
            "%s B=%d seed=%d: objective=%s calls=%d",
            row.algorithm,
            row.B,
            row.seed,
            row.objective,
            row.oracle_calls,
        )

    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(run_cell, cfg, *cell) for cell in cells]
            for future in as_completed(futures):
                finished(future.result())
    else:
        for cell in cells:
            finished(run_cell(cfg, *cell))

    rows.sort(key=lambda row: row.sort_key)
    if out:
        write_rows(out, rows)
    return rows


def default_ablation_config(**changes) -> ExperimentConfig:
    """ER graphs on 64 nodes with ``p = 0.1``, 20 colors, five seeds."""
    data = {
        CONF_NAME: "ablation",
        CONF_FAMILY: FAMILY_ER,
        CONF_NODES: DEFAULT_NODES,
        CONF_COLORS: DEFAULT_COLORS,
        CONF_P: DEFAULT_ER_P,
        CONF_ALGORITHMS: [ALG_LP_GREEDY],
        CONF_BUDGETS: list(DEFAULT_ABLATION_BUDGETS),
        CONF_SEEDS: list(DEFAULT_ABLATION_SEEDS),
        CONF_OUT: "ablation.csv",
    }
    data.update({key: value for key, value in changes.items() if value is not None})
    return ExperimentConfig.from_dict(data)


def ablation_variants(axis: str, values: Sequence[float]) -> List[Variant]:
    """LP greedy variants sweeping repetitions at ``φ = 10`` or ``φ`` at 20 repetitions."""
    if not values:
        raise ConfigError("ablation needs at least one value")
    variants = []
    for value in values:
        if axis == AXIS_REPETITIONS:
            params = {CONF_REPETITIONS: int(value), CONF_PHI: DEFAULT_PHI}
            label = f"{ALG_LP_GREEDY}[reps={int(value)}]"
        elif axis == AXIS_PHI:
            if value < 1:
                raise ConfigError(f"phi must be at least 1, got {value}")
            params = {CONF_REPETITIONS: DEFAULT_REPETITIONS, CONF_PHI: float(value)}
            label = f"{ALG_LP_GREEDY}[phi={value:g}]"
        else:
            raise ConfigError(f"unknown ablation axis {axis!r}")
        variants.append(Variant(label, ALG_LP_GREEDY, params))
    return variants


def ablation(
    cfg: ExperimentConfig, axis: str, values: Sequence[float], out: Optional[str] = None
) -> List[RecordRow]:
    """Sweep one LP greedy hyperparameter with the other at its default."""
    variants = ablation_variants(axis, values)
    for variant in variants:
        variant.params.update(
            {key: value for key, value in cfg.params.items() if key not in variant.params}
        )
    return run_experiment(cfg, variants, out)


def mean_objective(rows: Sequence[RecordRow], label: str) -> float:
    """Mean objective of the finished runs of ``label``."""
    values = [row.objective for row in rows if row.algorithm == label and row.objective is not None]
    return float(np.mean(values)) if values else float("nan")
