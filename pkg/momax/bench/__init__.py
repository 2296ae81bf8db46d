"""Experiment configuration, result records and their CSV form."""
import csv
from dataclasses import asdict, dataclass, field
import json
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Tuple

import pandas as pd
import voluptuous as vol
import yaml

from ..const import (
    ALGORITHM_NAMES,
    CONF_ALGORITHMS,
    CONF_BUDGETS,
    CONF_COLOR_FILE,
    CONF_COLORS,
    CONF_D,
    CONF_DELTA,
    CONF_DIRECTED,
    CONF_EDGE_FILES,
    CONF_EDGE_PROB,
    CONF_EPSILON,
    CONF_FAMILY,
    CONF_HARD,
    CONF_INITIATOR,
    CONF_MWU_ITERATIONS,
    CONF_NAME,
    CONF_NODES,
    CONF_OBJECTIVE,
    CONF_OUT,
    CONF_P,
    CONF_PER_COLOR_BUDGET,
    CONF_PHI,
    CONF_POWER,
    CONF_PROB_FILE,
    CONF_REL_TOL,
    CONF_REPETITIONS,
    CONF_SAMPLES,
    CONF_SEEDS,
    CONF_TARGET,
    CONF_TIME_LIMIT,
    CONF_UDWANI_ITERATIONS,
    CONF_WORKERS,
    CSV_HEADER,
    DEFAULT_BA_D,
    DEFAULT_COLORS,
    DEFAULT_DELTA,
    DEFAULT_EDGE_PROB,
    DEFAULT_EPSILON,
    DEFAULT_ER_P,
    DEFAULT_INFLUENCE_SAMPLES,
    DEFAULT_KRONECKER_INITIATOR,
    DEFAULT_KRONECKER_POWER,
    DEFAULT_NODES,
    DEFAULT_OUT,
    DEFAULT_PHI,
    DEFAULT_REL_TOL,
    DEFAULT_REPETITIONS,
    DEFAULT_TIME_LIMIT_S,
    FAMILIES,
    FAMILY_KRONECKER,
    OBJ_COVER,
    OBJECTIVES,
    STATUS,
    STATUS_TIMEOUT,
    UDWANI_ITERATIONS,
)
from ..exceptions import ConfigError, InputError

_LOGGER = logging.getLogger(__name__)

PositiveInt = vol.All(int, vol.Range(min=1))
Probability = vol.All(vol.Coerce(float), vol.Range(min=0, max=1))
OpenUnit = vol.All(vol.Coerce(float), vol.Range(min=0, max=1, min_included=False, max_included=False))

SOURCE_KEYS = (
    CONF_FAMILY,
    CONF_NODES,
    CONF_COLORS,
    CONF_P,
    CONF_D,
    CONF_INITIATOR,
    CONF_POWER,
    CONF_HARD,
    CONF_EDGE_FILES,
    CONF_DIRECTED,
    CONF_COLOR_FILE,
    CONF_PROB_FILE,
    CONF_TARGET,
    CONF_EDGE_PROB,
    CONF_SAMPLES,
)
PARAM_KEYS = (
    CONF_REPETITIONS,
    CONF_PHI,
    CONF_EPSILON,
    CONF_DELTA,
    CONF_MWU_ITERATIONS,
    CONF_PER_COLOR_BUDGET,
    CONF_REL_TOL,
    CONF_UDWANI_ITERATIONS,
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_NAME, default="experiment"): str,
        vol.Optional(CONF_OBJECTIVE, default=OBJ_COVER): vol.In(OBJECTIVES),
        vol.Optional(CONF_FAMILY, default=FAMILY_KRONECKER): vol.In(FAMILIES),
        vol.Optional(CONF_NODES, default=DEFAULT_NODES): PositiveInt,
        vol.Optional(CONF_COLORS, default=DEFAULT_COLORS): PositiveInt,
        vol.Optional(CONF_P, default=DEFAULT_ER_P): Probability,
        vol.Optional(CONF_D, default=DEFAULT_BA_D): PositiveInt,
        vol.Optional(CONF_INITIATOR, default=[list(r) for r in DEFAULT_KRONECKER_INITIATOR]): [
            [Probability]
        ],
        vol.Optional(CONF_POWER, default=DEFAULT_KRONECKER_POWER): PositiveInt,
        vol.Optional(CONF_HARD, default=False): bool,
        vol.Optional(CONF_EDGE_FILES, default=[]): [str],
        vol.Optional(CONF_DIRECTED, default=False): bool,
        vol.Optional(CONF_COLOR_FILE): str,
        vol.Optional(CONF_PROB_FILE): str,
        vol.Optional(CONF_TARGET): vol.Coerce(str),
        vol.Optional(CONF_EDGE_PROB, default=DEFAULT_EDGE_PROB): Probability,
        vol.Optional(CONF_SAMPLES, default=DEFAULT_INFLUENCE_SAMPLES): PositiveInt,
        vol.Required(CONF_ALGORITHMS): vol.All([vol.In(ALGORITHM_NAMES)], vol.Length(min=1)),
        vol.Required(CONF_BUDGETS): vol.All([PositiveInt], vol.Length(min=1), sorted),
        vol.Optional(CONF_SEEDS, default=[0]): vol.All([int], vol.Length(min=1)),
        vol.Optional(CONF_OUT, default=DEFAULT_OUT): str,
        vol.Optional(CONF_TIME_LIMIT, default=DEFAULT_TIME_LIMIT_S): vol.All(
            vol.Coerce(float), vol.Range(min=0, min_included=False)
        ),
        vol.Optional(CONF_WORKERS, default=1): PositiveInt,
        vol.Optional(CONF_REPETITIONS, default=DEFAULT_REPETITIONS): PositiveInt,
        vol.Optional(CONF_PHI, default=DEFAULT_PHI): vol.All(vol.Coerce(float), vol.Range(min=1)),
        vol.Optional(CONF_EPSILON, default=DEFAULT_EPSILON): OpenUnit,
        vol.Optional(CONF_DELTA, default=DEFAULT_DELTA): OpenUnit,
        vol.Optional(CONF_MWU_ITERATIONS): PositiveInt,
        vol.Optional(CONF_PER_COLOR_BUDGET): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_REL_TOL, default=DEFAULT_REL_TOL): OpenUnit,
        vol.Optional(CONF_UDWANI_ITERATIONS, default=UDWANI_ITERATIONS): PositiveInt,
    }
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment: instance source, algorithms and sweep axes."""

    name: str
    objective: str
    source: Dict[str, Any]
    algorithms: Tuple[str, ...]
    params: Dict[str, Any]
    budgets: Tuple[int, ...]
    seeds: Tuple[int, ...]
    out: str
    time_limit_s: float
    workers: int = 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """Validate a flat mapping."""
        try:
            conf = CONFIG_SCHEMA(dict(data))
        except vol.Invalid as exc:
            raise ConfigError(f"invalid experiment configuration: {exc}") from exc
        objective = conf[CONF_OBJECTIVE]
        if objective != OBJ_COVER:
            if len(conf[CONF_EDGE_FILES]) != 1 or CONF_COLOR_FILE not in conf:
                raise ConfigError(
                    f"{objective} needs exactly one edge file and a color file"
                )
        return cls(
            name=conf[CONF_NAME],
            objective=objective,
            source={key: conf[key] for key in SOURCE_KEYS if key in conf},
            algorithms=tuple(conf[CONF_ALGORITHMS]),
            params={key: conf[key] for key in PARAM_KEYS if key in conf},
            budgets=tuple(conf[CONF_BUDGETS]),
            seeds=tuple(conf[CONF_SEEDS]),
            out=conf[CONF_OUT],
            time_limit_s=conf[CONF_TIME_LIMIT],
            workers=conf[CONF_WORKERS],
        )

    def to_dict(self) -> Dict[str, Any]:
        """Flat mapping accepted by :meth:`from_dict`."""
        data = {
            CONF_NAME: self.name,
            CONF_OBJECTIVE: self.objective,
            CONF_ALGORITHMS: list(self.algorithms),
            CONF_BUDGETS: list(self.budgets),
            CONF_SEEDS: list(self.seeds),
            CONF_OUT: self.out,
            CONF_TIME_LIMIT: self.time_limit_s,
            CONF_WORKERS: self.workers,
        }
        data.update(self.source)
        data.update(self.params)
        return data

    def override(self, **changes) -> "ExperimentConfig":
        """Re-validated copy with keys replaced; ``None`` values are ignored."""
        data = self.to_dict()
        data.update({key: value for key, value in changes.items() if value is not None})
        return ExperimentConfig.from_dict(data)


def load_config(path, **overrides) -> ExperimentConfig:
    """Read a flat YAML document and apply command-line overrides."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key-value mapping")
    data.update({key: value for key, value in overrides.items() if value is not None})
    return ExperimentConfig.from_dict(data)


@dataclass
class RecordRow:
    """One ``(algorithm, B, seed)`` run."""

    instance: str
    objective_family: str
    algorithm: str
    B: int
    seed: int
    objective: Optional[float]
    argmin_color: Optional[int]
    oracle_calls: int
    wall_time_s: float
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def timed_out(self) -> bool:
        """Whether the run hit its time limit."""
        return self.extra.get(STATUS) == STATUS_TIMEOUT

    @property
    def sort_key(self) -> Tuple[str, int, int]:
        """Final row order."""
        return (self.algorithm, self.B, self.seed)

    def to_csv(self) -> List[str]:
        """Fields in header order."""
        return [
            self.instance,
            self.objective_family,
            self.algorithm,
            str(self.B),
            str(self.seed),
            "" if self.objective is None else repr(float(self.objective)),
            "" if self.argmin_color is None else str(self.argmin_color),
            str(self.oracle_calls),
            repr(float(self.wall_time_s)),
            json.dumps(self.extra, sort_keys=True),
        ]

    @classmethod
    def from_csv(cls, record: Dict[str, str]) -> "RecordRow":
        """Parse a row read with the CSV header."""
        return cls(
            instance=record["instance"],
            objective_family=record["objective_family"],
            algorithm=record["algorithm"],
            B=int(record["B"]),
            seed=int(record["seed"]),
            objective=float(record["objective"]) if record["objective"] else None,
            argmin_color=int(record["argmin_color"]) if record["argmin_color"] else None,
            oracle_calls=int(record["oracle_calls"]),
            wall_time_s=float(record["wall_time_s"]),
            extra=json.loads(record["extra"]) if record["extra"] else {},
        )


def _writer(handle):
    return csv.writer(handle, lineterminator="\n")


def append_row(path, row: RecordRow) -> None:
    """Append one row, writing the header first into a new file."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        if fresh:
            writer.writerow(CSV_HEADER)
        writer.writerow(row.to_csv())


def write_rows(path, rows: Iterable[RecordRow]) -> None:
    """Write all rows ordered by ``(algorithm, B, seed)``."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = _writer(handle)
        writer.writerow(CSV_HEADER)
        for row in sorted(rows, key=lambda r: r.sort_key):
            writer.writerow(row.to_csv())


def read_rows(path) -> List[RecordRow]:
    """Parse a results CSV."""
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if tuple(reader.fieldnames or ()) != CSV_HEADER:
                raise InputError(f"{path}: unexpected header {reader.fieldnames}")
            return [RecordRow.from_csv(record) for record in reader]
    except OSError as exc:
        raise InputError(f"cannot read results {path}: {exc}") from exc


SUMMARY_COLUMNS = ("objective", "oracle_calls", "wall_time_s")


def _population_std(series: pd.Series) -> float:
    return float(series.std(ddof=0))


def summarize(rows: Iterable[RecordRow]) -> pd.DataFrame:
    """Mean and population standard deviation per ``(algorithm, B)`` over seeds.

    Timed-out runs count as runs but carry no objective.
    """
    rows = list(rows)
    if not rows:
        raise InputError("nothing to summarize")
    frame = pd.DataFrame([asdict(row) for row in rows])
    frame["objective"] = frame["objective"].astype(float)
    aggregations = {}
    for column in SUMMARY_COLUMNS:
        aggregations[f"{column}_mean"] = (column, "mean")
        aggregations[f"{column}_std"] = (column, _population_std)
    aggregations["runs"] = ("seed", "size")
    return frame.groupby(["algorithm", "B"], sort=True).agg(**aggregations).reset_index()


def format_summary(summary: pd.DataFrame) -> str:
    """Plain-text table."""
    return summary.to_string(index=False, float_format=lambda x: f"{x:.6g}")

