"""Build games from per-(model, compute level) evaluation summaries.

Evaluation CSV header::

    model,dataset,method,level_ordinal,level_label,accuracy_pct,avg_output_tokens

Pricing JSON is a flat object ``{"<model>": <usd per million output tokens>}``.

Per level, the price is ``tokens * usd_per_million / 1e6``, the cost is
``price / (1 + margin)`` and the quality is ``value_per_point * accuracy``.
"""
from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError
from .game import GameInstance
from .provider import ComputeLevel, ProviderProfile, ValidationMode
from .shares import PERFECT

__all__ = [
    "CSV_COLUMNS",
    "METHODS",
    "VALUE_PER_POINT",
    "EvaluationRecord",
    "BuildConfig",
    "load_evaluation_csv",
    "load_pricing_json",
    "build_game",
    "fixture_path",
]

CSV_COLUMNS = (
    "model",
    "dataset",
    "method",
    "level_ordinal",
    "level_label",
    "accuracy_pct",
    "avg_output_tokens",
)
METHODS = ("majority_voting", "best_of_n", "chain_of_thought")

# USD per percentage point of accuracy; harder datasets are worth more
VALUE_PER_POINT = {"gsm8k": 0.008, "gpqa": 0.02, "aime": 0.05}


@dataclass(frozen=True)
class EvaluationRecord:
    model: str
    dataset: str
    method: str
    level_ordinal: int
    level_label: str
    accuracy_pct: float
    avg_output_tokens: float


@dataclass(frozen=True)
class BuildConfig:
    value_per_accuracy_point: float
    margin: float = 0.25
    v0: float | None = None
    beta: float = PERFECT
    validation: ValidationMode = ValidationMode.LENIENT

    def __post_init__(self):
        if not self.margin > 0:
            raise ValidationError(f"margin must be positive, got {self.margin}")
        if not self.value_per_accuracy_point > 0:
            raise ValidationError("value_per_accuracy_point must be positive")

    @classmethod
    def for_dataset(cls, dataset, **kwargs):
        try:
            vpp = VALUE_PER_POINT[dataset.lower()]
        except KeyError:
            raise ValidationError(
                f"no value preset for dataset {dataset!r}; known: {sorted(VALUE_PER_POINT)}"
            ) from None
        return cls(value_per_accuracy_point=vpp, **kwargs)


def fixture_path(name) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("ttcgame") / "data" / name))


def _number(text, path, row, col, kind=float):
    try:
        x = kind(text)
    except (TypeError, ValueError):
        raise ParseError(f"cannot parse {text!r} as {kind.__name__}", path, row, col) from None
    if kind is float and not math.isfinite(x):
        raise ParseError(f"non-finite number {text!r}", path, row, col)
    return x


def load_evaluation_csv(path) -> list:
    path = Path(path)
    records = []
    seen = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        header = [h.strip() for h in header]
        if tuple(header) != CSV_COLUMNS:
            raise ParseError(f"expected header {','.join(CSV_COLUMNS)}, got {','.join(header)}", path, 1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(CSV_COLUMNS):
                raise ParseError(f"expected {len(CSV_COLUMNS)} fields, got {len(row)}", path, line)
            f = dict(zip(CSV_COLUMNS, (c.strip() for c in row)))
            rec = EvaluationRecord(
                model=f["model"],
                dataset=f["dataset"],
                method=f["method"],
                level_ordinal=_number(f["level_ordinal"], path, line, "level_ordinal", int),
                level_label=f["level_label"],
                accuracy_pct=_number(f["accuracy_pct"], path, line, "accuracy_pct"),
                avg_output_tokens=_number(f["avg_output_tokens"], path, line, "avg_output_tokens"),
            )
            if not rec.model:
                raise ParseError("empty model name", path, line, "model")
            if rec.method not in METHODS:
                raise ValidationError(f"{path}: line {line}: unknown method {rec.method!r}")
            if not 0 <= rec.accuracy_pct <= 100:
                raise ValidationError(
                    f"{path}: line {line}: accuracy_pct {rec.accuracy_pct} outside [0, 100]"
                )
            if not rec.avg_output_tokens > 0:
                raise ValidationError(f"{path}: line {line}: avg_output_tokens must be positive")
            if rec.level_ordinal < 0:
                raise ValidationError(f"{path}: line {line}: negative level_ordinal")
            key = (rec.model, rec.dataset, rec.method, rec.level_ordinal)
            if key in seen:
                raise ValidationError(
                    f"{path}: line {line}: duplicate level {rec.level_ordinal} for model "
                    f"{rec.model!r} (first seen on line {seen[key]})"
                )
            seen[key] = line
            records.append(rec)
    return records


def load_pricing_json(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("pricing must be a JSON object mapping model to USD per million tokens", path)
    out = {}
    for model, price in data.items():
        if isinstance(price, bool) or not isinstance(price, (int, float)):
            raise ParseError(f"price for {model!r} is not a number", path)
        if not (math.isfinite(price) and price > 0):
            raise ValidationError(f"{path}: price for {model!r} must be positive, got {price}")
        out[model] = float(price)
    return out


def build_game(records, pricing: dict, config: BuildConfig, dataset=None, method=None) -> GameInstance:
    """One provider per model, in order of first appearance.

    ``records`` must describe a single (dataset, method) pair unless
    ``dataset``/``method`` select one.
    """
    recs = [
        r for r in records
        if (dataset is None or r.dataset == dataset) and (method is None or r.method == method)
    ]
    if not recs:
        raise ValidationError("no evaluation records to build a game from")
    combos = {(r.dataset, r.method) for r in recs}
    if len(combos) > 1:
        raise ValidationError(f"records mix several (dataset, method) pairs: {sorted(combos)}")
    by_model = defaultdict(dict)
    for r in recs:
        by_model[r.model][r.level_ordinal] = r
    providers = []
    for model, levels in by_model.items():
        if model not in pricing:
            raise ValidationError(f"no pricing entry for model {model!r}")
        ords = sorted(levels)
        if ords != list(range(len(ords))):
            raise ValidationError(f"model {model!r}: level ordinals {ords} are not 0..{len(ords) - 1}")
        rows = [levels[k] for k in ords]
        price = [r.avg_output_tokens * pricing[model] / 1e6 for r in rows]
        providers.append(
            ProviderProfile(
                id=model,
                quality=[config.value_per_accuracy_point * r.accuracy_pct for r in rows],
                price=price,
                cost=[p / (1.0 + config.margin) for p in price],
                levels=tuple(ComputeLevel(r.level_ordinal, r.level_label) for r in rows),
            )
        )
    return GameInstance(tuple(providers), v0=config.v0, beta=config.beta, validation=config.validation)
