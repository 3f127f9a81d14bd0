"""Experiment configuration: a JSON document validated against ``CONFIG_SCHEMA``.

Relative paths are resolved against the directory holding the config file.
Command-line flags override the corresponding keys.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import jsonschema

from .features import ClientRegistry, FeatureParams, FeatureSet
from .ingest import LabeledDataset, assemble_training_set, parse_account_file, parse_timestamp, split_by_label
from .learners import Algorithm, LearnerSpec


class ConfigError(ValueError):
    pass


ALL_FEATURE_SETS = [fs.value for fs in FeatureSet]
ALL_ALGORITHMS = ["mlp", "ripper", "naive_bayes", "random_forest", "knn"]

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "training_sets": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "bots": {"type": "string"},
                    "humans": {"type": "string"},
                    "data": {"type": "string"},
                },
                "oneOf": [{"required": ["bots", "humans"]}, {"required": ["data"]}],
            },
        },
        "feature_sets": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "algorithms": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "hyperparameters": {"type": "object", "additionalProperties": {"type": "object"}},
        "k": {"type": "integer", "minimum": 2},
        "seed": {"type": "integer", "minimum": 0},
        "min_posts": {"type": "integer", "minimum": 0},
        "window": {"type": "integer", "minimum": 1},
        "require_cap": {"type": "boolean"},
        "clients": {"type": ["string", "null"]},
        "cap": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "base_prior": {"type": "number", "exclusiveMinimum": 0},
                "domain_prior": {"type": ["number", "null"], "exclusiveMinimum": 0, "maximum": 1},
            },
        },
        "reference_time": {"type": ["string", "null"]},
        "near_100_tolerance": {"type": "number", "minimum": 0},
        "thresholds": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "subsample_ratio": {"type": "number", "minimum": 1},
        "top_n": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
    },
}


@dataclass
class TrainingSetRecipe:
    name: str
    bots: Path | None = None
    humans: Path | None = None
    data: Path | None = None

    def files(self) -> list[Path]:
        return [p for p in (self.bots, self.humans, self.data) if p is not None]

    def sources(self, strict: bool = False) -> tuple[LabeledDataset, LabeledDataset]:
        if self.data is not None:
            return split_by_label(parse_account_file(self.data, strict=strict))
        return parse_account_file(self.bots, strict=strict), parse_account_file(self.humans, strict=strict)

    def assemble(self, min_posts: int, require_cap: bool, strict: bool = False) -> LabeledDataset:
        bots, humans = self.sources(strict)
        return assemble_training_set(self.name, bots, humans, require_cap=require_cap, min_posts=min_posts)


@dataclass
class ExperimentConfig:
    training_sets: list[TrainingSetRecipe] = field(default_factory=list)
    feature_sets: list[str] = field(default_factory=lambda: list(ALL_FEATURE_SETS))
    algorithms: list[str] = field(default_factory=lambda: list(ALL_ALGORITHMS))
    hyperparameters: dict[str, dict] = field(default_factory=dict)
    k: int = 10
    seed: int = 0
    min_posts: int = 400
    window: int = 400
    require_cap: bool = True
    clients: Path | None = None
    base_prior: float = 0.15
    domain_prior: float | None = None
    reference_time: str | None = None
    near_100_tolerance: float = 0.05
    thresholds: list[int] = field(default_factory=lambda: [100, 200, 300, 400])
    subsample_ratio: float = 1.0
    top_n: int = 5
    out: Path = Path("results")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path = Path(".")) -> "ExperimentConfig":
        try:
            jsonschema.validate(raw, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"config {where}: {exc.message}") from exc

        def path(value):
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base_dir / p

        cfg = cls()
        cfg.training_sets = [
            TrainingSetRecipe(t["name"], path(t.get("bots")), path(t.get("humans")), path(t.get("data")))
            for t in raw.get("training_sets", [])
        ]
        for key in (
            "feature_sets",
            "algorithms",
            "hyperparameters",
            "k",
            "seed",
            "min_posts",
            "window",
            "require_cap",
            "reference_time",
            "near_100_tolerance",
            "thresholds",
            "subsample_ratio",
            "top_n",
        ):
            if key in raw:
                setattr(cfg, key, raw[key])
        cap = raw.get("cap", {})
        cfg.base_prior = cap.get("base_prior", cfg.base_prior)
        cfg.domain_prior = cap.get("domain_prior", cfg.domain_prior)
        cfg.clients = path(raw.get("clients"))
        if "out" in raw:
            cfg.out = path(raw["out"])
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file {path} not found") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from exc
        return cls.from_dict(raw, path.parent)

    # -- validation -------------------------------------------------------

    def validate(self, need_training_sets: bool = True) -> None:
        if need_training_sets and not self.training_sets:
            raise ConfigError("no training sets configured")
        names = [t.name for t in self.training_sets]
        if len(set(names)) != len(names):
            raise ConfigError("training set names must be unique")
        for recipe in self.training_sets:
            for p in recipe.files():
                if not p.is_file():
                    raise ConfigError(f"training set {recipe.name}: file {p} does not exist")
        if self.clients is not None and not self.clients.is_file():
            raise ConfigError(f"client registry {self.clients} does not exist")
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        if self.min_posts < 0:
            raise ConfigError("min_posts must be >= 0")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        try:
            self.feature_set_list()
            self.learner_specs()
            self.feature_params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.thresholds != sorted(self.thresholds):
            raise ConfigError("thresholds must be ascending")

    # -- derived objects --------------------------------------------------

    def feature_set_list(self) -> list[FeatureSet]:
        return [FeatureSet.parse(f) for f in self.feature_sets]

    def learner_specs(self) -> list[LearnerSpec]:
        specs = []
        for name in self.algorithms:
            algo = Algorithm.parse(name)
            hp = self.hyperparameters.get(algo.value, self.hyperparameters.get(name, {}))
            specs.append(LearnerSpec(algo, hp, self.seed))
        return specs

    def feature_params(self) -> FeatureParams:
        registry = ClientRegistry.from_file(self.clients) if self.clients else ClientRegistry()
        ref: datetime | None = parse_timestamp(self.reference_time) if self.reference_time else None
        return FeatureParams(
            window=self.window,
            registry=registry,
            base_prior=self.base_prior,
            domain_prior=self.domain_prior,
            reference_time=ref,
            near_100_tolerance=self.near_100_tolerance,
        )

    def snapshot(self) -> dict:
        data = asdict(self)

        def clean(v):
            if isinstance(v, Path):
                return str(v)
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, list):
                return [clean(x) for x in v]
            return v

        return clean(data)
