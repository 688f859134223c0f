"""Run configuration: one JSON document describing data, resources, and knobs.

Relative paths are resolved against the config file's directory. Prompt
reference documents are listed as file paths and loaded into memory here,
so the rest of the pipeline only sees texts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import PromptSpec, SCORE_POLICIES
from .embeddings import EmbeddingTable, load_idf, load_vectors
from .features import (
    DifficultyLexicon, FeatureConfig, GROUPS, load_frequency_lexicon,
    load_stopwords, load_synonyms,
)
from .forest import ForestParams
from .textproc import PerceptronTagger, SpellCorrector, load_word_list

CONFIG_ENV_VAR = "SHORTSCORE_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dataset: Path
    prompts: dict[str, PromptSpec]
    out_dir: Path
    embeddings_path: Path | None = None
    embeddings_format: str = "text"
    idf_path: Path | None = None
    spelling_lexicon: Path | None = None
    frequency_lexicon: Path | None = None
    stopwords_path: Path | None = None
    synonyms_path: Path | None = None
    tagger_model: Path | None = None
    ratios: tuple[float, float, float] = (0.7, 0.1, 0.2)
    seed: int = 0
    cross_prompt_negatives: int = 10
    shuffled_negatives: int = 10
    forest: ForestParams = field(default_factory=ForestParams)
    disabled_groups: tuple[str, ...] = ()
    high_grade_cutoff: int | None = None
    incidence_threshold: int = 1
    threshold_sweep: tuple[int, ...] | None = None
    response_weighting: str = "uniform"
    flag_percentile: float = 10.0
    score_policy: str = "score_a"

    # seeds for the independently random stages, all derived from `seed`
    @property
    def split_seed(self) -> int:
        return self.seed

    @property
    def shuffle_seed(self) -> int:
        return self.seed + 1

    @property
    def forest_seed(self) -> int:
        return self.seed + 2

    @property
    def importance_seed(self) -> int:
        return self.seed + 3

    @property
    def enabled_groups(self) -> tuple[str, ...]:
        disabled = set(self.disabled_groups)
        if self.embeddings_path is None:
            disabled.add("embeddings")
        return tuple(g for g in GROUPS if g not in disabled)

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(
            enabled_groups=self.enabled_groups,
            high_grade_cutoff=self.high_grade_cutoff,
            incidence_threshold=self.incidence_threshold,
            response_weighting=self.response_weighting,
            flag_percentile=self.flag_percentile,
        )

    def forest_params(self) -> ForestParams:
        return replace(self.forest, master_seed=self.forest_seed)

    def validate(self) -> None:
        if not self.dataset.is_file():
            raise ConfigError(f"dataset file not found: {self.dataset}")
        if not self.prompts:
            raise ConfigError("config defines no prompts")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ConfigError(f"split ratios must sum to 1, got {self.ratios}")
        if not self.enabled_groups:
            raise ConfigError("all feature groups are disabled; enable at least one")
        if self.score_policy not in SCORE_POLICIES:
            raise ConfigError(f"unknown score policy {self.score_policy!r}")
        unknown = set(self.disabled_groups) - set(GROUPS)
        if unknown:
            raise ConfigError(f"unknown feature groups in disabled_groups: {sorted(unknown)}")
        for label, p in (("embeddings", self.embeddings_path),
                         ("idf", self.idf_path),
                         ("spelling lexicon", self.spelling_lexicon),
                         ("frequency lexicon", self.frequency_lexicon),
                         ("stopwords", self.stopwords_path),
                         ("synonyms", self.synonyms_path),
                         ("tagger model", self.tagger_model)):
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"{label} file not found: {p}")


@dataclass
class Resources:
    """Loaded, immutable inputs shared across prompts."""
    table: EmbeddingTable | None
    stopwords: frozenset[str]
    difficulty: DifficultyLexicon
    synonyms: dict[str, frozenset[str]] | None
    corrector: SpellCorrector | None
    tagger: PerceptronTagger | None


def load_resources(config: RunConfig) -> Resources:
    table = None
    if config.embeddings_path is not None:
        table = load_vectors(config.embeddings_path, config.embeddings_format)
        if config.idf_path is not None:
            table.idf = load_idf(config.idf_path)
    stopwords = load_stopwords(config.stopwords_path)
    difficulty = DifficultyLexicon.empty()
    if config.frequency_lexicon is not None:
        difficulty = DifficultyLexicon.from_frequencies(
            load_frequency_lexicon(config.frequency_lexicon))
    synonyms = load_synonyms(config.synonyms_path) if config.synonyms_path else None
    corrector = None
    if config.spelling_lexicon is not None:
        corrector = SpellCorrector(load_word_list(config.spelling_lexicon))
    tagger = None
    if config.tagger_model is not None:
        tagger = PerceptronTagger.load(config.tagger_model)
    return Resources(table=table, stopwords=stopwords, difficulty=difficulty,
                     synonyms=synonyms, corrector=corrector, tagger=tagger)


def _resolve(base: Path, value: str | None) -> Path | None:
    if value is None:
        return None
    p = Path(value)
    return p if p.is_absolute() else base / p


def config_from_dict(doc: dict, base_dir: str | Path = ".") -> RunConfig:
    base = Path(base_dir)
    try:
        prompts = {}
        for entry in doc["prompts"]:
            ref_docs = []
            for ref in entry.get("reference_docs", ()):
                ref_path = _resolve(base, ref)
                if not ref_path.is_file():
                    raise ConfigError(f"reference document not found: {ref_path}")
                ref_docs.append(ref_path.read_text(encoding="utf-8"))
            prompts[str(entry["prompt_id"])] = PromptSpec(
                prompt_id=str(entry["prompt_id"]),
                question_text=entry["question_text"],
                passage_text=entry.get("passage_text"),
                grade_min=int(entry["grade_min"]),
                grade_max=int(entry["grade_max"]),
                reference_docs=tuple(ref_docs))

        emb = doc.get("embeddings") or {}
        lex = doc.get("lexicons") or {}
        split = doc.get("split") or {}
        aug = doc.get("augmentation") or {}
        fst = doc.get("forest") or {}
        feat = doc.get("features") or {}

        forest = ForestParams(
            n_trees=int(fst.get("n_trees", 500)),
            max_depth=(None if fst.get("max_depth") is None
                       else int(fst["max_depth"])),
            min_samples_leaf=int(fst.get("min_samples_leaf", 2)),
            features_per_split=(None if fst.get("features_per_split") is None
                                else int(fst["features_per_split"])))
        sweep = feat.get("threshold_sweep")
        return RunConfig(
            dataset=_resolve(base, doc["dataset"]),
            prompts=prompts,
            out_dir=_resolve(base, doc.get("out_dir", "runs")),
            embeddings_path=_resolve(base, emb.get("path")),
            embeddings_format=emb.get("format", "text"),
            idf_path=_resolve(base, emb.get("idf_path")),
            spelling_lexicon=_resolve(base, lex.get("spelling")),
            frequency_lexicon=_resolve(base, lex.get("frequency")),
            stopwords_path=_resolve(base, lex.get("stopwords")),
            synonyms_path=_resolve(base, lex.get("synonyms")),
            tagger_model=_resolve(base, lex.get("tagger_model")),
            ratios=tuple(split.get("ratios", (0.7, 0.1, 0.2))),
            seed=int(split.get("seed", 0)),
            cross_prompt_negatives=int(aug.get("cross_prompt", 10)),
            shuffled_negatives=int(aug.get("shuffled", 10)),
            forest=forest,
            disabled_groups=tuple(feat.get("disabled_groups", ())),
            high_grade_cutoff=(None if feat.get("high_grade_cutoff") is None
                               else int(feat["high_grade_cutoff"])),
            incidence_threshold=int(feat.get("incidence_threshold", 1)),
            threshold_sweep=None if sweep is None else tuple(int(t) for t in sweep),
            response_weighting=feat.get("response_weighting", "uniform"),
            flag_percentile=float(feat.get("flag_percentile", 10.0)),
            score_policy=doc.get("score_policy", "score_a"),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"unreadable config {path}: {exc}") from None
    config = config_from_dict(doc, base_dir=path.parent)
    config.validate()
    return config
