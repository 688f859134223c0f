"""Prompt-specific feature extraction: fit on training data, then assemble
fixed-schema vectors for any response.

The fitted state (n-gram vocabulary, keyword weights, normalization stats,
flag cutoffs) depends only on training responses and the prompt's reference
documents — never on test data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import PromptSpec
from ..embeddings import EmbeddingTable, IdfMeanEmbedder, embed_response
from ..textproc import TaggedDoc, lemmatize, pos_tag, tokenize_and_split
from .extract import (
    LOGICAL_OPERATORS, NGRAM_SIZES, SignificantNgramSet,
    difficulty_diversity_features, fit_keyword_weights, fit_pos_ngram_vocab,
    keyword_features, length_stats, lexical_overlap, logical_operator_counts,
    pos_ngram_features, prompt_overlap, temporal_features,
)
from .resources import DifficultyLexicon, N_DIFFICULTY_LEVELS, load_stopwords
from .schema import GROUPS, FeatureSchema, SchemaMismatchError


class NotFittedError(RuntimeError):
    pass


@dataclass(frozen=True)
class FeatureConfig:
    enabled_groups: tuple[str, ...] = GROUPS
    high_grade_cutoff: int | None = None     # None -> highest grade seen in train
    incidence_threshold: int = 1
    response_weighting: str = "uniform"
    flag_percentile: float = 10.0
    # Raw features whose low-percentile training cutoff drives feedback flags.
    flag_features: tuple[str, ...] = (
        "prompt_coverage", "ttr", "word_count", "kw_match_count", "content_overlap",
    )

    def __post_init__(self):
        unknown = set(self.enabled_groups) - set(GROUPS)
        if unknown:
            raise ValueError(f"unknown feature groups: {sorted(unknown)}")
        if not self.enabled_groups:
            raise ValueError("at least one feature group must be enabled")

    def to_dict(self) -> dict:
        return {
            "enabled_groups": list(self.enabled_groups),
            "high_grade_cutoff": self.high_grade_cutoff,
            "incidence_threshold": self.incidence_threshold,
            "response_weighting": self.response_weighting,
            "flag_percentile": self.flag_percentile,
            "flag_features": list(self.flag_features),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        return cls(enabled_groups=tuple(d["enabled_groups"]),
                   high_grade_cutoff=d.get("high_grade_cutoff"),
                   incidence_threshold=int(d.get("incidence_threshold", 1)),
                   response_weighting=d.get("response_weighting", "uniform"),
                   flag_percentile=float(d.get("flag_percentile", 10.0)),
                   flag_features=tuple(d.get("flag_features", ())))


_SCALAR_NAMES = {
    "pos_ngrams": [f"pos{n}_{kind}" for n in NGRAM_SIZES for kind in ("matches", "ratio")],
    "keywords": ["kw_weight_sum", "kw_match_count"],
    "prompt_overlap": ["prompt_coverage", "prompt_jaccard"],
    "lexical_overlap": ["noun_overlap", "argument_overlap", "content_overlap"],
    "logical_ops": [f"op_{op}" for op in LOGICAL_OPERATORS] + ["op_if_then", "op_if_else", "op_total"],
    "temporal": ["tense_past", "tense_present", "tense_future",
                 "aspect_progressive", "aspect_perfect", "tense_switches"],
    "length_stats": ["sentence_count", "word_count", "mean_sentence_len",
                     "mean_word_len", "max_sentence_len"],
    "word_difficulty": ([f"difficulty_level_{lv:02d}" for lv in range(1, N_DIFFICULTY_LEVELS + 1)]
                        + ["difficulty_oov", "unique_words", "ttr"]),
}


class FeatureExtractor:
    """Owns the fitted per-prompt feature state; extraction is pure after fit."""

    def __init__(self, prompt: PromptSpec,
                 table: EmbeddingTable | None = None,
                 doc_embedder=None,
                 stopwords: frozenset[str] | None = None,
                 difficulty: DifficultyLexicon | None = None,
                 synonyms: dict[str, frozenset[str]] | None = None,
                 tagger=None,
                 config: FeatureConfig | None = None):
        self.prompt = prompt
        self.config = config or FeatureConfig()
        if "embeddings" in self.config.enabled_groups and table is None:
            raise ValueError("embeddings group enabled but no vector table given; "
                             "disable the group or provide vectors")
        self.table = table
        self.doc_embedder = doc_embedder or (IdfMeanEmbedder(table) if table else None)
        self.stopwords = stopwords if stopwords is not None else load_stopwords()
        self.difficulty = difficulty or DifficultyLexicon.empty()
        self.synonyms = synonyms
        self.tagger = tagger

        self.question_doc = self._prep(prompt.question_text)
        self.passage_doc = self._prep(prompt.passage_text) if prompt.passage_text else None

        self.sig_ngrams: SignificantNgramSet | None = None
        self.keyword_weights: dict[str, float] = {}
        self.schema: FeatureSchema | None = None
        self.flag_cutoffs: dict[str, float] = {}

    def _prep(self, text: str) -> TaggedDoc:
        return lemmatize(pos_tag(tokenize_and_split(text), self.tagger))

    # -- schema layout ---------------------------------------------------

    def _feature_layout(self) -> tuple[list[str], list[str]]:
        names: list[str] = []
        groups: list[str] = []
        for group in GROUPS:
            if group not in self.config.enabled_groups:
                continue
            if group == "embeddings":
                dim = self.table.dim
                block = [f"emb_mean_{i:03d}" for i in range(dim)]
                block += [f"emb_doc_{i:03d}" for i in range(dim)]
            else:
                block = list(_SCALAR_NAMES[group])
            names.extend(block)
            groups.extend([group] * len(block))
        return names, groups

    # -- fitting -----------------------------------------------------------

    def fit(self, train_docs: list[TaggedDoc], train_grades: list[int]) -> FeatureSchema:
        if len(train_docs) != len(train_grades):
            raise ValueError("docs and grades must align")
        if not train_docs:
            raise ValueError("cannot fit on an empty training set")

        if "pos_ngrams" in self.config.enabled_groups:
            cutoff = self.config.high_grade_cutoff
            if cutoff is None:
                cutoff = max(train_grades)
            self.sig_ngrams = fit_pos_ngram_vocab(
                train_docs, train_grades, cutoff, self.config.incidence_threshold)
        if "keywords" in self.config.enabled_groups:
            self.keyword_weights = fit_keyword_weights(
                list(self.prompt.reference_docs), self.stopwords)

        names, groups = self._feature_layout()
        raw = np.vstack([self._raw_vector(d, names, groups) for d in train_docs])

        normalized = np.asarray([g != "embeddings" for g in groups], dtype=bool)
        means = np.where(normalized, raw.mean(axis=0), 0.0)
        stds = np.where(normalized, raw.std(axis=0), 1.0)
        self.schema = FeatureSchema(names=tuple(names), groups=tuple(groups),
                                    means=means, stds=stds, normalized=normalized)

        self.flag_cutoffs = {}
        for feat in self.config.flag_features:
            if feat in names:
                col = raw[:, names.index(feat)]
                self.flag_cutoffs[feat] = float(
                    np.percentile(col, self.config.flag_percentile))
        return self.schema

    # -- extraction ----------------------------------------------------------

    def _raw_vector(self, doc: TaggedDoc, names: list[str], groups: list[str]) -> np.ndarray:
        values: dict[str, float] = {}
        enabled = set(groups)
        if "pos_ngrams" in enabled:
            values.update(pos_ngram_features(doc, self.sig_ngrams))
        if "keywords" in enabled:
            values.update(keyword_features(doc, self.keyword_weights))
        if "prompt_overlap" in enabled:
            values.update(prompt_overlap(doc, self.question_doc, self.stopwords))
        if "lexical_overlap" in enabled:
            values.update(lexical_overlap(doc, self.passage_doc, self.stopwords,
                                          self.synonyms))
        if "logical_ops" in enabled:
            values.update(logical_operator_counts(doc))
        if "temporal" in enabled:
            values.update(temporal_features(doc))
        if "length_stats" in enabled:
            values.update(length_stats(doc))
        if "word_difficulty" in enabled:
            values.update(difficulty_diversity_features(doc, self.difficulty))

        if "embeddings" in enabled:
            mean_vec = embed_response(doc, self.table, self.config.response_weighting)
            doc_vec = self.doc_embedder.embed(doc)
            scalar_part = [values[n] for n in names[2 * self.table.dim:]]
            vec = np.concatenate([mean_vec, doc_vec, np.asarray(scalar_part)])
        else:
            vec = np.asarray([values[n] for n in names], dtype=np.float64)
        if not np.isfinite(vec).all():
            raise ValueError("non-finite feature value extracted")
        return vec

    def raw_features(self, doc: TaggedDoc) -> np.ndarray:
        """Pre-normalization vector in schema order."""
        if self.schema is None:
            raise NotFittedError("extractor is not fitted")
        return self._raw_vector(doc, list(self.schema.names), list(self.schema.groups))

    def assemble(self, doc: TaggedDoc) -> np.ndarray:
        """Normalized feature vector aligned to the fitted schema."""
        if self.schema is None:
            raise NotFittedError("extractor is not fitted")
        return self.schema.normalize(self.raw_features(doc))

    def matrix(self, docs: list[TaggedDoc]) -> np.ndarray:
        return np.vstack([self.assemble(d) for d in docs]) if docs else \
            np.zeros((0, len(self.schema)))

    # -- persistence -----------------------------------------------------------

    def state_dict(self) -> dict:
        if self.schema is None:
            raise NotFittedError("extractor is not fitted")
        return {
            "config": self.config.to_dict(),
            "schema": self.schema.to_dict(),
            "sig_ngrams": self.sig_ngrams.to_dict() if self.sig_ngrams else None,
            "keyword_weights": {k: self.keyword_weights[k]
                                for k in sorted(self.keyword_weights)},
            "difficulty_levels": {k: self.difficulty.levels[k]
                                  for k in sorted(self.difficulty.levels)},
            "stopwords": sorted(self.stopwords),
            "synonyms": ({k: sorted(v) for k, v in sorted(self.synonyms.items())}
                         if self.synonyms else None),
            "flag_cutoffs": {k: self.flag_cutoffs[k] for k in sorted(self.flag_cutoffs)},
        }

    @classmethod
    def from_state_dict(cls, state: dict, prompt: PromptSpec,
                        table: EmbeddingTable | None = None,
                        doc_embedder=None, tagger=None) -> "FeatureExtractor":
        config = FeatureConfig.from_dict(state["config"])
        synonyms = state.get("synonyms")
        ex = cls(prompt=prompt, table=table, doc_embedder=doc_embedder,
                 stopwords=frozenset(state["stopwords"]),
                 difficulty=DifficultyLexicon(levels=dict(state["difficulty_levels"])),
                 synonyms=({k: frozenset(v) for k, v in synonyms.items()}
                           if synonyms else None),
                 tagger=tagger, config=config)
        if state.get("sig_ngrams"):
            ex.sig_ngrams = SignificantNgramSet.from_dict(state["sig_ngrams"])
        ex.keyword_weights = dict(state["keyword_weights"])
        ex.schema = FeatureSchema.from_dict(state["schema"])
        ex.flag_cutoffs = dict(state["flag_cutoffs"])
        return ex
