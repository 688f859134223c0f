"""Nine-group feature extraction over preprocessed responses."""
from .schema import GROUPS, GROUP_LABELS, FeatureSchema, SchemaMismatchError
from .resources import (
    DifficultyLexicon, N_DIFFICULTY_LEVELS, load_frequency_lexicon,
    load_stopwords, load_synonyms,
)
from .extract import (
    LOGICAL_OPERATORS, NGRAM_SIZES, SignificantNgramSet,
    difficulty_diversity_features, fit_keyword_weights, fit_pos_ngram_vocab,
    keyword_features, length_stats, lexical_overlap, logical_operator_counts,
    pos_ngram_features, prompt_overlap, temporal_features,
)
from .extractor import FeatureConfig, FeatureExtractor, NotFittedError

__all__ = [
    "GROUPS", "GROUP_LABELS", "FeatureSchema", "SchemaMismatchError",
    "DifficultyLexicon", "N_DIFFICULTY_LEVELS", "load_frequency_lexicon",
    "load_stopwords", "load_synonyms",
    "LOGICAL_OPERATORS", "NGRAM_SIZES", "SignificantNgramSet",
    "difficulty_diversity_features", "fit_keyword_weights",
    "fit_pos_ngram_vocab", "keyword_features", "length_stats",
    "lexical_overlap", "logical_operator_counts", "pos_ngram_features",
    "prompt_overlap", "temporal_features",
    "FeatureConfig", "FeatureExtractor", "NotFittedError",
]
