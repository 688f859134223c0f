"""Deterministic linguistic preprocessing: tokenize, spell, tag, lemmatize."""
from .tokenizer import Token, TaggedDoc, tokenize_and_split, ABBREVIATIONS
from .spelling import SpellCorrector, correct_spelling, levenshtein, load_word_list
from .tagger import (
    PTB_TAGS, PUNCT_TAGS, FALLBACK_LEXICON, LexiconTagger, PerceptronTagger,
    TaggerModelError, load_tagged_corpus, pos_tag, shape_tag,
)
from .lemmatizer import lemmatize, lemma_of

__all__ = [
    "Token", "TaggedDoc", "tokenize_and_split", "ABBREVIATIONS",
    "SpellCorrector", "correct_spelling", "levenshtein", "load_word_list",
    "PTB_TAGS", "PUNCT_TAGS", "FALLBACK_LEXICON", "LexiconTagger",
    "PerceptronTagger", "TaggerModelError", "load_tagged_corpus", "pos_tag",
    "shape_tag", "lemmatize", "lemma_of",
]


def preprocess(text: str, tagger=None, corrector: SpellCorrector | None = None,
               extra_lemma_exceptions=None) -> TaggedDoc:
    """Full pipeline for one response: tokenize, optional spell pass, tag, lemmatize."""
    doc = tokenize_and_split(text)
    if corrector is not None:
        doc = corrector.correct(doc)
    doc = pos_tag(doc, tagger)
    return lemmatize(doc, extra_lemma_exceptions)
