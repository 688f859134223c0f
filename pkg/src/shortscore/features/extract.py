"""The per-group feature functions and their fitted helper structures.

Everything here is a pure function of an already-preprocessed document
plus state fitted on training data only (POS n-gram vocabulary, keyword
weights, difficulty levels). Overlap features are raw proportions in
[0, 1]; counts are nonnegative integers — z-normalization happens later,
against the schema's training statistics.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

from ..textproc import TaggedDoc, PUNCT_TAGS
from .resources import DifficultyLexicon, N_DIFFICULTY_LEVELS

logger = logging.getLogger(__name__)

NGRAM_SIZES = (2, 3, 4)

LOGICAL_OPERATORS = ("and", "or", "not", "if", "else", "then", "unless",
                     "whether", "although", "but")

_AUX_LEMMAS = frozenset({"be", "have", "do"})
_BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being"})
_HAVE_FORMS = frozenset({"have", "has", "had", "having"})
_FUTURE_MODALS = frozenset({"will", "shall", "'ll", "wo"})
_ASPECT_WINDOW = 3


# -- POS n-grams -------------------------------------------------------

@dataclass(frozen=True)
class SignificantNgramSet:
    ngrams: dict[int, frozenset[tuple[str, ...]]]
    incidence_threshold: int

    def to_dict(self) -> dict:
        return {
            "incidence_threshold": self.incidence_threshold,
            "ngrams": {str(n): sorted(" ".join(g) for g in grams)
                       for n, grams in self.ngrams.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignificantNgramSet":
        return cls(
            ngrams={int(n): frozenset(tuple(g.split(" ")) for g in grams)
                    for n, grams in d["ngrams"].items()},
            incidence_threshold=int(d["incidence_threshold"]))


def _sentence_tag_ngrams(doc: TaggedDoc, n: int) -> list[tuple[str, ...]]:
    grams = []
    for sent in doc.sentences():
        tags = [t.pos for t in sent if t.pos not in PUNCT_TAGS]
        grams.extend(tuple(tags[i:i + n]) for i in range(len(tags) - n + 1))
    return grams


def fit_pos_ngram_vocab(train_docs: list[TaggedDoc], grades: list[int],
                        high_grade_cutoff: int,
                        incidence_threshold: int) -> SignificantNgramSet:
    """Collect tag n-grams from highly graded docs, keep those seen often enough."""
    qualifying = [d for d, g in zip(train_docs, grades) if g >= high_grade_cutoff]
    if not qualifying:
        raise ValueError(f"no training docs at or above grade {high_grade_cutoff}")
    kept: dict[int, frozenset[tuple[str, ...]]] = {}
    for n in NGRAM_SIZES:
        counts: Counter = Counter()
        for doc in qualifying:
            counts.update(_sentence_tag_ngrams(doc, n))
        kept[n] = frozenset(g for g, c in counts.items() if c > incidence_threshold)
    return SignificantNgramSet(ngrams=kept, incidence_threshold=incidence_threshold)


def pos_ngram_features(doc: TaggedDoc, sig: SignificantNgramSet) -> dict[str, float]:
    feats = {}
    for n in NGRAM_SIZES:
        grams = _sentence_tag_ngrams(doc, n)
        matches = sum(1 for g in grams if g in sig.ngrams.get(n, frozenset()))
        feats[f"pos{n}_matches"] = float(matches)
        feats[f"pos{n}_ratio"] = matches / len(grams) if grams else 0.0
    return feats


# -- weighted keywords ---------------------------------------------------

def _content_words(text: str, stopwords: frozenset[str]) -> list[str]:
    words = []
    for raw in text.split():
        w = raw.strip(".,;:!?()[]{}'\"`").lower()
        if w and w.isalpha() and w not in stopwords:
            words.append(w)
    return words


def fit_keyword_weights(reference_docs: list[str],
                        stopwords: frozenset[str]) -> dict[str, float]:
    """tf-idf over the prompt's offline reference corpus.

    weight(w) = max-over-docs term count x log((1+D) / (1+df)); stopwords
    excluded. Empty corpus yields an empty table (keyword features zero).
    """
    docs = [_content_words(d, stopwords) for d in reference_docs]
    docs = [d for d in docs if d]
    n_docs = len(docs)
    if n_docs == 0:
        return {}
    max_tf: dict[str, int] = {}
    df: Counter = Counter()
    for words in docs:
        counts = Counter(words)
        df.update(counts.keys())
        for w, c in counts.items():
            if c > max_tf.get(w, 0):
                max_tf[w] = c
    weights = {}
    for w, tf in max_tf.items():
        idf = math.log((1 + n_docs) / (1 + df[w]))
        if idf > 0:
            weights[w] = tf * idf
    return weights


def keyword_features(doc: TaggedDoc, weights: dict[str, float]) -> dict[str, float]:
    matched = {t.surface.lower() for t in doc.word_tokens()} & weights.keys()
    return {
        "kw_weight_sum": sum(weights[w] for w in matched),
        "kw_match_count": float(len(matched)),
    }


# -- prompt & lexical overlap -------------------------------------------

def _content_lemmas(doc: TaggedDoc, stopwords: frozenset[str]) -> set[str]:
    return {t.lemma for t in doc.word_tokens()
            if t.lemma and t.lemma not in stopwords and t.surface[0].isalpha()}


def prompt_overlap(doc: TaggedDoc, question_doc: TaggedDoc,
                   stopwords: frozenset[str]) -> dict[str, float]:
    """Coverage and Jaccard of content lemmas against the question text."""
    question = _content_lemmas(question_doc, stopwords)
    if not question:
        logger.warning("question has no content words; prompt overlap is zero")
        return {"prompt_coverage": 0.0, "prompt_jaccard": 0.0}
    response = _content_lemmas(doc, stopwords)
    inter = len(question & response)
    union = len(question | response)
    return {
        "prompt_coverage": inter / len(question),
        "prompt_jaccard": inter / union if union else 0.0,
    }


def _noun_lemmas(doc: TaggedDoc) -> set[str]:
    return {t.lemma for t in doc.tokens if t.pos.startswith("NN") and t.lemma}


def _argument_pairs(doc: TaggedDoc) -> set[tuple[str, str]]:
    """(noun lemma, nearest main verb lemma) pairs within each sentence.

    The nearest verb before or after the noun wins (ties prefer the
    preceding one); be/have/do count only when no other verb is present.
    """
    pairs = set()
    for sent in doc.sentences():
        nouns = [(i, t) for i, t in enumerate(sent) if t.pos.startswith("NN")]
        verbs = [(i, t) for i, t in enumerate(sent) if t.pos.startswith("VB")]
        if not nouns or not verbs:
            continue
        main = [(i, t) for i, t in verbs if t.lemma not in _AUX_LEMMAS] or verbs
        for ni, noun in nouns:
            vi, verb = min(main, key=lambda iv: (abs(iv[0] - ni), iv[0] > ni, iv[0]))
            pairs.add((noun.lemma, verb.lemma))
    return pairs


def lexical_overlap(doc: TaggedDoc, passage_doc: TaggedDoc | None,
                    stopwords: frozenset[str],
                    synonyms: dict[str, frozenset[str]] | None = None) -> dict[str, float]:
    """Noun / argument / content overlap w.r.t. the comprehension passage."""
    zero = {"noun_overlap": 0.0, "argument_overlap": 0.0, "content_overlap": 0.0}
    if passage_doc is None or not passage_doc.tokens:
        return zero

    p_nouns = _noun_lemmas(passage_doc)
    r_nouns = _noun_lemmas(doc)
    noun_ov = len(p_nouns & r_nouns) / len(p_nouns) if p_nouns else 0.0

    p_args = _argument_pairs(passage_doc)
    r_args = _argument_pairs(doc)
    arg_ov = len(p_args & r_args) / len(p_args) if p_args else 0.0

    p_content = _content_lemmas(passage_doc, stopwords)
    r_content = set(_content_lemmas(doc, stopwords))
    if synonyms:
        for w in list(r_content):
            r_content |= synonyms.get(w, frozenset())
    content_ov = len(p_content & r_content) / len(p_content) if p_content else 0.0

    return {"noun_overlap": noun_ov, "argument_overlap": arg_ov,
            "content_overlap": content_ov}


# -- difficulty, diversity, lengths ---------------------------------------

def difficulty_diversity_features(doc: TaggedDoc,
                                  lexicon: DifficultyLexicon) -> dict[str, float]:
    """Per-level counts (21st bin for words outside the lexicon), uniques, TTR."""
    feats = {f"difficulty_level_{lv:02d}": 0.0 for lv in range(1, N_DIFFICULTY_LEVELS + 1)}
    feats["difficulty_oov"] = 0.0
    words = [t for t in doc.word_tokens() if t.surface[0].isalpha()]
    for t in words:
        lv = lexicon.level(t.surface)
        if lv is None:
            feats["difficulty_oov"] += 1.0
        else:
            feats[f"difficulty_level_{lv:02d}"] += 1.0
    tokens = doc.word_tokens()
    distinct_lemmas = {t.lemma or t.surface.lower() for t in tokens}
    feats["unique_words"] = float(len({t.surface.lower() for t in tokens}))
    feats["ttr"] = len(distinct_lemmas) / len(tokens) if tokens else 0.0
    return feats


def length_stats(doc: TaggedDoc) -> dict[str, float]:
    words = doc.word_tokens()
    sent_lengths = [sum(1 for t in sent if t.is_word) for sent in doc.sentences()]
    sent_lengths = [n for n in sent_lengths if n > 0]
    n_sent = len(sent_lengths)
    return {
        "sentence_count": float(n_sent),
        "word_count": float(len(words)),
        "mean_sentence_len": len(words) / n_sent if n_sent else 0.0,
        "mean_word_len": (sum(len(t.surface) for t in words) / len(words)
                          if words else 0.0),
        "max_sentence_len": float(max(sent_lengths, default=0)),
    }


# -- logical operators ----------------------------------------------------

_OPERATOR_SET = frozenset(LOGICAL_OPERATORS)


def logical_operator_counts(doc: TaggedDoc) -> dict[str, float]:
    feats = {f"op_{op}": 0.0 for op in LOGICAL_OPERATORS}
    feats["op_if_then"] = 0.0
    feats["op_if_else"] = 0.0
    total = 0.0
    for sent in doc.sentences():
        lowers = [t.surface.lower() for t in sent]
        for i, w in enumerate(lowers):
            if w in _OPERATOR_SET:
                feats[f"op_{w}"] += 1.0
                total += 1.0
            if w == "if":
                rest = lowers[i + 1:]
                if "then" in rest:
                    feats["op_if_then"] += 1.0
                if "else" in rest:
                    feats["op_if_else"] += 1.0
    feats["op_total"] = total
    return feats


# -- temporal features ------------------------------------------------------

def _sentence_tense_counts(sent) -> tuple[int, int, int]:
    past = sum(1 for t in sent if t.pos in ("VBD", "VBN"))
    present = sum(1 for t in sent if t.pos in ("VBP", "VBZ"))
    future = 0
    lowers = [t.surface.lower() for t in sent]
    for i, t in enumerate(sent):
        if lowers[i] in _FUTURE_MODALS:
            window = sent[i + 1:i + 1 + _ASPECT_WINDOW]
            if any(w.pos == "VB" for w in window):
                future += 1
    return past, present, future


def temporal_features(doc: TaggedDoc) -> dict[str, float]:
    """Tense/aspect counts plus tense switches between adjacent sentences."""
    past = present = future = progressive = perfect = 0
    dominant: list[str] = []
    for sent in doc.sentences():
        p, pr, fu = _sentence_tense_counts(sent)
        past, present, future = past + p, present + pr, future + fu
        lowers = [t.surface.lower() for t in sent]
        for i in range(len(sent)):
            window = sent[i + 1:i + 1 + _ASPECT_WINDOW]
            if lowers[i] in _BE_FORMS and any(w.pos == "VBG" for w in window):
                progressive += 1
            if lowers[i] in _HAVE_FORMS and any(w.pos == "VBN" for w in window):
                perfect += 1
        counts = {"past": p, "present": pr, "future": fu}
        best = max(counts.values())
        if best > 0:
            dominant.append(min(k for k, v in counts.items() if v == best))
    switches = sum(1 for a, b in zip(dominant, dominant[1:]) if a != b)
    return {
        "tense_past": float(past),
        "tense_present": float(present),
        "tense_future": float(future),
        "aspect_progressive": float(progressive),
        "aspect_perfect": float(perfect),
        "tense_switches": float(switches),
    }
