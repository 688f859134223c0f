"""Part-of-speech tagging with a Penn-Treebank-style tagset.

Two taggers share one interface:

* :class:`PerceptronTagger` — an averaged perceptron over contextual
  features (previous tags, word shape, prefixes/suffixes), trained from a
  ``word_TAG`` corpus and persisted as a versioned JSON flat file.
* :class:`LexiconTagger` — a dependency-free fallback built from a
  most-frequent-tag lexicon plus suffix and capitalization heuristics,
  used when no training corpus is supplied.

Both apply the same hard shape rules first (punctuation tags, all-digit
tokens tagged CD) and are fully deterministic.
"""
from __future__ import annotations

import json
import random
import re
from collections import Counter, defaultdict
from pathlib import Path

from .tokenizer import TaggedDoc, Token

TAGGER_FORMAT_VERSION = 1

PTB_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
    "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
    "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "(", ")", "''", "``",
    "$", "#",
})

PUNCT_TAGS = frozenset({".", ",", ":", "(", ")", "''", "``", "$", "#", "SYM"})

_PUNCT_MAP = {
    ".": ".", "!": ".", "?": ".",
    ",": ",",
    ";": ":", ":": ":", "-": ":", "--": ":",
    "(": "(", "[": "(", "{": "(",
    ")": ")", "]": ")", "}": ")",
    "'": "''", '"': "''", "`": "``",
    "$": "$", "#": "#",
}

_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")


class TaggerModelError(ValueError):
    """Raised for missing, corrupt, or wrong-version tagger model files."""


def shape_tag(surface: str) -> str | None:
    """Hard tags decided by token shape alone; None when the model must decide."""
    if _NUMBER_RE.fullmatch(surface):
        return "CD"
    if surface in _PUNCT_MAP:
        return _PUNCT_MAP[surface]
    if not any(ch.isalnum() for ch in surface):
        return "SYM"
    return None


# Most-frequent-tag entries for the fallback tagger. Closed-class words plus
# enough common verbs that untrained pipelines still find verbs and nouns.
FALLBACK_LEXICON: dict[str, str] = {
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "these": "DT", "those": "DT", "each": "DT", "every": "DT", "some": "DT",
    "any": "DT", "no": "DT", "another": "DT", "all": "DT", "both": "DT",
    "either": "DT", "neither": "DT",
    "i": "PRP", "you": "PRP", "he": "PRP", "she": "PRP", "it": "PRP",
    "we": "PRP", "they": "PRP", "me": "PRP", "him": "PRP", "her": "PRP$",
    "us": "PRP", "them": "PRP", "himself": "PRP", "herself": "PRP",
    "itself": "PRP", "themselves": "PRP", "myself": "PRP", "yourself": "PRP",
    "my": "PRP$", "your": "PRP$", "his": "PRP$", "its": "PRP$",
    "our": "PRP$", "their": "PRP$",
    "in": "IN", "on": "IN", "at": "IN", "by": "IN", "for": "IN",
    "with": "IN", "about": "IN", "against": "IN", "between": "IN",
    "into": "IN", "through": "IN", "during": "IN", "before": "IN",
    "after": "IN", "above": "IN", "below": "IN", "from": "IN", "of": "IN",
    "over": "IN", "under": "IN", "across": "IN", "toward": "IN",
    "towards": "IN", "upon": "IN", "within": "IN", "without": "IN",
    "near": "IN", "since": "IN", "until": "IN", "because": "IN",
    "while": "IN", "if": "IN", "although": "IN", "unless": "IN",
    "whether": "IN", "per": "IN", "as": "IN", "like": "IN",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC", "so": "CC",
    "yet": "CC", "plus": "CC",
    "not": "RB", "n't": "RB", "very": "RB", "too": "RB", "also": "RB",
    "then": "RB", "now": "RB", "here": "RB", "there": "EX", "again": "RB",
    "always": "RB", "never": "RB", "often": "RB", "sometimes": "RB",
    "really": "RB", "just": "RB", "still": "RB", "already": "RB",
    "however": "RB", "thus": "RB", "therefore": "RB", "else": "RB",
    "when": "WRB", "where": "WRB", "why": "WRB", "how": "WRB",
    "who": "WP", "whom": "WP", "what": "WP", "which": "WDT", "whose": "WP$",
    "to": "TO",
    "can": "MD", "could": "MD", "will": "MD", "would": "MD", "shall": "MD",
    "should": "MD", "may": "MD", "might": "MD", "must": "MD",
    "be": "VB", "am": "VBP", "is": "VBZ", "are": "VBP", "was": "VBD",
    "were": "VBD", "been": "VBN", "being": "VBG",
    "have": "VBP", "has": "VBZ", "had": "VBD", "having": "VBG",
    "do": "VBP", "does": "VBZ", "did": "VBD", "done": "VBN", "doing": "VBG",
    "go": "VB", "goes": "VBZ", "went": "VBD", "gone": "VBN", "going": "VBG",
    "say": "VB", "says": "VBZ", "said": "VBD",
    "make": "VB", "makes": "VBZ", "made": "VBD", "making": "VBG",
    "get": "VB", "gets": "VBZ", "got": "VBD", "getting": "VBG",
    "know": "VB", "knows": "VBZ", "knew": "VBD", "known": "VBN",
    "think": "VB", "thinks": "VBZ", "thought": "VBD", "thinking": "VBG",
    "see": "VB", "sees": "VBZ", "saw": "VBD", "seen": "VBN",
    "want": "VB", "wants": "VBZ", "wanted": "VBD",
    "find": "VB", "finds": "VBZ", "found": "VBD", "finding": "VBG",
    "give": "VB", "gives": "VBZ", "gave": "VBD", "given": "VBN",
    "tell": "VB", "tells": "VBZ", "told": "VBD",
    "become": "VB", "becomes": "VBZ", "became": "VBD",
    "show": "VB", "shows": "VBZ", "showed": "VBD", "shown": "VBN",
    "take": "VB", "takes": "VBZ", "took": "VBD", "taken": "VBN",
    "come": "VB", "comes": "VBZ", "came": "VBD", "coming": "VBG",
    "use": "VB", "uses": "VBZ",
    "run": "VB", "runs": "VBZ", "ran": "VBD", "running": "VBG",
    "walk": "VB", "walks": "VBZ", "walked": "VBD", "walking": "VBG",
    "read": "VB", "reads": "VBZ", "reading": "VBG",
    "write": "VB", "writes": "VBZ", "wrote": "VBD", "written": "VBN",
    "move": "VB", "moves": "VBZ", "moved": "VBD", "moving": "VBG",
    "keep": "VB", "keeps": "VBZ", "kept": "VBD",
    "let": "VB", "lets": "VBZ",
    "put": "VB", "puts": "VBZ",
    "mean": "VB", "means": "VBZ", "meant": "VBD",
    "seem": "VB", "seems": "VBZ", "seemed": "VBD",
    "help": "VB", "helps": "VBZ", "helped": "VBD",
    "talk": "VB", "talks": "VBZ", "talked": "VBD", "talking": "VBG",
    "turn": "VB", "turns": "VBZ", "turned": "VBD",
    "start": "VB", "starts": "VBZ", "started": "VBD",
    "win": "VB", "wins": "VBZ", "won": "VBD", "winning": "VBG",
    "lose": "VB", "loses": "VBZ", "lost": "VBD",
    "play": "VB", "plays": "VBZ", "played": "VBD", "playing": "VBG",
    "feel": "VB", "feels": "VBZ", "felt": "VBD",
    "leave": "VB", "leaves": "VBZ", "left": "VBD",
    "call": "VB", "calls": "VBZ", "called": "VBD",
    "try": "VB", "tries": "VBZ", "tried": "VBD", "trying": "VBG",
    "ask": "VB", "asks": "VBZ", "asked": "VBD",
    "need": "VB", "needs": "VBZ", "needed": "VBD",
    "believe": "VB", "believes": "VBZ", "believed": "VBD",
    "describe": "VB", "describes": "VBZ", "described": "VBD",
    "explain": "VB", "explains": "VBZ", "explained": "VBD",
    "good": "JJ", "bad": "JJ", "big": "JJ", "small": "JJ", "new": "JJ",
    "old": "JJ", "high": "JJ", "low": "JJ", "long": "JJ", "short": "JJ",
    "same": "JJ", "different": "JJ", "important": "JJ", "able": "JJ",
    "other": "JJ", "such": "JJ", "more": "JJR", "most": "JJS",
    "less": "JJR", "least": "JJS", "better": "JJR", "best": "JJS",
    "worse": "JJR", "worst": "JJS", "first": "JJ", "last": "JJ",
    "many": "JJ", "few": "JJ", "much": "JJ", "own": "JJ",
    "time": "NN", "year": "NN", "day": "NN", "way": "NN", "thing": "NN",
    "man": "NN", "woman": "NN", "child": "NN", "people": "NNS",
    "children": "NNS", "men": "NNS", "women": "NNS", "water": "NN",
    "part": "NN", "place": "NN", "word": "NN", "example": "NN",
}

_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ly", "RB"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("tion", "NN"), ("sion", "NN"), ("ment", "NN"), ("ness", "NN"),
    ("ity", "NN"), ("ance", "NN"), ("ence", "NN"), ("ship", "NN"),
    ("ful", "JJ"), ("ous", "JJ"), ("ive", "JJ"), ("ible", "JJ"),
    ("able", "JJ"), ("ic", "JJ"), ("al", "JJ"), ("ish", "JJ"),
    ("est", "JJS"),
)


def _suffix_guess(lower: str, mid_sentence_cap: bool) -> str:
    if mid_sentence_cap:
        return "NNP"
    for suffix, tag in _SUFFIX_RULES:
        if lower.endswith(suffix) and len(lower) > len(suffix) + 1:
            return tag
    if lower.endswith("s") and len(lower) > 3 and not lower.endswith(("ss", "us", "is")):
        return "NNS"
    return "NN"


class LexiconTagger:
    """Most-frequent-tag lookup with shape/suffix heuristics for OOV words."""

    def __init__(self, lexicon: dict[str, str] | None = None):
        self.lexicon = dict(FALLBACK_LEXICON if lexicon is None else lexicon)

    def tag_word(self, surface: str, first_in_sentence: bool) -> str:
        hard = shape_tag(surface)
        if hard is not None:
            return hard
        lower = surface.lower()
        known = self.lexicon.get(lower)
        if known is not None:
            return known
        mid_cap = surface[:1].isupper() and not first_in_sentence
        return _suffix_guess(lower, mid_cap)

    def tag(self, doc: TaggedDoc) -> TaggedDoc:
        tokens = []
        for a, b in doc.sentence_bounds:
            for i in range(a, b):
                tok = doc.tokens[i]
                tokens.append(tok.with_pos(self.tag_word(tok.surface, i == a)))
        return TaggedDoc(tokens=tokens, sentence_bounds=list(doc.sentence_bounds))


def _normalize(word: str) -> str:
    if "-" in word and word[0] != "-":
        return "!HYPHEN"
    if word.isdigit() and len(word) == 4:
        return "!YEAR"
    if word[:1].isdigit():
        return "!DIGITS"
    return word.lower()


def _features(i: int, word: str, context: list[str], prev: str, prev2: str) -> list[str]:
    # context is padded with two start markers and two end markers.
    feats = [
        "bias",
        "i suffix " + word[-3:],
        "i pref1 " + word[:1],
        "i-1 tag " + prev,
        "i-2 tag " + prev2,
        "i tag+i-2 tag " + prev + " " + prev2,
        "i word " + context[i],
        "i-1 tag+i word " + prev + " " + context[i],
        "i-1 word " + context[i - 1],
        "i-1 suffix " + context[i - 1][-3:],
        "i-2 word " + context[i - 2],
        "i+1 word " + context[i + 1],
        "i+1 suffix " + context[i + 1][-3:],
        "i+2 word " + context[i + 2],
    ]
    return feats


class PerceptronTagger:
    """Averaged perceptron tagger (greedy left-to-right decoding)."""

    def __init__(self):
        self.weights: dict[str, dict[str, float]] = {}
        self.classes: list[str] = []
        self.tagdict: dict[str, str] = {}

    # -- prediction ----------------------------------------------------

    def _score(self, feats: list[str]) -> str:
        scores: dict[str, float] = defaultdict(float)
        for f in feats:
            w = self.weights.get(f)
            if w is None:
                continue
            for tag, weight in w.items():
                scores[tag] += weight
        if not scores:
            return self.classes[0] if self.classes else "NN"
        # Deterministic: highest score, ties broken alphabetically.
        return min(scores, key=lambda t: (-scores[t], t))

    def tag_sentence(self, surfaces: list[str]) -> list[str]:
        context = ["-S2-", "-S1-"] + [_normalize(s) for s in surfaces] + ["-E1-", "-E2-"]
        prev, prev2 = "-START-", "-START2-"
        tags = []
        for i, surface in enumerate(surfaces):
            tag = shape_tag(surface)
            if tag is None:
                tag = self.tagdict.get(surface.lower())
            if tag is None:
                tag = self._score(_features(i + 2, _normalize(surface), context, prev, prev2))
            tags.append(tag)
            prev2, prev = prev, tag
        return tags

    def tag(self, doc: TaggedDoc) -> TaggedDoc:
        tokens = []
        for a, b in doc.sentence_bounds:
            sent = [doc.tokens[i].surface for i in range(a, b)]
            for i, tag in zip(range(a, b), self.tag_sentence(sent)):
                tokens.append(doc.tokens[i].with_pos(tag))
        return TaggedDoc(tokens=tokens, sentence_bounds=list(doc.sentence_bounds))

    # -- training ------------------------------------------------------

    def train(self, sentences: list[list[tuple[str, str]]], epochs: int = 5,
              seed: int = 1, tagdict_min_freq: int = 10,
              tagdict_ambiguity: float = 0.97) -> None:
        """Train from ``(word, tag)`` sentences; deterministic for a seed."""
        self._make_tagdict(sentences, tagdict_min_freq, tagdict_ambiguity)
        self.classes = sorted({t for sent in sentences for _, t in sent})
        totals: dict[tuple[str, str], float] = defaultdict(float)
        tstamps: dict[tuple[str, str], int] = defaultdict(int)
        instances = 0
        rng = random.Random(seed)
        order = list(range(len(sentences)))
        for _ in range(epochs):
            rng.shuffle(order)
            for si in order:
                sent = sentences[si]
                surfaces = [w for w, _ in sent]
                context = ["-S2-", "-S1-"] + [_normalize(s) for s in surfaces] + ["-E1-", "-E2-"]
                prev, prev2 = "-START-", "-START2-"
                for i, (surface, gold) in enumerate(sent):
                    instances += 1
                    guess = shape_tag(surface) or self.tagdict.get(surface.lower())
                    if guess is None:
                        feats = _features(i + 2, _normalize(surface), context, prev, prev2)
                        guess = self._score(feats)
                        if guess != gold:
                            self._update(gold, guess, feats, totals, tstamps, instances)
                    prev2, prev = prev, guess
        self._average(totals, tstamps, instances)

    def _update(self, gold, guess, feats, totals, tstamps, instance):
        for f in feats:
            w = self.weights.setdefault(f, {})
            for tag, delta in ((gold, 1.0), (guess, -1.0)):
                key = (f, tag)
                totals[key] += (instance - tstamps[key]) * w.get(tag, 0.0)
                tstamps[key] = instance
                w[tag] = w.get(tag, 0.0) + delta

    def _average(self, totals, tstamps, instances):
        if not instances:
            return
        for f, w in self.weights.items():
            for tag in list(w):
                key = (f, tag)
                total = totals[key] + (instances - tstamps[key]) * w[tag]
                avg = round(total / instances, 6)
                if avg:
                    w[tag] = avg
                else:
                    del w[tag]

    def _make_tagdict(self, sentences, min_freq, ambiguity):
        counts: dict[str, Counter] = defaultdict(Counter)
        for sent in sentences:
            for word, tag in sent:
                counts[word.lower()][tag] += 1
        for word, tag_counts in counts.items():
            tag, mode = tag_counts.most_common(1)[0]
            n = sum(tag_counts.values())
            if n >= min_freq and mode / n >= ambiguity:
                self.tagdict[word] = tag

    # -- persistence ---------------------------------------------------

    def save(self, path: str | Path) -> None:
        payload = {
            "format_version": TAGGER_FORMAT_VERSION,
            "kind": "averaged_perceptron",
            "classes": self.classes,
            "tagdict": self.tagdict,
            "weights": self.weights,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PerceptronTagger":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise TaggerModelError(f"tagger model not found: {path}") from None
        except (OSError, json.JSONDecodeError) as exc:
            raise TaggerModelError(f"corrupt tagger model {path}: {exc}") from None
        if not isinstance(payload, dict) or payload.get("kind") != "averaged_perceptron":
            raise TaggerModelError(f"not a tagger model file: {path}")
        if payload.get("format_version") != TAGGER_FORMAT_VERSION:
            raise TaggerModelError(
                f"tagger model version {payload.get('format_version')!r} "
                f"unsupported (expected {TAGGER_FORMAT_VERSION})")
        tagger = cls()
        tagger.classes = list(payload["classes"])
        tagger.tagdict = dict(payload["tagdict"])
        tagger.weights = {f: dict(w) for f, w in payload["weights"].items()}
        return tagger


def load_tagged_corpus(path: str | Path) -> list[list[tuple[str, str]]]:
    """Read a tagger training corpus: one sentence per line, ``word_TAG`` tokens."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            sent = []
            for item in line.split():
                word, sep, tag = item.rpartition("_")
                if not sep or not word or not tag:
                    raise ValueError(f"{path}:{lineno}: bad token {item!r}")
                sent.append((word, tag))
            sentences.append(sent)
    return sentences


def pos_tag(doc: TaggedDoc, tagger: PerceptronTagger | LexiconTagger | None = None) -> TaggedDoc:
    """Tag every token; uses the lexicon fallback when no model is given."""
    return (tagger or LexiconTagger()).tag(doc)
