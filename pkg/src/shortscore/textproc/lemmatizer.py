"""POS-conditioned suffix-rule lemmatizer with an exception lexicon.

Rules handle regular plural nouns, verb inflections, and comparative /
superlative adjectives; the exception table takes precedence and covers
the common irregulars. Lemmas are always lowercased — downstream overlap
features are case-folded.
"""
from __future__ import annotations

from .tokenizer import TaggedDoc

_VOWELS = set("aeiou")

# (pos class, surface) -> lemma; checked before any suffix rule.
EXCEPTIONS: dict[tuple[str, str], str] = {}


def _add_exceptions(cls: str, pairs: dict[str, str]) -> None:
    for word, lemma in pairs.items():
        EXCEPTIONS[(cls, word)] = lemma


_add_exceptions("verb", {
    "was": "be", "were": "be", "been": "be", "being": "be", "is": "be",
    "are": "be", "am": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "went": "go", "gone": "go", "goes": "go",
    "said": "say", "made": "make", "got": "get", "gotten": "get",
    "took": "take", "taken": "take", "came": "come", "saw": "see",
    "seen": "see", "knew": "know", "known": "know", "thought": "think",
    "found": "find", "gave": "give", "given": "give", "told": "tell",
    "became": "become", "left": "leave", "felt": "feel", "brought": "bring",
    "began": "begin", "begun": "begin", "kept": "keep", "held": "hold",
    "wrote": "write", "written": "write", "stood": "stand", "heard": "hear",
    "meant": "mean", "met": "meet", "ran": "run", "won": "win",
    "sat": "sit", "spoke": "speak", "spoken": "speak", "lost": "lose",
    "paid": "pay", "chose": "choose", "chosen": "choose", "broke": "break",
    "broken": "break", "ate": "eat", "eaten": "eat", "fell": "fall",
    "fallen": "fall", "grew": "grow", "grown": "grow", "drew": "draw",
    "drawn": "draw", "threw": "throw", "thrown": "throw", "drove": "drive",
    "driven": "drive", "sent": "send", "built": "build", "spent": "spend",
    "caught": "catch", "taught": "teach", "bought": "buy", "sold": "sell",
    "read": "read", "led": "lead", "dying": "die", "lying": "lie",
    "tying": "tie", "says": "say",
})
_add_exceptions("noun", {
    "children": "child", "men": "man", "women": "woman", "people": "person",
    "feet": "foot", "teeth": "tooth", "mice": "mouse", "geese": "goose",
    "knives": "knife", "wives": "wife", "lives": "life", "leaves": "leaf",
    "shelves": "shelf", "halves": "half", "data": "datum", "media": "medium",
    "analyses": "analysis", "hypotheses": "hypothesis", "theses": "thesis",
    "crises": "crisis", "species": "species", "series": "series",
})
_add_exceptions("adj", {
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
    "further": "far", "farther": "far", "more": "much", "most": "much",
    "less": "little", "least": "little", "elder": "old", "eldest": "old",
})
_add_exceptions("adv", {
    "better": "well", "best": "well", "more": "much", "most": "much",
    "less": "little", "least": "little",
})


def _pos_class(pos: str) -> str | None:
    if pos.startswith("NN"):
        return "noun"
    if pos.startswith("VB") or pos == "MD":
        return "verb"
    if pos.startswith("JJ"):
        return "adj"
    if pos.startswith("RB"):
        return "adv"
    return None


def _fix_stem(stem: str) -> str:
    """Undo doubling ("runn" -> "run") or restore a dropped "e" ("tak" -> "take")."""
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS \
            and stem[-1] not in "lsz":
        return stem[:-1]
    # Short closed-syllable stems (optional consonants + one vowel + one
    # consonant) usually lost a silent "e": tak -> take, writ -> write.
    if len(stem) >= 2 and stem[-1] not in _VOWELS and stem[-1] not in "wxy" \
            and stem[-2] in _VOWELS and all(c not in _VOWELS for c in stem[:-2]):
        return stem + "e"
    return stem


def _noun_lemma(w: str) -> str:
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("xes", "ses", "zes", "ches", "shes")) and len(w) > 4:
        return w[:-2]
    if w.endswith("ves") and len(w) > 4:
        return w[:-3] + "f"
    if w.endswith("s") and len(w) > 3 and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


def _verb_lemma(w: str, pos: str) -> str:
    if pos == "VBZ":
        if w.endswith("ies") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith(("xes", "ses", "zes", "ches", "shes", "oes")) and len(w) > 4:
            return w[:-2]
        if w.endswith("s") and len(w) > 2 and not w.endswith("ss"):
            return w[:-1]
        return w
    if pos in ("VBD", "VBN"):
        if w.endswith("ied") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith("eed"):
            return w[:-1]
        if w.endswith("ed") and len(w) > 3:
            return _fix_stem(w[:-2])
        return w
    if pos == "VBG":
        if w.endswith("ing") and len(w) > 4:
            return _fix_stem(w[:-3])
        return w
    return w


def _adj_lemma(w: str) -> str:
    if w.endswith(("ier", "iest")) and len(w) > 4:
        return w[: w.rindex("i")] + "y"
    if w.endswith("est") and len(w) > 4:
        return _fix_stem(w[:-3])
    if w.endswith("er") and len(w) > 3:
        return _fix_stem(w[:-2])
    return w


def lemma_of(surface: str, pos: str,
             extra_exceptions: dict[tuple[str, str], str] | None = None) -> str:
    w = surface.lower()
    cls = _pos_class(pos)
    if cls is None:
        return w
    if extra_exceptions:
        hit = extra_exceptions.get((cls, w))
        if hit is not None:
            return hit
    hit = EXCEPTIONS.get((cls, w))
    if hit is not None:
        return hit
    if cls == "noun":
        return _noun_lemma(w) if pos in ("NNS", "NNPS") else w
    if cls == "verb":
        return _verb_lemma(w, pos)
    if cls in ("adj", "adv"):
        return _adj_lemma(w) if pos.endswith(("R", "S")) else w
    return w


def lemmatize(doc: TaggedDoc,
              extra_exceptions: dict[tuple[str, str], str] | None = None) -> TaggedDoc:
    """Set the lemma of every token from its POS tag; tags must be present."""
    tokens = [t.with_lemma(lemma_of(t.surface, t.pos, extra_exceptions))
              for t in doc.tokens]
    return TaggedDoc(tokens=tokens, sentence_bounds=list(doc.sentence_bounds))
