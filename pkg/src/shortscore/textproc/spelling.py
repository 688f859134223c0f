"""Dictionary-based spelling normalization.

Only all-lowercase alphabetic tokens are corrected; capitalized words,
tokens with digits, and mixed-case strings (chemical formulas, proper
nouns) pass through untouched. Corrections pick the closest lexicon word
within Levenshtein distance 2, preferring distance 1, then higher corpus
frequency, then alphabetical order.
"""
from __future__ import annotations

from pathlib import Path

from .tokenizer import TaggedDoc

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (insert / delete / substitute)."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def load_word_list(path: str | Path) -> dict[str, float]:
    """Read a lexicon file: one word per line, optional frequency column."""
    words: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            word = parts[0].lower()
            freq = float(parts[1]) if len(parts) > 1 else 0.0
            if word not in words:
                words[word] = freq
    return words


def _edits1(word: str) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = {L + R[1:] for L, R in splits if R}
    replaces = {L + c + R[1:] for L, R in splits if R for c in _ALPHABET}
    inserts = {L + c + R for L, R in splits for c in _ALPHABET}
    transposes = {L + R[1] + R[0] + R[2:] for L, R in splits if len(R) > 1}
    return deletes | replaces | inserts | transposes


class SpellCorrector:
    """Corrects OOV lowercase words against a frequency-weighted lexicon."""

    def __init__(self, lexicon: dict[str, float]):
        if not lexicon:
            raise ValueError("spelling lexicon must be nonempty")
        self.lexicon = {w.lower(): f for w, f in lexicon.items()}
        self._cache: dict[str, str] = {}

    def _pick(self, candidates: set[str]) -> str:
        return min(candidates, key=lambda w: (-self.lexicon[w], w))

    def correct_word(self, word: str) -> str:
        if word in self.lexicon:
            return word
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        edits = _edits1(word)
        near = {w for w in edits if w in self.lexicon}
        # Norvig-style transposes are Levenshtein distance 2; re-score to keep
        # plain edit-distance semantics.
        dist1 = {w for w in near if levenshtein(word, w) == 1}
        if dist1:
            result = self._pick(dist1)
        else:
            dist2 = set(near)
            for e in edits:
                for w in _edits1(e):
                    if w in self.lexicon:
                        dist2.add(w)
            dist2 = {w for w in dist2 if levenshtein(word, w) <= 2}
            result = self._pick(dist2) if dist2 else word
        self._cache[word] = result
        return result

    def correct(self, doc: TaggedDoc) -> TaggedDoc:
        tokens = []
        for tok in doc.tokens:
            s = tok.surface
            if s.isalpha() and s.islower() and s not in self.lexicon:
                fixed = self.correct_word(s)
                tok = tok if fixed == s else type(tok)(
                    surface=fixed, sentence_index=tok.sentence_index,
                    position=tok.position, lemma=tok.lemma, pos=tok.pos)
            tokens.append(tok)
        return TaggedDoc(tokens=tokens, sentence_bounds=list(doc.sentence_bounds))


def correct_spelling(doc: TaggedDoc, lexicon: dict[str, float]) -> TaggedDoc:
    return SpellCorrector(lexicon).correct(doc)
