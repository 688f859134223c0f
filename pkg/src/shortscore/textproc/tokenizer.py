"""Regex word tokenizer and rule-based sentence splitter.

Tokens are maximal word / number / punctuation units; sentence boundaries
are placed after ``. ! ?`` when followed by whitespace and a capitalized
token, with an abbreviation guard so "Mr. Leonard" stays in one sentence.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)*|[0-9]+(?:\.[0-9]+)?|\S")
_SENT_END = {".", "!", "?"}

# Common abbreviations that take a trailing period without ending a sentence.
ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "eg",
    "ie", "cf", "fig", "al", "inc", "ltd", "co", "corp", "dept", "est",
    "approx", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
    "sept", "oct", "nov", "dec", "mt", "capt", "gen", "sen", "rep", "rev",
    "hon", "gov", "ave", "blvd", "min", "max", "no", "vol", "pp",
})


@dataclass(frozen=True)
class Token:
    surface: str
    sentence_index: int
    position: int
    lemma: str = ""
    pos: str = ""

    def with_pos(self, pos: str) -> "Token":
        return replace(self, pos=pos)

    def with_lemma(self, lemma: str) -> "Token":
        return replace(self, lemma=lemma)

    @property
    def is_word(self) -> bool:
        """True for word-like tokens (letters or digits), False for punctuation."""
        return bool(self.surface) and self.surface[0].isalnum()


@dataclass
class TaggedDoc:
    tokens: list[Token]
    sentence_bounds: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.tokens)

    def sentences(self) -> list[list[Token]]:
        return [self.tokens[a:b] for a, b in self.sentence_bounds]

    def word_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @staticmethod
    def empty() -> "TaggedDoc":
        return TaggedDoc(tokens=[], sentence_bounds=[])


def _guards_period(prev_surface: str | None) -> bool:
    if prev_surface is None:
        return False
    if len(prev_surface) == 1 and prev_surface.isalpha():
        return True  # initials: "J. Smith"
    return prev_surface.lower() in ABBREVIATIONS


def tokenize_and_split(text: str) -> TaggedDoc:
    """Tokenize ``text`` and mark sentence boundaries; pos/lemma stay unset."""
    matches = list(_TOKEN_RE.finditer(text))
    if not matches:
        return TaggedDoc.empty()

    boundary_after = [False] * len(matches)
    for i, m in enumerate(matches):
        tok = m.group()
        if tok not in _SENT_END:
            continue
        if tok == "." and _guards_period(matches[i - 1].group() if i else None):
            continue
        if i == len(matches) - 1:
            boundary_after[i] = True
            continue
        gap = text[m.end():matches[i + 1].start()]
        nxt = matches[i + 1].group()
        if gap.strip() == "" and gap != "" and nxt[:1].isupper():
            boundary_after[i] = True

    tokens: list[Token] = []
    bounds: list[tuple[int, int]] = []
    sent_start = 0
    sent_index = 0
    for i, m in enumerate(matches):
        tokens.append(Token(surface=m.group(), sentence_index=sent_index, position=i))
        if boundary_after[i]:
            bounds.append((sent_start, i + 1))
            sent_start = i + 1
            sent_index += 1
    if sent_start < len(tokens):
        bounds.append((sent_start, len(tokens)))
    return TaggedDoc(tokens=tokens, sentence_bounds=bounds)
