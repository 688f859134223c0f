"""Lexicon resources: stopwords, frequency-ranked difficulty levels, synonyms."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

N_DIFFICULTY_LEVELS = 20


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """One word per line; ``None`` loads the bundled English list."""
    if path is None:
        text = (importlib_resources.files("shortscore.data") / "stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def load_frequency_lexicon(path: str | Path) -> dict[str, float]:
    """``word<TAB>frequency`` (whitespace tolerated) per line."""
    freqs: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected word and frequency")
            word = parts[0].lower()
            if word not in freqs:
                freqs[word] = float(parts[1])
    return freqs


def load_synonyms(path: str | Path) -> dict[str, frozenset[str]]:
    """``word<TAB>syn1,syn2,...`` per line."""
    table: dict[str, frozenset[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            try:
                word, syns = line.split("\t")
            except ValueError:
                raise ValueError(f"{path}:{lineno}: expected word<TAB>synonyms") from None
            table[word.strip().lower()] = frozenset(
                s.strip().lower() for s in syns.split(",") if s.strip())
    return table


@dataclass(frozen=True)
class DifficultyLexicon:
    """word -> difficulty level in 1..20 (level 1 = most frequent words)."""

    levels: dict[str, int]

    def level(self, word: str) -> int | None:
        return self.levels.get(word.lower())

    @staticmethod
    def from_frequencies(freqs: dict[str, float],
                         n_levels: int = N_DIFFICULTY_LEVELS) -> "DifficultyLexicon":
        """Rank by descending frequency, cut into equal-population level bins."""
        ranked = sorted(freqs, key=lambda w: (-freqs[w], w))
        n = len(ranked)
        levels = {}
        for rank, word in enumerate(ranked):
            levels[word] = 1 + (rank * n_levels) // n if n else 1
        return DifficultyLexicon(levels=levels)

    @staticmethod
    def empty() -> "DifficultyLexicon":
        return DifficultyLexicon(levels={})
